"""Purl: a compiler for knitting patterns."""

from .compiler import CompileResult, compile_source, format_messages
from .core import CompileContext, Diagnostic, Node, NodeKind, Severity, SymbolKind
from .lexer import Lexer, tokenize
from .parser import parse

__all__ = [
    "CompileContext",
    "CompileResult",
    "Diagnostic",
    "Lexer",
    "Node",
    "NodeKind",
    "Severity",
    "SymbolKind",
    "compile_source",
    "format_messages",
    "parse",
    "tokenize",
]
