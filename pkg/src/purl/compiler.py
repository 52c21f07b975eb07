"""The whole pipeline: parse, expand, verify, then render on demand."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import codegen
from .core import DEFAULT_EXPANSION_BUDGET, CompileContext, Diagnostic, Node, Severity, add_message
from .expander import expand
from .parser import parse
from .verifier import verify


@dataclass
class CompileResult:
    root: Node
    ctx: CompileContext
    # per-pass tree dumps, filled only when requested
    passes: list[dict] = field(default_factory=list)

    @property
    def messages(self) -> list[Diagnostic]:
        return self.ctx.messages

    @property
    def has_errors(self) -> bool:
        return self.ctx.has_errors

    def count(self, severity: Severity) -> int:
        return self.ctx.count(severity)

    def html(self) -> str:
        return codegen.write_html(self.root)

    def text(self) -> str:
        return codegen.write_text(self.root)


def compile_source(
    src: str,
    budget: int = DEFAULT_EXPANSION_BUDGET,
    trace: bool = False,
) -> CompileResult:
    ctx = CompileContext(expansion_budget=budget)
    root = parse(src, ctx)
    result = CompileResult(root, ctx)
    passes: list[Callable[[Node, CompileContext], None]] = [expand, verify]
    if trace:
        result.passes.append(root.to_dict())
    for run in passes:
        try:
            run(root, ctx)
        except RecursionError:
            # only reachable through absurdly deep nesting of row repeats
            add_message(ctx, Severity.ERROR, None, "Pattern is nested too deeply to process.")
            break
        if trace:
            result.passes.append(root.to_dict())
    return result


def compile_to_html(src: str) -> tuple[str, list[Diagnostic]]:
    res = compile_source(src)
    return res.html(), res.messages


def compile_to_text(src: str) -> tuple[str, list[Diagnostic]]:
    res = compile_source(src)
    return res.text(), res.messages


def format_messages(messages: Optional[list[Diagnostic]]) -> str:
    return "".join(m.format() + "\n" for m in messages or [])
