"""Hand-written scanner turning Purl source into Symbols."""

from __future__ import annotations

import re
import string
from typing import Iterator

from .core import KEYWORDS, PUNCTUATION, STITCH_PATTERNS, SourcePos, Symbol, SymbolKind

_DIGITS = frozenset(string.digits)
_LETTERS = frozenset(string.ascii_letters)
_ALNUM = _DIGITS | _LETTERS

_STITCH_RES = tuple((kind, re.compile(rf"^{pat}$")) for kind, pat in STITCH_PATTERNS)

# two-character punctuation: (first, second) -> kind
_DIGRAPHS = {
    ("*", "*"): SymbolKind.ROW_REP,
    ("<", "="): SymbolKind.LESS_EQ,
    (">", "="): SymbolKind.GREATER_EQ,
}


def classify_word(word: str) -> SymbolKind:
    """Kind of a letter-initial alphanumeric run: keyword, stitch or ident."""
    kw = KEYWORDS.get(word)
    if kw is not None:
        return kw
    for kind, rx in _STITCH_RES:
        if rx.match(word):
            return kind
    return SymbolKind.IDENT


class Lexer:
    def __init__(self, src: str) -> None:
        self.src = src or ""
        self._offset = 0
        self._line = 1
        self._line_start = 0
        self._last_pos = SourcePos()

    def _here(self) -> SourcePos:
        return SourcePos(self._line, self._offset - self._line_start, self._offset)

    def _peek(self, ahead: int = 0) -> str:
        i = self._offset + ahead
        return self.src[i] if i < len(self.src) else ""

    def _advance(self) -> None:
        if self.src[self._offset] == "\n":
            self._line += 1
            self._line_start = self._offset + 1
        self._offset += 1

    def current_pos(self) -> SourcePos:
        """Position of the most recent non-EOF symbol."""
        return self._last_pos

    def next_symbol(self) -> Symbol:
        src = self.src
        while self._offset < len(src) and src[self._offset].isspace():
            self._advance()

        pos = self._here()
        if self._offset >= len(src):
            return Symbol(SymbolKind.EOF, "", pos)
        self._last_pos = pos

        ch = src[self._offset]
        if ch == '"':
            self._advance()
            begin = self._offset
            while self._offset < len(src) and src[self._offset] != '"':
                self._advance()
            text = src[begin : self._offset]
            if self._offset < len(src):
                self._advance()
            return Symbol(SymbolKind.STRING, text, pos)

        if ch in _DIGITS:
            begin = self._offset
            while self._peek() in _DIGITS:
                self._advance()
            return Symbol(SymbolKind.NAT, src[begin : self._offset], pos)

        if ch in _LETTERS:
            begin = self._offset
            while self._peek() in _ALNUM:
                self._advance()
            word = src[begin : self._offset]
            return Symbol(classify_word(word), word, pos)

        kind = PUNCTUATION.get(ch)
        if kind is not None:
            self._advance()
            pair = _DIGRAPHS.get((ch, self._peek()))
            if pair is not None:
                self._advance()
                return Symbol(pair, pair.value, pos)
            return Symbol(kind, ch, pos)

        self._advance()
        return Symbol(SymbolKind.UNKNOWN, ch, pos)

    def __iter__(self) -> Iterator[Symbol]:
        while True:
            sym = self.next_symbol()
            yield sym
            if sym.kind is SymbolKind.EOF:
                return


def tokenize(src: str) -> list[Symbol]:
    """All symbols of src, ending with exactly one EOF."""
    return list(Lexer(src))
