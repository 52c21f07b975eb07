"""Back end: standard knitting notation as an HTML fragment or plain text.

Both formats come from one writer. The backend only decides how a block
(div), an inline run (span) and user text are spelled, so the text output is
the HTML output with its tags taken away.
"""

from __future__ import annotations

import enum
import html
import re
from typing import Optional

from .core import CoType, Color, Node, NodeKind, RowType


class CssClass(str, enum.Enum):
    PATTERN = "pattern"
    PATTERN_NAME = "patternname"
    SECTION = "section"
    SECTION_NAME = "sectionname"
    CAST_ON = "caston"
    PICK_UP = "pickup"
    BODY = "body"
    ROW = "row"
    ROW_REP = "rowrepeat"
    STITCH_COUNT = "stitchcount"
    STITCH = "stitch"
    BIND_OFF = "bindoff"
    JOIN = "join"
    ERROR = "error"
    WARNING = "warning"
    VERIFICATION = "verification"


class HtmlBackend:
    def block(self, cls: CssClass, inner: str) -> str:
        return f'<div class="{cls.value}">{inner}</div>'

    def inline(self, cls: CssClass, inner: str) -> str:
        return f'<span class="{cls.value}">{inner}</span>'

    def text(self, s: Optional[str]) -> str:
        return html.escape(s or "", quote=False)

    def finish(self, out: str) -> str:
        return out


class TextBackend:
    def block(self, cls: CssClass, inner: str) -> str:
        return f"\n{inner}\n"

    def inline(self, cls: CssClass, inner: str) -> str:
        return inner

    def text(self, s: Optional[str]) -> str:
        return s or ""

    def finish(self, out: str) -> str:
        lines = (line.strip() for line in out.split("\n"))
        body = "\n".join(line for line in lines if line)
        return body + "\n" if body else ""


_SIMPLE_STITCH = {
    NodeKind.KNIT: "K{rep}",
    NodeKind.PURL: "P{rep}",
    NodeKind.KNIT_TBL: "K{rep} tbl",
    NodeKind.PURL_TBL: "P{rep} tbl",
    NodeKind.KNIT_BELOW: "K{num}B{rep}",
    NodeKind.PURL_BELOW: "P{num}B{rep}",
    NodeKind.SLIP: "sl{rep}",
    NodeKind.SLIP_KW: "sl{rep}k",
    NodeKind.SLIP_PW: "sl{rep}p",
    NodeKind.YARN_OVER: "yo{rep}",
}

# these print their repeat count as a separate word after the stitch
_WORD_STITCH = {
    NodeKind.KNIT_FB: "KFB",
    NodeKind.PURL_FB: "PFB",
    NodeKind.MAKE: "M{num}",
    NodeKind.MAKE_L: "M{num}L",
    NodeKind.MAKE_R: "M{num}R",
    NodeKind.KNIT_TOG: "k{num}tog",
    NodeKind.PURL_TOG: "p{num}tog",
    NodeKind.SSK: "ssk",
    NodeKind.SSP: "ssp",
    NodeKind.PSSO: "psso",
}


def _value(expr: Optional[Node]) -> Optional[int]:
    return None if expr is None else expr.value


class Writer:
    def __init__(self, backend) -> None:
        self.b = backend

    def render(self, node: Optional[Node]) -> str:
        return self.b.finish(self.write_node(node))

    def markers(self, node: Node) -> str:
        out = []
        if node.has_error_msg:
            out.append(self.b.inline(CssClass.ERROR, "!"))
        if node.has_warning_msg:
            out.append(self.b.inline(CssClass.WARNING, "!"))
        if node.has_verification_msg:
            out.append(self.b.inline(CssClass.VERIFICATION, "!"))
        return "".join(out)

    def write_node(self, node: Optional[Node]) -> str:
        if node is None:
            return ""
        kind = node.kind
        if kind is NodeKind.ROOT:
            body = self.write_node(node.pattern)
        elif kind is NodeKind.PATTERN:
            body = self.write_pattern(node)
        elif kind is NodeKind.SECTION:
            body = self.write_section(node)
        elif kind is NodeKind.CAST_ON:
            body = self.write_cast_on(node)
        elif kind is NodeKind.PICK_UP:
            body = self.write_pick_up(node)
        elif kind is NodeKind.BIND_OFF:
            body = self.write_bind_off(node)
        elif kind is NodeKind.JOIN:
            body = self.write_join(node)
        elif kind is NodeKind.ROW:
            body = self.write_row(node)
        elif kind is NodeKind.ROW_REP:
            body = self.write_row_repeat(node)
        elif kind is NodeKind.FIXED_ST_REP:
            body = self.write_fixed_rep(node)
        elif kind is NodeKind.U_ST_REP:
            body = self.write_undetermined_rep(node)
        elif kind is NodeKind.COMP_ST:
            body = self.write_compound(node)
        elif kind.is_stitch:
            body = self.write_basic_stitch(node)
        else:
            body = ""
        return self.markers(node) + body

    # structure

    def write_pattern(self, node: Node) -> str:
        parts = [self.b.block(CssClass.PATTERN_NAME, self.b.text(node.name))]
        if node.start is not None:
            parts.append(self.write_node(node.start))
            parts.append(self.write_body(node))
            parts.append(self.write_node(node.finish))
        else:
            parts.extend(self.write_node(c) for c in node.children)
        return self.b.block(CssClass.PATTERN, "".join(parts))

    def write_section(self, node: Node) -> str:
        parts = [
            self.b.block(CssClass.SECTION_NAME, self.b.text(node.name)),
            self.write_node(node.start),
            self.write_body(node),
            self.write_node(node.finish),
        ]
        return self.b.block(CssClass.SECTION, "".join(parts))

    def write_body(self, node: Node) -> str:
        return self.b.block(CssClass.BODY, "".join(self.write_node(c) for c in node.children))

    def write_cast_on(self, node: Node) -> str:
        co = f" {node.co_type.value}" if node.co_type not in (None, CoType.FLAT) else ""
        return self.b.block(CssClass.CAST_ON, f"Cast-on {node.value} sts{co}.")

    def write_pick_up(self, node: Node) -> str:
        return self.b.block(
            CssClass.PICK_UP, f"Pick-up {node.value} sts from {self.b.text(node.origin)}."
        )

    def write_bind_off(self, node: Node) -> str:
        return self.b.block(CssClass.BIND_OFF, f"Bind-off  {node.value} sts.")

    def write_join(self, node: Node) -> str:
        return self.b.block(
            CssClass.JOIN, f"Join  {node.value} sts to {self.b.text(node.destination)}."
        )

    def write_row_repeat(self, node: Node) -> str:
        count = _value(node.rep_count) or 0
        inner = "**" + self.write_body(node) + f"rep from ** {count} times"
        return self.b.block(CssClass.ROW_REP, inner)

    # rows

    def _elements(self, node: Node) -> str:
        parts = (self.write_node(c) for c in node.children)
        return ", ".join(p for p in parts if p)

    def write_row(self, node: Node) -> str:
        tokens = ["Row" if node.row_type is RowType.ROW else "Rnd"]
        if node.index is not None:
            tokens.append(str(node.index))
        if node.color is Color.MC:
            tokens.append("(MC)")
        elif node.color is Color.CC:
            tokens.append("(CC)")
        if node.side is not None:
            tokens.append(f"({node.side.value}):")
        else:
            tokens[-1] += ":"
        tokens.append(self._elements(node) + ".")
        width = node.width if node.width is not None else 0
        tokens.append(self.b.inline(CssClass.STITCH_COUNT, f"({width} sts)"))
        return self.b.block(CssClass.ROW, " ".join(tokens))

    def write_basic_stitch(self, node: Node) -> str:
        value = _value(node.rep_count)
        rep = str(value) if value is not None and value > 1 else ""
        num = _value(node.num)
        num = str(num) if num else ""
        template = _SIMPLE_STITCH.get(node.kind)
        if template is not None:
            return self.b.inline(CssClass.STITCH, template.format(rep=rep, num=num))
        out = self.b.inline(CssClass.STITCH, _WORD_STITCH[node.kind].format(num=num))
        return f"{out} {rep}" if rep else out

    def write_fixed_rep(self, node: Node) -> str:
        return f"[{self._elements(node)}] {_value(node.rep_count) or 0} times"

    def write_undetermined_rep(self, node: Node) -> str:
        rem = _value(node.num) or 0
        if rem == 0:
            tail = "end"
        elif rem == 1:
            tail = "last 1 st"
        elif rem > 1:
            tail = f"last {rem} sts"
        else:
            tail = "invalid value"
        return f"*{self._elements(node)}; rep from * to {tail}"

    def write_compound(self, node: Node) -> str:
        parts = [f"({self._elements(node)})"]
        value = _value(node.rep_count)
        if value is not None and value > 1:
            parts.append(f"{value} times ")
        parts.append("in next st")
        return " ".join(parts)


def write_html(node: Optional[Node]) -> str:
    """HTML fragment for a verified tree."""
    return Writer(HtmlBackend()).render(node)


def write_text(node: Optional[Node]) -> str:
    """Plain-text rendering, one block per line."""
    return Writer(TextBackend()).render(node)


_TAG = re.compile(r"<[^>]*>")


def strip_tags(fragment: str) -> str:
    return html.unescape(_TAG.sub("", fragment))
