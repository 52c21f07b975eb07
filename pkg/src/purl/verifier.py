"""Pass 3: thread side, width and row index through the expanded tree and
report stitch-count mismatches."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import CompileContext, Node, NodeKind, RowType, Severity, Side, add_message


@dataclass
class RowState:
    initial_width: int = 0
    worked_st: int = 0
    st_change: int = 0


def evaluate_expression(node: Optional[Node], ctx: Optional[CompileContext] = None) -> int:
    """Sum of the expression's literals; stored on node.value."""
    if node is None:
        return 0
    total = 0
    for child in node.children:
        if child.kind is NodeKind.NAT_LITERAL:
            total += child.value
        elif ctx is not None:
            add_message(ctx, Severity.ERROR, node, f"Unbound variable {child.name}.")
    node.value = total
    return total


class Verifier:
    def __init__(self, ctx: CompileContext) -> None:
        self.ctx = ctx

    def _at(self, node: Node) -> None:
        if node.pos is not None:
            self.ctx.pos = node.pos

    def verify(self, node: Optional[Node]) -> None:
        if node is None:
            return
        kind = node.kind
        if kind is NodeKind.ROOT:
            self.ctx.section_name = None
            for child in node.children:
                self.verify(child)
        elif kind is NodeKind.PATTERN:
            self.verify(node.start)
            for child in node.children:
                self.verify(child)
            self.verify(node.finish)
        elif kind is NodeKind.SECTION:
            self.ctx.section_name = node.name
            self.verify(node.start)
            for child in node.children:
                self.verify(child)
            self.verify(node.finish)
        elif kind in (NodeKind.CAST_ON, NodeKind.PICK_UP):
            self.verify_start(node)
        elif kind is NodeKind.ROW:
            self.verify_row(node)
        elif kind is NodeKind.ROW_REP:
            self.verify_row_repeat(node)
        elif kind is NodeKind.BIND_OFF:
            self.verify_bind_off(node)
        elif kind is NodeKind.JOIN:
            self.verify_join(node)
        elif kind is NodeKind.EXPRESSION:
            evaluate_expression(node, self.ctx)

    def verify_start(self, node: Node) -> None:
        ctx = self.ctx
        ctx.side = Side.RS
        ctx.width = node.value
        ctx.row_index = 1

    def verify_row(self, node: Node) -> None:
        ctx = self.ctx
        self._at(node)
        # a row inside a row repeat is visited once per repetition; the
        # annotations and messages describe its first pass
        first = node.index is None
        if first:
            node.index = ctx.row_index
            node.side = ctx.side
        state = RowState(initial_width=ctx.width)
        for child in node.children:
            self.verify_row_elem(child, state)
        self._at(node)
        quiet = not first and node.has_verification_msg
        if state.worked_st != ctx.width and not quiet:
            add_message(
                ctx, Severity.VERIFICATION, node, f"{state.worked_st} sts worked over {ctx.width} sts."
            )
        width = state.worked_st + state.st_change
        if width < 0:
            if not quiet:
                add_message(
                    ctx, Severity.VERIFICATION, node, f"Row width becomes negative ({width} sts)."
                )
            width = 0
        if first:
            node.width = width
        ctx.width = width
        if node.row_type is RowType.ROW:
            ctx.side = ctx.side.flipped()
        ctx.row_index += 1

    def verify_row_repeat(self, node: Node) -> None:
        rep = max(1, evaluate_expression(node.rep_count, self.ctx))
        for _ in range(rep):
            for child in node.children:
                self.verify(child)

    def _rep(self, node: Node) -> int:
        value = evaluate_expression(node.rep_count, self.ctx) if node.rep_count is not None else 0
        return value if value > 1 else 1

    def verify_row_elem(self, node: Node, parent: RowState) -> None:
        ctx = self.ctx
        rep = self._rep(node)
        num = evaluate_expression(node.num, ctx) if node.num is not None else None
        kind = node.kind

        if kind is NodeKind.FIXED_ST_REP:
            child = RowState(initial_width=parent.initial_width)
            for c in node.children:
                self.verify_row_elem(c, child)
            parent.worked_st += child.worked_st * rep
            parent.st_change += child.st_change * rep

        elif kind is NodeKind.U_ST_REP:
            child = RowState(initial_width=parent.initial_width)
            for c in node.children:
                self.verify_row_elem(c, child)
            self._at(node)
            st_to_work = parent.initial_width - parent.worked_st - (num or 0)
            if st_to_work < 0:
                add_message(
                    ctx,
                    Severity.VERIFICATION,
                    node,
                    f"Repeat needs {-st_to_work} more sts than remain in the row.",
                )
                rep = 0
            elif child.worked_st == 0:
                if st_to_work > 0:
                    add_message(
                        ctx,
                        Severity.VERIFICATION,
                        node,
                        f"Repeat works no stitches and cannot cover the remaining {st_to_work} sts.",
                    )
                rep = 0
            else:
                rep, remainder = divmod(st_to_work, child.worked_st)
                if remainder:
                    add_message(
                        ctx,
                        Severity.VERIFICATION,
                        node,
                        f"{remainder} st will remain after the last possible repeat.",
                    )
            parent.worked_st += child.worked_st * rep
            parent.st_change += child.st_change * rep

        elif kind is NodeKind.COMP_ST:
            child = RowState(initial_width=parent.initial_width)
            for c in node.children:
                self.verify_row_elem(c, child)
            # all loops made in one active stitch, less the one consumed
            parent.worked_st += rep
            parent.st_change += (child.worked_st + child.st_change - 1) * rep

        elif kind.is_stitch:
            parent.worked_st += node.worked_st * rep
            parent.st_change += node.st_change * rep

    def verify_bind_off(self, node: Node) -> None:
        self._at(node)
        if node.value != self.ctx.width:
            add_message(
                self.ctx,
                Severity.VERIFICATION,
                node,
                f"Binding off {node.value} sts over {self.ctx.width} sts.",
            )

    def verify_join(self, node: Node) -> None:
        self._at(node)
        if node.value != self.ctx.width:
            add_message(
                self.ctx,
                Severity.VERIFICATION,
                node,
                f"Joining {node.value} sts of {self.ctx.width} sts.",
            )


def verify(root: Node, ctx: CompileContext) -> None:
    Verifier(ctx).verify(root)


def verify_row_elem(node: Node, parent: RowState, ctx: CompileContext) -> None:
    Verifier(ctx).verify_row_elem(node, parent)
