"""Brute-force reference for row stitch counts.

A row is unrolled into individual stitches and the effects summed one by
one. The effect table here is written out independently of the compiler's so
that the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Optional

from .core import Node, NodeKind, StitchEffect


@dataclass(frozen=True)
class FlatStitch:
    kind: NodeKind
    num: Optional[int] = None
    # stitches sharing a group id were worked into one active stitch
    group: Optional[int] = None


def _single(kind: NodeKind, n: int) -> tuple[int, int]:
    k = kind.value
    if k in ("K", "P", "KB", "PB", "KBelow", "PBelow", "S", "SK", "SP"):
        return 1, 0
    if k in ("YO", "M", "ML", "MR"):
        return 0, 1
    if k in ("KFB", "PFB"):
        return 1, 1
    if k in ("KT", "PT"):
        return n, 1 - n
    if k in ("SSK", "SSP"):
        return 2, -1
    if k == "PSSO":
        return 0, -1
    raise ValueError(f"not a stitch: {k}")


def _expr(expr: Optional[Node]) -> int:
    if expr is None:
        return 0
    total = 0
    for c in expr.children:
        if c.kind is not NodeKind.NAT_LITERAL:
            raise ValueError("expression still holds a variable")
        total += c.value
    return total


def _reps(node: Node) -> int:
    v = _expr(node.rep_count)
    return v if v > 1 else 1


def flatten_row(row: Node) -> list[FlatStitch]:
    """Row elements unrolled to single stitches. Undetermined repeats are
    refused since resolving them is the verifier's job."""
    groups = count()
    out: list[FlatStitch] = []

    def emit(node: Node, group: Optional[int]) -> None:
        kind = node.kind
        if kind is NodeKind.U_ST_REP:
            raise ValueError("undetermined repeats cannot be flattened")
        if kind is NodeKind.FIXED_ST_REP:
            for _ in range(_reps(node)):
                for c in node.children:
                    emit(c, group)
        elif kind is NodeKind.COMP_ST:
            for _ in range(_reps(node)):
                g = next(groups)
                for c in node.children:
                    emit(c, g)
        elif kind.is_stitch:
            num = _expr(node.num) if node.num is not None else None
            for _ in range(_reps(node)):
                out.append(FlatStitch(kind, num, group))

    for child in row.children:
        emit(child, None)
    return out


def sum_effects(flat: list[FlatStitch]) -> StitchEffect:
    worked = change = 0
    grouped: dict[int, list[int]] = {}
    for st in flat:
        w, c = _single(st.kind, st.num or 1)
        if st.group is None:
            worked += w
            change += c
        else:
            grouped.setdefault(st.group, []).append(w + c)
    for loops in grouped.values():
        # every loop made stays on the needle; the host stitch is used up
        worked += 1
        change += sum(loops) - 1
    return StitchEffect(worked, change)
