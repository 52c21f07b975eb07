import pytest

from purl.core import CompileContext, NodeKind
from purl.oracle import FlatStitch, flatten_row, sum_effects
from purl.parser import Parser


def row(src):
    return Parser(f"row : {src}.", CompileContext()).parse_row_def()


def kinds(flat):
    return [f.kind for f in flat]


def test_fixed_repeat_unrolls():
    K, P = NodeKind.KNIT, NodeKind.PURL
    assert kinds(flatten_row(row("[K, P] 3"))) == [K, P] * 3


def test_stitch_rep_unrolls():
    flat = flatten_row(row("K 2, K2T"))
    assert kinds(flat) == [NodeKind.KNIT, NodeKind.KNIT, NodeKind.KNIT_TOG]
    assert flat[2].num == 2


def test_compound_shares_one_stitch():
    flat = flatten_row(row("<K, P, K>"))
    assert len(flat) == 3
    assert len({f.group for f in flat}) == 1 and flat[0].group is not None
    assert sum_effects(flat).worked_st == 1


def test_compound_repeats_are_separate_groups():
    flat = flatten_row(row("<K, YO> 3"))
    assert len({f.group for f in flat}) == 3


def test_undetermined_refused():
    with pytest.raises(ValueError):
        flatten_row(row("*K; to end"))


def test_knit_row():
    e = sum_effects([FlatStitch(NodeKind.KNIT)] * 8)
    assert (e.worked_st, e.st_change) == (8, 0)


def test_decrease_and_yarn_over():
    e = sum_effects([FlatStitch(NodeKind.KNIT_TOG, 2), FlatStitch(NodeKind.YARN_OVER)])
    assert (e.worked_st, e.st_change) == (2, 0)


def test_empty():
    e = sum_effects([])
    assert (e.worked_st, e.st_change) == (0, 0)


def test_compound_three_knits_adds_two():
    e = sum_effects(flatten_row(row("<K, P, K>")))
    assert (e.worked_st, e.st_change) == (1, 2)
