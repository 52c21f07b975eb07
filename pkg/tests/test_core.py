import re

import pytest

from conftest import corpus_files
from purl import compile_source, format_messages
from purl.core import (
    KEYWORDS,
    PUNCTUATION,
    STITCH_PATTERNS,
    CompareType,
    CompileContext,
    Diagnostic,
    Node,
    NodeKind,
    Severity,
    Side,
    SourcePos,
    SymbolKind,
    add_message,
    literal_expr,
    stitch_effect,
)
from purl.lexer import classify_word


def test_add_message_error_sets_flag():
    ctx = CompileContext(section_name="Body", row_index=3, pos=SourcePos(2, 4, 10))
    node = Node(NodeKind.CAST_ON)
    add_message(ctx, Severity.ERROR, node, "Missing cast-on count.")
    (msg,) = ctx.messages
    assert msg.severity is Severity.ERROR
    assert msg.message == "Missing cast-on count."
    assert (msg.section_name, msg.row_index, msg.pos) == ("Body", 3, SourcePos(2, 4, 10))
    assert node.has_error_msg and not node.has_warning_msg


def test_add_message_verification_sets_flag():
    ctx = CompileContext()
    row = Node(NodeKind.ROW)
    add_message(ctx, Severity.VERIFICATION, row, "19 sts worked over 20 sts.")
    assert row.has_verification_msg
    assert ctx.count(Severity.VERIFICATION) == 1


def test_add_message_empty_text_kept():
    ctx = CompileContext()
    node = Node(NodeKind.ROW)
    add_message(ctx, Severity.WARNING, node, "")
    assert ctx.messages[0].message == ""
    assert node.has_warning_msg


def test_add_message_snapshot_is_not_live():
    ctx = CompileContext(section_name="A")
    add_message(ctx, Severity.WARNING, None, "x")
    ctx.section_name = "B"
    assert ctx.messages[0].section_name == "A"


def test_diagnostic_format_field_order():
    d = Diagnostic(Severity.VERIFICATION, "19 sts worked over 20 sts.", "Body", 2, SourcePos(4, 0, 30))
    assert d.format() == "verification: Section: 'Body', Row: 2, Line: 4:0, 19 sts worked over 20 sts."
    assert Diagnostic(Severity.ERROR, "oops").format() == "error: oops"


def test_rendered_enum_tokens():
    assert [s.value for s in Side] == ["RS", "WS"]
    assert SymbolKind.CIRCULAR.value == "circular"
    assert SymbolKind.PROVISIONAL.value == "provisional"
    assert SymbolKind.MC.value == "MC" and SymbolKind.CC.value == "CC"


@pytest.mark.parametrize(
    "op,left,right,expected",
    [
        (CompareType.EQ, 1, 1, True),
        (CompareType.LT, 23, 23, False),
        (CompareType.LEQ, 10, 10, True),
        (CompareType.GT, 13, 10, True),
        (CompareType.GEQ, 0, 1, False),
    ],
)
def test_compare_apply(op, left, right, expected):
    assert op.apply(left, right) is expected


@pytest.mark.parametrize(
    "kind,num,effect",
    [
        (NodeKind.KNIT, 1, (1, 0)),
        (NodeKind.YARN_OVER, 1, (0, 1)),
        (NodeKind.KNIT_FB, 1, (1, 1)),
        (NodeKind.MAKE_L, 1, (0, 1)),
        (NodeKind.KNIT_TOG, 2, (2, -1)),
        (NodeKind.PURL_TOG, 3, (3, -2)),
        (NodeKind.SSP, 1, (2, -1)),
        (NodeKind.PSSO, 1, (0, -1)),
    ],
)
def test_stitch_effect(kind, num, effect):
    e = stitch_effect(kind, num)
    assert (e.worked_st, e.st_change) == effect
    assert e.worked_st >= 0


def test_stitch_effect_rejects_non_stitch():
    with pytest.raises(ValueError):
        stitch_effect(NodeKind.ROW)


def test_symbol_classes_are_disjoint():
    stitches = {k for k in SymbolKind if k.is_stitch}
    keywords = set(KEYWORDS.values())
    punct = set(PUNCTUATION.values())
    assert len(stitches) == 20
    assert len(keywords) == 21
    assert len(punct) == 15
    assert not (stitches & keywords or stitches & punct or keywords & punct)
    for kind in SymbolKind:
        assert sum([kind.is_stitch, kind.is_keyword, kind in punct]) <= 1


_REPRESENTATIVES = {
    "K": "K", "P": "P", "KB": "KB", "PB": "PB", "K[1-9][0-9]*B": "K12B",
    "P[1-9][0-9]*B": "P3B", "S": "S", "SK": "SK", "SP": "SP", "YO": "YO",
    "KFB": "KFB", "PFB": "PFB", "M[1-9][0-9]*": "M1", "M[1-9][0-9]*L": "M2L",
    "M[1-9][0-9]*R": "M10R", "K[1-9][0-9]*T": "K2T", "P[1-9][0-9]*T": "P3T",
    "SSK": "SSK", "SSP": "SSP", "PSSO": "PSSO",
}


def test_classification_totality():
    # every keyword classifies as itself and matches no stitch pattern
    for word, kind in KEYWORDS.items():
        assert classify_word(word) is kind
        assert not any(re.fullmatch(p, word) for _, p in STITCH_PATTERNS)
    # each stitch representative matches exactly one pattern
    for kind, pat in STITCH_PATTERNS:
        word = _REPRESENTATIVES[pat]
        hits = [k for k, p in STITCH_PATTERNS if re.fullmatch(p, word)]
        assert hits == [kind]
        assert classify_word(word) is kind


def test_node_clone_is_independent():
    row = Node(NodeKind.ROW, children=[Node(NodeKind.KNIT, rep_count=literal_expr(3))])
    copy = row.clone()
    copy.children[0].rep_count.children[0].value = 9
    copy.children.append(Node(NodeKind.PURL))
    assert row.children[0].rep_count.children[0].value == 3
    assert len(row.children) == 1


def test_literal_expr():
    e = literal_expr(30)
    assert e.kind is NodeKind.EXPRESSION and e.value == 30
    assert [c.kind for c in e.children] == [NodeKind.NAT_LITERAL]


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_diagnostics_deterministic(path):
    src = path.read_text(encoding="utf-8")
    assert format_messages(compile_source(src).messages) == format_messages(
        compile_source(src).messages
    )


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_verification_messages_carry_row_or_finish(path):
    res = compile_source(path.read_text(encoding="utf-8"))
    for m in res.messages:
        if m.severity is Severity.VERIFICATION:
            assert m.row_index or m.message.startswith(("Binding off", "Joining"))
