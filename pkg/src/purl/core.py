"""Shared vocabulary for every compiler pass: symbols, nodes, diagnostics and
the per-compilation context."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True)
class SourcePos:
    line: int = 1  # 1-based
    col: int = 0  # 0-based column on the line
    offset: int = 0  # 0-based character offset into the input

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class SymbolKind(enum.Enum):
    # value classes
    NAT = "nat"
    IDENT = "ident"
    STRING = '"'
    ROW_REP = "**"
    LESS_EQ = "<="
    GREATER_EQ = ">="
    EOF = "!EOF"
    UNKNOWN = "?unknown"

    # reserved words
    PATTERN = "pattern"
    CAST_ON = "CO"
    PICK_UP = "PU"
    BIND_OFF = "BO"
    JOIN = "Join"
    CIRCULAR = "circular"
    PROVISIONAL = "provisional"
    SECTION = "section"
    SAMPLE = "sample"
    FROM = "from"
    TO = "to"
    LAST = "last"
    END = "end"
    ROW = "row"
    RND = "rnd"
    REPEAT = "repeat"
    WITH = "with"
    WYIF = "wyif"
    WYIB = "wyib"
    MC = "MC"
    CC = "CC"

    # punctuation
    COMMA = ","
    PERIOD = "."
    COLON = ":"
    SEMICOLON = ";"
    ASTERISK = "*"
    PLUS = "+"
    MINUS = "-"
    OPEN_PAREN = "("
    CLOSE_PAREN = ")"
    OPEN_BRACK = "["
    CLOSE_BRACK = "]"
    OPEN_ANGLE = "<"
    CLOSE_ANGLE = ">"
    BAR = "|"
    EQUAL = "="

    # stitches; values are the AST node kind names they produce
    KNIT = "st:K"
    PURL = "st:P"
    KNIT_TBL = "st:KB"
    PURL_TBL = "st:PB"
    KNIT_BELOW = "st:KBelow"
    PURL_BELOW = "st:PBelow"
    SLIP = "st:S"
    SLIP_KW = "st:SK"
    SLIP_PW = "st:SP"
    YARN_OVER = "st:YO"
    KNIT_FB = "st:KFB"
    PURL_FB = "st:PFB"
    MAKE = "st:M"
    MAKE_L = "st:ML"
    MAKE_R = "st:MR"
    KNIT_TOG = "st:KT"
    PURL_TOG = "st:PT"
    SSK = "st:SSK"
    SSP = "st:SSP"
    PSSO = "st:PSSO"

    @property
    def is_keyword(self) -> bool:
        return self in KEYWORDS.values()

    @property
    def is_punctuation(self) -> bool:
        return self in PUNCTUATION.values() or self in _COMPOSITE_PUNCTUATION

    @property
    def is_stitch(self) -> bool:
        return self.value.startswith("st:")


KEYWORDS: dict[str, SymbolKind] = {
    k.value: k
    for k in SymbolKind
    if k.name
    in (
        "PATTERN CAST_ON PICK_UP BIND_OFF JOIN CIRCULAR PROVISIONAL SECTION "
        "SAMPLE FROM TO LAST END ROW RND REPEAT WITH WYIF WYIB MC CC"
    ).split()
}

PUNCTUATION: dict[str, SymbolKind] = {
    k.value: k for k in SymbolKind if len(k.value) == 1 and k.value in ",.:;*+-()[]<>|="
}

_COMPOSITE_PUNCTUATION = frozenset(
    {SymbolKind.ROW_REP, SymbolKind.LESS_EQ, SymbolKind.GREATER_EQ}
)

# Anchored stitch patterns, tried in this order after the keyword table.
STITCH_PATTERNS: tuple[tuple[SymbolKind, str], ...] = (
    (SymbolKind.KNIT, r"K"),
    (SymbolKind.PURL, r"P"),
    (SymbolKind.KNIT_TBL, r"KB"),
    (SymbolKind.PURL_TBL, r"PB"),
    (SymbolKind.KNIT_BELOW, r"K[1-9][0-9]*B"),
    (SymbolKind.PURL_BELOW, r"P[1-9][0-9]*B"),
    (SymbolKind.SLIP, r"S"),
    (SymbolKind.SLIP_KW, r"SK"),
    (SymbolKind.SLIP_PW, r"SP"),
    (SymbolKind.YARN_OVER, r"YO"),
    (SymbolKind.KNIT_FB, r"KFB"),
    (SymbolKind.PURL_FB, r"PFB"),
    (SymbolKind.MAKE, r"M[1-9][0-9]*"),
    (SymbolKind.MAKE_L, r"M[1-9][0-9]*L"),
    (SymbolKind.MAKE_R, r"M[1-9][0-9]*R"),
    (SymbolKind.KNIT_TOG, r"K[1-9][0-9]*T"),
    (SymbolKind.PURL_TOG, r"P[1-9][0-9]*T"),
    (SymbolKind.SSK, r"SSK"),
    (SymbolKind.SSP, r"SSP"),
    (SymbolKind.PSSO, r"PSSO"),
)


@dataclass(frozen=True)
class Symbol:
    kind: SymbolKind
    text: str
    pos: SourcePos = SourcePos()

    @property
    def nat_value(self) -> int:
        return int(self.text)


class Side(enum.Enum):
    RS = "RS"
    WS = "WS"

    def flipped(self) -> Side:
        return Side.WS if self is Side.RS else Side.RS


class CoType(enum.Enum):
    FLAT = "flat"
    CIRCULAR = "circular"
    PROVISIONAL = "provisional"


class RowType(enum.Enum):
    ROW = "row"
    RND = "rnd"


class Color(enum.Enum):
    MC = "MC"
    CC = "CC"


class CompareType(enum.Enum):
    EQ = "eq"
    LT = "lt"
    LEQ = "leq"
    GT = "gt"
    GEQ = "geq"

    def apply(self, left: int, right: int) -> bool:
        if self is CompareType.EQ:
            return left == right
        if self is CompareType.LT:
            return left < right
        if self is CompareType.LEQ:
            return left <= right
        if self is CompareType.GT:
            return left > right
        return left >= right


class NodeKind(enum.Enum):
    ROOT = "Root"
    PATTERN = "Pattern"
    SECTION = "Section"
    CAST_ON = "CO"
    PICK_UP = "PU"
    BIND_OFF = "BO"
    JOIN = "Join"
    ROW = "Row"
    ROW_REP = "RowRepeat"
    SAMPLE_DEF = "SampleDef"
    SAMPLE_CALL = "SampleCall"
    FIXED_ST_REP = "FixedStRep"
    U_ST_REP = "UndeterminedStRep"
    COMP_ST = "CompSt"
    KNIT = "K"
    PURL = "P"
    KNIT_TBL = "KB"
    PURL_TBL = "PB"
    KNIT_BELOW = "KBelow"
    PURL_BELOW = "PBelow"
    SLIP = "S"
    SLIP_KW = "SK"
    SLIP_PW = "SP"
    YARN_OVER = "YO"
    KNIT_FB = "KFB"
    PURL_FB = "PFB"
    MAKE = "M"
    MAKE_L = "ML"
    MAKE_R = "MR"
    KNIT_TOG = "KT"
    PURL_TOG = "PT"
    SSK = "SSK"
    SSP = "SSP"
    PSSO = "PSSO"
    EXPRESSION = "expr"
    NAT_LITERAL = "NatLit"
    NAT_VARIABLE = "NatVar"
    CONDITION = "Condition"
    BRANCH = "Branch"
    # placeholder left where a production failed to parse
    INVALID = "Invalid"

    @property
    def is_stitch(self) -> bool:
        return self in STITCH_KINDS


STITCH_KINDS: frozenset[NodeKind] = frozenset(
    NodeKind[k.name] for k, _ in STITCH_PATTERNS
)

# Stitches whose lexeme carries an embedded number (the 2 in K2T).
NUMBERED_STITCHES: frozenset[NodeKind] = frozenset(
    {
        NodeKind.KNIT_BELOW,
        NodeKind.PURL_BELOW,
        NodeKind.MAKE,
        NodeKind.MAKE_L,
        NodeKind.MAKE_R,
        NodeKind.KNIT_TOG,
        NodeKind.PURL_TOG,
    }
)


@dataclass(frozen=True)
class StitchEffect:
    """Active stitches consumed from the previous row, and the signed change
    the stitch makes to the row width."""

    worked_st: int
    st_change: int


def stitch_effect(kind: NodeKind, num: int = 1) -> StitchEffect:
    if kind in (NodeKind.KNIT_TOG, NodeKind.PURL_TOG):
        return StitchEffect(num, -(num - 1))
    if kind in (NodeKind.SSK, NodeKind.SSP):
        return StitchEffect(2, -1)
    if kind is NodeKind.PSSO:
        return StitchEffect(0, -1)
    if kind in (NodeKind.YARN_OVER, NodeKind.MAKE, NodeKind.MAKE_L, NodeKind.MAKE_R):
        return StitchEffect(0, 1)
    if kind in (NodeKind.KNIT_FB, NodeKind.PURL_FB):
        return StitchEffect(1, 1)
    if kind in STITCH_KINDS:
        return StitchEffect(1, 0)
    raise ValueError(f"{kind} is not a stitch")


@dataclass(eq=False)
class Node:
    """One AST node. A single record type serves every node kind; fields that
    do not apply to a kind stay at their defaults."""

    kind: NodeKind
    pos: Optional[SourcePos] = None
    children: list[Node] = field(default_factory=list)
    value: int = 0
    name: Optional[str] = None
    origin: Optional[str] = None
    destination: Optional[str] = None
    co_type: Optional[CoType] = None
    row_type: Optional[RowType] = None
    color: Optional[Color] = None
    side: Optional[Side] = None
    num: Optional[Node] = None
    rep_count: Optional[Node] = None
    param_names: list[str] = field(default_factory=list)
    param_map: dict[str, Node] = field(default_factory=dict)
    args: list[Node] = field(default_factory=list)
    condition: Optional[Node] = None
    # Condition
    left: Optional[Node] = None
    right: Optional[Node] = None
    comparison: Optional[CompareType] = None
    do_branch: bool = False
    # Pattern / Section
    start: Optional[Node] = None
    finish: Optional[Node] = None
    # stitches
    worked_st: int = 0
    st_change: int = 0
    # verification annotations
    index: Optional[int] = None
    width: Optional[int] = None
    has_error_msg: bool = False
    has_warning_msg: bool = False
    has_verification_msg: bool = False

    @property
    def pattern(self) -> Optional[Node]:
        """The pattern of a Root node."""
        return self.children[0] if self.children else None

    def clone(self) -> Node:
        """Deep copy sharing no mutable structure with the original."""
        c = Node.__new__(Node)
        d = c.__dict__
        d.update(self.__dict__)
        d["children"] = [ch.clone() for ch in self.children]
        d["param_names"] = list(self.param_names)
        d["param_map"] = {k: v.clone() for k, v in self.param_map.items()} if self.param_map else {}
        d["args"] = [a.clone() for a in self.args]
        for attr in _SUBTREES:
            sub = d[attr]
            if sub is not None:
                d[attr] = sub.clone()
        return c

    def walk(self):
        """Yield this node and every node reachable from it, depth first."""
        yield self
        for attr in ("start", "condition", "left", "right", "num", "rep_count"):
            sub = getattr(self, attr)
            if sub is not None:
                yield from sub.walk()
        for a in self.args:
            yield from a.walk()
        for v in self.param_map.values():
            yield from v.walk()
        for ch in self.children:
            yield from ch.walk()
        if self.finish is not None:
            yield from self.finish.walk()

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready dump that omits empty and default-valued fields."""
        out: dict[str, Any] = {"type": self.kind.value}
        for name, default in _DUMP_DEFAULTS:
            val = getattr(self, name)
            if val == default:
                continue
            if isinstance(val, Node):
                val = val.to_dict()
            elif isinstance(val, enum.Enum):
                val = val.value
            elif isinstance(val, SourcePos):
                val = {"line": val.line, "col": val.col, "offset": val.offset}
            elif isinstance(val, dict):
                val = {k: v.to_dict() for k, v in val.items()}
            elif isinstance(val, list) and val and isinstance(val[0], Node):
                val = [v.to_dict() for v in val]
            out[name] = val
        return out


_SUBTREES = ("num", "rep_count", "condition", "left", "right", "start", "finish")

_DUMP_DEFAULTS: tuple[tuple[str, Any], ...] = (
    ("name", None),
    ("value", 0),
    ("origin", None),
    ("destination", None),
    ("co_type", None),
    ("row_type", None),
    ("color", None),
    ("side", None),
    ("index", None),
    ("width", None),
    ("worked_st", 0),
    ("st_change", 0),
    ("num", None),
    ("rep_count", None),
    ("param_names", []),
    ("param_map", {}),
    ("args", []),
    ("condition", None),
    ("left", None),
    ("comparison", None),
    ("right", None),
    ("do_branch", False),
    ("start", None),
    ("children", []),
    ("finish", None),
    ("has_error_msg", False),
    ("has_warning_msg", False),
    ("has_verification_msg", False),
    ("pos", None),
)


def literal_expr(value: int, pos: Optional[SourcePos] = None) -> Node:
    return Node(
        NodeKind.EXPRESSION,
        pos=pos,
        value=value,
        children=[Node(NodeKind.NAT_LITERAL, pos=pos, value=value)],
    )


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    VERIFICATION = "verification"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    section_name: Optional[str] = None
    row_index: Optional[int] = None
    pos: Optional[SourcePos] = None

    def format(self) -> str:
        parts = []
        if self.section_name:
            parts.append(f"Section: '{self.section_name}'")
        if self.row_index:
            parts.append(f"Row: {self.row_index}")
        if self.pos is not None:
            parts.append(f"Line: {self.pos.line}:{self.pos.col}")
        parts.append(self.message)
        return f"{self.severity.value}: " + ", ".join(parts)


DEFAULT_EXPANSION_BUDGET = 10_000


@dataclass
class CompileContext:
    section_name: Optional[str] = None
    samples: dict[str, Node] = field(default_factory=dict)
    messages: list[Diagnostic] = field(default_factory=list)
    side: Side = Side.RS
    width: int = 0
    row_index: int = 0
    pos: Optional[SourcePos] = None
    expansion_budget: int = DEFAULT_EXPANSION_BUDGET

    def count(self, severity: Severity) -> int:
        return sum(1 for m in self.messages if m.severity is severity)

    @property
    def has_errors(self) -> bool:
        return self.count(Severity.ERROR) > 0


_FLAG = {
    Severity.ERROR: "has_error_msg",
    Severity.WARNING: "has_warning_msg",
    Severity.VERIFICATION: "has_verification_msg",
}


def add_message(ctx: CompileContext, severity: Severity, node: Optional[Node], message: str) -> None:
    ctx.messages.append(
        Diagnostic(
            severity=severity,
            message=message,
            section_name=ctx.section_name,
            row_index=ctx.row_index,
            pos=ctx.pos,
        )
    )
    if node is not None:
        setattr(node, _FLAG[severity], True)
