"""Pass 1: recursive-descent construction of the syntax tree.

Recovery follows three rules. A likely typo of an expected character (``;``
for ``:``, ``:`` for ``;``, ``,`` for ``.``, ``.`` for ``,``, ``*`` for
``**``) or an identifier where a keyword belongs is reported as a warning and
parsing carries on as if the expected symbol had been seen. Any other
unexpected symbol is an error, after which the parser skips ahead to the
terminator of the current production (or of its parent, where siblings have
no reliable delimiter) and resumes there.
"""

from __future__ import annotations

from typing import Optional

from .core import (
    CoType,
    Color,
    CompareType,
    CompileContext,
    Node,
    NodeKind,
    RowType,
    Severity,
    Symbol,
    SymbolKind,
    add_message,
    literal_expr,
    stitch_effect,
    NUMBERED_STITCHES,
)
from .lexer import Lexer

S = SymbolKind

_COMPARATORS = {
    S.EQUAL: CompareType.EQ,
    S.OPEN_ANGLE: CompareType.LT,
    S.LESS_EQ: CompareType.LEQ,
    S.CLOSE_ANGLE: CompareType.GT,
    S.GREATER_EQ: CompareType.GEQ,
}

_EXPR_START = (S.NAT, S.IDENT)

# where a broken expression with no explicit terminator gives up
_EXPR_STOP = (S.COMMA, S.PERIOD, S.SEMICOLON, S.COLON, S.CLOSE_BRACK, S.CLOSE_ANGLE)


class Parser:
    def __init__(self, src: str, ctx: Optional[CompileContext] = None) -> None:
        self.ctx = ctx if ctx is not None else CompileContext()
        self.lexer = Lexer(src)
        self._ahead: Optional[Symbol] = None
        self.sym: Symbol = self.lexer.next_symbol()
        self._sync_pos()

    # -- symbol plumbing -------------------------------------------------

    def _sync_pos(self) -> None:
        if self.sym.kind is not S.EOF:
            self.ctx.pos = self.sym.pos

    def advance(self) -> None:
        if self._ahead is not None:
            self.sym, self._ahead = self._ahead, None
        else:
            self.sym = self.lexer.next_symbol()
        self._sync_pos()

    def peek(self) -> Symbol:
        if self._ahead is None:
            self._ahead = self.lexer.next_symbol()
        return self._ahead

    def at(self, *kinds: SymbolKind) -> bool:
        return self.sym.kind in kinds

    def scan_to(self, *kinds: SymbolKind) -> None:
        """Skip symbols until one of kinds (or EOF) is current."""
        while self.sym.kind not in kinds and self.sym.kind is not S.EOF:
            self.advance()

    def error(self, node: Optional[Node], msg: str) -> None:
        add_message(self.ctx, Severity.ERROR, node, msg)

    def warning(self, node: Optional[Node], msg: str) -> None:
        add_message(self.ctx, Severity.WARNING, node, msg)

    def unexpected(self, node: Node) -> None:
        sym = self.sym
        if sym.kind is S.IDENT:
            self.error(node, f"Invalid use of ident {sym.text}.")
        elif sym.kind.is_keyword:
            self.error(node, f"Invalid use of keyword {sym.text}.")
        elif sym.kind.is_punctuation:
            self.error(node, f"Invalid use of '{sym.text}' character.")
        elif sym.kind is S.UNKNOWN:
            self.error(node, f"Unrecognized character '{sym.text}'.")

    def node(self, kind: NodeKind, **kw) -> Node:
        return Node(kind, pos=self.sym.pos, **kw)

    # -- shared terminators ----------------------------------------------

    def expect_period(self, node: Node) -> None:
        if self.at(S.PERIOD):
            self.advance()
        elif self.at(S.COMMA):
            self.warning(node, f"Use '.' symbol at end of {node.kind.value}.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, f"Missing '.' symbol at end of {node.kind.value}.")
            self.scan_to(S.PERIOD)
            self.advance()

    def expect_colon(self, node: Node) -> bool:
        if self.at(S.COLON):
            self.advance()
        elif self.at(S.SEMICOLON):
            self.warning(node, f"Use ':' symbol before listing {node.kind.value} elements.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, f"Missing ':' symbol before listing {node.kind.value} elements.")
            self.scan_to(S.PERIOD)
            return False
        return True

    # -- program structure -------------------------------------------------

    def parse_program(self) -> Node:
        root = self.node(NodeKind.ROOT)
        if self.at(S.EOF):
            self.warning(root, "No pattern to compile :(")
            return root
        while self.at(S.SAMPLE):
            self.parse_sample_def()
        root.children.append(self.parse_pattern())
        if not self.at(S.EOF):
            self.unexpected(root)
            self.error(root, "Unexpected input after the end of the pattern.")
            self.scan_to()
        return root

    def parse_pattern(self) -> Node:
        node = self.node(NodeKind.PATTERN)
        if self.at(S.PATTERN):
            self.advance()
        elif self.at(S.IDENT):
            self.warning(node, "A pattern declaration must start with 'pattern'.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Expecting 'pattern' to start pattern declaration.")
            self.scan_to(S.COLON)

        if self.at(S.STRING):
            node.name = self.sym.text
            self.advance()
        elif self.at(S.IDENT):
            node.name = self.sym.text
            self.warning(node, "Remember to use double quotes around the name of your pattern.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "The pattern name is not specified.")
            self.scan_to(S.COLON)

        self.expect_colon(node)

        if self.at(S.CAST_ON):
            node.start = self.parse_cast_on()
            node.children = self.parse_body()
            node.finish = self.parse_bind_off()
        else:
            while self.at(S.SECTION):
                node.children.append(self.parse_section())
        return node

    def parse_section(self) -> Node:
        node = self.node(NodeKind.SECTION)
        if self.at(S.SECTION):
            self.advance()
        elif self.at(S.IDENT):
            self.warning(node, "A section declaration must start with 'section'.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing 'section' at start of section declaration.")
            self.scan_to(S.COLON)

        if self.at(S.STRING, S.IDENT):
            node.name = self.sym.text
            self.ctx.section_name = node.name
            if self.at(S.IDENT):
                self.warning(node, "Remember to use double quotes around the name of a section.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "The section name is not specified.")
            self.scan_to(S.COLON)

        self.expect_colon(node)

        if self.at(S.CAST_ON):
            node.start = self.parse_cast_on()
        elif self.at(S.PICK_UP):
            node.start = self.parse_pick_up()
        else:
            node.start = self.node(NodeKind.INVALID)
            self.unexpected(node.start)
            self.error(node.start, "Missing cast-on or pick-up at start of section.")
            self.scan_to(S.PERIOD)
            self.advance()

        node.children = self.parse_body()

        if self.at(S.BIND_OFF):
            node.finish = self.parse_bind_off()
        elif self.at(S.JOIN):
            node.finish = self.parse_join()
        else:
            node.finish = self.node(NodeKind.INVALID)
            self.unexpected(node.finish)
            self.error(node.finish, "Missing bind-off or join at end of section.")
            # a following section is the parent's next sibling; leave it alone
            if not self.at(S.SECTION):
                self.scan_to(S.PERIOD, S.SECTION)
                if self.at(S.PERIOD):
                    self.advance()
        return node

    def parse_body(self) -> list[Node]:
        elems: list[Node] = []
        while True:
            if self.at(S.ROW, S.RND):
                elems.append(self.parse_row_def())
            elif self.at(S.ROW_REP, S.ASTERISK):
                elems.append(self.parse_row_repeat())
            elif self.at(S.IDENT):
                elems.append(self.parse_sample_call())
            else:
                return elems

    # -- cast-on / pick-up / bind-off / join ------------------------------

    def _lead_keyword(self, node: Node, kw: SymbolKind, what: str) -> bool:
        if self.at(kw):
            self.advance()
            return True
        if self.at(S.IDENT):
            self.warning(node, f"A {what} declaration must start with '{kw.value}'.")
            self.advance()
            return True
        self.unexpected(node)
        self.error(node, f"Missing '{kw.value}' at start of {what} declaration.")
        self.scan_to(S.PERIOD)
        self.advance()
        return False

    def _count(self, node: Node, msg: str) -> bool:
        if self.at(S.NAT):
            node.value = self.sym.nat_value
            self.advance()
            return True
        self.unexpected(node)
        self.error(node, msg)
        self.scan_to(S.PERIOD)
        self.advance()
        return False

    def _string_after(self, node: Node, kw: SymbolKind, missing_kw: str, missing_str: str) -> Optional[str]:
        if self.at(kw):
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, missing_kw)
            self.scan_to(S.PERIOD)
            self.advance()
            return None
        if self.at(S.STRING):
            text = self.sym.text
            self.advance()
            return text
        self.unexpected(node)
        self.error(node, missing_str)
        self.scan_to(S.PERIOD)
        self.advance()
        return None

    def parse_cast_on(self) -> Node:
        node = self.node(NodeKind.CAST_ON, co_type=CoType.FLAT)
        if not self._lead_keyword(node, S.CAST_ON, "cast-on"):
            return node
        if not self._count(node, "Missing cast-on count."):
            return node
        if self.at(S.CIRCULAR):
            node.co_type = CoType.CIRCULAR
            self.advance()
        elif self.at(S.PROVISIONAL):
            node.co_type = CoType.PROVISIONAL
            self.advance()
        self.expect_period(node)
        return node

    def parse_pick_up(self) -> Node:
        node = self.node(NodeKind.PICK_UP)
        if not self._lead_keyword(node, S.PICK_UP, "pick-up"):
            return node
        if not self._count(node, "Missing pick-up count."):
            return node
        origin = self._string_after(
            node, S.FROM, "Missing 'from' in pick-up declaration.", "Missing pick-up origin."
        )
        if origin is None:
            return node
        node.origin = origin
        self.expect_period(node)
        return node

    def parse_bind_off(self) -> Node:
        node = self.node(NodeKind.BIND_OFF)
        if not self._lead_keyword(node, S.BIND_OFF, "bind-off"):
            return node
        if not self._count(node, "Bind-off count not specified."):
            return node
        self.expect_period(node)
        return node

    def parse_join(self) -> Node:
        node = self.node(NodeKind.JOIN)
        if not self._lead_keyword(node, S.JOIN, "join"):
            return node
        if not self._count(node, "Join count not specified."):
            return node
        dest = self._string_after(
            node, S.TO, "Missing 'to' in join declaration.", "Missing join destination."
        )
        if dest is None:
            return node
        node.destination = dest
        self.expect_period(node)
        return node

    # -- rows ---------------------------------------------------------------

    def parse_row_def(self) -> Node:
        node = self.node(NodeKind.ROW)
        if self.at(S.ROW):
            node.row_type = RowType.ROW
            self.advance()
        elif self.at(S.RND):
            node.row_type = RowType.RND
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Invalid row type specified.")
            node.row_type = RowType.RND
            self.advance()

        if self.at(S.MC):
            node.color = Color.MC
            self.advance()
        elif self.at(S.CC):
            node.color = Color.CC
            self.advance()

        if self.expect_colon(node):
            node.children.append(self.parse_row_elem())
            while self.at(S.COMMA):
                self.advance()
                node.children.append(self.parse_row_elem())
        self.expect_period(node)
        return node

    def parse_row_elem(self) -> Node:
        if self.sym.kind.is_stitch or self.at(S.OPEN_ANGLE, S.OPEN_BRACK, S.OPEN_PAREN):
            return self.parse_stitch_op()
        if self.at(S.ASTERISK):
            return self.parse_undetermined_rep()
        node = self.node(NodeKind.INVALID)
        self.unexpected(node)
        self.error(node, "Invalid row element.")
        self.scan_to(S.PERIOD)
        return node

    def parse_stitch_op(self) -> Node:
        if self.at(S.OPEN_BRACK):
            return self.parse_fixed_rep()
        if self.at(S.OPEN_ANGLE, S.OPEN_PAREN):
            return self.parse_compound_stitch()
        if self.sym.kind.is_stitch:
            return self.parse_basic_stitch()
        node = self.node(NodeKind.INVALID)
        self.unexpected(node)
        self.error(
            node,
            f"{self.sym.text or 'EOF'} is not a known stitch, start of stitch repeat or compound stitch.",
        )
        self.scan_to(S.PERIOD)
        return node

    def parse_basic_stitch(self) -> Node:
        sym = self.sym
        if not sym.kind.is_stitch:
            node = self.node(NodeKind.INVALID)
            self.unexpected(node)
            self.error(node, f"{sym.text or 'EOF'} is not a known stitch.")
            return node
        kind = NodeKind[sym.kind.name]
        node = self.node(kind)
        n = 1
        if kind in NUMBERED_STITCHES:
            n = int("".join(c for c in sym.text if c.isdigit()))
            node.num = literal_expr(n, sym.pos)
        effect = stitch_effect(kind, n)
        node.worked_st, node.st_change = effect.worked_st, effect.st_change
        self.advance()
        if self.at(*_EXPR_START):
            node.rep_count = self.parse_expression()
        return node

    def _stitch_list(self, node: Node, item) -> None:
        node.children.append(item())
        while self.at(S.COMMA):
            self.advance()
            node.children.append(item())

    def parse_compound_stitch(self) -> Node:
        node = self.node(NodeKind.COMP_ST)
        if self.at(S.OPEN_ANGLE):
            self.advance()
        elif self.at(S.OPEN_PAREN, S.OPEN_BRACK):
            self.warning(node, "Use '<' symbol at start of compound stitch.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing '<' symbol at start of compound stitch.")
            self.scan_to(S.PERIOD)
            return node

        self._stitch_list(node, self.parse_basic_stitch)

        if self.at(S.CLOSE_ANGLE):
            self.advance()
        elif self.at(S.CLOSE_PAREN, S.CLOSE_BRACK):
            self.warning(node, "Use '>' symbol at end of compound stitch.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing '>' symbol at end of compound stitch.")
            self.scan_to(S.PERIOD)
            return node

        if self.at(*_EXPR_START):
            node.rep_count = self.parse_expression()
        return node

    def parse_fixed_rep(self) -> Node:
        node = self.node(NodeKind.FIXED_ST_REP)
        if self.at(S.OPEN_BRACK):
            self.advance()
        elif self.at(S.OPEN_ANGLE, S.OPEN_PAREN):
            self.warning(node, "Use '[' symbol to start fixed stitch repeat.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing '[' symbol to start fixed stitch repeat.")
            self.scan_to(S.PERIOD)
            return node

        self._stitch_list(node, self.parse_stitch_op)

        if self.at(S.CLOSE_BRACK):
            self.advance()
        elif self.at(S.CLOSE_ANGLE, S.CLOSE_PAREN):
            self.warning(node, "Use ']' symbol to end fixed stitch repeat stitches.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing ']' symbol to end fixed stitch repeat stitches.")
            self.scan_to(S.PERIOD)
            return node

        node.rep_count = self.parse_expression(S.PERIOD)
        return node

    def parse_undetermined_rep(self) -> Node:
        node = self.node(NodeKind.U_ST_REP)
        node.num = Node(NodeKind.EXPRESSION, pos=node.pos)
        if self.at(S.ASTERISK):
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing '*' symbol at start of undetermined stitch repeat.")
            self.scan_to(S.PERIOD)
            return node

        self._stitch_list(node, self.parse_stitch_op)

        if self.at(S.SEMICOLON):
            self.advance()
        elif self.at(S.COLON):
            self.warning(node, "Use ';' symbol at the end of undetermined stitch repeat stitches.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing ';' symbol at the end of undetermined stitch repeat stitches.")
            self.scan_to(S.PERIOD)
            return node

        if self.at(S.TO):
            self.advance()
        elif self.at(S.IDENT):
            self.warning(node, "Use 'to' after ';' for undetermined stitch repeat.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing 'to' after ';' for undetermined stitch repeat.")
            self.scan_to(S.COMMA, S.PERIOD)
            return node

        if self.at(S.LAST):
            self.advance()
            node.num = self.parse_expression(S.COMMA, S.PERIOD)
        elif self.at(S.END):
            node.num = literal_expr(0, self.sym.pos)
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing repeat instructions. Expecting 'last' or 'end'.")
            self.scan_to(S.COMMA, S.PERIOD)
        return node

    def parse_row_repeat(self) -> Node:
        node = self.node(NodeKind.ROW_REP)
        node.rep_count = Node(NodeKind.EXPRESSION, pos=node.pos)
        if self.at(S.ROW_REP):
            self.advance()
        elif self.at(S.ASTERISK):
            self.warning(node, "Row repeat must begin with '**'.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing '**' at start of row repeat.")
            self.scan_to(S.PERIOD)
            self.advance()

        node.children = self.parse_body()

        if self.at(S.REPEAT):
            self.advance()
        elif self.at(S.IDENT):
            self.warning(node, "Row repeat body must be followed by 'repeat'.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing 'repeat' after row repeat body.")
            self.scan_to(S.PERIOD)
            self.advance()
            return node

        node.rep_count = self.parse_expression(S.PERIOD)
        return node

    # -- samples --------------------------------------------------------------

    def parse_sample_def(self) -> Node:
        node = self.node(NodeKind.SAMPLE_DEF)
        if self.at(S.SAMPLE):
            self.advance()
        elif self.at(S.IDENT):
            self.warning(node, "A sample definition must start with 'sample'.")
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing 'sample' at start of sample definition.")
            self.scan_to(S.IDENT)

        if self.at(S.IDENT):
            node.name = self.sym.text
            self.advance()
        else:
            if self.sym.kind.is_keyword:
                self.error(node, f"{self.sym.text} is a reserved keyword and not a valid sample identifier.")
                self.advance()
            else:
                self.error(node, "Missing or invalid sample identifier.")
            self.scan_to(S.WITH, S.COLON, S.BAR, S.SEMICOLON)

        if self.at(S.WITH):
            self.advance()
            self._param_name(node)
            while self.at(S.COMMA):
                self.advance()
                self._param_name(node)

        # registered before the body so a sample can call itself
        if node.name is not None:
            if node.name in self.ctx.samples:
                self.warning(node, f"Sample '{node.name}' is redefined; the last definition is used.")
            self.ctx.samples[node.name] = node

        if self.at(S.BAR):
            while self.at(S.BAR):
                branch = self.node(NodeKind.BRANCH)
                self.advance()
                branch.condition = self.parse_condition()
                self.expect_colon(node)
                branch.children = self.parse_body()
                node.children.append(branch)
        else:
            self.expect_colon(node)
            node.children = self.parse_body()
        return node

    def _param_name(self, node: Node) -> None:
        if self.at(S.IDENT):
            node.param_names.append(self.sym.text)
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing sample parameter name.")

    def parse_sample_call(self) -> Node:
        node = self.node(NodeKind.SAMPLE_CALL)
        if self.at(S.IDENT):
            node.name = self.sym.text
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing sample call identifier.")
            self.scan_to(S.PERIOD)

        sample = self.ctx.samples.get(node.name) if node.name is not None else None
        if node.name is not None and sample is None:
            self.error(node, f"Unknown sample '{node.name}'.")

        required = len(sample.param_names) if sample is not None else None
        if self.at(S.WITH):
            self.advance()
            node.args.append(self.parse_expression(S.PERIOD))
            while True:
                if self.at(S.COMMA):
                    self.advance()
                elif (
                    self.at(S.PERIOD)
                    and required is not None
                    and len(node.args) < required
                    and self.peek().kind in _EXPR_START
                ):
                    self.warning(node, "Use ',' symbol between sample parameters.")
                    self.advance()
                else:
                    break
                node.args.append(self.parse_expression(S.PERIOD))

        if sample is not None:
            passed = len(node.args)
            if passed != required:
                self.error(node, f"{node.name} parameters required: {required}, passed: {passed}.")
                self.scan_to(S.PERIOD)
            for pname, expr in zip(sample.param_names, node.args):
                node.param_map[pname] = expr

        self.expect_period(node)
        return node

    # -- expressions ---------------------------------------------------------

    def parse_expression(self, *terminators: SymbolKind) -> Node:
        terminators = terminators or _EXPR_STOP
        node = self.node(NodeKind.EXPRESSION)
        if not self.at(*_EXPR_START):
            self.unexpected(node)
            self.error(node, "Expecting a number or variable.")
            return node
        self._operand(node, terminators)
        while self.at(S.PLUS):
            self.advance()
            self._operand(node, terminators)
        return node

    def _operand(self, node: Node, terminators: tuple[SymbolKind, ...]) -> None:
        if self.at(S.NAT):
            node.children.append(self.node(NodeKind.NAT_LITERAL, value=self.sym.nat_value))
            self.advance()
        elif self.at(S.IDENT):
            node.children.append(self.node(NodeKind.NAT_VARIABLE, name=self.sym.text))
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Expecting a number or variable after '+'.")
            self.scan_to(*terminators)

    def parse_condition(self) -> Node:
        node = self.node(NodeKind.CONDITION)
        if self.at(*_EXPR_START):
            node.left = self.parse_expression()
        else:
            self.unexpected(node)
            self.error(node, "Missing left side of branch condition.")

        comparison = _COMPARATORS.get(self.sym.kind)
        if comparison is not None:
            node.comparison = comparison
            self.advance()
        else:
            self.unexpected(node)
            self.error(node, "Missing comparison operator in branch condition.")

        if self.at(*_EXPR_START):
            node.right = self.parse_expression()
        else:
            self.unexpected(node)
            self.error(node, "Missing right side of branch condition.")
        return node


def parse(src: str, ctx: Optional[CompileContext] = None) -> Node:
    """Parse a whole program. Sample definitions land in ctx.samples."""
    return Parser(src, ctx).parse_program()
