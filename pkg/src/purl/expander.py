"""Pass 2: sample expansion.

Every sample call is replaced in place by a fresh copy of its definition's
body with the parameters substituted. The walk keeps an explicit stack of
child lists instead of recursing per call, so deep or runaway recursion in
user samples costs heap, not interpreter stack, and stops when the
expansion budget runs out.
"""

from __future__ import annotations

from typing import Optional

from .core import CompileContext, Node, NodeKind, Severity, add_message, literal_expr

ParamMap = dict[str, Node]

_CONTAINERS = frozenset(
    {
        NodeKind.PATTERN,
        NodeKind.SECTION,
        NodeKind.ROW,
        NodeKind.ROW_REP,
        NodeKind.FIXED_ST_REP,
        NodeKind.U_ST_REP,
        NodeKind.COMP_ST,
    }
)


def substitute_expression(expr: Optional[Node], pm: ParamMap, ctx: CompileContext) -> None:
    """Splice bound expressions over the variables of expr, in place."""
    if expr is None:
        return
    out: list[Node] = []
    for child in expr.children:
        if child.kind is not NodeKind.NAT_VARIABLE:
            out.append(child)
            continue
        bound = pm.get(child.name)
        if bound is None:
            if child.pos is not None:
                ctx.pos = child.pos
            add_message(ctx, Severity.ERROR, expr, f"Unbound variable {child.name}.")
            out.append(Node(NodeKind.NAT_LITERAL, pos=child.pos, value=0))
        else:
            out.extend(c.clone() for c in bound.children)
    expr.children = out
    expr.value = sum(c.value for c in out if c.kind is NodeKind.NAT_LITERAL)


def _substitute_node(node: Node, pm: ParamMap, ctx: CompileContext) -> None:
    substitute_expression(node.rep_count, pm, ctx)
    substitute_expression(node.num, pm, ctx)
    for arg in node.args:
        substitute_expression(arg, pm, ctx)
    for name, arg in node.param_map.items():
        if arg not in node.args:
            substitute_expression(arg, pm, ctx)


def _substitute_tree(nodes: list[Node], pm: ParamMap, ctx: CompileContext) -> None:
    stack = list(nodes)
    while stack:
        node = stack.pop()
        _substitute_node(node, pm, ctx)
        stack.extend(node.children)


def evaluate_condition(cond: Optional[Node], pm: ParamMap, ctx: CompileContext) -> bool:
    """Substitute both sides of cond under pm and compare them."""
    if cond is None:
        return False
    if cond.left is None or cond.right is None or cond.comparison is None:
        cond.do_branch = False
        return False
    substitute_expression(cond.left, pm, ctx)
    substitute_expression(cond.right, pm, ctx)
    cond.do_branch = cond.comparison.apply(cond.left.value, cond.right.value)
    return cond.do_branch


class Expander:
    def __init__(self, ctx: CompileContext) -> None:
        self.ctx = ctx

    def _bind_args(self, call: Node, sample: Node, pm: ParamMap) -> ParamMap:
        local = dict(pm)
        # arguments see the caller's scope, never each other
        bound = {}
        for pname, arg in zip(sample.param_names, call.args):
            substitute_expression(arg, pm, self.ctx)
            # folded to one literal so recursive calls like `f with n + 1`
            # do not grow their argument lists level by level
            bound[pname] = literal_expr(arg.value, arg.pos)
        local.update(bound)
        return local

    def instantiate(self, call: Node, pm: ParamMap) -> list[Node]:
        """Fresh, substituted body of the sample named by call."""
        ctx = self.ctx
        if call.pos is not None:
            ctx.pos = call.pos
        sample = ctx.samples.get(call.name) if call.name is not None else None
        if sample is None:
            if not call.has_error_msg:
                add_message(ctx, Severity.ERROR, call, f"Unknown sample '{call.name}'.")
            return []
        if ctx.expansion_budget <= 0:
            add_message(
                ctx,
                Severity.ERROR,
                call,
                f"Sample expansion limit exceeded while expanding '{call.name}'.",
            )
            return []
        ctx.expansion_budget -= 1

        local = self._bind_args(call, sample, pm)
        if sample.children and sample.children[0].kind is NodeKind.BRANCH:
            chosen = None
            for branch in sample.children:
                cond = branch.condition.clone() if branch.condition is not None else None
                if evaluate_condition(cond, local, ctx):
                    chosen = branch
                    break
            if chosen is None:
                add_message(
                    ctx,
                    Severity.WARNING,
                    call,
                    f"No branch condition of sample '{call.name}' is satisfied.",
                )
                return []
            body = [c.clone() for c in chosen.children]
        else:
            body = [c.clone() for c in sample.children]
        _substitute_tree(body, local, ctx)
        return body

    def traverse_children(self, node: Node, pm: ParamMap) -> None:
        """Expand every sample call below node, depth first, in place."""
        ctx = self.ctx
        # frames: [container, param map, next child index, section name]
        stack = [[node, pm, 0, ctx.section_name]]
        while stack:
            frame = stack[-1]
            container, scope, i, section = frame
            kids = container.children
            if i >= len(kids):
                stack.pop()
                continue
            ctx.section_name = section
            child = kids[i]
            if child.kind is NodeKind.SAMPLE_CALL:
                kids[i : i + 1] = self.instantiate(child, scope)
                continue
            frame[2] = i + 1
            if child.kind is NodeKind.NAT_VARIABLE:
                # a bare variable can only sit inside an expression
                substitute_expression(container, scope, ctx)
                frame[2] = len(container.children)
                continue
            _substitute_node(child, scope, ctx)
            if child.kind in _CONTAINERS:
                if child.kind is NodeKind.SECTION:
                    section = child.name
                stack.append([child, scope, 0, section])

    def expand(self, root: Node) -> None:
        self.ctx.section_name = None
        for child in root.children:
            if child.kind is NodeKind.PATTERN:
                self.traverse_children(child, {})
        self.ctx.section_name = None


def expand(root: Node, ctx: CompileContext) -> None:
    Expander(ctx).expand(root)


def traverse_children(node: Node, pm: ParamMap, ctx: CompileContext) -> None:
    Expander(ctx).traverse_children(node, pm)


def expand_sample_call(call: Node, pm: ParamMap, ctx: CompileContext) -> list[Node]:
    """Expansion of one call, with any nested calls expanded too."""
    exp = Expander(ctx)
    holder = Node(NodeKind.ROW_REP, children=exp.instantiate(call, pm))
    exp.traverse_children(holder, pm)
    return holder.children
