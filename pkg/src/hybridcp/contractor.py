"""Interval contractors for systems of (in)equations over a box.

A contractor owns a parsed list of relations over a fixed scope of
``arity`` variables.  :func:`hc4_revise` performs one forward/backward
sweep of a single relation: the forward pass computes the natural
interval extension bottom-up, the backward pass projects the relation's
feasible range back down to the leaves, narrowing the box.  A system is
contracted by :func:`fixpoint_contract`, which sweeps all relations
until no component's width improves by more than a fixed fraction.

:func:`contract` is the narrow waist other layers (and foreign callers)
speak: flat ``[x0.lo, x0.hi, x1.lo, ...]`` bounds in, a four-valued
status out, bounds updated in place.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import MutableSequence, Sequence

from .exprs import Const, ExprNode, ParseError, Relation, Unary, Var, evaluate, parse
from .intervals import Box, Interval, binary_op, inverse_op, unary_op


class ContractStatus(IntEnum):
    """Outcome of one :func:`contract` call."""

    FAIL = 0  # box proved empty: no point satisfies the system
    ENTAILED = 1  # every remaining point satisfies the system
    CONTRACT = 2  # at least one bound tightened
    NOTHING = 3  # no deduction


class UnknownContractorError(LookupError):
    pass


class MalformedBoundsError(ValueError):
    pass


@dataclass(frozen=True)
class Contractor:
    id: int
    arity: int
    relations: tuple[Relation, ...]
    sources: tuple[str, ...]


class ContractorRegistry:
    """Owner of contractor instances, addressed by dense integer ids."""

    def __init__(self) -> None:
        self._contractors: list[Contractor] = []

    def create_contractor(self, functions: Sequence[str], arity: int) -> int:
        """Parse ``functions`` against ``arity`` and register a contractor.

        Returns the new contractor's id.  Ids are consecutive from 0 in
        creation order.  A parse failure is re-raised with the offending
        string named and registers nothing.
        """
        if arity < 0:
            raise ValueError("arity cannot be negative")
        relations = []
        for text in functions:
            try:
                relations.append(parse(text, arity))
            except ParseError as exc:
                raise ParseError(f"in {text!r}: {exc.args[0]}", exc.position) from None
        cid = len(self._contractors)
        self._contractors.append(
            Contractor(cid, arity, tuple(relations), tuple(functions))
        )
        return cid

    def get(self, cont_index: int) -> Contractor:
        if not (0 <= cont_index < len(self._contractors)):
            raise UnknownContractorError(f"no contractor with index {cont_index}")
        return self._contractors[cont_index]

    def __len__(self) -> int:
        return len(self._contractors)


# ---------------------------------------------------------------------------
# HC4.
# ---------------------------------------------------------------------------


def _forward(node: ExprNode, box: Box, memo: dict[int, Interval]) -> Interval:
    if isinstance(node, Const):
        val = Interval(node.value, node.value)
    elif isinstance(node, Var):
        val = box[node.index]
    elif isinstance(node, Unary):
        val = unary_op(node.op, _forward(node.operand, box, memo))
    else:
        val = binary_op(
            node.op,
            _forward(node.left, box, memo),
            _forward(node.right, box, memo),
        )
    memo[id(node)] = val
    return val


def _backward(node: ExprNode, request: Interval, memo: dict[int, Interval], box: Box) -> bool:
    # returns False when the request proves the relation infeasible
    current = memo[id(node)].meet(request)
    if current.is_empty:
        return False
    if isinstance(node, Const):
        return True
    if isinstance(node, Var):
        narrowed = box[node.index].meet(current)
        if narrowed.is_empty:
            return False
        box[node.index] = narrowed
        return True
    if isinstance(node, Unary):
        (child,) = inverse_op(node.op, current, memo[id(node.operand)])
        if child.is_empty:
            return False
        return _backward(node.operand, child, memo, box)
    left, right = inverse_op(
        node.op, current, memo[id(node.left)], memo[id(node.right)]
    )
    if left.is_empty or right.is_empty:
        return False
    return _backward(node.left, left, memo, box) and _backward(
        node.right, right, memo, box
    )


def hc4_revise(relation: Relation, box: Box) -> Box:
    """One forward/backward sweep of ``relation`` over a copy of ``box``.

    The input box is not modified.  An infeasible relation yields the
    all-empty box of the same length.
    """
    work = box.copy()
    if work.is_empty:
        return Box.empty(len(box))
    memo: dict[int, Interval] = {}
    lhs_val = _forward(relation.lhs, work, memo)
    rhs_val = _forward(relation.rhs, work, memo)
    if lhs_val.is_empty or rhs_val.is_empty:
        return Box.empty(len(box))
    op = relation.op
    if op == "=":
        common = lhs_val.meet(rhs_val)
        lhs_target, rhs_target = common, common
    elif op in ("<=", "<"):
        lhs_target = lhs_val.meet(Interval(-float("inf"), rhs_val.hi))
        rhs_target = rhs_val.meet(Interval(lhs_val.lo, float("inf")))
    else:  # ">=" or ">"
        lhs_target = lhs_val.meet(Interval(rhs_val.lo, float("inf")))
        rhs_target = rhs_val.meet(Interval(-float("inf"), lhs_val.hi))
    if lhs_target.is_empty or rhs_target.is_empty:
        return Box.empty(len(box))
    if not _backward(relation.lhs, lhs_target, memo, work):
        return Box.empty(len(box))
    if not _backward(relation.rhs, rhs_target, memo, work):
        return Box.empty(len(box))
    return work


DEFAULT_IMPROVEMENT_RATIO = 0.01


def fixpoint_contract(
    contractor: Contractor, box: Box, ratio: float = DEFAULT_IMPROVEMENT_RATIO
) -> Box:
    """Sweep all relations of ``contractor`` over ``box`` to a near-fixpoint.

    Rounds continue while some component's width shrinks by more than
    ``ratio`` of its previous width.  The input box is not modified.
    """
    current = box.copy()
    if current.is_empty:
        return Box.empty(len(box))
    for _ in range(10_000):
        widths = [c.width() for c in current]
        for relation in contractor.relations:
            current = hc4_revise(relation, current)
            if current.is_empty:
                return current
        improved = False
        for before, comp in zip(widths, current):
            after = comp.width()
            if before == float("inf"):
                improved = improved or after != before
            elif before > 0.0 and (before - after) > ratio * before:
                improved = True
        if not improved:
            return current
    return current


def _proves(relation: Relation, box: Box) -> bool:
    # entailment check on the contracted box
    if relation.op == "=" and relation.lhs == relation.rhs:
        return True  # syntactic tautology holds wherever both sides are defined
    lhs = evaluate(relation.lhs, box)
    rhs = evaluate(relation.rhs, box)
    if lhs.is_empty or rhs.is_empty:
        return False
    if relation.op == "=":
        return lhs.is_point and rhs.is_point and lhs.lo == rhs.lo
    if relation.op == "<=":
        return lhs.hi <= rhs.lo
    if relation.op == "<":
        return lhs.hi < rhs.lo
    if relation.op == ">=":
        return lhs.lo >= rhs.hi
    return lhs.lo > rhs.hi


def contract(
    registry: ContractorRegistry, cont_index: int, bounds: MutableSequence[float]
) -> ContractStatus:
    """Contract the flat ``bounds`` array with contractor ``cont_index``.

    ``bounds`` holds ``[x0.lo, x0.hi, x1.lo, x1.hi, ...]`` and must match
    the contractor's arity.  On FAIL the array is left untouched; on any
    other status it holds the (possibly tightened) bounds on return.
    """
    contractor = registry.get(cont_index)
    if len(bounds) != 2 * contractor.arity:
        raise MalformedBoundsError(
            f"expected {2 * contractor.arity} bounds, got {len(bounds)}"
        )
    for i in range(contractor.arity):
        lo, hi = bounds[2 * i], bounds[2 * i + 1]
        if lo != lo or hi != hi:  # NaN
            raise MalformedBoundsError(f"NaN bound for variable {i}")
        if lo > hi:
            raise MalformedBoundsError(
                f"variable {i} has reversed bounds [{lo}, {hi}]"
            )
    box = Box.from_bounds(bounds)
    result = fixpoint_contract(contractor, box)
    if result.is_empty:
        return ContractStatus.FAIL
    changed = False
    for i, comp in enumerate(result):
        if comp.lo != bounds[2 * i] or comp.hi != bounds[2 * i + 1]:
            changed = True
        bounds[2 * i] = comp.lo
        bounds[2 * i + 1] = comp.hi
    entailed = all(_proves(rel, result) for rel in contractor.relations)
    if entailed:
        return ContractStatus.ENTAILED
    if changed:
        return ContractStatus.CONTRACT
    return ContractStatus.NOTHING
