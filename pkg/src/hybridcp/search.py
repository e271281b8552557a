"""Depth-first search: first-fail enumeration and branch-and-bound.

Integer branching picks the uninstantiated variable with the smallest
domain (lowest id on ties) and tries ``x = min(dom)`` then
``x != min(dom)``.  Once every integer variable is fixed, any real
variable still wider than its precision is split at its midpoint, the
widest relative width first.  Optimisation is branch-and-bound: each
incumbent adds a cut ``objective <= value - delta`` (``delta`` is 1 for
integer objectives, the variable's precision for real ones) and the
search continues; exhausting the tree proves optimality.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .fd import Contradiction, IntVariable, Solver
from .real import RealVariable, RealView


class LimitReached(Exception):
    """Node or time budget exhausted before the search finished."""


@dataclass
class Solution:
    """One assignment: exact integer values, interval bounds for reals."""

    values: dict[str, int]
    reals: dict[str, tuple[float, float]]
    objective: Optional[float] = None


@dataclass
class SearchResult:
    status: str  # OPTIMAL | SAT | UNSAT | UNKNOWN
    solutions: list[Solution] = field(default_factory=list)
    nodes: int = 0
    fails: int = 0
    complete: bool = True

    @property
    def best(self) -> Optional[Solution]:
        return self.solutions[-1] if self.solutions else None


def select_first_fail(candidates: Sequence[IntVariable]) -> Optional[IntVariable]:
    """Smallest-domain uninstantiated variable, lowest id on ties."""
    best: Optional[IntVariable] = None
    for var in candidates:
        if var.is_instantiated():
            continue
        if best is None or var.size() < best.size() or (
            var.size() == best.size() and var.id < best.id
        ):
            best = var
    return best


def select_widest_real(reals: Sequence[Union[RealVariable, RealView]]):
    """Real variable with the largest precision-relative width, if any."""
    best = None
    best_score = 0.0
    for var in reals:
        if var.is_instantiated():
            continue
        score = var.width() / max(1.0, abs(var.mid()))
        if best is None or score > best_score:
            best = var
            best_score = score
    return best


class _Search:
    def __init__(
        self,
        solver: Solver,
        decision_vars: Sequence[IntVariable],
        on_solution: Callable[[], bool],
        cut: Callable[[], None],
        node_limit: Optional[int],
        deadline: Optional[float],
        check_integrity: bool,
    ):
        self.solver = solver
        self.decision_vars = list(decision_vars)
        self.on_solution = on_solution
        self.cut = cut
        self.node_limit = node_limit
        self.deadline = deadline
        self.check_integrity = check_integrity

    def run(self) -> None:
        self._node()

    def _limits(self) -> None:
        if self.node_limit is not None and self.solver.nodes >= self.node_limit:
            raise LimitReached("node limit")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise LimitReached("time limit")

    def _snapshot(self) -> tuple:
        solver = self.solver
        return (
            solver.snapshot(),
            tuple(v.snapshot() for v in solver.real_vars),
            tuple(p.active for p in solver.propagators),
        )

    def _node(self) -> bool:
        # returns False to abort the whole search (solution cap reached)
        self._limits()
        solver = self.solver
        solver.nodes += 1
        try:
            self.cut()
            solver.propagate()
        except Contradiction:
            solver.fails += 1
            return True

        var = select_first_fail(self.decision_vars)
        if var is None:
            var = select_first_fail(solver.int_vars)
        if var is not None:
            return self._branch_int(var)
        real = select_widest_real(solver.real_vars)
        if real is not None:
            return self._branch_real(real)
        return self.on_solution()

    def _branch_int(self, var: IntVariable) -> bool:
        solver = self.solver
        value = var.lb()
        before = self._snapshot() if self.check_integrity else None

        mark = solver.trail.mark()
        try:
            var.instantiate(value)
        except Contradiction:
            solver.fails += 1
            going = True
        else:
            going = self._node()
        solver.trail.undo_to(mark)
        self._assert_restored(before)
        if not going:
            return False

        mark = solver.trail.mark()
        try:
            var.remove_value(value)
        except Contradiction:
            solver.fails += 1
            going = True
        else:
            going = self._node()
        solver.trail.undo_to(mark)
        self._assert_restored(before)
        return going

    def _branch_real(self, var) -> bool:
        solver = self.solver
        lb, ub = var.lb(), var.ub()
        mid = lb + (ub - lb) / 2.0
        if not (lb < mid < ub):
            # interval too thin to split further; accept as instantiated
            return self.on_solution()
        before = self._snapshot() if self.check_integrity else None

        mark = solver.trail.mark()
        try:
            var.update_bounds(lb, mid)
        except Contradiction:
            solver.fails += 1
            going = True
        else:
            going = self._node()
        solver.trail.undo_to(mark)
        self._assert_restored(before)
        if not going:
            return False

        mark = solver.trail.mark()
        try:
            var.update_bounds(math.nextafter(mid, math.inf), ub)
        except Contradiction:
            solver.fails += 1
            going = True
        else:
            going = self._node()
        solver.trail.undo_to(mark)
        self._assert_restored(before)
        return going

    def _assert_restored(self, before: Optional[tuple]) -> None:
        if before is not None:
            after = self._snapshot()
            if after != before:
                raise AssertionError("backtrack failed to restore state")


def _capture(solver: Solver, objective_value: Optional[float]) -> Solution:
    values = {v.name: v.value() for v in solver.int_vars}
    reals = {v.name: (v.lb(), v.ub()) for v in solver.real_vars}
    return Solution(values=values, reals=reals, objective=objective_value)


def solve_satisfy(
    solver: Solver,
    decision_vars: Sequence[IntVariable],
    all_solutions: bool = False,
    solution_limit: Optional[int] = None,
    node_limit: Optional[int] = None,
    time_limit_ms: Optional[float] = None,
    check_integrity: bool = False,
) -> SearchResult:
    result = SearchResult(status="UNSAT")

    def on_solution() -> bool:
        result.solutions.append(_capture(solver, None))
        if solution_limit is not None and len(result.solutions) >= solution_limit:
            return False
        return all_solutions

    deadline = (
        time.monotonic() + time_limit_ms / 1000.0 if time_limit_ms is not None else None
    )
    search = _Search(
        solver, decision_vars, on_solution, lambda: None, node_limit, deadline,
        check_integrity,
    )
    try:
        search.run()
    except LimitReached:
        result.complete = False
    result.nodes = solver.nodes
    result.fails = solver.fails
    if result.solutions:
        result.status = "SAT"
    elif not result.complete:
        result.status = "UNKNOWN"
    return result


def solve_minimize(
    solver: Solver,
    decision_vars: Sequence[IntVariable],
    objective: Union[IntVariable, RealVariable],
    node_limit: Optional[int] = None,
    time_limit_ms: Optional[float] = None,
    check_integrity: bool = False,
) -> SearchResult:
    result = SearchResult(status="UNSAT")
    is_real = isinstance(objective, (RealVariable, RealView))
    incumbent: list[float] = []  # best objective upper value so far

    def cut() -> None:
        if incumbent:
            if is_real:
                objective.update_bounds(-math.inf, incumbent[0] - objective.precision)
            else:
                objective.update_ub(int(incumbent[0]) - 1)

    def on_solution() -> bool:
        value = objective.ub() if is_real else float(objective.value())
        incumbent[:] = [value]
        result.solutions.append(_capture(solver, value))
        return True

    deadline = (
        time.monotonic() + time_limit_ms / 1000.0 if time_limit_ms is not None else None
    )
    search = _Search(
        solver, decision_vars, on_solution, cut, node_limit, deadline, check_integrity
    )
    try:
        search.run()
    except LimitReached:
        result.complete = False
    result.nodes = solver.nodes
    result.fails = solver.fails
    if result.solutions:
        result.status = "OPTIMAL" if result.complete else "SAT"
    elif not result.complete:
        result.status = "UNKNOWN"
    return result
