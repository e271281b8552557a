"""Continuous variables and the propagators that delegate to contractors.

A :class:`RealVariable` is a float interval plus a precision; it counts
as instantiated once its width is within that precision.  A
:class:`RealView` presents an integer variable through the same surface,
rounding bound updates inward (lower bounds up, upper bounds down) so
the integer domain never admits values the continuous bound excludes.

:class:`RealPropagator` is the finite-domain side of the bridge: it
copies its scope's bounds into a flat array, calls
:func:`~hybridcp.contractor.contract`, and interprets the four-valued
status (fail, entailed, contracted, nothing).  Entailment sets the
propagator passive for the rest of the search subtree.

:class:`ReifiedReal` ties a 0/1 integer variable to a single inequality:
a fixed control variable enforces the relation or its negation, an
unfixed one is decided by probing the relation on a scratch copy of the
bounds.
"""
from __future__ import annotations

import math
import struct
from typing import Sequence, Union

from .contractor import ContractStatus, ContractorRegistry, contract
from .exprs import negate, parse, to_source
from .fd import Contradiction, IntVariable, Propagator, Solver


class RealVariable:
    """Float-interval variable with a target precision."""

    def __init__(self, solver: Solver, name: str, lb: float, ub: float, precision: float):
        if math.isnan(lb) or math.isnan(ub) or lb > ub:
            raise ValueError(f"invalid bounds [{lb}, {ub}] for {name}")
        if not (precision > 0.0):
            raise ValueError("precision must be positive")
        self.solver = solver
        self.name = name
        self._lb = float(lb)
        self._ub = float(ub)
        self.precision = float(precision)
        self.watchers: list[Propagator] = []
        self.id = len(solver.real_vars)
        solver.real_vars.append(self)

    def attach_watcher(self, propagator: Propagator) -> None:
        self.watchers.append(propagator)

    def lb(self) -> float:
        return self._lb

    def ub(self) -> float:
        return self._ub

    def width(self) -> float:
        return self._ub - self._lb

    def mid(self) -> float:
        return self._lb + (self._ub - self._lb) / 2.0

    def is_instantiated(self) -> bool:
        return self.width() <= self.precision

    def update_bounds(self, lb: float, ub: float) -> bool:
        """Intersect with ``[lb, ub]``; trailed; contradiction on empty."""
        new_lb = self._lb if lb < self._lb else lb
        new_ub = self._ub if ub > self._ub else ub
        if new_lb > new_ub:
            raise Contradiction(f"{self.name} bounds crossed")
        changed = False
        if new_lb != self._lb or new_ub != self._ub:
            old_lb, old_ub = self._lb, self._ub

            def undo() -> None:
                self._lb = old_lb
                self._ub = old_ub

            self.solver.trail.record(undo)
            self._lb = new_lb
            self._ub = new_ub
            changed = True
            for p in self.watchers:
                self.solver.schedule(p)
        return changed

    def snapshot(self) -> tuple:
        return ("real", struct.pack("<dd", self._lb, self._ub))

    def __repr__(self) -> str:
        return f"{self.name}[{self._lb!r}, {self._ub!r}]"


class RealView:
    """An integer variable exposed through the real-variable surface.

    Bounds convert losslessly to float (the solver's integer ranges all
    fit a double).  Incoming bound updates round inward: the lower bound
    up to the next integer, the upper bound down.
    """

    def __init__(self, var: IntVariable, precision: float):
        if not (precision > 0.0):
            raise ValueError("precision must be positive")
        self.var = var
        self.name = var.name
        self.precision = float(precision)

    def attach_watcher(self, propagator: Propagator) -> None:
        self.var.attach_watcher(propagator)

    def lb(self) -> float:
        return float(self.var.lb())

    def ub(self) -> float:
        return float(self.var.ub())

    def width(self) -> float:
        return self.ub() - self.lb()

    def mid(self) -> float:
        return self.lb() + (self.ub() - self.lb()) / 2.0

    def is_instantiated(self) -> bool:
        return self.var.is_instantiated()

    def update_bounds(self, lb: float, ub: float) -> bool:
        changed = False
        if lb != -math.inf and lb > self.var.lb():
            changed |= self.var.update_lb(math.ceil(lb))
        if ub != math.inf and ub < self.var.ub():
            changed |= self.var.update_ub(math.floor(ub))
        return changed

    def snapshot(self) -> tuple:
        return self.var.snapshot()

    def __repr__(self) -> str:
        return f"view({self.var!r})"


RealLike = Union[RealVariable, RealView]


class RealPropagator(Propagator):
    """One continuous (in)equation, enforced by a registered contractor."""

    def __init__(
        self,
        solver: Solver,
        registry: ContractorRegistry,
        function: str,
        scope: Sequence[RealLike],
    ):
        super().__init__(solver, scope)
        self.registry = registry
        self.scope = list(scope)
        self.cont_index = registry.create_contractor([function], len(scope))
        self.marshalled = 0  # floats copied across the boundary, for tests

    def _gather(self) -> list[float]:
        bounds: list[float] = []
        for v in self.scope:
            bounds.append(v.lb())
            bounds.append(v.ub())
        self.marshalled += len(bounds)
        return bounds

    def _scatter(self, bounds: list[float]) -> None:
        for i, v in enumerate(self.scope):
            v.update_bounds(bounds[2 * i], bounds[2 * i + 1])

    def propagate(self) -> None:
        bounds = self._gather()
        status = contract(self.registry, self.cont_index, bounds)
        if status == ContractStatus.FAIL:
            raise Contradiction(f"continuous constraint {self.cont_index} infeasible")
        if status == ContractStatus.ENTAILED:
            self._scatter(bounds)
            self.set_passive()
        elif status == ContractStatus.CONTRACT:
            self._scatter(bounds)
        # NOTHING: no deduction


class ReifiedReal(Propagator):
    """b = 1 iff a continuous inequality holds.

    Only inequality relations are supported: the negation of an equality
    is not an inequality conjunction, so equalities are rejected when the
    model is built.
    """

    def __init__(
        self,
        solver: Solver,
        registry: ContractorRegistry,
        control: IntVariable,
        function: str,
        scope: Sequence[RealLike],
    ):
        relation = parse(function, len(scope))
        if relation.op == "=":
            raise ValueError("cannot reify an equality relation")
        if not (0 <= control.lb() and control.ub() <= 1):
            raise ValueError("reification control variable must be 0/1")
        super().__init__(solver, (control, *scope))
        self.registry = registry
        self.control = control
        self.scope = list(scope)
        self.cont_pos = registry.create_contractor([function], len(scope))
        self.cont_neg = registry.create_contractor(
            [to_source(negate(relation))], len(scope)
        )

    def _gather(self) -> list[float]:
        bounds: list[float] = []
        for v in self.scope:
            bounds.append(v.lb())
            bounds.append(v.ub())
        return bounds

    def _scatter(self, bounds: list[float]) -> None:
        for i, v in enumerate(self.scope):
            v.update_bounds(bounds[2 * i], bounds[2 * i + 1])

    def propagate(self) -> None:
        if self.control.is_instantiated():
            cont = self.cont_pos if self.control.value() == 1 else self.cont_neg
            bounds = self._gather()
            status = contract(self.registry, cont, bounds)
            if status == ContractStatus.FAIL:
                raise Contradiction("reified constraint infeasible")
            if status == ContractStatus.ENTAILED:
                self._scatter(bounds)
                self.set_passive()
            elif status == ContractStatus.CONTRACT:
                self._scatter(bounds)
            return
        # probe on scratch bounds; domains must not move
        bounds = self._gather()
        probe = list(bounds)
        status = contract(self.registry, self.cont_pos, probe)
        if status == ContractStatus.FAIL:
            # no point satisfies the relation
            self.control.instantiate(0)
        elif status == ContractStatus.ENTAILED and probe == bounds:
            # every point of the current box satisfies the relation
            self.control.instantiate(1)
            self.set_passive()
