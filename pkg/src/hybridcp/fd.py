"""Finite-domain core: domains, trail, propagation queue, propagators.

State restoration is delta-based.  Every domain mutation pushes an undo
closure on the shared :class:`Trail`; backtracking pops and runs them in
reverse, restoring domains bit-exactly.  Propagators are scheduled into
a FIFO queue when a watched variable changes; a ``scheduled`` flag keeps
each propagator in the queue at most once.  A propagator that proves its
constraint entailed can set itself passive for the rest of the subtree
(the flag is trailed, so backtracking reactivates it).

Domain wipeout raises :class:`Contradiction`, which search catches.
"""
from __future__ import annotations

from collections import deque
from typing import Callable, Iterable, Optional, Sequence


class Contradiction(Exception):
    """A domain became empty or a constraint is violated."""


class Trail:
    """Stack of undo closures; marks delimit choice points."""

    def __init__(self) -> None:
        self._entries: list[Callable[[], None]] = []

    def record(self, undo: Callable[[], None]) -> None:
        self._entries.append(undo)

    def mark(self) -> int:
        return len(self._entries)

    def undo_to(self, mark: int) -> None:
        entries = self._entries
        while len(entries) > mark:
            entries.pop()()

    def __len__(self) -> int:
        return len(self._entries)


class EnumeratedDomain:
    """Sparse-set over an explicit value list.

    The first ``size`` slots of ``dense`` are the live values.  Removal
    swaps the victim to the live/dead frontier and shrinks ``size``;
    restoring the old size resurrects exactly the removed values, so a
    single integer per change is enough for bit-exact backtracking.
    """

    __slots__ = ("dense", "position", "size")

    def __init__(self, values: Iterable[int]):
        vals = sorted(set(values))
        if not vals:
            raise ValueError("empty initial domain")
        self.dense: list[int] = vals
        self.position: dict[int, int] = {v: i for i, v in enumerate(vals)}
        self.size: int = len(vals)

    def contains(self, value: int) -> bool:
        pos = self.position.get(value)
        return pos is not None and pos < self.size

    def values(self) -> list[int]:
        return sorted(self.dense[: self.size])

    def min(self) -> int:
        return min(self.dense[: self.size])

    def max(self) -> int:
        return max(self.dense[: self.size])

    def _swap_out(self, value: int) -> None:
        pos = self.position[value]
        last = self.size - 1
        other = self.dense[last]
        self.dense[pos], self.dense[last] = other, value
        self.position[other] = pos
        self.position[value] = last
        self.size = last


class RangeDomain:
    """Contiguous integer domain kept as a pair of bounds.

    Cannot represent interior holes: removing a strictly interior value
    is a sound no-op.  Branching only ever removes at a bound, and
    bounds-consistent propagators only move bounds, so nothing is lost
    where it matters.
    """

    __slots__ = ("lb", "ub")

    def __init__(self, lb: int, ub: int):
        if lb > ub:
            raise ValueError("empty initial domain")
        self.lb = lb
        self.ub = ub

    def contains(self, value: int) -> bool:
        return self.lb <= value <= self.ub

    def values(self) -> list[int]:
        return list(range(self.lb, self.ub + 1))

    def min(self) -> int:
        return self.lb

    def max(self) -> int:
        return self.ub


class IntVariable:
    """Integer variable bound to a solver's trail and queue."""

    def __init__(self, solver: "Solver", name: str, domain):
        self.solver = solver
        self.name = name
        self.domain = domain
        self.id = -1  # assigned by the solver
        self.watchers: list["Propagator"] = []

    @property
    def is_enumerated(self) -> bool:
        return isinstance(self.domain, EnumeratedDomain)

    def attach_watcher(self, propagator: "Propagator") -> None:
        self.watchers.append(propagator)

    def lb(self) -> int:
        return self.domain.min()

    def ub(self) -> int:
        return self.domain.max()

    def size(self) -> int:
        dom = self.domain
        if isinstance(dom, EnumeratedDomain):
            return dom.size
        return dom.ub - dom.lb + 1

    def contains(self, value: int) -> bool:
        return self.domain.contains(value)

    def values(self) -> list[int]:
        return self.domain.values()

    def is_instantiated(self) -> bool:
        return self.size() == 1

    def value(self) -> int:
        if not self.is_instantiated():
            raise ValueError(f"{self.name} is not instantiated")
        return self.domain.min()

    def _changed(self) -> None:
        self.solver.on_change(self)

    # -- mutations ----------------------------------------------------

    def remove_value(self, value: int) -> bool:
        dom = self.domain
        if isinstance(dom, EnumeratedDomain):
            if not dom.contains(value):
                return False
            old_size = dom.size
            dom._swap_out(value)
            self.solver.trail.record(lambda: setattr(dom, "size", old_size))
            if dom.size == 0:
                raise Contradiction(f"{self.name} has no values left")
            self._changed()
            return True
        if value == dom.lb:
            return self.update_lb(value + 1)
        if value == dom.ub:
            return self.update_ub(value - 1)
        return False  # interior hole: not representable, sound to keep

    def update_lb(self, new_lb: int) -> bool:
        dom = self.domain
        if isinstance(dom, RangeDomain):
            if new_lb <= dom.lb:
                return False
            old = dom.lb
            dom.lb = new_lb
            self.solver.trail.record(lambda: setattr(dom, "lb", old))
            if dom.lb > dom.ub:
                raise Contradiction(f"{self.name} bounds crossed")
            self._changed()
            return True
        changed = False
        for v in [v for v in dom.dense[: dom.size] if v < new_lb]:
            changed |= self.remove_value(v)
        return changed

    def update_ub(self, new_ub: int) -> bool:
        dom = self.domain
        if isinstance(dom, RangeDomain):
            if new_ub >= dom.ub:
                return False
            old = dom.ub
            dom.ub = new_ub
            self.solver.trail.record(lambda: setattr(dom, "ub", old))
            if dom.lb > dom.ub:
                raise Contradiction(f"{self.name} bounds crossed")
            self._changed()
            return True
        changed = False
        for v in [v for v in dom.dense[: dom.size] if v > new_ub]:
            changed |= self.remove_value(v)
        return changed

    def instantiate(self, value: int) -> bool:
        if not self.contains(value):
            raise Contradiction(f"{self.name} cannot take value {value}")
        dom = self.domain
        if isinstance(dom, EnumeratedDomain):
            changed = False
            for v in [v for v in dom.dense[: dom.size] if v != value]:
                changed |= self.remove_value(v)
            return changed
        changed = self.update_lb(value)
        changed |= self.update_ub(value)
        return changed

    def snapshot(self) -> tuple:
        dom = self.domain
        if isinstance(dom, EnumeratedDomain):
            return ("enum", tuple(dom.values()))
        return ("range", dom.lb, dom.ub)

    def __repr__(self) -> str:
        dom = self.domain
        if isinstance(dom, EnumeratedDomain):
            return f"{self.name}{set(dom.values())!r}"
        return f"{self.name}[{dom.lb}..{dom.ub}]"


class Propagator:
    """Base class: subclasses narrow domains in :meth:`propagate`."""

    def __init__(self, solver: "Solver", scope: Sequence[IntVariable]):
        self.solver = solver
        self.id = -1
        self.active = True
        self.scheduled = False
        for var in scope:
            var.attach_watcher(self)

    def propagate(self) -> None:
        raise NotImplementedError

    def set_passive(self) -> None:
        # entailed for the rest of this subtree; trailed for reactivation
        if self.active:
            self.active = False
            self.solver.trail.record(lambda: setattr(self, "active", True))


class Solver:
    """Variable store, trail, and the propagation fixpoint loop."""

    def __init__(self) -> None:
        self.trail = Trail()
        self.int_vars: list[IntVariable] = []
        self.real_vars: list = []  # RealVariable instances, appended on creation
        self.propagators: list[Propagator] = []
        self.queue: deque[Propagator] = deque()
        self.nodes = 0
        self.fails = 0

    def new_int_var(self, name: str, domain) -> IntVariable:
        var = IntVariable(self, name, domain)
        var.id = len(self.int_vars)
        self.int_vars.append(var)
        return var

    def enumerated_var(self, name: str, lb: int, ub: int) -> IntVariable:
        return self.new_int_var(name, EnumeratedDomain(range(lb, ub + 1)))

    def bounded_var(self, name: str, lb: int, ub: int) -> IntVariable:
        return self.new_int_var(name, RangeDomain(lb, ub))

    def post(self, propagator: Propagator) -> Propagator:
        propagator.id = len(self.propagators)
        self.propagators.append(propagator)
        self.schedule(propagator)
        return propagator

    def schedule(self, propagator: Propagator) -> None:
        if propagator.active and not propagator.scheduled:
            propagator.scheduled = True
            self.queue.append(propagator)

    def on_change(self, var: IntVariable) -> None:
        for p in var.watchers:
            self.schedule(p)

    def propagate(self) -> None:
        """Run the queue to fixpoint; on contradiction the queue is drained."""
        queue = self.queue
        try:
            while queue:
                prop = queue.popleft()
                prop.scheduled = False
                if prop.active:
                    prop.propagate()
        except Contradiction:
            while queue:
                queue.popleft().scheduled = False
            raise

    def snapshot(self) -> tuple:
        return tuple(v.snapshot() for v in self.int_vars)


# ---------------------------------------------------------------------------
# Propagators.
# ---------------------------------------------------------------------------


class AllDifferent(Propagator):
    """Arc-consistent all-different (matching + strongly connected components).

    Computes a maximum variable/value matching; no complete matching
    means failure.  An edge (x, v) survives iff it is in the matching,
    lies on an even-length alternating cycle (same SCC), or lies on an
    even alternating path from a free value (reachable from one).
    Everything else is removed.
    """

    def __init__(self, solver: "Solver", scope: Sequence[IntVariable]):
        for var in scope:
            if not var.is_enumerated:
                raise ValueError("alldifferent requires enumerated domains")
        super().__init__(solver, scope)
        self.vars = list(scope)

    def propagate(self) -> None:
        variables = self.vars
        n = len(variables)
        domains = [v.values() for v in variables]
        value_ids: dict[int, int] = {}
        for dom in domains:
            for v in dom:
                if v not in value_ids:
                    value_ids[v] = len(value_ids)
        m = len(value_ids)
        if m < n:
            raise Contradiction("alldifferent: fewer values than variables")

        # maximum matching, augmenting path per variable
        match_of_value = [-1] * m
        match_of_var = [-1] * n

        def try_augment(x: int, seen: list[bool]) -> bool:
            for v in domains[x]:
                vid = value_ids[v]
                if seen[vid]:
                    continue
                seen[vid] = True
                if match_of_value[vid] == -1 or try_augment(match_of_value[vid], seen):
                    match_of_value[vid] = x
                    match_of_var[x] = vid
                    return True
            return False

        for x in range(n):
            if not try_augment(x, [False] * m):
                raise Contradiction("alldifferent: no complete matching")

        # residual digraph: var -> matched value, value -> vars it could
        # take unmatched; plus reachability from free values
        ids_to_value = [0] * m
        for v, vid in value_ids.items():
            ids_to_value[vid] = v

        # nodes 0..n-1 are variables, n..n+m-1 are values
        succ: list[list[int]] = [[] for _ in range(n + m)]
        for x in range(n):
            succ[x].append(n + match_of_var[x])
        for x in range(n):
            for v in domains[x]:
                vid = value_ids[v]
                if vid != match_of_var[x]:
                    succ[n + vid].append(x)

        reachable = [False] * (n + m)
        stack = [n + vid for vid in range(m) if match_of_value[vid] == -1]
        for node in stack:
            reachable[node] = True
        while stack:
            node = stack.pop()
            for nxt in succ[node]:
                if not reachable[nxt]:
                    reachable[nxt] = True
                    stack.append(nxt)

        comp = _tarjan_scc(succ)

        for x in range(n):
            for v in domains[x]:
                vid = value_ids[v]
                if vid == match_of_var[x]:
                    continue
                if comp[x] == comp[n + vid]:
                    continue
                if reachable[n + vid]:
                    continue
                variables[x].remove_value(v)


def _tarjan_scc(succ: list[list[int]]) -> list[int]:
    # iterative Tarjan; returns component index per node
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for j in range(pi, len(succ[node])):
                nxt = succ[node][j]
                if index[nxt] == -1:
                    work[-1] = (node, j + 1)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == node:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return comp


class Element(Propagator):
    """value = table[index], arc-consistent on both variables.

    Indices outside the table are pruned, so the index domain may start
    larger than the table.
    """

    def __init__(
        self,
        solver: "Solver",
        value: IntVariable,
        table: Sequence[int],
        index: IntVariable,
    ):
        super().__init__(solver, (value, index))
        self.value = value
        self.table = list(table)
        self.index = index

    def propagate(self) -> None:
        table = self.table
        feasible = [
            i
            for i in self.index.values()
            if 0 <= i < len(table) and self.value.contains(table[i])
        ]
        if not feasible:
            raise Contradiction("element: no feasible index")
        if self.index.is_enumerated:
            for i in self.index.values():
                if i not in feasible:
                    self.index.remove_value(i)
        else:
            self.index.update_lb(feasible[0])
            self.index.update_ub(feasible[-1])
        feasible_values = {table[i] for i in feasible}
        if self.value.is_enumerated:
            for v in self.value.values():
                if v not in feasible_values:
                    self.value.remove_value(v)
        else:
            self.value.update_lb(min(feasible_values))
            self.value.update_ub(max(feasible_values))


class Sum(Propagator):
    """sum(vars) = total, bounds-consistent."""

    def __init__(self, solver: "Solver", terms: Sequence[IntVariable], total: IntVariable):
        super().__init__(solver, (*terms, total))
        self.terms = list(terms)
        self.total = total

    def propagate(self) -> None:
        lo = sum(t.lb() for t in self.terms)
        hi = sum(t.ub() for t in self.terms)
        self.total.update_lb(lo)
        self.total.update_ub(hi)
        total_lb, total_ub = self.total.lb(), self.total.ub()
        for t in self.terms:
            t.update_lb(total_lb - (hi - t.ub()))
            t.update_ub(total_ub - (lo - t.lb()))
