"""Model documents: validation and construction of solver instances.

A model is a JSON object with four sections:

``variables``
    ``ints``: ``{name, lb, ub, enumerated?}`` (enumerated domains can
    take holes; bounded ones are contiguous ranges).
    ``reals``: ``{name, lb, ub, precision}``.
    ``views``: ``{name, of, precision}`` exposing the integer variable
    ``of`` to continuous constraints.

``constraints``
    ``{"type": "alldifferent", "vars": [...]}``
    ``{"type": "element", "value": v, "table": [...], "index": i}``
    ``{"type": "sum", "vars": [...], "total": t}``
    ``{"type": "real", "functions": [...], "scope": [...]}`` where each
    function string indexes the scope with ``{k}``
    ``{"type": "reified", "control": b, "function": f, "scope": [...]}``

``search``
    ``{"strategy": "first_fail_min", "vars": [...]}``; the only strategy
    is first-fail variable order with minimum-value branching.

``objective``
    ``{"minimize": name}`` or ``{"satisfy": true}`` (the default).

Validation failures raise :class:`ModelError` naming the offending
field.  Construction returns a :class:`BuiltModel` ready for the search
driver.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from .contractor import ContractorRegistry
from .exprs import ParseError
from .fd import AllDifferent, Element, EnumeratedDomain, IntVariable, RangeDomain, Solver, Sum
from .real import RealPropagator, RealVariable, RealView, ReifiedReal


class ModelError(ValueError):
    """A model document failed validation; the message names the field."""


@dataclass
class BuiltModel:
    solver: Solver
    registry: ContractorRegistry
    decision_vars: list[IntVariable]
    objective: Optional[Union[IntVariable, RealVariable, RealView]]
    objective_name: Optional[str] = None
    real_names: list[str] = field(default_factory=list)


def _require(cond: bool, where: str, message: str) -> None:
    if not cond:
        raise ModelError(f"{where}: {message}")


def _get_str(obj: dict, key: str, where: str) -> str:
    _require(key in obj, where, f"missing field {key!r}")
    value = obj[key]
    _require(isinstance(value, str), f"{where}.{key}", "expected a string")
    return value


def _get_int(obj: dict, key: str, where: str) -> int:
    _require(key in obj, where, f"missing field {key!r}")
    value = obj[key]
    _require(
        isinstance(value, int) and not isinstance(value, bool),
        f"{where}.{key}",
        "expected an integer",
    )
    return value


def _get_number(obj: dict, key: str, where: str) -> float:
    _require(key in obj, where, f"missing field {key!r}")
    value = obj[key]
    _require(
        isinstance(value, (int, float)) and not isinstance(value, bool),
        f"{where}.{key}",
        "expected a number",
    )
    value = float(value)
    _require(not math.isnan(value), f"{where}.{key}", "cannot be NaN")
    return value


def load_model(path: str) -> dict:
    """Read and syntactically validate a model file; returns the raw dict."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except OSError as exc:
        raise ModelError(f"cannot read model file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file is not valid JSON: {exc}") from None
    _require(isinstance(document, dict), "document", "top level must be an object")
    return document


def build_model(document: dict) -> BuiltModel:
    """Validate ``document`` fully and construct the solver for it."""
    solver = Solver()
    registry = ContractorRegistry()

    variables = document.get("variables")
    _require(isinstance(variables, dict), "variables", "missing or not an object")

    int_vars: dict[str, IntVariable] = {}
    for k, spec in enumerate(_expect_list(variables, "ints", optional=True)):
        where = f"variables.ints[{k}]"
        _require(isinstance(spec, dict), where, "expected an object")
        name = _get_str(spec, "name", where)
        _require(name not in int_vars, where, f"duplicate variable name {name!r}")
        lb = _get_int(spec, "lb", where)
        ub = _get_int(spec, "ub", where)
        _require(lb <= ub, where, f"empty domain [{lb}, {ub}]")
        enumerated = spec.get("enumerated", False)
        _require(isinstance(enumerated, bool), f"{where}.enumerated", "expected a boolean")
        if enumerated:
            var = solver.new_int_var(name, EnumeratedDomain(range(lb, ub + 1)))
        else:
            var = solver.new_int_var(name, RangeDomain(lb, ub))
        int_vars[name] = var

    real_likes: dict[str, Union[RealVariable, RealView]] = {}
    for k, spec in enumerate(_expect_list(variables, "reals", optional=True)):
        where = f"variables.reals[{k}]"
        _require(isinstance(spec, dict), where, "expected an object")
        name = _get_str(spec, "name", where)
        _require(name not in real_likes, where, f"duplicate variable name {name!r}")
        _require(name not in int_vars, where, f"name {name!r} already used by an int")
        lb = _get_number(spec, "lb", where)
        ub = _get_number(spec, "ub", where)
        _require(lb <= ub, where, f"empty domain [{lb}, {ub}]")
        precision = _get_number(spec, "precision", where)
        _require(precision > 0.0, f"{where}.precision", "must be positive")
        real_likes[name] = RealVariable(solver, name, lb, ub, precision)

    for k, spec in enumerate(_expect_list(variables, "views", optional=True)):
        where = f"variables.views[{k}]"
        _require(isinstance(spec, dict), where, "expected an object")
        name = _get_str(spec, "name", where)
        _require(
            name not in real_likes and name not in int_vars,
            where,
            f"duplicate variable name {name!r}",
        )
        of = _get_str(spec, "of", where)
        _require(of in int_vars, f"{where}.of", f"unknown integer variable {of!r}")
        precision = _get_number(spec, "precision", where)
        _require(precision > 0.0, f"{where}.precision", "must be positive")
        real_likes[name] = RealView(int_vars[of], precision)

    def resolve_int(name: str, where: str) -> IntVariable:
        _require(name in int_vars, where, f"unknown integer variable {name!r}")
        return int_vars[name]

    def resolve_real(name: str, where: str) -> Union[RealVariable, RealView]:
        _require(name in real_likes, where, f"unknown real variable {name!r}")
        return real_likes[name]

    constraints = document.get("constraints", [])
    _require(isinstance(constraints, list), "constraints", "expected a list")
    for k, spec in enumerate(constraints):
        where = f"constraints[{k}]"
        _require(isinstance(spec, dict), where, "expected an object")
        kind = _get_str(spec, "type", where)
        if kind == "alldifferent":
            names = _expect_str_list(spec, "vars", where)
            _require(len(names) >= 2, f"{where}.vars", "needs at least two variables")
            scope = [resolve_int(n, f"{where}.vars") for n in names]
            for var in scope:
                _require(
                    var.is_enumerated,
                    f"{where}.vars",
                    f"{var.name!r} must be enumerated for alldifferent",
                )
            solver.post(AllDifferent(solver, scope))
        elif kind == "element":
            value = resolve_int(_get_str(spec, "value", where), f"{where}.value")
            index = resolve_int(_get_str(spec, "index", where), f"{where}.index")
            table = spec.get("table")
            _require(
                isinstance(table, list) and len(table) > 0,
                f"{where}.table",
                "expected a non-empty list",
            )
            for v in table:
                _require(
                    isinstance(v, int) and not isinstance(v, bool),
                    f"{where}.table",
                    "entries must be integers",
                )
            solver.post(Element(solver, value, table, index))
        elif kind == "sum":
            names = _expect_str_list(spec, "vars", where)
            _require(len(names) >= 1, f"{where}.vars", "needs at least one variable")
            terms = [resolve_int(n, f"{where}.vars") for n in names]
            total = resolve_int(_get_str(spec, "total", where), f"{where}.total")
            solver.post(Sum(solver, terms, total))
        elif kind == "real":
            functions = _expect_str_list(spec, "functions", where)
            _require(len(functions) >= 1, f"{where}.functions", "needs at least one function")
            scope_names = _expect_str_list(spec, "scope", where)
            scope = [resolve_real(n, f"{where}.scope") for n in scope_names]
            for text in functions:
                try:
                    solver.post(RealPropagator(solver, registry, text, scope))
                except ParseError as exc:
                    raise ModelError(f"{where}.functions: {exc}") from None
        elif kind == "reified":
            control = resolve_int(_get_str(spec, "control", where), f"{where}.control")
            _require(
                control.lb() >= 0 and control.ub() <= 1,
                f"{where}.control",
                "control variable domain must lie within {0, 1}",
            )
            function = _get_str(spec, "function", where)
            scope_names = _expect_str_list(spec, "scope", where)
            scope = [resolve_real(n, f"{where}.scope") for n in scope_names]
            try:
                solver.post(ReifiedReal(solver, registry, control, function, scope))
            except ParseError as exc:
                raise ModelError(f"{where}.function: {exc}") from None
            except ValueError as exc:
                raise ModelError(f"{where}.function: {exc}") from None
        else:
            raise ModelError(f"{where}.type: unknown constraint type {kind!r}")

    search = document.get("search")
    decision_vars: list[IntVariable] = []
    if search is not None:
        _require(isinstance(search, dict), "search", "expected an object")
        strategy = _get_str(search, "strategy", "search")
        _require(
            strategy == "first_fail_min",
            "search.strategy",
            f"unknown strategy {strategy!r}",
        )
        names = _expect_str_list(search, "vars", "search")
        decision_vars = [resolve_int(n, "search.vars") for n in names]
    if not decision_vars:
        decision_vars = list(int_vars.values())

    objective_spec = document.get("objective")
    objective = None
    objective_name = None
    if objective_spec is not None:
        _require(isinstance(objective_spec, dict), "objective", "expected an object")
        if "minimize" in objective_spec:
            objective_name = objective_spec["minimize"]
            _require(
                isinstance(objective_name, str), "objective.minimize", "expected a string"
            )
            if objective_name in real_likes:
                objective = real_likes[objective_name]
            elif objective_name in int_vars:
                objective = int_vars[objective_name]
            else:
                raise ModelError(
                    f"objective.minimize: unknown variable {objective_name!r}"
                )
        else:
            _require(
                objective_spec.get("satisfy") is True,
                "objective",
                'expected {"minimize": name} or {"satisfy": true}',
            )

    real_names = [
        name for name, v in real_likes.items() if isinstance(v, RealVariable)
    ]
    return BuiltModel(
        solver=solver,
        registry=registry,
        decision_vars=decision_vars,
        objective=objective,
        objective_name=objective_name,
        real_names=real_names,
    )


def _expect_list(obj: dict, key: str, optional: bool = False) -> list:
    value = obj.get(key)
    if value is None and optional:
        return []
    _require(isinstance(value, list), f"variables.{key}", "expected a list")
    return value


def _expect_str_list(obj: dict, key: str, where: str) -> list[str]:
    value = obj.get(key)
    _require(isinstance(value, list), f"{where}.{key}", "expected a list")
    for item in value:
        _require(isinstance(item, str), f"{where}.{key}", "entries must be strings")
    return value
