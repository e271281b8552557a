"""Hybrid finite-domain / continuous constraint solver.

Integer variables are handled by propagation and depth-first search;
continuous (in)equation systems are delegated to interval contractors
through a flat-bounds protocol narrow enough to cross a process or
language boundary unchanged.
"""

from .contractor import (
    ContractStatus,
    Contractor,
    ContractorRegistry,
    MalformedBoundsError,
    UnknownContractorError,
    contract,
    fixpoint_contract,
    hc4_revise,
)
from .exprs import ParseError, Relation, evaluate, parse, to_source
from .fd import (
    AllDifferent,
    Contradiction,
    Element,
    EnumeratedDomain,
    IntVariable,
    Propagator,
    RangeDomain,
    Solver,
    Sum,
    Trail,
)
from .intervals import EMPTY, Box, Interval, binary_op, inverse_op, unary_op
from .model import BuiltModel, ModelError, build_model, load_model
from .real import RealPropagator, RealVariable, RealView, ReifiedReal
from .search import (
    LimitReached,
    SearchResult,
    Solution,
    solve_minimize,
    solve_satisfy,
)

__version__ = "0.1.0"

__all__ = [
    "AllDifferent",
    "Box",
    "BuiltModel",
    "ContractStatus",
    "Contractor",
    "ContractorRegistry",
    "Contradiction",
    "Element",
    "EMPTY",
    "EnumeratedDomain",
    "IntVariable",
    "Interval",
    "LimitReached",
    "MalformedBoundsError",
    "ModelError",
    "ParseError",
    "Propagator",
    "RangeDomain",
    "RealPropagator",
    "RealVariable",
    "RealView",
    "ReifiedReal",
    "Relation",
    "SearchResult",
    "Solution",
    "Solver",
    "Sum",
    "Trail",
    "UnknownContractorError",
    "binary_op",
    "build_model",
    "contract",
    "evaluate",
    "fixpoint_contract",
    "hc4_revise",
    "inverse_op",
    "load_model",
    "parse",
    "solve_minimize",
    "solve_satisfy",
    "to_source",
    "unary_op",
]
