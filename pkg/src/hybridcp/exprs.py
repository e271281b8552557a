"""Parsing and evaluation of (in)equation strings over indexed variables.

The surface language is the one the model files and the contractor
registry speak: variables are written ``{k}`` where ``k`` indexes the
contractor's scope, numeric literals are non-negative decimals
(optionally with an exponent), ``+ - * /`` carry the usual precedence
with unary minus binding tightest, and every other operator is spelled
as a named function call, e.g. ``abs({0}-{3})`` or ``pow({1},3)``.
``min``, ``max``, ``pow`` and ``atan2`` take exactly two arguments; the
remaining functions take one.  A relation string contains exactly one
relational operator from ``= < > <= >=``.

``parse`` yields a :class:`Relation` over :class:`ExprNode` trees;
``evaluate`` computes the natural interval extension of a tree over a
:class:`~hybridcp.intervals.Box`; ``to_source`` pretty-prints with
minimal parentheses such that re-parsing reproduces the tree.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .intervals import Box, Interval, binary_op, point, unary_op


class ParseError(ValueError):
    """Syntax or arity error in a relation string, with its position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "ExprNode"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "ExprNode"
    right: "ExprNode"


ExprNode = Union[Const, Var, Unary, Binary]

REL_OPS = ("<=", ">=", "=", "<", ">")

UNARY_FUNCTIONS = frozenset(
    "sign abs sqr sqrt exp log cos sin tan acos asin atan "
    "cosh sinh tanh acosh asinh atanh".split()
)
BINARY_FUNCTIONS = frozenset(("min", "max", "pow", "atan2"))


@dataclass(frozen=True)
class Relation:
    lhs: ExprNode
    op: str
    rhs: ExprNode

    def __post_init__(self) -> None:
        if self.op not in REL_OPS:
            raise ValueError(f"unknown relational operator {self.op!r}")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)
  | (?P<var>\{(\d+)\})
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<relop><=|>=|=|<|>)
  | (?P<sym>[-+*/(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int
    value: float = 0.0
    index: int = -1


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(source)
    while i < n:
        m = _TOKEN_RE.match(source, i)
        if m is None:
            raise ParseError(f"unexpected character {source[i]!r}", i)
        if m.lastgroup != "ws":
            kind = m.lastgroup
            text = m.group()
            if kind == "number":
                tokens.append(_Token("number", text, i, value=float(text)))
            elif kind == "var":
                tokens.append(_Token("var", text, i, index=int(text[1:-1])))
            else:
                tokens.append(_Token(kind, text, i))  # name / relop / sym
        i = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str, arity: int):
        self.tokens = _tokenize(source)
        self.arity = arity
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, text: str) -> None:
        tok = self.peek()
        if tok.kind != "sym" or tok.text != text:
            raise ParseError(f"expected {text!r}", tok.pos)
        self.advance()

    def parse_relation(self) -> Relation:
        lhs = self.parse_expr()
        tok = self.peek()
        if tok.kind != "relop":
            raise ParseError("missing relational operator", tok.pos)
        self.advance()
        rhs = self.parse_expr()
        trailing = self.peek()
        if trailing.kind != "end":
            raise ParseError(f"unexpected trailing {trailing.text!r}", trailing.pos)
        return Relation(lhs, tok.text, rhs)

    def parse_expr(self) -> ExprNode:
        node = self.parse_term()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in "+-":
                self.advance()
                rhs = self.parse_term()
                node = Binary("add" if tok.text == "+" else "sub", node, rhs)
            else:
                return node

    def parse_term(self) -> ExprNode:
        node = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in "*/":
                self.advance()
                rhs = self.parse_factor()
                node = Binary("mul" if tok.text == "*" else "div", node, rhs)
            else:
                return node

    def parse_factor(self) -> ExprNode:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "-":
            self.advance()
            return Unary("neg", self.parse_factor())
        return self.parse_atom()

    def parse_atom(self) -> ExprNode:
        tok = self.advance()
        if tok.kind == "number":
            return Const(tok.value)
        if tok.kind == "var":
            if not (0 <= tok.index < self.arity):
                raise ParseError(
                    f"variable {{{tok.index}}} out of range for arity {self.arity}",
                    tok.pos,
                )
            return Var(tok.index)
        if tok.kind == "name":
            name = tok.text
            if name in UNARY_FUNCTIONS:
                self.expect_sym("(")
                arg = self.parse_expr()
                self.expect_sym(")")
                return Unary(name, arg)
            if name in BINARY_FUNCTIONS:
                self.expect_sym("(")
                first = self.parse_expr()
                self.expect_sym(",")
                second = self.parse_expr()
                self.expect_sym(")")
                return Binary(name, first, second)
            raise ParseError(f"unknown function {name!r}", tok.pos)
        if tok.kind == "sym" and tok.text == "(":
            inner = self.parse_expr()
            self.expect_sym(")")
            return inner
        raise ParseError(
            f"unexpected {tok.text!r}" if tok.text else "unexpected end of input",
            tok.pos,
        )


def parse(source: str, arity: int) -> Relation:
    """Parse a relation string against a scope of ``arity`` variables."""
    return _Parser(source, arity).parse_relation()


def parse_expression(source: str, arity: int) -> ExprNode:
    """Parse a bare expression (no relational operator); used by tests."""
    parser = _Parser(source, arity)
    node = parser.parse_expr()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(f"unexpected trailing {trailing.text!r}", trailing.pos)
    return node


def evaluate(node: ExprNode, box: Box) -> Interval:
    """Natural interval extension of ``node`` over ``box``."""
    if isinstance(node, Const):
        return point(node.value)
    if isinstance(node, Var):
        return box[node.index]
    if isinstance(node, Unary):
        return unary_op(node.op, evaluate(node.operand, box))
    return binary_op(node.op, evaluate(node.left, box), evaluate(node.right, box))


# ---------------------------------------------------------------------------
# Pretty-printing.  Precedence levels: additive 1, multiplicative 2,
# unary minus 3, atoms and calls 4.
# ---------------------------------------------------------------------------

_SYMBOL = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


def _prec(node: ExprNode) -> int:
    if isinstance(node, Binary) and node.op in ("add", "sub"):
        return 1
    if isinstance(node, Binary) and node.op in ("mul", "div"):
        return 2
    if isinstance(node, Unary) and node.op == "neg":
        return 3
    return 4


def _fmt_number(value: float) -> str:
    if math.isinf(value):
        # no infinity literal in the grammar; an overflowing literal
        # parses back to the same value
        return "1e999" if value > 0 else "-1e999"
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def node_to_source(node: ExprNode) -> str:
    if isinstance(node, Const):
        return _fmt_number(node.value)
    if isinstance(node, Var):
        return f"{{{node.index}}}"
    if isinstance(node, Unary):
        if node.op == "neg":
            inner = node_to_source(node.operand)
            if _prec(node.operand) < 3:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{node.op}({node_to_source(node.operand)})"
    if node.op in _SYMBOL:
        mine = _prec(node)
        left = node_to_source(node.left)
        if _prec(node.left) < mine:
            left = f"({left})"
        right = node_to_source(node.right)
        # left-associative operators: a right child at the same level
        # needs parentheses to survive a round trip
        if _prec(node.right) <= mine:
            right = f"({right})"
        return f"{left}{_SYMBOL[node.op]}{right}"
    return f"{node.op}({node_to_source(node.left)},{node_to_source(node.right)})"


def to_source(relation: Relation) -> str:
    return f"{node_to_source(relation.lhs)}{relation.op}{node_to_source(relation.rhs)}"


_NEGATED = {"<": ">=", "<=": ">", ">": "<=", ">=": "<"}


def negate(relation: Relation) -> Relation:
    """Logical negation; defined for inequalities only."""
    if relation.op not in _NEGATED:
        raise ValueError("cannot negate an equality relation")
    return Relation(relation.lhs, _NEGATED[relation.op], relation.rhs)
