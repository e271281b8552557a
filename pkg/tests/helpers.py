"""Shared oracles and generators for the test suite.

Everything here is deliberately independent of the implementation under
test: ranges come from mpmath case analysis or exact rational
arithmetic, finite-domain answers from brute-force enumeration, and
sample evaluation from numpy's own math.  Nothing imports the interval
kernels' internals.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import product as iter_product

import numpy as np
from mpmath import mp, mpf

from hybridcp.exprs import Binary, Const, Relation, Unary, Var

mp.prec = 160

INF = math.inf
NINF = -math.inf


def mpf_of(x: float) -> mpf:
    # mpf(float) is exact, including infinities
    return mpf(x)


# ---------------------------------------------------------------------------
# True ranges by case analysis, at 160-bit precision.
# Each oracle takes float bounds and returns (lo, hi) as mpf, or None when
# the operation is defined nowhere on the inputs.  Values are closures of
# the exact image (so open endpoints are included, matching what a closed
# interval enclosure must cover anyway).
# ---------------------------------------------------------------------------


def _mp_corner_mul(x: float, y: float) -> mpf:
    if x == 0.0 or y == 0.0:
        return mpf(0)
    return mpf_of(x) * mpf_of(y)


def _mp_corner_div(x: float, y: float) -> mpf:
    # y != 0; x / +-inf tends to 0
    if x == 0.0:
        return mpf(0)
    if math.isinf(y):
        if math.isinf(x):
            return mpf(0) if (x > 0) == (y > 0) else mpf(0)
        return mpf(0)
    return mpf_of(x) / mpf_of(y)


def true_range_binary(op, alo, ahi, blo, bhi):
    if op == "add":
        return mpf_of(alo) + mpf_of(blo), mpf_of(ahi) + mpf_of(bhi)
    if op == "sub":
        return mpf_of(alo) - mpf_of(bhi), mpf_of(ahi) - mpf_of(blo)
    if op == "mul":
        corners = [
            _mp_corner_mul(alo, blo),
            _mp_corner_mul(alo, bhi),
            _mp_corner_mul(ahi, blo),
            _mp_corner_mul(ahi, bhi),
        ]
        return min(corners), max(corners)
    if op == "div":
        return _true_range_div(alo, ahi, blo, bhi)
    if op == "min":
        return min(mpf_of(alo), mpf_of(blo)), min(mpf_of(ahi), mpf_of(bhi))
    if op == "max":
        return max(mpf_of(alo), mpf_of(blo)), max(mpf_of(ahi), mpf_of(bhi))
    if op == "pow":
        return _true_range_pow(alo, ahi, blo, bhi)
    if op == "atan2":
        return _true_range_atan2(alo, ahi, blo, bhi)
    raise KeyError(op)


def _true_range_div(alo, ahi, blo, bhi):
    if blo == 0.0 and bhi == 0.0:
        return None
    if blo > 0.0 or bhi < 0.0:
        corners = [
            _mp_corner_div(alo, blo),
            _mp_corner_div(alo, bhi),
            _mp_corner_div(ahi, blo),
            _mp_corner_div(ahi, bhi),
        ]
        return min(corners), max(corners)
    # divisor straddles zero: the image hulls to rays
    if alo <= 0.0 <= ahi:
        return mpf(NINF), mpf(INF)
    if alo > 0.0:
        if blo < 0.0 and bhi > 0.0:
            return mpf(NINF), mpf(INF)
        if bhi > 0.0:  # blo == 0
            return _mp_corner_div(alo, bhi), mpf(INF)
        return mpf(NINF), _mp_corner_div(alo, blo)
    # ahi < 0
    if blo < 0.0 and bhi > 0.0:
        return mpf(NINF), mpf(INF)
    if bhi > 0.0:
        return mpf(NINF), _mp_corner_div(ahi, bhi)
    return _mp_corner_div(ahi, blo), mpf(INF)


def _mp_pow_corner(x: float, e: float) -> mpf:
    if x == 0.0:
        return mpf(0) if e > 0 else (mpf(1) if e == 0.0 else mpf(INF))
    if math.isinf(x):
        return mpf(INF) if e > 0 else (mpf(1) if e == 0.0 else mpf(0))
    if math.isinf(e):
        if x == 1.0:
            return mpf(1)
        return mpf(INF) if (x > 1.0) == (e > 0) else mpf(0)
    return mp.power(mpf_of(x), mpf_of(e))


def _true_range_pow(alo, ahi, blo, bhi):
    if blo == bhi and float(blo).is_integer() and abs(blo) <= 1024:
        return _true_range_int_pow(alo, ahi, int(blo))
    # non-integer exponents: non-negative bases only
    xlo, xhi = max(alo, 0.0), ahi
    if xhi < 0.0:
        return None
    if xlo > xhi:
        return None
    corners = [
        _mp_pow_corner(xlo, blo),
        _mp_pow_corner(xlo, bhi),
        _mp_pow_corner(xhi, blo),
        _mp_pow_corner(xhi, bhi),
    ]
    lo, hi = min(corners), max(corners)
    if lo == mpf(INF):
        return None
    return lo, hi


def _true_range_int_pow(alo, ahi, n):
    if n == 0:
        return mpf(1), mpf(1)
    if n < 0:
        rng = _true_range_int_pow(alo, ahi, -n)
        if rng is None:
            return None
        plo, phi = rng
        if plo == 0 and phi == 0:
            return None
        if plo < 0 < phi:
            # reciprocal of a zero-straddling range hulls to the whole line
            return mpf(NINF), mpf(INF)
        if plo == 0:
            return 1 / phi, mpf(INF)
        if phi == 0:
            return mpf(NINF), 1 / plo
        return min(1 / plo, 1 / phi), max(1 / plo, 1 / phi)
    def p(v):
        if math.isinf(v):
            return mpf(v) ** n if n % 2 == 1 or v > 0 else mpf(INF)
        return mpf_of(v) ** n
    if n % 2 == 1:
        return p(alo), p(ahi)
    if alo >= 0.0:
        return p(alo), p(ahi)
    if ahi <= 0.0:
        return p(ahi), p(alo)
    return mpf(0), max(p(alo), p(ahi))


def _true_range_atan2(ylo, yhi, xlo, xhi):
    pi = mp.pi
    if xlo >= 0.0 or ylo > 0.0 or yhi < 0.0:
        corners = [
            mp.atan2(mpf_of(ylo), mpf_of(xlo)),
            mp.atan2(mpf_of(ylo), mpf_of(xhi)),
            mp.atan2(mpf_of(yhi), mpf_of(xlo)),
            mp.atan2(mpf_of(yhi), mpf_of(xhi)),
        ]
        return min(corners), max(corners)
    return -pi, pi


_MONOTONE_UP = {
    "exp": mp.exp,
    "sinh": mp.sinh,
    "asinh": mp.asinh,
    "atan": mp.atan,
    "tanh": mp.tanh,
}


def true_range_unary(op, lo, hi):
    if op == "neg":
        return -mpf_of(hi), -mpf_of(lo)
    if op == "abs":
        if lo >= 0.0:
            return mpf_of(lo), mpf_of(hi)
        if hi <= 0.0:
            return -mpf_of(hi), -mpf_of(lo)
        return mpf(0), max(-mpf_of(lo), mpf_of(hi))
    if op == "sign":
        vals = []
        if lo < 0.0:
            vals.append(mpf(-1))
        if lo <= 0.0 <= hi:
            vals.append(mpf(0))
        if hi > 0.0:
            vals.append(mpf(1))
        return min(vals), max(vals)
    if op == "sqr":
        return _true_range_int_pow(lo, hi, 2)
    if op == "sqrt":
        if hi < 0.0:
            return None
        slo = mp.sqrt(mpf_of(max(lo, 0.0)))
        shi = mp.sqrt(mpf_of(hi)) if not math.isinf(hi) else mpf(INF)
        return slo, shi
    if op in _MONOTONE_UP:
        fn = _MONOTONE_UP[op]
        flo = mpf(NINF) if lo == NINF else fn(mpf_of(lo))
        fhi = mpf(INF) if hi == INF else fn(mpf_of(hi))
        if op == "exp":
            flo = mpf(0) if lo == NINF else flo
            fhi = mpf(INF) if hi == INF else fhi
        if op == "tanh":
            flo = mpf(-1) if lo == NINF else flo
            fhi = mpf(1) if hi == INF else fhi
        if op == "atan":
            flo = -mp.pi / 2 if lo == NINF else flo
            fhi = mp.pi / 2 if hi == INF else fhi
        return flo, fhi
    if op == "log":
        if hi <= 0.0:
            return None
        flo = mpf(NINF) if lo <= 0.0 else mp.log(mpf_of(lo))
        fhi = mpf(INF) if math.isinf(hi) else mp.log(mpf_of(hi))
        return flo, fhi
    if op == "cos":
        return _true_range_cos(lo, hi)
    if op == "sin":
        # sin(x) = cos(x - pi/2) exactly, at oracle precision
        return _true_range_periodic(lo, hi, mp.sin, mp.pi / 2, -mp.pi / 2)
    if op == "tan":
        return _true_range_tan(lo, hi)
    if op == "acos":
        if lo > 1.0 or hi < -1.0:
            return None
        clo = mp.acos(mpf_of(min(hi, 1.0)))
        chi = mp.acos(mpf_of(max(lo, -1.0)))
        return clo, chi
    if op == "asin":
        if lo > 1.0 or hi < -1.0:
            return None
        return mp.asin(mpf_of(max(lo, -1.0))), mp.asin(mpf_of(min(hi, 1.0)))
    if op == "cosh":
        if lo >= 0.0:
            mlo, mhi = lo, hi
        elif hi <= 0.0:
            mlo, mhi = -hi, -lo
        else:
            mlo, mhi = 0.0, max(-lo, hi)
        flo = mp.cosh(mpf_of(mlo)) if not math.isinf(mlo) else mpf(INF)
        fhi = mp.cosh(mpf_of(mhi)) if not math.isinf(mhi) else mpf(INF)
        return flo, fhi
    if op == "acosh":
        if hi < 1.0:
            return None
        flo = mp.acosh(mpf_of(max(lo, 1.0)))
        fhi = mpf(INF) if math.isinf(hi) else mp.acosh(mpf_of(hi))
        return flo, fhi
    if op == "atanh":
        if lo >= 1.0 or hi <= -1.0:
            return None
        flo = mpf(NINF) if lo <= -1.0 else mp.atanh(mpf_of(lo))
        fhi = mpf(INF) if hi >= 1.0 else mp.atanh(mpf_of(hi))
        return flo, fhi
    raise KeyError(op)


def _true_range_periodic(lo, hi, fn, max_offset, min_offset):
    # range of a 2*pi-periodic unit-amplitude function over [lo, hi]
    if math.isinf(lo) or math.isinf(hi) or (mpf_of(hi) - mpf_of(lo)) >= 2 * mp.pi:
        return mpf(-1), mpf(1)
    mlo, mhi = mpf_of(lo), mpf_of(hi)
    tau = 2 * mp.pi
    out_lo = min(fn(mlo), fn(mhi))
    out_hi = max(fn(mlo), fn(mhi))
    k0 = mp.floor((mlo - max_offset) / tau)
    for k in (k0, k0 + 1, k0 + 2):
        c = max_offset + k * tau
        if mlo <= c <= mhi:
            out_hi = mpf(1)
    k0 = mp.floor((mlo - min_offset) / tau)
    for k in (k0, k0 + 1, k0 + 2):
        c = min_offset + k * tau
        if mlo <= c <= mhi:
            out_lo = mpf(-1)
    return out_lo, out_hi


def _true_range_cos(lo, hi):
    return _true_range_periodic(lo, hi, mp.cos, mpf(0), mp.pi)


def _true_range_tan(lo, hi):
    if math.isinf(lo) or math.isinf(hi):
        return mpf(NINF), mpf(INF)
    mlo, mhi = mpf_of(lo), mpf_of(hi)
    if mhi - mlo >= mp.pi:
        return mpf(NINF), mpf(INF)
    # asymptote at pi/2 + k*pi inside the interval?
    k = mp.floor((mlo - mp.pi / 2) / mp.pi)
    for kk in (k, k + 1, k + 2):
        c = mp.pi / 2 + kk * mp.pi
        if mlo <= c <= mhi:
            return mpf(NINF), mpf(INF)
    return mp.tan(mlo), mp.tan(mhi)


# ---------------------------------------------------------------------------
# Enclosure checks.
# ---------------------------------------------------------------------------


def steps_up(value: float, target, limit: int) -> int:
    """Number of nextafter steps (up to ``limit``) from value to >= target."""
    v = value
    for k in range(limit + 1):
        if mpf_of(v) >= target:
            return k
        v = math.nextafter(v, INF)
    return limit + 1


def steps_down(value: float, target, limit: int) -> int:
    v = value
    for k in range(limit + 1):
        if mpf_of(v) <= target:
            return k
        v = math.nextafter(v, NINF)
    return limit + 1


def _fuzz(value) -> mpf:
    # allowance for the oracle's own 160-bit rounding, far below any
    # double-precision defect the tests are hunting for
    if mp.isinf(value):
        return mpf(0)
    return abs(value) * mpf(2) ** -140 + mpf(2) ** -1070


def enclosure_report(out_lo: float, out_hi: float, true_lo, true_hi, max_ulps: int):
    """Returns None when [out_lo, out_hi] encloses the true range within
    ``max_ulps`` of slack per bound, else a failure description."""
    if true_lo == mpf(NINF) and out_lo != NINF:
        return f"lower bound {out_lo!r} finite, true range unbounded below"
    if true_hi == mpf(INF) and out_hi != INF:
        return f"upper bound {out_hi!r} finite, true range unbounded above"
    if mpf_of(out_lo) > true_lo + _fuzz(true_lo):
        return f"lower bound {out_lo!r} above true {mp.nstr(true_lo, 25)}"
    if mpf_of(out_hi) < true_hi - _fuzz(true_hi):
        return f"upper bound {out_hi!r} below true {mp.nstr(true_hi, 25)}"
    if steps_up(out_lo, true_lo, max_ulps) > max_ulps:
        return f"lower bound {out_lo!r} more than {max_ulps} ulps below true"
    if steps_down(out_hi, true_hi, max_ulps) > max_ulps:
        return f"upper bound {out_hi!r} more than {max_ulps} ulps above true"
    return None


# ---------------------------------------------------------------------------
# Exact containment checks for single sampled points.
# Rational operators use Fraction arithmetic (exact); transcendental ones
# use the 160-bit oracle value.
# ---------------------------------------------------------------------------

RATIONAL_BINARY = frozenset(("add", "sub", "mul", "div", "min", "max"))
RATIONAL_UNARY = frozenset(("neg", "abs", "sign", "sqr"))


def exact_binary_value(op, x: float, y: float):
    fx, fy = Fraction(x), Fraction(y)
    if op == "add":
        return fx + fy
    if op == "sub":
        return fx - fy
    if op == "mul":
        return fx * fy
    if op == "div":
        return None if fy == 0 else fx / fy
    if op == "min":
        return min(fx, fy)
    if op == "max":
        return max(fx, fy)
    raise KeyError(op)


def exact_unary_value(op, x: float):
    fx = Fraction(x)
    if op == "neg":
        return -fx
    if op == "abs":
        return abs(fx)
    if op == "sign":
        return Fraction((fx > 0) - (fx < 0))
    if op == "sqr":
        return fx * fx
    raise KeyError(op)


def fraction_in(lo: float, hi: float, value: Fraction) -> bool:
    if math.isinf(lo):
        low_ok = lo < 0
    else:
        low_ok = Fraction(lo) <= value
    if math.isinf(hi):
        high_ok = hi > 0
    else:
        high_ok = value <= Fraction(hi)
    return low_ok and high_ok


def mp_in(lo: float, hi: float, value) -> bool:
    return (
        mpf_of(lo) - _fuzz(value) <= value
        and value <= mpf_of(hi) + _fuzz(value)
    )


MP_UNARY = {
    "sqrt": mp.sqrt,
    "exp": mp.exp,
    "log": mp.log,
    "cos": mp.cos,
    "sin": mp.sin,
    "tan": mp.tan,
    "acos": mp.acos,
    "asin": mp.asin,
    "atan": mp.atan,
    "cosh": mp.cosh,
    "sinh": mp.sinh,
    "tanh": mp.tanh,
    "acosh": mp.acosh,
    "asinh": mp.asinh,
    "atanh": mp.atanh,
}


def mp_point_unary(op, x: float):
    """Oracle value of a unary operator at a float point.

    None when the point lies outside the operator's natural domain.
    """
    if op == "sqrt":
        return None if x < 0.0 else mp.sqrt(mpf_of(x))
    if op == "log":
        return None if x <= 0.0 else mp.log(mpf_of(x))
    if op in ("acos", "asin"):
        if not -1.0 <= x <= 1.0:
            return None
    if op == "acosh" and x < 1.0:
        return None
    if op == "atanh" and not -1.0 < x < 1.0:
        return None
    return MP_UNARY[op](mpf_of(x))


def mp_point_binary(op, x: float, y: float):
    if op == "pow":
        if x > 0.0:
            return mp.power(mpf_of(x), mpf_of(y))
        if x == 0.0:
            if y > 0.0:
                return mpf(0)
            if y == 0.0:
                return mpf(1)
            return None
        if float(y).is_integer():
            return mp.power(mpf_of(x), int(y))
        return None
    if op == "atan2":
        if x == 0.0 and y == 0.0:
            return mpf(0)
        if x == 0.0 and y < 0.0:
            return None  # sign-of-zero boundary of the branch cut
        return mp.atan2(mpf_of(x), mpf_of(y))
    raise KeyError(op)


# ---------------------------------------------------------------------------
# Random generators.
# ---------------------------------------------------------------------------


def random_bound(rng: random.Random) -> float:
    roll = rng.random()
    if roll < 0.35:
        return rng.uniform(-10.0, 10.0)
    if roll < 0.55:
        return float(rng.randint(-8, 8))
    if roll < 0.75:
        magnitude = 10.0 ** rng.uniform(-8, 8)
        return magnitude if rng.random() < 0.5 else -magnitude
    if roll < 0.9:
        return rng.uniform(-1.0, 1.0)
    return rng.uniform(-1000.0, 1000.0)


def random_interval(rng: random.Random, allow_unbounded: bool = False):
    roll = rng.random()
    if allow_unbounded and roll < 0.08:
        if rng.random() < 0.5:
            return (NINF, random_bound(rng))
        return (random_bound(rng), INF)
    if roll < 0.18:
        v = random_bound(rng)
        return (v, v)
    a, b = random_bound(rng), random_bound(rng)
    return (min(a, b), max(a, b))


def sample_in(rng: random.Random, lo: float, hi: float) -> float:
    if lo == hi:
        return lo
    lo_f = max(lo, -1e12)
    hi_f = min(hi, 1e12)
    roll = rng.random()
    if roll < 0.15:
        return lo if not math.isinf(lo) else lo_f
    if roll < 0.3:
        return hi if not math.isinf(hi) else hi_f
    return rng.uniform(lo_f, hi_f)


def _interval_in(rng: random.Random, span_lo: float, span_hi: float):
    a = rng.uniform(span_lo, span_hi)
    b = rng.uniform(span_lo, span_hi)
    if rng.random() < 0.12:
        b = a
    return (min(a, b), max(a, b))


def unary_trial_interval(op, rng: random.Random, finite: bool = False):
    """Random input interval biased into the operator's interesting domain.

    With ``finite`` set, keeps bounds finite and moderate so a 4-ulp
    tightness comparison is meaningful.
    """
    if op in ("cos", "sin", "tan"):
        return _interval_in(rng, -50.0, 50.0)
    if op in ("acos", "asin", "atanh"):
        return _interval_in(rng, -1.3, 1.3) if rng.random() < 0.5 else _interval_in(rng, -1.0, 1.0)
    if op == "acosh":
        return _interval_in(rng, 0.5, 60.0)
    if op in ("log", "sqrt"):
        if rng.random() < 0.8:
            return _interval_in(rng, 0.0, 1e6) if rng.random() < 0.5 else _interval_in(rng, 0.0, 10.0)
        return random_interval(rng, allow_unbounded=not finite)
    if op in ("exp", "sinh", "cosh"):
        if rng.random() < 0.85:
            return _interval_in(rng, -30.0, 30.0)
        return _interval_in(rng, -700.0, 700.0)
    if op == "tanh":
        return _interval_in(rng, -40.0, 40.0)
    return random_interval(rng, allow_unbounded=not finite)


def binary_trial_intervals(op, rng: random.Random, finite: bool = False):
    if op == "pow":
        roll = rng.random()
        if roll < 0.55:
            base = _interval_in(rng, 0.0, 20.0)
        elif roll < 0.8:
            base = _interval_in(rng, -5.0, 20.0)
        else:
            base = random_interval(rng)
        if rng.random() < 0.5:
            e = float(rng.randint(-6, 8))
            expo = (e, e)
        else:
            expo = _interval_in(rng, -6.0, 6.0)
        return base, expo
    a = random_interval(rng, allow_unbounded=not finite)
    b = random_interval(rng, allow_unbounded=not finite)
    return a, b


def mp_eval(node, values):
    """Evaluate an expression tree at a float point in mp precision.

    Returns None when any subexpression leaves its natural domain.
    """
    kind = type(node).__name__
    if kind == "Const":
        return mpf_of(node.value)
    if kind == "Var":
        return mpf_of(values[node.index])
    if kind == "Unary":
        v = mp_eval(node.operand, values)
        if v is None:
            return None
        op = node.op
        if op == "neg":
            return -v
        if op == "abs":
            return abs(v)
        if op == "sign":
            return mpf((v > 0) - (v < 0))
        if op == "sqr":
            return v * v
        if op == "sqrt":
            return None if v < 0 else mp.sqrt(v)
        if op == "log":
            return None if v <= 0 else mp.log(v)
        if op in ("acos", "asin") and not -1 <= v <= 1:
            return None
        if op == "acosh" and v < 1:
            return None
        if op == "atanh" and not -1 < v < 1:
            return None
        return MP_UNARY[op](v)
    left = mp_eval(node.left, values)
    right = mp_eval(node.right, values)
    if left is None or right is None:
        return None
    op = node.op
    if op == "add":
        return left + right
    if op == "sub":
        return left - right
    if op == "mul":
        return left * right
    if op == "div":
        return None if right == 0 else left / right
    if op == "min":
        return min(left, right)
    if op == "max":
        return max(left, right)
    if op == "pow":
        if left > 0:
            return mp.power(left, right)
        if left == 0:
            if right > 0:
                return mpf(0)
            return mpf(1) if right == 0 else None
        if right == mp.floor(right):
            return mp.power(left, int(right))
        return None
    if op == "atan2":
        if left == 0 and right == 0:
            return mpf(0)
        if left == 0 and right < 0:
            return None
        return mp.atan2(left, right)
    raise KeyError(op)


def mp_satisfies(relation, values):
    """True/False when satisfaction at the point is provable at oracle
    precision; None when undefined or within oracle noise of the boundary."""
    lhs = mp_eval(relation.lhs, values)
    rhs = mp_eval(relation.rhs, values)
    if lhs is None or rhs is None:
        return None
    gap = lhs - rhs
    if mp.isnan(gap):
        return None
    noise = _fuzz(lhs) + _fuzz(rhs)
    if relation.op == "=":
        if abs(gap) <= noise:
            return None
        return False
    if relation.op in ("<=", "<"):
        if gap < -noise:
            return True
        if gap > noise:
            return False
        return None
    if gap > noise:
        return True
    if gap < -noise:
        return False
    return None


EXPR_UNARY_OPS = (
    "neg", "sign", "abs", "sqr", "sqrt", "exp", "log",
    "cos", "sin", "tan", "acos", "asin", "atan",
    "cosh", "sinh", "tanh", "acosh", "asinh", "atanh",
)
EXPR_BINARY_OPS = ("add", "sub", "mul", "div", "min", "max", "pow", "atan2")
REL_OPS = ("=", "<", ">", "<=", ">=")


def random_expr(rng: random.Random, arity: int, depth: int):
    if depth == 0 or rng.random() < 0.25:
        if arity > 0 and rng.random() < 0.6:
            return Var(rng.randrange(arity))
        return Const(rng.choice([0.0, 1.0, 2.0, 3.0, 0.5, 10.0, 1.5e-3, 7.25]))
    if rng.random() < 0.45:
        return Unary(rng.choice(EXPR_UNARY_OPS), random_expr(rng, arity, depth - 1))
    op = rng.choice(EXPR_BINARY_OPS)
    return Binary(op, random_expr(rng, arity, depth - 1), random_expr(rng, arity, depth - 1))


def random_relation(rng: random.Random, arity: int, depth: int) -> Relation:
    op = rng.choice(REL_OPS)
    return Relation(random_expr(rng, arity, depth), op, random_expr(rng, arity, depth))


def random_tame_expr(rng: random.Random, arity: int, depth: int):
    """Random expression over numerically mild operators.

    Keeps values in a range where double sampling classifies relation
    satisfaction reliably.
    """
    if depth == 0 or rng.random() < 0.3:
        if arity > 0 and rng.random() < 0.65:
            return Var(rng.randrange(arity))
        return Const(rng.choice([0.0, 0.5, 1.0, 2.0, 3.0, 0.25]))
    if rng.random() < 0.4:
        op = rng.choice(("neg", "abs", "sqr", "sin", "cos", "atan", "tanh", "sqrt"))
        return Unary(op, random_tame_expr(rng, arity, depth - 1))
    op = rng.choice(("add", "sub", "mul", "min", "max"))
    return Binary(op, random_tame_expr(rng, arity, depth - 1), random_tame_expr(rng, arity, depth - 1))


# ---------------------------------------------------------------------------
# Vectorised point evaluation of expression trees (numpy), for sampling
# relation satisfaction over many points at once.
# ---------------------------------------------------------------------------

_NP_UNARY = {
    "neg": np.negative,
    "sign": np.sign,
    "abs": np.abs,
    "sqr": np.square,
    "sqrt": np.sqrt,
    "exp": np.exp,
    "log": np.log,
    "cos": np.cos,
    "sin": np.sin,
    "tan": np.tan,
    "acos": np.arccos,
    "asin": np.arcsin,
    "atan": np.arctan,
    "cosh": np.cosh,
    "sinh": np.sinh,
    "tanh": np.tanh,
    "acosh": np.arccosh,
    "asinh": np.arcsinh,
    "atanh": np.arctanh,
}

_NP_BINARY = {
    "add": np.add,
    "sub": np.subtract,
    "mul": np.multiply,
    "div": np.divide,
    "min": np.minimum,
    "max": np.maximum,
    "pow": np.power,
    "atan2": np.arctan2,
}


def np_eval(node, points: np.ndarray) -> np.ndarray:
    """Evaluate an expression tree over points of shape (n_samples, n_vars).

    Undefined evaluations come back as NaN (numpy warnings suppressed).
    Matches the library's pow domain: a negative base is allowed only
    under a literal integer exponent, otherwise pow lives on x >= 0.
    """
    kind = type(node).__name__
    with np.errstate(all="ignore"):
        if kind == "Const":
            return np.full(points.shape[0], node.value)
        if kind == "Var":
            return points[:, node.index].copy()
        if kind == "Unary":
            return _NP_UNARY[node.op](np_eval(node.operand, points))
        left = np_eval(node.left, points)
        right = np_eval(node.right, points)
        if node.op == "pow" and not _integer_const(node.right):
            left = np.where(left < 0.0, np.nan, left)
        return _NP_BINARY[node.op](left, right)


def _integer_const(node) -> bool:
    return type(node).__name__ == "Const" and float(node.value).is_integer()


def np_satisfies(relation, points: np.ndarray, margin: float = 0.0) -> np.ndarray:
    """Boolean mask of points satisfying the relation (NaN never satisfies).

    A positive ``margin`` keeps only points that satisfy with clear slack,
    filtering out boundary cases that float sampling cannot classify.
    """
    with np.errstate(all="ignore"):
        lhs = np_eval(relation.lhs, points)
        rhs = np_eval(relation.rhs, points)
        scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        slack = margin * scale
        if relation.op == "=":
            mask = np.abs(lhs - rhs) <= slack
        elif relation.op in ("<=", "<"):
            mask = lhs <= rhs - slack if margin > 0.0 else lhs <= rhs
            if relation.op == "<" and margin == 0.0:
                mask = lhs < rhs
        else:
            mask = lhs >= rhs + slack if margin > 0.0 else lhs >= rhs
            if relation.op == ">" and margin == 0.0:
                mask = lhs > rhs
        return mask & ~np.isnan(lhs) & ~np.isnan(rhs)


# ---------------------------------------------------------------------------
# Brute-force finite-domain oracles.
# ---------------------------------------------------------------------------


def brute_force_solutions(doc: dict) -> list[dict]:
    """All integer assignments satisfying the document's FD constraints.

    Supports the pure finite-domain subset: alldifferent, element, sum.
    """
    names = []
    domains = []
    for spec in doc["variables"].get("ints", []):
        names.append(spec["name"])
        domains.append(range(spec["lb"], spec["ub"] + 1))
    solutions = []
    for combo in iter_product(*domains):
        assignment = dict(zip(names, combo))
        if all(_check_constraint(c, assignment) for c in doc.get("constraints", [])):
            solutions.append(assignment)
    return solutions


def _check_constraint(spec: dict, assignment: dict) -> bool:
    kind = spec["type"]
    if kind == "alldifferent":
        values = [assignment[n] for n in spec["vars"]]
        return len(set(values)) == len(values)
    if kind == "element":
        index = assignment[spec["index"]]
        table = spec["table"]
        if not (0 <= index < len(table)):
            return False
        return assignment[spec["value"]] == table[index]
    if kind == "sum":
        return sum(assignment[n] for n in spec["vars"]) == assignment[spec["total"]]
    raise KeyError(f"brute force cannot check constraint type {kind!r}")


def alldifferent_ac_bruteforce(domains: list[list[int]]) -> list[set[int]]:
    """Arc-consistent filtering of alldifferent by exhaustive extension.

    Value v stays in domain i iff some injective assignment of all
    variables uses v for variable i.  Plain depth-first search, no
    matching theory.
    """
    n = len(domains)

    def extensible(i: int, used: set[int], skip: int) -> bool:
        if i == skip:
            return extensible(i + 1, used, skip)
        if i >= n:
            return True
        for v in domains[i]:
            if v not in used:
                used.add(v)
                if extensible(i + 1, used, skip):
                    used.discard(v)
                    return True
                used.discard(v)
        return False

    out = []
    for i, dom in enumerate(domains):
        keep = set()
        for v in dom:
            if extensible(0, {v}, i):
                keep.add(v)
        out.append(keep)
    return out
