"""Outward-rounded interval arithmetic over IEEE-754 doubles.

An :class:`Interval` is a closed connected subset of the extended real
line, represented by a pair of ``float`` bounds with ``lo <= hi``.  The
empty set is the canonical sentinel ``(+inf, -inf)``; any constructor
call whose bounds are reversed (or that pins a bound at the wrong
infinity) normalises to that sentinel, and every operation maps empty
inputs to empty outputs.

Every operation is *sound*: the returned interval encloses the exact
mathematical image of the inputs.  Python offers no access to the FPU
rounding mode, so directed rounding is recovered after the fact:

* addition and subtraction compute the exact rounding error with the
  TwoSum trick and widen one ulp only when the error points the wrong
  way;
* multiplication, division, ``sqrt`` and integer powers compare the
  rounded result against the exact rational value (via
  ``float.as_integer_ratio``) and widen only when inexact;
* transcendental functions take the platform ``libm`` value and widen
  one ulp outward unconditionally.

Points of convention, chosen to match how the contractors consume these
primitives: ``0 * inf = 0`` inside interval multiplication (the image of
``{0} x U`` is ``{0}`` for any set ``U``), division by an interval
containing zero hulls the two resulting rays, and ``x ** 0 = [1, 1]``
for every ``x``.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

INF = math.inf
_MAX = sys.float_info.max
_TINY = math.nextafter(0.0, INF)  # smallest positive subnormal

_PI_UP = math.nextafter(math.pi, INF)
_PI_DOWN = math.nextafter(math.pi, -INF)
_HALF_PI_UP = math.nextafter(math.pi / 2, INF)
_TAU = math.tau


def _next_down(x: float) -> float:
    if x == -INF:
        return x
    return math.nextafter(x, -INF)


def _next_up(x: float) -> float:
    if x == INF:
        return x
    return math.nextafter(x, INF)


# ---------------------------------------------------------------------------
# Directed scalar kernels.
#
# Each returns a float guaranteed to be <= (down) or >= (up) the exact
# real-valued result of the operation on its float arguments.
# ---------------------------------------------------------------------------


def _add_down(a: float, b: float) -> float:
    s = a + b
    if math.isinf(s):
        if math.isinf(a) or math.isinf(b):
            return s
        # overflow: the exact sum lies strictly beyond the largest finite
        # float, so that float is a valid bound on the finite side
        return _MAX if s > 0 else -INF
    # TwoSum: err is the exact value of (a + b) - s
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s if err >= 0 else _next_down(s)


def _add_up(a: float, b: float) -> float:
    s = a + b
    if math.isinf(s):
        if math.isinf(a) or math.isinf(b):
            return s
        return -_MAX if s < 0 else INF
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s if err <= 0 else _next_up(s)


def _sub_down(a: float, b: float) -> float:
    return _add_down(a, -b)


def _sub_up(a: float, b: float) -> float:
    return _add_up(a, -b)


def _mul_cmp(a: float, b: float, p: float) -> int:
    # sign of a*b - p, exactly, for finite a, b, p
    na, da = a.as_integer_ratio()
    nb, db = b.as_integer_ratio()
    np_, dp = p.as_integer_ratio()
    lhs = na * nb * dp
    rhs = np_ * da * db
    return (lhs > rhs) - (lhs < rhs)


def _mul_down(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0  # includes the 0 * inf = 0 convention
    p = a * b
    if math.isinf(p):
        if math.isinf(a) or math.isinf(b):
            return p
        return _MAX if p > 0 else -INF
    c = _mul_cmp(a, b, p)
    return p if c >= 0 else _next_down(p)


def _mul_up(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if math.isinf(p):
        if math.isinf(a) or math.isinf(b):
            return p
        return -_MAX if p < 0 else INF
    c = _mul_cmp(a, b, p)
    return p if c <= 0 else _next_up(p)


def _div_cmp(a: float, b: float, q: float) -> int:
    # sign of a/b - q, exactly, for finite a, q and finite nonzero b
    na, da = a.as_integer_ratio()
    nb, db = b.as_integer_ratio()
    nq, dq = q.as_integer_ratio()
    diff = na * db * dq - nq * da * nb
    s = (diff > 0) - (diff < 0)
    return s if nb > 0 else -s


def _div_down(a: float, b: float) -> float:
    # callers guarantee b != 0
    if a == 0.0:
        return 0.0
    if math.isinf(b):
        if math.isinf(a):
            # quotient of two unbounded rays is unconstrained
            return -INF
        return 0.0 if (a > 0) == (b > 0) else -_TINY
    q = a / b
    if math.isinf(q):
        if math.isinf(a):
            return q
        return _MAX if q > 0 else -INF
    c = _div_cmp(a, b, q)
    return q if c >= 0 else _next_down(q)


def _div_up(a: float, b: float) -> float:
    if a == 0.0:
        return 0.0
    if math.isinf(b):
        if math.isinf(a):
            return INF
        return _TINY if (a > 0) == (b > 0) else 0.0
    q = a / b
    if math.isinf(q):
        if math.isinf(a):
            return q
        return -_MAX if q < 0 else INF
    c = _div_cmp(a, b, q)
    return q if c <= 0 else _next_up(q)


def _sqrt_cmp(x: float, s: float) -> int:
    # sign of x - s*s, exactly; equals sign of sqrt(x) - s for s >= 0
    nx, dx = x.as_integer_ratio()
    ns, ds = s.as_integer_ratio()
    lhs = nx * ds * ds
    rhs = ns * ns * dx
    return (lhs > rhs) - (lhs < rhs)


def _sqrt_down(x: float) -> float:
    if x == 0.0:
        return 0.0
    if x == INF:
        return INF
    s = math.sqrt(x)
    return s if _sqrt_cmp(x, s) >= 0 else _next_down(s)


def _sqrt_up(x: float) -> float:
    if x == 0.0:
        return 0.0
    if x == INF:
        return INF
    s = math.sqrt(x)
    return s if _sqrt_cmp(x, s) <= 0 else _next_up(s)


def _down2(v: float) -> float:
    return _next_down(_next_down(v))


def _up2(v: float) -> float:
    return _next_up(_next_up(v))


def _lib_down(fn: Callable[[float], float], x: float) -> float:
    # libm result widened two ulps: covers the documented worst-case
    # errors of the elementary functions, used where no cheap exactness
    # test exists
    return _down2(fn(x))


def _lib_up(fn: Callable[[float], float], x: float) -> float:
    return _up2(fn(x))


# ---------------------------------------------------------------------------
# The interval type.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` of extended reals.

    Bounds may be infinite.  NaN bounds are rejected.  Reversed bounds
    normalise to the canonical empty interval, as do the two one-point
    "intervals" at infinity, which contain no real number.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo = float(self.lo)
        hi = float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval bounds cannot be NaN")
        if lo > hi or lo == INF or hi == -INF:
            lo, hi = INF, -INF
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def width(self) -> float:
        if self.is_empty:
            return 0.0
        w = self.hi - self.lo
        return w if not math.isnan(w) else INF

    def mid(self) -> float:
        if self.is_empty:
            raise ValueError("empty interval has no midpoint")
        if self.lo == -INF and self.hi == INF:
            return 0.0
        if self.lo == -INF:
            return -_MAX if self.hi == -_MAX else min(self.hi, 0.0)
        if self.hi == INF:
            return _MAX if self.lo == _MAX else max(self.lo, 0.0)
        m = self.lo + (self.hi - self.lo) / 2.0
        if not math.isfinite(m):
            m = self.lo / 2.0 + self.hi / 2.0
        return m

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def meet(self, other: "Interval") -> "Interval":
        if self.is_empty or other.is_empty:
            return EMPTY
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __repr__(self) -> str:
        if self.is_empty:
            return "Interval.EMPTY"
        return f"[{self.lo!r}, {self.hi!r}]"


EMPTY = Interval(INF, -INF)
WHOLE = Interval(-INF, INF)
_ZERO = Interval(0.0, 0.0)
_ONE = Interval(1.0, 1.0)


def point(x: float) -> Interval:
    return Interval(x, x)


# ---------------------------------------------------------------------------
# Forward operations.
# ---------------------------------------------------------------------------


def iadd(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return EMPTY
    return Interval(_add_down(a.lo, b.lo), _add_up(a.hi, b.hi))


def isub(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return EMPTY
    return Interval(_sub_down(a.lo, b.hi), _sub_up(a.hi, b.lo))


def ineg(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    return Interval(-a.hi, -a.lo)


def imul(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return EMPTY
    lo = min(
        _mul_down(a.lo, b.lo),
        _mul_down(a.lo, b.hi),
        _mul_down(a.hi, b.lo),
        _mul_down(a.hi, b.hi),
    )
    hi = max(
        _mul_up(a.lo, b.lo),
        _mul_up(a.lo, b.hi),
        _mul_up(a.hi, b.lo),
        _mul_up(a.hi, b.hi),
    )
    return Interval(lo, hi)


def extended_div(a: Interval, b: Interval) -> tuple[Interval, ...]:
    """Set-valued division: the pieces of ``{x / y : x in a, y in b, y != 0}``.

    Returns zero, one or two intervals.  Two pieces arise when ``b``
    straddles zero and ``a`` does not contain it; the forward ``/``
    operator hulls them, while backward propagation intersects each piece
    separately to avoid needless widening.
    """
    if a.is_empty or b.is_empty:
        return ()
    if b.lo == 0.0 and b.hi == 0.0:
        return ()
    if b.lo > 0.0 or b.hi < 0.0:
        # divisor has constant sign: pick the extremal corner per bound
        if b.lo > 0.0:
            lo = _div_down(a.lo, b.hi if a.lo >= 0 else b.lo)
            hi = _div_up(a.hi, b.lo if a.hi >= 0 else b.hi)
        else:
            lo = _div_down(a.hi, b.hi if a.hi >= 0 else b.lo)
            hi = _div_up(a.lo, b.lo if a.lo >= 0 else b.hi)
        return (Interval(lo, hi),)
    # b straddles or touches zero
    if a.lo <= 0.0 <= a.hi:
        return (WHOLE,)
    if a.lo > 0.0:
        pieces = []
        if b.lo < 0.0:
            pieces.append(Interval(-INF, _div_up(a.lo, b.lo)))
        if b.hi > 0.0:
            pieces.append(Interval(_div_down(a.lo, b.hi), INF))
        return tuple(pieces)
    pieces = []
    if b.hi > 0.0:
        pieces.append(Interval(-INF, _div_up(a.hi, b.hi)))
    if b.lo < 0.0:
        pieces.append(Interval(_div_down(a.hi, b.lo), INF))
    return tuple(pieces)


def idiv(a: Interval, b: Interval) -> Interval:
    pieces = extended_div(a, b)
    out = EMPTY
    for p in pieces:
        out = out.hull(p)
    return out


def imin(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return EMPTY
    return Interval(min(a.lo, b.lo), min(a.hi, b.hi))


def imax(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return EMPTY
    return Interval(max(a.lo, b.lo), max(a.hi, b.hi))


def iabs(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    if a.lo >= 0.0:
        return a
    if a.hi <= 0.0:
        return Interval(-a.hi, -a.lo)
    return Interval(0.0, max(-a.lo, a.hi))


def isign(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    has_neg = a.lo < 0.0
    has_zero = a.lo <= 0.0 <= a.hi
    has_pos = a.hi > 0.0
    lo = -1.0 if has_neg else (0.0 if has_zero else 1.0)
    hi = 1.0 if has_pos else (0.0 if has_zero else -1.0)
    return Interval(lo, hi)


# -- integer powers, exact via big-integer arithmetic -----------------------


def _ipow_pos_down(v: float, n: int) -> float:
    # v >= 0, n >= 1; greatest float <= v**n
    if v == 0.0:
        return 0.0
    if v == INF:
        return INF
    nv, dv = v.as_integer_ratio()
    num = nv**n
    den = dv**n
    try:
        q = num / den
    except OverflowError:
        return _MAX
    if math.isinf(q):
        return _MAX
    nq, dq = q.as_integer_ratio()
    diff = num * dq - nq * den
    return q if diff >= 0 else _next_down(q)


def _ipow_pos_up(v: float, n: int) -> float:
    if v == 0.0:
        return 0.0
    if v == INF:
        return INF
    nv, dv = v.as_integer_ratio()
    num = nv**n
    den = dv**n
    try:
        q = num / den
    except OverflowError:
        return INF
    if math.isinf(q):
        return INF
    nq, dq = q.as_integer_ratio()
    diff = num * dq - nq * den
    return q if diff <= 0 else _next_up(q)


def _powf_down(v: float, n: int) -> float:
    # greatest float <= v**n for odd n, any sign of v
    if v >= 0.0:
        return _ipow_pos_down(v, n)
    return -_ipow_pos_up(-v, n)


def _powf_up(v: float, n: int) -> float:
    if v >= 0.0:
        return _ipow_pos_up(v, n)
    return -_ipow_pos_down(-v, n)


_POW_EXACT_LIMIT = 1024  # beyond this the bigint blowup is not worth it


def ipow_int(x: Interval, n: int) -> Interval:
    if x.is_empty:
        return EMPTY
    if n == 0:
        return _ONE
    if n < 0:
        return idiv(_ONE, ipow_int(x, -n))
    if n % 2 == 1:
        return Interval(_powf_down(x.lo, n), _powf_up(x.hi, n))
    if x.lo >= 0.0:
        return Interval(_ipow_pos_down(x.lo, n), _ipow_pos_up(x.hi, n))
    if x.hi <= 0.0:
        return Interval(_ipow_pos_down(-x.hi, n), _ipow_pos_up(-x.lo, n))
    return Interval(0.0, _ipow_pos_up(max(-x.lo, x.hi), n))


def _pow_corner(x: float, e: float) -> float:
    # x**e extended by limits at 0 and infinity; x >= 0
    if x == 0.0:
        return 0.0 if e > 0.0 else (1.0 if e == 0.0 else INF)
    if x == INF:
        return INF if e > 0.0 else (1.0 if e == 0.0 else 0.0)
    if math.isinf(e):
        if x == 1.0:
            return 1.0
        big = (x > 1.0) == (e > 0.0)
        return INF if big else 0.0
    try:
        return math.pow(x, e)
    except OverflowError:
        # pow overflows only away from zero, so the sign of the blowup
        # follows whether the magnitude grows
        return INF


def ipow(x: Interval, e: Interval) -> Interval:
    if x.is_empty or e.is_empty:
        return EMPTY
    if e.is_point and float(e.lo).is_integer() and abs(e.lo) <= _POW_EXACT_LIMIT:
        return ipow_int(x, int(e.lo))
    # non-integer exponent: defined for non-negative bases only.  x**e is
    # monotone in x for fixed e and monotone in e for fixed x, so the
    # extremes over a box sit at its corners.
    xx = x.meet(Interval(0.0, INF))
    if xx.is_empty:
        return EMPTY
    corners = [
        _pow_corner(xx.lo, e.lo),
        _pow_corner(xx.lo, e.hi),
        _pow_corner(xx.hi, e.lo),
        _pow_corner(xx.hi, e.hi),
    ]
    lo = min(corners)
    hi = max(corners)
    if lo == INF:
        return EMPTY  # only 0**negative corners: defined nowhere
    lo = 0.0 if lo == 0.0 else max(0.0, _down2(lo))
    if hi == 0.0:
        # exact only when the base is pinned at zero; otherwise the
        # corner may have underflowed
        hi = 0.0 if xx.hi == 0.0 else _up2(0.0)
    elif hi != INF:
        hi = _up2(hi)
    return Interval(lo, hi)


def isqr(a: Interval) -> Interval:
    return ipow_int(a, 2)


def isqrt(a: Interval) -> Interval:
    aa = a.meet(Interval(0.0, INF))
    if aa.is_empty:
        return EMPTY
    return Interval(_sqrt_down(aa.lo), _sqrt_up(aa.hi))


def iexp(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    if a.lo == -INF:
        lo = 0.0
    else:
        try:
            lo = max(0.0, _lib_down(math.exp, a.lo))
        except OverflowError:
            lo = _MAX
    if a.hi == INF:
        hi = INF
    else:
        try:
            hi = _lib_up(math.exp, a.hi)
        except OverflowError:
            hi = INF
    return Interval(lo, hi)


def ilog(a: Interval) -> Interval:
    if a.is_empty or a.hi <= 0.0:
        return EMPTY
    lo = -INF if a.lo <= 0.0 else _lib_down(math.log, a.lo)
    hi = INF if a.hi == INF else _lib_up(math.log, a.hi)
    return Interval(lo, hi)


# -- trigonometric and hyperbolic -------------------------------------------


def _contains_extremum(a: Interval, period: float, offset: float) -> bool:
    # does [a.lo, a.hi] contain offset + k*period for some integer k?
    # Conservative: slack covers the rounding of the candidate points, so
    # a hit may be reported slightly outside the interval (sound: the
    # range only widens toward [-1, 1]).
    scale = max(abs(a.lo), abs(a.hi), period)
    slack = 8.0 * math.ulp(scale)
    k0 = math.floor((a.lo - offset) / period) - 1
    k1 = math.ceil((a.hi - offset) / period) + 1
    for k in range(k0, k1 + 1):
        c = offset + k * period
        if a.lo - slack <= c <= a.hi + slack:
            return True
    return False


def icos(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    w = a.hi - a.lo
    if not (w < _TAU):
        return Interval(-1.0, 1.0)
    clo = min(-1.0 if _contains_extremum(a, _TAU, math.pi) else 1.0,
              max(-1.0, _lib_down(math.cos, a.lo)),
              max(-1.0, _lib_down(math.cos, a.hi)))
    chi = max(1.0 if _contains_extremum(a, _TAU, 0.0) else -1.0,
              min(1.0, _lib_up(math.cos, a.lo)),
              min(1.0, _lib_up(math.cos, a.hi)))
    return Interval(clo, chi)


def isin(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    w = a.hi - a.lo
    if not (w < _TAU):
        return Interval(-1.0, 1.0)
    half_pi = math.pi / 2
    slo = min(-1.0 if _contains_extremum(a, _TAU, -half_pi) else 1.0,
              max(-1.0, _lib_down(math.sin, a.lo)),
              max(-1.0, _lib_down(math.sin, a.hi)))
    shi = max(1.0 if _contains_extremum(a, _TAU, half_pi) else -1.0,
              min(1.0, _lib_up(math.sin, a.lo)),
              min(1.0, _lib_up(math.sin, a.hi)))
    return Interval(slo, shi)


def itan(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    w = a.hi - a.lo
    if not (w < _PI_DOWN):
        return WHOLE
    if _contains_extremum(a, math.pi, math.pi / 2):
        return WHOLE
    return Interval(_lib_down(math.tan, a.lo), _lib_up(math.tan, a.hi))


def iacos(a: Interval) -> Interval:
    aa = a.meet(Interval(-1.0, 1.0))
    if aa.is_empty:
        return EMPTY
    # decreasing on [-1, 1]
    lo = max(0.0, _lib_down(math.acos, aa.hi))
    hi = min(_PI_UP, _lib_up(math.acos, aa.lo))
    return Interval(lo, hi)


def iasin(a: Interval) -> Interval:
    aa = a.meet(Interval(-1.0, 1.0))
    if aa.is_empty:
        return EMPTY
    lo = max(-_HALF_PI_UP, _lib_down(math.asin, aa.lo))
    hi = min(_HALF_PI_UP, _lib_up(math.asin, aa.hi))
    return Interval(lo, hi)


def iatan(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    lo = -_HALF_PI_UP if a.lo == -INF else max(-_HALF_PI_UP, _lib_down(math.atan, a.lo))
    hi = _HALF_PI_UP if a.hi == INF else min(_HALF_PI_UP, _lib_up(math.atan, a.hi))
    return Interval(lo, hi)


def _cosh_up(v: float) -> float:
    if math.isinf(v):
        return INF
    try:
        return _lib_up(math.cosh, v)
    except OverflowError:
        return INF


def icosh(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    m = iabs(a)  # cosh is even and increasing on [0, inf)
    if m.lo == 0.0:
        lo = 1.0
    elif math.isinf(m.lo):
        lo = INF
    else:
        try:
            lo = max(1.0, _lib_down(math.cosh, m.lo))
        except OverflowError:
            lo = _MAX
    return Interval(lo, _cosh_up(m.hi))


def _sinh_dir(v: float, up: bool) -> float:
    if math.isinf(v):
        return v
    try:
        s = math.sinh(v)
    except OverflowError:
        return INF if v > 0 else -INF
    return _up2(s) if up else _down2(s)


def isinh(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    return Interval(_sinh_dir(a.lo, False), _sinh_dir(a.hi, True))


def itanh(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    lo = -1.0 if a.lo == -INF else max(-1.0, _lib_down(math.tanh, a.lo))
    hi = 1.0 if a.hi == INF else min(1.0, _lib_up(math.tanh, a.hi))
    return Interval(lo, hi)


def iacosh(a: Interval) -> Interval:
    aa = a.meet(Interval(1.0, INF))
    if aa.is_empty:
        return EMPTY
    lo = max(0.0, _lib_down(math.acosh, aa.lo))
    hi = INF if aa.hi == INF else _lib_up(math.acosh, aa.hi)
    return Interval(lo, hi)


def iasinh(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    lo = -INF if a.lo == -INF else _lib_down(math.asinh, a.lo)
    hi = INF if a.hi == INF else _lib_up(math.asinh, a.hi)
    return Interval(lo, hi)


def iatanh(a: Interval) -> Interval:
    if a.is_empty or a.lo >= 1.0 or a.hi <= -1.0:
        return EMPTY
    lo = -INF if a.lo <= -1.0 else _lib_down(math.atanh, a.lo)
    hi = INF if a.hi >= 1.0 else _lib_up(math.atanh, a.hi)
    return Interval(lo, hi)


def iatan2(y: Interval, x: Interval) -> Interval:
    if y.is_empty or x.is_empty:
        return EMPTY
    full = Interval(-_PI_UP, _PI_UP)
    # atan2 is discontinuous only across the negative x axis; away from it
    # the range over a box is attained at corner points
    if x.lo >= 0.0 or y.lo > 0.0 or y.hi < 0.0:
        vals = [
            math.atan2(y.lo, x.lo),
            math.atan2(y.lo, x.hi),
            math.atan2(y.hi, x.lo),
            math.atan2(y.hi, x.hi),
        ]
        lo = max(-_PI_UP, _down2(min(vals)))
        hi = min(_PI_UP, _up2(max(vals)))
        return Interval(lo, hi)
    return full


_UNARY: dict[str, Callable[[Interval], Interval]] = {
    "neg": ineg,
    "sign": isign,
    "abs": iabs,
    "sqr": isqr,
    "sqrt": isqrt,
    "exp": iexp,
    "log": ilog,
    "cos": icos,
    "sin": isin,
    "tan": itan,
    "acos": iacos,
    "asin": iasin,
    "atan": iatan,
    "cosh": icosh,
    "sinh": isinh,
    "tanh": itanh,
    "acosh": iacosh,
    "asinh": iasinh,
    "atanh": iatanh,
}

_BINARY: dict[str, Callable[[Interval, Interval], Interval]] = {
    "add": iadd,
    "sub": isub,
    "mul": imul,
    "div": idiv,
    "min": imin,
    "max": imax,
    "pow": ipow,
    "atan2": iatan2,
}


def unary_op(op: str, a: Interval) -> Interval:
    return _UNARY[op](a)


def binary_op(op: str, a: Interval, b: Interval) -> Interval:
    return _BINARY[op](a, b)


# ---------------------------------------------------------------------------
# Inverse (backward) projections.
#
# inverse_op(op, r, *operands) returns refined operand intervals: each
# output is a sound enclosure of { v in operand : op(..., v, ...) can hit r }.
# Outputs are always subsets of the corresponding inputs.
# ---------------------------------------------------------------------------


def _meet_pieces(orig: Interval, pieces: Iterable[Interval]) -> Interval:
    out = EMPTY
    for p in pieces:
        out = out.hull(orig.meet(p))
    return out


def _meet_extended_div(orig: Interval, num: Interval, den: Interval) -> Interval:
    """``orig`` refined against ``{ q : exists d in den, q*d in num }``."""
    if orig.is_empty or num.is_empty or den.is_empty:
        return EMPTY
    if den.lo == 0.0 and den.hi == 0.0:
        # q * 0 = 0: either anything works or nothing does
        return orig if num.contains(0.0) else EMPTY
    return _meet_pieces(orig, extended_div(num, den))


def _inv_add(r: Interval, a: Interval, b: Interval) -> tuple[Interval, Interval]:
    return a.meet(isub(r, b)), b.meet(isub(r, a))


def _inv_sub(r: Interval, a: Interval, b: Interval) -> tuple[Interval, Interval]:
    return a.meet(iadd(r, b)), b.meet(isub(a, r))


def _inv_mul(r: Interval, a: Interval, b: Interval) -> tuple[Interval, Interval]:
    return _meet_extended_div(a, r, b), _meet_extended_div(b, r, a)


def _inv_div(r: Interval, a: Interval, b: Interval) -> tuple[Interval, Interval]:
    # a / b = r
    na = a.meet(imul(r, b))
    nb = _meet_extended_div(b, a, r)
    return na, nb


def _inv_min(r: Interval, a: Interval, b: Interval) -> tuple[Interval, Interval]:
    # min(a, b) >= r.lo forces both above r.lo; min <= r.hi forces one side
    # down only when the other side cannot reach it
    na = a.meet(Interval(r.lo, r.hi if b.lo > r.hi else INF))
    nb = b.meet(Interval(r.lo, r.hi if a.lo > r.hi else INF))
    return na, nb


def _inv_max(r: Interval, a: Interval, b: Interval) -> tuple[Interval, Interval]:
    na = a.meet(Interval(r.lo if b.hi < r.lo else -INF, r.hi))
    nb = b.meet(Interval(r.lo if a.hi < r.lo else -INF, r.hi))
    return na, nb


def _root_down(v: float, n: int) -> float:
    # greatest float g with g**n <= v (odd n, or v >= 0 with the
    # non-negative root intended)
    if v == 0.0:
        return 0.0
    if math.isinf(v):
        return v
    neg = v < 0.0
    g = -((-v) ** (1.0 / n)) if neg else v ** (1.0 / n)
    for _ in range(64):
        if _pow_scalar_cmp(g, n, v) <= 0:
            break
        g = _next_down(g)
    for _ in range(64):
        up = _next_up(g)
        if _pow_scalar_cmp(up, n, v) > 0:
            break
        g = up
    return g


def _root_up(v: float, n: int) -> float:
    if v == 0.0:
        return 0.0
    if math.isinf(v):
        return v
    neg = v < 0.0
    g = -((-v) ** (1.0 / n)) if neg else v ** (1.0 / n)
    for _ in range(64):
        if _pow_scalar_cmp(g, n, v) >= 0:
            break
        g = _next_up(g)
    for _ in range(64):
        dn = _next_down(g)
        if _pow_scalar_cmp(dn, n, v) < 0:
            break
        g = dn
    return g


def _pow_scalar_cmp(g: float, n: int, v: float) -> int:
    # sign of g**n - v, exactly, finite g and v
    if math.isinf(g):
        return 1 if g > 0 else -1
    ng, dg = g.as_integer_ratio()
    nv, dv = v.as_integer_ratio()
    lhs = ng**n * dv
    rhs = nv * dg**n
    return (lhs > rhs) - (lhs < rhs)


def _inv_pow_int(x: Interval, n: int, r: Interval) -> Interval:
    # refine x against x**n in r, n >= 1
    if r.is_empty or x.is_empty:
        return EMPTY
    if n % 2 == 1:
        lo = _root_down(r.lo, n) if r.lo != -INF else -INF
        hi = _root_up(r.hi, n) if r.hi != INF else INF
        return x.meet(Interval(lo, hi))
    rr = r.meet(Interval(0.0, INF))
    if rr.is_empty:
        return EMPTY
    mlo = _root_down(rr.lo, n)
    mhi = _root_up(rr.hi, n) if rr.hi != INF else INF
    pos = Interval(mlo, mhi)
    neg = Interval(-mhi, -mlo)
    return _meet_pieces(x, (neg, pos))


def _inv_pow(r: Interval, x: Interval, e: Interval) -> tuple[Interval, Interval]:
    if e.is_point and float(e.lo).is_integer() and abs(e.lo) <= _POW_EXACT_LIMIT:
        n = int(e.lo)
        if n == 0:
            return (x if r.contains(1.0) else EMPTY), e
        if n > 0:
            return _inv_pow_int(x, n, r), e
        # x**n = 1/x**(-n): push r through a reciprocal first
        pieces = extended_div(_ONE, r)
        out = EMPTY
        for p in pieces:
            out = out.hull(_inv_pow_int(x, -n, p))
        return out, e
    # real exponent: x = exp(log(r)/e) on the non-negative branch
    rr = r.meet(Interval(0.0, INF))
    if rr.is_empty:
        return EMPTY, e
    if not e.contains(0.0) and not rr.is_empty:
        nx = x.meet(iexp(idiv(ilog(rr), e)))
        nx = nx.meet(Interval(0.0, INF)) if x.lo >= 0.0 else nx
        return nx, e
    return x, e


def _inv_atan2(r: Interval, y: Interval, x: Interval) -> tuple[Interval, Interval]:
    if r.meet(Interval(-_PI_UP, _PI_UP)).is_empty:
        return EMPTY, EMPTY
    return y, x


_BINARY_INV: dict[str, Callable[..., tuple[Interval, Interval]]] = {
    "add": _inv_add,
    "sub": _inv_sub,
    "mul": _inv_mul,
    "div": _inv_div,
    "min": _inv_min,
    "max": _inv_max,
    "pow": _inv_pow,
    "atan2": _inv_atan2,
}


def _inv_neg(r: Interval, a: Interval) -> Interval:
    return a.meet(ineg(r))


def _inv_abs(r: Interval, a: Interval) -> Interval:
    rr = r.meet(Interval(0.0, INF))
    if rr.is_empty:
        return EMPTY
    return _meet_pieces(a, (ineg(rr), rr))


def _inv_sign(r: Interval, a: Interval) -> Interval:
    pieces = []
    if r.contains(-1.0):
        pieces.append(Interval(-INF, -_TINY))
    if r.contains(0.0):
        pieces.append(_ZERO)
    if r.contains(1.0):
        pieces.append(Interval(_TINY, INF))
    return _meet_pieces(a, pieces)


def _inv_sqr(r: Interval, a: Interval) -> Interval:
    return _inv_pow_int(a, 2, r)


def _inv_sqrt(r: Interval, a: Interval) -> Interval:
    rr = r.meet(Interval(0.0, INF))
    if rr.is_empty:
        return EMPTY
    return a.meet(ipow_int(rr, 2))


def _inv_exp(r: Interval, a: Interval) -> Interval:
    return a.meet(ilog(r))


def _inv_log(r: Interval, a: Interval) -> Interval:
    return a.meet(iexp(r))


def _inv_cos(r: Interval, a: Interval) -> Interval:
    if r.meet(Interval(-1.0, 1.0)).is_empty:
        return EMPTY
    return a


def _inv_sin(r: Interval, a: Interval) -> Interval:
    if r.meet(Interval(-1.0, 1.0)).is_empty:
        return EMPTY
    return a


def _inv_tan(r: Interval, a: Interval) -> Interval:
    return a


def _inv_acos(r: Interval, a: Interval) -> Interval:
    rr = r.meet(Interval(0.0, _PI_UP))
    if rr.is_empty:
        return EMPTY
    return a.meet(icos(rr))


def _inv_asin(r: Interval, a: Interval) -> Interval:
    rr = r.meet(Interval(-_HALF_PI_UP, _HALF_PI_UP))
    if rr.is_empty:
        return EMPTY
    return a.meet(isin(rr))


def _inv_atan(r: Interval, a: Interval) -> Interval:
    rr = r.meet(Interval(-_HALF_PI_UP, _HALF_PI_UP))
    if rr.is_empty:
        return EMPTY
    return a.meet(itan(rr))


def _inv_cosh(r: Interval, a: Interval) -> Interval:
    rr = r.meet(Interval(1.0, INF))
    if rr.is_empty:
        return EMPTY
    m = iacosh(rr)
    return _meet_pieces(a, (ineg(m), m))


def _inv_sinh(r: Interval, a: Interval) -> Interval:
    return a.meet(iasinh(r))


def _inv_tanh(r: Interval, a: Interval) -> Interval:
    rr = r.meet(Interval(-1.0, 1.0))
    if rr.is_empty:
        return EMPTY
    return a.meet(iatanh(rr))


def _inv_acosh(r: Interval, a: Interval) -> Interval:
    rr = r.meet(Interval(0.0, INF))
    if rr.is_empty:
        return EMPTY
    return a.meet(icosh(rr))


def _inv_asinh(r: Interval, a: Interval) -> Interval:
    return a.meet(isinh(r))


def _inv_atanh(r: Interval, a: Interval) -> Interval:
    return a.meet(itanh(r))


_UNARY_INV: dict[str, Callable[[Interval, Interval], Interval]] = {
    "neg": _inv_neg,
    "sign": _inv_sign,
    "abs": _inv_abs,
    "sqr": _inv_sqr,
    "sqrt": _inv_sqrt,
    "exp": _inv_exp,
    "log": _inv_log,
    "cos": _inv_cos,
    "sin": _inv_sin,
    "tan": _inv_tan,
    "acos": _inv_acos,
    "asin": _inv_asin,
    "atan": _inv_atan,
    "cosh": _inv_cosh,
    "sinh": _inv_sinh,
    "tanh": _inv_tanh,
    "acosh": _inv_acosh,
    "asinh": _inv_asinh,
    "atanh": _inv_atanh,
}


def inverse_op(op: str, result: Interval, *operands: Interval) -> tuple[Interval, ...]:
    """Backward projection of ``result`` onto the operands of ``op``.

    Returns one refined interval per operand, each a subset of the input
    operand and a sound enclosure of the values that can still produce a
    result inside ``result``.
    """
    if op in _UNARY_INV:
        (a,) = operands
        if result.is_empty or a.is_empty:
            return (EMPTY,)
        return (_UNARY_INV[op](result, a),)
    a, b = operands
    if result.is_empty or a.is_empty or b.is_empty:
        return (EMPTY, EMPTY)
    return _BINARY_INV[op](result, a, b)


# ---------------------------------------------------------------------------
# Boxes.
# ---------------------------------------------------------------------------


class Box:
    """A vector of intervals, one per variable, mutable in place."""

    __slots__ = ("_comps",)

    def __init__(self, components: Iterable[Interval]):
        self._comps: list[Interval] = list(components)

    @classmethod
    def from_bounds(cls, bounds: Sequence[float]) -> "Box":
        if len(bounds) % 2 != 0:
            raise ValueError("flat bounds array must have even length")
        return cls(
            Interval(bounds[2 * i], bounds[2 * i + 1]) for i in range(len(bounds) // 2)
        )

    def to_bounds(self) -> list[float]:
        out: list[float] = []
        for c in self._comps:
            out.append(c.lo)
            out.append(c.hi)
        return out

    def copy(self) -> "Box":
        return Box(self._comps)

    @classmethod
    def empty(cls, n: int) -> "Box":
        return cls(EMPTY for _ in range(n))

    @property
    def is_empty(self) -> bool:
        return any(c.is_empty for c in self._comps)

    def __len__(self) -> int:
        return len(self._comps)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self._comps)

    def __getitem__(self, i: int) -> Interval:
        return self._comps[i]

    def __setitem__(self, i: int, value: Interval) -> None:
        self._comps[i] = value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Box):
            return NotImplemented
        return self._comps == other._comps

    def __repr__(self) -> str:
        return f"Box({self._comps!r})"
