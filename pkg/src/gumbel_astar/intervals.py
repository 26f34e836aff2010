"""Outward-rounded interval arithmetic on scalar floats."""

import math
from dataclasses import dataclass

INF = math.inf
_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi


# an endpoint that overflowed to the wrong infinity stands for a finite
# value, so it is pulled back to the largest float (always sound)
def _down(x, steps=1):
    for _ in range(steps):
        if math.isfinite(x) or x == INF:
            x = math.nextafter(x, -INF)
    return x


def _up(x, steps=1):
    for _ in range(steps):
        if math.isfinite(x) or x == -INF:
            x = math.nextafter(x, INF)
    return x


def _mul(a, b):
    # 0 * inf is taken as 0, the limit relevant to interval products
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def _exp(x):
    try:
        return math.exp(x)
    except OverflowError:
        return INF


def _pow(base, p):
    if base == 0.0:
        return 0.0 if p > 0 else (1.0 if p == 0 else INF)
    if base == INF:
        return INF if p > 0 else (1.0 if p == 0 else 0.0)
    try:
        return base ** p
    except OverflowError:
        return INF


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value):
        return cls(float(value), float(value))

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, value):
        return self.lo <= value <= self.hi

    def __add__(self, other):
        other = as_interval(other)
        return Interval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other):
        other = as_interval(other)
        return Interval(_down(self.lo - other.hi), _up(self.hi - other.lo))

    def __rsub__(self, other):
        return as_interval(other) - self

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other):
        other = as_interval(other)
        p = (_mul(self.lo, other.lo), _mul(self.lo, other.hi),
             _mul(self.hi, other.lo), _mul(self.hi, other.hi))
        return Interval(_down(min(p)), _up(max(p)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_interval(other)
        if other.lo <= 0.0 <= other.hi:
            return Interval(-INF, INF)
        inv = Interval(_down(1.0 / other.hi), _up(1.0 / other.lo))
        return self * inv

    def __rtruediv__(self, other):
        return as_interval(other) / self

    def __abs__(self):
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"


def as_interval(value):
    if isinstance(value, Interval):
        return value
    return Interval.point(value)


def iexp(x):
    return Interval(max(_down(_exp(x.lo), 2), 0.0), _up(_exp(x.hi), 2))


def ilog(x):
    lo = -INF if x.lo <= 0.0 else _down(math.log(x.lo), 2)
    hi = -INF if x.hi <= 0.0 else _up(math.log(x.hi), 2)
    return Interval(lo, hi)


def isqrt(x):
    if x.hi < 0.0:
        raise ValueError(f"sqrt of negative interval {x}")
    lo = 0.0 if x.lo <= 0.0 else max(_down(math.sqrt(x.lo), 2), 0.0)
    return Interval(lo, _up(math.sqrt(x.hi), 2))


def _has_point(lo, hi, offset):
    # whether offset + 2 k pi lies in [lo, hi] for some integer k
    k = math.ceil((lo - offset) / _TWO_PI)
    return offset + k * _TWO_PI <= hi


def isin(x):
    if not (x.hi - x.lo < _TWO_PI):
        return Interval(-1.0, 1.0)
    a, b = math.sin(x.lo), math.sin(x.hi)
    hi = 1.0 if _has_point(x.lo, x.hi, _HALF_PI) else min(_up(max(a, b), 2), 1.0)
    lo = -1.0 if _has_point(x.lo, x.hi, -_HALF_PI) else max(_down(min(a, b), 2), -1.0)
    return Interval(lo, hi)


def icos(x):
    if not (x.hi - x.lo < _TWO_PI):
        return Interval(-1.0, 1.0)
    a, b = math.cos(x.lo), math.cos(x.hi)
    hi = 1.0 if _has_point(x.lo, x.hi, 0.0) else min(_up(max(a, b), 2), 1.0)
    lo = -1.0 if _has_point(x.lo, x.hi, math.pi) else max(_down(min(a, b), 2), -1.0)
    return Interval(lo, hi)


def ipow(x, p):
    """Interval power with a constant or interval exponent.

    Integer constant exponents follow parity rules and accept any base.
    Other exponents require a non-negative base.
    """
    if isinstance(p, Interval) and p.lo == p.hi:
        p = p.lo
    if isinstance(p, Interval):
        if x.lo < 0.0:
            raise ValueError(f"base {x} must be non-negative for exponent {p}")
        return iexp(p * ilog(x))
    p = float(p)
    if p == int(p):
        n = int(p)
        if n == 0:
            return Interval(1.0, 1.0)
        if n < 0:
            return Interval(1.0, 1.0) / ipow(x, -n)
        lo_p, hi_p = _pow(abs(x.lo), n), _pow(abs(x.hi), n)
        if x.lo < 0.0 and n % 2 == 1:
            lo_p = -lo_p
        if x.hi < 0.0 and n % 2 == 1:
            hi_p = -hi_p
        if n % 2 == 1:
            return Interval(_down(lo_p, 2), _up(hi_p, 2))
        if x.lo >= 0.0:
            return Interval(max(_down(lo_p, 2), 0.0), _up(hi_p, 2))
        if x.hi <= 0.0:
            return Interval(max(_down(hi_p, 2), 0.0), _up(lo_p, 2))
        return Interval(0.0, _up(max(lo_p, hi_p), 2))
    if x.lo < 0.0:
        raise ValueError(f"base {x} must be non-negative for exponent {p}")
    a, b = _pow(x.lo, p), _pow(x.hi, p)
    lo, hi = min(a, b), max(a, b)
    return Interval(max(_down(lo, 2), 0.0), _up(hi, 2))
