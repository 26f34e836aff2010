"""Target decompositions and the bounding functions M(B) >= sup_B o(x)."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .expr import compile_interval, default_names
from .intervals import Interval
from .proposals import Proposal
from .regions import Region


def pad(value, rel=1e-10):
    """Nudge a bound upward to absorb floating-point rounding."""
    if not math.isfinite(value):
        return value
    return value + rel * (1.0 + abs(value))


@dataclass
class TargetDecomposition:
    """Target log-density ``phi(x) = i(x) + o(x)``.

    ``proposal`` supplies ``i``; ``o`` is the boundable remainder and
    ``bounder(region)`` must return M(B) with M(B) >= o(x) for all x in B.
    """

    proposal: Proposal
    o: Callable
    bounder: Callable
    root: Optional[Region] = None
    unimodal: bool = False
    name: str = ""
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.root is None:
            self.root = self.proposal.support()

    @property
    def dim(self):
        return self.proposal.dim

    def log_density(self, x):
        i = self.proposal.log_density(x)
        if i == -math.inf:
            return -math.inf
        return i + self.o(x)


@dataclass(frozen=True)
class QuadraticBound:
    """Scalar upper bound ``a d^2 + b d + c``."""

    a: float
    b: float
    c: float

    def __call__(self, d):
        return self.a * d * d + self.b * d + self.c

    def max_over(self, lo, hi):
        """Maximum over ``[lo, hi]``; endpoints may be infinite."""
        a, b, c = self.a, self.b, self.c
        if a < 0.0:
            v = min(max(-b / (2.0 * a), lo), hi)
            return self(v)
        if a == 0.0:
            if b > 0.0:
                return math.inf if hi == math.inf else b * hi + c
            if b < 0.0:
                return math.inf if lo == -math.inf else b * lo + c
            return c
        if not (math.isfinite(lo) and math.isfinite(hi)):
            return math.inf
        return max(self(lo), self(hi))


def interval_bounder(expr, names=None, dim=None):
    """M(B) as the upper end of the interval enclosure of ``expr``."""
    if names is None:
        names = default_names(dim or 1)
    f = compile_interval(expr, names)
    return lambda region: f(region).hi


def sum_bound_constant(terms, region, names=None):
    """Sum of per-term interval upper bounds.

    ``terms`` are expressions in the region's variables, or already-compiled
    functions ``region -> Interval``.
    """
    total = 0.0
    for t in terms:
        if callable(t):
            total += t(region).hi
        else:
            total += compile_interval(t, names or default_names(region.dim))(region).hi
    return total


def sum_bound_linear(terms, region):
    """Maximize the sum of per-term affine upper bounds over ``region``.

    Each term provides ``linear_bound(region) -> (value, gradient, point)``
    describing ``value + gradient . (x - point)``.
    """
    if not terms:
        return 0.0
    dim = region.dim
    intercept = 0.0
    slope = np.zeros(dim)
    for t in terms:
        value, grad, point = t.linear_bound(region)
        grad = np.atleast_1d(grad)
        intercept += value - float(np.dot(grad, np.atleast_1d(point)))
        slope += grad
    total = intercept
    for d in range(dim):
        s = slope[d]
        if s > 0.0:
            edge = region.upper[d]
        elif s < 0.0:
            edge = region.lower[d]
        else:
            continue
        if not math.isfinite(edge):
            return math.inf
        total += s * edge
    return total


def sum_bound_quadratic(terms, region):
    """Maximize the sum of per-term quadratic upper bounds over a 1-D region."""
    if not terms:
        return 0.0
    if region.dim != 1:
        raise ValueError("sum_bound_quadratic is implemented for 1-D regions")
    a = b = c = 0.0
    for t in terms:
        q = t.quadratic_bound(region)
        a += q.a
        b += q.b
        c += q.c
    return QuadraticBound(a, b, c).max_over(region.lower[0], region.upper[0])


class GaussianTerm:
    """Log-likelihood ``-(theta - y)^2 / (2 var) - log sqrt(2 pi var)`` of one datum."""

    def __init__(self, y, variance=1.0):
        self.y = float(y)
        self.variance = float(variance)
        self.const = -0.5 * math.log(2.0 * math.pi * self.variance)

    def __call__(self, theta):
        return -0.5 * (theta - self.y) ** 2 / self.variance + self.const

    def argmax(self, region):
        return min(max(self.y, region.lower[0]), region.upper[0])

    def constant_bound(self, region):
        return self(self.argmax(region))

    def linear_bound(self, region):
        # tangent at the term's own maximizer over the region
        t = self.argmax(region)
        return self(t), -(t - self.y) / self.variance, t

    def quadratic_bound(self, region):
        v = self.variance
        return QuadraticBound(-0.5 / v, self.y / v, -0.5 * self.y ** 2 / v + self.const)


class MidpointGaussianTerm(GaussianTerm):
    """Gaussian term whose tangent is taken at the region midpoint."""

    def linear_bound(self, region):
        lo, hi = region.lower[0], region.upper[0]
        if math.isfinite(lo) and math.isfinite(hi):
            t = 0.5 * (lo + hi)
        else:
            t = self.argmax(region)
        return self(t), -(t - self.y) / self.variance, t


# --- Cauchy log-likelihood C(d) = -log(1 + d^2) ---------------------------

def cauchy_c(d):
    return -np.log1p(np.square(d))


def _c(d):
    return -math.log1p(d * d)


def _dc(d):
    return -2.0 * d / (1.0 + d * d)


def _c_over_sq(d):
    # C(d) / d^2, tending to -1 as d -> 0 (d^2 may underflow)
    sq = d * d
    return -1.0 if sq == 0.0 else -math.log1p(sq) / sq


def cauchy_term_bound(d_interval):
    """Upper bound ``B(d) >= -log(1 + d^2)`` valid on ``d_interval``.

    Secant where C is convex, midpoint tangent where it is concave, and a
    quadratic touching C at 0 when the interval meets any of -1, 0, 1.
    """
    lo, hi = d_interval.lo, d_interval.hi
    if lo == hi:
        return QuadraticBound(0.0, 0.0, _c(lo))
    if any(lo <= v <= hi for v in (-1.0, 0.0, 1.0)):
        lo, hi = min(lo, 0.0), max(hi, 0.0)
        a = -math.inf
        for e in (lo, hi):
            if e != 0.0:
                a = max(a, 0.0 if math.isinf(e) else _c_over_sq(e))
        if a == -math.inf:
            a = 0.0
        # B(0) = C(0) = 0 and B'(0) = C'(0) = 0
        return QuadraticBound(a, 0.0, 0.0)
    if hi <= -1.0 or lo >= 1.0:
        if math.isinf(lo) or math.isinf(hi):
            return QuadraticBound(0.0, 0.0, _c(hi if hi <= -1.0 else lo))
        slope = (_c(hi) - _c(lo)) / (hi - lo)
        return QuadraticBound(0.0, slope, _c(lo) - slope * lo)
    m = 0.5 * (lo + hi)
    slope = _dc(m)
    return QuadraticBound(0.0, slope, _c(m) - slope * m)


def _cauchy_term_bounds(d_lo, d_hi):
    """Vectorized :func:`cauchy_term_bound`; returns arrays ``a, b, c``."""
    d_lo = np.asarray(d_lo, dtype=float)
    d_hi = np.asarray(d_hi, dtype=float)
    a = np.zeros_like(d_lo)
    b = np.zeros_like(d_lo)
    c = np.zeros_like(d_lo)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        meets = np.zeros(d_lo.shape, dtype=bool)
        for v in (-1.0, 0.0, 1.0):
            meets |= (d_lo <= v) & (v <= d_hi)
        degenerate = d_lo == d_hi
        # case (iii): quadratic through the origin
        e_lo = np.minimum(d_lo, 0.0)
        e_hi = np.maximum(d_hi, 0.0)
        sq_lo, sq_hi = e_lo * e_lo, e_hi * e_hi
        r_lo = np.where(np.isinf(e_lo), 0.0, np.where(sq_lo == 0.0, -1.0, cauchy_c(e_lo) / sq_lo))
        r_hi = np.where(np.isinf(e_hi), 0.0, np.where(sq_hi == 0.0, -1.0, cauchy_c(e_hi) / sq_hi))
        r_lo = np.where(e_lo == 0.0, -np.inf, r_lo)
        r_hi = np.where(e_hi == 0.0, -np.inf, r_hi)
        quad_a = np.maximum(r_lo, r_hi)
        quad_a = np.where(np.isneginf(quad_a), 0.0, quad_a)
        # convex side: secant, or a constant at the nearer edge when unbounded
        convex = ~meets & ((d_hi <= -1.0) | (d_lo >= 1.0))
        near = np.where(d_hi <= -1.0, d_hi, d_lo)
        unbounded = np.isinf(d_lo) | np.isinf(d_hi)
        c_lo, c_hi = cauchy_c(d_lo), cauchy_c(d_hi)
        slope = np.where(unbounded, 0.0, (c_hi - c_lo) / (d_hi - d_lo))
        sec_c = np.where(unbounded, cauchy_c(near), c_lo - slope * d_lo)
        # concave side not containing 0: tangent at the midpoint
        m = 0.5 * (d_lo + d_hi)
        tan_b = -2.0 * m / (1.0 + m * m)
        tan_c = cauchy_c(m) - tan_b * m
    a = np.where(meets, quad_a, 0.0)
    b = np.where(meets, 0.0, np.where(convex, slope, tan_b))
    c = np.where(meets, 0.0, np.where(convex, sec_c, tan_c))
    a = np.where(degenerate, 0.0, a)
    b = np.where(degenerate, 0.0, b)
    c = np.where(degenerate, c_lo, c)
    return a, b, c


def residual_intervals(X, y, region):
    """Ranges of ``d_n = w . x_n - y_n`` over a box of weights ``w``."""
    lo = np.asarray(region.lower)
    hi = np.asarray(region.upper)
    with np.errstate(invalid="ignore"):
        p1 = X * lo
        p2 = X * hi
    p1 = np.where(X == 0.0, 0.0, p1)
    p2 = np.where(X == 0.0, 0.0, p2)
    d_lo = np.minimum(p1, p2).sum(axis=1) - y
    d_hi = np.maximum(p1, p2).sum(axis=1) - y
    return d_lo, d_hi


def gaussian_prior_sup(region, variance):
    """Sup of the isotropic N(0, variance) log-density over a box."""
    closest = np.clip(0.0, region.lower, region.upper)
    dim = region.dim
    return float(-0.5 * np.dot(closest, closest) / variance
                 - 0.5 * dim * math.log(2.0 * math.pi * variance))


def cauchy_regression_bound(X, y, region, prior_variance=None, coupled=True, sweeps=12):
    """Upper bound on ``sum_n C(w . x_n - y_n)`` (plus an optional Gaussian
    prior log-density) over the box ``region``.

    The per-term bounds come from :func:`cauchy_term_bound` on the residual
    ranges. The uncoupled value maximizes each term separately. The coupled
    value maximizes the summed concave quadratic in ``w``: an approximate box
    maximizer is found by coordinate ascent and the tangent plane there is
    maximized over the box, which is an upper bound for any expansion point.
    The smaller of the two is returned.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    if X.shape[0] == 0:
        base = 0.0
        return base if prior_variance is None else gaussian_prior_sup(region, prior_variance)
    d_lo, d_hi = residual_intervals(X, y, region)
    a, b, c = _cauchy_term_bounds(d_lo, d_hi)

    # uncoupled: per-term maxima over the residual interval
    with np.errstate(invalid="ignore", divide="ignore"):
        vertex = np.where(a < 0.0, -b / (2.0 * np.where(a < 0.0, a, -1.0)), 0.0)
    v = np.clip(vertex, d_lo, d_hi)
    lin_hi = np.where(b > 0.0, d_hi, np.where(b < 0.0, d_lo, 0.0))
    d_star = np.where(a < 0.0, v, lin_hi)
    term_max = a * d_star ** 2 + b * d_star + c
    uncoupled = float(term_max.sum())
    if prior_variance is not None:
        uncoupled += gaussian_prior_sup(region, prior_variance)
    if not coupled or not region.is_finite:
        return pad(uncoupled)

    # coupled: q(w) = w^T H w + g^T w + k
    H = (X.T * a) @ X
    g = X.T @ (b - 2.0 * a * y)
    k = float(np.sum(a * y * y - b * y + c))
    dim = X.shape[1]
    if prior_variance is not None:
        H[np.diag_indices(dim)] -= 0.5 / prior_variance
        k += -0.5 * dim * math.log(2.0 * math.pi * prior_variance)
    lo = np.asarray(region.lower)
    hi = np.asarray(region.upper)
    w = np.clip(0.5 * (lo + hi), lo, hi)
    Hl, gl, wl = H.tolist(), g.tolist(), w.tolist()
    lol, hil = lo.tolist(), hi.tolist()
    for _ in range(sweeps):
        moved = 0.0
        for j in range(dim):
            row = Hl[j]
            grad_j = 2.0 * sum(row[i] * wl[i] for i in range(dim)) + gl[j]
            h = row[j]
            if h < 0.0:
                new = min(max(wl[j] - grad_j / (2.0 * h), lol[j]), hil[j])
            elif grad_j > 0.0:
                new = hil[j]
            elif grad_j < 0.0:
                new = lol[j]
            else:
                new = wl[j]
            moved = max(moved, abs(new - wl[j]))
            wl[j] = new
        if moved == 0.0 or dim == 1:
            break
    w = np.array(wl)
    grad = 2.0 * H @ w + g
    value = float(w @ H @ w + g @ w + k)
    corner = np.where(grad > 0.0, hi, lo)
    coupled_value = value + float(grad @ (corner - w))
    return pad(min(uncoupled, coupled_value))
