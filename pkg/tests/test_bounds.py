import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import optimize

from gumbel_astar import expr as ex
from gumbel_astar.bounds import (GaussianTerm, MidpointGaussianTerm, QuadraticBound,
                                 TargetDecomposition, _cauchy_term_bounds, cauchy_c,
                                 cauchy_regression_bound, cauchy_term_bound, gaussian_prior_sup,
                                 interval_bounder, pad, residual_intervals, sum_bound_constant,
                                 sum_bound_linear, sum_bound_quadratic)
from gumbel_astar.intervals import Interval
from gumbel_astar.proposals import UniformBox
from gumbel_astar.regions import Region

TOL = 1e-12


def test_pad_moves_up_and_keeps_infinities():
    assert pad(1.0) > 1.0 and pad(-1.0) > -1.0
    assert pad(math.inf) == math.inf and pad(-math.inf) == -math.inf


def test_quadratic_bound_max_over():
    q = QuadraticBound(-1.0, 2.0, 0.0)  # peak 1 at d = 1
    assert q.max_over(-5.0, 5.0) == pytest.approx(1.0)
    assert q.max_over(2.0, 3.0) == pytest.approx(q(2.0))
    assert q.max_over(-math.inf, 0.0) == pytest.approx(0.0)
    assert QuadraticBound(0.0, 1.0, 0.0).max_over(0.0, math.inf) == math.inf
    assert QuadraticBound(0.0, 0.0, 3.0).max_over(-math.inf, math.inf) == 3.0


def test_cauchy_bound_straddling_value():
    # quadratic through the origin touching C at the far edge
    q = cauchy_term_bound(Interval(-2.0, 2.0))
    assert q.a == pytest.approx(-math.log(5.0) / 4.0)
    assert q.b == 0.0 and q.c == 0.0
    assert q(2.0) == pytest.approx(cauchy_c(2.0))


def test_cauchy_bound_cases():
    # convex region: secant through the endpoints
    q = cauchy_term_bound(Interval(2.0, 5.0))
    assert q(2.0) == pytest.approx(cauchy_c(2.0)) and q(5.0) == pytest.approx(cauchy_c(5.0))
    # concave region away from 0: tangent at the midpoint
    q = cauchy_term_bound(Interval(0.2, 0.6))
    assert q(0.4) == pytest.approx(cauchy_c(0.4))
    # unbounded convex side: constant at the finite edge
    q = cauchy_term_bound(Interval(3.0, math.inf))
    assert (q.a, q.b) == (0.0, 0.0) and q.c == pytest.approx(cauchy_c(3.0))
    q = cauchy_term_bound(Interval(-math.inf, math.inf))
    assert (q.a, q.b, q.c) == (0.0, 0.0, 0.0)
    q = cauchy_term_bound(Interval(1.5, 1.5))
    assert q.c == pytest.approx(cauchy_c(1.5))


@st.composite
def d_intervals(draw):
    a = draw(st.floats(-30, 30))
    b = draw(st.floats(-30, 30))
    lo, hi = min(a, b), max(a, b)
    if draw(st.integers(0, 9)) == 0:
        lo = -math.inf
    if draw(st.integers(0, 9)) == 0:
        hi = math.inf
    return Interval(lo, hi)


@settings(max_examples=400)
@given(d_intervals())
def test_cauchy_term_bound_is_sound(iv):
    q = cauchy_term_bound(iv)
    lo = max(iv.lo, -1e4) if math.isinf(iv.lo) else iv.lo
    hi = min(iv.hi, 1e4) if math.isinf(iv.hi) else iv.hi
    d = np.concatenate([np.linspace(lo, hi, 2001), [lo, hi]])
    if iv.lo <= 0.0 <= iv.hi:
        d = np.append(d, 0.0)
    assert np.all(q(d) >= cauchy_c(d) - TOL * (1.0 + np.abs(cauchy_c(d))))


@settings(max_examples=200)
@given(st.lists(d_intervals(), min_size=1, max_size=8))
def test_vectorized_cauchy_bounds_match_scalar(ivs):
    a, b, c = _cauchy_term_bounds([i.lo for i in ivs], [i.hi for i in ivs])
    for k, iv in enumerate(ivs):
        q = cauchy_term_bound(iv)
        assert a[k] == pytest.approx(q.a, abs=1e-12)
        assert b[k] == pytest.approx(q.b, abs=1e-12)
        assert c[k] == pytest.approx(q.c, abs=1e-12)


def test_residual_intervals_enclose_residuals(rng):
    X = rng.normal(size=(6, 3))
    y = rng.normal(size=6)
    r = Region((-1.0, 0.0, 2.0), (1.0, 0.5, 3.0))
    d_lo, d_hi = residual_intervals(X, y, r)
    W = rng.uniform(r.lower, r.upper, size=(500, 3))
    D = W @ X.T - y
    assert np.all(D >= d_lo - 1e-12) and np.all(D <= d_hi + 1e-12)
    Xz = np.array([[0.0, 1.0]])
    d_lo, d_hi = residual_intervals(Xz, np.zeros(1), Region((-math.inf, 0.0), (math.inf, 1.0)))
    assert (d_lo[0], d_hi[0]) == (0.0, 1.0)


def test_gaussian_prior_sup():
    assert gaussian_prior_sup(Region((1.0,), (2.0,)), 1.0) == pytest.approx(
        -0.5 - 0.5 * math.log(2 * math.pi))
    assert gaussian_prior_sup(Region((-1.0,), (2.0,)), 4.0) == pytest.approx(
        -0.5 * math.log(8 * math.pi))


def _cauchy_objective(X, y, var):
    def f(w):
        d = X @ w - y
        return (-0.5 * w @ w / var - 0.5 * len(w) * math.log(2 * math.pi * var)
                - np.log1p(d * d).sum())
    return f


@pytest.mark.parametrize("coupled", [True, False])
@pytest.mark.parametrize("dim", [1, 2, 3])
def test_cauchy_regression_bound_above_optimizer_max(coupled, dim, rng):
    X = rng.normal(size=(10, dim))
    y = rng.normal(size=10) * 2
    f = _cauchy_objective(X, y, 10.0)
    for _ in range(20):
        lo = rng.uniform(-4, 3, dim)
        hi = lo + rng.exponential(1.0, dim) + 1e-3
        r = Region(tuple(lo), tuple(hi))
        M = cauchy_regression_bound(X, y, r, 10.0, coupled=coupled)
        # multi-start bounded optimizer as the independent sup estimate
        best = max(-optimize.minimize(lambda w: -f(w), rng.uniform(lo, hi),
                                      bounds=list(zip(lo, hi))).fun for _ in range(4))
        assert M >= best


def test_coupled_bound_is_never_looser(rng):
    X = rng.normal(size=(20, 2))
    y = rng.normal(size=20)
    for _ in range(50):
        lo = rng.uniform(-5, 4, 2)
        r = Region(tuple(lo), tuple(lo + rng.exponential(2.0, 2) + 1e-3))
        assert (cauchy_regression_bound(X, y, r, 10.0, coupled=True)
                <= cauchy_regression_bound(X, y, r, 10.0, coupled=False))


def test_cauchy_regression_bound_without_data_or_prior():
    r = Region((-1.0,), (1.0,))
    assert cauchy_regression_bound(np.zeros((0, 1)), np.zeros(0), r) == 0.0
    assert cauchy_regression_bound(np.ones((1, 1)), np.zeros(1), r) == pytest.approx(0.0, abs=1e-9)


def test_gaussian_term_bounds():
    t = GaussianTerm(1.0, variance=2.0)
    r = Region((2.0,), (3.0,))
    assert t.argmax(r) == 2.0
    assert t.constant_bound(r) == pytest.approx(-0.25 - 0.5 * math.log(4 * math.pi))
    value, grad, point = t.linear_bound(r)
    assert (value, point) == (t(2.0), 2.0) and grad == pytest.approx(-0.5)
    q = t.quadratic_bound(r)
    for th in (-3.0, 0.0, 1.0, 5.0):
        assert q(th) == pytest.approx(t(th))
    m = MidpointGaussianTerm(1.0)
    assert m.linear_bound(r)[2] == 2.5
    assert m.linear_bound(Region((2.0,), (math.inf,)))[2] == 2.0


@settings(max_examples=100)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=12), st.floats(-6, 6), st.floats(1e-3, 4))
def test_gaussian_sum_bounds_ordered_and_sound(ys, lo, w):
    terms = [GaussianTerm(v) for v in ys]
    r = Region((lo,), (lo + w,))
    const = sum_bound_constant([lambda reg, t=t: Interval.point(t.constant_bound(reg))
                                for t in terms], r)
    lin = sum_bound_linear(terms, r)
    quad = sum_bound_quadratic(terms, r)
    grid = np.linspace(lo, lo + w, 513)
    exact = max(sum(t(th) for t in terms) for th in grid)
    slack = 1e-9 * (1 + abs(exact))
    assert const + slack >= lin and lin + slack >= quad and quad + slack >= exact
    # quadratic is exact: the summed quadratic is the log-likelihood itself
    best = float(np.clip(np.mean(ys), lo, lo + w))
    assert quad == pytest.approx(sum(t(best) for t in terms), rel=1e-9, abs=1e-9)


def test_sum_bounds_edge_cases():
    r = Region((0.0,), (math.inf,))
    assert sum_bound_linear([], r) == 0.0 and sum_bound_quadratic([], r) == 0.0
    # positive slope towards an infinite edge
    assert sum_bound_linear([GaussianTerm(5.0)], Region((-math.inf,), (0.0,))) == pytest.approx(
        GaussianTerm(5.0)(0.0))
    with pytest.raises(ValueError):
        sum_bound_quadratic([GaussianTerm(0.0)], Region((0.0, 0.0), (1.0, 1.0)))


def test_interval_bounders_over_expressions():
    e = ex.parse("(neg (pow (sub x 1) 2))")
    bound = interval_bounder(e)
    assert bound(Region((0.0,), (3.0,))) >= 0.0
    assert bound(Region((2.0,), (3.0,))) >= -1.0 - 1e-12
    total = sum_bound_constant([e, ex.parse("(sin x)")], Region((0.0,), (1.0,)))
    assert total >= math.sin(1.0) - 1e-12


def test_target_decomposition_basics():
    box = UniformBox([0.0], [2.0], -math.log(2.0))
    t = TargetDecomposition(box, lambda x: -float(x[0]), lambda r: -r.lower[0])
    assert t.root == box.support() and t.dim == 1
    assert t.log_density([1.0]) == pytest.approx(-math.log(2.0) - 1.0)
    assert t.log_density([3.0]) == -math.inf
