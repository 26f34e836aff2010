"""Statistical validation suites.

Each ``check_*`` function returns a list of :class:`CheckResult` and takes a
seed and a ``scale`` that multiplies every sample size (1.0 is the full
size). The reference values come from closed forms, quadrature or direct
evaluation, never from the code path being checked.
"""

import io
import math

import numpy as np

from . import expr as ex
from .astar import (BoundStore, astar_sample, astar_sample_multi_lb, drill_down_sample,
                    global_bound_sample, multi_sample_reuse)
from .benchmarks import compare_single
from .bounds import (GaussianTerm, QuadraticBound, _cauchy_term_bounds, cauchy_c,
                     cauchy_term_bound, sum_bound_constant, sum_bound_linear,
                     sum_bound_quadratic)
from .construction import TopDownStream, in_order_stream
from .gumbel import (EULER_GAMMA, gumbel_max_trick, log_partition_estimate, logsumexp,
                     sample_gumbel, sample_trunc_gumbel)
from .intervals import Interval
from .models import (CAUCHY_PRIOR_VARIANCE, REGRESSION_MODELS, clutter_preset,
                     clutter_term_exprs, cauchy_regression_preset, gaussian_mean_data,
                     gaussian_mean_preset, gaussian_mean_target, peakiness_target,
                     regression_preset)
from .proposals import Exponential1D, IsotropicGaussian, UniformBox
from .regions import Region, partition
from .rejection import rejection_sample
from .stats import (KS_CRITICAL_001, CheckResult, chi_square_2samp_test, chi_square_test,
                    geometric_chi_square, gumbel_cdf_vec, ks_2samp_test, ks_test,
                    oracle_for_target)

SUITES = ("gumbel", "process", "exactness", "bounds", "termination", "comparison")


def _n(base, scale, minimum=50):
    return max(minimum, int(round(base * scale)))


def _rng(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _ok(name, passed, statistic, threshold, detail=""):
    return CheckResult(name, float(statistic), float(threshold), bool(passed), detail)


# --- Gumbel primitives ------------------------------------------------------------

def check_gumbel(seed=0, scale=1.0):
    out = []
    rng = _rng(seed, 1)
    n = _n(100_000, scale)
    g = np.array([sample_gumbel(0.0, rng) for _ in range(n)])
    out.append(_ok("gumbel mean equals Euler-Mascheroni", abs(g.mean() - EULER_GAMMA) <= 0.02,
                   abs(g.mean() - EULER_GAMMA), 0.02, f"N={n}"))
    out.append(ks_test(g, gumbel_cdf_vec(0.0), "gumbel(0) KS"))

    t = np.array([sample_trunc_gumbel(0.0, 0.0, rng) for _ in range(n)])
    out.append(ks_test(t, lambda v: np.exp(-np.exp(-np.minimum(v, 0.0)) + 1.0),
                       "truncated gumbel(0, bound 0) KS"))

    m = _n(1_000_000, scale, 1000)
    locs = rng.normal(0.0, 10.0, m)
    gaps = rng.choice([-60.0, -5.0, -0.5, 0.0, 0.5, 5.0, 60.0], m) + rng.normal(0.0, 1.0, m)
    bounds = locs + gaps
    worst = max(sample_trunc_gumbel(a, b, rng) - b for a, b in zip(locs, bounds))
    out.append(_ok("truncated gumbel never exceeds its bound", worst <= 0.0, worst, 0.0, f"N={m}"))

    out.extend(_gumbel_max_checks(seed, scale))
    return out


def _gumbel_max_checks(seed, scale):
    out = []
    rng = _rng(seed, 2)
    n = _n(100_000, scale)
    probs = np.array([0.2, 0.3, 0.5])
    lw = np.log(probs)
    draws = [gumbel_max_trick(lw, rng) for _ in range(n)]
    idx = np.array([d[0] for d in draws])
    mx = np.array([d[1] for d in draws])
    out.append(chi_square_test(np.bincount(idx, minlength=3), probs, "argmax law (0.2,0.3,0.5)"))
    out.append(ks_test(mx, gumbel_cdf_vec(0.0), "max-stability: max ~ Gumbel(logsumexp)"))
    for i in range(3):
        for j in range(i + 1, 3):
            out.append(ks_2samp_test(mx[idx == i], mx[idx == j],
                                     f"max independent of argmax ({i} vs {j})"))

    lw2 = np.array([1.3, -2.0, 0.4, 5.0, 4.1])
    mx2 = np.array([gumbel_max_trick(lw2, rng)[1] for _ in range(n)])
    out.append(ks_test(mx2, gumbel_cdf_vec(logsumexp(lw2)), "max-stability, unequal weights"))

    # per-index conditional maxima at N per index
    lw3 = np.zeros(2)
    d3 = [gumbel_max_trick(lw3, rng) for _ in range(2 * n)]
    a = np.array([v for i, v in d3 if i == 0])
    b = np.array([v for i, v in d3 if i == 1])
    out.append(ks_2samp_test(a, b, "conditional max given argmax, equal weights"))

    c = 3.25
    r1, r2 = _rng(seed, 3), _rng(seed, 3)
    k = _n(10_000, scale)
    worst = 0.0
    same = True
    for _ in range(k):
        w = r1.normal(size=4)
        i1, m1 = gumbel_max_trick(w, r1)
        r2.normal(size=4)
        i2, m2 = gumbel_max_trick(w + c, r2)
        same &= i1 == i2
        worst = max(worst, abs((m2 - m1) - c))
    out.append(_ok("shift equivariance: same argmax, max shifted by c", same and worst <= 1e-12,
                   worst, 1e-12, f"N={k}"))

    est, se = log_partition_estimate(mx2)
    z = abs(est - logsumexp(lw2)) / se
    out.append(_ok("log-partition estimate within 3 stderr", z <= 3.0, z, 3.0))
    var = mx2.var(ddof=1)
    rel = abs(var / (math.pi ** 2 / 6.0) - 1.0)
    out.append(_ok("log-partition estimator variance within 10% of pi^2/6", rel <= 0.10, rel, 0.10))
    return out


# --- the process -----------------------------------------------------------------

def check_process(seed=0, scale=1.0):
    out = []
    n = _n(10_000, scale)
    out.extend(check_partition_invariance(seed, scale))

    rng = _rng(seed, 10)
    unit = UniformBox([0.0], [1.0])
    g1 = np.array([next(TopDownStream(unit, rng=rng)).gumbel for _ in range(_n(100_000, scale))])
    out.append(ks_test(g1, gumbel_cdf_vec(0.0), "top-down root G ~ Gumbel(log mass)"))

    left, right = Region((0.0,), (0.5,)), Region((0.5,), (1.0,))
    a, b, overall, consistent = [], [], [], True
    worst_child = -math.inf
    for _ in range(n):
        s = TopDownStream(unit, rng=rng)
        ga, _ = s.certified_max_in(left)
        gb, _ = s.certified_max_in(right)
        a.append(ga)
        b.append(gb)
        root = s.nodes[0].gumbel
        consistent &= root == max(ga, gb)
        by_id = {nd.index: nd for nd in s.nodes}
        for nd in s.nodes[1:]:
            worst_child = max(worst_child, nd.gumbel - by_id[nd.parent].gumbel)
    a, b = np.array(a), np.array(b)
    r = abs(np.corrcoef(a, b)[0, 1])
    out.append(_ok("disjoint sets independent: |corr| of maxima", r < 0.03, r, 0.03, f"N={n}"))
    out.append(ks_test(a, gumbel_cdf_vec(math.log(0.5)), "max over [0,0.5] ~ Gumbel(log 0.5)"))
    out.append(ks_test(b, gumbel_cdf_vec(math.log(0.5)), "max over [0.5,1] ~ Gumbel(log 0.5)"))
    out.append(_ok("max over union equals max of maxima", consistent, 0.0, 0.0))
    out.append(_ok("every child G below its parent G", worst_child < 0.0, worst_child, 0.0))

    gauss = IsotropicGaussian([0.0], 1.0)
    B = Region((0.3,), (math.inf,))
    p_b = 0.5 * math.erfc(0.3 / math.sqrt(2.0))
    hits = sum(B.contains(next(TopDownStream(gauss, rng=rng)).location) for _ in range(n))
    z = abs(hits / n - p_b) / math.sqrt(p_b * (1 - p_b) / n)
    out.append(_ok("argmax lands in B with probability nu(B)/nu(root)", z <= 3.0, z, 3.0))

    lm = math.log(2.0)
    box = UniformBox([0.0], [2.0])
    u, decreasing = [], True
    for _ in range(n):
        it = in_order_stream(box, rng=rng)
        vals = [next(it)[0] for _ in range(5)]
        decreasing &= all(x > y for x, y in zip(vals, vals[1:]))
        # conditional CDF of G2 given G1, which must be uniform
        u.append(math.exp(-math.exp(-vals[1] + lm) + math.exp(-vals[0] + lm)))
    out.append(_ok("in-order values strictly decreasing", decreasing, 0.0, 0.0))
    out.append(ks_test(u, lambda v: np.clip(v, 0.0, 1.0), "in-order G2 | G1 ~ TruncGumbel"))
    return out


def check_partition_invariance(seed=0, scale=1.0):
    """Top-3 values of the Top-Down and In-Order constructions agree in law."""
    n = _n(10_000, scale)
    rng = _rng(seed, 11)
    prop = Exponential1D()
    td = np.array([TopDownStream(prop, rng=rng).certified_top(3) for _ in range(n)])
    io_ = []
    for _ in range(n):
        it = in_order_stream(prop, rng=rng)
        io_.append([next(it)[0] for _ in range(3)])
    io_ = np.array(io_)
    return [ks_2samp_test(td[:, k], io_[:, k], f"partition invariance, order statistic {k + 1}")
            for k in range(3)]


# --- exactness ---------------------------------------------------------------------

def exactness_targets():
    """The one-dimensional presets with quadrature breakpoints and probe grids."""
    grid = list(np.linspace(-10.0, 10.0, 401))
    return [
        ("peakiness a=1", peakiness_target(1.0), [0.0], [0.0, 1.0]),
        ("peakiness a=2", peakiness_target(2.0), [0.0], [0.0, 1.0]),
        ("peakiness a=10", peakiness_target(10.0), [0.0], [0.0, 0.1]),
        ("clutter D=1", clutter_preset(1).target, [], grid),
        ("gaussian-mean N=16", gaussian_mean_preset(16).target, [], grid),
        ("cauchy D=1", cauchy_regression_preset(20, 1, 0).target, [-2.0, 0.0, 2.0], grid),
    ]


def check_exactness(seed=0, scale=1.0):
    out = []
    n = _n(10_000, scale)
    for k, (name, target, bp, probe) in enumerate(exactness_targets()):
        rng = _rng(seed, 20, k)
        runs = [astar_sample(target, rng=rng) for _ in range(n)]
        oracle = oracle_for_target(target, bp, probe)
        out.append(oracle.ks_test([r.point[0] for r in runs], f"{name}: samples vs quadrature CDF"))
        out.append(ks_test([r.max_value for r in runs], gumbel_cdf_vec(oracle.log_z),
                           f"{name}: LB ~ Gumbel(log Z)"))
    return out


# --- termination -----------------------------------------------------------------------

def check_termination(seed=0, scale=1.0):
    """Geometric iteration counts for global-bound A* and rejection."""
    n = _n(10_000, scale)
    target = peakiness_target(2.0)
    oracle = oracle_for_target(target, [0.0], [0.0, 1.0])
    rho = math.exp(oracle.log_z)  # proposal mass 1, bound 0
    rng = _rng(seed, 30)
    gb = np.array([global_bound_sample(target, M_global=0.0, rng=rng).stats.iterations
                   for _ in range(n)])
    rj = np.array([rejection_sample(target, M_global=0.0, rng=rng)[1].iterations
                   for _ in range(n)])
    out = [geometric_chi_square(gb, rho, "global-bound iterations ~ Geometric(rho)"),
           geometric_chi_square(rj, rho, "rejection iterations ~ Geometric(rho)")]
    kmax = int(max(gb.max(), rj.max()))
    out.append(chi_square_2samp_test(np.bincount(gb, minlength=kmax + 1)[1:],
                                     np.bincount(rj, minlength=kmax + 1)[1:],
                                     "global-bound vs rejection iteration laws"))
    se = math.sqrt((1 - rho) / rho ** 2 / n)
    z = abs(gb.mean() - 1.0 / rho) / se
    out.append(_ok("global-bound mean iterations = 1/rho", z <= 3.0, z, 3.0))
    o_zero = peakiness_target(0.0)
    ones = all(global_bound_sample(o_zero, M_global=0.0, rng=rng).stats.iterations == 1
               for _ in range(200))
    out.append(_ok("o = 0 with bound 0 stops after one iteration", ones, 0.0, 0.0))
    return out


# --- bounds ------------------------------------------------------------------------------

def _random_region(root, proposal, rng, max_depth=14):
    """A region reached by splitting at proposal draws along a random path."""
    region = root
    for _ in range(int(rng.integers(0, max_depth + 1))):
        x = proposal.sample(region, rng)
        kids = partition(region, x)
        region = kids[int(rng.integers(len(kids)))]
    return region


def _points_in(region, m, rng):
    """Points covering a region, its corners and far into infinite sides."""
    lo = np.array(region.lower)
    hi = np.array(region.upper)
    d = lo.size
    pts = np.empty((m, d))
    for j in range(d):
        a, b = lo[j], hi[j]
        if math.isfinite(a) and math.isfinite(b):
            col = rng.uniform(a, b, m)
            col[: m // 20] = rng.choice([a, b], m // 20)
        elif math.isfinite(a):
            col = a + rng.exponential(1.0, m) * rng.choice([0.01, 1.0, 30.0], m)
            col[: m // 20] = a
        elif math.isfinite(b):
            col = b - rng.exponential(1.0, m) * rng.choice([0.01, 1.0, 30.0], m)
            col[: m // 20] = b
        else:
            col = rng.normal(0.0, 1.0, m) * rng.choice([0.1, 1.0, 30.0], m)
        pts[:, j] = col
    return pts


def _soundness_cases():
    """(name, target, vectorized o) for every preset and bounder kind.

    The vectorized log-likelihoods are written out directly from the model
    definitions; they double as a cross-check of each target's ``o``.
    """
    cases = []
    for a in (1.0, 2.0, 10.0, 1e4):
        cases.append((f"peakiness a={a:g}", peakiness_target(a),
                      lambda P, a=a: -a * np.log1p(P[:, 0])))
    for D in (1, 2, 3, 4):
        p = clutter_preset(D)
        info, data = p.target.info, p.data["x"]

        def o_clutter(P, info=info, data=data):
            sq = ((P[:, None, :] - data[None, :, :]) ** 2).sum(-1)
            li = np.log1p(-info["w_outlier"]) - 0.5 * data.shape[1] * np.log(
                2 * np.pi * info["inlier_variance"]) - 0.5 * sq / info["inlier_variance"]
            return np.logaddexp(li, np.log(info["w_outlier"]) - data.shape[1] * np.log(9.0)).sum(1)
        cases.append((f"clutter D={D}", p.target, o_clutter))
        if D <= 2:
            exprs = clutter_term_exprs(D, info["w_outlier"], data, info["inlier_variance"])
            names = ex.default_names(D)
            compiled = [ex.compile_interval(e, names) for e in exprs]
            generic = _with_bounder(p.target, lambda r, c=compiled: sum_bound_constant(c, r))
            cases.append((f"{RAW} clutter D={D} generic interval bound", generic, o_clutter))
    for N in (1, 16, 1024):
        y = gaussian_mean_data(N, seed=7)
        for kind in ("constant", "linear", "quadratic"):
            cases.append((f"gaussian-mean N={N} {kind}", gaussian_mean_target(y, kind),
                          lambda P, y=y: -0.5 * ((P[:, :1] - y[None, :]) ** 2).sum(1)
                          - 0.5 * y.size * np.log(2 * np.pi)))
        terms = [GaussianTerm(v) for v in y[:16]]
        yt = y[:16]
        o_terms = (lambda P, yt=yt: -0.5 * ((P[:, :1] - yt[None, :]) ** 2).sum(1)
                   - 0.5 * yt.size * np.log(2 * np.pi))
        base = gaussian_mean_target(yt, "constant")
        cases.append((f"{RAW} gaussian terms N={yt.size} sum_bound_linear",
                      _with_bounder(base, lambda r, t=terms: sum_bound_linear(t, r)), o_terms))
        cases.append((f"{RAW} gaussian terms N={yt.size} sum_bound_quadratic",
                      _with_bounder(base, lambda r, t=terms: sum_bound_quadratic(t, r)), o_terms))
    for name in REGRESSION_MODELS:
        for sigma in (1.0, 0.1):
            p = regression_preset(name, sigma, seed=3)
            cases.append((f"{name} sigma={sigma:g}", p.target, _regression_o(p)))
    for D in (1, 2, 3):
        for coupled in (True, False):
            p = cauchy_regression_preset(20, D, seed=5, coupled=coupled)
            X, y = p.data["X"], p.data["y"]

            def o_cauchy(P, X=X, y=y, D=D):
                d = P @ X.T - y[None, :]
                return (-0.5 * (P ** 2).sum(1) / CAUCHY_PRIOR_VARIANCE
                        - 0.5 * D * np.log(2 * np.pi * CAUCHY_PRIOR_VARIANCE)
                        - np.log1p(d ** 2).sum(1))
            cases.append((f"cauchy D={D} {'coupled' if coupled else 'per-term'}", p.target,
                          o_cauchy))
    return cases


# unpadded helpers: exact up to floating-point rounding at contact points
RAW = "[unpadded]"
RAW_TOL = 1e-12


def _with_bounder(target, bounder):
    from dataclasses import replace
    return replace(target, bounder=bounder)


def _regression_o(preset):
    f = ex.parse(preset.expression)
    params = list(preset.prior_box)
    xs, ys = preset.data["x"], preset.data["y"]
    sigma = preset.params["noise_sigma"]

    def o(P):
        env = {p: P[:, i:i + 1] for i, p in enumerate(params)}
        env["x"] = xs[None, :]
        with np.errstate(all="ignore"):
            r = ys[None, :] - ex.evaluate(f, env)
        return (-0.5 * (r ** 2).sum(1) / sigma ** 2
                - xs.size * (np.log(sigma) + 0.5 * np.log(2 * np.pi)))
    return o


def check_soundness(seed=0, scale=1.0):
    """``M(B) >= o(x)`` at ~10^6 (region, point) probes across all presets."""
    rng = _rng(seed, 40)
    cases = _soundness_cases()
    total = _n(1_000_000, scale, 10_000)
    points_per_region = 500
    regions_per_case = max(2, total // (points_per_region * len(cases)))
    out = []
    tally = {False: [0, 0, ("", -math.inf)], True: [0, 0, ("", -math.inf)]}
    for name, target, o_vec in cases:
        raw = name.startswith(RAW)
        t = tally[raw]
        for _ in range(regions_per_case):
            region = _random_region(target.root, target.proposal, rng)
            M = float(target.bounder(region))
            P = _points_in(region, points_per_region, rng)
            vals = o_vec(P)
            vals = vals[np.isfinite(vals)]
            t[0] += vals.size
            if vals.size and vals.max() - M > t[2][1]:
                t[2] = (name, float(vals.max() - M))
            slack = RAW_TOL * (1.0 + abs(M)) if raw else 0.0
            t[1] += int(np.sum(vals > M + slack))
    # Cauchy term bounds on intervals meeting -1, 0 or 1
    c_probes = c_viol = 0
    c_worst = -math.inf
    for _ in range(max(200, total // 2000)):
        v = rng.choice([-1.0, 0.0, 1.0])
        lo = v - rng.exponential(rng.choice([0.01, 1.0, 10.0]))
        hi = v + rng.exponential(rng.choice([0.01, 1.0, 10.0]))
        q = cauchy_term_bound(Interval(lo, hi))
        d = np.concatenate([np.linspace(min(lo, 0.0), max(hi, 0.0), 400), [lo, hi, 0.0, v]])
        gap = cauchy_c(d) - q(d)
        c_worst = max(c_worst, float(gap.max()))
        c_viol += int(np.sum(gap > RAW_TOL * (1.0 + np.abs(cauchy_c(d)))))
        c_probes += d.size
    for raw, label in ((False, "sampler bounders, exact"), (True, f"unpadded helpers, tol {RAW_TOL:g}")):
        n_probes, viol, worst = tally[raw]
        out.append(_ok(f"bound soundness M(B) >= o(x) ({label})", viol == 0, viol, 0,
                       f"probes={n_probes}, max o-M={worst[1]:.3g} ({worst[0]})"))
    out.append(_ok(f"Cauchy term bound >= C on intervals meeting -1, 0, 1 (tol {RAW_TOL:g})",
                   c_viol == 0, c_viol, 0, f"probes={c_probes}, max C-B={c_worst:.3g}"))
    return out


def _random_expr(rng, depth, names):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return ex.Var(names[int(rng.integers(len(names)))])
        return ex.Const(float(np.round(rng.normal(0.0, 2.0), 3)))
    kind = rng.choice(["neg", "exp", "sin", "cos", "abs", "add", "sub", "mul", "div", "pow",
                       "log", "sqrt"])
    a = _random_expr(rng, depth - 1, names)
    if kind in ("neg", "sin", "cos", "abs"):
        return ex.Op(kind, [a])
    if kind == "exp":
        return ex.exp(ex.Op("sin", [a]) * 3.0)
    if kind in ("log", "sqrt"):
        return ex.Op(kind, [ex.Op("abs", [a]) + 0.1])
    if kind == "pow":
        p = int(rng.integers(-2, 4))
        return ex.Op("pow", [a, ex.Const(float(p))])
    b = _random_expr(rng, depth - 1, names)
    return ex.Op(kind, [a, b])


def check_interval_enclosure(seed=0, scale=1.0):
    rng = _rng(seed, 41)
    names = ["x0", "x1"]
    trees = _n(2000, scale, 100)
    bad = evaluated = 0
    for _ in range(trees):
        e = _random_expr(rng, int(rng.integers(1, 7)), names)
        lo = rng.normal(0.0, 3.0, 2)
        hi = lo + rng.exponential(2.0, 2) + 1e-6
        region = Region(tuple(lo), tuple(hi))
        iv = ex.interval_eval(e, region, names)
        P = rng.uniform(lo, hi, size=(200, 2))
        P[:4] = [[lo[0], lo[1]], [lo[0], hi[1]], [hi[0], lo[1]], [hi[0], hi[1]]]
        with np.errstate(all="ignore"):
            v = np.broadcast_to(ex.evaluate(e, {"x0": P[:, 0], "x1": P[:, 1]}), (200,))
        v = v[np.isfinite(v)]
        evaluated += v.size
        bad += int(np.sum((v < iv.lo) | (v > iv.hi)))
    return [_ok("interval enclosure of random expressions (depth <= 6)", bad == 0, bad, 0,
                f"points={evaluated}, trees={trees}")]


def check_bound_properties(seed=0, scale=1.0):
    out = []
    # Cauchy contact at 0 in the straddling case
    worst = 0.0
    rng = _rng(seed, 42)
    for _ in range(1000):
        lo, hi = -rng.exponential(3.0), rng.exponential(3.0)
        q = cauchy_term_bound(Interval(lo, hi))
        h = 1e-6
        deriv = (q(h) - q(-h)) / (2 * h)
        worst = max(worst, abs(q(0.0)), abs(deriv))
    out.append(_ok("Cauchy bound touches C at 0 with zero slope", worst <= 1e-9, worst, 1e-9))
    q = cauchy_term_bound(Interval(-2.0, 2.0))
    err = abs(q.a + math.log(5.0) / 4.0)
    out.append(_ok("Cauchy bound on [-2,2] has a = -log(5)/4", err < 1e-12, err, 1e-12))
    a, b, c = _cauchy_term_bounds(np.array([-2.0, 2.0, 0.2]), np.array([2.0, 5.0, 0.4]))
    ref = [cauchy_term_bound(Interval(l, h)) for l, h in ((-2.0, 2.0), (2.0, 5.0), (0.2, 0.4))]
    err = max(abs(x - r) for arr, attr in ((a, "a"), (b, "b"), (c, "c"))
              for x, r in zip(arr, [getattr(t, attr) for t in ref]))
    out.append(_ok("vectorized Cauchy bounds match the scalar case analysis", err < 1e-12, err, 1e-12))

    # tightness ordering on the Gaussian-mean model
    y = gaussian_mean_data(64, seed=3)
    tk = {k: gaussian_mean_target(y, k) for k in ("constant", "linear", "quadratic")}
    order_bad = tight_bad = 0
    for _ in range(_n(1000, scale, 100)):
        lo = rng.normal(0.0, 2.0)
        region = Region((lo,), (lo + rng.exponential(1.0),))
        mc, ml, mq = (tk[k].bounder(region) for k in ("constant", "linear", "quadratic"))
        order_bad += not (mc >= ml - 1e-9 * abs(ml) and ml >= mq - 1e-9 * abs(mq))
        t = min(max(float(y.mean()), region.lower[0]), region.upper[0])
        exact = tk["quadratic"].o(np.array([t]))
        tight_bad += abs(mq - exact) > 1e-8 * max(1.0, abs(exact))
    out.append(_ok("constant >= linear >= quadratic on random regions", order_bad == 0, order_bad, 0))
    out.append(_ok("quadratic bound equals the exact supremum", tight_bad == 0, tight_bad, 0))

    one = gaussian_mean_target(np.array([0.7]), "constant")
    region = Region((-1.0,), (0.2,))
    t = GaussianTerm(0.7)
    vals = [one.bounder(region), sum_bound_linear([t], region), sum_bound_quadratic([t], region)]
    spread = max(vals) - min(vals)
    out.append(_ok("N=1: all three bound kinds agree", spread < 1e-8, spread, 1e-8))
    return out


def check_bounds(seed=0, scale=1.0):
    return (check_soundness(seed, scale) + check_interval_enclosure(seed, scale)
            + check_bound_properties(seed, scale))


# --- comparisons and trends --------------------------------------------------------

def check_peakiness_scaling(seed=0, scale=1.0):
    runs = _n(1000, scale)
    means = {}
    for k, a in enumerate((10.0, 1e4)):
        rng = _rng(seed, 50, k)
        t = peakiness_target(a)
        means[a] = float(np.mean([drill_down_sample(t, rng=rng).stats.likelihood_evals
                                  for _ in range(runs)]))
    ratio = means[1e4] / means[10.0]
    return [_ok("drill-down evals(a=1e4) < 5 x evals(a=10)", ratio < 5.0, ratio, 5.0,
                f"means {means[10.0]:.2f} and {means[1e4]:.2f} over {runs} runs")]


def bounding_costs(seed=0, scale=1.0, n_values=(16, 64, 256, 1024)):
    """Mean likelihood evaluations per bound kind; fresh data every run."""
    runs = _n(100, scale, 10)
    out = {}
    for k, N in enumerate(n_values):
        rng = _rng(seed, 51, k)
        acc = {"constant": [], "linear": [], "quadratic": []}
        for _ in range(runs):
            y = gaussian_mean_data(N, seed=int(rng.integers(2 ** 63)))
            for kind in acc:
                acc[kind].append(astar_sample(gaussian_mean_target(y, kind), rng=rng)
                                 .stats.likelihood_evals)
        out[N] = {kind: float(np.mean(v)) for kind, v in acc.items()}
    return out


def check_bounding_trends(seed=0, scale=1.0):
    costs = bounding_costs(seed, scale)
    ns = sorted(costs)
    ratio = {n: costs[n]["constant"] / costs[n]["quadratic"] for n in ns}
    increasing = all(ratio[a] < ratio[b] for a, b in zip(ns, ns[1:]))
    detail = ", ".join(f"N={n}: {ratio[n]:.2f}" for n in ns)
    out = [_ok("constant/quadratic cost ratio increases with N", increasing,
               ratio[ns[-1]], ratio[ns[0]], detail)]
    # least-squares fit of log ratio = log c + 0.5 log N, then endpoint deviations
    logc = float(np.mean([math.log(ratio[n]) - 0.5 * math.log(n) for n in ns]))
    dev = max(abs(math.log(ratio[n]) - logc - 0.5 * math.log(n)) for n in (ns[0], ns[-1]))
    factor = math.exp(dev)
    anchored = (ratio[ns[-1]] / ratio[ns[0]]) / math.sqrt(ns[-1] / ns[0])
    out.append(_ok("constant/quadratic ratio within x2 of a fitted c*sqrt(N) at the endpoints",
                   factor <= 2.0, factor, 2.0,
                   f"endpoint-to-endpoint growth is {anchored:.2f} x sqrt(N ratio)"))
    lin = costs[ns[-1]]["linear"] / costs[ns[-1]]["quadratic"]
    out.append(_ok(f"linear/quadratic cost at N={ns[-1]} in [1.5, 6]", 1.5 <= lin <= 6.0, lin, 6.0))
    return out


def check_clutter(seed=0, scale=1.0):
    runs = _n(100, scale, 10)
    out = []
    for D, (lo, hi) in ((3, (300, 2700)), (4, (1300, 12000))):
        rng = _rng(seed, 52, D)
        t = clutter_preset(D).target
        m = float(np.mean([astar_sample(t, rng=rng).stats.likelihood_evals for _ in range(runs)]))
        out.append(_ok(f"clutter D={D} mean likelihood evals in [{lo}, {hi}]", lo <= m <= hi,
                       m, hi, f"{runs} runs"))
    return out


CAUCHY_RATES = (1.0, 0.5, 0.25, 0.1)
REGRESSION_COMPARE_SIGMA = 0.5


def dominance_costs(seed=0, scale=1.0):
    """``{(suite, rate): [(record, dim), ...]}`` where each record maps an
    algorithm to its (likelihood, bound) counts for one exact sample."""
    instances = _n(20, scale, 2)
    res = {}
    for k, rate in enumerate(CAUCHY_RATES):
        rng = _rng(seed, 53, k)
        res[("cauchy D=2", rate)] = [
            (compare_single(cauchy_regression_preset(20, 2, s).target, rate, rng), 2)
            for s in range(instances)]
    per_model = max(1, instances // len(REGRESSION_MODELS))
    recs = []
    for j, (name, (_, box)) in enumerate(REGRESSION_MODELS.items()):
        rng = _rng(seed, 54, j)
        for s in range(per_model):
            target = regression_preset(name, REGRESSION_COMPARE_SIGMA, s).target
            recs.extend((compare_single(target, 1.0, rng), len(box)) for _ in range(5))
    res[("regression suite", 1.0)] = recs
    return res


def check_dominance(seed=0, scale=1.0, costs=None):
    out = []
    costs = dominance_costs(seed, scale) if costs is None else costs
    for (suite, rate), recs in costs.items():
        for label in ("2", "D+1"):
            mean = {}
            for alg in recs[0][0]:
                mean[alg] = float(np.mean([
                    r[alg][0] + (2.0 if label == "2" else d + 1.0) * r[alg][1]
                    for r, d in recs]))
            a = mean["astar"]
            rival = min(v for k, v in mean.items() if k != "astar")
            detail = ", ".join(f"{k}={v:.1f}" for k, v in mean.items())
            out.append(_ok(f"A* cheaper than both OS* ({suite}, rate {rate:g}, bound cost {label})",
                           a < rival, a, rival, detail))
    return out


def check_variants(seed=0, scale=1.0):
    out = []
    targets = [("peakiness a=2", peakiness_target(2.0)),
               ("cauchy D=1", cauchy_regression_preset(20, 1, 0).target)]
    same = True
    for name, t in targets:
        for s in range(20):
            buf1, buf2 = io.StringIO(), io.StringIO()
            r1 = astar_sample(t, rng=_rng(seed, 60, s), trace=buf1)
            r2 = astar_sample_multi_lb(t, lb_draws=1, rng=_rng(seed, 60, s), trace=buf2)
            same &= buf1.getvalue() == buf2.getvalue() and r1.max_value == r2.max_value
    out.append(_ok("multi-lb with one draw is trace-identical to A*", same, 0.0, 0.0))

    n = _n(10_000, scale)
    for k, (name, t) in enumerate(targets):
        rng = _rng(seed, 61, k)
        base = [astar_sample(t, rng=rng).point[0] for _ in range(n)]
        multi = [astar_sample_multi_lb(t, lb_draws=4, rng=rng).point[0] for _ in range(n)]
        reuse = [r.point[0] for r in multi_sample_reuse(t, n_samples=n, rng=rng)]
        out.append(ks_2samp_test(base, multi, f"{name}: multi-lb(4) vs A*"))
        out.append(ks_2samp_test(base, reuse, f"{name}: bound reuse vs A*"))
        if t.unimodal:
            drill = [drill_down_sample(t, rng=rng).point[0] for _ in range(n)]
            out.append(ks_2samp_test(base, drill, f"{name}: drill-down vs A*"))
    return out


def check_comparison(seed=0, scale=1.0):
    return (check_peakiness_scaling(seed, scale) + check_bounding_trends(seed, scale)
            + check_clutter(seed, scale) + check_dominance(seed, scale)
            + check_variants(seed, scale))


_SUITE_FUNCS = {
    "gumbel": check_gumbel,
    "process": check_process,
    "exactness": check_exactness,
    "bounds": check_bounds,
    "termination": check_termination,
    "comparison": check_comparison,
}


def run_suite(name, seed=0, scale=1.0):
    try:
        fn = _SUITE_FUNCS[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}") from None
    return fn(seed, scale)
