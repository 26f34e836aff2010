"""Experiment sweeps producing tidy rows (lists of dicts) for CSV output.

Every sweep point draws from its own generator, spawned from the master
seed as ``SeedSequence(seed).spawn(n_points)[i]``; runs within a point
consume that generator sequentially. Results do not depend on the number of
worker processes.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .astar import astar_sample, astar_sample_multi_lb, drill_down_sample, multi_sample_reuse
from .models import (REGRESSION_MODELS, cauchy_regression_preset, gaussian_mean_data,
                     gaussian_mean_target, peakiness_target, regression_preset)
from .rejection import REFINE_STRATEGIES, osstar_sample

THREADS_ENV = "GUMBEL_ASTAR_THREADS"

FIGURES = ("peakiness", "bounding", "regression", "cauchy-single", "cauchy-multi")

PEAKINESS_A = (1.0, 10.0, 100.0, 1000.0, 10000.0)
BOUNDING_N = (16, 64, 256, 1024)
REGRESSION_NOISE = (10.0, 3.0, 1.0, 0.3)
REFINE_RATES = (1.0, 0.5, 0.25, 0.1)


def worker_count():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def point_rngs(seed, n):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def run_points(fn, args, workers=None):
    """Map ``fn`` over ``args`` in order, optionally across processes."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_star, [(fn, a) for a in args]))


def _star(item):
    fn, a = item
    return fn(*a)


def _mean_sem(values):
    v = np.asarray(values, dtype=float)
    sem = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
    return float(v.mean()), sem


def weighted_cost(lik, bnd, weight):
    return lik + weight * bnd


# --- peakiness ----------------------------------------------------------------

def _peakiness_point(a, runs, rng):
    target = peakiness_target(a)
    evals = [drill_down_sample(target, rng=rng).stats.likelihood_evals for _ in range(runs)]
    mean, sem = _mean_sem(evals)
    return {"a": a, "mean_likelihood_evals": mean, "sem": sem}


def peakiness(runs=1000, a_values=PEAKINESS_A, seed=0):
    rngs = point_rngs(seed, len(a_values))
    return run_points(_peakiness_point, [(a, runs, r) for a, r in zip(a_values, rngs)])


# --- bounding strategies --------------------------------------------------------

def _bounding_point(N, runs, rng):
    out = {k: ([], [], []) for k in ("constant", "linear", "quadratic")}
    for run in range(runs):
        y = gaussian_mean_data(N, seed=int(rng.integers(2 ** 63)))
        for kind, (lik, bnd, nodes) in out.items():
            s = astar_sample(gaussian_mean_target(y, kind), rng=rng).stats
            lik.append(s.likelihood_evals)
            bnd.append(s.bound_evals)
            nodes.append(s.nodes_expanded)
    q_lik = float(np.mean(out["quadratic"][0]))
    rows = []
    for kind, (lik, bnd, nodes) in out.items():
        m_lik, s_lik = _mean_sem(lik)
        m_bnd, s_bnd = _mean_sem(bnd)
        rows.append({"N": N, "bound_kind": kind, "mean_likelihood_evals": m_lik,
                     "sem_likelihood_evals": s_lik, "mean_bound_evals": m_bnd,
                     "sem_bound_evals": s_bnd, "mean_nodes_expanded": float(np.mean(nodes)),
                     "likelihood_ratio_to_quadratic": m_lik / q_lik})
    return rows


def bounding(runs=100, n_values=BOUNDING_N, seed=0):
    """Gaussian-mean model: every run draws a fresh dataset shared by the
    three bound kinds."""
    rngs = point_rngs(seed, len(n_values))
    parts = run_points(_bounding_point, [(n, runs, r) for n, r in zip(n_values, rngs)])
    return [row for part in parts for row in part]


# --- regression vs noise ----------------------------------------------------------

def expected_rejection_evals(target, rng, n=20000):
    """Monte Carlo estimate of ``1/rho`` for rejection with the root bound."""
    M = float(target.bounder(target.root))
    o = np.array([target.o(target.proposal.sample(target.root, rng)) for _ in range(n)])
    rho = float(np.mean(np.exp(o - M)))
    return math.inf if rho == 0.0 else 1.0 / rho


def _regression_point(name, sigma, instances, samples, rng):
    lik, bnd = [], []
    rej = []
    for seed in range(instances):
        target = regression_preset(name, sigma, seed).target
        for _ in range(samples):
            s = astar_sample(target, rng=rng).stats
            lik.append(s.likelihood_evals)
            bnd.append(s.bound_evals)
        rej.append(expected_rejection_evals(target, rng))
    m, sem = _mean_sem(lik)
    return {"model": name, "noise_sigma": sigma, "mean_likelihood_evals": m, "sem": sem,
            "mean_bound_evals": float(np.mean(bnd)),
            "expected_rejection_evals": float(np.mean(rej))}


def regression(instances=1, samples=5, noise=REGRESSION_NOISE, seed=0):
    pts = [(name, s) for name in REGRESSION_MODELS for s in noise]
    rngs = point_rngs(seed, len(pts))
    return run_points(_regression_point,
                      [(n, s, instances, samples, r) for (n, s), r in zip(pts, rngs)])


# --- A* vs OS* ------------------------------------------------------------------------

def _astar_at_rate(target, rate, rng):
    if rate >= 1.0:
        return astar_sample(target, rng=rng).stats
    return astar_sample_multi_lb(target, lb_draws=float(rate), rng=rng).stats


def compare_single(target, rate, rng):
    """One draw from each of A* and both OS* strategies at a matched rate.

    Returns ``{algorithm: (likelihood_evals, bound_evals)}``.
    """
    out = {}
    s = _astar_at_rate(target, rate, rng)
    out["astar"] = (s.likelihood_evals, s.bound_evals)
    for refine in REFINE_STRATEGIES:
        s = osstar_sample(target, refine=refine, refine_rate=rate, rng=rng)[1]
        out["osstar-" + refine] = (s.likelihood_evals, s.bound_evals)
    return out


def _cost_rows(records, rate, extra, dim):
    rows = []
    for alg in records[0]:
        lik = np.array([r[alg][0] for r in records], dtype=float)
        bnd = np.array([r[alg][1] for r in records], dtype=float)
        row = dict(extra)
        row.update({"algorithm": alg, "refine_rate": rate,
                    "mean_likelihood_evals": float(lik.mean()),
                    "mean_bound_evals": float(bnd.mean()),
                    "cost_bound_x2": float(weighted_cost(lik, bnd, 2.0).mean()),
                    f"cost_bound_x{dim + 1}": float(weighted_cost(lik, bnd, dim + 1.0).mean())})
        rows.append(row)
    return rows


def _cauchy_single_point(rate, D, N, instances, samples, rng):
    records = []
    for seed in range(instances):
        target = cauchy_regression_preset(N, D, seed).target
        for _ in range(samples):
            records.append(compare_single(target, rate, rng))
    return _cost_rows(records, rate, {"D": D, "N": N}, D)


def cauchy_single(instances=20, D=2, N=20, rates=REFINE_RATES, samples=1, seed=0):
    """Cost of one exact sample per instance, for each algorithm and rate."""
    rngs = point_rngs(seed, len(rates))
    parts = run_points(_cauchy_single_point,
                       [(r, D, N, instances, samples, g) for r, g in zip(rates, rngs)])
    return [row for part in parts for row in part]


def _regression_compare_point(name, rate, sigma, instances, samples, rng):
    records = []
    for seed in range(instances):
        target = regression_preset(name, sigma, seed).target
        for _ in range(samples):
            records.append(compare_single(target, rate, rng))
    dim = len(REGRESSION_MODELS[name][1])
    return _cost_rows(records, rate, {"model": name, "noise_sigma": sigma}, dim)


def regression_compare(instances=4, samples=5, sigma=0.5, rates=(1.0,), seed=0):
    """A* against both OS* strategies on the regression suite; bounds are
    reset for every sample."""
    pts = [(name, r) for name in REGRESSION_MODELS for r in rates]
    rngs = point_rngs(seed, len(pts))
    parts = run_points(_regression_compare_point,
                       [(n, r, sigma, instances, samples, g) for (n, r), g in zip(pts, rngs)])
    return [row for part in parts for row in part]


def _cauchy_multi_point(rate, D, N, instances, samples, rng):
    records = []
    for seed in range(instances):
        target = cauchy_regression_preset(N, D, seed).target
        rec = {}
        if rate >= 1.0:
            runs = multi_sample_reuse(target, n_samples=samples, rng=rng)
            rec["astar-reuse"] = (sum(r.stats.likelihood_evals for r in runs),
                                  sum(r.stats.bound_evals for r in runs))
        for refine in REFINE_STRATEGIES:
            pieces, lik, bnd = None, 0, 0
            for _ in range(samples):
                _, s, pieces = osstar_sample(target, refine=refine, refine_rate=rate,
                                             rng=rng, pieces=pieces)
                lik += s.likelihood_evals
                bnd += s.bound_evals
            rec["osstar-" + refine] = (lik, bnd)
        records.append(rec)
    return _cost_rows(records, rate, {"D": D, "N": N, "samples": samples}, D)


def cauchy_multi(instances=5, D=2, N=20, samples=200, rates=(1.0, 0.1), seed=0):
    """Total cost of ``samples`` draws per instance with bounds kept across
    draws (A* bound store, OS* piece table)."""
    rngs = point_rngs(seed, len(rates))
    parts = run_points(_cauchy_multi_point,
                       [(r, D, N, instances, samples, g) for r, g in zip(rates, rngs)])
    return [row for part in parts for row in part]


def run_figure(figure, runs=None, seed=0):
    """Dispatch by figure id; ``runs`` scales the per-point repetition count."""
    if figure == "peakiness":
        return peakiness(runs or 1000, seed=seed)
    if figure == "bounding":
        return bounding(runs or 100, seed=seed)
    if figure == "regression":
        return regression(samples=runs or 5, seed=seed)
    if figure == "cauchy-single":
        return cauchy_single(instances=runs or 20, seed=seed)
    if figure == "cauchy-multi":
        return cauchy_multi(instances=runs or 5, seed=seed)
    raise ValueError(f"unknown figure {figure!r}; choose from {FIGURES}")
