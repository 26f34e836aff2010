"""Gumbel and truncated-Gumbel primitives, the finite Gumbel-max trick and
the log-partition estimator built on max-stability."""

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286


def uniform_open(rng):
    """Draw U from the open interval (0, 1)."""
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    return u


def gumbel_from_uniform(location, u):
    return location - math.log(-math.log(u))


def trunc_gumbel_from_uniform(location, bound, u):
    """Invert the CDF of Gumbel(location) truncated to (-inf, bound].

    With E = -log U the inverse is ``location - log(exp(location - bound) + E)``.
    The two branches keep the result accurate when ``location - bound`` is
    very large (deep truncation) or very negative (no effective truncation).
    """
    if not math.isfinite(location):
        raise ValueError(f"location must be finite, got {location}")
    if bound == math.inf:
        return gumbel_from_uniform(location, u)
    if math.isnan(bound) or bound == -math.inf:
        raise ValueError(f"bound must be > -inf, got {bound}")
    e = -math.log(u)
    t = location - bound
    log_e = math.log(e)
    if t > log_e:
        g = bound - math.log1p(e * math.exp(-t))
    else:
        g = location - log_e - math.log1p(math.exp(t - log_e))
    return min(g, bound)


def sample_gumbel(location, rng):
    """Draw from Gumbel(location)."""
    return gumbel_from_uniform(location, uniform_open(rng))


def sample_trunc_gumbel(location, bound, rng):
    """Draw from Gumbel(location) conditioned to be <= bound."""
    return trunc_gumbel_from_uniform(location, bound, uniform_open(rng))


def gumbel_cdf(g, location=0.0):
    return np.exp(-np.exp(-(np.asarray(g, dtype=float) - location)))


def trunc_gumbel_cdf(g, location, bound):
    g = np.minimum(np.asarray(g, dtype=float), bound)
    # exp(-exp(-g+m)) / exp(-exp(-b+m)) evaluated in log space
    return np.exp(-np.exp(-(g - location)) + np.exp(-(bound - location)))


def logsumexp(values):
    values = np.asarray(values, dtype=float)
    m = np.max(values)
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.sum(np.exp(values - m))))


def gumbel_max_trick(log_weights, rng):
    """Perturb each log-weight with independent Gumbel(0) noise.

    Returns ``(argmax_index, max_value)``. The index is distributed
    proportionally to ``exp(log_weights)`` and the max is
    Gumbel(logsumexp(log_weights)), independent of the index.
    """
    log_weights = np.asarray(log_weights, dtype=float)
    if log_weights.ndim != 1 or log_weights.size == 0:
        raise ValueError("log_weights must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(log_weights)):
        raise ValueError("log_weights must be finite")
    u = rng.random(log_weights.size)
    while np.any(u == 0.0):
        zero = u == 0.0
        u[zero] = rng.random(int(zero.sum()))
    perturbed = log_weights - np.log(-np.log(u))
    idx = int(np.argmax(perturbed))
    return idx, float(perturbed[idx])


def log_partition_estimate(samples_of_max):
    """Estimate log Z from i.i.d. Gumbel(log Z) maxima.

    Returns ``(estimate, stderr)`` with stderr = sqrt(pi^2 / (6 N)).
    """
    samples = np.asarray(samples_of_max, dtype=float)
    if samples.size == 0:
        raise ValueError("need at least one sample")
    estimate = float(samples.mean() - EULER_GAMMA)
    stderr = math.sqrt(math.pi ** 2 / 6.0 / samples.size)
    return estimate, stderr
