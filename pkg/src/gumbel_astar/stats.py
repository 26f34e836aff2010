"""Goodness-of-fit tests with asymptotic critical values, and quadrature
oracles for one-dimensional targets."""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special, stats as sps

# asymptotic Kolmogorov critical value at alpha = 0.01
KS_CRITICAL_001 = 1.628


@dataclass
class CheckResult:
    name: str
    statistic: float
    threshold: float
    passed: bool
    detail: str = ""

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{tag}  {self.name}: statistic={self.statistic:.6g} threshold={self.threshold:.6g}{extra}"


def ks_statistic(samples, cdf):
    """Sup distance between the empirical CDF and ``cdf`` (vectorized callable)."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_test(samples, cdf, name="ks", alpha_crit=KS_CRITICAL_001):
    n = len(samples)
    d = ks_statistic(samples, cdf)
    thr = alpha_crit / math.sqrt(n)
    return CheckResult(name, d, thr, d <= thr, f"N={n}")


def ks_2samp_statistic(a, b):
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    allv = np.concatenate([a, b])
    fa = np.searchsorted(a, allv, side="right") / a.size
    fb = np.searchsorted(b, allv, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_2samp_test(a, b, name="ks-2samp", alpha_crit=KS_CRITICAL_001):
    n, m = len(a), len(b)
    d = ks_2samp_statistic(a, b)
    thr = alpha_crit * math.sqrt((n + m) / (n * m))
    return CheckResult(name, d, thr, d <= thr, f"N={n},M={m}")


def _merge_sparse(observed, expected, min_expected):
    """Pool adjacent bins until every expected count reaches ``min_expected``."""
    obs_out, exp_out = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc > 0 or o_acc > 0:
        if exp_out:
            obs_out[-1] += o_acc
            exp_out[-1] += e_acc
        else:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
    return np.array(obs_out), np.array(exp_out)


def chi_square_test(observed, probs, name="chi-square", alpha=0.01, min_expected=5.0, ddof=0):
    """Goodness of fit of bin counts to probabilities (sparse bins pooled)."""
    observed = np.asarray(observed, dtype=float)
    probs = np.asarray(probs, dtype=float)
    n = observed.sum()
    obs, exp = _merge_sparse(observed, n * probs / probs.sum(), min_expected)
    stat = float(np.sum((obs - exp) ** 2 / exp))
    dof = max(len(obs) - 1 - ddof, 1)
    thr = float(sps.chi2.ppf(1.0 - alpha, dof))
    return CheckResult(name, stat, thr, stat <= thr, f"bins={len(obs)}")


def chi_square_2samp_test(a_counts, b_counts, name="chi-square-2samp", alpha=0.01, min_expected=5.0):
    """Homogeneity test for two count vectors over the same bins."""
    a = np.asarray(a_counts, dtype=float)
    b = np.asarray(b_counts, dtype=float)
    na, nb = a.sum(), b.sum()
    pooled = a + b
    # pool bins by combined expected count
    keep_a, keep_b, acc_a, acc_b = [], [], 0.0, 0.0
    for x, y in zip(a, b):
        acc_a += x
        acc_b += y
        if (acc_a + acc_b) * min(na, nb) / (na + nb) >= min_expected:
            keep_a.append(acc_a)
            keep_b.append(acc_b)
            acc_a = acc_b = 0.0
    if keep_a:
        keep_a[-1] += acc_a
        keep_b[-1] += acc_b
    a, b = np.array(keep_a), np.array(keep_b)
    pooled = a + b
    ea = pooled * na / (na + nb)
    eb = pooled * nb / (na + nb)
    stat = float(np.sum((a - ea) ** 2 / ea) + np.sum((b - eb) ** 2 / eb))
    dof = max(len(a) - 1, 1)
    thr = float(sps.chi2.ppf(1.0 - alpha, dof))
    return CheckResult(name, stat, thr, stat <= thr, f"bins={len(a)}")


def geometric_chi_square(counts, rho, name="geometric", alpha=0.01):
    """Chi-square of iteration counts (support 1, 2, ...) against Geometric(rho)."""
    counts = np.asarray(counts, dtype=int)
    kmax = int(counts.max())
    observed = np.bincount(counts, minlength=kmax + 2)[1:].astype(float)
    k = np.arange(1, kmax + 2)
    probs = rho * (1.0 - rho) ** (k - 1)
    probs[-1] = (1.0 - rho) ** (kmax)  # tail mass beyond kmax
    return chi_square_test(observed, probs, name, alpha)


def gumbel_cdf_vec(location):
    return lambda g: np.exp(-np.exp(-(np.asarray(g) - location)))


# --- quadrature oracle ------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


class QuadratureOracle:
    """Normalizer and CDF of a 1-D unnormalized density ``exp(log_density(x))``.

    The log-density is evaluated pointwise with plain Python floats, so the
    oracle shares nothing with the samplers beyond the model formula.
    ``breakpoints`` mark kinks or peaks to help adaptive quadrature.
    """

    def __init__(self, log_density, lower, upper, breakpoints=(), scale_points=None):
        self.log_density = log_density
        self.lower = float(lower)
        self.upper = float(upper)
        self.breakpoints = sorted(float(b) for b in breakpoints if self.lower < b < self.upper)
        probe = list(self.breakpoints) + list(scale_points or [])
        if not probe:
            lo = self.lower if math.isfinite(self.lower) else -10.0
            hi = self.upper if math.isfinite(self.upper) else 10.0
            probe = list(np.linspace(lo, hi, 201))
        vals = [self._safe(x) for x in probe]
        self.shift = max(v for v in vals if math.isfinite(v))
        self._log_z = None

    def _safe(self, x):
        try:
            return float(self.log_density(float(x)))
        except (ValueError, OverflowError):
            return -math.inf

    def _f(self, x):
        return math.exp(self._safe(x) - self.shift)

    def _integrate(self, a, b):
        if not a < b:
            return 0.0
        pts = [p for p in self.breakpoints if a < p < b]
        segs = [a] + pts + [b]
        total = 0.0
        for lo, hi in zip(segs[:-1], segs[1:]):
            val, _ = integrate.quad(self._f, lo, hi, limit=400, epsabs=0.0, epsrel=1e-11)
            total += val
        return total

    @property
    def log_z(self):
        if self._log_z is None:
            self._log_z = math.log(self._integrate(self.lower, self.upper)) + self.shift
        return self._log_z

    def cdf_at_sorted(self, xs):
        """CDF at sorted points: adaptive tails plus Gauss-Legendre on the gaps."""
        xs = np.asarray(xs, dtype=float)
        z = math.exp(self.log_z - self.shift)
        left = self._integrate(self.lower, xs[0])
        a, b = xs[:-1], xs[1:]
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        fv = np.vectorize(self._f, otypes=[float])(nodes)
        gaps = half * (fv @ _GL_WEIGHTS)
        # gaps straddling a breakpoint are integrated adaptively
        for p in self.breakpoints:
            j = np.searchsorted(xs, p) - 1
            if 0 <= j < len(gaps):
                gaps[j] = self._integrate(xs[j], xs[j + 1])
        cum = left + np.concatenate([[0.0], np.cumsum(gaps)])
        return np.clip(cum / z, 0.0, 1.0)

    def cdf(self, x):
        return self._integrate(self.lower, float(x)) / math.exp(self.log_z - self.shift)

    def ks_test(self, samples, name="ks-vs-quadrature"):
        x = np.sort(np.asarray(samples, dtype=float).ravel())
        n = x.size
        f = self.cdf_at_sorted(x)
        i = np.arange(1, n + 1)
        d = float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
        thr = KS_CRITICAL_001 / math.sqrt(n)
        return CheckResult(name, d, thr, d <= thr, f"N={n}")


def oracle_for_target(target, breakpoints=(), scale_points=None):
    """Quadrature oracle for a 1-D target decomposition over its root."""
    if target.dim != 1:
        raise ValueError("quadrature oracle needs a 1-D target")
    prop = target.proposal

    def logp(x):
        z = np.array([x])
        return prop.log_density(z) + target.o(z)

    root = target.root
    return QuadratureOracle(logp, root.lower[0], root.upper[0], breakpoints, scale_points)


def binomial_interval(p, n, z=3.0):
    se = math.sqrt(p * (1.0 - p) / n)
    return p - z * se, p + z * se


def normal_quantile(q):
    return float(special.ndtri(q))
