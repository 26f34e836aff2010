"""Tractable proposal measures with region masses and restricted sampling.

A proposal is a measure nu(B) = int_B exp(i(x)) dx whose log-mass on any box
is available in closed form and which can be sampled exactly after
restriction to a box.
"""

import math

import numpy as np
from scipy.special import log_ndtr, ndtr, ndtri, ndtri_exp

from .gumbel import uniform_open
from .regions import Region

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def log1mexp(x):
    """log(1 - exp(x)) for x <= 0, accurate near both ends."""
    if x > -0.6931471805599453:
        return math.log(-math.expm1(x))
    return math.log1p(-math.exp(x))


class Proposal:
    """Base class. Subclasses implement the per-region primitives."""

    dim = 1

    def support(self):
        return Region.real_line(self.dim)

    def log_density(self, x):
        raise NotImplementedError

    def log_mass(self, region):
        raise NotImplementedError

    def sample(self, region, rng):
        raise NotImplementedError

    def _check(self, region):
        if region.dim != self.dim:
            raise ValueError(f"region has dimension {region.dim}, proposal has {self.dim}")

    def describe(self):
        raise NotImplementedError


class UniformBox(Proposal):
    """Constant density ``exp(log_density)`` on a finite box, zero outside."""

    def __init__(self, lower, upper, log_density=0.0):
        self.box = Region(tuple(lower), tuple(upper))
        if not self.box.is_finite:
            raise ValueError("UniformBox needs finite edges")
        self.dim = self.box.dim
        self.log_height = float(log_density)

    def support(self):
        return self.box

    def log_density(self, x):
        x = np.atleast_1d(x)
        if self.box.contains(x):
            return self.log_height
        return -math.inf

    def _clip(self, region):
        lo = tuple(max(a, b) for a, b in zip(region.lower, self.box.lower))
        hi = tuple(min(a, b) for a, b in zip(region.upper, self.box.upper))
        return lo, hi

    def log_mass(self, region):
        self._check(region)
        lo, hi = self._clip(region)
        total = self.log_height
        for a, b in zip(lo, hi):
            if not b > a:
                return -math.inf
            total += math.log(b - a)
        return total

    def sample(self, region, rng):
        self._check(region)
        lo, hi = self._clip(region)
        if not all(b > a for a, b in zip(lo, hi)):
            raise ValueError(f"region {region} has zero mass under the proposal")
        return np.array([a + (b - a) * uniform_open(rng) for a, b in zip(lo, hi)])

    def describe(self):
        return {"kind": "uniform-box", "lower": list(self.box.lower),
                "upper": list(self.box.upper), "log_density": self.log_height}


class Exponential1D(Proposal):
    """Density ``rate * exp(-rate x)`` on ``[0, inf)``."""

    dim = 1

    def __init__(self, rate=1.0):
        if not rate > 0:
            raise ValueError("rate must be positive")
        self.rate = float(rate)

    def support(self):
        return Region((0.0,), (math.inf,))

    def log_density(self, x):
        x = float(np.atleast_1d(x)[0])
        if x < 0:
            return -math.inf
        return math.log(self.rate) - self.rate * x

    def log_mass(self, region):
        self._check(region)
        a = max(region.lower[0], 0.0)
        b = region.upper[0]
        if not b > a:
            return -math.inf
        return -self.rate * a + log1mexp(-self.rate * (b - a))

    def sample(self, region, rng):
        self._check(region)
        a = max(region.lower[0], 0.0)
        b = region.upper[0]
        if not b > a:
            raise ValueError(f"region {region} has zero mass under the proposal")
        u = uniform_open(rng)
        x = a - math.log1p(u * math.expm1(-self.rate * (b - a))) / self.rate
        return np.array([min(max(x, a), b)])

    def describe(self):
        return {"kind": "exponential", "rate": self.rate}


def log_normal_mass(a, b):
    """log(Phi(b) - Phi(a)) for a standard normal, a < b, stable in the tails."""
    if b - a < math.inf and (b - a) * (max(abs(a), abs(b)) + 1.0) < 0.5:
        # narrow interval: 8-point Gauss-Legendre around the midpoint
        c = 0.5 * (a + b)
        h = 0.5 * (b - a)
        t = c + h * _GL_NODES
        s = float(np.dot(_GL_WEIGHTS, np.exp(-0.5 * (t * t - c * c))))
        return -0.5 * c * c - _LOG_SQRT_2PI + math.log(s * h)
    if a >= 0.0:
        la = float(log_ndtr(-a))
        lb = float(log_ndtr(-b))
        return la + log1mexp(lb - la)
    if b <= 0.0:
        la = float(log_ndtr(a))
        lb = float(log_ndtr(b))
        return lb + log1mexp(la - lb)
    return math.log(0.5 * (math.erf(b / math.sqrt(2.0)) - math.erf(a / math.sqrt(2.0))))


def sample_truncated_normal(a, b, rng):
    """Exact draw from the standard normal restricted to [a, b]."""
    if b - a < math.inf:
        lo_sq = 0.0 if a < 0.0 < b else min(a * a, b * b)
        hi_sq = max(a * a, b * b)
        if hi_sq - lo_sq < 2.0:
            # density varies by less than a factor e: uniform rejection
            while True:
                x = a + (b - a) * uniform_open(rng)
                if math.log(uniform_open(rng)) <= -0.5 * (x * x - lo_sq):
                    return x
    if b <= 0.0:
        return -sample_truncated_normal(-b, -a, rng)
    u = uniform_open(rng)
    if a >= 0.0:
        la = float(log_ndtr(-a))
        lb = float(log_ndtr(-b))
        log_q = la + math.log1p(u * math.expm1(lb - la))
        x = -float(ndtri_exp(log_q))
    else:
        pa = float(ndtr(a))
        pb = float(ndtr(b))
        x = float(ndtri(pa + u * (pb - pa)))
    return min(max(x, a), b)


class IsotropicGaussian(Proposal):
    """Normal density with the given mean and scalar variance on R^D."""

    def __init__(self, mean, variance=1.0):
        self.mean = np.atleast_1d(np.asarray(mean, dtype=float))
        self.dim = self.mean.size
        if not variance > 0:
            raise ValueError("variance must be positive")
        self.variance = float(variance)
        self.scale = math.sqrt(self.variance)
        self._mean = tuple(float(m) for m in self.mean)

    def log_density(self, x):
        z = (np.atleast_1d(x) - self.mean) / self.scale
        return float(-0.5 * np.dot(z, z) - self.dim * (_LOG_SQRT_2PI + math.log(self.scale)))

    def log_mass(self, region):
        self._check(region)
        total = 0.0
        for m, lo, hi in zip(self._mean, region.lower, region.upper):
            total += log_normal_mass((lo - m) / self.scale, (hi - m) / self.scale)
        return total

    def sample(self, region, rng):
        self._check(region)
        out = np.empty(self.dim)
        for d, (m, lo, hi) in enumerate(zip(self._mean, region.lower, region.upper)):
            z = sample_truncated_normal((lo - m) / self.scale, (hi - m) / self.scale, rng)
            out[d] = min(max(m + self.scale * z, lo), hi)
        return out

    def describe(self):
        return {"kind": "gaussian", "mean": self.mean.tolist(), "variance": self.variance}


def log_mass(proposal, region):
    return proposal.log_mass(region)


def sample_restricted(proposal, region, rng):
    if proposal.log_mass(region) == -math.inf:
        raise ValueError(f"region {region} has zero mass under the proposal")
    return proposal.sample(region, rng)


def proposal_from_descriptor(desc):
    kind = desc["kind"]
    if kind == "uniform-box":
        return UniformBox(desc["lower"], desc["upper"], desc.get("log_density", 0.0))
    if kind == "exponential":
        return Exponential1D(desc.get("rate", 1.0))
    if kind == "gaussian":
        return IsotropicGaussian(desc["mean"], desc.get("variance", 1.0))
    raise ValueError(f"unknown proposal kind {kind!r}")
