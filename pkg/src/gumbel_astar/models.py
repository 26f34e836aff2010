"""Concrete inference problems packaged as target decompositions.

Every preset is reproducible from its parameters and a data seed, and can
serialize itself (data included) to a JSON-ready descriptor.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .bounds import TargetDecomposition, cauchy_regression_bound, pad
from .proposals import Exponential1D, IsotropicGaussian, UniformBox
from .regions import Region

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass
class ModelPreset:
    name: str
    target: TargetDecomposition
    params: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    description: str = ""
    expression: str = ""
    prior_box: dict = field(default_factory=dict)

    @property
    def root(self):
        return self.target.root

    def to_descriptor(self):
        return {
            "name": self.name,
            "description": self.description,
            "params": dict(self.params),
            "proposal": self.target.proposal.describe(),
            "root": self.target.root.to_text(),
            "expression": self.expression,
            "prior_box": {k: list(v) for k, v in self.prior_box.items()},
            "data": {k: np.asarray(v).tolist() for k, v in self.data.items()},
        }


# --- peakiness: p(x) ~ exp(-x) / (1 + x)^a on [0, inf) ---------------------

def peakiness_target(a):
    """Exponential proposal with ``o(x) = -a log(1 + x)``; sup at the left edge."""
    if not a >= 0:
        raise ValueError("a must be non-negative")
    a = float(a)

    def o(x):
        return -a * math.log1p(x[0])

    def bounder(region):
        return pad(-a * math.log1p(max(region.lower[0], 0.0)))

    return TargetDecomposition(Exponential1D(), o, bounder, unimodal=True,
                               name=f"peakiness(a={a:g})", info={"a": a})


def peakiness_preset(a=2.0):
    return ModelPreset("peakiness", peakiness_target(a), {"a": float(a)},
                       description="p(x) ~ exp(-x) / (1 + x)^a, exponential proposal")


# --- clutter ----------------------------------------------------------------

CLUTTER_PRIOR_VARIANCE = 10.0
# inlier standard deviation 0.4; see the notes on calibration in the README
CLUTTER_INLIER_VARIANCE = 0.16
CLUTTER_BOX = (-5.0, 4.0)


def clutter_data(D, n_points=20, seed=0):
    """Half the points uniform in [-5,-3]^D and half in [2,4]^D."""
    rng = np.random.default_rng(seed)
    half = n_points // 2
    a = rng.uniform(-5.0, -3.0, size=(half, D))
    b = rng.uniform(2.0, 4.0, size=(n_points - half, D))
    return np.vstack([a, b])


def clutter_target(D, w_outlier=0.5, data=None, inlier_variance=CLUTTER_INLIER_VARIANCE):
    """Mean of an isotropic Gaussian with uniform outliers.

    Prior N(0, 10 I) is the proposal. Each datum contributes
    ``log((1 - w) N(x_n; theta, s2 I) + w / 9^D)``, the outlier density being
    uniform on the data-generation box [-5, 4]^D.
    """
    data = clutter_data(D) if data is None else np.atleast_2d(np.asarray(data, dtype=float))
    if data.shape[1] != D or data.shape[0] == 0:
        raise ValueError("data must be a non-empty (n, D) array")
    w = float(w_outlier)
    s2 = float(inlier_variance)
    log_in = math.log1p(-w) - 0.5 * D * math.log(2.0 * math.pi * s2) if w < 1.0 else -math.inf
    log_out = math.log(w) - D * math.log(CLUTTER_BOX[1] - CLUTTER_BOX[0]) if w > 0.0 else -math.inf

    def per_point(sq):
        return np.logaddexp(log_in - 0.5 * sq / s2, log_out)

    def o(theta):
        diff = data - theta
        return float(per_point(np.einsum("ij,ij->i", diff, diff)).sum())

    def bounder(region):
        lo = np.asarray(region.lower)
        hi = np.asarray(region.upper)
        gap = np.maximum(np.maximum(lo - data, data - hi), 0.0)
        return pad(float(per_point(np.einsum("ij,ij->i", gap, gap)).sum()))

    proposal = IsotropicGaussian(np.zeros(D), CLUTTER_PRIOR_VARIANCE)
    return TargetDecomposition(proposal, o, bounder, name=f"clutter(D={D})",
                               info={"D": D, "w_outlier": w, "inlier_variance": s2, "log_inlier": log_in,
                                     "log_outlier": log_out})


def clutter_term_exprs(D, w_outlier, data, inlier_variance=CLUTTER_INLIER_VARIANCE):
    """Per-datum log-likelihood expressions, for generic interval bounding."""
    w = float(w_outlier)
    s2 = float(inlier_variance)
    names = ex.default_names(D)
    out = []
    for x in np.atleast_2d(data):
        sq = ex.Const(0.0)
        for d in range(D):
            sq = sq + (ex.Var(names[d]) - float(x[d])) ** 2
        inlier = (1.0 - w) * (2.0 * math.pi * s2) ** (-0.5 * D) * ex.exp(-0.5 / s2 * sq)
        out.append(ex.log(inlier + w / (CLUTTER_BOX[1] - CLUTTER_BOX[0]) ** D))
    return out


def clutter_preset(D=1, w_outlier=0.5, n_points=20, data_seed=0,
                   inlier_variance=CLUTTER_INLIER_VARIANCE):
    data = clutter_data(D, n_points, data_seed)
    return ModelPreset("clutter", clutter_target(D, w_outlier, data, inlier_variance),
                       {"D": D, "w_outlier": w_outlier, "n_points": n_points, "data_seed": data_seed,
                        "inlier_variance": inlier_variance},
                       {"x": data}, "Gaussian mean with uniform outliers, N(0,10I) prior")


# --- Gaussian mean (bounding-strategy study) -------------------------------

BOUND_KINDS = ("constant", "linear", "quadratic")


def gaussian_mean_data(N, seed=0):
    rng = np.random.default_rng(seed)
    theta = rng.standard_normal()
    return theta + rng.standard_normal(N)


def gaussian_mean_target(data, bound_kind="quadratic"):
    """Standard-normal prior as proposal, unit-variance Gaussian likelihood in ``o``."""
    if bound_kind not in BOUND_KINDS:
        raise ValueError(f"bound_kind must be one of {BOUND_KINDS}")
    y = np.asarray(data, dtype=float).ravel()
    if y.size == 0:
        raise ValueError("need at least one observation")
    n = y.size
    const = -0.5 * _LOG_2PI
    ybar = float(y.mean())

    def o(theta):
        r = theta[0] - y
        return float(-0.5 * np.dot(r, r) + n * const)

    def constant(region):
        t = np.clip(y, region.lower[0], region.upper[0])
        r = t - y
        return float(-0.5 * np.dot(r, r) + n * const)

    def linear(region):
        lo, hi = region.lower[0], region.upper[0]
        t = np.clip(y, lo, hi)
        grad = y - t
        slope = float(grad.sum())
        base = float(-0.5 * np.dot(grad, grad) + n * const)
        # sum of tangents at each term's maximizer, maximized at a corner
        if slope > 0.0:
            edge = hi
        elif slope < 0.0:
            edge = lo
        else:
            return base
        if not math.isfinite(edge):
            return math.inf
        return base + float(np.dot(grad, edge - t))

    def quadratic(region):
        t = min(max(ybar, region.lower[0]), region.upper[0])
        r = t - y
        return float(-0.5 * np.dot(r, r) + n * const)

    chosen = {"constant": constant, "linear": linear, "quadratic": quadratic}[bound_kind]
    return TargetDecomposition(IsotropicGaussian([0.0], 1.0), o, lambda r: pad(chosen(r)),
                               name=f"gaussian-mean(N={n},{bound_kind})",
                               info={"bound_kind": bound_kind, "N": n})


def gaussian_mean_preset(N=16, bound_kind="quadratic", data_seed=0):
    y = gaussian_mean_data(N, data_seed)
    return ModelPreset("gaussian-mean", gaussian_mean_target(y, bound_kind),
                       {"N": N, "bound_kind": bound_kind, "data_seed": data_seed}, {"y": y},
                       "mean of a unit-variance Gaussian, N(0,1) prior")


# --- nonlinear regression with interval bounds -----------------------------

REGRESSION_MODELS = {
    "exp-abs": (
        "(add (mul a (exp (neg (mul b (pow (abs (sub x c)) d))))) e)",
        {"a": (0.1, 5.0), "b": (0.5, 5.0), "c": (-5.0, 5.0), "d": (0.1, 5.0), "e": (0.1, 5.0)},
    ),
    "double-sin": (
        "(add (mul a (sin (add (mul b x) c))) (mul d (sin (add (mul e x) f))))",
        {k: (-5.0, 5.0) for k in "abcdef"},
    ),
    "rational": (
        "(div (mul a (pow (sub x b) 2)) (add (pow (sub x b) 2) (pow c 2)))",
        {k: (-5.0, 5.0) for k in "abc"},
    ),
    "projectile": (
        "(div (mul (mul x (cos a)) (add (mul x (sin a)) "
        "(sqrt (add (mul (pow x 2) (pow (sin a) 2)) (mul 2 (mul b c)))))) b)",
        {"a": (0.01, math.pi - 0.01), "b": (0.1, 5.0), "c": (0.0, 5.0)},
    ),
    "polynomial": (
        "(mul (mul (mul a x) (sub x b)) (pow (sub c x) d))",
        {"a": (0.01, 1.0), "b": (0.5, 1.0), "c": (2.0, 3.0), "d": (0.1, 1.0)},
    ),
}

# inputs are uniform on this range; the polynomial model needs x < c
REGRESSION_X_RANGE = {"polynomial": (0.0, 2.0)}
DEFAULT_X_RANGE = (-3.0, 3.0)
REGRESSION_N = 3


def regression_preset(name, noise_sigma=1.0, seed=0, n_points=REGRESSION_N):
    """Nonlinear regression ``y = f(x; theta) + N(0, noise_sigma^2)`` with a
    uniform prior box, ``n_points`` seeded training points, and bounds from
    interval evaluation of each datum's log-likelihood."""
    if name not in REGRESSION_MODELS:
        raise ValueError(f"unknown regression model {name!r}")
    text, box = REGRESSION_MODELS[name]
    params = list(box)
    f = ex.parse(text)
    lower = [box[p][0] for p in params]
    upper = [box[p][1] for p in params]
    sigma = float(noise_sigma)

    rng = np.random.default_rng(seed)
    theta_true = rng.uniform(lower, upper)
    xr = REGRESSION_X_RANGE.get(name, DEFAULT_X_RANGE)
    xs = rng.uniform(xr[0], xr[1], size=n_points)
    env = dict(zip(params, theta_true))
    env["x"] = xs
    ys = np.asarray(ex.evaluate(f, env), dtype=float) + sigma * rng.standard_normal(n_points)

    log_norm = -math.log(sigma) - 0.5 * _LOG_2PI
    term = -(ex.Var("y") - f) ** 2 / (2.0 * sigma * sigma) + log_norm
    compiled = [ex.compile_interval(ex.substitute(term, {"x": float(xv), "y": float(yv)}), params)
                for xv, yv in zip(xs, ys)]

    def o(theta):
        env = dict(zip(params, (float(t) for t in theta)))
        env["x"] = xs
        r = ys - np.asarray(ex.evaluate(f, env))
        return float(-0.5 * np.dot(r, r) / (sigma * sigma) + n_points * log_norm)

    def bounder(region):
        return pad(sum(c(region).hi for c in compiled))

    vol = float(np.sum(np.log(np.subtract(upper, lower))))
    proposal = UniformBox(lower, upper, log_density=-vol)
    target = TargetDecomposition(proposal, o, bounder, name=f"{name}(sigma={sigma:g})",
                                 info={"params": params, "theta_true": theta_true.tolist()})
    return ModelPreset(name, target,
                       {"noise_sigma": sigma, "data_seed": seed, "n_points": n_points},
                       {"x": xs, "y": ys, "theta_true": theta_true},
                       f"nonlinear regression, f = {text}", text,
                       {p: box[p] for p in params})


# --- robust (Cauchy) regression --------------------------------------------

CAUCHY_PRIOR_VARIANCE = 10.0
CAUCHY_BOX = (-10.0, 10.0)


def cauchy_data(N, D, seed=0):
    """Symmetric bimodal dataset: X = [X'; X'], y = [y'; -y'] with w* = 2."""
    if N % 2 or N < 2:
        raise ValueError("N must be a positive even number")
    rng = np.random.default_rng(seed)
    w_star = np.full(D, 2.0)
    Xh = rng.standard_normal((N // 2, D))
    yh = Xh @ w_star + 0.1 * rng.standard_normal(N // 2)
    return np.vstack([Xh, Xh]), np.concatenate([yh, -yh])


def cauchy_target(X, y, prior_variance=CAUCHY_PRIOR_VARIANCE, coupled=True):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    D = X.shape[1]
    prior_const = -0.5 * D * math.log(2.0 * math.pi * prior_variance)

    def o(w):
        d = X @ w - y
        return float(-0.5 * np.dot(w, w) / prior_variance + prior_const - np.log1p(d * d).sum())

    def bounder(region):
        return cauchy_regression_bound(X, y, region, prior_variance, coupled=coupled)

    proposal = UniformBox([CAUCHY_BOX[0]] * D, [CAUCHY_BOX[1]] * D,
                          log_density=-D * math.log(CAUCHY_BOX[1] - CAUCHY_BOX[0]))
    return TargetDecomposition(proposal, o, bounder, name=f"cauchy(N={len(y)},D={D})",
                               info={"D": D, "N": len(y)})


def cauchy_regression_preset(N=20, D=1, seed=0, coupled=True):
    X, y = cauchy_data(N, D, seed)
    return ModelPreset("cauchy", cauchy_target(X, y, coupled=coupled),
                       {"N": N, "D": D, "data_seed": seed, "coupled": coupled},
                       {"X": X, "y": y},
                       "robust linear regression, Cauchy noise, N(0,10I) prior, uniform proposal")


# --- registry ---------------------------------------------------------------

def _regression_builder(name):
    def build(noise_sigma=1.0, data_seed=0, n_points=REGRESSION_N):
        return regression_preset(name, noise_sigma, data_seed, n_points)
    return build


PRESETS = {
    "peakiness": peakiness_preset,
    "clutter": clutter_preset,
    "gaussian-mean": gaussian_mean_preset,
    "cauchy": lambda N=20, D=1, data_seed=0, coupled=True: cauchy_regression_preset(N, D, data_seed, coupled),
}
PRESETS.update({name: _regression_builder(name) for name in REGRESSION_MODELS})


def make_preset(name, **overrides):
    """Build a registered preset; unknown override keys raise ``TypeError``."""
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return builder(**overrides)


__all__ = [
    "ModelPreset", "PRESETS", "make_preset", "peakiness_target", "clutter_target",
    "gaussian_mean_target", "regression_preset", "cauchy_regression_preset",
    "peakiness_preset", "clutter_preset", "gaussian_mean_preset", "clutter_data",
    "gaussian_mean_data", "cauchy_data", "cauchy_target", "REGRESSION_MODELS",
]
