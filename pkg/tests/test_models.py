import json
import math

import numpy as np
import pytest
from scipy import integrate

from gumbel_astar import expr as ex
from gumbel_astar.models import (PRESETS, REGRESSION_MODELS, cauchy_data, cauchy_regression_preset,
                                 cauchy_target, clutter_data, clutter_preset, clutter_term_exprs,
                                 clutter_target, gaussian_mean_data, gaussian_mean_preset,
                                 gaussian_mean_target, make_preset, peakiness_preset,
                                 peakiness_target, regression_preset)
from gumbel_astar.regions import Region


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_every_preset_builds_and_is_reproducible(name):
    a, b = make_preset(name), make_preset(name)
    for key in a.data:
        assert np.array_equal(a.data[key], b.data[key])
    desc = a.to_descriptor()
    json.dumps(desc)
    assert desc["name"] == name
    x = a.target.proposal.sample(a.target.root, np.random.default_rng(0))
    assert math.isfinite(a.target.o(x))
    assert a.target.bounder(a.target.root) >= a.target.o(x)


def test_make_preset_errors():
    with pytest.raises(ValueError):
        make_preset("nope")
    with pytest.raises(TypeError):
        make_preset("peakiness", D=3)


def test_data_generators_depend_only_on_seed():
    assert np.array_equal(clutter_data(3, 20, 4), clutter_data(3, 20, 4))
    assert not np.array_equal(clutter_data(3, 20, 4), clutter_data(3, 20, 5))
    assert np.array_equal(gaussian_mean_data(50, 2), gaussian_mean_data(50, 2))
    X1, y1 = cauchy_data(10, 2, 1)
    X2, y2 = cauchy_data(10, 2, 1)
    assert np.array_equal(X1, X2) and np.array_equal(y1, y2)
    p1, p2 = regression_preset("rational", 0.5, 3), regression_preset("rational", 0.5, 3)
    assert np.array_equal(p1.data["y"], p2.data["y"])


def test_peakiness():
    t = peakiness_target(3.0)
    assert t.unimodal
    assert t.o(np.array([1.0])) == pytest.approx(-3.0 * math.log(2.0))
    assert t.bounder(Region((1.0,), (2.0,))) >= t.o(np.array([1.0]))
    assert peakiness_preset(1.5).params == {"a": 1.5}
    with pytest.raises(ValueError):
        peakiness_target(-1.0)


def test_clutter_data_layout():
    x = clutter_data(2, 20, 0)
    assert x.shape == (20, 2)
    assert np.all((x[:10] >= -5) & (x[:10] <= -3))
    assert np.all((x[10:] >= 2) & (x[10:] <= 4))


def test_clutter_likelihood_matches_mixture_formula():
    data = clutter_data(2, 6, 1)
    t = clutter_target(2, 0.3, data, inlier_variance=0.5)
    theta = np.array([0.4, -1.0])
    ref = 0.0
    for x in data:
        sq = float(np.sum((x - theta) ** 2))
        inl = 0.7 * math.exp(-0.5 * sq / 0.5) / (2 * math.pi * 0.5)
        ref += math.log(inl + 0.3 / 81.0)
    assert t.o(theta) == pytest.approx(ref, rel=1e-12)
    exprs = clutter_term_exprs(2, 0.3, data, 0.5)
    total = sum(ex.evaluate(e, {"x0": theta[0], "x1": theta[1]}) for e in exprs)
    assert total == pytest.approx(ref, rel=1e-12)
    with pytest.raises(ValueError):
        clutter_target(3, data=data)


def test_clutter_outlier_density_integrates_to_one_over_box():
    # w = 1: only the outlier density, constant 1/9^D on the box
    t = clutter_target(1, 1.0, np.array([[0.0]]))
    val = integrate.quad(lambda v: math.exp(t.o(np.array([v]))), -5.0, 4.0)[0]
    assert val == pytest.approx(1.0)


def test_clutter_preset_params():
    p = clutter_preset(2, n_points=10, data_seed=3)
    assert p.params["D"] == 2 and p.data["x"].shape == (10, 2)
    assert p.target.dim == 2


def test_gaussian_mean_model():
    y = gaussian_mean_data(5, seed=1)
    t = gaussian_mean_target(y, "linear")
    theta = np.array([0.3])
    ref = sum(-0.5 * (0.3 - v) ** 2 - 0.5 * math.log(2 * math.pi) for v in y)
    assert t.o(theta) == pytest.approx(ref)
    assert gaussian_mean_target(y, "linear").bounder(Region((-math.inf,), (0.0,))) < math.inf
    with pytest.raises(ValueError):
        gaussian_mean_target(y, "cubic")
    with pytest.raises(ValueError):
        gaussian_mean_target(np.array([]), "constant")
    assert gaussian_mean_preset(8).data["y"].shape == (8,)


@pytest.mark.parametrize("name", sorted(REGRESSION_MODELS))
def test_regression_presets(name):
    p = regression_preset(name, noise_sigma=0.5, seed=2)
    text, box = REGRESSION_MODELS[name]
    assert p.expression == text and list(p.prior_box) == list(box)
    theta = p.data["theta_true"]
    assert all(lo <= v <= hi for v, (lo, hi) in zip(theta, box.values()))
    # o is the Gaussian log-likelihood of the residuals
    f = ex.parse(text)
    env = dict(zip(box, theta))
    env["x"] = p.data["x"]
    r = p.data["y"] - ex.evaluate(f, env)
    n = r.size
    ref = -0.5 * float(r @ r) / 0.25 - n * math.log(0.5) - 0.5 * n * math.log(2 * math.pi)
    assert p.target.o(theta) == pytest.approx(ref)
    assert p.target.bounder(p.target.root) >= p.target.o(theta)
    assert p.target.proposal.log_mass(p.target.root) == pytest.approx(0.0, abs=1e-12)


def test_polynomial_inputs_stay_in_range():
    p = regression_preset("polynomial", 1.0, 0)
    assert np.all((p.data["x"] >= 0.0) & (p.data["x"] <= 2.0))


def test_cauchy_model():
    X, y = cauchy_data(8, 2, 0)
    assert np.array_equal(X[:4], X[4:]) and np.array_equal(y[:4], -y[4:])
    t = cauchy_target(X, y)
    w = np.array([0.5, -1.0])
    d = X @ w - y
    ref = -0.5 * w @ w / 10.0 - math.log(2 * math.pi * 10.0) - np.log1p(d * d).sum()
    assert t.o(w) == pytest.approx(ref)
    # the data make the likelihood symmetric under w -> -w
    assert t.o(w) == pytest.approx(t.o(-w))
    with pytest.raises(ValueError):
        cauchy_data(7, 1)
    p = cauchy_regression_preset(N=10, D=3, seed=4, coupled=False)
    assert p.target.dim == 3 and p.params["coupled"] is False
