import io
import math

import numpy as np
import pytest
from scipy import stats as sps

from gumbel_astar.astar import SearchAborted, SearchStats, astar_sample
from gumbel_astar.bounds import TargetDecomposition
from gumbel_astar.models import cauchy_regression_preset, peakiness_target
from gumbel_astar.proposals import UniformBox
from gumbel_astar.rejection import (REFINE_STRATEGIES, PieceTable, osstar_sample,
                                    rejection_sample, slice_sample)
from gumbel_astar.stats import oracle_for_target

GRID = list(np.linspace(-10.0, 10.0, 401))


@pytest.fixture(scope="module")
def peak_oracle():
    return oracle_for_target(peakiness_target(2.0), [0.0], [0.0, 1.0])


@pytest.fixture(scope="module")
def cauchy1():
    t = cauchy_regression_preset(20, 1, 0).target
    return t, oracle_for_target(t, [-2.0, 0.0, 2.0], GRID)


def test_flat_target_accepts_first_draw(rng):
    t = TargetDecomposition(UniformBox([0.0], [1.0]), lambda x: 0.0, lambda r: 0.0)
    _, s = rejection_sample(t, M_global=0.0, rng=rng)
    assert s.iterations == 1
    c = TargetDecomposition(UniformBox([0.0], [1.0]), lambda x: 2.5, lambda r: 2.5)
    _, s, pieces = osstar_sample(c, rng=rng)
    assert s.iterations == 1 and len(pieces.pieces) == 1


def test_rejection_acceptance_rate_matches_quadrature(peak_oracle):
    t = peakiness_target(2.0)
    rng = np.random.default_rng(1)
    trials = accepted = 0
    xs = []
    while trials < 100_000:
        x, s = rejection_sample(t, M_global=0.0, rng=rng)
        trials += s.iterations
        accepted += 1
        xs.append(x[0])
    rho = math.exp(peak_oracle.log_z)
    se = math.sqrt(rho * (1 - rho) / trials)
    assert abs(accepted / trials - rho) <= 3 * se
    assert peak_oracle.ks_test(xs).passed


def test_rejection_uses_root_bound_by_default(rng):
    _, s = rejection_sample(peakiness_target(2.0), rng=rng)
    assert s.bound_evals == 1
    with pytest.raises(SearchAborted):
        rejection_sample(peakiness_target(500.0), M_global=0.0, rng=rng, max_iterations=1)


@pytest.mark.parametrize("refine", REFINE_STRATEGIES)
@pytest.mark.parametrize("rate", [1.0, 0.1])
def test_osstar_exact_on_cauchy_posterior(refine, rate, cauchy1):
    t, oracle = cauchy1
    rng = np.random.default_rng(7)
    xs = [osstar_sample(t, refine=refine, refine_rate=rate, rng=rng)[0][0] for _ in range(2000)]
    assert oracle.ks_test(xs).passed


@pytest.mark.parametrize("refine", REFINE_STRATEGIES)
def test_osstar_exact_with_a_persistent_piece_table(refine, cauchy1):
    t, oracle = cauchy1
    rng = np.random.default_rng(8)
    pieces, xs = None, []
    for _ in range(2000):
        x, _, pieces = osstar_sample(t, refine=refine, rng=rng, pieces=pieces)
        xs.append(x[0])
    assert oracle.ks_test(xs).passed


def _assert_partition(pieces, root):
    regions = sorted((p.region for p in pieces.pieces), key=lambda r: r.lower[0])
    assert regions[0].lower == root.lower and regions[-1].upper == root.upper
    for a, b in zip(regions, regions[1:]):
        assert a.upper[0] == b.lower[0]


@pytest.mark.parametrize("refine", REFINE_STRATEGIES)
def test_piece_table_stays_a_partition(refine, rng):
    t = cauchy_regression_preset(20, 1, 3).target
    pieces = None
    for _ in range(30):
        _, _, pieces = osstar_sample(t, refine=refine, rng=rng, pieces=pieces)
        _assert_partition(pieces, t.root)
    root_mass = t.proposal.log_mass(t.root)
    assert pieces.total_log_mass() == pytest.approx(root_mass, abs=1e-9)
    for p in pieces.pieces:
        grid = np.linspace(p.region.lower[0], p.region.upper[0], 50)
        assert p.bound >= max(t.o(np.array([v])) for v in grid)


def test_piece_choice_follows_weights(rng):
    from gumbel_astar.regions import Region
    from gumbel_astar.rejection import Piece
    table = PieceTable([Piece(Region((0.0,), (1.0,)), 0.0, math.log(0.2)),
                        Piece(Region((1.0,), (2.0,)), math.log(3.0), math.log(0.2))])
    picks = np.bincount([table.choose(rng) for _ in range(20000)], minlength=2)
    assert picks[1] / picks.sum() == pytest.approx(0.75, abs=0.015)


def test_refine_rate_controls_refinements(rng):
    t = cauchy_regression_preset(20, 2, 1).target
    buf = io.StringIO()
    for _ in range(30):
        osstar_sample(t, refine_rate=0.25, rng=rng, trace=buf)
    actions = [ln.split()[0] for ln in buf.getvalue().splitlines()]
    rejects, refines = actions.count("reject"), actions.count("refine")
    p = refines / rejects
    assert abs(p - 0.25) <= 3 * math.sqrt(0.25 * 0.75 / rejects)
    assert set(actions) <= {"propose", "accept", "reject", "refine"}


def test_osstar_argument_checks(rng):
    t = peakiness_target(1.0)
    with pytest.raises(ValueError):
        osstar_sample(t, refine="random", rng=rng)
    for bad in (0.0, 1.5):
        with pytest.raises(ValueError):
            osstar_sample(t, refine_rate=bad, rng=rng)


def test_slice_sampler_normal_moments():
    stats = SearchStats()
    chain = slice_sample(lambda z: -0.5 * float(z @ z), [0.0], 100_000,
                         rng=np.random.default_rng(3), stats=stats)
    assert abs(chain.mean()) <= 0.05
    assert abs(chain.var() - 1.0) <= 0.1
    assert stats.likelihood_evals > 100_000


def test_slice_sampler_uniform_support(rng):
    def logp(z):
        return 0.0 if 0.0 <= z[0] <= 1.0 else -math.inf
    chain = slice_sample(logp, [0.5], 2000, rng=rng)
    assert chain.min() >= 0.0 and chain.max() <= 1.0
    assert sps.kstest(chain[::10, 0], "uniform").pvalue > 0.001


def test_slice_sampler_rejects_bad_start(rng):
    with pytest.raises(ValueError):
        slice_sample(lambda z: -math.inf, [0.0], 10, rng=rng)


def test_slice_sampler_rarely_switches_modes():
    t = cauchy_regression_preset(20, 2, 0).target
    rng = np.random.default_rng(11)
    budget = 10 * np.mean([astar_sample(t, rng=rng).stats.cost() for _ in range(20)])
    start = np.array([2.0, 2.0])
    stats = SearchStats()
    chain = []
    while stats.likelihood_evals < budget:
        chain.extend(slice_sample(t.log_density, start if not chain else chain[-1], 1, rng=rng,
                                  stats=stats))
    side = np.sign(np.asarray(chain).sum(axis=1))
    switches = int(np.sum(side[1:] != side[:-1]))
    assert switches <= 2
