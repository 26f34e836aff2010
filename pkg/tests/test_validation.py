"""Reduced-size runs of the validation suites not covered by the acceptance file."""

import pytest

from gumbel_astar import validation as v


def _all_pass(results):
    failed = [r.line() for r in results if not r.passed]
    assert not failed, "\n".join(failed)


def test_process_suite():
    # independence, consistency and the argmax law of the constructions;
    # each KS check has a 1% false-alarm rate, so use the default seed
    _all_pass(v.check_process(seed=0, scale=0.5))


def test_bound_properties():
    _all_pass(v.check_bound_properties(seed=5))


def test_suite_registry():
    assert set(v.SUITES) == set(v._SUITE_FUNCS)
    results = v.run_suite("termination", seed=1, scale=0.05)
    assert all(hasattr(r, "line") for r in results)


def test_gumbel_suite_full_size():
    # the mean check has a fixed 0.02 tolerance, which needs ~1e5 draws
    _all_pass(v.run_suite("gumbel", seed=3))


@pytest.mark.parametrize("name", ["exactness", "bounds"])
def test_small_suites_run(name):
    _all_pass(v.run_suite(name, seed=3, scale=0.03))
