"""The ten acceptance criteria at full size.

Each test prints one PASS/FAIL line (also collected into the terminal
summary) followed by the individual checks behind it.
"""

import time

import pytest

from gumbel_astar import validation as v

from .conftest import ACCEPTANCE_LINES

SEED = 2024


def _report(number, title, results, started):
    ok = all(r.passed for r in results)
    failed = [r.name for r in results if not r.passed]
    line = (f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  "
            f"[{sum(r.passed for r in results)}/{len(results)} checks, "
            f"{time.perf_counter() - started:.0f}s]")
    ACCEPTANCE_LINES.append(line)
    print(line)
    for r in results:
        print("    " + r.line())
    assert ok, "failed checks: " + "; ".join(failed)


@pytest.fixture(scope="module")
def exactness():
    started = time.perf_counter()
    return v.check_exactness(SEED), time.perf_counter() - started


def test_criterion_01_exactness(exactness):
    results, elapsed = exactness
    started = time.perf_counter() - elapsed
    samples = [r for r in results if "samples vs quadrature" in r.name]
    assert len(samples) == 6
    assert elapsed < 300, f"exactness suite took {elapsed:.0f}s"
    _report(1, "exactness of A* on every 1-D preset (KS vs quadrature, N=10^4)", samples, started)


def test_criterion_02_gumbel_laws(exactness):
    started = time.perf_counter()
    results = v.check_gumbel(SEED) + [r for r in exactness[0] if "LB ~ Gumbel" in r.name]
    _report(2, "Gumbel laws, LB ~ Gumbel(log Z), estimator variance", results, started)


def test_criterion_03_termination_law():
    started = time.perf_counter()
    _report(3, "geometric iteration law of global-bound A* and rejection",
            v.check_termination(SEED), started)


def test_criterion_04_partition_invariance():
    started = time.perf_counter()
    _report(4, "top-3 order statistics agree across constructions",
            v.check_partition_invariance(SEED), started)


def test_criterion_05_peakiness_scaling():
    started = time.perf_counter()
    results = v.check_peakiness_scaling(SEED)
    assert time.perf_counter() - started < 120
    _report(5, "drill-down cost grows slowly with peakiness", results, started)


def test_criterion_06_bounding_trends():
    started = time.perf_counter()
    _report(6, "bounding-strategy cost ratios versus N", v.check_bounding_trends(SEED), started)


def test_criterion_07_clutter_order_of_magnitude():
    started = time.perf_counter()
    _report(7, "clutter likelihood evaluations at D=3 and D=4", v.check_clutter(SEED), started)


def test_criterion_08_dominance_over_osstar():
    started = time.perf_counter()
    _report(8, "A* cheaper than both OS* strategies at matched refinement rates",
            v.check_dominance(SEED), started)


def test_criterion_09_variant_consistency():
    started = time.perf_counter()
    _report(9, "sampler variants agree with plain A*", v.check_variants(SEED), started)


def test_criterion_10_bound_soundness():
    started = time.perf_counter()
    results = v.check_soundness(SEED) + v.check_interval_enclosure(SEED)
    _report(10, "bound soundness fuzz over all presets and bounders", results, started)
