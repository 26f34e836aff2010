import io
import json

import pytest

from gumbel_astar import benchmarks
from gumbel_astar.cli import EXIT_ABORTED, EXIT_USAGE, SAMPLERS, main, read_config, rows_to_csv


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def rows(text):
    return [ln for ln in text.splitlines() if ln and not ln.startswith("#")]


@pytest.mark.parametrize("sampler", SAMPLERS)
def test_every_sampler_writes_rows(sampler):
    code, text = run("sample", "--preset", "peakiness", "--a", "3", "--sampler", sampler,
                     "--n", "4", "--seed", "2", "--lb-draws", "2")
    assert code == 0
    table = rows(text)
    assert table[0].split(",") == ["sample", "x0", "lb", "likelihood_evals", "bound_evals",
                                   "nodes_expanded", "total_cost", "wall_time_ns"]
    assert len(table) == 5
    for line in table[1:]:
        fields = line.split(",")
        assert float(fields[1]) >= 0.0
        assert fields[-1] == "0"
        assert float(fields[6]) == int(fields[3]) + 2 * int(fields[4])


def test_output_is_byte_identical_for_a_seed(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run("sample", "--preset", "cauchy", "--D", "2", "--n", "5", "--seed", "11",
                   "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    meta = json.loads((tmp_path / "a.csv.json").read_text())
    assert meta["preset"]["name"] == "cauchy" and meta["seed"] == 11


def test_timing_flag_records_wall_time():
    _, text = run("sample", "--preset", "peakiness", "--n", "2", "--timing")
    assert all(int(r.split(",")[-1]) > 0 for r in rows(text)[1:])


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\npreset = gaussian-mean\nN = 32\nbound-kind = linear\nn = 3\n")
    code, text = run("sample", "--config", str(cfg), "--n", "2")
    assert code == 0
    assert "preset=gaussian-mean" in text and '"N": 32' in text and '"bound_kind": "linear"' in text
    assert len(rows(text)) == 3
    assert read_config(str(cfg))["bound_kind"] == "linear"


@pytest.mark.parametrize("argv", [
    ("sample", "--preset", "nope"),
    ("sample", "--sampler", "gibbs"),
    ("sample", "--n", "0"),
    ("sample", "--refine-rate", "1.5"),
    ("sample", "--lb-draws", "2.5"),
    ("sample", "--preset", "peakiness", "--D", "2"),
    ("sample", "--preset", "cauchy", "--D", "2", "--sampler", "drill-down"),
    ("sample", "--preset", "cauchy", "--N", "7"),
    ("sample", "--config", "/nonexistent/file"),
    ("frobnicate",),
    ("validate", "everything"),
])
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_bad_config_keys(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run("sample", "--config", str(cfg))[0] == EXIT_USAGE
    cfg.write_text("just words\n")
    assert run("sample", "--config", str(cfg))[0] == EXIT_USAGE
    cfg.write_text("n = many\n")
    assert run("sample", "--config", str(cfg))[0] == EXIT_USAGE


def test_expansion_cap_exits_3_with_partial_output():
    code, text = run("sample", "--preset", "cauchy", "--D", "2", "--n", "3",
                     "--max-expansions", "2")
    assert code == EXIT_ABORTED
    assert "# aborted" in text


def test_osstar_trace_and_refine_rate(tmp_path):
    trace = tmp_path / "t.log"
    code, text = run("sample", "--preset", "cauchy", "--sampler", "osstar", "--refine-rate", "0.5",
                     "--refine", "largest-mass", "--n", "10", "--trace", str(trace))
    assert code == 0 and "refine=largest-mass refine_rate=0.5" in text
    actions = {ln.split()[0] for ln in trace.read_text().splitlines()}
    assert actions <= {"propose", "accept", "reject", "refine"} and "accept" in actions


def test_astar_trace(tmp_path):
    trace = tmp_path / "t.log"
    run("sample", "--preset", "gaussian-mean", "--n", "2", "--trace", str(trace))
    lines = trace.read_text().splitlines()
    assert sum(ln.startswith("accept") for ln in lines) == 2


def test_bound_cost_weight_changes_total():
    _, text = run("sample", "--preset", "peakiness", "--n", "1", "--bound-cost-weight", "5")
    f = rows(text)[1].split(",")
    assert float(f[6]) == int(f[3]) + 5 * int(f[4])


def test_list_presets():
    code, text = run("list-presets")
    assert code == 0
    for name in ("peakiness", "clutter", "gaussian-mean", "cauchy", "double-sin"):
        assert name in text


def test_validate_reports_each_check():
    code, text = run("validate", "termination", "--scale", "0.05")
    lines = text.splitlines()
    assert code == 0 and lines[-1].endswith("checks passed")
    assert all(ln.startswith(("PASS", "FAIL")) for ln in lines[:-1])


def test_benchmark_csv(tmp_path):
    out = tmp_path / "peak.csv"
    assert run("benchmark", "peakiness", "--runs", "5", "--out", str(out))[0] == 0
    text = out.read_text()
    assert text.splitlines()[2] == "a,mean_likelihood_evals,sem"
    assert len(rows(text)) == 6


def test_benchmark_results_do_not_depend_on_worker_count(monkeypatch):
    monkeypatch.setenv(benchmarks.THREADS_ENV, "1")
    one = benchmarks.peakiness(runs=5, a_values=(1.0, 10.0), seed=4)
    monkeypatch.setenv(benchmarks.THREADS_ENV, "2")
    two = benchmarks.peakiness(runs=5, a_values=(1.0, 10.0), seed=4)
    assert one == two
    monkeypatch.setenv(benchmarks.THREADS_ENV, "lots")
    assert benchmarks.worker_count() == 1


def test_rows_to_csv_unions_columns():
    text = rows_to_csv([{"a": 1, "b": 0.5}, {"a": 2, "c": "x"}], ["hello"])
    assert text.splitlines() == ["# hello", "a,b,c", "1,0.5,", "2,,x"]
