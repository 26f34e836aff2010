"""Command-line front end: ``sample``, ``validate``, ``benchmark``, ``list-presets``."""

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import benchmarks, validation
from .astar import (BoundStore, SearchAborted, astar_sample, astar_sample_multi_lb,
                    drill_down_sample, global_bound_sample, multi_sample_reuse)
from .models import PRESETS, make_preset
from .rejection import REFINE_STRATEGIES, osstar_sample, rejection_sample, slice_sample

SAMPLERS = ("astar", "astar-multi-lb", "astar-reuse", "drill-down", "global-bound",
            "rejection", "osstar", "slice")

EXIT_USAGE = 2
EXIT_ABORTED = 3

# CLI flag -> preset keyword
PRESET_FLAGS = {
    "a": "a", "D": "D", "N": "N", "noise": "noise_sigma", "data_seed": "data_seed",
    "w_outlier": "w_outlier", "bound_kind": "bound_kind", "n_points": "n_points",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def read_config(path):
    """``key=value`` lines; ``#`` starts a comment. Keys use flag names."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (p.strip() for p in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = value
    return out


def build_parser():
    p = _Parser(prog="gumbel-astar", description="Exact sampling with A* Sampling and baselines.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="draw samples from a preset")
    s.add_argument("--config", help="file of key=value lines; flags given explicitly win")
    s.add_argument("--preset", default="peakiness")
    s.add_argument("--sampler", default="astar")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    s.add_argument("--refine", default="at-rejected-point", choices=REFINE_STRATEGIES)
    s.add_argument("--refine-rate", type=float, default=1.0)
    s.add_argument("--lb-draws", type=float, default=1.0,
                   help="integer draws per expansion, or a rate in (0,1)")
    s.add_argument("--bound-cost-weight", type=float, default=2.0,
                   help="weight of a bound evaluation in the reported total cost")
    s.add_argument("--max-expansions", type=int, default=10 ** 7)
    s.add_argument("--trace", help="write the per-node action log here")
    s.add_argument("--timing", action="store_true",
                   help="record wall_time_ns (otherwise 0, keeping output byte-identical)")
    s.add_argument("--a", type=float)
    s.add_argument("--D", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--noise", type=float)
    s.add_argument("--data-seed", type=int)
    s.add_argument("--w-outlier", type=float)
    s.add_argument("--bound-kind")
    s.add_argument("--n-points", type=int)

    v = sub.add_parser("validate", help="run a statistical validation suite")
    v.add_argument("suite", choices=validation.SUITES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--scale", type=float, default=1.0,
                   help="multiply sample sizes (e.g. 0.1 for a quick check)")

    b = sub.add_parser("benchmark", help="run an experiment sweep")
    b.add_argument("figure", choices=benchmarks.FIGURES)
    b.add_argument("--runs", type=int, help="repetitions per sweep point")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default="-")

    sub.add_parser("list-presets", help="show the registered presets")
    return p


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            cfg = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        sample = parser._subparsers._group_actions[0].choices["sample"]
        known = {a.dest for a in sample._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        sample.set_defaults(**{k: _coerce(sample, k, v) for k, v in cfg.items()})
        args = parser.parse_args(argv)
    return args


def _coerce(parser, dest, value):
    for action in parser._actions:
        if action.dest == dest:
            if action.const is True and action.nargs == 0:
                return value.lower() in ("1", "true", "yes", "on")
            if action.type is not None:
                try:
                    return action.type(value)
                except ValueError:
                    raise UsageError(f"bad value for {dest}: {value!r}") from None
    return value


# --- sample -----------------------------------------------------------------

def preset_overrides(args):
    out = {}
    for flag, key in PRESET_FLAGS.items():
        val = getattr(args, flag, None)
        if val is not None:
            out[key] = val
    return out


def _make_preset(args):
    if args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}; see list-presets")
    try:
        return make_preset(args.preset, **preset_overrides(args))
    except TypeError as exc:
        raise UsageError(f"preset {args.preset!r} does not take that option ({exc})") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _record(i, point, lb, stats, wall):
    return {"index": i, "point": [float(v) for v in np.atleast_1d(point)], "lb": lb,
            "likelihood_evals": stats.likelihood_evals, "bound_evals": stats.bound_evals,
            "nodes_expanded": stats.nodes_expanded, "wall_time_ns": wall}


def draw_samples(preset, args, trace=None, on_record=None):
    """Run the chosen sampler ``args.n`` times; yields records in order.

    Sample ``i`` uses the generator spawned as ``SeedSequence(seed).spawn(n)[i]``.
    """
    target = preset.target
    n = args.n
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(args.seed).spawn(max(n, 1))]
    clock = time.perf_counter_ns if args.timing else (lambda: 0)
    sampler = args.sampler
    cap = args.max_expansions

    if sampler == "slice":
        x0 = _slice_start(target, rngs[0])
        from .astar import SearchStats
        stats = SearchStats()
        t0 = clock()
        chain = slice_sample(target.log_density, x0, n, rngs[0], stats=stats)
        wall = clock() - t0
        for i, x in enumerate(chain):
            # chain-level counts are reported on the first row
            st = stats if i == 0 else SearchStats()
            yield _record(i, x, math.nan, st, wall if i == 0 else 0)
        return

    if sampler == "astar-reuse":
        store = BoundStore(target.root)
        for i in range(n):
            t0 = clock()
            r = multi_sample_reuse(target, n_samples=1, rng=rngs[i], store=store,
                                   max_expansions=cap)[0]
            yield _record(i, r.point, r.max_value, r.stats, clock() - t0)
        return

    pieces = None
    M_root = None
    for i in range(n):
        rng = rngs[i]
        t0 = clock()
        if sampler == "astar":
            r = astar_sample(target, rng=rng, max_expansions=cap, trace=trace)
            point, lb, st = r.point, r.max_value, r.stats
        elif sampler == "astar-multi-lb":
            draws = args.lb_draws
            draws = int(draws) if float(draws).is_integer() else float(draws)
            r = astar_sample_multi_lb(target, lb_draws=draws, rng=rng, max_expansions=cap,
                                      trace=trace)
            point, lb, st = r.point, r.max_value, r.stats
        elif sampler == "drill-down":
            r = drill_down_sample(target, rng=rng, max_expansions=cap, trace=trace)
            point, lb, st = r.point, r.max_value, r.stats
        elif sampler == "global-bound":
            r = global_bound_sample(target, rng=rng, max_iterations=cap)
            point, lb, st = r.point, r.max_value, r.stats
        elif sampler == "rejection":
            if M_root is None:
                M_root = float(target.bounder(target.root))
            point, st = rejection_sample(target, M_global=M_root, rng=rng,
                                         max_iterations=cap, trace=trace)
            if i == 0:
                st.bound_evals += 1
            lb = math.nan
        elif sampler == "osstar":
            point, st, pieces = osstar_sample(target, refine=args.refine,
                                              refine_rate=args.refine_rate, rng=rng,
                                              pieces=pieces, max_iterations=cap, trace=trace)
            lb = math.nan
        else:
            raise UsageError(f"unknown sampler {sampler!r}; choose from {', '.join(SAMPLERS)}")
        yield _record(i, point, lb, st, clock() - t0)


def _slice_start(target, rng):
    for _ in range(10000):
        x = target.proposal.sample(target.root, rng)
        if math.isfinite(target.log_density(x)):
            return x
    raise RuntimeError("could not find a starting point with finite density")


def _csv_header(preset, args):
    lines = [
        f"# preset={preset.name} sampler={args.sampler} n={args.n} seed={args.seed}",
        f"# preset_params={json.dumps(preset.params, sort_keys=True)}",
        "# seeding: sample i uses numpy SeedSequence(seed).spawn(n)[i] with PCG64",
        f"# bound_cost_weight={args.bound_cost_weight:g}"
        + (f" refine={args.refine} refine_rate={args.refine_rate:g}" if args.sampler == "osstar" else "")
        + (f" lb_draws={args.lb_draws:g}" if args.sampler == "astar-multi-lb" else ""),
    ]
    return "\n".join(lines) + "\n"


def cmd_sample(args, stdout):
    if args.sampler not in SAMPLERS:
        raise UsageError(f"unknown sampler {args.sampler!r}; choose from {', '.join(SAMPLERS)}")
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if not 0.0 < args.refine_rate <= 1.0:
        raise UsageError("--refine-rate must be in (0, 1]")
    if args.lb_draws <= 0 or (args.lb_draws > 1 and not float(args.lb_draws).is_integer()):
        raise UsageError("--lb-draws must be a positive integer or a rate in (0, 1)")
    preset = _make_preset(args)
    if args.sampler == "drill-down" and preset.target.dim != 1:
        raise UsageError("drill-down needs a one-dimensional preset")
    dim = preset.target.dim

    out = io.StringIO()
    out.write(_csv_header(preset, args))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["sample"] + [f"x{d}" for d in range(dim)]
                    + ["lb", "likelihood_evals", "bound_evals", "nodes_expanded", "total_cost",
                       "wall_time_ns"])
    trace = open(args.trace, "w") if args.trace else None
    code = 0
    try:
        for rec in draw_samples(preset, args, trace):
            cost = rec["likelihood_evals"] + args.bound_cost_weight * rec["bound_evals"]
            writer.writerow([rec["index"]] + [repr(v) for v in rec["point"]]
                            + [repr(float(rec["lb"])), rec["likelihood_evals"], rec["bound_evals"],
                               rec["nodes_expanded"], repr(float(cost)), rec["wall_time_ns"]])
    except SearchAborted as exc:
        s = exc.stats
        sys.stderr.write(f"aborted: {exc} (likelihood_evals={s.likelihood_evals} "
                         f"bound_evals={s.bound_evals} nodes_expanded={s.nodes_expanded})\n")
        out.write(f"# aborted: {exc}\n")
        code = EXIT_ABORTED
    finally:
        if trace is not None:
            trace.close()

    _emit(out.getvalue(), args.out, stdout)
    if args.out != "-":
        sidecar = {"command": "sample", "preset": preset.to_descriptor(),
                   "sampler": args.sampler, "n": args.n, "seed": args.seed,
                   "refine": args.refine, "refine_rate": args.refine_rate,
                   "lb_draws": args.lb_draws, "bound_cost_weight": args.bound_cost_weight,
                   "max_expansions": args.max_expansions}
        with open(args.out + ".json", "w") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


def _emit(text, path, stdout):
    if path == "-":
        stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# --- validate / benchmark / list ----------------------------------------------

def cmd_validate(args, stdout):
    results = validation.run_suite(args.suite, seed=args.seed, scale=args.scale)
    for r in results:
        stdout.write(r.line() + "\n")
    failed = sum(not r.passed for r in results)
    stdout.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return 0 if failed == 0 else 1


def rows_to_csv(rows, header_lines=()):
    out = io.StringIO()
    for line in header_lines:
        out.write(f"# {line}\n")
    if rows:
        fields = []
        for row in rows:
            for k in row:
                if k not in fields:
                    fields.append(k)
        writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n", restval="")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return out.getvalue()


def cmd_benchmark(args, stdout):
    rows = benchmarks.run_figure(args.figure, runs=args.runs, seed=args.seed)
    header = [f"figure={args.figure} seed={args.seed} runs={args.runs or 'default'}",
              "seeding: sweep point i uses numpy SeedSequence(seed).spawn(points)[i]"]
    _emit(rows_to_csv(rows, header), args.out, stdout)
    return 0


def cmd_list_presets(stdout):
    for name in sorted(PRESETS):
        preset = make_preset(name)
        stdout.write(f"{name:14s} dim={preset.target.dim}  {preset.description}\n")
        stdout.write(f"{'':14s} defaults: {json.dumps(preset.params, sort_keys=True)}\n")
    return 0


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        if args.command == "sample":
            return cmd_sample(args, stdout)
        if args.command == "validate":
            return cmd_validate(args, stdout)
        if args.command == "benchmark":
            return cmd_benchmark(args, stdout)
        return cmd_list_presets(stdout)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
