"""Command-line front end: schedule, rates, norms, gamma, simulate, couple,
strongapprox and verify subcommands with deterministic seeding and
CSV/JSON emission.

A JSON config file supplies defaults field by field; explicit flags win.
The default seed is 7, overridable by the MIXBOUND_SEED environment
variable and then by --seed.  Reports serialize with sorted keys and
12-significant-digit floats, so identical configurations produce identical
bytes at any worker count.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import acceptance as ac
from . import chaining as ch
from . import coupling as cp
from . import function_classes as fc
from . import grid as gr
from . import mixing as mx
from . import norms as nm
from . import processes as pr
from . import rates as rt
from .report import ExperimentReport, dumps_canonical

DEFAULT_SEED = 7


class CliError(SystemExit):
    def __init__(self, message: str):
        super().__init__(f"mixbound: error: {message}")


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _csv_text(header, rows) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise CliError("missing required field(s): " +
                       ", ".join(f"--{n}" for n in missing))


def _require_lattice(n: int, basis_size: int) -> None:
    if not gr.in_lattice(n, basis_size):
        suggestion = gr.nearest_member(n, basis_size)
        raise CliError(
            f"n={n} is not an admissible sample size; nearest member is {suggestion}")


def _parse_norm_family(text: str, basis_size: int) -> ch.NormFamily:
    head, _, rest = text.partition(":")
    if head == "constant":
        parts = rest.split(",")
        if parts[0] == "l2":
            return ch.l2_family()
        if parts[0] == "lr":
            kv = dict(p.split("=", 1) for p in parts[1:])
            return ch.lr_family(float(kv["r"]))
        raise CliError(f"unknown constant norm {parts[0]!r}")
    if head == "schedule":
        kv: dict[str, str] = {}
        for part in rest.split(","):
            k, _, v = part.partition("=")
            kv[k.strip()] = v.strip()
        n = int(kv["n"])
        _require_lattice(n, basis_size)
        profile = mx.parse_profile(kv["profile"])
        return ch.schedule_family(gr.block_schedule(n, profile, basis_size))
    raise CliError(f"cannot parse norm family {text!r}")


def _load_class_file(path: str) -> ch.FunctionClass:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    return ch.FunctionClass(
        table=np.asarray(payload["table"], dtype=float),
        weights=np.asarray(payload["weights"], dtype=float),
        names=tuple(payload.get("names", ())),
    )


# -- subcommand handlers ------------------------------------------------------


def cmd_schedule(args) -> int:
    _require(args, "n", "profile")
    _require_lattice(args.n, args.basis_size)
    profile = mx.parse_profile(args.profile)
    chain = gr.divisor_chain(args.n, args.basis_size)
    sched = gr.block_schedule(args.n, profile, args.basis_size)
    _emit(dumps_canonical({
        "n": args.n,
        "divisors": list(chain.divisors),
        "q_seq": list(sched.q_seq),
    }), args.output)
    return 0


def cmd_rates(args) -> int:
    _require(args, "profile")
    profile = mx.parse_profile(args.profile)
    table = rt.rate_table(profile, args.r, args.n_min, args.n_max, args.basis_size)
    rows = [
        (rep.n, rep.q0, _fmt(rep.factor), _fmt(rep.effective_n), rep.regime,
         _fmt(rep.lower_env), _fmt(rep.upper_env))
        for rep in table
    ]
    _emit(_csv_text(
        ("n", "q_n0", "frak_n", "effective_n", "regime", "lower_env", "upper_env"),
        rows), args.output)
    return 0


def cmd_norms(args) -> int:
    _require(args, "profile", "q", "curve")
    profile = mx.parse_profile(args.profile)
    samples = np.loadtxt(args.curve, delimiter=",", ndmin=1)
    curve = nm.QuantileCurve.from_sample(np.atleast_1d(samples))
    half = np.unique(profile.half_levels(args.q))
    _emit(dumps_canonical({
        "mu_breakpoints": [float(h) for h in half if h > 0],
        "q_norm": nm.dependence_norm(curve, args.q, profile),
        "b_r": nm.holder_factor(args.q, args.r, profile),
    }), args.output)
    return 0


def cmd_gamma(args) -> int:
    _require(args, "class-file", "norms")
    cls = _load_class_file(args.class_file)
    family = _parse_norm_family(args.norms, args.basis_size)
    if cls.size <= ch.EXACT_SEARCH_LIMIT:
        value, witness = ch.complexity_exact(cls, family)
        partitions = [[list(cell) for cell in level] for level in witness.levels]
        method = "exact"
    else:
        value = ch.complexity_greedy(cls, family)
        partitions = None
        method = "greedy"
    _emit(dumps_canonical({
        "gamma": value,
        "method": method,
        "witness_partitions": partitions,
    }), args.output)
    return 0


def cmd_simulate(args) -> int:
    _require(args, "process", "cls", "n")
    model = pr.parse_model(args.process)
    members = fc.make_class(args.cls, model).members
    _require_lattice(args.n, args.basis_size)
    vals, _, _ = pr.simulate_many(model, args.n, args.reps, args.seed)
    sups = pr.empirical_process_many(vals, members)
    csv_text = _csv_text(("rep", "sup_value"),
                         [(i, _fmt(float(s))) for i, s in enumerate(sups)])
    if args.output:
        _emit(csv_text, args.output)
    summary = {
        "process": model.spec(), "class": args.cls, "n": args.n,
        "reps": args.reps, "seed": args.seed,
        "mean_sup": float(sups.mean()),
        "std_error": float(sups.std(ddof=1) / math.sqrt(args.reps)),
    }
    sys.stdout.write(dumps_canonical(summary) + "\n")
    if not args.output:
        sys.stdout.write(csv_text)
    return 0


def cmd_couple(args) -> int:
    _require(args, "process", "cls", "n", "q")
    model = pr.parse_model(args.process)
    members = fc.make_class(args.cls, model).members
    _require_lattice(args.n, args.basis_size)
    t0 = time.perf_counter()
    sups = cp.gap_samples(model, members, args.n, args.q, args.reps, args.seed)
    vals, innov, _ = pr.simulate_many(model, args.n, args.reps, args.seed, tag=args.q)
    replica = cp.replicate_many(model, vals, innov, args.q, args.seed, tag=args.q)
    even = cp.block_independence_test(replica, args.q, "even")
    gap_mean = float(sups.mean())
    results = {
        "gap_mean": gap_mean,
        "gap_se": float(sups.std(ddof=1) / math.sqrt(args.reps)),
        "gap_max": float(sups.max()),
        "even_block_corr": even.pooled_corr,
        "even_block_threshold": even.threshold,
    }
    checks = [{"id": "even_block_independence", "passed": even.passed}]
    if model.is_markov:
        tau_hat, _ = cp.tau_for_class(model, members, args.q, 200, 200, args.seed)
        scaled = math.sqrt(args.n) * tau_hat
        results["tau_hat"] = tau_hat
        results["sqrt_n_tau"] = scaled
        results["gap_over_sqrt_n_tau"] = gap_mean / scaled if scaled > 0 else None
    report = ExperimentReport(
        command="couple",
        inputs={"process": model.spec(), "class": args.cls, "n": args.n,
                "q": args.q, "reps": args.reps, "seed": args.seed},
        results=results, checks=checks,
        wall_clock_s=time.perf_counter() - t0,
    )
    _emit(report.to_json(include_timing=args.timing), args.output)
    return 0


def cmd_strongapprox(args) -> int:
    _require(args, "process", "cls")
    model = pr.parse_model(args.process)
    members = fc.make_class(args.cls, model).members
    n_grid = [int(x) for x in args.n_grid.split(",")]
    for n in n_grid:
        _require_lattice(n, args.basis_size)
    gamma_order = math.inf if args.gamma in ("inf", "infinity") else float(args.gamma)
    t0 = time.perf_counter()
    rep = cp.strong_approx_experiment(model, members, n_grid, reps=args.reps,
                                      seed=args.seed, gamma_order=gamma_order)
    report = ExperimentReport(
        command="strongapprox",
        inputs={"process": model.spec(), "class": args.cls, "n_grid": n_grid,
                "gamma": args.gamma, "reps": args.reps, "seed": args.seed},
        results={"points": [{
            "n": p.n, "q": p.q, "gap_mean": p.gap_mean, "gap_se": p.gap_se,
            "tau_hat": p.tau_hat, "finite_dim_term": p.finite_dim_term,
            "coupling_term": p.coupling_term, "bound": p.bound,
            "implied_ratio": p.implied_ratio,
        } for p in rep.points]},
        checks=[
            {"id": "gap_monotone_non_increasing", "passed": rep.monotone},
            {"id": "gap_below_assembled_bound", "passed": rep.within_bound},
        ],
        wall_clock_s=time.perf_counter() - t0,
    )
    _emit(report.to_json(include_timing=args.timing), args.output)
    return 0 if report.all_passed() else 1


def cmd_verify(args) -> int:
    try:
        cids = ac.suite_criteria(args.suite)
    except KeyError as exc:
        raise CliError(str(exc))
    t0 = time.perf_counter()
    results = ac.run_criteria(cids, seed=args.seed, scale=args.reps_scale,
                              workers=args.workers)
    for res in results:
        sys.stderr.write(res.line() + "\n")
    report = ExperimentReport(
        command="verify",
        inputs={"suite": args.suite, "seed": args.seed,
                "reps_scale": args.reps_scale},
        results={res.cid: res.details for res in results},
        checks=[{"id": res.cid, "title": res.title, "passed": res.passed}
                for res in results],
        wall_clock_s=time.perf_counter() - t0,
    )
    _emit(report.to_json(include_timing=args.timing), args.output)
    return 0 if report.all_passed() else 1


# -- parser ---------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixbound",
        description="block schedules, dependence-adapted norms, chaining "
                    "complexity and Monte Carlo bound validation",
    )
    parser.add_argument("--config", help="JSON file of per-field defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--output", default=None)
        p.add_argument("--basis-size", type=int, default=3)
        p.add_argument("--timing", action="store_true",
                       help="include wall clock in the JSON (breaks byte stability)")

    p = sub.add_parser("schedule", help="divisors and block lengths for one n")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--profile")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("rates", help="rate factors over a lattice range (CSV)")
    common(p)
    p.add_argument("--profile")
    p.add_argument("--r", type=float, default=4.0)
    p.add_argument("--n-min", type=int, default=10**3)
    p.add_argument("--n-max", type=int, default=10**6)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("norms", help="dependence norm and comparison factor")
    common(p)
    p.add_argument("--profile")
    p.add_argument("--q", type=int)
    p.add_argument("--r", type=float, default=4.0)
    p.add_argument("--curve", help="CSV of samples of f(X)")
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("gamma", help="partition complexity of a class file")
    common(p)
    p.add_argument("--class-file")
    p.add_argument("--norms",
                   help="constant:l2 | constant:lr,r=4 | schedule:n=...,profile=...")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("simulate", help="replicated sup statistics (CSV + summary)")
    common(p)
    p.add_argument("--process")
    p.add_argument("--class", dest="cls")
    p.add_argument("--n", type=int)
    p.add_argument("--reps", type=int, default=200)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("couple", help="replica coupling gap report")
    common(p)
    p.add_argument("--process")
    p.add_argument("--class", dest="cls")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--reps", type=int, default=200)
    p.set_defaults(func=cmd_couple)

    p = sub.add_parser("strongapprox", help="Gaussian coupling gap across an n grid")
    common(p)
    p.add_argument("--process")
    p.add_argument("--class", dest="cls")
    p.add_argument("--n-grid", default="384,1536,6144")
    p.add_argument("--gamma", default="inf")
    p.add_argument("--reps", type=int, default=200)
    p.set_defaults(func=cmd_strongapprox)

    p = sub.add_parser("verify", help="run an acceptance suite")
    common(p)
    p.add_argument("--suite", default="all",
                   choices=sorted(ac.SUITES))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--reps-scale", type=float, default=1.0)
    p.set_defaults(func=cmd_verify)
    return parser


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if not args.config:
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"config: {exc}")
    if not isinstance(config, dict):
        raise CliError("config: top level must be a JSON object")
    for key, value in config.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise CliError(f"config: unknown field {key!r}")
        if getattr(args, attr) is None:
            setattr(args, attr, value)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser)
    if args.seed is None:
        args.seed = int(os.environ.get("MIXBOUND_SEED", DEFAULT_SEED))
    try:
        return args.func(args)
    except ValueError as exc:  # GridError, ProfileError etc. are ValueErrors
        raise CliError(str(exc))


if __name__ == "__main__":
    sys.exit(main())
