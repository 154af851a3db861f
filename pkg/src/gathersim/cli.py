"""Command line entry points: run, sweep, verify, adversary-demo.

Exit codes
    0  success (gathered / every check passed / adversary kept robots apart)
    1  a check failed, or a runtime error such as coefficient overflow or I/O
    2  invalid scenario or command line
    3  round cap reached without gathering (``run`` only)
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from gmpy2 import mpq

from .engine import CoefficientGrowthError, run
from .scenario import Scenario, ScenarioError, parse_scenario
from .traceio import write_summary, write_trace

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_ROUND_CAP = 3

#: default directory for outputs when no explicit path is given
OUT_ENV = "GATHERSIM_OUT"


def _out_path(explicit: str | None, from_scenario: str | None, default_name: str) -> Path | None:
    if explicit:
        return Path(explicit)
    if from_scenario:
        return Path(from_scenario)
    base = os.environ.get(OUT_ENV)
    if base:
        return Path(base) / default_name
    return None


def _ensure_parent(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)


def cmd_run(args) -> int:
    try:
        text = Path(args.scenario).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.scenario}: {exc.strerror}", file=sys.stderr)
        return EXIT_FAIL
    try:
        scenario = parse_scenario(text)
    except ScenarioError as exc:
        for line in exc.errors:
            print(f"invalid scenario: {line}", file=sys.stderr)
        return EXIT_INVALID
    scenario = scenario.with_overrides(seed=args.seed, max_rounds=args.max_rounds)
    problems = scenario.violations()
    if problems:
        for line in problems:
            print(f"invalid scenario: {line}", file=sys.stderr)
        return EXIT_INVALID
    try:
        trace = run(scenario)
    except CoefficientGrowthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    stem = scenario.digest()[:12]
    trace_path = _out_path(args.trace, scenario.outputs.get("trace"), f"{stem}.jsonl")
    summary_path = _out_path(args.summary, scenario.outputs.get("summary"), f"{stem}.csv")
    try:
        if trace_path is not None:
            _ensure_parent(trace_path)
            write_trace(trace, trace_path)
        if summary_path is not None:
            _ensure_parent(summary_path)
            write_summary(trace, summary_path)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(trace.verdict)
    return EXIT_OK if trace.verdict.gathered else EXIT_ROUND_CAP


SWEEP_COLUMNS = {
    "suig": ("seed", "robots", "points", "crashed", "delta_level", "l_min", "rounds", "verdict", "bound", "margin"),
    "suir": ("seed", "policy", "delta", "crashed", "rounds", "verdict", "contraction"),
}


def _sweep_suig(seed: int, crash: bool, max_rounds: int) -> tuple[dict, bool]:
    from .generators import suig_crash_case, suig_no_crash_case
    from .verification import check_complexity_bound, start_levels

    config = suig_crash_case(seed) if crash else suig_no_crash_case(seed)
    trace = run(Scenario("suig", config, max_rounds=max_rounds))
    ok = trace.verdict.gathered
    if crash:
        ok = ok and trace.verdict.point == config.crash_locations()[0]
        bound = margin = ""
    else:
        res = check_complexity_bound(trace)
        ok = ok and res.passed
        bound = res.bound if res.applicable else ""
        margin = (res.bound - res.rounds) if res.applicable else ""
    dl, lm = start_levels(config)
    row = {
        "seed": seed,
        "robots": len(config.robots),
        "points": len(config.occupied()),
        "crashed": sum(r.crashed for r in config.robots),
        "delta_level": dl,
        "l_min": lm,
        "rounds": trace.rounds,
        "verdict": trace.verdict.kind,
        "bound": bound,
        "margin": margin,
    }
    return row, ok


def _sweep_suir(seed: int, crash: bool, max_rounds: int) -> tuple[dict, bool]:
    from .generators import suir_pair
    from .verification import monitor_contraction

    policy = ("rigid", "min_progress", "random")[seed % 3]
    delta = (mpq(1, 10), mpq(1, 3), mpq(2))[(seed // 3) % 3]
    scenario = suir_pair(seed, policy=policy, delta=delta, crash=crash).with_overrides(max_rounds=max_rounds)
    trace = run(scenario)
    mon = monitor_contraction(trace)
    row = {
        "seed": seed,
        "policy": policy,
        "delta": str(delta),
        "crashed": int(crash),
        "rounds": trace.rounds,
        "verdict": trace.verdict.kind,
        "contraction": "pass" if mon.passed else "fail",
    }
    return row, trace.verdict.gathered and mon.passed


def cmd_sweep(args) -> int:
    worker = _sweep_suig if args.algo == "suig" else _sweep_suir
    rows = []
    failures = 0
    for seed in range(args.start, args.start + args.seeds):
        row, ok = worker(seed, args.crash, args.max_rounds)
        rows.append(row)
        failures += not ok
    out = _out_path(args.out, None, f"sweep-{args.algo}{'-crash' if args.crash else ''}.csv")
    stream = None
    try:
        if out is not None:
            _ensure_parent(out)
            stream = open(out, "w", encoding="utf-8", newline="")
        writer = csv.DictWriter(stream or sys.stdout, fieldnames=SWEEP_COLUMNS[args.algo], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        if stream is not None:
            stream.close()
    rounds = sorted(r["rounds"] for r in rows)
    print(
        f"{len(rows)} runs, {failures} failing; rounds min {rounds[0]} "
        f"median {rounds[len(rounds) // 2]} max {rounds[-1]}",
        file=sys.stderr,
    )
    return EXIT_OK if not failures else EXIT_FAIL


def _write_json(path: Path, payload) -> None:
    _ensure_parent(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def cmd_verify(args) -> int:
    from .verification import format_table, run_verification

    entries = run_verification(
        horizon=args.horizon,
        sample_runs=args.runs,
        progress=(lambda m: print(f"... {m}", file=sys.stderr)) if args.verbose else None,
    )
    print(format_table(entries))
    passed = sum(e["passed"] for e in entries)
    print(f"{passed}/{len(entries)} checks passed")
    report = _out_path(args.report, None, "verify-report.json")
    if report is not None:
        try:
            _write_json(report, {"passed": passed == len(entries), "entries": entries})
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK if passed == len(entries) else EXIT_FAIL


def cmd_adversary_demo(args) -> int:
    from .verification import demo_impossibility

    rep = demo_impossibility(args.algo, args.horizon, args.group)
    print(f"algorithm        {rep.algorithm} ({2 * rep.group_size} robots)")
    print(f"rounds           {rep.rounds}")
    print(f"gathered         {rep.gathered}")
    print(f"rules applied    {rep.rule_counts}")
    print(f"rules consistent {rep.rules_consistent}")
    print(f"max idle gap     {rep.max_gaps}")
    if rep.first_violation:
        print(f"violation        {rep.first_violation}")
    report = _out_path(args.report, None, f"adversary-{args.algo}.json")
    if report is not None:
        payload = {
            "algorithm": rep.algorithm,
            "horizon": rep.horizon,
            "group_size": rep.group_size,
            "gathered": rep.gathered,
            "rounds": rep.rounds,
            "rule_counts": {str(k): v for k, v in rep.rule_counts.items()},
            "rules_consistent": rep.rules_consistent,
            "max_gaps": {str(k): v for k, v in rep.max_gaps.items()},
            "gap_histogram": {
                str(k): {str(g): c for g, c in h.items()} for k, h in rep.gap_histogram.items()
            },
        }
        try:
            _write_json(report, payload)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gathersim",
        description="Exact simulator and checker for crash-tolerant robot gathering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario file")
    p.add_argument("scenario")
    p.add_argument("--trace", help="JSONL trace path")
    p.add_argument("--summary", help="CSV summary path")
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--seed", type=int, help="override scheduler and movement seeds")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a grid of seeded scenarios")
    p.add_argument("--algo", choices=("suig", "suir"), default="suig")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--start", type=int, default=0, help="first seed")
    p.add_argument("--crash", action="store_true", help="one crashed location per run")
    p.add_argument("--max-rounds", type=int, default=10_000)
    p.add_argument("--out", help="aggregate CSV path (stdout if unset)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--horizon", type=int, default=10_000, help="rounds for the impossibility demos")
    p.add_argument("--runs", type=int, default=40, help="seeded runs per sampled monitor")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("adversary-demo", help="run the semi-synchronous impossibility schedule")
    p.add_argument("--algo", default="lifted_suir", choices=("lifted_suir", "midpoint", "suir"))
    p.add_argument("--horizon", type=int, default=10_000)
    p.add_argument("--group", type=int, default=1, help="robots per point (bivalent lift when > 1)")
    p.add_argument("--report", help="JSON report path")
    p.set_defaults(func=cmd_adversary_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("max_rounds", "seeds", "horizon", "runs", "group"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            parser.error(f"--{name.replace('_', '-')} must be at least 1")
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
