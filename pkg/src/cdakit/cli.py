"""``cdakit`` command line: generate, verify, analyze, localize, bench.

Exit codes: 0 success, 1 verification failure (witness JSON on stdout),
2 usage, input or budget error.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from pathlib import Path

from .cca import cca_upper_bound
from .cda_heuristic import generate_heuristic_cda
from .cda_sat import FormulaTooLarge, default_budget_ms, generate_min_cda
from .files import array_to_csv, fixtures_dir, outcome_from_csv, outcome_to_csv, read_array
from .interactions import BudgetExceeded, compute_universe, parse_interaction_set
from .localize import annotate, identify, run_tests
from .model import ModelError, load_model
from .report import GenerationReport, analyze
from .verify import Variant, check_cca, check_cda, check_cla

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj, path=None):
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _check_dt(model, d, t):
    if d < 0 or t < 1:
        raise UsageError("need --d >= 0 and --t >= 1")
    if d + t > model.k:
        raise UsageError(f"d + t = {d + t} exceeds the number of parameters ({model.k})")


def _run_once(model, algo, d, t, seed, budget_ms, universe, dimacs_dir):
    if algo == "heuristic":
        return generate_heuristic_cda(model, d, t, seed=seed, universe=universe)
    if algo == "sat":
        return generate_min_cda(model, d, t, seed=seed, budget_ms=budget_ms,
                                universe=universe, dimacs_dir=dimacs_dir)
    t0 = time.perf_counter()
    array = cca_upper_bound(model, d, t, seed)
    return GenerationReport(model.name, "cca", d, t, array, seed, (time.perf_counter() - t0) * 1000)


def generate(model, algo, d, t, seed=0, budget_ms=None, repeat=1, dimacs_dir=None):
    """Run ``repeat`` seeds and keep the smallest verified array (ties: lowest seed)."""
    _check_dt(model, d, t)
    if repeat < 1:
        raise UsageError("--repeat must be at least 1")
    universe = compute_universe(model, d, t) if algo != "cca" else None
    runs = []
    for s in range(seed, seed + repeat):
        rep = _run_once(model, algo, d, t, s, budget_ms, universe, dimacs_dir)
        bad = check_cda(rep.array, model, d, t)
        if bad is not None:
            raise AssertionError(f"{algo} emitted an array failing verification: {bad.describe(model)}")
        runs.append(rep)
    best = min(runs, key=lambda r: (r.size, r.seed))
    best.stats = analyze(model, d, t)
    return best, runs


def cmd_generate(args):
    model = load_model(args.model)
    budget = args.budget_ms if args.budget_ms is not None else default_budget_ms()
    best, runs = generate(model, args.algo, args.d, args.t, args.seed, budget, args.repeat, args.dimacs_dir)
    report = best.to_json()
    if args.repeat > 1:
        report["runs"] = [{"seed": r.seed, "size": r.size, "wall_time_ms": round(r.wall_time_ms, 3),
                           "optimal": r.optimal} for r in runs]
    csv_text = array_to_csv(best.array)
    if args.out in (None, "-"):
        sys.stdout.write(csv_text)
        if args.report:
            _dump(report, args.report)
    else:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        _dump(report, args.report)
    return EXIT_OK


def cmd_verify(args):
    model = load_model(args.model)
    array = read_array(model, args.array, check=False)
    variant = Variant.parse(args.variant)
    if args.kind == "cca":
        if not 0 <= args.t <= model.k:
            raise UsageError(f"--t must be in 0..{model.k}")
        found = check_cca(array, model, args.t)
        found = [found] if found else []
    else:
        if args.d < 0 or not 0 <= args.t <= model.k:
            raise UsageError(f"need --d >= 0 and --t in 0..{model.k}")
        check = check_cda if args.kind == "cda" else check_cla
        found = check(array, model, args.d, args.t, variant, all_witnesses=args.all)
        if not args.all:
            found = [found] if found else []
    result = {"kind": args.kind, "d": args.d, "t": args.t, "variant": str(variant),
              "rows": len(array), "ok": not found}
    if found:
        result["violations" if args.all else "violation"] = (
            [v.to_json(model) for v in found] if args.all else found[0].to_json(model)
        )
    _dump(result)
    return EXIT_OK if not found else EXIT_VIOLATION


def cmd_analyze(args):
    model = load_model(args.model)
    if args.d < 0 or not 1 <= args.t <= model.k:
        raise UsageError(f"need --d >= 0 and --t in 1..{model.k}")
    stats = analyze(model, args.d, args.t)
    if args.json:
        _dump({"model": model.name, "d": args.d, "t": args.t, **stats})
    else:
        print(f"model                 {model.name}")
        print(f"parameters (k)        {stats['k']}")
        print(f"constraints           {stats['constraints']}")
        print(f"valid {args.t}-way          {stats['valid_interactions']}")
        print(f"invalid {args.t}-way        {stats['invalid_interactions']}")
        print(f"masked pairs (d={args.d})   {stats['masked_pairs']}")
        if "valid_rows" in stats:
            print(f"valid test cases      {stats['valid_rows']}")
    return EXIT_OK


def cmd_localize(args):
    model = load_model(args.model)
    array = read_array(model, args.array)
    if not 0 <= args.t <= model.k:
        raise UsageError(f"--t must be in 0..{model.k}")
    faulty = None
    if args.outcome:
        outcome = outcome_from_csv(Path(args.outcome).read_text(encoding="utf-8"), len(array))
    elif args.faulty is not None:
        faulty = parse_interaction_set(model, args.faulty)
        outcome = run_tests(array, faulty)
    else:
        raise UsageError("give --outcome FILE or --faulty 'F1=0,F2=0;...'")
    diag = identify(array, outcome, args.t, args.at_most, args.minimal)
    if faulty is not None:
        diag = annotate(model, diag, faulty)
    result = diag.to_json(model)
    result["failed_rows"] = [i + 1 for i in outcome.failed_rows]
    if args.outcome_out:
        Path(args.outcome_out).write_text(outcome_to_csv(outcome), encoding="utf-8")
    _dump(result)
    return EXIT_OK


def cmd_bench(args):
    paths = [Path(p) for p in args.models] or sorted(Path(args.fixtures or fixtures_dir()).glob("*.sut"))
    if not paths:
        raise UsageError("no model files to benchmark")
    budget = args.budget_ms if args.budget_ms is not None else default_budget_ms()
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in ("sat", "heuristic", "cca"):
            raise UsageError(f"unknown algorithm {a!r}")
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["model", "algorithm", "rep", "seed", "size", "time_ms", "optimal"])
        summary = []
        for path in paths:
            model = load_model(path)
            if args.d + args.t > model.k:
                print(f"skipping {path.name}: d + t exceeds k", file=sys.stderr)
                continue
            for algo in algos:
                _, runs = generate(model, algo, args.d, args.t, args.seed, budget, args.repeat)
                for rep, r in enumerate(runs, start=1):
                    w.writerow([model.name, algo, rep, r.seed, r.size, f"{r.wall_time_ms:.3f}",
                                str(r.optimal).lower()])
                sizes = [r.size for r in runs]
                times = [r.wall_time_ms for r in runs]
                summary.append((model.name, algo, sizes, times))
    finally:
        if out is not sys.stdout:
            out.close()
    print("model,algorithm,size_min,size_max,size_avg,time_ms_min,time_ms_max,time_ms_avg", file=sys.stderr)
    for name, algo, sizes, times in summary:
        print(f"{name},{algo},{min(sizes)},{max(sizes)},{statistics.mean(sizes):.2f},"
              f"{min(times):.3f},{max(times):.3f},{statistics.mean(times):.3f}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdakit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a (d,t)-CDA")
    g.add_argument("model")
    g.add_argument("--algo", choices=["sat", "heuristic", "cca"], default="heuristic")
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--t", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--budget-ms", type=int, default=None,
                   help="wall-clock budget for --algo sat (default: $CDAKIT_BUDGET_MS, else unbounded)")
    g.add_argument("--repeat", type=int, default=1)
    g.add_argument("--out", default=None, help="array CSV path (default stdout)")
    g.add_argument("--report", default=None, help="report JSON path (default stdout when --out is a file)")
    g.add_argument("--dimacs-dir", default=None, help="dump each size's formula in DIMACS format here")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check an array against a definition")
    v.add_argument("model")
    v.add_argument("array")
    v.add_argument("--kind", choices=["cca", "cda", "cla"], default="cda")
    v.add_argument("--d", type=int, default=1)
    v.add_argument("--t", type=int, default=2)
    v.add_argument("--variant", default="exact/exact", help="d-mode/t-mode, each exact or at-most")
    v.add_argument("--all", action="store_true", help="report every violation")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="interaction and masking statistics")
    a.add_argument("model")
    a.add_argument("--d", type=int, default=1)
    a.add_argument("--t", type=int, default=2)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    lo = sub.add_parser("localize", help="identify faulty interactions from an outcome")
    lo.add_argument("model")
    lo.add_argument("array")
    lo.add_argument("--outcome", help="CSV with row,verdict (rows numbered from 1)")
    lo.add_argument("--faulty", help="simulate: ';'-separated interactions such as 'F1=0,F2=0'")
    lo.add_argument("--t", type=int, default=2)
    lo.add_argument("--at-most", action="store_true", help="consider strengths up to t")
    lo.add_argument("--minimal", action="store_true", help="drop flagged supersets of flagged interactions")
    lo.add_argument("--outcome-out", help="write the simulated outcome CSV here")
    lo.set_defaults(func=cmd_localize)

    b = sub.add_parser("bench", help="repeat generation over model files")
    b.add_argument("models", nargs="*")
    b.add_argument("--fixtures", help="directory of .sut files (default: bundled fixtures)")
    b.add_argument("--algos", default="heuristic,sat")
    b.add_argument("--d", type=int, default=1)
    b.add_argument("--t", type=int, default=2)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeat", type=int, default=5)
    b.add_argument("--budget-ms", type=int, default=None)
    b.add_argument("--out", help="CSV path (default stdout)")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ModelError, BudgetExceeded, FormulaTooLarge, ValueError, OSError) as exc:
        print(f"cdakit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
