"""Command-line front end.

Subcommands: analyze (pair-order certificates and consensus levels),
solve (exact medians), verify (exact LP suites), simulate (Monte-Carlo
solved-pair proportions), dist (distance between two rankings).

Exit codes: 0 success, 2 unparseable input, 3 invalid flags or refused
parameters, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .distance import kwise_distance
from .exceptions import CycleError, InputError, ParseError
from .lp import (
    INFEASIBLE,
    build_lemma_lp1,
    simplex_solve,
    star_sweep,
    verify_second_best_bounds,
    verify_six_candidate_rule,
)
from .model import AlternativeRegistry, ConstraintSet, Profile, Ranking
from .preflib import parse as parse_preflib
from .reduction import (
    EVERY_MEDIAN,
    ReductionReport,
    consensus_levels,
    mot2_iterated_improved,
    mot2_single,
    mot3_iterated,
    mot3_single,
    mote3_all,
    reduction_rate_bound,
    at3_all,
)
from .simulate import DEFAULT_SEED, SimulationConfig, run_simulation
from .solver import (
    BRUTE_FORCE_CAP,
    CONSTRAINED_CAP,
    brute_force_medians,
    constrained_medians,
)
from .stats import compute_statistics

SCHEMA_VERSION = 1

EXIT_PARSE = 2
EXIT_FLAGS = 3
EXIT_INVARIANT = 4


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags; remap to the documented code
        return EXIT_FLAGS if exc.code else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CycleError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setwise-kemeny",
        description="Set-wise Kemeny rank aggregation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="pair-order certificates for a profile")
    p.add_argument("file")
    p.add_argument("--rule", type=int, choices=(2, 3), default=3)
    p.add_argument(
        "--method",
        choices=("at", "mot", "imot", "mote", "all"),
        default="all",
    )
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--seed-constraints", default=None)
    _output_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("solve", help="exact medians of a profile")
    p.add_argument("file")
    p.add_argument("--rule", type=int, choices=(2, 3), default=3)
    p.add_argument("--use-reduction", action="store_true")
    p.add_argument("--cap", type=int, default=None)
    _output_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="exact LP verification suites")
    p.add_argument(
        "--suite",
        required=True,
        choices=("lp1", "star", "second-best", "six-candidate"),
    )
    p.add_argument("--max-n", type=int, default=5)
    _output_flags(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("simulate", help="Monte-Carlo solved-pair proportions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--instances", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument(
        "--methods",
        default="3AT,3MOT,3MOTe,Iterated3MOT",
        help="comma-separated method names",
    )
    p.add_argument("--csv", default=None, help="write the CSV table to this path")
    _output_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("dist", help="distance between two rankings")
    p.add_argument("file_a", help="ranking file, one line like 'a > b > c'")
    p.add_argument("file_b")
    p.add_argument("--k", type=int, choices=(2, 3), default=3)
    p.set_defaults(func=_cmd_dist)
    return parser


def _output_flags(p):
    group = p.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true")
    group.add_argument("--table", action="store_true")


def _load_profile(path: str) -> Profile:
    with open(path, encoding="utf-8") as fh:
        return parse_preflib(fh.read())


def _label_pairs(report: ReductionReport, registry: AlternativeRegistry):
    return [
        {
            "x": registry.labels[x],
            "y": registry.labels[y],
            "x_index": x,
            "y_index": y,
            "iteration": it,
        }
        for (x, y), it in sorted(report.certified.items())
    ]


def _methods_for(rule: int, method: str) -> list[str]:
    if rule == 3:
        table = {
            "at": ["3AT"],
            "mot": ["3MOT"],
            "imot": ["Iterated3MOT"],
            "mote": ["3MOTe"],
            "all": ["3AT", "3MOT", "3MOTe", "Iterated3MOT"],
        }
    else:
        table = {
            "mot": ["MOT"],
            "imot": ["ImprovedIteratedMOT"],
            "all": ["MOT", "IteratedMOT", "ImprovedIteratedMOT"],
        }
    if method not in table:
        raise InputError(f"method {method!r} is not available for rule {rule}")
    return table[method]


def _load_seed_constraints(path: str, registry: AlternativeRegistry) -> ConstraintSet:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if ">" not in line:
                raise ParseError(
                    f"expected 'label > label', got {line!r}", line=lineno
                )
            left, right = (s.strip() for s in line.split(">", 1))
            pairs.append((registry.index_of(left), registry.index_of(right)))
    return ConstraintSet.from_pairs(registry.n, pairs)


def _cmd_analyze(args) -> int:
    profile = _load_profile(args.file)
    registry = profile.registry
    stats = compute_statistics(profile)
    names = _methods_for(args.rule, args.method)
    seed = None
    if args.seed_constraints:
        seed = _load_seed_constraints(args.seed_constraints, registry)

    runners = {
        "3AT": lambda: at3_all(stats),
        "3MOT": lambda: mot3_single(stats),
        "3MOTe": lambda: mote3_all(stats),
        "Iterated3MOT": lambda: mot3_iterated(
            stats, seed=seed, max_iterations=args.max_iterations
        ),
        "MOT": lambda: mot2_single(stats),
        "IteratedMOT": lambda: mot2_iterated_improved(
            stats, seed=seed, max_iterations=args.max_iterations, variant="classic"
        ),
        "ImprovedIteratedMOT": lambda: mot2_iterated_improved(
            stats, seed=seed, max_iterations=args.max_iterations, variant="improved"
        ),
    }
    reports = {name: runners[name]() for name in names}

    methods_payload = []
    best_fraction = 0.0
    for name in names:
        rep = reports[name]
        frac = rep.solved_fraction
        if rep.guarantee == EVERY_MEDIAN:
            best_fraction = max(best_fraction, float(frac))
        methods_payload.append(
            {
                "method": name,
                "guarantee": rep.guarantee,
                "iterations": rep.iterations_used,
                "certified_fraction": str(rep.certified_fraction),
                "solved_fraction": str(frac),
                "constraints": _label_pairs(rep, registry),
            }
        )

    consensus = None
    if args.rule == 3:
        single = reports.get("3MOT") or mot3_single(stats)
        iterated = reports.get("Iterated3MOT") or mot3_iterated(stats, seed=seed)
        level, level_star = consensus_levels(single, iterated)
        consensus = {"single": str(level), "iterated": str(level_star)}
        best_fraction = max(best_fraction, float(iterated.solved_fraction))

    bound = reduction_rate_bound(registry.n, min(best_fraction, 1 - 1e-12))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "input": args.file,
        "rule": args.rule,
        "n": registry.n,
        "m": profile.m,
        "methods": methods_payload,
        "consensus_levels": consensus,
        "reduction_rate_bound": bound,
    }
    if args.json or not args.table:
        print(json.dumps(payload, indent=2, sort_keys=True))
    if args.table:
        _print_analysis_table(payload, registry)
    return 0


def _print_analysis_table(payload, registry):
    print(f"input: {payload['input']}  rule: {payload['rule']}"
          f"  n={payload['n']}  m={payload['m']}")
    for entry in payload["methods"]:
        print(
            f"{entry['method']:<22} {entry['guarantee']:<13}"
            f" solved {entry['solved_fraction']:<8}"
            f" iterations {entry['iterations']}"
        )
        for c in entry["constraints"]:
            print(f"    {c['x']} > {c['y']}  (round {c['iteration']})")
    if payload["consensus_levels"]:
        lv = payload["consensus_levels"]
        print(f"consensus level: {lv['single']}  iterated: {lv['iterated']}")
    print(f"reduction rate bound: {payload['reduction_rate_bound']:.6g}")


def _cmd_solve(args) -> int:
    profile = _load_profile(args.file)
    registry = profile.registry
    n = registry.n
    constraints = None
    if args.use_reduction:
        stats = compute_statistics(profile)
        if args.rule == 3:
            constraints = mot3_iterated(stats).constraints
        else:
            constraints = mot2_iterated_improved(stats).constraints
        cap = args.cap if args.cap is not None else CONSTRAINED_CAP
        result = constrained_medians(profile, args.rule, constraints, cap=cap)
    else:
        cap = args.cap if args.cap is not None else BRUTE_FORCE_CAP
        if n > cap:
            raise InputError(
                f"n={n} exceeds the cap {cap}; pass --cap {n} to force, or use "
                "--use-reduction"
            )
        result = brute_force_medians(profile, args.rule, cap=cap)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "input": args.file,
        "rule": result.rule,
        "optimal_value": result.optimal_value,
        "nodes_explored": result.nodes_explored,
        "medians": [
            {
                "labels": [registry.labels[a] for a in r.order],
                "indices": list(r.order),
            }
            for r in result.medians
        ],
    }
    if args.json or not args.table:
        print(json.dumps(payload, indent=2, sort_keys=True))
    if args.table:
        print(f"optimal value: {result.optimal_value}"
              f"  explored: {result.nodes_explored}")
        for entry in payload["medians"]:
            print("  " + " > ".join(entry["labels"]))
    return 0


def _cmd_verify(args) -> int:
    checks = []
    if args.suite == "lp1":
        outcome = simplex_solve(build_lemma_lp1())
        checks.append(("lemma LP optimum 0", outcome.optimum == 0,
                       f"optimum {outcome.optimum}"))
    elif args.suite == "star":
        if not 2 <= args.max_n <= 5:
            raise InputError("--max-n must lie in 2..5 for the star suite")
        for n in range(2, args.max_n + 1):
            bad = 0
            for k, p, outcome in star_sweep(n):
                if outcome.status != INFEASIBLE:
                    bad += 1
            checks.append(
                (f"n={n} systems all infeasible", bad == 0, f"{bad} feasible")
            )
    elif args.suite == "second-best":
        report = verify_second_best_bounds()
        checks.append(("subset {x,z,t} optimum -1/4",
                       report.xzt_optimum == -0.25,
                       f"optimum {report.xzt_optimum}"))
        checks.append(("subset {y,z,t} optimum 1/4",
                       report.yzt_optimum == 0.25,
                       f"optimum {report.yzt_optimum}"))
        checks.append(("paired subsets optimum 0",
                       report.pair_optimum == 0,
                       f"optimum {report.pair_optimum}"))
    else:
        print("warning: extended runtime (720-variable systems)", file=sys.stderr)
        for a_size in (0, 1, 2):
            ok = verify_six_candidate_rule(a_size)
            checks.append((f"|A|={a_size} systems all infeasible", ok, ""))

    payload = {
        "schema_version": SCHEMA_VERSION,
        "suite": args.suite,
        "checks": [
            {"name": name, "status": "PASS" if ok else "FAIL", "detail": detail}
            for name, ok, detail in checks
        ],
    }
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for c in payload["checks"]:
            detail = f" ({c['detail']})" if c["detail"] else ""
            print(f"{c['name']}: {c['status']}{detail}")
    return 0 if all(ok for _, ok, _ in checks) else 1


def _cmd_simulate(args) -> int:
    methods = tuple(s.strip() for s in args.methods.split(",") if s.strip())
    cfg = SimulationConfig(
        n=args.n,
        m=args.m,
        instance_count=args.instances,
        seed=args.seed,
        methods=methods,
    )
    result = run_simulation(cfg)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(result.to_csv())
    if args.json:
        print(result.to_json())
    else:
        print(result.to_csv(), end="")
    return 0


def _read_ranking_file(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        content = fh.read().strip()
    if not content:
        raise ParseError(f"{path}: empty ranking file")
    sep = ">" if ">" in content else ","
    labels = [tok.strip() for tok in content.split(sep)]
    if any(not tok for tok in labels):
        raise ParseError(f"{path}: malformed ranking {content!r}")
    if len(set(labels)) != len(labels):
        raise ParseError(f"{path}: duplicate alternative in ranking")
    return labels


def _cmd_dist(args) -> int:
    labels_a = _read_ranking_file(args.file_a)
    labels_b = _read_ranking_file(args.file_b)
    if set(labels_a) != set(labels_b):
        raise ParseError("the two rankings name different alternative sets")
    universe = sorted(labels_a)
    index = {lab: i for i, lab in enumerate(universe)}
    n = len(universe)
    a = Ranking(tuple(index[lab] for lab in labels_a))
    b = Ranking(tuple(index[lab] for lab in labels_b))
    d = kwise_distance(a, b.to_vote(), k=args.k)
    print(d)
    return 0


if __name__ == "__main__":
    sys.exit(main())
