"""Command-line surface.

JSON in, JSON or CSV out. Exit codes: 0 on success, 1 when a
verification fails (invalid instance, failed bound check, missing
certification margin), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .analysis import analyze_instance, classify, profile
from .equilibria import best_response_trajectory, enumerate_nash, worst_nash
from .model import (
    DEFAULT_ENUM_LIMIT,
    RingInstance,
    format_ratio,
    instance_to_dict,
    load_instance,
    max_latency,
    routing_from_strings,
    routing_to_strings,
    validate,
)
from .npverify import default_betas, grid_certify, table_cases, target
from .optimum import exact_optimum, poa
from .search import RandomSpec, SearchSpace, exhaustive_poa_search, random_instance

GRID_TOLERANCE = 1e-6
GAP_THRESHOLD = -0.008


def _read_instance(path: str) -> RingInstance:
    return load_instance(path)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        print(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _routing_doc(instance: RingInstance, routing) -> dict:
    return {
        "routing": list(routing_to_strings(routing)),
        "value": max_latency(instance, routing),
    }


def _cmd_validate(args) -> int:
    instance = load_instance(args.infile)
    problems = validate(instance)
    if problems:
        for line in problems:
            print(line, file=sys.stderr)
        return 1
    print(json.dumps(instance_to_dict(instance), indent=2))
    return 0


def _cmd_nash(args) -> int:
    instance = _read_instance(args.infile)
    if args.all:
        doc = [
            _routing_doc(instance, r)
            for r in enumerate_nash(instance, limit=args.limit)
        ]
    elif args.br:
        start_tokens = args.start.split(",") if args.start else ["cw"] * instance.k
        start = routing_from_strings(start_tokens)
        if len(start) != instance.k:
            raise ValueError(
                f"start routing has {len(start)} entries for {instance.k} agents"
            )
        trajectory = best_response_trajectory(instance, start)
        doc = {
            "start": list(routing_to_strings(trajectory[0])),
            "moves": len(trajectory) - 1,
            **_routing_doc(instance, trajectory[-1]),
        }
    else:
        doc = _routing_doc(instance, worst_nash(instance, limit=args.limit))
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_opt(args) -> int:
    instance = _read_instance(args.infile)
    if args.min_h:
        reference = worst_nash(instance, limit=args.limit)
        result = exact_optimum(instance, limit=args.limit, nash=reference)
    else:
        result = exact_optimum(instance, limit=args.limit)
    doc = {
        "value": result.value,
        "routing": list(routing_to_strings(result.selected)),
        "count": result.count(),
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_poa(args) -> int:
    instance = _read_instance(args.infile)
    result = poa(instance, limit=args.limit)
    if result.degenerate:
        print("degenerate: optimum latency zero")
    else:
        print(format_ratio(result.ratio))
    return 0


def _cmd_classify(args) -> int:
    instance = _read_instance(args.infile)
    nash = worst_nash(instance, limit=args.limit)
    opt = exact_optimum(instance, limit=args.limit, nash=nash).selected
    cls = classify(instance, nash, opt, limit=args.limit)
    doc = {
        "h": cls.h,
        "switching": list(cls.switching),
        "covering": cls.covering,
        "singular": cls.singular,
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_check(args) -> int:
    instance = _read_instance(args.infile)
    report = analyze_instance(instance, limit=args.limit)
    doc = [check.to_dict() for check in report.checks]
    _emit(json.dumps(doc, indent=2), args.out)
    failed = [c for c in report.checks if c.applicable and not c.passed]
    for check in failed:
        print(f"failed: {check.name}", file=sys.stderr)
    return 1 if failed else 0


def _cmd_profile(args) -> int:
    instance = _read_instance(args.infile)
    nash = worst_nash(instance, limit=args.limit)
    opt = exact_optimum(instance, limit=args.limit, nash=nash).selected
    prof = profile(instance, nash, opt)
    print(json.dumps(prof.to_dict(), indent=2))
    return 0


def _fixed(value: float, places: int = 9) -> str:
    rounded = round(value, places) + 0.0  # keep -0.0 out of the reports
    return f"{rounded:.{places}f}"


def _grid_rows(report):
    for cell in report.rows:
        yield {
            "h": report.h,
            "beta": f"{cell.beta:.6f}",
            "branch": cell.branch,
            "x": _fixed(cell.x),
            "y": _fixed(cell.y),
            "z": _fixed(cell.z),
            "f": _fixed(cell.f),
            "g": f"{cell.g:.9e}",
            "margin": _fixed(cell.margin),
        }


_GRID_FIELDS = ["h", "beta", "branch", "x", "y", "z", "f", "g", "margin"]


def _write_csv(rows, fields, out: str | None) -> None:
    handle = open(out, "w", newline="", encoding="utf-8") if out else sys.stdout
    try:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    finally:
        if out:
            handle.close()


def _cmd_npverify(args) -> int:
    betas = default_betas(args.beta_max, 0.01)
    report = grid_certify(args.h, betas, resolution=args.res, jobs=args.jobs)
    _write_csv(_grid_rows(report), _GRID_FIELDS, args.out)
    worst = report.worst
    summary = (
        f"h={args.h} min margin {report.min_margin:.9f} at "
        f"beta={worst.beta:.2f} x={worst.x:.4f} y={worst.y:.4f}"
    )
    print(summary, file=sys.stderr)
    if args.plot:
        if not args.out:
            raise ValueError("--plot requires --out to name the figure")
        from .report import render_grid_figure

        figure = os.path.splitext(args.out)[0] + ".png"
        render_grid_figure(report, figure)
        print(f"figure written to {figure}", file=sys.stderr)
    if args.h == 5:
        # The integer relaxation genuinely fails here; confirming the
        # known gap is the expected outcome.
        found = report.min_margin <= GAP_THRESHOLD
        print(
            "gap confirmed" if found else "expected gap not found",
            file=sys.stderr,
        )
        return 0 if found else 1
    return 0 if report.min_margin >= -GRID_TOLERANCE else 1


_TABLE_FIELDS = [
    "beta", "branch", "x", "y", "z", "feasible", "f",
    "f_plus_2_minus_beta", "margin",
]


def _table_rows(h, betas):
    for beta in betas:
        for cand in table_cases(h, beta):
            yield {
                "beta": f"{beta:.6f}",
                "branch": cand.provenance,
                "x": _fixed(cand.x),
                "y": _fixed(cand.y),
                "z": _fixed(cand.z),
                "feasible": str(cand.feasible).lower(),
                "f": _fixed(cand.f),
                "f_plus_2_minus_beta": _fixed(cand.f + 2.0 - beta),
                "margin": _fixed(cand.f - target(beta)),
            }


def _cmd_tables(args) -> int:
    betas = [args.beta]
    _write_csv(_table_rows(args.h, betas), _TABLE_FIELDS, args.out)
    if args.plot:
        if not args.out:
            raise ValueError("--plot requires --out to name the figure")
        from .report import render_table_figure

        figure = os.path.splitext(args.out)[0] + ".png"
        render_table_figure(args.h, default_betas(2.0, 0.01), figure)
        print(f"figure written to {figure}", file=sys.stderr)
    return 0


def _space_doc(space: SearchSpace) -> dict:
    return {
        "max_n": space.max_n,
        "agents": space.agents,
        "budget": space.budget,
        "degree": space.degree,
    }


def _cmd_search(args) -> int:
    space = SearchSpace(args.n, args.k, args.budget, args.degree)
    result = exhaustive_poa_search(space, jobs=args.jobs)
    doc = {
        "instance": instance_to_dict(result.instance) if result.instance else None,
        "ratio": format_ratio(result.ratio) if result.ratio is not None else None,
        "nash_value": result.nash_value,
        "optimum_value": result.optimum_value,
        "examined": result.examined,
        "degenerate": result.degenerate,
        "space": _space_doc(space),
    }
    print(json.dumps(doc, indent=2))
    if args.out:
        if result.instance is None:
            raise ValueError("no nondegenerate instance found; nothing to write")
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(instance_to_dict(result.instance), fh, indent=2)
            fh.write("\n")
        sidecar = args.out + ".provenance.json"
        with open(sidecar, "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "space": _space_doc(space),
                    "ratio": format_ratio(result.ratio),
                    "examined": result.examined,
                    "degenerate": result.degenerate,
                },
                fh,
                indent=2,
            )
            fh.write("\n")
    return 0


def _cmd_gen(args) -> int:
    spec = RandomSpec(args.n, args.k, args.coeff, args.degree)
    instance = random_instance(spec, args.seed)
    text = json.dumps(instance_to_dict(instance), indent=2)
    _emit(text, args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srr",
        description="Ring routing games: equilibria, optima, ratio bounds, "
        "and numeric certification of the bound analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--in", dest="infile", required=True, metavar="FILE",
                       help="instance JSON file")
        p.add_argument("--limit", type=int, default=DEFAULT_ENUM_LIMIT,
                       help="largest agent count enumerated exhaustively")
        return p

    instance_command("validate", "canonicalize an instance or list its defects")

    p = instance_command("nash", "equilibrium routings")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--all", action="store_true", help="every equilibrium")
    mode.add_argument("--worst", action="store_true",
                      help="highest-cost equilibrium (default)")
    mode.add_argument("--br", action="store_true",
                      help="best-response walk to an equilibrium")
    p.add_argument("--start", metavar="R",
                   help="comma-separated start for --br, e.g. cw,ccw")

    p = instance_command("opt", "exact optimal routing")
    p.add_argument("--min-h", action="store_true",
                   help="among optimal routings, fewest switches from the "
                        "worst equilibrium")

    instance_command("poa", "worst equilibrium cost over optimum cost")
    instance_command("classify", "switch count, covering, singular flags")

    p = instance_command("check", "run every applicable bound check")
    p.add_argument("--out", metavar="FILE", help="write the JSON report here")

    instance_command("profile", "normalized load profile of a covering core")

    p = sub.add_parser("npverify", help="grid-certify the bound minimization")
    p.add_argument("--h", type=int, required=True, dest="h",
                   help="switching-agent count")
    p.add_argument("--beta-max", type=float, default=2.0)
    p.add_argument("--res", type=float, default=1e-2,
                   help="x and y grid resolution")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", metavar="FILE", help="write CSV here")
    p.add_argument("--plot", action="store_true",
                   help="render the margin curve next to --out")

    p = sub.add_parser("tables", help="finite case table for h in {3, 4, 6}")
    p.add_argument("--h", type=int, required=True, choices=(3, 4, 6), dest="h")
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--out", metavar="FILE", help="write CSV here")
    p.add_argument("--plot", action="store_true",
                   help="render the candidate curves next to --out")

    p = sub.add_parser("search", help="exhaustive worst-ratio search")
    p.add_argument("--n", type=int, required=True, help="largest ring size")
    p.add_argument("--k", type=int, required=True, help="agent count")
    p.add_argument("--budget", type=int, required=True,
                   help="total coefficient weight bound")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", metavar="FILE",
                   help="write the winning instance here plus a "
                        ".provenance.json sidecar")

    p = sub.add_parser("gen", help="sample a random instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=8, help="largest ring size")
    p.add_argument("--k", type=int, default=6, help="largest agent count")
    p.add_argument("--coeff", type=int, default=3,
                   help="largest single coefficient")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--out", metavar="FILE")

    return parser


_HANDLERS = {
    "validate": _cmd_validate,
    "nash": _cmd_nash,
    "opt": _cmd_opt,
    "poa": _cmd_poa,
    "classify": _cmd_classify,
    "check": _cmd_check,
    "profile": _cmd_profile,
    "npverify": _cmd_npverify,
    "tables": _cmd_tables,
    "search": _cmd_search,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
