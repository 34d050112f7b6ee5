"""Command-line entry point: ``stncg <subcommand>``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from . import baselines, experiments
from .colgen import ColGenOptions, audit_optimality, result_to_dict, run_column_generation
from .constellation import build_walker_star
from .lp import to_mps
from .master import build_rmp
from .routing import DEFAULT_ROUTE_CEILING
from .scenario import Scenario, load_scenario, reference_scenario


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _scenario(args) -> Scenario:
    if args.scenario:
        sc = load_scenario(Path(args.scenario))
        if args.seed is not None:
            sc = experiments.reseed(sc, args.seed)
    else:
        sc = reference_scenario(seed=args.seed or 0)
    hs = args.hs if args.hs is not None else sc.hs
    hg = args.hg if args.hg is not None else (args.hs if args.hs is not None else sc.hg)
    return sc.with_hops(hs, hg) if (hs, hg) != sc.hops else sc


def _emit_json(doc, path):
    with _output(path) as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _emit_rows(kind, rows, args):
    if args.format == "json":
        _emit_json(rows, args.out)
    else:
        with _output(args.out) as fh:
            experiments.write_csv(kind, rows, fh)


def _int_list(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out += list(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_topology(args):
    topo = build_walker_star(
        args.planes, args.sats_per_plane, args.gateway_phase, not args.no_seam_wrap,
        args.isl, args.sgl, args.duplex,
    )
    _emit_json(topo.to_dict(), args.out)


def cmd_enumerate(args):
    sc = _scenario(args)
    if args.hs is not None:
        pairs = [(sc.hs, sc.hg)]
    else:
        pairs = [(h, h) for h in _int_list(args.h)]
    _emit_rows("enumerate", experiments.enumerate_rows(sc, pairs, args.enumeration_ceiling), args)


def cmd_solve(args):
    sc = _scenario(args)
    res = run_column_generation(sc, ColGenOptions(seed_pool=args.seed_pool))
    if args.mps:
        Path(args.mps).write_text(to_mps(build_rmp(sc, res.pool)))
    if args.format == "csv":
        with _output(args.out) as fh:
            experiments.write_csv("trace", [vars(t) for t in res.trace], fh)
    else:
        _emit_json(result_to_dict(sc, res), args.out)


def cmd_baseline(args):
    sc = _scenario(args)
    if args.method == "full":
        sol = baselines.solve_full_enumeration(sc, args.enumeration_ceiling)
    elif args.method == "dfs":
        sol = baselines.solve_dfs(sc)
    else:
        sol = baselines.local_only_solution(sc)
    _emit_json(result_to_dict(sc, sol, method=args.method), args.out)


def cmd_table2(args):
    sc = _scenario(args)
    rows = experiments.table2(sc, _int_list(args.h), args.enumeration_ceiling, jobs=args.jobs)
    _emit_rows("table2", rows, args)


def cmd_hop_sweep(args):
    sc = _scenario(args)
    seeds = list(range(args.seed or 0, (args.seed or 0) + args.n_seeds))
    rows = experiments.hop_sweep(sc, _int_list(args.h), seeds, jobs=args.jobs)
    _emit_rows("hop-sweep", rows, args)


def cmd_demand_sweep(args):
    sc = _scenario(args)
    seeds = list(range(args.seed or 0, (args.seed or 0) + args.n_seeds))
    means = [float(m) for m in args.means.split(",")]
    h = args.hs if args.hs is not None else 3
    rows = experiments.demand_sweep(sc, means, seeds, h, jobs=args.jobs)
    _emit_rows("demand-sweep", rows, args)


def cmd_audit(args):
    sc = _scenario(args)
    res = run_column_generation(sc)
    rep = audit_optimality(sc, res, ceiling=args.enumeration_ceiling)
    doc = {
        "status": res.status,
        "objective": res.objective,
        "dual_objective": rep.dual_objective,
        "checked": {"intersat": rep.checked_intersat, "ground": rep.checked_ground, "local": rep.checked_local},
        "violations": [[str(r), v] for r, v in rep.violations],
        "skipped": rep.skipped,
    }
    _emit_json(doc, args.out)
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario JSON document (default: built-in reference instance)")
    common.add_argument("--seed", type=int, default=None, help="demand seed (u64)")
    common.add_argument("--hs", type=int, default=None)
    common.add_argument("--hg", type=int, default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--enumeration-ceiling", type=int, default=DEFAULT_ROUTE_CEILING)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="stncg", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("topology", parents=[common], help="emit a Walker-Star topology as JSON")
    t.add_argument("--planes", type=int, default=6)
    t.add_argument("--sats-per-plane", type=int, default=5)
    t.add_argument("--gateway-phase", type=int, default=0)
    t.add_argument("--no-seam-wrap", action="store_true")
    t.add_argument("--isl", type=float, default=5.0)
    t.add_argument("--sgl", type=float, default=1.0)
    t.add_argument("--duplex", choices=("shared", "full-duplex"), default="shared")
    t.set_defaults(func=cmd_topology)

    e = sub.add_parser("enumerate", parents=[common], help="route counts per hop limit")
    e.add_argument("--h", default="1-5", help="hop limits for Hs = Hg rows, e.g. 1-5 or 1,3")
    e.set_defaults(func=cmd_enumerate, default_format="csv")

    s = sub.add_parser("solve", parents=[common], help="column generation")
    s.add_argument("--seed-pool", action="store_true", help="start from all 1-hop routes")
    s.add_argument("--mps", help="also write the final master LP in MPS format")
    s.set_defaults(func=cmd_solve, default_format="json")

    b = sub.add_parser("baseline", parents=[common], help="full enumeration, DFS or local-only")
    b.add_argument("--method", choices=("full", "dfs", "local"), default="dfs")
    b.set_defaults(func=cmd_baseline, default_format="json")

    t2 = sub.add_parser("table2", parents=[common], help="enumerated vs activated columns")
    t2.add_argument("--h", default="1-5")
    t2.set_defaults(func=cmd_table2, default_format="csv")

    hs = sub.add_parser("hop-sweep", parents=[common], help="objective and layer volumes vs hop limit")
    hs.add_argument("--h", default="0-5")
    hs.add_argument("--n-seeds", type=int, default=20)
    hs.set_defaults(func=cmd_hop_sweep, default_format="csv")

    ds = sub.add_parser("demand-sweep", parents=[common], help="objective vs demand mean")
    ds.add_argument("--means", default="5,10,20,40,60,80,100")
    ds.add_argument("--n-seeds", type=int, default=20)
    ds.set_defaults(func=cmd_demand_sweep, default_format="csv")

    a = sub.add_parser("audit", parents=[common], help="dual feasibility over all routes")
    a.set_defaults(func=cmd_audit, default_format="json")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = args.default_format if hasattr(args, "default_format") else "json"
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    rc = args.func(args)
    return int(rc or 0)


if __name__ == "__main__":
    sys.exit(main())
