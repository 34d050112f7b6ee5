"""Scale-reduction table, hop sweep and demand sweep, plus CSV emission."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .baselines import solve_dfs, solve_local_only
from .colgen import ColGenOptions, run_column_generation
from .routing import DEFAULT_ROUTE_CEILING, count_routes
from .scenario import (
    REFERENCE_DEMAND_MEAN,
    REFERENCE_DEMAND_SIGMA,
    DemandModel,
    Scenario,
    generate_demands,
    reference_scenario,
)

SCHEMA_VERSION = 1

SCHEMAS = {
    "enumerate": ["hs", "hg", "n_intersat", "n_ground", "total"],
    "table2": ["hs", "hg", "enumerated", "activated", "reduction_pct"],
    "hop-sweep": ["h", "n_seeds", "objective", "local", "intersat", "ground", "local_only", "gain"],
    "demand-sweep": ["mean", "n_seeds", "colgen", "dfs", "local_only"],
    "trace": ["iter", "n_columns", "objective", "n_violations_found"],
}


def write_csv(kind: str, rows: Iterable[dict], out: TextIO) -> None:
    """Emit ``# stncg/<kind> v<N>`` followed by the header row and the data."""
    cols = SCHEMAS[kind]
    out.write(f"# stncg/{kind} v{SCHEMA_VERSION}\n")
    w = csv.DictWriter(out, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: _fmt(row[k]) for k in cols})


def csv_text(kind: str, rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    write_csv(kind, rows, buf)
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def _fmt(v):
    if isinstance(v, float):
        return repr(round(v, 12))
    return v


def reseed(template: Scenario, seed: int, mean: float | None = None) -> Scenario:
    """Same instance with demands redrawn from ``seed`` (and optionally a new mean)."""
    model = template.demand_model or DemandModel(REFERENCE_DEMAND_MEAN, REFERENCE_DEMAND_SIGMA)
    model = replace(model, seed=int(seed), mean=float(mean) if mean is not None else model.mean)
    d = generate_demands(model, template.n_satellites)
    return replace(template, demands=tuple(float(x) for x in d), demand_model=model)


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def enumerate_rows(template: Scenario, pairs: Iterable[tuple[int, int]], ceiling: int = DEFAULT_ROUTE_CEILING) -> list[dict]:
    rows = []
    for hs, hg in pairs:
        ni, ng = count_routes(template.topology, hs, hg, ceiling)
        rows.append({"hs": hs, "hg": hg, "n_intersat": ni, "n_ground": ng, "total": ni + ng})
    return rows


def _table2_point(args) -> dict:
    sc, h, ceiling, opts = args
    sc = sc.with_hops(h)
    ni, ng = count_routes(sc.topology, h, h, ceiling)
    enumerated = ni + ng
    res = run_column_generation(sc, opts)
    activated = res.n_activated
    reduction = 100.0 * (1.0 - activated / enumerated) if enumerated else 0.0
    return {
        "hs": h,
        "hg": h,
        "enumerated": enumerated,
        "activated": activated,
        "reduction_pct": reduction,
        "objective": res.objective,
        "status": res.status,
    }


def table2(
    template: Scenario | None = None,
    h_values: Sequence[int] = (1, 2, 3, 4, 5),
    ceiling: int = DEFAULT_ROUTE_CEILING,
    options: ColGenOptions | None = None,
    jobs: int = 1,
) -> list[dict]:
    """Enumerated vs activated column counts per hop limit (Hs = Hg)."""
    sc = template or reference_scenario()
    return _map(_table2_point, [(sc, h, ceiling, options) for h in h_values], jobs)


def _hop_point(args) -> dict:
    sc, h, seed, opts = args
    s = reseed(sc, seed).with_hops(h)
    res = run_column_generation(s, opts)
    lv = res.layer_volumes()
    return {"objective": res.objective, "local_only": solve_local_only(s), **lv}


def hop_sweep(
    template: Scenario | None = None,
    h_values: Sequence[int] = (0, 1, 2, 3, 4, 5),
    seeds: Sequence[int] = tuple(range(20)),
    options: ColGenOptions | None = None,
    jobs: int = 1,
) -> list[dict]:
    """Mean objective and per-layer computed volume per hop limit, averaged over seeds."""
    sc = template or reference_scenario()
    points = [(sc, h, s, options) for h in h_values for s in seeds]
    results = _map(_hop_point, points, jobs)
    rows = []
    k = len(seeds)
    for n, h in enumerate(h_values):
        chunk = results[n * k : (n + 1) * k]
        mean = {key: float(np.mean([r[key] for r in chunk])) for key in chunk[0]}
        mean["gain"] = float(np.mean([r["objective"] / r["local_only"] for r in chunk if r["local_only"] > 0]))
        rows.append({"h": h, "n_seeds": k, **mean})
    return rows


def _demand_point(args) -> dict:
    sc, mean, seed, h, opts = args
    s = reseed(sc, seed, mean).with_hops(h)
    return {
        "colgen": run_column_generation(s, opts).objective,
        "dfs": solve_dfs(s).objective,
        "local_only": solve_local_only(s),
    }


def demand_sweep(
    template: Scenario | None = None,
    means: Sequence[float] = (5, 10, 20, 40, 60, 80, 100),
    seeds: Sequence[int] = tuple(range(20)),
    h: int = 3,
    options: ColGenOptions | None = None,
    jobs: int = 1,
) -> list[dict]:
    """Column generation, DFS and local-only objectives as the demand mean grows."""
    sc = template or reference_scenario()
    points = [(sc, m, s, h, options) for m in means for s in seeds]
    results = _map(_demand_point, points, jobs)
    rows = []
    k = len(seeds)
    for n, m in enumerate(means):
        chunk = results[n * k : (n + 1) * k]
        rows.append(
            {"mean": float(m), "n_seeds": k, **{key: float(np.mean([r[key] for r in chunk])) for key in chunk[0]}}
        )
    return rows
