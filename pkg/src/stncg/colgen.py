"""Column-generation driver and the post-hoc dual-feasibility audit."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .lp import SimplexOptions
from .master import ColumnPool, DualPrices, MasterSolution, add_columns, solve_rmp
from .pricing import DEFAULT_PRICING_TOL, price_all
from .routing import DEFAULT_ROUTE_CEILING, Route, RouteLimitError, enumerate_routes
from .scenario import Scenario

logger = logging.getLogger(__name__)


@dataclass
class ColGenOptions:
    tol: float = DEFAULT_PRICING_TOL
    max_iters: int = 500
    seed_pool: bool = False  # start with every 1-hop route instead of an empty pool
    stall_iters: int = 5
    max_tightenings: int = 3
    warm_start: bool = True
    lp: SimplexOptions = field(default_factory=SimplexOptions)


@dataclass
class TraceRow:
    iter: int
    n_columns: int
    objective: float
    n_violations_found: int
    n_added: int = 0
    lp_iterations: int = 0


@dataclass
class ColGenResult:
    status: str  # "optimal", "iteration-limit" or "stalled"
    objective: float
    master: MasterSolution
    pool: ColumnPool
    trace: list[TraceRow]
    wall_time: float
    final_tol: float

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def converged(self) -> bool:
        return self.status == "optimal"

    @property
    def local(self) -> np.ndarray:
        return self.master.local

    @property
    def duals(self) -> DualPrices:
        return self.master.duals

    @property
    def flows(self) -> dict[Route, float]:
        return self.master.flow_map

    @property
    def n_intersat_activated(self) -> int:
        return self.pool.n_intersat

    @property
    def n_ground_activated(self) -> int:
        return self.pool.n_ground

    @property
    def n_activated(self) -> int:
        return len(self.pool)

    def layer_volumes(self) -> dict[str, float]:
        return self.master.layer_volumes()


def one_hop_routes(scenario: Scenario) -> list[Route]:
    inter, grd = enumerate_routes(scenario.topology, min(scenario.hs, 1), min(scenario.hg, 1))
    return inter + grd


def run_column_generation(scenario: Scenario, options: ColGenOptions | None = None) -> ColGenResult:
    """Alternate master solves and pricing until no column prices out.

    Each round adds, for every ordered satellite pair, the least-price
    inter-satellite route that violates its dual constraint, and for every
    source the least-price ground route. Termination with no violations
    certifies optimality over the full route universe.
    """
    opts = options or ColGenOptions()
    t0 = time.perf_counter()
    pool = ColumnPool()
    if opts.seed_pool:
        add_columns(pool, one_hop_routes(scenario))
    tol = opts.tol
    trace: list[TraceRow] = []
    basis = None
    best = -np.inf
    flat = 0
    tightenings = 0
    status = "iteration-limit"
    master = None
    for it in range(1, opts.max_iters + 1):
        master = solve_rmp(scenario, pool, basis=basis if opts.warm_start else None, options=opts.lp)
        basis = master.lp.basis
        inter, grd = price_all(
            scenario.topology, master.duals, scenario.hs, scenario.hg, scenario.weights, tol
        )
        found = inter + grd
        added = add_columns(pool, found)
        trace.append(
            TraceRow(it, len(master.routes), master.objective, len(found), added, master.lp.iterations)
        )
        logger.debug("iter %d: obj=%.9g pool=%d found=%d", it, master.objective, len(pool), len(found))
        if not found:
            status = "optimal"
            break
        if added == 0:
            # every violator is already pooled: the LP and the pricing disagree within round-off
            logger.warning("pricing re-found pooled columns at tol=%g; stopping", tol)
            status = "stalled"
            break
        if master.objective > best + tol:
            best = master.objective
            flat = 0
        else:
            flat += 1
            if flat >= opts.stall_iters:
                if tightenings >= opts.max_tightenings:
                    status = "stalled"
                    break
                tol *= 10.0
                tightenings += 1
                flat = 0
                logger.info("no progress for %d rounds, pricing tol -> %g", opts.stall_iters, tol)
    else:
        logger.warning("column generation hit max_iters=%d", opts.max_iters)
    # the final master must cover the pool
    if status != "optimal" and master is not None and len(master.routes) != len(pool):
        master = solve_rmp(scenario, pool, basis=basis, options=opts.lp)
    return ColGenResult(
        status=status,
        objective=master.objective,
        master=master,
        pool=pool,
        trace=trace,
        wall_time=time.perf_counter() - t0,
        final_tol=tol,
    )


@dataclass
class AuditReport:
    checked_intersat: int = 0
    checked_ground: int = 0
    checked_local: int = 0
    violations: list[tuple[Route | int, float]] = field(default_factory=list)
    min_dual: float = 0.0
    primal_objective: float = float("nan")
    dual_objective: float = float("nan")
    skipped: str | None = None

    @property
    def n_violations(self) -> int:
        return len(self.violations)

    @property
    def ok(self) -> bool:
        return self.skipped is None and not self.violations

    @property
    def duality_gap(self) -> float:
        return abs(self.primal_objective - self.dual_objective)


def audit_optimality(
    scenario: Scenario,
    result: ColGenResult | MasterSolution,
    tol: float = DEFAULT_PRICING_TOL,
    duals: DualPrices | None = None,
    ceiling: int = DEFAULT_ROUTE_CEILING,
) -> AuditReport:
    """Check every dual constraint over the fully enumerated route sets.

    ``duals`` overrides the result's own prices (used for negative controls).
    Local-compute constraints are checked too. Skips with a notice when the
    route universe is larger than ``ceiling``.
    """
    master = result.master if isinstance(result, ColGenResult) else result
    y = duals or master.duals
    report = AuditReport(primal_objective=master.objective, dual_objective=y.dual_objective(scenario))
    report.min_dual = y.min_value()
    try:
        inter, grd = enumerate_routes(scenario.topology, scenario.hs, scenario.hg, ceiling)
    except RouteLimitError as exc:
        report.skipped = str(exc)
        return report
    for r in inter + grd:
        slack = y.route_slack(r, scenario.weights)
        if slack < -tol:
            report.violations.append((r, slack))
    report.checked_intersat = len(inter)
    report.checked_ground = len(grd)
    a = scenario.weights[0]
    for s in scenario.topology.satellites:
        slack = y.local_slack(s, a)
        if slack < -tol:
            report.violations.append((s, slack))
    report.checked_local = scenario.n_satellites
    if report.min_dual < -tol:
        report.violations.append((-1, report.min_dual))
    return report


def result_to_dict(scenario: Scenario, solution: ColGenResult | MasterSolution, method: str = "colgen") -> dict:
    """JSON-ready result document shared by column generation and the baselines."""
    master = solution.master if isinstance(solution, ColGenResult) else solution
    doc = {
        "method": method,
        "objective": master.objective,
        "hops": list(scenario.hops),
        "layers": master.layer_volumes(),
        "local": {str(s): float(master.local[s - 1]) for s in scenario.topology.satellites},
        "routes": [
            {**r.to_dict(), "flow": float(f)}
            for r, f in zip(master.routes, master.flows)
            if f > 0
        ],
    }
    if isinstance(solution, ColGenResult):
        doc.update(
            status=solution.status,
            iterations=solution.iterations,
            activated={
                "intersat": solution.n_intersat_activated,
                "ground": solution.n_ground_activated,
            },
            wall_time=solution.wall_time,
            trace=[vars(t) for t in solution.trace],
        )
    return doc

