"""Restricted master problem over an activated route pool.

Row layout (fixed for a scenario, so re-solves can reuse a basis):

* one row per ISL (or per direction in full-duplex mode), capacity R^s
* one row per SGL, capacity R^g
* one compute row per satellite, capacity C_i
* one data row per satellite, capacity D_i

Columns are the local-compute variables of satellites 1..N followed by the
pooled routes in insertion order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .constellation import DuplexMode, Topology
from .lp import LpProblem, LpSolution, LpStatus, SimplexOptions, solve
from .routing import Route, RouteKind, validate_route
from .scenario import Scenario


class MasterError(RuntimeError):
    pass


@dataclass(frozen=True)
class RowLayout:
    """Maps links and satellites to constraint rows."""

    topology: Topology

    @cached_property
    def arc_row(self) -> dict[tuple[int, int], int]:
        rows: dict[tuple[int, int], int] = {}
        r = 0
        full = self.topology.duplex_mode is DuplexMode.FULL
        for e in self.topology.isl_edges:
            rows[(e.u, e.v)] = r
            if full:
                r += 1
            rows[(e.v, e.u)] = r
            r += 1
        return rows

    @cached_property
    def n_isl_rows(self) -> int:
        return len(set(self.arc_row.values()))

    @cached_property
    def sgl_row(self) -> dict[int, int]:
        base = self.n_isl_rows
        return {e.v: base + k for k, e in enumerate(self.topology.sgl_edges)}

    @property
    def compute_base(self) -> int:
        return self.n_isl_rows + len(self.topology.sgl_edges)

    @property
    def data_base(self) -> int:
        return self.compute_base + self.topology.n_satellites

    @property
    def n_rows(self) -> int:
        return self.data_base + self.topology.n_satellites

    def compute_row(self, sat: int) -> int:
        return self.compute_base + sat - 1

    def data_row(self, sat: int) -> int:
        return self.data_base + sat - 1

    def rhs(self, scenario: Scenario) -> np.ndarray:
        b = np.empty(self.n_rows)
        for e in self.topology.isl_edges:
            b[self.arc_row[(e.u, e.v)]] = e.capacity
            b[self.arc_row[(e.v, e.u)]] = e.capacity
        for e in self.topology.sgl_edges:
            b[self.sgl_row[e.v]] = e.capacity
        n = self.topology.n_satellites
        b[self.compute_base : self.compute_base + n] = scenario.compute_capacity
        b[self.data_base : self.data_base + n] = scenario.demands
        return b

    def route_rows(self, route: Route) -> list[int]:
        try:
            rows = [self.arc_row[arc] for arc in route.isl_hops]
            if route.kind is RouteKind.GROUND:
                rows.append(self.sgl_row[route.gateway])
            else:
                rows.append(self.compute_row(route.terminal))
        except KeyError as exc:
            raise MasterError(f"route {route} uses unknown link {exc}") from None
        rows.append(self.data_row(route.source))
        return rows

    def row_names(self) -> list[str]:
        names = [""] * self.n_rows
        for (i, j), r in self.arc_row.items():
            if not names[r] or (i < j):
                names[r] = f"isl_{i}_{j}"
        for g, r in self.sgl_row.items():
            names[r] = f"sgl_{g}"
        for s in self.topology.satellites:
            names[self.compute_row(s)] = f"compute_{s}"
            names[self.data_row(s)] = f"data_{s}"
        return names


@dataclass
class ColumnPool:
    """Activated routes; local variables are implicit and always present."""

    routes: list[Route] = field(default_factory=list)
    _pos: dict[Route, int] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.routes)

    def __contains__(self, route: Route) -> bool:
        return route in self._pos

    def position(self, route: Route) -> int:
        return self._pos[route]

    @property
    def n_intersat(self) -> int:
        return sum(r.kind is RouteKind.INTERSAT for r in self.routes)

    @property
    def n_ground(self) -> int:
        return sum(r.kind is RouteKind.GROUND for r in self.routes)

    def add(self, route: Route) -> bool:
        if route in self._pos:
            return False
        self._pos[route] = len(self.routes)
        self.routes.append(route)
        return True


def add_columns(
    pool: ColumnPool, routes: Iterable[Route], scenario: Scenario | None = None
) -> int:
    """Insert routes not yet pooled; returns how many were new.

    With ``scenario`` given, each route is checked against its topology and
    hop limits first and an invalid one raises ``RouteError``.
    """
    routes = list(routes)
    if scenario is not None:
        for r in routes:
            validate_route(r, scenario.topology, scenario.hs, scenario.hg)
    return sum(pool.add(r) for r in routes)


@dataclass(frozen=True)
class DualPrices:
    """Row duals with their link/satellite meaning.

    ``alpha`` is keyed by directed arc (both directions present; equal in
    shared mode), ``beta`` by gateway, ``gamma``/``zeta`` are indexed by
    node id with slot 0 unused.
    """

    alpha: dict[tuple[int, int], float]
    beta: dict[int, float]
    gamma: np.ndarray
    zeta: np.ndarray

    @classmethod
    def from_rows(cls, layout: RowLayout, y: np.ndarray) -> "DualPrices":
        n = layout.topology.n_satellites
        alpha = {arc: float(y[r]) for arc, r in layout.arc_row.items()}
        beta = {g: float(y[r]) for g, r in layout.sgl_row.items()}
        zeta = np.zeros(n + 1)
        gamma = np.zeros(n + 1)
        zeta[1:] = y[layout.compute_base : layout.compute_base + n]
        gamma[1:] = y[layout.data_base : layout.data_base + n]
        return cls(alpha, beta, gamma, zeta)

    def to_rows(self, layout: RowLayout) -> np.ndarray:
        y = np.zeros(layout.n_rows)
        for arc, r in layout.arc_row.items():
            y[r] = self.alpha[arc]
        for g, r in layout.sgl_row.items():
            y[r] = self.beta[g]
        n = layout.topology.n_satellites
        y[layout.compute_base : layout.compute_base + n] = self.zeta[1:]
        y[layout.data_base : layout.data_base + n] = self.gamma[1:]
        return y

    def min_value(self) -> float:
        vals = [*self.alpha.values(), *self.beta.values(), *self.gamma[1:], *self.zeta[1:]]
        return min(vals) if vals else 0.0

    def dual_objective(self, scenario: Scenario) -> float:
        layout = RowLayout(scenario.topology)
        return float(layout.rhs(scenario) @ self.to_rows(layout))

    def route_slack(self, route: Route, weights: Sequence[float]) -> float:
        """Dual-constraint slack of a route column: priced cost minus its weight.

        Negative means the column would improve the master problem.
        """
        _, b, c = weights
        w = sum(self.alpha[arc] for arc in route.isl_hops) + self.gamma[route.source]
        if route.kind is RouteKind.INTERSAT:
            return w + self.zeta[route.terminal] - b
        return w + self.beta[route.gateway] - c

    def local_slack(self, sat: int, a: float) -> float:
        return self.gamma[sat] + self.zeta[sat] - a


@dataclass
class MasterSolution:
    objective: float
    local: np.ndarray  # index = satellite id - 1
    routes: list[Route]
    flows: np.ndarray
    duals: DualPrices | None = None
    lp: LpSolution | None = None

    @property
    def flow_map(self) -> dict[Route, float]:
        return {r: float(f) for r, f in zip(self.routes, self.flows)}

    def layer_volumes(self) -> dict[str, float]:
        inter = sum(f for r, f in zip(self.routes, self.flows) if r.kind is RouteKind.INTERSAT)
        grd = sum(f for r, f in zip(self.routes, self.flows) if r.kind is RouteKind.GROUND)
        return {"local": float(np.sum(self.local)), "intersat": float(inter), "ground": float(grd)}


def build_rmp(scenario: Scenario, pool: ColumnPool | Sequence[Route]) -> LpProblem:
    routes = pool.routes if isinstance(pool, ColumnPool) else list(pool)
    layout = RowLayout(scenario.topology)
    n = scenario.n_satellites
    a, b, c = scenario.weights
    indptr = [0]
    indices: list[int] = []
    for s in range(1, n + 1):
        indices += [layout.compute_row(s), layout.data_row(s)]
        indptr.append(len(indices))
    for r in routes:
        indices += layout.route_rows(r)
        indptr.append(len(indices))
    A = sp.csc_matrix(
        (np.ones(len(indices)), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
        shape=(layout.n_rows, n + len(routes)),
    )
    A.sort_indices()
    obj = np.empty(n + len(routes))
    obj[:n] = a
    obj[n:] = [b if r.kind is RouteKind.INTERSAT else c for r in routes]
    col_names = [f"local_{s}" for s in range(1, n + 1)] + [
        ("fs_" if r.kind is RouteKind.INTERSAT else "fg_") + "_".join(map(str, r.vertices))
        for r in routes
    ]
    return LpProblem(obj, A, layout.rhs(scenario), row_names=layout.row_names(), col_names=col_names)


def solve_rmp(
    scenario: Scenario,
    pool: ColumnPool | Sequence[Route],
    basis: Sequence[int] | None = None,
    options: SimplexOptions | None = None,
) -> MasterSolution:
    routes = list(pool.routes if isinstance(pool, ColumnPool) else pool)
    problem = build_rmp(scenario, routes)
    sol = solve(problem, options, basis=basis)
    if sol.status is not LpStatus.OPTIMAL and basis is not None:
        sol = solve(problem, options)
    if sol.status is not LpStatus.OPTIMAL:
        # x = 0 is always feasible and every column is bounded by a data row
        raise MasterError(f"restricted master LP ended with status {sol.status.value}")
    n = scenario.n_satellites
    layout = RowLayout(scenario.topology)
    return MasterSolution(
        objective=sol.objective,
        local=sol.x[:n].copy(),
        routes=routes,
        flows=sol.x[n:].copy(),
        duals=DualPrices.from_rows(layout, sol.y),
        lp=sol,
    )
