"""Reference methods: exact full-enumeration LP, DFS offloading heuristic, local only."""
from __future__ import annotations

from typing import Mapping

import numpy as np

from .constellation import GROUND, DuplexMode, Topology
from .lp import SimplexOptions
from .master import MasterSolution, solve_rmp
from .routing import DEFAULT_ROUTE_CEILING, Route, RouteKind, enumerate_routes
from .scenario import Scenario

EPS = 1e-12


def solve_full_enumeration(
    scenario: Scenario,
    ceiling: int = DEFAULT_ROUTE_CEILING,
    options: SimplexOptions | None = None,
) -> MasterSolution:
    """Solve the LP over every feasible route at once (the optimality oracle)."""
    inter, grd = enumerate_routes(scenario.topology, scenario.hs, scenario.hg, ceiling)
    return solve_rmp(scenario, inter + grd, options=options)


def solve_local_only(scenario: Scenario) -> float:
    a = scenario.weights[0]
    return a * float(np.minimum(scenario.demands, scenario.compute_capacity).sum())


def local_only_solution(scenario: Scenario) -> MasterSolution:
    local = np.minimum(scenario.demands, scenario.compute_capacity).astype(float)
    return MasterSolution(solve_local_only(scenario), local, [], np.zeros(0))


def _link_key(topology: Topology, i: int, j: int) -> tuple[int, int]:
    if topology.duplex_mode is DuplexMode.FULL and GROUND not in (i, j):
        return (i, j)
    return (min(i, j), max(i, j))


def solve_dfs(scenario: Scenario) -> MasterSolution:
    """Greedy depth-first offloading.

    All satellites first compute what they can of their own data. Then, in
    ascending id, each pushes its residual depth-first through the network:
    at every visited satellite the data is computed there if capacity is
    left, then sent down the SGL if that node is a gateway within the
    ground hop budget, then forwarded to ISL neighbours in ascending id.
    Link and compute capacity are reserved as soon as flow is placed.
    """
    topo = scenario.topology
    hs, hg = scenario.hops
    depth = max(hs, hg - 1)
    gateways = set(topo.gateways)
    nbrs = topo.isl_neighbors

    link_left: dict[tuple[int, int], float] = {}
    for e in topo.isl_edges:
        link_left[_link_key(topo, e.u, e.v)] = e.capacity
        link_left[_link_key(topo, e.v, e.u)] = e.capacity
    for e in topo.sgl_edges:
        link_left[(e.u, e.v)] = e.capacity
    comp_left = np.array(scenario.compute_capacity, dtype=float)
    local = np.zeros(scenario.n_satellites)
    flows: dict[Route, float] = {}

    def keys(path: list[int]) -> list[tuple[int, int]]:
        return [_link_key(topo, i, j) for i, j in zip(path[:-1], path[1:])]

    def place(route: Route, amount: float) -> None:
        for k in keys(list(route.vertices)):
            link_left[k] -= amount
        flows[route] = flows.get(route, 0.0) + amount

    def explore(path: list[int], residual: float) -> float:
        u = path[-1]
        h = len(path) - 1
        bottleneck = min((link_left[k] for k in keys(path)), default=np.inf)
        if 1 <= h <= hs:
            q = min(residual, bottleneck, comp_left[u - 1])
            if q > EPS:
                comp_left[u - 1] -= q
                place(Route(RouteKind.INTERSAT, tuple(path)), q)
                residual -= q
                bottleneck -= q
        if residual > EPS and u in gateways and h + 1 <= hg:
            q = min(residual, bottleneck, link_left[(GROUND, u)])
            if q > EPS:
                place(Route(RouteKind.GROUND, tuple(path) + (GROUND,)), q)
                residual -= q
        if h >= depth:
            return residual
        for v in nbrs[u]:
            if residual <= EPS:
                break
            if v in path or link_left[_link_key(topo, u, v)] <= EPS:
                continue
            path.append(v)
            residual = explore(path, residual)
            path.pop()
        return residual

    # every satellite serves its own data before accepting anyone else's
    for s in topo.satellites:
        local[s - 1] = min(scenario.demand(s), comp_left[s - 1])
        comp_left[s - 1] -= local[s - 1]
    for s in topo.satellites:
        residual = scenario.demand(s) - local[s - 1]
        if residual > EPS:
            explore([s], residual)

    routes = list(flows)
    values = np.array([flows[r] for r in routes])
    a, b, c = scenario.weights
    obj = a * local.sum() + sum(
        (b if r.kind is RouteKind.INTERSAT else c) * f for r, f in zip(routes, values)
    )
    return MasterSolution(float(obj), local, routes, values)


def check_feasibility(
    scenario: Scenario,
    local: np.ndarray,
    flows: Mapping[Route, float],
    tol: float = 1e-9,
) -> list[str]:
    """Violations of the link, compute, data and sign constraints (empty when feasible)."""
    topo = scenario.topology
    hs, hg = scenario.hops
    out = []
    load: dict[tuple[int, int], float] = {}
    comp = np.array(local, dtype=float)
    data = np.array(local, dtype=float)
    if np.any(comp < -tol):
        out.append("negative local computation")
    for r, f in flows.items():
        if f < -tol:
            out.append(f"negative flow on {r}")
        lim = hs if r.kind is RouteKind.INTERSAT else hg
        if r.hops > lim or len(set(r.vertices)) != len(r.vertices):
            out.append(f"route {r} breaks hop limit or is not simple")
        for i, j in zip(r.vertices[:-1], r.vertices[1:]):
            if not topo.has_edge(i, j):
                out.append(f"route {r} uses missing link {i}-{j}")
                continue
            k = _link_key(topo, i, j)
            load[k] = load.get(k, 0.0) + f
        data[r.source - 1] += f
        if r.kind is RouteKind.INTERSAT:
            comp[r.terminal - 1] += f
    for e in topo.edges:
        for k in {_link_key(topo, e.u, e.v), _link_key(topo, e.v, e.u)}:
            if load.get(k, 0.0) > e.capacity + tol:
                out.append(f"link {k} overloaded: {load[k]:.6g} > {e.capacity:.6g}")
    for s in topo.satellites:
        if comp[s - 1] > scenario.capacity(s) + tol:
            out.append(f"satellite {s} compute {comp[s - 1]:.6g} > {scenario.capacity(s):.6g}")
        if data[s - 1] > scenario.demand(s) + tol:
            out.append(f"satellite {s} ships {data[s - 1]:.6g} > demand {scenario.demand(s):.6g}")
    return out
