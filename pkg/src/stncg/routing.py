"""Routes, route incidence, and exhaustive hop-bounded enumeration."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .constellation import GROUND, Topology, edge_key

DEFAULT_ROUTE_CEILING = 2_000_000


class RouteKind(str, Enum):
    INTERSAT = "inter-satellite"
    GROUND = "satellite-to-ground"


class RouteError(ValueError):
    pass


class RouteLimitError(RuntimeError):
    """Enumeration would exceed the configured route-count ceiling."""


@dataclass(frozen=True, order=True)
class Route:
    kind: RouteKind
    vertices: tuple[int, ...]

    @property
    def hops(self) -> int:
        return len(self.vertices) - 1

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def terminal(self) -> int:
        return self.vertices[-1]

    @property
    def gateway(self) -> int:
        """Satellite that hands the data to the ground station (ground routes only)."""
        if self.kind is not RouteKind.GROUND:
            raise RouteError("only ground routes have a gateway")
        return self.vertices[-2]

    @property
    def isl_hops(self) -> list[tuple[int, int]]:
        """Directed ISL traversals ``(i, j)`` in path order."""
        vs = self.vertices[:-1] if self.kind is RouteKind.GROUND else self.vertices
        return list(zip(vs[:-1], vs[1:]))

    @property
    def links(self) -> list[tuple[int, int]]:
        """Undirected keys of every edge used, SGL included."""
        return [edge_key(i, j) for i, j in zip(self.vertices[:-1], self.vertices[1:])]

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "vertices": list(self.vertices)}

    @classmethod
    def from_dict(cls, doc: dict) -> "Route":
        return cls(RouteKind(doc["kind"]), tuple(int(v) for v in doc["vertices"]))

    def __str__(self) -> str:
        return "->".join(map(str, self.vertices))


def intersat(*vertices: int) -> Route:
    return Route(RouteKind.INTERSAT, tuple(vertices))


def ground(*vertices: int) -> Route:
    """Ground route through ``vertices``; node 0 is appended when missing."""
    vs = tuple(vertices)
    if not vs or vs[-1] != GROUND:
        vs = vs + (GROUND,)
    return Route(RouteKind.GROUND, vs)


def route_problems(route: Route, topology: Topology, hs: int, hg: int) -> list[str]:
    out = []
    vs = route.vertices
    if len(set(vs)) != len(vs):
        out.append("vertices must be distinct")
    if route.hops < 1:
        out.append("route needs at least one hop")
    if route.kind is RouteKind.INTERSAT:
        if any(not 1 <= v <= topology.n_satellites for v in vs):
            out.append("inter-satellite route may only visit satellites")
        if route.hops > hs:
            out.append(f"{route.hops} hops exceeds Hs={hs}")
    else:
        if vs[-1] != GROUND:
            out.append("ground route must end at node 0")
        if any(not 1 <= v <= topology.n_satellites for v in vs[:-1]):
            out.append("ground route must visit satellites before node 0")
        if route.hops > hg:
            out.append(f"{route.hops} hops exceeds Hg={hg}")
    for i, j in zip(vs[:-1], vs[1:]):
        if not topology.has_edge(i, j):
            out.append(f"no edge {i}-{j}")
    return out


def validate_route(route: Route, topology: Topology, hs: int, hg: int) -> None:
    problems = route_problems(route, topology, hs, hg)
    if problems:
        raise RouteError(f"invalid route {route}: " + "; ".join(problems))


def enumerate_routes(
    topology: Topology, hs: int, hg: int, ceiling: int = DEFAULT_ROUTE_CEILING
) -> tuple[list[Route], list[Route]]:
    """All simple inter-satellite routes with <= hs hops and ground routes with <= hg hops.

    Order is deterministic: by source, then depth-first with ascending
    neighbours. Raises :class:`RouteLimitError` once more than ``ceiling``
    routes would be produced.
    """
    inter: list[Route] = []
    grd: list[Route] = []
    gateways = set(topology.gateways)
    if hs <= 0 and hg <= 0:
        return inter, grd
    depth = max(hs, hg - 1)
    nbrs = topology.isl_neighbors

    def emit(bucket: list[Route], route: Route) -> None:
        bucket.append(route)
        if len(inter) + len(grd) > ceiling:
            raise RouteLimitError(
                f"route enumeration exceeded ceiling of {ceiling} (Hs={hs}, Hg={hg})"
            )

    def walk(path: list[int], on_path: set[int]) -> None:
        u = path[-1]
        hops = len(path) - 1
        if 1 <= hops <= hs:
            emit(inter, Route(RouteKind.INTERSAT, tuple(path)))
        if u in gateways and hops + 1 <= hg:
            emit(grd, Route(RouteKind.GROUND, tuple(path) + (GROUND,)))
        if hops >= depth:
            return
        for v in nbrs[u]:
            if v not in on_path:
                path.append(v)
                on_path.add(v)
                walk(path, on_path)
                on_path.discard(v)
                path.pop()

    for s in topology.satellites:
        walk([s], {s})
    return inter, grd


def count_routes(topology: Topology, hs: int, hg: int, ceiling: int = DEFAULT_ROUTE_CEILING) -> tuple[int, int]:
    inter, grd = enumerate_routes(topology, hs, hg, ceiling)
    return len(inter), len(grd)


@dataclass
class RouteIndex:
    """Incidence lookups keyed by undirected edge and by satellite."""

    routes: list[Route] = field(default_factory=list)
    by_edge: dict[tuple[int, int], list[int]] = field(default_factory=lambda: defaultdict(list))
    start: dict[int, list[int]] = field(default_factory=lambda: defaultdict(list))
    end: dict[int, list[int]] = field(default_factory=lambda: defaultdict(list))
    ground_start: dict[int, list[int]] = field(default_factory=lambda: defaultdict(list))

    def edge_routes(self, i: int, j: int) -> list[Route]:
        return [self.routes[k] for k in self.by_edge.get(edge_key(i, j), [])]

    def started_at(self, sat: int) -> list[Route]:
        return [self.routes[k] for k in self.start.get(sat, [])]

    def ended_at(self, sat: int) -> list[Route]:
        return [self.routes[k] for k in self.end.get(sat, [])]

    def ground_started_at(self, sat: int) -> list[Route]:
        return [self.routes[k] for k in self.ground_start.get(sat, [])]


def build_route_index(routes: Iterable[Route]) -> RouteIndex:
    idx = RouteIndex()
    for k, r in enumerate(routes):
        idx.routes.append(r)
        for key in r.links:
            idx.by_edge[key].append(k)
        if r.kind is RouteKind.INTERSAT:
            idx.start[r.source].append(k)
            idx.end[r.terminal].append(k)
        else:
            idx.ground_start[r.source].append(k)
    return idx


def route_weight(route: Route, alpha, beta: Sequence[float] | dict | None = None) -> float:
    """Sum of arc prices along the ISL part (+ the SGL price for ground routes).

    ``alpha`` maps directed arcs ``(i, j)`` to prices; ``beta`` maps gateways.
    """
    w = 0.0
    for arc in route.isl_hops:
        w += alpha[arc]
    if route.kind is RouteKind.GROUND and beta is not None:
        w += beta[route.gateway]
    return w
