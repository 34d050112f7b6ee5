"""Walker-Star / +Grid constellation graphs.

Node 0 is the ground station, satellites are numbered 1..N. Satellite
``(plane p, slot k)`` of a Walker grid gets id ``1 + p * sats_per_plane + k``.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable

GROUND = 0


class LinkKind(str, Enum):
    ISL = "ISL"
    SGL = "SGL"


class DuplexMode(str, Enum):
    SHARED = "shared"
    FULL = "full-duplex"


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    """Undirected link. Endpoints are stored with ``u < v``, so SGLs have ``u == 0``."""

    u: int
    v: int
    kind: LinkKind
    capacity: float

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v)

    def other(self, node: int) -> int:
        if node == self.u:
            return self.v
        if node == self.v:
            return self.u
        raise TopologyError(f"node {node} is not an endpoint of {self.key}")


def edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Topology:
    n_satellites: int
    edges: tuple[Edge, ...]
    gateways: tuple[int, ...]
    planes: int | None = None
    sats_per_plane: int | None = None
    seam_wrap: bool = True
    duplex_mode: DuplexMode = DuplexMode.SHARED

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(range(self.n_satellites + 1))

    @property
    def satellites(self) -> range:
        return range(1, self.n_satellites + 1)

    @cached_property
    def isl_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.kind is LinkKind.ISL)

    @cached_property
    def sgl_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.kind is LinkKind.SGL)

    @cached_property
    def _edge_map(self) -> dict[tuple[int, int], Edge]:
        return {e.key: e for e in self.edges}

    @cached_property
    def _adjacency(self) -> dict[int, tuple[tuple[int, Edge], ...]]:
        adj: dict[int, list[tuple[int, Edge]]] = {n: [] for n in self.nodes}
        for e in self.edges:
            if e.u in adj and e.v in adj:
                adj[e.u].append((e.v, e))
                adj[e.v].append((e.u, e))
        return {n: tuple(sorted(lst, key=lambda t: t[0])) for n, lst in adj.items()}

    @cached_property
    def isl_neighbors(self) -> dict[int, tuple[int, ...]]:
        """Satellite -> ascending ISL neighbour ids."""
        return {
            s: tuple(n for n, e in self._adjacency[s] if e.kind is LinkKind.ISL)
            for s in self.satellites
        }

    def has_node(self, node: int) -> bool:
        return 0 <= node <= self.n_satellites

    def edge(self, i: int, j: int) -> Edge:
        try:
            return self._edge_map[edge_key(i, j)]
        except KeyError:
            raise TopologyError(f"no edge between {i} and {j}") from None

    def has_edge(self, i: int, j: int) -> bool:
        return edge_key(i, j) in self._edge_map

    def neighbors(self, node: int) -> tuple[tuple[int, Edge], ...]:
        return neighbors(self, node)

    def to_dict(self) -> dict:
        return {
            "n_satellites": self.n_satellites,
            "planes": self.planes,
            "sats_per_plane": self.sats_per_plane,
            "seam_wrap": self.seam_wrap,
            "duplex_mode": self.duplex_mode.value,
            "gateways": list(self.gateways),
            "edges": [
                {"u": e.u, "v": e.v, "kind": e.kind.value, "capacity": e.capacity}
                for e in self.edges
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "Topology":
        try:
            edges = [
                make_edge(int(e["u"]), int(e["v"]), LinkKind(e["kind"]), float(e["capacity"]))
                for e in doc["edges"]
            ]
            n = int(doc["n_satellites"])
        except (KeyError, TypeError, ValueError) as exc:
            raise TopologyError(f"malformed topology document: {exc}") from exc
        gateways = doc.get("gateways")
        if gateways is None:
            gateways = [e.v for e in edges if e.kind is LinkKind.SGL]
        return cls(
            n_satellites=n,
            edges=tuple(edges),
            gateways=tuple(sorted(int(g) for g in gateways)),
            planes=doc.get("planes"),
            sats_per_plane=doc.get("sats_per_plane"),
            seam_wrap=bool(doc.get("seam_wrap", True)),
            duplex_mode=DuplexMode(doc.get("duplex_mode", DuplexMode.SHARED.value)),
        )


def make_edge(i: int, j: int, kind: LinkKind, capacity: float) -> Edge:
    u, v = edge_key(i, j)
    return Edge(u, v, LinkKind(kind), float(capacity))


def satellite_id(plane: int, slot: int, sats_per_plane: int) -> int:
    return 1 + plane * sats_per_plane + slot


def build_walker_star(
    planes: int,
    sats_per_plane: int,
    gateway_phase: int = 0,
    seam_wrap: bool = True,
    isl_capacity: float = 5.0,
    sgl_capacity: float = 1.0,
    duplex_mode: DuplexMode | str = DuplexMode.SHARED,
) -> Topology:
    """Build a +Grid Walker-Star topology with one gateway per plane.

    Satellite ``(p, k)`` links to ``(p, k +- 1 mod K)`` and to ``(p +- 1, k)``;
    the plane index wraps only when ``seam_wrap`` is set. The satellite at
    slot ``gateway_phase`` of every plane gets an SGL to the ground station.
    """
    if planes < 3 or sats_per_plane < 3:
        raise TopologyError(
            f"need at least 3 planes and 3 satellites per plane, got {planes}x{sats_per_plane}"
        )
    if not 0 <= gateway_phase < sats_per_plane:
        raise TopologyError(f"gateway_phase {gateway_phase} outside 0..{sats_per_plane - 1}")
    if isl_capacity <= 0 or sgl_capacity <= 0:
        raise TopologyError("link capacities must be positive")

    K = sats_per_plane
    keys: set[tuple[int, int]] = set()
    for p in range(planes):
        for k in range(K):
            u = satellite_id(p, k, K)
            keys.add(edge_key(u, satellite_id(p, (k + 1) % K, K)))
            if p + 1 < planes or seam_wrap:
                keys.add(edge_key(u, satellite_id((p + 1) % planes, k, K)))
    edges = [make_edge(u, v, LinkKind.ISL, isl_capacity) for u, v in sorted(keys)]
    gateways = tuple(satellite_id(p, gateway_phase, K) for p in range(planes))
    edges += [make_edge(GROUND, g, LinkKind.SGL, sgl_capacity) for g in gateways]
    return Topology(
        n_satellites=planes * K,
        edges=tuple(edges),
        gateways=gateways,
        planes=planes,
        sats_per_plane=K,
        seam_wrap=seam_wrap,
        duplex_mode=DuplexMode(duplex_mode),
    )


def build_topology(
    n_satellites: int,
    isl: Iterable[tuple[int, int]],
    gateways: Iterable[int] = (),
    isl_capacity: float = 5.0,
    sgl_capacity: float = 1.0,
    duplex_mode: DuplexMode | str = DuplexMode.SHARED,
) -> Topology:
    """Arbitrary satellite graph; handy for small hand-checkable instances."""
    keys = sorted({edge_key(i, j) for i, j in isl})
    gws = tuple(sorted(set(gateways)))
    edges = [make_edge(u, v, LinkKind.ISL, isl_capacity) for u, v in keys]
    edges += [make_edge(GROUND, g, LinkKind.SGL, sgl_capacity) for g in gws]
    return Topology(
        n_satellites=n_satellites,
        edges=tuple(edges),
        gateways=gws,
        seam_wrap=False,
        duplex_mode=DuplexMode(duplex_mode),
    )


def neighbors(topology: Topology, node: int) -> tuple[tuple[int, Edge], ...]:
    """``(neighbour, edge)`` pairs in ascending neighbour order."""
    if not topology.has_node(node):
        raise TopologyError(f"unknown node {node}")
    return topology._adjacency[node]


def validate_topology(topology: Topology) -> list[str]:
    """Return a list of violated invariants (empty when the topology is sound)."""
    report: list[str] = []
    n = topology.n_satellites
    seen: set[tuple[int, int]] = set()
    for e in topology.edges:
        if not (0 <= e.u <= n and 0 <= e.v <= n) or e.u == e.v:
            report.append(f"edge {e.key}: endpoints must be distinct existing nodes")
        if e.key in seen:
            report.append(f"edge {e.key}: duplicate edge")
        seen.add(e.key)
        if not e.capacity > 0:
            report.append(f"edge {e.key}: capacity must be positive")
        if e.kind is LinkKind.SGL and e.u != GROUND:
            report.append(f"edge {e.key}: SGL endpoint must be ground")
        if e.kind is LinkKind.ISL and e.u == GROUND:
            report.append(f"edge {e.key}: ISL must not touch ground")

    sgl_sats = sorted(e.v for e in topology.sgl_edges)
    if any(not 1 <= g <= n for g in topology.gateways):
        report.append("gateway set must be a subset of satellites")
    if len(topology.gateways) != len(topology.sgl_edges) or sorted(topology.gateways) != sgl_sats:
        report.append("gateways must match SGL edges one-to-one")

    if n > 0:
        adj: dict[int, list[int]] = {s: [] for s in range(1, n + 1)}
        for e in topology.isl_edges:
            if e.u in adj and e.v in adj:
                adj[e.u].append(e.v)
                adj[e.v].append(e.u)
        seen_nodes = {1}
        queue = deque([1])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen_nodes:
                    seen_nodes.add(v)
                    queue.append(v)
        if len(seen_nodes) != n:
            report.append("ISL graph connected")
        if topology.planes is not None and topology.seam_wrap:
            bad = [s for s, lst in adj.items() if len(lst) != 4]
            if bad:
                report.append(f"torus ISL degree must be 4 (violated at {bad[:5]})")
    return report
