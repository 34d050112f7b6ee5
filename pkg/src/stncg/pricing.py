"""Column pricing via hop-truncated Bellman-Ford on dual link prices."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .constellation import GROUND, Topology
from .master import DualPrices
from .routing import Route, RouteKind

INF = math.inf
DEFAULT_PRICING_TOL = 1e-7
# LP round-off can leave duals a hair below zero
NEGATIVE_SLOP = 1e-9


class PricingError(RuntimeError):
    pass


@dataclass(frozen=True)
class HopDistanceTable:
    """``dist[m, j]``: least arc weight from ``source`` to ``j`` over walks of at most ``m`` arcs.

    ``pred[m, j]`` is the node before ``j`` on a minimizing walk of exactly
    the first level where that value appears, or -1 when the value is carried
    over from level ``m - 1`` (or unreachable).
    """

    source: int
    dist: np.ndarray
    pred: np.ndarray

    @property
    def max_hops(self) -> int:
        return self.dist.shape[0] - 1

    def value(self, target: int, hops: int | None = None) -> float:
        m = self.max_hops if hops is None else hops
        return float(self.dist[m, target])

    def path(self, target: int, hops: int | None = None) -> tuple[int, ...]:
        """Reconstruct a minimizing path with at most ``hops`` arcs."""
        m = self.max_hops if hops is None else hops
        if not math.isfinite(self.dist[m, target]):
            raise PricingError(f"{target} unreachable from {self.source} within {m} hops")
        out = [target]
        j = target
        while True:
            while m > 0 and self.pred[m, j] < 0:
                m -= 1
            if m == 0:
                break
            j = int(self.pred[m, j])
            m -= 1
            out.append(j)
        if out[-1] != self.source:
            raise PricingError(f"broken predecessor chain from {target} to {self.source}")
        path = tuple(reversed(out))
        if len(set(path)) != len(path):
            raise PricingError(f"reconstructed walk {path} is not simple")
        return path


def truncated_bellman_ford(
    topology: Topology,
    alpha: Mapping[tuple[int, int], float],
    source: int,
    hops: int,
) -> HopDistanceTable:
    """Layered Bellman-Ford over ISLs, stopped after ``hops`` relaxation levels.

    Level 1 holds the direct arc prices out of ``source``; level ``m + 1``
    keeps level ``m`` unless some arc ``(i, j)`` gives a strictly smaller
    ``u_m(i) + alpha(i, j)``. Ties go to the lowest-index predecessor.
    """
    if not 1 <= source <= topology.n_satellites:
        raise PricingError(f"source {source} is not a satellite")
    if hops < 0:
        raise PricingError("hop limit must be nonnegative")
    n = topology.n_satellites + 1
    nbrs = topology.isl_neighbors
    arcs = []
    for i in topology.satellites:
        for j in nbrs[i]:
            w = alpha[(i, j)]
            if w < 0:
                if w < -NEGATIVE_SLOP:
                    raise PricingError(f"negative price {w} on arc {(i, j)}")
                w = 0.0
            arcs.append((j, i, w))
    arcs.sort()

    dist = np.full((hops + 1, n), INF)
    pred = np.full((hops + 1, n), -1, dtype=np.int64)
    dist[0, source] = 0.0
    for m in range(1, hops + 1):
        prev = dist[m - 1]
        cur = prev.copy()
        for j, i, w in arcs:
            cand = prev[i] + w
            if cand < cur[j]:
                cur[j] = cand
                pred[m, j] = i
        dist[m] = cur
    # the source never needs a predecessor
    pred[:, source] = -1
    dist[:, source] = 0.0
    return HopDistanceTable(source, dist, pred)


def find_violating_intersat(
    topology: Topology,
    duals: DualPrices,
    hs: int,
    weight: float,
    tol: float = DEFAULT_PRICING_TOL,
    tables: Mapping[int, HopDistanceTable] | None = None,
) -> list[Route]:
    """One least-price route per ordered satellite pair whose column prices below ``weight``."""
    if hs < 1 or weight <= 0:
        return []
    found = []
    for s in topology.satellites:
        tab = tables[s] if tables is not None else truncated_bellman_ford(topology, duals.alpha, s, hs)
        base = weight - duals.gamma[s] - tol
        row = tab.dist[hs]
        for t in topology.satellites:
            if t != s and row[t] < base - duals.zeta[t]:
                found.append(Route(RouteKind.INTERSAT, tab.path(t, hs)))
    return found


def find_violating_ground(
    topology: Topology,
    duals: DualPrices,
    hg: int,
    weight: float,
    tol: float = DEFAULT_PRICING_TOL,
    tables: Mapping[int, HopDistanceTable] | None = None,
) -> list[Route]:
    """Per source, the cheapest gateway exit (ISL path + SGL price) if it prices below ``weight``."""
    if hg < 1 or weight <= 0 or not topology.gateways:
        return []
    found = []
    m = hg - 1
    for s in topology.satellites:
        tab = tables[s] if tables is not None else truncated_bellman_ford(topology, duals.alpha, s, m)
        best, best_g = INF, -1
        for g in topology.gateways:
            v = tab.dist[m, g] + duals.beta[g]
            if v < best:
                best, best_g = v, g
        if best_g > 0 and best < weight - duals.gamma[s] - tol:
            found.append(Route(RouteKind.GROUND, tab.path(best_g, m) + (GROUND,)))
    return found


def price_all(
    topology: Topology,
    duals: DualPrices,
    hs: int,
    hg: int,
    weights,
    tol: float = DEFAULT_PRICING_TOL,
) -> tuple[list[Route], list[Route]]:
    """Both pricing passes sharing one distance table per source."""
    depth = max(hs, hg - 1, 0)
    tables = {s: truncated_bellman_ford(topology, duals.alpha, s, depth) for s in topology.satellites}
    _, b, c = weights
    return (
        find_violating_intersat(topology, duals, hs, b, tol, tables),
        find_violating_ground(topology, duals, hg, c, tol, tables),
    )
