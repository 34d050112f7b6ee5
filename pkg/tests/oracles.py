"""Brute-force references kept independent of the code under test."""
from itertools import combinations

import numpy as np


def vertex_enumeration(c, A, b, tol=1e-9):
    """Best objective over basic feasible points of ``Ax <= b, x >= 0``.

    Returns ``None`` when no vertex is feasible. Integer data is assumed, so a
    nonsingular active set has ``|det| >= 1``.
    """
    c = np.asarray(c, float)
    A = np.asarray(A, float).reshape(len(b), len(c))
    b = np.asarray(b, float)
    m, n = A.shape
    if n == 0:
        return 0.0 if np.all(b >= -tol) else None
    G = np.vstack([A, -np.eye(n)])
    h = np.concatenate([b, np.zeros(n)])
    combos = np.array(list(combinations(range(m + n), n)))
    M = G[combos]
    rhs = h[combos]
    keep = np.abs(np.linalg.det(M)) > 0.5
    if not keep.any():
        return None
    X = np.linalg.solve(M[keep], rhs[keep][..., None])[..., 0]
    ok = np.all(X @ G.T <= h + tol * (1 + np.abs(h)), axis=1)
    if not ok.any():
        return None
    return float((X[ok] @ c).max())


def brute_min_weights(routes, alpha):
    """(source, terminal) -> least summed arc price over the given routes."""
    best = {}
    for r in routes:
        w = sum(alpha[(i, j)] for i, j in zip(r.vertices[:-1], r.vertices[1:]))
        key = (r.source, r.terminal)
        if w < best.get(key, np.inf):
            best[key] = w
    return best


def random_duals(topology, rng, scale=0.3, sparsity=0.5):
    """Nonnegative link and node prices with many exact zeros."""
    from stncg.master import DualPrices

    def draw():
        return 0.0 if rng.random() < sparsity else float(rng.random() * scale)

    alpha = {}
    for e in topology.isl_edges:
        v = draw()
        alpha[(e.u, e.v)] = v
        alpha[(e.v, e.u)] = v
    beta = {g: draw() for g in topology.gateways}
    n = topology.n_satellites + 1
    gamma = np.array([0.0] + [draw() for _ in range(n - 1)])
    zeta = np.array([0.0] + [draw() for _ in range(n - 1)])
    return DualPrices(alpha, beta, gamma, zeta)
