"""Revised primal simplex for ``max c'x  s.t.  Ax <= b, x >= 0``.

The basis inverse is kept explicitly and updated by elementary row
operations, with a fresh inversion every ``refactor_every`` pivots and
before the final answer is reported. Rows with a negative right-hand side
get an artificial column and a phase-1 pass; otherwise the all-slack basis
is the starting point.

Basis labels are stable across column appends: structural column ``j`` is
``j`` and the slack of row ``i`` is ``-(i + 1)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration-limit"


class LpError(ValueError):
    """Malformed problem data."""


@dataclass
class LpProblem:
    c: np.ndarray
    A: sp.csc_matrix
    b: np.ndarray
    row_names: list[str] | None = None
    col_names: list[str] | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        if sp.issparse(self.A):
            self.A = sp.csc_matrix(self.A, dtype=float)
        else:
            arr = np.asarray(self.A, dtype=float)
            if arr.size == 0:
                arr = arr.reshape(len(self.b), len(self.c))
            self.A = sp.csc_matrix(arr)
        m, n = self.A.shape
        if (m, n) != (len(self.b), len(self.c)):
            raise LpError(f"A is {m}x{n} but b has {len(self.b)} and c has {len(self.c)} entries")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.b))):
            raise LpError("objective and right-hand side must be finite")
        if not np.all(np.isfinite(self.A.data)):
            raise LpError("constraint matrix must be finite")
        if self.row_names is not None and len(self.row_names) != m:
            raise LpError("row_names length mismatch")
        if self.col_names is not None and len(self.col_names) != n:
            raise LpError("col_names length mismatch")

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    @property
    def n_cols(self) -> int:
        return self.A.shape[1]


@dataclass
class SimplexOptions:
    pivot_rule: str = "dantzig"  # or "bland"
    feasibility_tol: float = 1e-9
    optimality_tol: float = 1e-9
    pivot_tol: float = 1e-9
    max_iterations: int = 100_000
    stall_limit: int = 50
    refactor_every: int = 64


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray
    y: np.ndarray
    objective: float
    iterations: int = 0
    basis: list[int] = field(default_factory=list)
    reduced_costs: np.ndarray | None = None
    slack: np.ndarray | None = None
    ray: np.ndarray | None = None
    dual_objective: float = float("nan")

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Simplex:
    """Working state for one solve. Column indices: structural ``0..n-1``,
    slacks ``n..n+m-1``, artificials ``n+m..``."""

    def __init__(self, prob: LpProblem, opts: SimplexOptions):
        self.p = prob
        self.o = opts
        self.m, self.n = prob.A.shape
        self.A = prob.A
        self.AT = prob.A.T.tocsr()
        self.art_rows = np.flatnonzero(prob.b < 0)
        self.n_total = self.n + self.m + len(self.art_rows)
        self.art_of_row = {int(r): self.n + self.m + k for k, r in enumerate(self.art_rows)}
        self.iterations = 0

    def column(self, j: int) -> np.ndarray:
        col = np.zeros(self.m)
        if j < self.n:
            lo, hi = self.A.indptr[j], self.A.indptr[j + 1]
            col[self.A.indices[lo:hi]] = self.A.data[lo:hi]
        elif j < self.n + self.m:
            col[j - self.n] = 1.0
        else:
            col[self.art_rows[j - self.n - self.m]] = -1.0
        return col

    def basis_matrix(self, basis: Sequence[int]) -> np.ndarray:
        B = np.empty((self.m, self.m))
        for k, j in enumerate(basis):
            B[:, k] = self.column(j)
        return B

    def invert(self, basis: Sequence[int]) -> np.ndarray | None:
        if self.m == 0:
            return np.zeros((0, 0))
        B = self.basis_matrix(basis)
        try:
            Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(Binv)) or np.linalg.cond(B) > 1e12:
            return None
        return Binv

    def reduced_costs(self, cost: np.ndarray, y: np.ndarray) -> np.ndarray:
        d = np.empty(self.n_total)
        d[: self.n] = cost[: self.n] - self.AT @ y if self.m else cost[: self.n]
        d[self.n : self.n + self.m] = cost[self.n : self.n + self.m] - y
        if len(self.art_rows):
            d[self.n + self.m :] = cost[self.n + self.m :] + y[self.art_rows]
        return d

    def run(self, cost: np.ndarray, basis: list[int], allowed: np.ndarray, pin_artificials: bool = False):
        """Primal simplex from a feasible ``basis``. Returns (status, basis, Binv, xB, ray)."""
        o = self.o
        m = self.m
        Binv = self.invert(basis)
        if Binv is None:
            raise np.linalg.LinAlgError("starting basis is singular")
        b = self.p.b
        xB = Binv @ b
        is_art = np.zeros(self.n_total, dtype=bool)
        is_art[self.n + self.m :] = True
        d_tol = o.optimality_tol * max(1.0, float(np.max(np.abs(cost))) if cost.size else 1.0)
        bland = o.pivot_rule == "bland"
        stall = 0
        since_refactor = 0
        verified = False
        while True:
            if self.iterations >= o.max_iterations:
                return LpStatus.ITERATION_LIMIT, basis, Binv, xB, None
            cB = cost[basis]
            y = cB @ Binv if m else np.zeros(0)
            d = self.reduced_costs(cost, y)
            d[basis] = 0.0
            d[~allowed] = 0.0
            cand = np.flatnonzero(d > d_tol)
            if cand.size == 0:
                if since_refactor == 0 or verified:
                    return LpStatus.OPTIMAL, basis, Binv, xB, None
                # confirm on a fresh factorization before declaring optimality
                Binv = self.invert(basis)
                if Binv is None:
                    raise np.linalg.LinAlgError("basis became singular")
                xB = Binv @ b
                since_refactor = 0
                verified = True
                continue
            verified = False
            q = int(cand[0]) if bland else int(cand[np.argmax(d[cand])])
            w = Binv @ self.column(q)

            # ratio test; basic artificials sitting at zero must leave on any nonzero entry
            basis_arr = np.asarray(basis)
            pos = w > o.pivot_tol
            art_block = is_art[basis_arr] & (np.abs(w) > o.pivot_tol) if pin_artificials else np.zeros(m, dtype=bool)
            if not pos.any() and not art_block.any():
                ray = np.zeros(self.n_total)
                ray[q] = 1.0
                ray[basis_arr] = -w
                return LpStatus.UNBOUNDED, basis, Binv, xB, ray
            ratios = np.full(m, np.inf)
            ratios[pos] = np.maximum(xB[pos], 0.0) / w[pos]
            ratios[art_block] = 0.0
            theta = ratios.min()
            ties = np.flatnonzero(ratios <= theta + 1e-12 * (1.0 + theta))
            if bland:
                r = int(ties[np.argmin(basis_arr[ties])])
            else:
                r = int(ties[np.argmax(np.abs(w[ties]))])

            gain = theta * d[q]
            xB = xB - theta * w
            xB[r] = theta
            piv = Binv[r] / w[r]
            Binv -= np.outer(w, piv)
            Binv[r] = piv
            basis[r] = q
            self.iterations += 1
            since_refactor += 1

            if gain <= 1e-12 * (1.0 + abs(float(cB @ xB))):
                stall += 1
                if stall > o.stall_limit and not bland:
                    logger.debug("stall detected after %d iterations, switching to Bland", self.iterations)
                    bland = True
            else:
                stall = 0
                if o.pivot_rule != "bland":
                    bland = False
            if since_refactor >= o.refactor_every:
                fresh = self.invert(basis)
                if fresh is not None:
                    Binv = fresh
                    xB = Binv @ b
                    since_refactor = 0


def _labels_to_columns(labels: Sequence[int], n: int, m: int) -> list[int] | None:
    cols = []
    for lab in labels:
        if lab >= 0:
            if lab >= n:
                return None
            cols.append(int(lab))
        else:
            i = -lab - 1
            if i >= m:
                return None
            cols.append(n + i)
    if len(cols) != m or len(set(cols)) != m:
        return None
    return cols


def _columns_to_labels(cols: Sequence[int], n: int, m: int, art_rows) -> list[int]:
    out = []
    for j in cols:
        if j < n:
            out.append(int(j))
        elif j < n + m:
            out.append(-(j - n) - 1)
        else:
            out.append(-int(art_rows[j - n - m]) - 1)
    return out


def solve(
    problem: LpProblem,
    options: SimplexOptions | None = None,
    basis: Sequence[int] | None = None,
) -> LpSolution:
    """Solve the LP; ``basis`` (labels) warm-starts when it is valid and primal feasible."""
    opts = options or SimplexOptions()
    if opts.pivot_rule not in ("dantzig", "bland"):
        raise LpError(f"unknown pivot rule {opts.pivot_rule!r}")
    S = _Simplex(problem, opts)
    m, n = S.m, S.n

    start = None
    if basis is not None:
        cols = _labels_to_columns(basis, n, m)
        if cols is not None:
            Binv = S.invert(cols)
            if Binv is not None and np.all(Binv @ problem.b >= -opts.feasibility_tol):
                start = cols
            else:
                logger.debug("warm-start basis rejected, cold start")

    allowed = np.ones(S.n_total, dtype=bool)
    if start is None:
        start = [S.art_of_row.get(i, n + i) for i in range(m)]
        if len(S.art_rows):
            cost1 = np.zeros(S.n_total)
            cost1[n + m :] = -1.0
            status, start, Binv, xB, _ = S.run(cost1, start, allowed)
            infeas = -float(cost1[start] @ xB)
            if status is LpStatus.ITERATION_LIMIT:
                return _finish(S, problem, status, start, None)
            if infeas > opts.feasibility_tol * max(1.0, float(np.abs(problem.b).max())):
                return LpSolution(
                    LpStatus.INFEASIBLE, np.zeros(n), np.zeros(m), float("nan"), S.iterations
                )
            _drive_out_artificials(S, start, Binv, opts)
    allowed[n + m :] = False
    cost = np.zeros(S.n_total)
    cost[:n] = problem.c
    status, start, Binv, xB, ray = S.run(cost, start, allowed, pin_artificials=True)
    return _finish(S, problem, status, start, ray)


def _drive_out_artificials(S: _Simplex, basis: list[int], Binv: np.ndarray, opts: SimplexOptions) -> None:
    n, m = S.n, S.m
    for r, j in enumerate(list(basis)):
        if j < n + m:
            continue
        for q in range(n + m):
            if q in basis:
                continue
            w = Binv @ S.column(q)
            if abs(w[r]) > 1e-7:
                piv = Binv[r] / w[r]
                Binv -= np.outer(w, piv)
                Binv[r] = piv
                basis[r] = q
                break


def _finish(S: _Simplex, problem: LpProblem, status: LpStatus, basis: list[int], ray_full) -> LpSolution:
    n, m = S.n, S.m
    Binv = S.invert(basis) if m else np.zeros((0, 0))
    if Binv is None:
        raise np.linalg.LinAlgError("final basis is singular")
    xB = Binv @ problem.b if m else np.zeros(0)
    full = np.zeros(S.n_total)
    full[basis] = xB
    x = full[:n].copy()
    if status is LpStatus.OPTIMAL:
        np.maximum(x, 0.0, out=x)
    cost = np.zeros(S.n_total)
    cost[:n] = problem.c
    y = cost[basis] @ Binv if m else np.zeros(0)
    rc = problem.c - (problem.A.T @ y if m else 0.0)
    slack = problem.b - (problem.A @ x if n else np.zeros(m))
    obj = float(problem.c @ x) if n else 0.0
    ray = None
    if status is LpStatus.UNBOUNDED and ray_full is not None:
        ray = ray_full[:n].copy()
    sol = LpSolution(
        status=status,
        x=x,
        y=y,
        objective=obj,
        iterations=S.iterations,
        basis=_columns_to_labels(basis, n, m, S.art_rows),
        reduced_costs=rc,
        slack=slack,
        ray=ray,
        dual_objective=float(problem.b @ y) if m else 0.0,
    )
    return sol


def _mps_number(v: float) -> str:
    """Shortest repr that fits the 12-character numeric field."""
    if v == int(v) and abs(v) < 1e11:
        return str(int(v))
    for prec in range(12, 0, -1):
        s = f"{v:.{prec}g}"
        if len(s) <= 12:
            return s
    raise LpError(f"cannot encode {v!r} in 12 characters")


def to_mps(problem: LpProblem, name: str = "STNCG") -> str:
    """Fixed-format MPS text. MPS minimizes, so the objective row holds ``-c``.

    Row names are ``R0000001``..., column names ``C0000001``..., the objective
    row is ``OBJ``. Fields begin at columns 2, 5, 15, 25, 40 and 50.
    """
    m, n = problem.A.shape
    if m > 9_999_999 or n > 9_999_999:
        raise LpError("too many rows/columns for 8-character MPS names")
    rname = [f"R{i + 1:07d}" for i in range(m)]
    cname = [f"C{j + 1:07d}" for j in range(n)]

    def line(f1: str = "", f2: str = "", f3: str = "", f4: str = "", f5: str = "", f6: str = "") -> str:
        s = f" {f1:<2} {f2:<8}  {f3:<8}  {f4:>12}"
        if f5:
            s += f"   {f5:<8}  {f6:>12}"
        return s.rstrip()

    out = [f"{'NAME':<14}{name[:8]}", "ROWS", line("N", "OBJ")]
    out += [line("L", r) for r in rname]
    out.append("COLUMNS")
    A = problem.A
    for j in range(n):
        entries = []
        if problem.c[j] != 0:
            entries.append(("OBJ", -problem.c[j]))
        lo, hi = A.indptr[j], A.indptr[j + 1]
        for k in range(lo, hi):
            if A.data[k] != 0:
                entries.append((rname[A.indices[k]], A.data[k]))
        if not entries:
            entries.append(("OBJ", 0.0))
        for k in range(0, len(entries), 2):
            (r1, v1), *rest = entries[k : k + 2]
            if rest:
                out.append(line("", cname[j], r1, _mps_number(v1), rest[0][0], _mps_number(rest[0][1])))
            else:
                out.append(line("", cname[j], r1, _mps_number(v1)))
    out.append("RHS")
    nz = [(rname[i], problem.b[i]) for i in range(m) if problem.b[i] != 0]
    for k in range(0, len(nz), 2):
        (r1, v1), *rest = nz[k : k + 2]
        if rest:
            out.append(line("", "RHS", r1, _mps_number(v1), rest[0][0], _mps_number(rest[0][1])))
        else:
            out.append(line("", "RHS", r1, _mps_number(v1)))
    out.append("ENDATA")
    return "\n".join(out) + "\n"
