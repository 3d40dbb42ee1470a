"""Dense two-phase simplex for box-bounded linear programs.

Solves::

    maximize    c @ u
    subject to  A @ u <= b
                lower <= u <= upper

Every variable carries finite bounds, so the feasible set is a polytope and
the problem is either infeasible or attains its optimum at a vertex.
:func:`brute_force_solve` enumerates vertices and serves as a test oracle.
"""
from __future__ import annotations

import csv
import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

log = logging.getLogger(__name__)

REDUCED_COST_TOL = 1e-9
PIVOT_TOL = 1e-9
RHS_CLIP = 1e-9
BRUTE_FORCE_MAX_DIM = 6
BRUTE_FORCE_MAX_FACETS = 24


class LpSolverError(RuntimeError):
    """Numerical breakdown: pivot budget exhausted or an infeasible 'optimum'."""


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


def _as_array(a):
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LinearProgram:
    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        c = _as_array(self.objective)
        d = c.size
        A = np.array(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(0, d)
        A.setflags(write=False)
        b = _as_array(self.b).reshape(-1)
        lo = _as_array(self.lower)
        hi = _as_array(self.upper)
        if c.ndim != 1 or A.ndim != 2 or A.shape[1] != d or lo.shape != (d,) or hi.shape != (d,):
            raise ValueError(
                f"inconsistent dimensions: c {c.shape}, A {A.shape}, lower {lo.shape}, upper {hi.shape}"
            )
        if b.shape != (A.shape[0],):
            raise ValueError(f"b has shape {b.shape}, expected ({A.shape[0]},)")
        for name, arr in (("objective", c), ("A", A), ("b", b), ("lower", lo), ("upper", hi)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
        if np.any(lo > hi):
            raise ValueError("lower bound exceeds upper bound")
        for name, arr in (("objective", c), ("A", A), ("b", b), ("lower", lo), ("upper", hi)):
            object.__setattr__(self, name, arr)

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def feasibility_tol(self) -> float:
        return 1e-8 * (1.0 + (np.max(np.abs(self.b)) if self.b.size else 0.0))

    def is_feasible(self, u, tol: float | None = None) -> bool:
        tol = self.feasibility_tol() if tol is None else tol
        u = np.asarray(u, dtype=float)
        if np.any(u < self.lower - tol) or np.any(u > self.upper + tol):
            return False
        return bool(np.all(self.A @ u <= self.b + tol))


@dataclass(frozen=True)
class LpSolution:
    status: Status
    point: Optional[np.ndarray] = None
    objective_value: Optional[float] = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Row-reduced tableau ``T[:, :-1] @ z = T[:, -1]`` with basis bookkeeping."""

    def __init__(self, T, basis):
        self.T = T
        self.basis = basis
        self.pivots = 0

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        nz = np.flatnonzero(col)
        if nz.size:
            cz = np.flatnonzero(T[r])
            if 2 * cz.size < T.shape[1]:
                # sparse pivot row: touch only its non-zero columns
                T[np.ix_(nz, cz)] -= np.outer(col[nz], T[r, cz])
            else:
                T[nz] -= np.outer(col[nz], T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        # basic values are non-negative; small negatives are round-off and
        # would break the ratio test (and with it the anti-cycling guarantee)
        rhs = T[:, -1]
        rhs[(rhs < 0) & (rhs > -RHS_CLIP)] = 0.0
        self.basis[r] = j
        self.pivots += 1

    def run(self, cost, budget):
        """Maximize ``cost @ z`` using Bland's rule (lowest-index entering/leaving)."""
        T = self.T
        reduced = cost - cost[self.basis] @ T[:, :-1]
        while True:
            improving = np.flatnonzero(reduced > REDUCED_COST_TOL)
            if improving.size == 0:
                return
            entering = int(improving[0])
            if self.pivots >= budget:
                raise LpSolverError(f"pivot budget of {budget} exhausted")
            colj = T[:, entering]
            ok = np.flatnonzero(colj > PIVOT_TOL)
            if ok.size == 0:
                # cannot happen with every variable boxed; signals numerical trouble
                raise LpSolverError(f"unbounded ray on column {entering} in a boxed problem")
            ratios = T[ok, -1] / colj[ok]
            ties = ok[ratios <= ratios.min() + 1e-12]
            leave = int(ties[np.argmin(self.basis[ties])])
            self.pivot(leave, entering)
            if self.pivots % 64 == 0:
                reduced = cost - cost[self.basis] @ T[:, :-1]
            else:
                reduced = reduced - reduced[entering] * T[leave, :-1]
                reduced[entering] = 0.0


def solve(lp: LinearProgram, *, debug_tableau: str | None = None) -> LpSolution:
    """Two-phase simplex with Bland's anti-cycling rule.

    Variables are shifted to ``x = u - lower`` and upper bounds become explicit
    rows, so the tableau works on ``x >= 0`` only.  ``debug_tableau`` names a CSV
    file that receives the final tableau.
    """
    d = lp.n_vars
    width = lp.upper - lp.lower
    A = np.vstack([lp.A, np.eye(d)]) if d else lp.A
    rhs = np.concatenate([lp.b - lp.A @ lp.lower, width])
    M = A.shape[0]

    full = np.hstack([A, np.eye(M)])
    neg = rhs < 0
    n_art = int(np.count_nonzero(neg))
    n_cols = d + M + n_art
    T = np.zeros((M, n_cols + 1))
    T[:, :d] = A
    T[:, d : d + M] = np.eye(M)
    T[:, -1] = rhs
    T[neg] *= -1.0
    basis = np.arange(d, d + M)
    art_rows = np.flatnonzero(neg)
    for k, r in enumerate(art_rows):
        T[r, d + M + k] = 1.0
        basis[r] = d + M + k
    tab = _Tableau(T, basis)
    budget = 50 * (M + n_cols) + 100

    if n_art:
        phase1 = np.zeros(n_cols)
        phase1[d + M :] = -1.0
        tab.run(phase1, budget)
        infeas = -phase1[tab.basis] @ tab.T[:, -1]
        scale = 1.0 + np.max(np.abs(rhs))
        if infeas > 1e-9 * scale:
            log.debug("phase 1 residual %.3g: infeasible", infeas)
            return LpSolution(Status.INFEASIBLE, iterations=tab.pivots)
        # drive remaining artificials out of the basis
        keep = np.ones(M, dtype=bool)
        for r in range(M):
            if tab.basis[r] >= d + M:
                row = tab.T[r, : d + M]
                cand = np.flatnonzero(np.abs(row) > 1e-9)
                if cand.size:
                    tab.pivot(r, int(cand[0]))
                else:
                    keep[r] = False
        tab.T = np.ascontiguousarray(tab.T[keep][:, list(range(d + M)) + [n_cols]])
        tab.basis = tab.basis[keep]
    else:
        keep = np.ones(M, dtype=bool)

    cost = np.zeros(d + M)
    cost[:d] = lp.objective
    tab.run(cost, budget)

    z = _refine(full, rhs, tab.basis, keep, tab.T[:, -1])
    u = lp.lower + z[:d]
    u = np.minimum(np.maximum(u, lp.lower), lp.upper)
    if debug_tableau:
        _dump_tableau(tab, debug_tableau)
    if not lp.is_feasible(u):
        raise LpSolverError("simplex returned a point violating the constraints beyond tolerance")
    u.setflags(write=False)
    return LpSolution(Status.OPTIMAL, u, float(lp.objective @ u), tab.pivots)


def _refine(full, rhs, basis, keep, x_basic):
    """Recompute the basic solution from the original rows.

    Long pivot sequences accumulate round-off in the tableau; solving
    ``B x_B = rhs`` once at the final basis removes it.
    """
    z = np.zeros(full.shape[1])
    z[basis] = x_basic
    if keep.all():
        try:
            xb = np.linalg.solve(full[:, basis], rhs)
        except np.linalg.LinAlgError:
            return np.maximum(z, 0.0)
        if np.all(np.isfinite(xb)):
            z = np.zeros(full.shape[1])
            z[basis] = xb
    return np.maximum(z, 0.0)


def _dump_tableau(tab: _Tableau, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["basis"] + [f"z{j}" for j in range(tab.T.shape[1] - 1)] + ["rhs"])
        for r in range(tab.T.shape[0]):
            w.writerow([int(tab.basis[r])] + [repr(float(v)) for v in tab.T[r]])


def brute_force_solve(lp: LinearProgram) -> LpSolution:
    """Vertex enumeration: try every choice of ``d`` active facets.

    Only for small problems: ``d <= 6`` and ``rows + 2*d <= 24``.
    """
    d, m = lp.n_vars, lp.n_rows
    if d > BRUTE_FORCE_MAX_DIM or m + 2 * d > BRUTE_FORCE_MAX_FACETS:
        raise ValueError(
            f"problem too large for vertex enumeration (d={d}, rows={m}); "
            f"limit d <= {BRUTE_FORCE_MAX_DIM}, rows + 2d <= {BRUTE_FORCE_MAX_FACETS}"
        )
    if d == 0:
        if np.all(lp.b >= -lp.feasibility_tol()):
            return LpSolution(Status.OPTIMAL, np.zeros(0), 0.0)
        return LpSolution(Status.INFEASIBLE)
    G = np.vstack([lp.A, np.eye(d), -np.eye(d)])
    h = np.concatenate([lp.b, lp.upper, -lp.lower])
    tol = lp.feasibility_tol()
    best_u, best_val = None, -np.inf
    for rows in itertools.combinations(range(G.shape[0]), d):
        sub = G[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        u = np.linalg.solve(sub, h[list(rows)])
        if np.all(G @ u <= h + tol):
            val = float(lp.objective @ u)
            if val > best_val:
                best_u, best_val = u, val
    if best_u is None:
        return LpSolution(Status.INFEASIBLE)
    return LpSolution(Status.OPTIMAL, best_u, best_val)
