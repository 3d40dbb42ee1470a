"""Linear programs with fuzzy resources, solved by max-min aggregation.

Constraint ``k`` reads ``(A u)_k <= b_k`` but may be violated by up to
``t_k``, with satisfaction decaying linearly to zero.  The objective is graded
against the optima of the tight LP (resources ``b``) and the fully relaxed LP
(resources ``b + t``).  The compromise solution maximizes the smallest of all
membership degrees, which reduces to a single crisp LP in ``(alpha, u)``.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .lp_solver import LinearProgram, LpSolution, solve

log = logging.getLogger(__name__)

DEGENERATE_REL = 1e-12
BRACKET_REL = 1e-9
CRISP_SLACK = 1e-9
ALPHA_SNAP = 1e-12


class FuzzyLpStatus(str, enum.Enum):
    OK = "ok"
    CRISP_INFEASIBLE = "crisp_infeasible"
    RELAXED_INFEASIBLE = "relaxed_infeasible"
    DEGENERATE_BRACKET = "degenerate_bracket"


class FuzzyLpInfeasible(RuntimeError):
    def __init__(self, status: FuzzyLpStatus, message: str):
        super().__init__(message)
        self.status = status


@dataclass(frozen=True)
class FuzzyLpProblem:
    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray
    tolerances: np.ndarray
    box: float = 1.0

    def __post_init__(self):
        c = np.array(self.objective, dtype=float)
        A = np.array(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(0, c.size)
        b = np.array(self.b, dtype=float).reshape(-1)
        t = np.array(self.tolerances, dtype=float).reshape(-1)
        if c.ndim != 1 or A.ndim != 2 or A.shape[1] != c.size:
            raise ValueError(f"objective {c.shape} does not match constraint matrix {A.shape}")
        if b.shape != (A.shape[0],) or t.shape != (A.shape[0],):
            raise ValueError(f"resources {b.shape} / tolerances {t.shape} need length {A.shape[0]}")
        if np.any(t < 0):
            raise ValueError("tolerances must be non-negative")
        if not self.box > 0:
            raise ValueError("variable box must be positive")
        for name, arr in (("objective", c), ("A", A), ("b", b), ("tolerances", t)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_constraints(self) -> int:
        return self.A.shape[0]

    def crisp_lp(self, relaxed: bool = False) -> LinearProgram:
        rhs = self.b + self.tolerances if relaxed else self.b
        bound = np.full(self.n_vars, self.box)
        return LinearProgram(self.objective, self.A, rhs, -bound, bound)


@dataclass(frozen=True)
class FuzzySolution:
    """Max-min compromise together with the bracket LPs that anchor it."""

    point: Optional[np.ndarray]
    alpha: float
    z_lower: float
    z_upper: float
    crisp_lower_point: Optional[np.ndarray]
    crisp_upper_point: Optional[np.ndarray]
    status: FuzzyLpStatus


class Bracket(NamedTuple):
    z_lower: float
    z_upper: float
    v_lower: np.ndarray
    v_upper: np.ndarray


def constraint_membership(p: FuzzyLpProblem, k: int, u) -> float:
    if not 0 <= k < p.n_constraints:
        raise IndexError(f"constraint index {k} out of range [0, {p.n_constraints})")
    lhs = float(p.A[k] @ np.asarray(u, dtype=float))
    return _linear_membership(lhs, p.b[k], p.tolerances[k])


def _linear_membership(lhs: float, b: float, t: float) -> float:
    if t == 0:
        # crisp indicator; slack absorbs simplex round-off
        return 1.0 if lhs <= b + CRISP_SLACK * (1.0 + abs(b)) else 0.0
    if lhs < b:
        return 1.0
    if lhs > b + t:
        return 0.0
    return 1.0 - (lhs - b) / t


def constraint_memberships(p: FuzzyLpProblem, u) -> np.ndarray:
    """All constraint memberships at ``u`` at once."""
    lhs = p.A @ np.asarray(u, dtype=float)
    return np.array([_linear_membership(x, b, t) for x, b, t in zip(lhs, p.b, p.tolerances)])


def _degenerate(z_lower: float, z_upper: float) -> bool:
    return z_upper - z_lower < DEGENERATE_REL * (1.0 + abs(z_upper))


def optimality_membership(cu: float, z_lower: float, z_upper: float) -> float:
    """Degree to which objective value ``cu`` reaches the relaxed optimum.

    A collapsed bracket (``z_lower == z_upper``) grades every point as 1.
    """
    if z_lower > z_upper + BRACKET_REL * (1.0 + abs(z_upper)):
        raise ValueError(f"z_lower={z_lower!r} exceeds z_upper={z_upper!r}")
    if _degenerate(z_lower, z_upper):
        return 1.0
    if cu >= z_upper:
        return 1.0
    if cu <= z_lower:
        return 0.0
    return (cu - z_lower) / (z_upper - z_lower)


def solve_crisp_bracket(p: FuzzyLpProblem) -> Bracket:
    """Optima of the tight (resources ``b``) and relaxed (``b + t``) LPs."""
    relaxed = solve(p.crisp_lp(relaxed=True))
    if not relaxed.optimal:
        raise FuzzyLpInfeasible(FuzzyLpStatus.RELAXED_INFEASIBLE, "relaxed LP (resources b + t) is infeasible")
    tight = solve(p.crisp_lp(relaxed=False))
    if not tight.optimal:
        raise FuzzyLpInfeasible(FuzzyLpStatus.CRISP_INFEASIBLE, "tight LP (resources b) is infeasible")
    z0, z1 = tight.objective_value, relaxed.objective_value
    if z0 > z1:
        if z0 - z1 > BRACKET_REL * (1.0 + abs(z1)):
            raise RuntimeError(f"bracket inverted: z_lower={z0!r} > z_upper={z1!r}")
        z1 = z0
    return Bracket(z0, z1, tight.point, relaxed.point)


def solve_maxmin(p: FuzzyLpProblem) -> FuzzySolution:
    """Maximize the minimum of the optimality and constraint memberships.

    Variables of the reduced LP are ``(alpha, u)``::

        maximize    alpha
        subject to  -c @ u + alpha * (z1 - z0) <= -z0
                    A @ u + alpha * t          <= b + t
                    0 <= alpha <= 1,  -box <= u <= box

    With a collapsed bracket the objective row is dropped; the returned point
    then maximizes ``c @ u`` among the points reaching the optimal alpha.
    """
    z0, z1, v0, v1 = solve_crisp_bracket(p)
    d, m = p.n_vars, p.n_constraints
    degenerate = _degenerate(z0, z1)

    rows = np.hstack([p.tolerances[:, None], p.A])
    rhs = p.b + p.tolerances
    if not degenerate:
        rows = np.vstack([rows, np.concatenate([[z1 - z0], -p.objective])])
        rhs = np.concatenate([rhs, [-z0]])
    lower = np.concatenate([[0.0], np.full(d, -p.box)])
    upper = np.concatenate([[1.0], np.full(d, p.box)])
    goal = np.zeros(d + 1)
    goal[0] = 1.0
    sol = _must_solve(LinearProgram(goal, rows, rhs, lower, upper))
    alpha = _snap(float(sol.point[0]))

    if degenerate:
        # tie-break inside the optimal alpha level by the objective itself
        lower[0] = upper[0] = alpha
        second = np.concatenate([[0.0], p.objective])
        sol = _must_solve(LinearProgram(second, rows, rhs, lower, upper))
        status = FuzzyLpStatus.DEGENERATE_BRACKET
    else:
        status = FuzzyLpStatus.OK

    u = np.array(sol.point[1:])
    u.setflags(write=False)
    log.debug("max-min: alpha=%.6g z0=%.6g z1=%.6g status=%s", alpha, z0, z1, status.value)
    return FuzzySolution(u, alpha, z0, z1, v0, v1, status)


def _snap(alpha: float) -> float:
    # simplex round-off near the ends of [0, 1]
    if alpha > 1.0 - ALPHA_SNAP:
        return 1.0
    if alpha < ALPHA_SNAP:
        return 0.0
    return alpha


def _must_solve(lp: LinearProgram) -> LpSolution:
    sol = solve(lp)
    if not sol.optimal:
        # alpha = 0 with the relaxed optimum is always feasible; reaching here is numerical
        raise FuzzyLpInfeasible(FuzzyLpStatus.RELAXED_INFEASIBLE, "max-min LP reported infeasible")
    return sol


def min_membership(p: FuzzyLpProblem, sol: FuzzySolution) -> float:
    """Smallest membership degree at the solution point."""
    mu0 = optimality_membership(float(p.objective @ sol.point), sol.z_lower, sol.z_upper)
    mus = constraint_memberships(p, sol.point)
    return float(min(mu0, mus.min())) if mus.size else mu0
