"""Fuzzy-constrained linear discriminant training.

Each reflected sample ``y_k`` contributes one soft constraint ``v @ y_k >= 0``,
written in ``<=`` form as ``-y_k @ v <= 0`` with tolerance ``t_k``.  Two
training criteria are supported:

``modified``
    maximize ``sum_k v @ y_k``, the total signed distance of all samples.
``perceptron``
    maximize ``sum over misclassified k of v @ y_k``.

The perceptron coefficients depend on ``v`` itself.  Training therefore
alternates between fixing the misclassified set and solving the fuzzy LP,
starting from the modified-criterion solution.  The reported degree of
optimality for the perceptron criterion is computed on the exact
(piecewise-linear) criterion through an epigraph LP.
"""
from __future__ import annotations

import dataclasses
import enum
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from .dataset import ReflectedDataset
from .fuzzy_lp import FuzzyLpProblem, FuzzySolution, min_membership, solve_maxmin
from .lp_solver import LinearProgram, LpSolverError, solve

log = logging.getLogger(__name__)

MAX_PERCEPTRON_ITERATIONS = 50
DEFAULT_BOX = 1.0


class FitError(RuntimeError):
    """Training cannot produce a usable discriminant."""


class Criterion(str, enum.Enum):
    MODIFIED = "modified"
    PERCEPTRON = "perceptron"


class ToleranceMode(str, enum.Enum):
    PER_SAMPLE = "per-sample"
    GLOBAL_MAX = "global-max"


@dataclass(frozen=True)
class ToleranceConfig:
    theta: float
    mode: ToleranceMode = ToleranceMode.PER_SAMPLE

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        object.__setattr__(self, "mode", ToleranceMode(self.mode))


@dataclass(frozen=True)
class DiscriminantModel:
    """A trained discriminant ``g(x) = v[0] + v[1:] @ x`` with unit-norm ``v``.

    ``v_raw`` is the LP point the degree of optimality was certified at.
    ``problem``/``solution`` keep that LP for inspection; they are not
    persisted.
    """

    v: np.ndarray
    v_raw: np.ndarray
    alpha: float
    z_lower: float
    z_upper: float
    criterion: Criterion
    tolerance: ToleranceConfig
    iterations: int = 1
    converged: bool = True
    stop_reason: str = "single_pass"
    lp_status: str = "ok"
    feature_names: tuple[str, ...] = ()
    class_labels: tuple[str, ...] = ()
    problem: Optional[FuzzyLpProblem] = field(default=None, repr=False, compare=False)
    solution: Optional[FuzzySolution] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        v = np.array(self.v, dtype=float)
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError("v must have unit Euclidean norm")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha {self.alpha} outside [0, 1]")
        v.setflags(write=False)
        raw = np.array(self.v_raw, dtype=float)
        raw.setflags(write=False)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "v_raw", raw)
        object.__setattr__(self, "criterion", Criterion(self.criterion))

    @property
    def w0(self) -> float:
        return float(self.v[0])

    @property
    def w(self) -> np.ndarray:
        return self.v[1:]

    def certificate(self) -> float:
        """min(mu_0, mu_1, ..., mu_m) at the certified LP point."""
        if self.problem is None or self.solution is None:
            raise ValueError("model carries no LP (loaded from disk?)")
        return min_membership(self.problem, self.solution)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion.value,
            "v": [float(x) for x in self.v],
            "v_raw": [float(x) for x in self.v_raw],
            "alpha": float(self.alpha),
            "z_lower": float(self.z_lower),
            "z_upper": float(self.z_upper),
            "theta": float(self.tolerance.theta),
            "mode": self.tolerance.mode.value,
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "stop_reason": self.stop_reason,
            "lp_status": self.lp_status,
            "feature_names": list(self.feature_names),
            "class_labels": list(self.class_labels),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DiscriminantModel":
        return cls(
            v=np.array(doc["v"], dtype=float),
            v_raw=np.array(doc["v_raw"], dtype=float),
            alpha=float(doc["alpha"]),
            z_lower=float(doc["z_lower"]),
            z_upper=float(doc["z_upper"]),
            criterion=Criterion(doc["criterion"]),
            tolerance=ToleranceConfig(float(doc["theta"]), ToleranceMode(doc["mode"])),
            iterations=int(doc.get("iterations", 1)),
            converged=bool(doc.get("converged", True)),
            stop_reason=doc.get("stop_reason", "single_pass"),
            lp_status=doc.get("lp_status", "ok"),
            feature_names=tuple(doc.get("feature_names", ())),
            class_labels=tuple(doc.get("class_labels", ())),
        )


class Prediction(NamedTuple):
    label: int
    value: float
    tie: bool


def objective_modified(rd: ReflectedDataset) -> np.ndarray:
    if rd.n_samples == 0:
        raise ValueError("empty dataset")
    return rd.reflected.sum(axis=0)


def objective_perceptron(rd: ReflectedDataset, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ValueError("v must be non-zero")
    wrong = rd.reflected @ v < 0
    return rd.reflected[wrong].sum(axis=0) if wrong.any() else np.zeros(rd.dim)


def perceptron_value(rd: ReflectedDataset, v) -> float:
    """Perceptron criterion: sum of the negative margins at ``v``."""
    return float(np.minimum(rd.reflected @ np.asarray(v, dtype=float), 0.0).sum())


def compute_tolerances(rd: ReflectedDataset, cfg: ToleranceConfig) -> np.ndarray:
    norms = np.linalg.norm(rd.reflected, axis=1)
    if cfg.mode is ToleranceMode.GLOBAL_MAX:
        return np.full(rd.n_samples, cfg.theta * norms.max())
    return cfg.theta * norms


def build_problem(rd: ReflectedDataset, c, t, box: float = DEFAULT_BOX) -> FuzzyLpProblem:
    """Rows ``-y_k @ v <= 0`` with tolerances ``t``."""
    return FuzzyLpProblem(np.asarray(c, dtype=float), -rd.reflected, np.zeros(rd.n_samples), t, box)


def build_perceptron_epigraph(rd: ReflectedDataset, t, box: float = DEFAULT_BOX) -> FuzzyLpProblem:
    """The exact perceptron criterion as a fuzzy LP over ``(v, s)``.

    ``s_k = L_k * sigma_k`` stands for ``min(0, v @ y_k)`` with
    ``L_k = ||y_k||_1``, so the symmetric box on ``sigma`` never binds.
    Only the classification rows are fuzzy; the epigraph rows are crisp.
    """
    n, d = rd.n_samples, rd.dim
    L = np.abs(rd.reflected).sum(axis=1)
    eye = np.eye(n)
    A = np.vstack(
        [
            np.hstack([-rd.reflected, np.zeros((n, n))]),
            np.hstack([-rd.reflected, eye * L]),
            np.hstack([np.zeros((n, d)), eye]),
        ]
    )
    b = np.zeros(3 * n)
    tol = np.concatenate([np.asarray(t, dtype=float), np.zeros(2 * n)])
    c = np.concatenate([np.zeros(d), L])
    return FuzzyLpProblem(c, A, b, tol, box)


def _widest_margin(rd: ReflectedDataset, p: FuzzyLpProblem, sol: FuzzySolution) -> FuzzySolution:
    """Among the points as good as ``sol``, take one maximizing the smallest margin.

    The max-min LP often has a whole face of optima (typically when the box
    binds), and a simplex vertex of that face puts some sample exactly on the
    boundary.  Holding alpha and the objective level fixed and maximizing
    ``min_k v @ y_k / ||y_k||`` picks a point in the interior instead.
    """
    d = p.n_vars
    alpha = sol.alpha
    cu = float(p.objective @ sol.point)
    floor = cu - 1e-12 * (1.0 + abs(cu))
    norms = np.linalg.norm(rd.reflected, axis=1)
    reach = p.box * np.sqrt(d)
    rows = np.vstack(
        [
            np.hstack([p.A, np.zeros((p.n_constraints, 1))]),
            np.concatenate([-p.objective, [0.0]])[None, :],
            np.hstack([-rd.reflected / norms[:, None], np.ones((rd.n_samples, 1))]),
        ]
    )
    rhs = np.concatenate([p.b + (1.0 - alpha) * p.tolerances, [-floor], np.zeros(rd.n_samples)])
    lower = np.concatenate([np.full(d, -p.box), [-reach]])
    upper = np.concatenate([np.full(d, p.box), [reach]])
    goal = np.zeros(d + 1)
    goal[-1] = 1.0
    try:
        res = solve(LinearProgram(goal, rows, rhs, lower, upper))
    except LpSolverError:
        res = None
    if res is None or not res.optimal:
        # the face is too thin to move in numerically; keep the vertex
        return sol
    u = np.array(res.point[:d])
    u.setflags(write=False)
    return dataclasses.replace(sol, point=u)


def _unit(u, what: str) -> np.ndarray:
    norm = np.linalg.norm(u)
    if norm < 1e-12:
        raise FitError(f"{what}: the LP returned the zero vector, no separating direction")
    return np.asarray(u, dtype=float) / norm


def fit(
    rd: ReflectedDataset,
    criterion: Criterion | str = Criterion.MODIFIED,
    cfg: ToleranceConfig | None = None,
    *,
    box: float = DEFAULT_BOX,
    max_iterations: int = MAX_PERCEPTRON_ITERATIONS,
) -> DiscriminantModel:
    criterion = Criterion(criterion)
    cfg = cfg if cfg is not None else ToleranceConfig(0.1)
    if rd.n_samples == 0:
        raise FitError("empty dataset")
    if not (np.any(rd.class_of == 1) and np.any(rd.class_of == 2)):
        raise FitError("need at least one sample per class")
    t = compute_tolerances(rd, cfg)
    meta = dict(
        feature_names=rd.source.feature_names,
        class_labels=rd.source.class_labels,
        tolerance=cfg,
    )

    problem = build_problem(rd, objective_modified(rd), t, box)
    sol = _widest_margin(rd, problem, solve_maxmin(problem))
    v = _unit(sol.point, "modified criterion")
    if criterion is Criterion.MODIFIED:
        return DiscriminantModel(
            v=v,
            v_raw=sol.point,
            alpha=sol.alpha,
            z_lower=sol.z_lower,
            z_upper=sol.z_upper,
            criterion=criterion,
            iterations=1,
            lp_status=sol.status.value,
            problem=problem,
            solution=sol,
            **meta,
        )

    v, iterations, reason = _perceptron_direction(rd, v, t, box, max_iterations)
    epi = build_perceptron_epigraph(rd, t, box)
    esol = solve_maxmin(epi)
    log.info("perceptron: %d iterations, stop=%s, alpha=%.6g", iterations, reason, esol.alpha)
    return DiscriminantModel(
        v=v,
        v_raw=esol.point[: rd.dim],
        alpha=esol.alpha,
        z_lower=esol.z_lower,
        z_upper=esol.z_upper,
        criterion=criterion,
        iterations=iterations,
        converged=reason != "budget",
        stop_reason=reason,
        lp_status=esol.status.value,
        problem=epi,
        solution=esol,
        **meta,
    )


def _perceptron_direction(rd, v, t, box, max_iterations):
    """Fixed-point iteration on the misclassified set.

    Stops when the set is empty, stops changing, or revisits an earlier set
    (a limit cycle).  On a cycle or an exhausted budget the visited direction
    with the largest perceptron criterion is returned.
    """
    seen = set()
    candidates = []
    for it in range(1, max_iterations + 1):
        wrong = rd.reflected @ v < 0
        if not wrong.any():
            return v, it - 1, "empty"
        key = wrong.tobytes()
        if key in seen:
            return _best(rd, candidates), it - 1, "cycle"
        seen.add(key)
        c = rd.reflected[wrong].sum(axis=0)
        step = build_problem(rd, c, t, box)
        sol = _widest_margin(rd, step, solve_maxmin(step))
        if np.linalg.norm(sol.point) < 1e-12:
            return v, it, "zero_step"
        v_new = sol.point / np.linalg.norm(sol.point)
        candidates.append(v_new)
        log.debug("perceptron step %d: %d misclassified, alpha=%.6g", it, int(wrong.sum()), sol.alpha)
        if np.array_equal(rd.reflected @ v_new < 0, wrong):
            return v_new, it, "fixed_point"
        v = v_new
    return _best(rd, candidates), max_iterations, "budget"


def _best(rd, candidates):
    scores = [perceptron_value(rd, c) for c in candidates]
    return candidates[int(np.argmax(scores))]


def predict(model: DiscriminantModel, x) -> Prediction:
    x = np.asarray(x, dtype=float)
    if x.shape != model.w.shape:
        raise ValueError(f"expected {model.w.size} features, got shape {x.shape}")
    g = model.w0 + float(model.w @ x)
    return Prediction(1 if g >= 0 else 2, g, g == 0)


def decision_values(model: DiscriminantModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.w.size:
        raise ValueError(f"expected rows with {model.w.size} features, got shape {X.shape}")
    return model.w0 + X @ model.w


def save_model(model: DiscriminantModel, path, metrics: dict | None = None) -> None:
    doc = model.to_dict()
    if metrics is not None:
        doc["metrics"] = metrics
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_model(path) -> DiscriminantModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("criterion") == "olda":
        raise ValueError(f"{path} holds a Fisher baseline, not an FC-LDA model")
    return DiscriminantModel.from_dict(doc)
