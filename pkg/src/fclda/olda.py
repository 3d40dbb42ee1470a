"""Ordinary (Fisher) linear discriminant, the comparison baseline."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import Dataset


@dataclass(frozen=True)
class FisherModel:
    w: np.ndarray
    w0: float
    class_means: tuple[np.ndarray, np.ndarray]
    pooled_scatter: np.ndarray
    ridge: float = 0.0
    feature_names: tuple[str, ...] = ()
    class_labels: tuple[str, ...] = ()

    def decision(self, X) -> np.ndarray:
        return self.w0 + np.asarray(X, dtype=float) @ self.w

    def to_dict(self) -> dict:
        return {
            "criterion": "olda",
            "w": [float(x) for x in self.w],
            "w0": float(self.w0),
            "class_means": [[float(x) for x in m] for m in self.class_means],
            "pooled_scatter": [[float(x) for x in row] for row in self.pooled_scatter],
            "ridge": float(self.ridge),
            "feature_names": list(self.feature_names),
            "class_labels": list(self.class_labels),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "FisherModel":
        means = tuple(np.array(m, dtype=float) for m in doc["class_means"])
        return cls(
            w=np.array(doc["w"], dtype=float),
            w0=float(doc["w0"]),
            class_means=means,
            pooled_scatter=np.array(doc["pooled_scatter"], dtype=float),
            ridge=float(doc.get("ridge", 0.0)),
            feature_names=tuple(doc.get("feature_names", ())),
            class_labels=tuple(doc.get("class_labels", ())),
        )


def fit_fisher(ds: Dataset) -> FisherModel:
    """w proportional to S_w^-1 (mu1 - mu2), threshold at the projected midpoint.

    A singular within-class scatter gets a ridge of
    ``1e-8 * trace(S_w) / p`` on the diagonal.
    """
    cls = ds.class_indices()
    X1, X2 = ds.samples[cls == 1], ds.samples[cls == 2]
    if len(X1) == 0 or len(X2) == 0:
        raise ValueError("both classes need at least one sample")
    mu1, mu2 = X1.mean(axis=0), X2.mean(axis=0)
    D1, D2 = X1 - mu1, X2 - mu2
    Sw = D1.T @ D1 + D2.T @ D2
    Sw = 0.5 * (Sw + Sw.T)
    p = Sw.shape[0]
    ridge = 0.0
    try:
        if np.linalg.cond(Sw) > 1e12:
            raise np.linalg.LinAlgError
        w = np.linalg.solve(Sw, mu1 - mu2)
    except np.linalg.LinAlgError:
        ridge = 1e-8 * np.trace(Sw) / p
        if ridge <= 0:
            raise ValueError("within-class scatter is zero; classes are single points") from None
        w = np.linalg.solve(Sw + ridge * np.eye(p), mu1 - mu2)
    norm = np.linalg.norm(w)
    if not np.isfinite(norm) or norm == 0:
        raise ValueError("Fisher direction is zero or non-finite")
    w = w / norm
    w0 = -float(w @ (mu1 + mu2)) / 2.0
    for a in (w, mu1, mu2, Sw):
        a.setflags(write=False)
    return FisherModel(w, w0, (mu1, mu2), Sw, ridge, ds.feature_names, ds.class_labels)


def save_fisher(model: FisherModel, path, metrics: dict | None = None) -> None:
    doc = model.to_dict()
    if metrics is not None:
        doc["metrics"] = metrics
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
