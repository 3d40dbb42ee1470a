"""Noise margins and misclassification counts for a trained discriminant."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dataset import Dataset

MARGIN_GUARD = 1e-12


class NoiseMargin(NamedTuple):
    value: float
    degenerate: bool


@dataclass(frozen=True)
class MarginReport:
    nm_right: float
    nm_left: float
    misclassified: tuple[int, int]
    per_sample_margins: np.ndarray
    alpha: float | None = None
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "alpha": None if self.alpha is None else float(self.alpha),
            "nm_right": float(self.nm_right),
            "nm_left": float(self.nm_left),
            "misclassified": [int(k) for k in self.misclassified],
            "degenerate": bool(self.degenerate),
        }


def _weights(model, raw: bool) -> np.ndarray:
    """Augmented weight vector ``(w0, w)`` of an FC-LDA or Fisher model."""
    if hasattr(model, "v"):
        return np.asarray(model.v_raw if raw else model.v, dtype=float)
    return np.concatenate([[model.w0], model.w])


def noise_margin(model, ds: Dataset, class_index: int, *, raw: bool = False) -> NoiseMargin:
    """``1 / sum(1 / (v @ (1, x_i)))`` over the rows of one class.

    Samples are augmented but not reflected, so a correctly classified
    class-2 population gives a negative value.  If any margin is within
    1e-12 of zero the result is 0 with ``degenerate`` set.
    """
    if class_index not in (1, 2):
        raise ValueError("class_index must be 1 or 2")
    cls = ds.class_indices()
    X = ds.samples[cls == class_index]
    if X.shape[0] == 0:
        raise ValueError(f"class {class_index} has no samples")
    v = _weights(model, raw)
    margins = v[0] + X @ v[1:]
    if np.any(np.abs(margins) < MARGIN_GUARD):
        return NoiseMargin(0.0, True)
    return NoiseMargin(float(1.0 / np.sum(1.0 / margins)), False)


def misclassification_count(model, ds: Dataset) -> tuple[int, int]:
    """Wrongly predicted rows per true class; ``g == 0`` counts as class 1."""
    cls = ds.class_indices()
    v = _weights(model, raw=False)
    if ds.n_features != v.size - 1:
        raise ValueError(f"model expects {v.size - 1} features, data has {ds.n_features}")
    pred = np.where(v[0] + ds.samples @ v[1:] >= 0, 1, 2)
    wrong = pred != cls
    return int(np.sum(wrong & (cls == 1))), int(np.sum(wrong & (cls == 2)))


def margin_report(model, ds: Dataset, *, raw: bool = False) -> MarginReport:
    v = _weights(model, raw)
    right = noise_margin(model, ds, 1, raw=raw)
    left = noise_margin(model, ds, 2, raw=raw)
    return MarginReport(
        nm_right=right.value,
        nm_left=left.value,
        misclassified=misclassification_count(model, ds),
        per_sample_margins=v[0] + ds.samples @ v[1:],
        alpha=getattr(model, "alpha", None),
        degenerate=right.degenerate or left.degenerate,
    )
