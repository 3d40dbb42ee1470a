"""Decision-boundary figures for 2-D feature spaces.

Figures are written with matplotlib's SVG backend and fixed metadata so that
identical inputs give identical files.  Each figure gets a companion CSV
with the plotted points and the clipped boundary segment.
"""
from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .dataset import Dataset  # noqa: E402

log = logging.getLogger(__name__)

CLASS_STYLE = {1: dict(marker="o", color="tab:blue"), 2: dict(marker="^", color="tab:red")}


class PlotError(ValueError):
    pass


def boundary_segment(w0: float, w, box) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """Clip the line ``w0 + w @ x = 0`` to ``box = (xmin, xmax, ymin, ymax)``.

    Returns the two endpoints, or None when the line misses the box.
    """
    xmin, xmax, ymin, ymax = box
    a, b = float(w[0]), float(w[1])
    pts = []
    if b != 0:
        for x in (xmin, xmax):
            y = -(w0 + a * x) / b
            if ymin - 1e-12 <= y <= ymax + 1e-12:
                pts.append((x, min(max(y, ymin), ymax)))
    if a != 0:
        for y in (ymin, ymax):
            x = -(w0 + b * y) / a
            if xmin - 1e-12 <= x <= xmax + 1e-12:
                pts.append((min(max(x, xmin), xmax), y))
    uniq = []
    for p in pts:
        if not any(abs(p[0] - q[0]) < 1e-12 and abs(p[1] - q[1]) < 1e-12 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    # a line crossing a convex box meets its boundary in at most two points
    uniq.sort()
    return np.array(uniq[0]), np.array(uniq[-1])


def _bbox(X: np.ndarray, pad: float = 0.05):
    lo, hi = X.min(axis=0), X.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    lo, hi = lo - pad * span, hi + pad * span
    return float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1])


def plot_boundary(ds: Dataset, w0: float, w, out, *, title: str = "") -> Optional[tuple]:
    """Write ``out`` (SVG) and ``out`` with ``.csv`` suffix; return the segment."""
    if ds.n_features != 2:
        raise PlotError(
            f"boundary plots need exactly 2 features, the data has {ds.n_features}; "
            "select two columns with --features"
        )
    out = Path(out)
    cls = ds.class_indices()
    box = _bbox(ds.samples)
    seg = boundary_segment(w0, w, box)
    if seg is None:
        log.warning("decision line lies outside the data bounding box; plotting points only")

    plt.rcParams["svg.hashsalt"] = "fclda"
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for k in (1, 2):
        X = ds.samples[cls == k]
        coll = ax.scatter(X[:, 0], X[:, 1], s=22, label=ds.class_labels[k - 1], **CLASS_STYLE[k])
        coll.set_gid(f"class{k}")
    if seg is not None:
        (line,) = ax.plot([seg[0][0], seg[1][0]], [seg[0][1], seg[1][1]], color="k", lw=1.5, label="g(x) = 0")
        line.set_gid("boundary")
    ax.set_xlim(box[0], box[1])
    ax.set_ylim(box[2], box[3])
    ax.set_xlabel(ds.feature_names[0])
    ax.set_ylabel(ds.feature_names[1])
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)

    with out.with_suffix(".csv").open("w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["kind", ds.feature_names[0], ds.feature_names[1], "label"])
        for x, lab in zip(ds.samples, ds.labels):
            wr.writerow(["point", repr(float(x[0])), repr(float(x[1])), lab])
        if seg is not None:
            for p in seg:
                wr.writerow(["line", repr(float(p[0])), repr(float(p[1])), ""])
    return seg


def plot_summary(rows: list[dict], out) -> None:
    """Bar chart of alpha and both noise margins for a comparison table."""
    names = [r["run"] for r in rows]
    fig, axes = plt.subplots(1, 3, figsize=(11, 3.5))
    for ax, key in zip(axes, ("alpha", "nm_right", "nm_left")):
        vals = [np.nan if r.get(key) is None else r[key] for r in rows]
        ax.bar(range(len(rows)), vals, color="0.55")
        ax.set_xticks(range(len(rows)))
        ax.set_xticklabels(names, rotation=45, ha="right", fontsize=7)
        ax.set_title(key)
        ax.axhline(0.0, color="k", lw=0.6)
    fig.tight_layout()
    plt.rcParams["svg.hashsalt"] = "fclda"
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
