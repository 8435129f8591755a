"""Conventional reliability-diagram binning: edges, assignment, per-bin stats."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import ClassView
from .errors import ValidationError

UNIFORM = "uniform"
QUANTILE = "quantile"

MAX_BIN_COUNT = 10_000


@dataclass(frozen=True)
class BinSpec:
    """Binning strategy (uniform width or equal-count quantiles) and bin count."""

    strategy: str = UNIFORM
    count: int = 10

    def __post_init__(self) -> None:
        if self.strategy not in (UNIFORM, QUANTILE):
            raise ValidationError(f"unknown binning strategy {self.strategy!r}")
        if not 1 <= self.count <= MAX_BIN_COUNT:
            raise ValidationError(f"bin count must be in [1, {MAX_BIN_COUNT}]")


@dataclass(frozen=True)
class Bin:
    """One occupied bin over the half-open interval (lo, hi]."""

    lo: float
    hi: float
    count: int
    conf: float
    acc: float


@dataclass
class BinnedDiagram:
    """Edges plus per-occupied-bin count/confidence/accuracy; empty bins omitted."""

    edges: np.ndarray
    bins: list[Bin]
    n_total: int

    def to_payload(self) -> dict:
        return {
            "edges": [float(e) for e in self.edges],
            "bins": [
                {"lo": b.lo, "hi": b.hi, "count": b.count, "conf": b.conf, "acc": b.acc}
                for b in self.bins
            ],
            "n_total": self.n_total,
        }


def compute_edges(scores: np.ndarray, spec: BinSpec) -> np.ndarray:
    """Bin edges over [0, 1] for the given strategy.

    Uniform edges are k/count; quantile edges are linear-interpolation
    empirical quantiles with the first and last edges forced to 0 and 1 and
    duplicate edges merged, so degenerate score distributions simply yield
    fewer bins.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size < 1:
        raise ValidationError("need at least one score to compute edges")
    if spec.strategy == UNIFORM:
        return np.linspace(0.0, 1.0, spec.count + 1)
    qs = np.linspace(0.0, 1.0, spec.count + 1)
    edges = np.quantile(scores, qs)
    edges[0], edges[-1] = 0.0, 1.0
    return np.unique(edges)


def assign(score: float, edges: np.ndarray) -> int:
    """1-based index of the bin (edges[w-1], edges[w]] containing the score.

    A score of exactly 0 goes to the first bin, which would otherwise be
    unreachable under the half-open convention.
    """
    if not 0.0 <= score <= 1.0:
        raise ValidationError(f"score {score!r} outside [0, 1]")
    w = int(np.searchsorted(edges, score, side="left"))
    return max(w, 1)


def _assign_all(scores: np.ndarray, edges: np.ndarray) -> np.ndarray:
    if scores.size and (scores.min() < 0.0 or scores.max() > 1.0):
        raise ValidationError("scores outside [0, 1]")
    return np.maximum(np.searchsorted(edges, scores, side="left"), 1)


def bin_stats(view: ClassView, spec: BinSpec) -> BinnedDiagram:
    """Reliability diagram for a view: per occupied bin, the mean score
    (confidence) and mean outcome (accuracy)."""
    if view.n == 0:
        raise ValidationError("cannot bin an empty view")
    edges = compute_edges(view.scores, spec)
    which = _assign_all(view.scores, edges)
    n_bins = len(edges) - 1
    counts = np.bincount(which - 1, minlength=n_bins)
    score_sums = np.bincount(which - 1, weights=view.scores, minlength=n_bins)
    outcome_sums = np.bincount(which - 1, weights=view.outcomes, minlength=n_bins)
    bins = [
        Bin(
            lo=float(edges[w]),
            hi=float(edges[w + 1]),
            count=int(counts[w]),
            conf=float(score_sums[w] / counts[w]),
            acc=float(outcome_sums[w] / counts[w]),
        )
        for w in range(n_bins)
        if counts[w] > 0
    ]
    return BinnedDiagram(edges=edges, bins=bins, n_total=view.n)


def score_histogram(scores: np.ndarray, cells: int = 25) -> dict:
    """Uniform-cell histogram of scores over [0, 1] (the density strip)."""
    scores = np.asarray(scores, dtype=np.float64)
    edges = np.linspace(0.0, 1.0, cells + 1)
    counts, _ = np.histogram(scores, bins=edges)
    return {"edges": [float(e) for e in edges], "counts": [int(c) for c in counts]}
