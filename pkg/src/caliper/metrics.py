"""Proper scoring rules, binned calibration errors, and count-based summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .binning import BinnedDiagram, BinSpec, bin_stats
from .dataset import ClassView, ModelRecord, ViewMode, project_class_view
from .errors import EmptySelectionError, ValidationError

LOG_CLAMP = 1e-15


@dataclass
class MetricsReport:
    n: int
    accuracy: float
    brier: float
    log_loss: float
    ece: float
    mce: float
    bin_spec: BinSpec

    def to_payload(self) -> dict:
        return {
            "n": self.n,
            "accuracy": self.accuracy,
            "brier": self.brier,
            "log_loss": self.log_loss,
            "ece": self.ece,
            "mce": self.mce,
            "bin_spec": {"strategy": self.bin_spec.strategy, "count": self.bin_spec.count},
        }


@dataclass
class ConfusionMatrix:
    """K x K counts, rows indexed by true class, columns by argmax prediction."""

    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_payload(self) -> dict:
        return {"counts": [[int(c) for c in row] for row in self.counts], "total": self.total}


def brier_score(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean squared distance between probability rows and one-hot labels."""
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n, k = probs.shape
    onehot = np.zeros((n, k))
    onehot[np.arange(n), labels] = 1.0
    return float(np.mean(np.sum((probs - onehot) ** 2, axis=1)))


def log_loss(probs: np.ndarray, labels: np.ndarray) -> float:
    """Negative mean log probability of the true class, clamped at 1e-15."""
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    picked = probs[np.arange(len(labels)), labels]
    return float(-np.mean(np.log(np.clip(picked, LOG_CLAMP, 1.0))))


def ece(diagram: BinnedDiagram) -> float:
    """Count-weighted mean |accuracy - confidence| over occupied bins."""
    if not diagram.bins:
        raise ValidationError("diagram has no occupied bins")
    n = diagram.n_total
    return float(sum(b.count / n * abs(b.acc - b.conf) for b in diagram.bins))


def mce(diagram: BinnedDiagram) -> float:
    """Maximum |accuracy - confidence| over occupied bins."""
    if not diagram.bins:
        raise ValidationError("diagram has no occupied bins")
    return float(max(abs(b.acc - b.conf) for b in diagram.bins))


def accuracy(view: ClassView) -> float:
    if view.n == 0:
        raise EmptySelectionError("cannot compute accuracy on an empty view")
    return float(np.mean(view.outcomes))


def confusion_matrix(model: ModelRecord, indices: np.ndarray | None = None) -> ConfusionMatrix:
    """Counts of (true class, argmax-predicted class) over the selected rows."""
    if indices is None:
        indices = np.arange(model.n)
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        raise EmptySelectionError("confusion matrix requires a non-empty selection")
    labels = model.labels[indices]
    predicted = np.argmax(model.probs[indices], axis=1)
    counts = np.bincount(labels * model.k + predicted, minlength=model.k * model.k)
    return ConfusionMatrix(counts.reshape(model.k, model.k))


def metrics_report(
    model: ModelRecord,
    mode: ViewMode,
    spec: BinSpec,
    indices: np.ndarray | None = None,
    session_id: str = "",
) -> MetricsReport:
    """Bundle of scoring rules and calibration errors for one model view.

    ``indices`` restricts every quantity to the selected rows (subgroups).
    """
    view = project_class_view(model, mode, session_id=session_id)
    probs, labels = model.probs, model.labels
    if indices is not None:
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size == 0:
            raise EmptySelectionError("metrics require a non-empty selection")
        view = view.take(indices)
        probs, labels = probs[indices], labels[indices]
    diagram = bin_stats(view, spec)
    return MetricsReport(
        n=view.n,
        accuracy=accuracy(view),
        brier=brier_score(probs, labels),
        log_loss=log_loss(probs, labels),
        ece=ece(diagram),
        mce=mce(diagram),
        bin_spec=spec,
    )
