"""Subgroup and region semantics: feature-constraint filters, score-range
filters, feature histograms, and per-selection summaries."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import CATEGORICAL, NUMERIC, ClassView, EvaluationSession, ViewMode
from .errors import EmptySelectionError, ValidationError

NUMERIC_HISTOGRAM_BINS = 20


@dataclass(frozen=True)
class FeatureConstraint:
    """Closed numeric interval [lo, hi] or accepted-category set on one column."""

    column: str
    lo: float | None = None
    hi: float | None = None
    categories: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        numeric = self.lo is not None or self.hi is not None
        if numeric and self.categories:
            raise ValidationError(f"constraint on {self.column!r} mixes interval and categories")
        if not numeric and not self.categories:
            raise ValidationError(f"constraint on {self.column!r} is empty")
        if numeric:
            if self.lo is None or self.hi is None:
                raise ValidationError(f"interval on {self.column!r} needs both lo and hi")
            if self.lo > self.hi:
                raise ValidationError(f"interval on {self.column!r} has lo > hi")

    @property
    def is_numeric(self) -> bool:
        return self.lo is not None


@dataclass
class SubgroupPredicate:
    """Conjunction of per-column constraints, at most one per column."""

    constraints: list[FeatureConstraint] = field(default_factory=list)
    label: str = ""

    def __post_init__(self) -> None:
        columns = [c.column for c in self.constraints]
        if len(set(columns)) != len(columns):
            raise ValidationError("at most one constraint per column")

    def to_payload(self) -> dict:
        constraints = []
        for c in self.constraints:
            if c.is_numeric:
                constraints.append({"column": c.column, "lo": c.lo, "hi": c.hi})
            else:
                constraints.append({"column": c.column, "categories": sorted(c.categories)})
        return {"label": self.label, "constraints": constraints}


def predicate_from_payload(payload: dict) -> SubgroupPredicate:
    constraints = []
    for item in payload.get("constraints", []):
        if "categories" in item:
            constraints.append(
                FeatureConstraint(item["column"], categories=frozenset(item["categories"]))
            )
        else:
            constraints.append(
                FeatureConstraint(item["column"], lo=float(item["lo"]), hi=float(item["hi"]))
            )
    return SubgroupPredicate(constraints=constraints, label=payload.get("label", ""))


@dataclass(frozen=True)
class RegionSelection:
    """A brushed score interval on one model view, optionally inside a subgroup."""

    model_name: str
    mode: ViewMode
    lo: float
    hi: float
    subgroup: SubgroupPredicate | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.lo <= self.hi <= 1.0:
            raise ValidationError("score interval must satisfy 0 <= lo <= hi <= 1")


@dataclass
class FeatureHistogram:
    column: str
    kind: str
    edges: list[float] = field(default_factory=list)      # numeric only
    categories: list[str] = field(default_factory=list)   # categorical only
    counts: list[int] = field(default_factory=list)

    def to_payload(self) -> dict:
        if self.kind == NUMERIC:
            return {"column": self.column, "kind": self.kind, "edges": self.edges, "counts": self.counts}
        return {"column": self.column, "kind": self.kind, "categories": self.categories, "counts": self.counts}


def _constraint_mask(session: EvaluationSession, constraint: FeatureConstraint) -> np.ndarray:
    column = session.features.column(constraint.column)
    if constraint.is_numeric:
        if column.kind != NUMERIC:
            raise ValidationError(f"interval constraint on categorical column {column.name!r}")
        return (column.values >= constraint.lo) & (column.values <= constraint.hi)
    if column.kind != CATEGORICAL:
        raise ValidationError(f"category constraint on numeric column {column.name!r}")
    unknown = constraint.categories - set(column.categories)
    if unknown:
        raise ValidationError(
            f"categories {sorted(unknown)} not present in column {column.name!r}"
        )
    codes = [i for i, name in enumerate(column.categories) if name in constraint.categories]
    return np.isin(column.values, codes)


def filter_by_predicate(session: EvaluationSession, predicate: SubgroupPredicate) -> np.ndarray:
    """Indices of rows satisfying every constraint (empty conjunction keeps all)."""
    mask = np.ones(session.features.n_rows, dtype=bool)
    for constraint in predicate.constraints:
        mask &= _constraint_mask(session, constraint)
    return np.flatnonzero(mask)


def filter_by_score_range(view: ClassView, lo: float, hi: float) -> np.ndarray:
    """Indices with lo <= score <= hi (both ends closed, matching the brush)."""
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValidationError("score range must satisfy 0 <= lo <= hi <= 1")
    return np.flatnonzero((view.scores >= lo) & (view.scores <= hi))


def feature_histogram(
    session: EvaluationSession, column_name: str, indices: np.ndarray | None = None
) -> FeatureHistogram:
    """Histogram of one column over the selected rows.

    Numeric edges always span the column's full observed range (20 uniform
    bins; a degenerate range becomes one bin of nominal width 1), so brushing
    axes stay stable and an empty selection yields an all-zero histogram.
    """
    column = session.features.column(column_name)
    if indices is None:
        indices = np.arange(session.features.n_rows)
    indices = np.asarray(indices, dtype=np.int64)
    selected = column.values[indices]
    if column.kind == CATEGORICAL:
        counts = np.bincount(selected, minlength=len(column.categories))
        return FeatureHistogram(
            column=column.name,
            kind=CATEGORICAL,
            categories=list(column.categories),
            counts=[int(c) for c in counts],
        )
    lo, hi = float(column.values.min()), float(column.values.max())
    if lo == hi:
        edges = np.array([lo, lo + 1.0])
    else:
        edges = np.linspace(lo, hi, NUMERIC_HISTOGRAM_BINS + 1)
    counts, _ = np.histogram(selected, bins=edges)
    return FeatureHistogram(
        column=column.name,
        kind=NUMERIC,
        edges=[float(e) for e in edges],
        counts=[int(c) for c in counts],
    )


def feature_means(session: EvaluationSession, indices: np.ndarray) -> dict:
    """Per-column summaries over the selected rows: arithmetic means for
    numeric columns, category frequencies for categorical ones."""
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        raise EmptySelectionError("feature means require a non-empty selection")
    summary: dict = {}
    for column in session.features.columns:
        selected = column.values[indices]
        if column.kind == NUMERIC:
            summary[column.name] = float(np.mean(selected))
        else:
            counts = np.bincount(selected, minlength=len(column.categories))
            summary[column.name] = {
                name: float(counts[i] / indices.size)
                for i, name in enumerate(column.categories)
            }
    return summary
