"""Ingestion of features, predictions, and labels, and per-class score views.

CSV contracts: features files are UTF-8 with a header row and RFC-4180
quoting; probability files carry columns ``p_0..p_{K-1}``; label files carry
either a single ``label`` index column or a ``y_0..y_{K-1}`` one-hot block.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import IO, Mapping

import numpy as np

from .errors import IngestionError, NotFoundError, ValidationError

NUMERIC = "numeric"
CATEGORICAL = "categorical"

ROW_SUM_TOL = 1e-6


@dataclass(frozen=True)
class ViewMode:
    """Projection mode for a model's probability matrix.

    ``confidence`` scores each observation by its top predicted probability;
    ``classwise`` scores it by the probability of one fixed class.
    """

    kind: str
    class_index: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("confidence", "classwise"):
            raise ValidationError(f"unknown view mode {self.kind!r}")
        if self.kind == "classwise":
            if self.class_index is None or self.class_index < 0:
                raise ValidationError("classwise mode requires a class index >= 0")
        elif self.class_index is not None:
            raise ValidationError("confidence mode takes no class index")


CONFIDENCE = ViewMode("confidence")


def classwise(class_index: int) -> ViewMode:
    return ViewMode("classwise", class_index)


@dataclass
class Column:
    """One feature column: float64 values, or int codes plus a name table."""

    name: str
    kind: str
    values: np.ndarray
    categories: tuple[str, ...] = ()

    def decoded(self) -> list:
        """Values as the caller supplied them (category names, not codes)."""
        if self.kind == CATEGORICAL:
            return [self.categories[code] for code in self.values]
        return [float(v) for v in self.values]


@dataclass
class FeatureTable:
    columns: list[Column]

    def __post_init__(self) -> None:
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate column names")
        if any(not n for n in names):
            raise ValidationError("column names must be non-empty")
        lengths = {len(c.values) for c in self.columns}
        if len(lengths) != 1:
            raise ValidationError("all columns must have the same length")
        if self.n_rows < 1:
            raise ValidationError("feature table needs at least one row")
        for col in self.columns:
            if col.kind == NUMERIC and not np.isfinite(col.values).all():
                raise ValidationError(f"column {col.name!r} contains non-finite values")

    @property
    def n_rows(self) -> int:
        return len(self.columns[0].values) if self.columns else 0

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> Column:
        for col in self.columns:
            if col.name == name:
                return col
        raise NotFoundError(f"unknown column {name!r}")


@dataclass
class ModelRecord:
    """A named model's predictions: N x K probabilities plus true class indices."""

    name: str
    probs: np.ndarray
    labels: np.ndarray
    k: int = 0

    def __post_init__(self) -> None:
        self.probs = np.asarray(self.probs, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if not self.name:
            raise ValidationError("model name must be non-empty")
        if self.probs.ndim != 2:
            raise ValidationError("probs must be a 2-d matrix")
        n, k = self.probs.shape
        if self.k == 0:
            self.k = k
        if self.k != k:
            raise ValidationError(f"probs has {k} columns, expected {self.k}")
        if self.k < 2:
            raise ValidationError("at least two classes are required")
        if self.labels.shape != (n,):
            raise ValidationError("labels length must match probs rows")
        if not np.isfinite(self.probs).all():
            raise ValidationError("probabilities must be finite")
        if (self.probs < 0).any() or (self.probs > 1).any():
            raise ValidationError("probabilities must lie in [0, 1]")
        sums = self.probs.sum(axis=1)
        worst = int(np.argmax(np.abs(sums - 1.0)))
        if abs(sums[worst] - 1.0) > ROW_SUM_TOL:
            raise ValidationError(
                f"probs row {worst + 1} sum {sums[worst]:.8g} exceeds tolerance {ROW_SUM_TOL:g}"
            )
        if (self.labels < 0).any() or (self.labels >= self.k).any():
            raise ValidationError("label out of range")

    @property
    def n(self) -> int:
        return self.probs.shape[0]


@dataclass
class EvaluationSession:
    """Features plus a growing, never-mutated collection of model records."""

    id: str
    features: FeatureTable
    models: dict[str, ModelRecord] = field(default_factory=dict)

    def add_model(self, record: ModelRecord) -> None:
        if record.n != self.features.n_rows:
            raise ValidationError(
                f"model {record.name!r} has {record.n} rows, session has {self.features.n_rows}"
            )
        if record.name in self.models:
            raise ValidationError(f"model name {record.name!r} already registered")
        self.models[record.name] = record

    def model(self, name: str) -> ModelRecord:
        try:
            return self.models[name]
        except KeyError:
            raise NotFoundError(f"unknown model {name!r}") from None

    def class_view(self, model_name: str, mode: ViewMode) -> "ClassView":
        return project_class_view(self.model(model_name), mode, session_id=self.id)


@dataclass
class ClassView:
    """Per-observation (score, binary outcome) pairs for one projection mode."""

    mode: ViewMode
    scores: np.ndarray
    outcomes: np.ndarray
    source: tuple[str, str] = ("", "")

    @property
    def n(self) -> int:
        return len(self.scores)

    def take(self, indices: np.ndarray) -> "ClassView":
        """Row-filtered copy of the view (used for subgroups and regions)."""
        idx = np.asarray(indices, dtype=np.int64)
        return ClassView(self.mode, self.scores[idx], self.outcomes[idx], self.source)


def _read_rows(source: str | IO[str]) -> list[list[str]]:
    handle = io.StringIO(source) if isinstance(source, str) else source
    return [row for row in csv.reader(handle) if row]


def _parse_float(cell: str) -> float | None:
    try:
        return float(cell)
    except ValueError:
        return None


def ingest_features(
    source: str | IO[str], kinds: Mapping[str, str] | None = None
) -> FeatureTable:
    """Parse a features CSV into a validated table.

    Column kinds are inferred (a column where every cell parses as a number
    is numeric, anything else categorical) unless overridden via ``kinds``.
    Ragged rows, duplicate or empty column names, missing cells, and
    non-finite numeric cells are ingestion errors naming the offending spot.
    """
    rows = _read_rows(source)
    if not rows:
        raise IngestionError("empty input: no header row")
    header, body = rows[0], rows[1:]
    if not body:
        raise IngestionError("no data rows")
    if len(set(header)) != len(header):
        raise IngestionError("duplicate column names in header")
    if any(not name for name in header):
        raise IngestionError("empty column name in header")
    width = len(header)
    for i, row in enumerate(body, start=1):
        if len(row) != width:
            raise IngestionError(f"ragged row: data row {i} has {len(row)} cells, expected {width}")
        for name, cell in zip(header, row):
            if cell == "":
                raise IngestionError(f"missing value at data row {i}, column {name!r}")

    kinds = dict(kinds or {})
    for name in kinds:
        if name not in header:
            raise IngestionError(f"kind override names unknown column {name!r}")
        if kinds[name] not in (NUMERIC, CATEGORICAL):
            raise IngestionError(f"invalid kind {kinds[name]!r} for column {name!r}")

    columns = []
    for j, name in enumerate(header):
        cells = [row[j] for row in body]
        kind = kinds.get(name)
        if kind is None:
            kind = NUMERIC if all(_parse_float(c) is not None for c in cells) else CATEGORICAL
        if kind == NUMERIC:
            values = np.empty(len(cells), dtype=np.float64)
            for i, cell in enumerate(cells):
                parsed = _parse_float(cell)
                if parsed is None:
                    raise IngestionError(
                        f"non-numeric value {cell!r} at data row {i + 1}, column {name!r}"
                    )
                if not math.isfinite(parsed):
                    raise IngestionError(
                        f"non-finite numeric value {cell!r} at data row {i + 1}, column {name!r}"
                    )
                values[i] = parsed
            columns.append(Column(name, NUMERIC, values))
        else:
            names: list[str] = []
            index: dict[str, int] = {}
            codes = np.empty(len(cells), dtype=np.int64)
            for i, cell in enumerate(cells):
                if cell not in index:
                    index[cell] = len(names)
                    names.append(cell)
                codes[i] = index[cell]
            columns.append(Column(name, CATEGORICAL, codes, tuple(names)))
    return FeatureTable(columns)


def _probs_from_rows(rows: list[list[str]]) -> np.ndarray:
    header, body = rows[0], rows[1:]
    k = len(header)
    expected = [f"p_{i}" for i in range(k)]
    if header != expected:
        raise IngestionError(f"probs header must be p_0..p_{{K-1}}, got {header}")
    if k < 2:
        raise IngestionError("probs needs at least two class columns")
    if not body:
        raise IngestionError("no data rows in probs")
    probs = np.empty((len(body), k), dtype=np.float64)
    for i, row in enumerate(body, start=1):
        if len(row) != k:
            raise IngestionError(f"ragged row: probs data row {i} has {len(row)} cells")
        for j, cell in enumerate(row):
            parsed = _parse_float(cell)
            if parsed is None or not math.isfinite(parsed):
                raise IngestionError(f"bad probability {cell!r} at data row {i}, column p_{j}")
            if parsed < 0:
                raise IngestionError(f"negative probability at data row {i}, column p_{j}")
            if parsed > 1:
                raise IngestionError(f"probability above 1 at data row {i}, column p_{j}")
            probs[i - 1, j] = parsed
    sums = probs.sum(axis=1)
    worst = int(np.argmax(np.abs(sums - 1.0)))
    if abs(sums[worst] - 1.0) > ROW_SUM_TOL:
        raise IngestionError(
            f"probs row {worst + 1} sum {sums[worst]:.8g} exceeds tolerance {ROW_SUM_TOL:g}"
        )
    return probs


def _labels_from_rows(rows: list[list[str]], k: int) -> np.ndarray:
    header, body = rows[0], rows[1:]
    if not body:
        raise IngestionError("no data rows in labels")
    if header == ["label"]:
        labels = np.empty(len(body), dtype=np.int64)
        for i, row in enumerate(body, start=1):
            if len(row) != 1:
                raise IngestionError(f"ragged row: labels data row {i}")
            cell = row[0]
            parsed = _parse_float(cell)
            if parsed is None or not float(parsed).is_integer():
                raise IngestionError(f"label {cell!r} at data row {i} is not an integer")
            labels[i - 1] = int(parsed)
    elif header == [f"y_{i}" for i in range(len(header))]:
        if len(header) != k:
            raise IngestionError(
                f"one-hot labels have {len(header)} columns but probs have {k} classes"
            )
        labels = np.empty(len(body), dtype=np.int64)
        for i, row in enumerate(body, start=1):
            if len(row) != k:
                raise IngestionError(f"ragged row: labels data row {i}")
            cells = [_parse_float(c) for c in row]
            if any(c not in (0.0, 1.0) for c in cells):
                raise IngestionError(f"one-hot row {i} has entries outside {{0, 1}}")
            if sum(cells) != 1.0:
                raise IngestionError(f"one-hot row {i} not summing to exactly 1")
            labels[i - 1] = cells.index(1.0)
    else:
        raise IngestionError(
            f"labels header must be ['label'] or y_0..y_{{K-1}}, got {header}"
        )
    if (labels < 0).any() or (labels >= k).any():
        bad = int(np.argmax((labels < 0) | (labels >= k)))
        raise IngestionError(f"label out of range at data row {bad + 1}: {labels[bad]} with K={k}")
    return labels


def ingest_predictions(
    probs_source: str | IO[str], labels_source: str | IO[str]
) -> tuple[np.ndarray, np.ndarray, int]:
    """Parse probability and label CSVs; returns ``(probs, labels, k)``.

    One-hot label blocks are collapsed to class indices. Probability rows
    must sum to 1 within 1e-6 and are never renormalized.
    """
    probs_rows = _read_rows(probs_source)
    if not probs_rows:
        raise IngestionError("empty input: no header row in probs")
    probs = _probs_from_rows(probs_rows)
    k = probs.shape[1]

    labels_rows = _read_rows(labels_source)
    if not labels_rows:
        raise IngestionError("empty input: no header row in labels")
    labels = _labels_from_rows(labels_rows, k)
    if len(labels) != probs.shape[0]:
        raise IngestionError(
            f"labels have {len(labels)} rows but probs have {probs.shape[0]}"
        )
    return probs, labels, k


def project_class_view(
    model: ModelRecord, mode: ViewMode, session_id: str = ""
) -> ClassView:
    """Project a model's probability matrix onto a (score, outcome) view.

    Confidence mode scores by the top probability, with argmax ties broken
    to the lowest class index; classwise mode scores by one class's
    probability with outcome 1 where that class is the true label.
    """
    if mode.kind == "classwise":
        i = mode.class_index
        assert i is not None
        if i >= model.k:
            raise ValidationError(f"class index {i} out of range for K={model.k}")
        scores = model.probs[:, i].copy()
        outcomes = (model.labels == i).astype(np.int64)
    else:
        scores = model.probs.max(axis=1)
        predicted = np.argmax(model.probs, axis=1)
        outcomes = (predicted == model.labels).astype(np.int64)
    return ClassView(mode, scores, outcomes, (model.name, session_id))


def _format_cell(value: float) -> str:
    return repr(float(value))


def features_to_csv(table: FeatureTable) -> str:
    """Serialize a table back to CSV; numeric cells round-trip exactly."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.column_names)
    decoded = [col.decoded() for col in table.columns]
    for i in range(table.n_rows):
        writer.writerow(
            [
                _format_cell(col_vals[i]) if col.kind == NUMERIC else col_vals[i]
                for col, col_vals in zip(table.columns, decoded)
            ]
        )
    return out.getvalue()


def probs_to_csv(probs: np.ndarray) -> str:
    probs = np.asarray(probs, dtype=np.float64)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f"p_{i}" for i in range(probs.shape[1])])
    for row in probs:
        writer.writerow([_format_cell(v) for v in row])
    return out.getvalue()


def labels_to_csv(labels: np.ndarray) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["label"])
    for value in np.asarray(labels, dtype=np.int64):
        writer.writerow([int(value)])
    return out.getvalue()
