"""Session-oriented JSON-over-HTTP API.

Every handler is a thin wrapper over one core operation; payloads are built
from the core modules' own ``to_payload`` serializers and emitted through the
same deterministic JSON writer, so a handler response is byte-identical to
serializing the core result directly. Sessions are immutable between appends,
which makes concurrent reads safe; writes are serialized per session.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.staticfiles import StaticFiles

from . import jsonio
from .binning import BinSpec, bin_stats, score_histogram
from .dataset import (
    CATEGORICAL,
    EvaluationSession,
    ModelRecord,
    ViewMode,
    ingest_features,
    ingest_predictions,
)
from .errors import CaliperError, NotFoundError, ValidationError
from .lrd import LrdParams, fit_lrd, fit_lrd_with_band, lrd_to_payload
from .metrics import confusion_matrix, metrics_report
from .selection import (
    SubgroupPredicate,
    feature_histogram,
    feature_means,
    filter_by_predicate,
    filter_by_score_range,
    predicate_from_payload,
)

DENSITY_CELLS = 25
DEFAULT_PAGE_LIMIT = 100


@dataclass
class _SessionEntry:
    session: EvaluationSession
    subgroups: dict[str, SubgroupPredicate] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-memory sessions plus a cache of computed response bodies.

    Cache entries are pure functions of immutable inputs, so hits and misses
    (or evictions) can never change a response.
    """

    def __init__(self) -> None:
        self._entries: dict[str, _SessionEntry] = {}
        self._lock = threading.Lock()
        self._cache: dict[tuple, str] = {}
        self._cache_lock = threading.Lock()
        self._counter = 0

    def create_session(self, session_factory) -> EvaluationSession:
        with self._lock:
            self._counter += 1
            session_id = f"s{self._counter}"
            session = session_factory(session_id)
            self._entries[session_id] = _SessionEntry(session)
            return session

    def entry(self, session_id: str) -> _SessionEntry:
        try:
            return self._entries[session_id]
        except KeyError:
            raise NotFoundError(f"unknown session {session_id!r}") from None

    def cached(self, key: tuple, compute) -> str:
        with self._cache_lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        body = compute()
        with self._cache_lock:
            self._cache[key] = body
        return body


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=jsonio.dumps(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error_response(code: str, message: str, status_code: int) -> Response:
    return _json_response({"error": {"code": code, "message": message}}, status_code)


def _source_text(body: dict, kind: str) -> str:
    inline, path = body.get(f"{kind}_csv"), body.get(f"{kind}_path")
    if inline is not None and path is not None:
        raise ValidationError(f"provide either {kind}_csv or {kind}_path, not both")
    if inline is not None:
        return inline
    if path is not None:
        file = Path(path)
        if not file.exists():
            raise NotFoundError(f"{kind} file {path!r} does not exist")
        return file.read_text(encoding="utf-8")
    raise ValidationError(f"missing {kind}_csv or {kind}_path")


def _parse_mode(mode: str, class_index: int | None) -> ViewMode:
    if mode == "confidence":
        return ViewMode("confidence")
    if mode == "classwise":
        if class_index is None:
            raise ValidationError("classwise mode requires the class parameter")
        return ViewMode("classwise", class_index)
    raise ValidationError(f"unknown mode {mode!r}")


def _resolve_subgroup(entry: _SessionEntry, name: str | None) -> SubgroupPredicate | None:
    if not name:
        return None
    try:
        return entry.subgroups[name]
    except KeyError:
        raise NotFoundError(f"unknown subgroup {name!r}") from None


def _subgroup_indices(entry: _SessionEntry, name: str | None) -> np.ndarray | None:
    predicate = _resolve_subgroup(entry, name)
    if predicate is None:
        return None
    return filter_by_predicate(entry.session, predicate)


def _instance_row(session: EvaluationSession, model: ModelRecord, view, index: int) -> dict:
    features = {}
    for column in session.features.columns:
        if column.kind == CATEGORICAL:
            features[column.name] = column.categories[int(column.values[index])]
        else:
            features[column.name] = float(column.values[index])
    return {
        "index": index,
        "score": float(view.scores[index]),
        "outcome": int(view.outcomes[index]),
        "label": int(model.labels[index]),
        "predicted": int(np.argmax(model.probs[index])),
        "features": features,
    }


def create_app(store: SessionStore | None = None, ui_dir: str | None = None) -> FastAPI:
    """Build the API app; ``ui_dir`` optionally mounts static workbench assets."""
    store = store if store is not None else SessionStore()
    app = FastAPI(title="caliper", docs_url=None, redoc_url=None)
    app.state.store = store

    @app.exception_handler(CaliperError)
    async def _caliper_error(_request: Request, exc: CaliperError) -> Response:
        if isinstance(exc, NotFoundError):
            return _error_response("not_found", str(exc), 404)
        return _error_response("bad_request", str(exc), 400)

    @app.exception_handler(RequestValidationError)
    async def _request_error(_request: Request, exc: RequestValidationError) -> Response:
        return _error_response("bad_request", str(exc.errors()), 400)

    @app.exception_handler(Exception)
    async def _internal_error(_request: Request, exc: Exception) -> Response:
        return _error_response("internal", str(exc), 500)

    @app.post("/sessions")
    async def create_session(request: Request) -> Response:
        body = await request.json()
        text = _source_text(body, "features")
        kinds = body.get("kinds")
        features = ingest_features(text, kinds=kinds)

        def factory(session_id: str) -> EvaluationSession:
            return EvaluationSession(session_id, features)

        session = store.create_session(factory)
        payload = {
            "session_id": session.id,
            "n_rows": features.n_rows,
            "columns": [{"name": c.name, "kind": c.kind} for c in features.columns],
        }
        return _json_response(payload, 201)

    @app.post("/sessions/{session_id}/models")
    async def add_model(session_id: str, request: Request) -> Response:
        entry = store.entry(session_id)
        body = await request.json()
        name = body.get("name")
        if not name:
            raise ValidationError("missing model name")
        probs, labels, k = ingest_predictions(
            _source_text(body, "probs"), _source_text(body, "labels")
        )
        record = ModelRecord(name, probs, labels, k)
        with entry.lock:
            entry.session.add_model(record)
        return _json_response({"model": name, "n": record.n, "k": k}, 201)

    @app.get("/sessions/{session_id}/features")
    async def features(session_id: str, subgroup: str | None = None) -> Response:
        entry = store.entry(session_id)
        indices = _subgroup_indices(entry, subgroup)
        table = entry.session.features
        n = table.n_rows if indices is None else int(len(indices))
        payload = {
            "n": n,
            "subgroup": subgroup or None,
            "columns": [
                feature_histogram(entry.session, name, indices).to_payload()
                for name in table.column_names
            ],
        }
        return _json_response(payload)

    @app.get("/sessions/{session_id}/diagram")
    async def diagram(
        session_id: str,
        model: str,
        mode: str = "confidence",
        class_index: int | None = Query(None, alias="class"),
        bins: int = 10,
        strategy: str = "uniform",
        subgroup: str | None = None,
    ) -> Response:
        entry = store.entry(session_id)
        key = ("diagram", session_id, model, mode, class_index, bins, strategy, subgroup)

        def compute() -> str:
            record = entry.session.model(model)
            view_mode = _parse_mode(mode, class_index)
            spec = BinSpec(strategy, bins)
            view = entry.session.class_view(model, view_mode)
            indices = _subgroup_indices(entry, subgroup)
            if indices is not None:
                view = view.take(indices)
            report = metrics_report(
                record, view_mode, spec, indices=indices, session_id=session_id
            )
            payload = {
                "model": model,
                "mode": mode,
                "class_index": class_index,
                "subgroup": subgroup or None,
                "diagram": bin_stats(view, spec).to_payload(),
                "metrics": report.to_payload(),
                "density": score_histogram(view.scores, DENSITY_CELLS),
            }
            return jsonio.dumps(payload)

        body = store.cached(key, compute)
        return Response(content=body, media_type="application/json")

    @app.get("/sessions/{session_id}/lrd")
    async def lrd(
        session_id: str,
        model: str,
        mode: str = "confidence",
        class_index: int | None = Query(None, alias="class"),
        subgroup: str | None = None,
        max_bins: int = 256,
        band: bool = False,
        bags: int = 8,
        seed: int = 0,
    ) -> Response:
        entry = store.entry(session_id)
        key = ("lrd", session_id, model, mode, class_index, subgroup, max_bins, band, bags, seed)

        def compute() -> str:
            view_mode = _parse_mode(mode, class_index)
            view = entry.session.class_view(model, view_mode)
            indices = _subgroup_indices(entry, subgroup)
            if indices is not None:
                view = view.take(indices)
            params = LrdParams(max_bins=max_bins, seed=seed)
            if band:
                diagram = fit_lrd_with_band(view, params, bags=bags)
            else:
                diagram = fit_lrd(view, params)
            payload = {
                "model": model,
                "mode": mode,
                "class_index": class_index,
                "subgroup": subgroup or None,
                "lrd": lrd_to_payload(diagram, view.scores),
            }
            return jsonio.dumps(payload)

        body = store.cached(key, compute)
        return Response(content=body, media_type="application/json")

    @app.get("/sessions/{session_id}/region")
    async def region(
        session_id: str,
        model: str,
        lo: float,
        hi: float,
        mode: str = "confidence",
        class_index: int | None = Query(None, alias="class"),
        subgroup: str | None = None,
        limit: int = DEFAULT_PAGE_LIMIT,
        offset: int = 0,
    ) -> Response:
        entry = store.entry(session_id)
        if limit < 1 or offset < 0:
            raise ValidationError("limit must be >= 1 and offset >= 0")
        record = entry.session.model(model)
        view_mode = _parse_mode(mode, class_index)
        view = entry.session.class_view(model, view_mode)
        indices = _subgroup_indices(entry, subgroup)
        if indices is not None:
            scoped = view.take(indices)
            matched = indices[filter_by_score_range(scoped, lo, hi)]
        else:
            matched = filter_by_score_range(view, lo, hi)
        count = int(len(matched))
        page = matched[offset : offset + limit]
        payload = {
            "count": count,
            "offset": offset,
            "limit": limit,
            "indices": [int(i) for i in page],
            "rows": [
                _instance_row(entry.session, record, view, int(i)) for i in page
            ],
            "feature_means": feature_means(entry.session, matched) if count else None,
            "confusion": confusion_matrix(record, matched).to_payload() if count else None,
        }
        return _json_response(payload)

    @app.post("/sessions/{session_id}/subgroups")
    async def create_subgroup(session_id: str, request: Request) -> Response:
        entry = store.entry(session_id)
        body = await request.json()
        predicate = predicate_from_payload(body)
        if not predicate.label:
            raise ValidationError("subgroup needs a non-empty label")
        # validate the constraints against the session's columns right away
        matched = filter_by_predicate(entry.session, predicate)
        with entry.lock:
            if predicate.label in entry.subgroups:
                raise ValidationError(f"subgroup {predicate.label!r} already exists")
            entry.subgroups[predicate.label] = predicate
        return _json_response({"label": predicate.label, "n_match": int(len(matched))}, 201)

    @app.get("/sessions/{session_id}/subgroups")
    async def list_subgroups(session_id: str) -> Response:
        entry = store.entry(session_id)
        payload = {"subgroups": [p.to_payload() for p in entry.subgroups.values()]}
        return _json_response(payload)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
