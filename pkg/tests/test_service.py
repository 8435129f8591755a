import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from caliper import (
    BinSpec,
    LrdParams,
    ViewMode,
    bin_stats,
    classwise,
    confusion_matrix,
    feature_means,
    filter_by_predicate,
    filter_by_score_range,
    fit_lrd,
    ingest_features,
    ingest_predictions,
    lrd_to_payload,
    metrics_report,
    predicate_from_payload,
)
from caliper import jsonio
from caliper.binning import score_histogram
from caliper.dataset import EvaluationSession, ModelRecord
from caliper.service import create_app

from service_fixture import (
    FEATURES_CSV,
    GOLDEN_REQUESTS,
    LABELS_CSV,
    PROBS_CSV,
    SUBGROUP,
    build_session,
)

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture()
def client():
    return TestClient(create_app())


@pytest.fixture()
def sid(client):
    return build_session(client)


def core_session(session_id: str) -> EvaluationSession:
    """The fixture session rebuilt directly from the core modules."""
    table = ingest_features(FEATURES_CSV)
    probs, labels, k = ingest_predictions(PROBS_CSV, LABELS_CSV)
    session = EvaluationSession(session_id, table)
    session.add_model(ModelRecord("rf", probs, labels, k))
    return session


class TestSessionLifecycle:
    def test_create_session(self, client):
        response = client.post("/sessions", json={"features_csv": FEATURES_CSV})
        assert response.status_code == 201
        body = response.json()
        assert body["n_rows"] == 12
        assert body["columns"] == [
            {"name": "age", "kind": "numeric"},
            {"name": "sex", "kind": "categorical"},
        ]

    def test_create_session_from_path(self, client, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text(FEATURES_CSV)
        response = client.post("/sessions", json={"features_path": str(path)})
        assert response.status_code == 201

    def test_bad_csv_is_400(self, client):
        response = client.post("/sessions", json={"features_csv": "a,b\n1\n"})
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "bad_request"

    def test_missing_body_key_is_400(self, client):
        response = client.post("/sessions", json={})
        assert response.status_code == 400

    def test_unknown_session_is_404(self, client):
        response = client.get("/sessions/nope/features")
        assert response.status_code == 404
        assert response.json()["error"]["code"] == "not_found"

    def test_duplicate_model_name_rejected(self, client, sid):
        response = client.post(
            f"/sessions/{sid}/models",
            json={"name": "rf", "probs_csv": PROBS_CSV, "labels_csv": LABELS_CSV},
        )
        assert response.status_code == 400

    def test_unknown_model_is_404(self, client, sid):
        response = client.get(f"/sessions/{sid}/diagram?model=missing")
        assert response.status_code == 404

    def test_unknown_subgroup_is_404(self, client, sid):
        response = client.get(f"/sessions/{sid}/diagram?model=rf&subgroup=nope")
        assert response.status_code == 404


class TestDiagramEndpoint:
    def test_counts_sum_and_bins_bounded(self, client, sid):
        body = client.get(f"/sessions/{sid}/diagram?model=rf&bins=10").json()
        assert sum(b["count"] for b in body["diagram"]["bins"]) == 12
        assert len(body["diagram"]["bins"]) <= 10

    def test_payload_matches_core_serialization(self, client, sid):
        response = client.get(f"/sessions/{sid}/diagram?model=rf&bins=4&strategy=uniform")
        session = core_session(sid)
        record = session.model("rf")
        spec = BinSpec("uniform", 4)
        view = session.class_view("rf", ViewMode("confidence"))
        expected = {
            "model": "rf",
            "mode": "confidence",
            "class_index": None,
            "subgroup": None,
            "diagram": bin_stats(view, spec).to_payload(),
            "metrics": metrics_report(record, ViewMode("confidence"), spec, session_id=sid).to_payload(),
            "density": score_histogram(view.scores, 25),
        }
        assert response.content == jsonio.dumps(expected).encode()

    def test_classwise_subgroup_matches_core(self, client, sid):
        response = client.get(
            f"/sessions/{sid}/diagram?model=rf&mode=classwise&class=1&bins=3&subgroup=older"
        )
        session = core_session(sid)
        record = session.model("rf")
        predicate = predicate_from_payload(SUBGROUP)
        indices = filter_by_predicate(session, predicate)
        spec = BinSpec("uniform", 3)
        view = session.class_view("rf", classwise(1)).take(indices)
        expected = {
            "model": "rf",
            "mode": "classwise",
            "class_index": 1,
            "subgroup": "older",
            "diagram": bin_stats(view, spec).to_payload(),
            "metrics": metrics_report(record, classwise(1), spec, indices=indices, session_id=sid).to_payload(),
            "density": score_histogram(view.scores, 25),
        }
        assert response.content == jsonio.dumps(expected).encode()

    def test_repeated_gets_identical(self, client, sid):
        url = f"/sessions/{sid}/diagram?model=rf&bins=7&strategy=quantile"
        assert client.get(url).content == client.get(url).content

    def test_classwise_without_class_is_400(self, client, sid):
        response = client.get(f"/sessions/{sid}/diagram?model=rf&mode=classwise")
        assert response.status_code == 400


class TestLrdEndpoint:
    def test_payload_matches_core_serialization(self, client, sid):
        response = client.get(f"/sessions/{sid}/lrd?model=rf&max_bins=8&seed=0")
        session = core_session(sid)
        view = session.class_view("rf", ViewMode("confidence"))
        diagram = fit_lrd(view, LrdParams(max_bins=8, seed=0))
        expected = {
            "model": "rf",
            "mode": "confidence",
            "class_index": None,
            "subgroup": None,
            "lrd": lrd_to_payload(diagram, view.scores),
        }
        assert response.content == jsonio.dumps(expected).encode()

    def test_band_has_bounds(self, client, sid):
        body = client.get(
            f"/sessions/{sid}/lrd?model=rf&max_bins=8&seed=0&band=true&bags=3"
        ).json()
        for point in body["lrd"]["grid"]:
            assert {"x", "f", "lo", "hi"} <= set(point)
            assert 0.0 < point["lo"] <= point["hi"] < 1.0


class TestRegionEndpoint:
    def test_matches_core_selection(self, client, sid):
        body = client.get(f"/sessions/{sid}/region?model=rf&lo=0.5&hi=1.0").json()
        session = core_session(sid)
        view = session.class_view("rf", ViewMode("confidence"))
        matched = filter_by_score_range(view, 0.5, 1.0)
        assert body["count"] == len(matched)
        assert body["indices"] == [int(i) for i in matched]
        expected_means = feature_means(session, matched)
        assert body["feature_means"]["age"] == pytest.approx(expected_means["age"])
        expected_confusion = confusion_matrix(session.model("rf"), matched).to_payload()
        assert body["confusion"] == expected_confusion

    def test_rows_carry_features_and_scores(self, client, sid):
        body = client.get(f"/sessions/{sid}/region?model=rf&lo=0.5&hi=1.0&limit=3").json()
        assert len(body["rows"]) == 3
        row = body["rows"][0]
        assert {"index", "score", "outcome", "label", "predicted", "features"} == set(row)
        assert {"age", "sex"} == set(row["features"])

    def test_empty_match_returns_markers(self, client, sid):
        body = client.get(f"/sessions/{sid}/region?model=rf&lo=0.95&hi=1.0").json()
        assert body["count"] == 0
        assert body["rows"] == []
        assert body["feature_means"] is None
        assert body["confusion"] is None

    def test_pagination(self, client, sid):
        full = client.get(f"/sessions/{sid}/region?model=rf&lo=0.0&hi=1.0&limit=100").json()
        page = client.get(f"/sessions/{sid}/region?model=rf&lo=0.0&hi=1.0&limit=4&offset=4").json()
        assert page["indices"] == full["indices"][4:8]

    def test_subgroup_scoping(self, client, sid):
        body = client.get(
            f"/sessions/{sid}/region?model=rf&lo=0.0&hi=1.0&subgroup=older"
        ).json()
        session = core_session(sid)
        indices = filter_by_predicate(session, predicate_from_payload(SUBGROUP))
        assert body["count"] == len(indices)
        assert body["indices"] == [int(i) for i in indices]


class TestSubgroupEndpoints:
    def test_create_and_list(self, client, sid):
        response = client.post(
            f"/sessions/{sid}/subgroups",
            json={"label": "men", "constraints": [{"column": "sex", "categories": ["M"]}]},
        )
        assert response.status_code == 201
        assert response.json() == {"label": "men", "n_match": 6}
        listed = client.get(f"/sessions/{sid}/subgroups").json()
        assert [s["label"] for s in listed["subgroups"]] == ["older", "men"]

    def test_duplicate_label_rejected(self, client, sid):
        response = client.post(f"/sessions/{sid}/subgroups", json=SUBGROUP)
        assert response.status_code == 400

    def test_unknown_column_rejected(self, client, sid):
        response = client.post(
            f"/sessions/{sid}/subgroups",
            json={"label": "x", "constraints": [{"column": "height", "lo": 0, "hi": 1}]},
        )
        assert response.status_code == 404


class TestGoldenResponses:
    @pytest.mark.parametrize("name", sorted(GOLDEN_REQUESTS))
    def test_golden(self, client, sid, name):
        golden = GOLDEN_DIR / f"{name}.json"
        assert golden.exists(), "run python3 tests/generate_goldens.py"
        response = client.get(GOLDEN_REQUESTS[name].format(sid=sid))
        assert response.status_code == 200
        assert response.content == golden.read_bytes()
