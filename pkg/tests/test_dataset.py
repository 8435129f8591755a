import numpy as np
import pytest

from caliper import (
    CONFIDENCE,
    EvaluationSession,
    IngestionError,
    ModelRecord,
    NotFoundError,
    ValidationError,
    ViewMode,
    classwise,
    features_to_csv,
    ingest_features,
    ingest_predictions,
    labels_to_csv,
    probs_to_csv,
    project_class_view,
)


class TestIngestFeatures:
    def test_kind_inference(self):
        table = ingest_features("age,sex\n31,M\n45,F\n")
        assert table.n_rows == 2
        assert [c.kind for c in table.columns] == ["numeric", "categorical"]
        assert table.column("age").values.tolist() == [31.0, 45.0]
        assert table.column("sex").categories == ("M", "F")

    def test_empty_body(self):
        with pytest.raises(IngestionError, match="no data rows"):
            ingest_features("age,sex\n")

    def test_mixed_parse_is_categorical(self):
        table = ingest_features("x\n1\n2\nabc\n")
        assert table.column("x").kind == "categorical"

    def test_ragged_row(self):
        with pytest.raises(IngestionError, match="ragged"):
            ingest_features("a,b\n1,2\n3\n")

    def test_duplicate_columns(self):
        with pytest.raises(IngestionError, match="duplicate"):
            ingest_features("a,a\n1,2\n")

    def test_missing_cell(self):
        with pytest.raises(IngestionError, match="row 2, column 'b'"):
            ingest_features("a,b\n1,2\n3,\n")

    def test_non_finite_numeric(self):
        with pytest.raises(IngestionError, match="non-finite.*row 2, column 'a'"):
            ingest_features("a\n1\ninf\n")

    def test_kind_override(self):
        table = ingest_features("zip\n10001\n94110\n", kinds={"zip": "categorical"})
        assert table.column("zip").kind == "categorical"

    def test_numeric_override_rejects_text(self):
        with pytest.raises(IngestionError, match="non-numeric"):
            ingest_features("x\nhello\n", kinds={"x": "numeric"})

    def test_unknown_override_column(self):
        with pytest.raises(IngestionError, match="unknown column"):
            ingest_features("x\n1\n", kinds={"y": "numeric"})

    def test_quoted_cells(self):
        table = ingest_features('name,val\n"Smith, Jane",3\n"O""Brien",4\n')
        assert table.column("name").categories == ('Smith, Jane', 'O"Brien')


class TestIngestPredictions:
    def test_one_hot_collapse(self):
        probs, labels, k = ingest_predictions(
            "p_0,p_1\n0.2,0.8\n0.6,0.4\n", "y_0,y_1\n0,1\n1,0\n"
        )
        assert labels.tolist() == [1, 0]
        assert k == 2

    def test_index_labels(self):
        _, labels, _ = ingest_predictions("p_0,p_1\n0.2,0.8\n0.6,0.4\n", "label\n1\n0\n")
        assert labels.tolist() == [1, 0]

    def test_row_sum_violation_reports_worst(self):
        with pytest.raises(IngestionError, match="row 2 sum 1.1 exceeds tolerance"):
            ingest_predictions("p_0,p_1\n0.5,0.5\n0.5,0.6\n", "label\n0\n1\n")

    def test_one_hot_not_exactly_one(self):
        with pytest.raises(IngestionError, match="not summing to exactly 1"):
            ingest_predictions("p_0,p_1\n0.5,0.5\n", "y_0,y_1\n1,1\n")

    def test_label_out_of_range(self):
        with pytest.raises(IngestionError, match="label out of range"):
            ingest_predictions("p_0,p_1\n0.5,0.5\n0.5,0.5\n0.5,0.5\n", "label\n0\n1\n2\n")

    def test_negative_probability(self):
        with pytest.raises(IngestionError, match="negative"):
            ingest_predictions("p_0,p_1\n-0.1,1.1\n", "label\n0\n")

    def test_probability_above_one(self):
        with pytest.raises(IngestionError, match="above 1"):
            ingest_predictions("p_0,p_1\n1.05,-0.0\n", "label\n0\n")

    def test_bad_header(self):
        with pytest.raises(IngestionError, match="p_0"):
            ingest_predictions("a,b\n0.5,0.5\n", "label\n0\n")

    def test_non_integer_label(self):
        with pytest.raises(IngestionError, match="not an integer"):
            ingest_predictions("p_0,p_1\n0.5,0.5\n", "label\n0.5\n")

    def test_length_mismatch(self):
        with pytest.raises(IngestionError, match="labels have 1 rows"):
            ingest_predictions("p_0,p_1\n0.5,0.5\n0.4,0.6\n", "label\n0\n")


class TestProjectClassView:
    def test_confidence(self):
        m = ModelRecord("m", np.array([[0.2, 0.5, 0.3]]), np.array([1]))
        v = project_class_view(m, CONFIDENCE)
        assert v.scores.tolist() == [0.5]
        assert v.outcomes.tolist() == [1]

    def test_classwise(self):
        m = ModelRecord("m", np.array([[0.2, 0.5, 0.3]]), np.array([1]))
        v = project_class_view(m, classwise(0))
        assert v.scores.tolist() == [0.2]
        assert v.outcomes.tolist() == [0]

    def test_argmax_tie_breaks_low(self):
        m = ModelRecord("m", np.array([[0.5, 0.5]]), np.array([1]))
        v = project_class_view(m, CONFIDENCE)
        assert v.outcomes.tolist() == [0]

    def test_class_index_out_of_range(self):
        m = ModelRecord("m", np.array([[0.5, 0.5]]), np.array([1]))
        with pytest.raises(ValidationError, match="out of range"):
            project_class_view(m, classwise(2))

    def test_classwise_scores_sum_to_one(self):
        rng = np.random.default_rng(3)
        raw = rng.uniform(0.01, 1.0, (40, 4))
        probs = raw / raw.sum(axis=1, keepdims=True)
        m = ModelRecord("m", probs, rng.integers(0, 4, 40))
        total = sum(project_class_view(m, classwise(i)).scores for i in range(4))
        assert np.allclose(total, 1.0, atol=1e-6)

    def test_confidence_accuracy_matches_direct(self):
        rng = np.random.default_rng(4)
        raw = rng.uniform(0.01, 1.0, (100, 3))
        probs = raw / raw.sum(axis=1, keepdims=True)
        labels = rng.integers(0, 3, 100)
        m = ModelRecord("m", probs, labels)
        v = project_class_view(m, CONFIDENCE)
        assert v.outcomes.mean() == (np.argmax(probs, axis=1) == labels).mean()


class TestViewMode:
    def test_classwise_requires_index(self):
        with pytest.raises(ValidationError):
            ViewMode("classwise")

    def test_confidence_takes_no_index(self):
        with pytest.raises(ValidationError):
            ViewMode("confidence", 1)

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            ViewMode("other")


class TestModelRecordValidation:
    def test_row_sum(self):
        with pytest.raises(ValidationError, match="exceeds tolerance"):
            ModelRecord("m", np.array([[0.7, 0.7]]), np.array([0]))

    def test_needs_two_classes(self):
        with pytest.raises(ValidationError, match="two classes"):
            ModelRecord("m", np.array([[1.0]]), np.array([0]))

    def test_label_range(self):
        with pytest.raises(ValidationError, match="label out of range"):
            ModelRecord("m", np.array([[0.5, 0.5]]), np.array([2]))


class TestEvaluationSession:
    def _session(self):
        table = ingest_features("age\n31\n45\n")
        return EvaluationSession("s1", table)

    def test_add_and_get(self):
        s = self._session()
        s.add_model(ModelRecord("m", np.array([[0.5, 0.5], [0.1, 0.9]]), np.array([0, 1])))
        assert s.model("m").k == 2

    def test_duplicate_name(self):
        s = self._session()
        m = ModelRecord("m", np.array([[0.5, 0.5], [0.1, 0.9]]), np.array([0, 1]))
        s.add_model(m)
        with pytest.raises(ValidationError, match="already registered"):
            s.add_model(ModelRecord("m", np.array([[0.5, 0.5], [0.1, 0.9]]), np.array([0, 1])))

    def test_row_count_mismatch(self):
        s = self._session()
        with pytest.raises(ValidationError, match="rows"):
            s.add_model(ModelRecord("m", np.array([[0.5, 0.5]]), np.array([0])))

    def test_unknown_model(self):
        with pytest.raises(NotFoundError):
            self._session().model("nope")


class TestRoundTrip:
    def test_features_csv_round_trip_identity(self):
        csv_text = "age,sex,score\n31,M,0.25\n45,F,0.125\n62,F,1e-3\n"
        table = ingest_features(csv_text)
        again = ingest_features(features_to_csv(table))
        for col, col2 in zip(table.columns, again.columns):
            assert col.kind == col2.kind
            if col.kind == "numeric":
                assert np.array_equal(col.values, col2.values)
            else:
                assert col.decoded() == col2.decoded()

    def test_predictions_round_trip(self):
        rng = np.random.default_rng(9)
        raw = rng.uniform(0.01, 1.0, (25, 3))
        probs = raw / raw.sum(axis=1, keepdims=True)
        labels = rng.integers(0, 3, 25)
        probs2, labels2, k = ingest_predictions(probs_to_csv(probs), labels_to_csv(labels))
        assert k == 3
        assert np.array_equal(probs, probs2)
        assert np.array_equal(labels, labels2)
