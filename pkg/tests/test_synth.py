import numpy as np
import pytest

from caliper import (
    BinSpec,
    Distortion,
    LrdParams,
    ModelRecord,
    SynthSpec,
    ValidationError,
    bin_stats,
    classwise,
    drop_informative,
    ece,
    evaluate_lrd,
    fit_lrd,
    gen_classification,
    ingest_features,
    ingest_predictions,
    features_to_csv,
    labels_to_csv,
    predictions_from_posteriors,
    prior_shift,
    probs_to_csv,
    project_class_view,
    temperature,
)


class TestGenerate:
    def test_majority_fraction_concentrates(self):
        weights = tuple([0.5] + [0.5 / 9] * 9)
        spec = SynthSpec(n=10_000, classes=10, class_weights=weights, seed=42)
        result = gen_classification(spec)
        fraction = (result.labels == 0).mean()
        assert abs(fraction - 0.5) <= 3 * np.sqrt(0.25 / 10_000)

    def test_separated_centroids_give_confident_posteriors(self):
        spec = SynthSpec(n=5000, classes=2, informative=1, noise=0, centroid_scale=4.0, seed=42)
        result = gen_classification(spec)
        assert result.posteriors.max(axis=1).mean() > 0.9

    def test_deterministic(self):
        spec = SynthSpec(n=500, classes=3, informative=2, noise=1, seed=11)
        a, b = gen_classification(spec), gen_classification(spec)
        assert np.array_equal(a.labels, b.labels)
        assert np.array_equal(a.posteriors, b.posteriors)
        assert all(
            np.array_equal(ca.values, cb.values)
            for ca, cb in zip(a.features.columns, b.features.columns)
        )

    def test_posterior_rows_on_simplex(self):
        result = gen_classification(SynthSpec(n=2000, classes=5, informative=3, noise=2, seed=3))
        sums = result.posteriors.sum(axis=1)
        assert np.max(np.abs(sums - 1.0)) < 1e-12
        assert result.posteriors.min() >= 0.0

    def test_undistorted_predictor_is_calibrated(self):
        result = gen_classification(SynthSpec(n=20_000, classes=10, seed=11))
        probs = predictions_from_posteriors(result.posteriors)
        model = ModelRecord("cal", probs, result.labels)
        for i in range(10):
            view = project_class_view(model, classwise(i))
            assert ece(bin_stats(view, BinSpec("uniform", 15))) < 0.01


class TestDistortions:
    def test_none_is_identity(self):
        post = np.array([[0.2, 0.8], [0.5, 0.5]])
        assert np.array_equal(predictions_from_posteriors(post), post)

    def test_temperature_symmetric_fixed_point(self):
        out = predictions_from_posteriors(np.array([[0.5, 0.5]]), temperature(0.5))
        assert np.allclose(out, [[0.5, 0.5]])

    def test_temperature_hand_value(self):
        out = predictions_from_posteriors(np.array([[0.8, 0.2]]), temperature(0.5))
        assert out[0, 0] == pytest.approx(0.64 / 0.68)
        assert out[0, 1] == pytest.approx(0.04 / 0.68)

    def test_temperature_requires_positive(self):
        with pytest.raises(ValidationError):
            temperature(-1.0)

    def test_prior_shift_reweights(self):
        post = np.array([[0.9, 0.1], [0.8, 0.2]])
        out = predictions_from_posteriors(
            post, prior_shift([0.5, 0.5]), base_weights=np.array([0.9, 0.1])
        )
        expected_row0 = np.array([0.9 / 0.9, 0.1 / 0.1])
        expected_row0 = expected_row0 / expected_row0.sum()
        assert np.allclose(out[0], expected_row0)

    def test_prior_shift_weight_length(self):
        with pytest.raises(ValidationError):
            predictions_from_posteriors(np.array([[0.5, 0.5]]), prior_shift([1.0]))

    def test_rows_stay_on_simplex(self):
        rng = np.random.default_rng(8)
        raw = rng.uniform(0.01, 1, (300, 4))
        post = raw / raw.sum(axis=1, keepdims=True)
        for distortion in (temperature(0.5), temperature(2.0), prior_shift([0.25] * 4)):
            out = predictions_from_posteriors(post, distortion)
            assert np.max(np.abs(out.sum(axis=1) - 1.0)) < 1e-12


class TestDropInformative:
    def test_keep_zero_yields_priors(self):
        weights = tuple([0.5] + [0.5 / 9] * 9)
        result = gen_classification(SynthSpec(n=2000, classes=10, class_weights=weights, seed=42))
        reduced = drop_informative(result, 0)
        assert np.allclose(reduced.posteriors, np.tile(result.weights, (2000, 1)))

    def test_keep_zero_majority_view_is_calibrated(self):
        weights = tuple([0.5] + [0.5 / 9] * 9)
        result = gen_classification(SynthSpec(n=10_000, classes=10, class_weights=weights, seed=42))
        reduced = drop_informative(result, 0)
        probs = predictions_from_posteriors(reduced.posteriors)
        model = ModelRecord("base-rate", probs, reduced.labels)
        view = project_class_view(model, classwise(0))
        assert ece(bin_stats(view, BinSpec("uniform", 15))) < 0.01

    def test_keep_all_is_identity(self):
        result = gen_classification(SynthSpec(n=300, classes=3, informative=4, noise=2, seed=9))
        kept = drop_informative(result, 4)
        assert np.allclose(kept.posteriors, result.posteriors)

    def test_keep_half_reduces_confidence(self):
        result = gen_classification(SynthSpec(n=20_000, classes=10, seed=5))
        reduced = drop_informative(result, 5)
        assert reduced.posteriors.max(axis=1).mean() < result.posteriors.max(axis=1).mean()

    def test_keep_out_of_range(self):
        result = gen_classification(SynthSpec(n=100, classes=2, informative=2, noise=1, seed=1))
        with pytest.raises(ValidationError):
            drop_informative(result, 3)


class TestTemperatureDirection:
    def _lrd_high_region_bias(self, t, seed=2):
        spec = SynthSpec(n=30_000, classes=2, informative=1, noise=1, centroid_scale=1.5, seed=seed)
        result = gen_classification(spec)
        probs = predictions_from_posteriors(result.posteriors, temperature(t))
        model = ModelRecord("m", probs, result.labels)
        view = project_class_view(model, classwise(1))
        diagram = fit_lrd(view, LrdParams(seed=7))
        high = view.scores[view.scores > 0.5]
        return float(np.mean(evaluate_lrd(diagram, high) - high))

    def test_sharpening_is_overconfident(self):
        assert self._lrd_high_region_bias(0.7) < 0.0

    def test_flattening_is_underconfident(self):
        assert self._lrd_high_region_bias(1.5) > 0.0


class TestSpecValidation:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            SynthSpec(n=10, classes=2, class_weights=(0.6, 0.6))

    def test_needs_informative_dimension(self):
        with pytest.raises(ValidationError):
            SynthSpec(n=10, classes=2, informative=0)

    def test_needs_two_classes(self):
        with pytest.raises(ValidationError):
            SynthSpec(n=10, classes=1)


def test_csv_round_trip_preserves_values(tmp_path):
    result = gen_classification(SynthSpec(n=50, classes=3, informative=2, noise=1, seed=21))
    probs = predictions_from_posteriors(result.posteriors, temperature(0.8))
    features_csv = features_to_csv(result.features)
    table = ingest_features(features_csv)
    for col, col2 in zip(result.features.columns, table.columns):
        assert np.array_equal(col.values, col2.values)
    probs2, labels2, k = ingest_predictions(probs_to_csv(probs), labels_to_csv(result.labels))
    assert k == 3
    assert np.array_equal(probs2, probs)
    assert np.array_equal(labels2, result.labels)
