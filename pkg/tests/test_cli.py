import json
import re
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from caliper import (
    BinSpec,
    LearnedDiagram,
    SynthSpec,
    bin_stats,
    brier_score,
    classwise,
    ece,
    evaluate_lrd,
    gen_classification,
    log_loss,
    predictions_from_posteriors,
    project_class_view,
    temperature,
)
from caliper.cli import main
from caliper.dataset import ModelRecord


@pytest.fixture()
def runner():
    return CliRunner()


def run_synth(runner, out_dir, extra=()):
    args = ["synth", "--n", "4000", "--classes", "3", "--informative", "2",
            "--noise", "1", "--seed", "21", "--out-dir", str(out_dir), *extra]
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output
    return out_dir


def run_report(runner, data_dir, out, extra=()):
    args = [
        "report",
        "--features", str(data_dir / "features.csv"),
        "--probs", str(data_dir / "probs.csv"),
        "--labels", str(data_dir / "labels.csv"),
        "--out", str(out),
        *extra,
    ]
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output
    return json.loads(Path(out).read_text())


class TestReport:
    def test_calibrated_fixture_low_ece_and_svg_near_diagonal(self, runner, tmp_path):
        data = run_synth(runner, tmp_path / "data")
        svg = tmp_path / "plot.svg"
        report = run_report(
            runner, data, tmp_path / "r.json", extra=["--svg", str(svg), "--lrd"]
        )
        assert report["metrics"]["ece"] < 0.01
        # curve points carrying real mass sit inside a +-0.05 diagonal band;
        # near-empty bins are pure sampling noise and excluded
        n = report["n"]
        for b in report["diagram"]["bins"]:
            if b["count"] >= 0.05 * n:
                assert abs(b["acc"] - b["conf"]) <= 0.05
        text = svg.read_text()
        assert "<svg" in text and "polyline" in text and "stroke-dasharray" in text

    def test_repeat_runs_byte_identical(self, runner, tmp_path):
        data = run_synth(runner, tmp_path / "data")
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        run_report(runner, data, out1, extra=["--lrd"])
        run_report(runner, data, out2, extra=["--lrd"])
        assert out1.read_bytes() == out2.read_bytes()

    def test_bins_zero_is_usage_error(self, runner, tmp_path):
        data = run_synth(runner, tmp_path / "data")
        result = runner.invoke(main, [
            "report", "--features", str(data / "features.csv"),
            "--probs", str(data / "probs.csv"), "--labels", str(data / "labels.csv"),
            "--bins", "0",
        ])
        assert result.exit_code == 2

    def test_classwise_requires_class(self, runner, tmp_path):
        data = run_synth(runner, tmp_path / "data")
        result = runner.invoke(main, [
            "report", "--features", str(data / "features.csv"),
            "--probs", str(data / "probs.csv"), "--labels", str(data / "labels.csv"),
            "--mode", "classwise",
        ])
        assert result.exit_code == 2

    def test_subgroup_file(self, runner, tmp_path):
        data = run_synth(runner, tmp_path / "data")
        predicate = {"label": "low-inf0", "constraints": [{"column": "inf_0", "lo": -100, "hi": 0}]}
        sub = tmp_path / "sub.json"
        sub.write_text(json.dumps(predicate))
        report = run_report(runner, data, tmp_path / "r.json", extra=["--subgroup", str(sub)])
        assert report["subgroup"] == "low-inf0"
        assert report["n"] < 4000

    def test_pipeline_round_trip_matches_in_memory(self, runner, tmp_path):
        data = run_synth(runner, tmp_path / "data")
        report = run_report(runner, data, tmp_path / "r.json", extra=["--bins", "12"])
        result = gen_classification(
            SynthSpec(n=4000, classes=3, informative=2, noise=1, seed=21)
        )
        probs = predictions_from_posteriors(result.posteriors, base_weights=result.weights)
        model = ModelRecord("model", probs, result.labels)
        view = project_class_view(model, __import__("caliper").CONFIDENCE)
        expected_ece = ece(bin_stats(view, BinSpec("uniform", 12)))
        assert report["metrics"]["ece"] == pytest.approx(expected_ece, abs=1e-9)
        assert report["metrics"]["brier"] == pytest.approx(
            brier_score(probs, result.labels), abs=1e-9
        )
        assert report["metrics"]["log_loss"] == pytest.approx(
            log_loss(probs, result.labels), abs=1e-9
        )


class TestSynthCommand:
    def test_deterministic(self, runner, tmp_path):
        a = run_synth(runner, tmp_path / "a")
        b = run_synth(runner, tmp_path / "b")
        for name in ("features.csv", "probs.csv", "labels.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_negative_temperature_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, [
            "synth", "--distortion", "temperature:-1", "--out-dir", str(tmp_path / "x"),
        ])
        assert result.exit_code == 2

    def test_unknown_distortion_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, [
            "synth", "--distortion", "warp", "--out-dir", str(tmp_path / "x"),
        ])
        assert result.exit_code == 2

    def test_bad_weights_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, [
            "synth", "--classes", "3", "--weights", "0.5,0.5",
            "--out-dir", str(tmp_path / "x"),
        ])
        assert result.exit_code == 2

    def test_majority_weights_syntax(self, runner, tmp_path):
        out = tmp_path / "w"
        result = runner.invoke(main, [
            "synth", "--n", "2000", "--classes", "10", "--weights", "0.9,uniform-rest",
            "--seed", "42", "--out-dir", str(out),
        ])
        assert result.exit_code == 0, result.output
        labels = (out / "labels.csv").read_text().splitlines()[1:]
        majority = sum(1 for v in labels if v == "0") / len(labels)
        assert abs(majority - 0.9) < 0.03


class TestMinorityOverconfidencePipeline:
    def test_sharpened_minority_class_reads_overconfident(self, runner, tmp_path):
        out = tmp_path / "imb"
        result = runner.invoke(main, [
            "synth", "--n", "30000", "--classes", "10", "--weights", "0.9,uniform-rest",
            "--distortion", "temperature:0.7", "--seed", "42", "--out-dir", str(out),
        ])
        assert result.exit_code == 0, result.output
        report = run_report(
            runner, out, tmp_path / "r.json",
            extra=["--mode", "classwise", "--class", "3", "--lrd"],
        )
        lrd = report["lrd"]
        diagram = LearnedDiagram(
            cut_points=np.array(lrd["cut_points"]),
            piece_logits=np.array(lrd["piece_logits"]),
            base_logit=lrd["base_logit"],
            rounds_used=0,
            final_train_loss=0.0,
        )
        probs_lines = (out / "probs.csv").read_text().splitlines()[1:]
        scores = np.array([float(line.split(",")[3]) for line in probs_lines])
        high = scores[scores > 0.5]
        assert len(high) > 100
        assert float(np.mean(evaluate_lrd(diagram, high) - high)) < 0.0
