"""Command-line entry point: static report generation (JSON + SVG), the
service launcher, and synthetic data generation.

Exit codes: 0 success, 2 usage error, 1 runtime error. Flags are also
honored via CALIPER_-prefixed environment variables.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import jsonio
from .binning import BinSpec, bin_stats, score_histogram
from .dataset import EvaluationSession, ModelRecord, ViewMode, ingest_features, ingest_predictions
from .errors import CaliperError
from .lrd import LrdParams, fit_lrd, lrd_to_payload
from .metrics import metrics_report
from .selection import filter_by_predicate, predicate_from_payload
from .svgplot import CurveSpec, render_report_svg
from .synth import Distortion, SynthSpec, gen_classification, predictions_from_posteriors, write_csvs

DENSITY_CELLS = 25


@click.group(context_settings={"auto_envvar_prefix": "CALIPER"})
@click.version_option(package_name="caliper")
def main() -> None:
    """Calibration analysis for probabilistic classifiers."""


def _positive_bins(_ctx, _param, value: int) -> int:
    if not 1 <= value <= 10_000:
        raise click.BadParameter("bins must be between 1 and 10000")
    return value


def _parse_weights(text: str | None, k: int) -> tuple[float, ...]:
    if text is None or text in ("", "uniform"):
        return ()
    parts = text.split(",")
    try:
        if len(parts) == 2 and parts[1] == "uniform-rest":
            head = float(parts[0])
            if not 0.0 < head < 1.0:
                raise ValueError
            rest = (1.0 - head) / (k - 1)
            return tuple([head] + [rest] * (k - 1))
        weights = tuple(float(p) for p in parts)
    except ValueError:
        raise click.BadParameter(f"cannot parse weights {text!r}") from None
    if len(weights) != k:
        raise click.BadParameter(f"expected {k} weights, got {len(weights)}")
    return weights


def _parse_distortion(text: str | None, k: int) -> Distortion:
    if text is None or text in ("", "none"):
        return Distortion()
    if text == "prior-shift":
        # emulates resampling the training data to a balanced class mix
        return Distortion(kind="prior_shift", target_weights=tuple([1.0 / k] * k))
    if text.startswith("temperature:"):
        try:
            t = float(text.split(":", 1)[1])
        except ValueError:
            raise click.BadParameter(f"cannot parse temperature in {text!r}") from None
        if t <= 0:
            raise click.BadParameter("temperature must be positive")
        return Distortion(kind="temperature", temperature=t)
    raise click.BadParameter(
        f"unknown distortion {text!r}; use temperature:T or prior-shift"
    )


@main.command()
@click.option("--features", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--probs", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--labels", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--model-name", default="model", show_default=True)
@click.option(
    "--mode",
    type=click.Choice(["confidence", "classwise"]),
    default="confidence",
    show_default=True,
)
@click.option("--class", "class_index", type=int, default=None, help="Class for classwise mode.")
@click.option("--bins", type=int, default=10, callback=_positive_bins, show_default=True)
@click.option(
    "--strategy",
    type=click.Choice(["uniform", "quantile"]),
    default="uniform",
    show_default=True,
)
@click.option("--lrd", "with_lrd", is_flag=True, help="Include a learned reliability diagram.")
@click.option("--subgroup", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file with a subgroup predicate.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Report JSON path (stdout when omitted).")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), default=None)
def report(
    features: str,
    probs: str,
    labels: str,
    model_name: str,
    mode: str,
    class_index: int | None,
    bins: int,
    strategy: str,
    with_lrd: bool,
    subgroup: str | None,
    out: str | None,
    svg_path: str | None,
) -> None:
    """Compute diagrams and metrics for one model and write a JSON report."""
    if mode == "classwise" and class_index is None:
        raise click.UsageError("--mode classwise requires --class")
    if mode == "confidence" and class_index is not None:
        raise click.UsageError("--class is only valid with --mode classwise")
    try:
        table = ingest_features(Path(features).read_text(encoding="utf-8"))
        probs_matrix, label_vector, k = ingest_predictions(
            Path(probs).read_text(encoding="utf-8"),
            Path(labels).read_text(encoding="utf-8"),
        )
        session = EvaluationSession("local", table)
        record = ModelRecord(model_name, probs_matrix, label_vector, k)
        session.add_model(record)

        view_mode = (
            ViewMode("confidence") if mode == "confidence" else ViewMode("classwise", class_index)
        )
        indices = None
        subgroup_label = None
        if subgroup is not None:
            predicate = predicate_from_payload(json.loads(Path(subgroup).read_text()))
            subgroup_label = predicate.label or None
            indices = filter_by_predicate(session, predicate)

        view = session.class_view(model_name, view_mode)
        if indices is not None:
            view = view.take(indices)
        spec = BinSpec(strategy, bins)
        diagram = bin_stats(view, spec)
        report_payload = {
            "model": model_name,
            "mode": mode,
            "class_index": class_index,
            "subgroup": subgroup_label,
            "n": view.n,
            "diagram": diagram.to_payload(),
            "metrics": metrics_report(record, view_mode, spec, indices=indices).to_payload(),
            "density": score_histogram(view.scores, DENSITY_CELLS),
            "lrd": None,
        }
        if with_lrd:
            fitted = fit_lrd(view, LrdParams())
            report_payload["lrd"] = lrd_to_payload(fitted, view.scores)
    except CaliperError as exc:
        raise click.ClickException(str(exc)) from exc

    text = jsonio.dumps(report_payload) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")

    if svg_path is not None:
        curves = [
            CurveSpec(
                label=model_name,
                points=[(b["conf"], b["acc"]) for b in report_payload["diagram"]["bins"]],
                kind="binned",
                ece=report_payload["metrics"]["ece"],
            )
        ]
        if report_payload["lrd"] is not None:
            curves.append(
                CurveSpec(
                    label=f"{model_name} LRD",
                    points=[(p["x"], p["f"]) for p in report_payload["lrd"]["grid"]],
                    kind="step",
                    ece=report_payload["lrd"]["lrd_expected_error"],
                )
            )
        svg_text = render_report_svg(curves, report_payload["density"], title=model_name)
        Path(svg_path).write_text(svg_text, encoding="utf-8")


@main.command()
@click.option("--n", default=10_000, show_default=True, type=int)
@click.option("--classes", default=10, show_default=True, type=int)
@click.option("--informative", default=10, show_default=True, type=int)
@click.option("--noise", default=10, show_default=True, type=int)
@click.option("--weights", default="uniform", show_default=True,
              help="Comma list of K weights, W,uniform-rest, or uniform.")
@click.option("--distortion", default="none", show_default=True,
              help="none, temperature:T, or prior-shift.")
@click.option("--centroid-scale", default=2.0, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def synth(
    n: int,
    classes: int,
    informative: int,
    noise: int,
    weights: str,
    distortion: str,
    centroid_scale: float,
    seed: int,
    out_dir: str,
) -> None:
    """Generate synthetic features/probs/labels CSVs with known calibration."""
    weight_tuple = _parse_weights(weights, classes)
    distortion_spec = _parse_distortion(distortion, classes)
    try:
        spec = SynthSpec(
            n=n,
            classes=classes,
            informative=informative,
            noise=noise,
            class_weights=weight_tuple,
            centroid_scale=centroid_scale,
            seed=seed,
        )
        result = gen_classification(spec)
        predicted = predictions_from_posteriors(
            result.posteriors, distortion_spec, base_weights=result.weights
        )
        paths = write_csvs(result, predicted, out_dir)
    except CaliperError as exc:
        raise click.ClickException(str(exc)) from exc
    for name, path in paths.items():
        click.echo(f"{name}: {path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True, type=int, envvar="CALIPER_PORT")
@click.option("--ui-dir", default=None, type=click.Path(file_okay=False),
              help="Directory of workbench static assets to serve.")
def serve(host: str, port: int, ui_dir: str | None) -> None:
    """Run the HTTP service until interrupted."""
    import uvicorn

    from .service import create_app

    app = create_app(ui_dir=ui_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except OSError as exc:  # port in use and friends
        raise click.ClickException(str(exc)) from exc


if __name__ == "__main__":
    main()
