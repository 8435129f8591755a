"""Synthetic evaluation data with analytically known posteriors.

Samples come from unit-variance Gaussian class clusters in an informative
subspace plus independent noise dimensions, so the true class posterior of
every observation follows from Bayes' rule in closed form. The undistorted
posterior matrix is therefore a perfectly calibrated predictor, and the
distortion operators create controlled miscalibration for experiments.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import NUMERIC, Column, FeatureTable, features_to_csv, labels_to_csv, probs_to_csv
from .errors import ValidationError

WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class SynthSpec:
    n: int
    classes: int = 10
    informative: int = 10
    noise: int = 10
    class_weights: tuple[float, ...] = ()  # empty means uniform
    centroid_scale: float = 2.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError("n must be positive")
        if self.classes < 2:
            raise ValidationError("at least two classes are required")
        if self.informative < 1:
            raise ValidationError("at least one informative dimension is required")
        if self.noise < 0:
            raise ValidationError("noise dimension count cannot be negative")
        if self.class_weights:
            if len(self.class_weights) != self.classes:
                raise ValidationError("class_weights length must equal the class count")
            if any(w < 0 for w in self.class_weights):
                raise ValidationError("class weights must be non-negative")
            if abs(sum(self.class_weights) - 1.0) > WEIGHT_SUM_TOL:
                raise ValidationError("class weights must sum to 1")

    @property
    def weights(self) -> np.ndarray:
        if self.class_weights:
            return np.asarray(self.class_weights, dtype=np.float64)
        return np.full(self.classes, 1.0 / self.classes)


@dataclass(frozen=True)
class Distortion:
    """Controlled miscalibration applied to a posterior matrix."""

    kind: str = "none"  # none | temperature | prior_shift
    temperature: float = 1.0
    target_weights: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("none", "temperature", "prior_shift"):
            raise ValidationError(f"unknown distortion kind {self.kind!r}")
        if self.kind == "temperature" and self.temperature <= 0:
            raise ValidationError("temperature must be positive")
        if self.kind == "prior_shift" and not self.target_weights:
            raise ValidationError("prior_shift needs target weights")


def temperature(t: float) -> Distortion:
    """t < 1 sharpens probabilities (overconfidence), t > 1 flattens them."""
    return Distortion(kind="temperature", temperature=t)


def prior_shift(target_weights) -> Distortion:
    """Reweights posteriors as if the class priors were ``target_weights``,
    emulating the effect of over/undersampling the training data."""
    return Distortion(kind="prior_shift", target_weights=tuple(float(w) for w in target_weights))


@dataclass
class SynthResult:
    """Generated task: features, labels, exact posteriors, and the mixture
    (centroids + priors) needed to refit posteriors on reduced feature sets."""

    features: FeatureTable
    labels: np.ndarray
    posteriors: np.ndarray
    centroids: np.ndarray
    weights: np.ndarray

    @property
    def informative(self) -> int:
        return self.centroids.shape[1]


def _mixture_posteriors(x: np.ndarray, centroids: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # Unit-variance Gaussians: log p(y=i | x) = log w_i - ||x - mu_i||^2 / 2 + const
    sq = (x**2).sum(axis=1, keepdims=True) - 2.0 * x @ centroids.T + (centroids**2).sum(axis=1)
    with np.errstate(divide="ignore"):
        log_post = np.log(weights) - 0.5 * sq
    log_post -= log_post.max(axis=1, keepdims=True)
    post = np.exp(log_post)
    post /= post.sum(axis=1, keepdims=True)
    return post


def gen_classification(spec: SynthSpec) -> SynthResult:
    """Generate a classification task with exact per-row class posteriors.

    Centroids are seeded standard normals scaled by ``centroid_scale`` in
    the informative subspace; noise dimensions are class-independent.
    Deterministic per seed.
    """
    rng = np.random.default_rng(spec.seed)
    weights = spec.weights
    centroids = rng.standard_normal((spec.classes, spec.informative)) * spec.centroid_scale
    labels = rng.choice(spec.classes, size=spec.n, p=weights)
    x_inf = centroids[labels] + rng.standard_normal((spec.n, spec.informative))
    x_noise = rng.standard_normal((spec.n, spec.noise))
    posteriors = _mixture_posteriors(x_inf, centroids, weights)
    columns = [Column(f"inf_{j}", NUMERIC, x_inf[:, j].copy()) for j in range(spec.informative)]
    columns += [Column(f"noise_{j}", NUMERIC, x_noise[:, j].copy()) for j in range(spec.noise)]
    return SynthResult(
        features=FeatureTable(columns),
        labels=labels.astype(np.int64),
        posteriors=posteriors,
        centroids=centroids,
        weights=weights,
    )


def predictions_from_posteriors(
    posteriors: np.ndarray,
    distortion: Distortion = Distortion(),
    base_weights: np.ndarray | None = None,
) -> np.ndarray:
    """Turn true posteriors into a (possibly miscalibrated) prediction matrix.

    ``none`` returns the posteriors unchanged (a calibrated predictor);
    ``temperature`` renormalizes p**(1/t); ``prior_shift`` reweights rows by
    the ratio of target to base priors. Base priors default to the posterior
    column means, which converge to the generating priors.
    """
    posteriors = np.asarray(posteriors, dtype=np.float64)
    if distortion.kind == "none":
        return posteriors.copy()
    if distortion.kind == "temperature":
        powered = posteriors ** (1.0 / distortion.temperature)
        return powered / powered.sum(axis=1, keepdims=True)
    target = np.asarray(distortion.target_weights, dtype=np.float64)
    if target.shape != (posteriors.shape[1],):
        raise ValidationError("prior_shift weights length must equal the class count")
    base = (
        np.asarray(base_weights, dtype=np.float64)
        if base_weights is not None
        else posteriors.mean(axis=0)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(base > 0, target / base, 0.0)
    shifted = posteriors * ratio
    return shifted / shifted.sum(axis=1, keepdims=True)


def drop_informative(result: SynthResult, keep: int) -> SynthResult:
    """Restrict the task to the first ``keep`` informative dimensions.

    Posteriors are recomputed analytically on the marginal mixture of the
    kept dimensions; keep=0 collapses every posterior row to the class
    priors (the base-rate predictor). Noise columns are retained.
    """
    if keep < 0 or keep > result.informative:
        raise ValidationError(f"keep must be in [0, {result.informative}]")
    if keep == 0 and not any(c.name.startswith("noise_") for c in result.features.columns):
        raise ValidationError("keep=0 with no noise columns would leave an empty table")
    kept_columns = [
        col
        for col in result.features.columns
        if not col.name.startswith("inf_") or int(col.name.split("_", 1)[1]) < keep
    ]
    x_kept = (
        np.column_stack([result.features.column(f"inf_{j}").values for j in range(keep)])
        if keep
        else np.empty((result.features.n_rows, 0))
    )
    posteriors = _mixture_posteriors(x_kept, result.centroids[:, :keep], result.weights)
    return SynthResult(
        features=FeatureTable(kept_columns),
        labels=result.labels,
        posteriors=posteriors,
        centroids=result.centroids[:, :keep],
        weights=result.weights,
    )


def write_csvs(result: SynthResult, probs: np.ndarray, out_dir: str | Path) -> dict[str, Path]:
    """Write features/probs/labels CSVs in the formats ingestion accepts."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "features": out / "features.csv",
        "probs": out / "probs.csv",
        "labels": out / "labels.csv",
    }
    paths["features"].write_text(features_to_csv(result.features), encoding="utf-8")
    paths["probs"].write_text(probs_to_csv(probs), encoding="utf-8")
    paths["labels"].write_text(labels_to_csv(result.labels), encoding="utf-8")
    return paths
