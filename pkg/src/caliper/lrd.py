"""Learned reliability diagrams.

Instead of binning scores into fixed intervals, a univariate probabilistic
classifier is fitted from scores to outcomes and plotted over [0, 1]. The
fitter is a self-contained gradient booster over quantile pieces: each round
adds a small piecewise-constant learner (greedy contiguous leaves with damped
Newton values), and the returned curve averages a handful of seeded bootstrap
replicates. That combination keeps the curve shape-agnostic and stable under
parameter changes without any third-party model dependency.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dataset import ClassView
from .errors import ValidationError

LOG_CLAMP = 1e-15
BASE_RATE_CLAMP = 1e-6
NEWTON_REG = 1e-6
MIN_FIT_N = 10
EARLY_STOP_MIN_N = 200
DEFAULT_GRID_POINTS = 101
# Per-round learners are tiny trees over the pieces; the returned logits
# average this many seeded bootstrap replicates. Both constants mirror the
# defaults of the boosted-GAM family the fitter emulates.
ROUND_LEAVES = 3
REPLICATES = 8


@dataclass(frozen=True)
class LrdParams:
    max_bins: int = 256
    rounds: int = 500
    learning_rate: float = 0.01
    early_stop: bool | None = None  # None resolves to n >= 200 at fit time
    validation_fraction: float = 0.15
    patience: int = 50
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_bins < 2:
            raise ValidationError("max_bins must be at least 2")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValidationError("learning_rate must be in (0, 1]")
        if not 0.0 < self.validation_fraction < 0.5:
            raise ValidationError("validation_fraction must be in (0, 0.5)")
        if self.rounds < 1:
            raise ValidationError("rounds must be positive")
        if self.patience < 1:
            raise ValidationError("patience must be positive")


@dataclass
class LearnedDiagram:
    """Fitted piecewise-constant calibration curve.

    ``cut_points`` are the interior piece boundaries; piece ``p`` covers
    ``(cut_points[p-1], cut_points[p]]`` with the first piece closed at 0.
    The curve is ``sigmoid(base_logit + piece_logits[piece(x)])``.
    """

    cut_points: np.ndarray
    piece_logits: np.ndarray
    base_logit: float
    rounds_used: int
    final_train_loss: float
    band: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None  # (grid, lo, hi)

    @property
    def n_pieces(self) -> int:
        return len(self.piece_logits)


def default_grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, DEFAULT_GRID_POINTS)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return np.exp(-np.logaddexp(0.0, -z))


def _piece_index(cut_points: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.searchsorted(cut_points, x, side="left")


def _cut_points(scores: np.ndarray, max_bins: int) -> np.ndarray:
    # Data-valued quantiles: pieces never straddle empty score ranges, and
    # constant scores collapse to a single piece. The top score is excluded
    # so the last piece extrapolates its fitted value up to 1.
    qs = np.arange(1, max_bins) / max_bins
    cuts = np.unique(np.quantile(scores, qs, method="lower"))
    return cuts[cuts < scores.max()]


def _piece_loss(counts: np.ndarray, positives: np.ndarray, logits: np.ndarray, base: float) -> float:
    """Mean binary log loss from per-piece (count, positive-count) aggregates."""
    n = counts.sum()
    p = np.clip(_sigmoid(base + logits), LOG_CLAMP, 1.0 - LOG_CLAMP)
    total = positives * np.log(p) + (counts - positives) * np.log1p(-p)
    return float(-total.sum() / n)


def _round_update(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """One boosting round: a greedy contiguous-leaf tree over the pieces.

    Leaves carry the regularized Newton value sum(g)/(sum(h)+reg) of their
    member pieces; all pieces inside a leaf shift together, which is what
    keeps single noisy pieces from being fitted in isolation.
    """
    n_pieces = len(g)
    leaves = [(0, n_pieces)]

    def best_split(lo: int, hi: int) -> tuple[float, int] | None:
        if hi - lo < 2:
            return None
        gs = np.cumsum(g[lo:hi])
        hs = np.cumsum(h[lo:hi])
        g_total, h_total = gs[-1], hs[-1]
        g_left, h_left = gs[:-1], hs[:-1]
        g_right, h_right = g_total - g_left, h_total - h_left
        gain = (
            g_left**2 / (h_left + NEWTON_REG)
            + g_right**2 / (h_right + NEWTON_REG)
            - g_total**2 / (h_total + NEWTON_REG)
        )
        k = int(np.argmax(gain))
        return float(gain[k]), lo + k + 1

    while len(leaves) < ROUND_LEAVES:
        best: tuple[float, int, int] | None = None
        for i, (lo, hi) in enumerate(leaves):
            found = best_split(lo, hi)
            if found is not None and (best is None or found[0] > best[0]):
                best = (found[0], i, found[1])
        if best is None or best[0] <= 0.0:
            break
        _, i, pos = best
        lo, hi = leaves.pop(i)
        leaves[i:i] = [(lo, pos), (pos, hi)]

    delta = np.zeros(n_pieces)
    for lo, hi in leaves:
        delta[lo:hi] = g[lo:hi].sum() / (h[lo:hi].sum() + NEWTON_REG)
    return delta


def _boost(
    train_counts: np.ndarray,
    train_pos: np.ndarray,
    val_counts: np.ndarray,
    val_pos: np.ndarray,
    base: float,
    params: LrdParams,
    early: bool,
) -> tuple[np.ndarray, int]:
    """Boosting loop on per-piece aggregates; returns (logits, rounds used)."""
    n_pieces = len(train_counts)
    logits = np.zeros(n_pieces)
    rounds_used = 0
    if early:
        best_loss = _piece_loss(val_counts, val_pos, logits, base)
        best_logits, best_round, stale = logits.copy(), 0, 0
    for r in range(1, params.rounds + 1):
        p = _sigmoid(base + logits)
        g = train_pos - train_counts * p
        h = train_counts * p * (1.0 - p)
        logits += params.learning_rate * _round_update(g, h)
        rounds_used = r
        if early:
            val_loss = _piece_loss(val_counts, val_pos, logits, base)
            if val_loss < best_loss:
                best_loss, best_logits, best_round, stale = val_loss, logits.copy(), r, 0
            else:
                stale += 1
                if stale >= params.patience:
                    break
    if early:
        return best_logits, best_round
    return logits, rounds_used


def _fit_curve(view: ClassView, params: LrdParams, replicates: int) -> LearnedDiagram:
    scores = np.asarray(view.scores, dtype=np.float64)
    outcomes = np.asarray(view.outcomes, dtype=np.float64)
    n = len(scores)
    if n < MIN_FIT_N:
        raise ValidationError(f"need at least {MIN_FIT_N} observations to fit")
    if not np.isfinite(scores).all():
        raise ValidationError("scores contain non-finite values")
    if scores.min() < 0.0 or scores.max() > 1.0:
        raise ValidationError("scores outside [0, 1]")

    cuts = _cut_points(scores, params.max_bins)
    n_pieces = len(cuts) + 1
    pieces = _piece_index(cuts, scores)
    base_rate = float(np.clip(outcomes.mean(), BASE_RATE_CLAMP, 1.0 - BASE_RATE_CLAMP))
    base_logit = float(np.log(base_rate / (1.0 - base_rate)))

    early = params.early_stop if params.early_stop is not None else n >= EARLY_STOP_MIN_N
    n_val = int(round(n * params.validation_fraction)) if early else 0
    if early and (n_val < 1 or n - n_val < 1):
        early = False
        n_val = 0

    children = np.random.SeedSequence(entropy=[params.seed, 0]).spawn(replicates)
    logit_sum = np.zeros(n_pieces)
    rounds_used = 0
    for child in children:
        rng = np.random.default_rng(child)
        perm = rng.permutation(n)
        val_idx, pool = perm[:n_val], perm[n_val:]
        draw = pool[rng.integers(0, len(pool), len(pool))]
        train_counts = np.bincount(pieces[draw], minlength=n_pieces).astype(np.float64)
        train_pos = np.bincount(pieces[draw], weights=outcomes[draw], minlength=n_pieces)
        val_counts = np.bincount(pieces[val_idx], minlength=n_pieces).astype(np.float64)
        val_pos = np.bincount(pieces[val_idx], weights=outcomes[val_idx], minlength=n_pieces)
        logits, used = _boost(
            train_counts, train_pos, val_counts, val_pos, base_logit, params, early
        )
        logit_sum += logits
        rounds_used = max(rounds_used, used)
    piece_logits = logit_sum / replicates

    # Never return a model worse than its own initialization on the data it saw.
    full_counts = np.bincount(pieces, minlength=n_pieces).astype(np.float64)
    full_pos = np.bincount(pieces, weights=outcomes, minlength=n_pieces)
    train_loss = _piece_loss(full_counts, full_pos, piece_logits, base_logit)
    init_loss = _piece_loss(full_counts, full_pos, np.zeros(n_pieces), base_logit)
    if train_loss > init_loss:
        piece_logits = np.zeros(n_pieces)
        train_loss = init_loss
        rounds_used = 0
    return LearnedDiagram(
        cut_points=cuts,
        piece_logits=piece_logits,
        base_logit=base_logit,
        rounds_used=rounds_used,
        final_train_loss=train_loss,
    )


def fit_lrd(view: ClassView, params: LrdParams = LrdParams()) -> LearnedDiagram:
    """Fit a learned reliability diagram to a view's (score, outcome) pairs.

    Deterministic given the seed. Pieces come from score quantiles; the base
    logit is the clamped outcome base rate; each of a fixed handful of seeded
    bootstrap replicates boosts per-piece Newton steps with optional early
    stopping on a held-out slice, and the replicate logits are averaged. The
    result is never worse than its own initialization on the training data.
    """
    return _fit_curve(view, params, REPLICATES)


def evaluate_lrd(diagram: LearnedDiagram, grid: np.ndarray) -> np.ndarray:
    """Curve values f(x) at each grid point; grid points must lie in [0, 1]."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ValidationError("grid must be non-empty")
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise ValidationError("grid point outside [0, 1]")
    pieces = _piece_index(diagram.cut_points, grid)
    return _sigmoid(diagram.base_logit + diagram.piece_logits[pieces])


def lrd_area(diagram: LearnedDiagram, grid: np.ndarray | None = None) -> float:
    """Trapezoidal integral of |f(x) - x| over the grid (distance from the
    diagonal in curve geometry, regardless of where predictions fall)."""
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=np.float64)
    f = evaluate_lrd(diagram, grid)
    return float(np.trapezoid(np.abs(f - grid), grid))


def lrd_expected_error(diagram: LearnedDiagram, scores: np.ndarray) -> float:
    """Mean |f(s) - s| over the prediction scores themselves, weighting the
    curve's deviation by where the model's predictions concentrate."""
    scores = np.asarray(scores, dtype=np.float64)
    f = evaluate_lrd(diagram, scores)
    return float(np.mean(np.abs(f - scores)))


def fit_lrd_with_band(
    view: ClassView, params: LrdParams = LrdParams(), bags: int = 8
) -> LearnedDiagram:
    """Fit plus a pointwise 2.5/97.5 percentile bootstrap band.

    Each bag fits a single (unaveraged) replicate on a seeded resample of
    the view, so the band reflects both sampling and fitting variability.
    Per-bag seeds derive from the root seed, so bags could run in parallel
    without changing the output. With bags=1 the band degenerates to zero
    width.
    """
    if bags < 1:
        raise ValidationError("bags must be positive")
    diagram = fit_lrd(view, params)
    grid = default_grid()
    children = np.random.SeedSequence(entropy=[params.seed, 1]).spawn(bags)
    curves = np.empty((bags, len(grid)))
    for b, child in enumerate(children):
        rng = np.random.default_rng(child)
        idx = rng.integers(0, view.n, view.n)
        bag_params = replace(params, seed=int(rng.integers(0, 2**32)))
        bag_diagram = _fit_curve(view.take(idx), bag_params, replicates=1)
        curves[b] = evaluate_lrd(bag_diagram, grid)
    lo, hi = np.percentile(curves, [2.5, 97.5], axis=0)
    diagram.band = (grid, lo, hi)
    return diagram


def lrd_to_payload(
    diagram: LearnedDiagram, scores: np.ndarray, grid: np.ndarray | None = None
) -> dict:
    """JSON-ready form: pieces, curve samples (with band values when the
    band was fitted on this grid), and both calibration-error readings."""
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=np.float64)
    f = evaluate_lrd(diagram, grid)
    band = diagram.band
    include_band = band is not None and len(band[0]) == len(grid) and np.array_equal(band[0], grid)
    points = []
    for i, x in enumerate(grid):
        point = {"x": float(x), "f": float(f[i])}
        if include_band:
            point["lo"] = float(band[1][i])
            point["hi"] = float(band[2][i])
        points.append(point)
    return {
        "cut_points": [float(c) for c in diagram.cut_points],
        "piece_logits": [float(v) for v in diagram.piece_logits],
        "base_logit": diagram.base_logit,
        "grid": points,
        "lrd_expected_error": lrd_expected_error(diagram, scores),
        "lrd_area": lrd_area(diagram, grid),
    }
