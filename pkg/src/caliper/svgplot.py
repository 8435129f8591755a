"""Static SVG emission for calibration reports: a square reliability plot
with dashed diagonal, per-curve polylines or step paths, a prediction
density strip beneath, and a legend carrying calibration errors."""

from __future__ import annotations

from dataclasses import dataclass, field

PLOT_SIZE = 640
MARGIN_LEFT = 70
MARGIN_TOP = 24
MARGIN_RIGHT = 24
STRIP_GAP = 14
STRIP_HEIGHT = 64
AXIS_SPACE = 46

PALETTE = [
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
    "#aec7e8",
    "#ffbb78",
]


@dataclass
class CurveSpec:
    """One curve to draw: binned diagrams as point-to-point polylines, learned
    diagrams as step paths."""

    label: str
    points: list[tuple[float, float]]
    kind: str = "binned"  # binned | step
    ece: float | None = None
    color: str | None = None
    band: list[tuple[float, float, float]] = field(default_factory=list)  # (x, lo, hi)


def _px(x: float) -> float:
    return MARGIN_LEFT + x * PLOT_SIZE


def _py(y: float) -> float:
    return MARGIN_TOP + (1.0 - y) * PLOT_SIZE


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".") or "0"


def _polyline(points: list[tuple[float, float]], color: str) -> str:
    coords = " ".join(f"{_px(x):.2f},{_py(y):.2f}" for x, y in points)
    return (
        f'<polyline points="{coords}" fill="none" stroke="{color}" '
        f'stroke-width="2.5" stroke-linejoin="round"/>'
    )


def _step_path(points: list[tuple[float, float]], color: str) -> str:
    x0, y0 = points[0]
    parts = [f"M {_px(x0):.2f} {_py(y0):.2f}"]
    for (x_prev, _), (x, y) in zip(points[:-1], points[1:]):
        parts.append(f"H {_px(x):.2f}")
        parts.append(f"V {_py(y):.2f}")
    return (
        f'<path d="{" ".join(parts)}" fill="none" stroke="{color}" '
        f'stroke-width="2.5" stroke-dasharray="1,0"/>'
    )


def _band_path(band: list[tuple[float, float, float]], color: str) -> str:
    forward = " ".join(f"{_px(x):.2f},{_py(hi):.2f}" for x, _, hi in band)
    backward = " ".join(f"{_px(x):.2f},{_py(lo):.2f}" for x, lo, _ in reversed(band))
    return f'<polygon points="{forward} {backward}" fill="{color}" opacity="0.15"/>'


def _markers(points: list[tuple[float, float]], color: str) -> str:
    return "".join(
        f'<circle cx="{_px(x):.2f}" cy="{_py(y):.2f}" r="3.5" fill="{color}"/>'
        for x, y in points
    )


def render_report_svg(
    curves: list[CurveSpec],
    density: dict | None = None,
    title: str = "",
) -> str:
    """Render curves plus an optional score histogram into a standalone SVG."""
    width = MARGIN_LEFT + PLOT_SIZE + MARGIN_RIGHT
    strip = STRIP_HEIGHT + STRIP_GAP if density else 0
    height = MARGIN_TOP + PLOT_SIZE + strip + AXIS_SPACE
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="13">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{MARGIN_LEFT}" y="{MARGIN_TOP - 8}" font-size="15">{title}</text>'
        )

    # frame, gridlines, ticks
    parts.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{PLOT_SIZE}" height="{PLOT_SIZE}" '
        f'fill="none" stroke="#444" stroke-width="1"/>'
    )
    axis_y = MARGIN_TOP + PLOT_SIZE + strip
    for k in range(5):
        v = k / 4
        parts.append(
            f'<line x1="{_px(v):.2f}" y1="{MARGIN_TOP}" x2="{_px(v):.2f}" '
            f'y2="{MARGIN_TOP + PLOT_SIZE}" stroke="#eee"/>'
        )
        parts.append(
            f'<line x1="{MARGIN_LEFT}" y1="{_py(v):.2f}" x2="{MARGIN_LEFT + PLOT_SIZE}" '
            f'y2="{_py(v):.2f}" stroke="#eee"/>'
        )
        parts.append(
            f'<text x="{_px(v):.2f}" y="{axis_y + 18}" text-anchor="middle">{_fmt(v)}</text>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{_py(v) + 4:.2f}" text-anchor="end">{_fmt(v)}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_LEFT + PLOT_SIZE / 2}" y="{axis_y + 38}" '
        f'text-anchor="middle">predicted probability</text>'
    )
    parts.append(
        f'<text x="16" y="{MARGIN_TOP + PLOT_SIZE / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN_TOP + PLOT_SIZE / 2})">observed frequency</text>'
    )

    # dashed 45-degree diagonal
    parts.append(
        f'<line x1="{_px(0):.2f}" y1="{_py(0):.2f}" x2="{_px(1):.2f}" y2="{_py(1):.2f}" '
        f'stroke="#888" stroke-width="1.5" stroke-dasharray="6,4"/>'
    )

    for i, curve in enumerate(curves):
        color = curve.color or PALETTE[i % len(PALETTE)]
        if curve.band:
            parts.append(_band_path(curve.band, color))
        if not curve.points:
            continue
        if curve.kind == "step":
            parts.append(_step_path(curve.points, color))
        else:
            parts.append(_polyline(curve.points, color))
            parts.append(_markers(curve.points, color))

    if density:
        counts = density["counts"]
        edges = density["edges"]
        top = MARGIN_TOP + PLOT_SIZE + STRIP_GAP
        peak = max(counts) or 1
        for lo, hi, count in zip(edges[:-1], edges[1:], counts):
            bar = STRIP_HEIGHT * count / peak
            parts.append(
                f'<rect x="{_px(lo):.2f}" y="{top + STRIP_HEIGHT - bar:.2f}" '
                f'width="{(_px(hi) - _px(lo)):.2f}" height="{bar:.2f}" '
                f'fill="#9ecae1" stroke="white" stroke-width="0.5"/>'
            )
        parts.append(
            f'<rect x="{MARGIN_LEFT}" y="{top}" width="{PLOT_SIZE}" height="{STRIP_HEIGHT}" '
            f'fill="none" stroke="#bbb"/>'
        )

    # legend with calibration errors
    if curves:
        x0, y0 = MARGIN_LEFT + 14, MARGIN_TOP + 14
        line_h = 20
        box_w = 10 + max(len(_legend_text(c)) for c in curves) * 7.2 + 40
        parts.append(
            f'<rect x="{x0 - 8}" y="{y0 - 14}" width="{box_w:.0f}" '
            f'height="{len(curves) * line_h + 8}" fill="white" opacity="0.85" stroke="#ccc"/>'
        )
        for i, curve in enumerate(curves):
            color = curve.color or PALETTE[i % len(PALETTE)]
            y = y0 + i * line_h
            dash = ' stroke-dasharray="5,3"' if curve.kind == "step" else ""
            parts.append(
                f'<line x1="{x0}" y1="{y - 4}" x2="{x0 + 26}" y2="{y - 4}" '
                f'stroke="{color}" stroke-width="3"{dash}/>'
            )
            parts.append(f'<text x="{x0 + 34}" y="{y}">{_legend_text(curve)}</text>')

    parts.append("</svg>")
    return "\n".join(parts)


def _legend_text(curve: CurveSpec) -> str:
    if curve.ece is None:
        return curve.label
    return f"{curve.label} (ECE={curve.ece:.4f})"
