"""Deterministic report emission: canonical JSON, CSV and SVG plots.

Reports are golden-file friendly: keys keep their insertion order,
floats are printed with 9 significant digits, and the SVG plot is plain
text with fixed formatting, so identical analyses serialize to identical
bytes.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .errors import NumericError

SCHEMA_VERSION = "1"

PER_POSE_FIELDS = (
    "anchor_index",
    "trainer_sigma",
    "user_sigma",
    "trainer_precision",
    "user_precision",
    "mean_pose_distance",
    "fit",
)


def _format_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    v = float(x)
    if not math.isfinite(v):
        raise NumericError(f"non-finite value {v!r} in report")
    return format(v, ".9g")


def render_json(obj) -> str:
    """Canonical JSON text: insertion-ordered keys, 9-digit floats."""

    def emit(node) -> str:
        if node is None:
            return "null"
        if isinstance(node, str):
            return json.dumps(node)
        if isinstance(node, (bool, int, float)):
            return _format_number(node)
        if isinstance(node, dict):
            inner = ", ".join(f"{json.dumps(str(k))}: {emit(v)}" for k, v in node.items())
            return "{" + inner + "}"
        if isinstance(node, (list, tuple)):
            return "[" + ", ".join(emit(v) for v in node) + "]"
        raise NumericError(f"cannot serialize {type(node).__name__} in report")

    return emit(obj) + "\n"


def analysis_report(analyzer, config: dict) -> dict:
    """Single-sequence report: period plus per-pose deviation and precision."""
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "period": float(analyzer.period_),
        "num_cycles": len(analyzer.cycle_ranges_),
        "template_length": int(analyzer.template_length_),
        "selected_minima": [int(t) for t in analyzer.selected_minima_],
        "per_pose": [
            {
                "anchor_index": i,
                "sigma": float(s.avg_deviation),
                "precision": float(s.precision),
            }
            for i, s in enumerate(analyzer.stats_)
        ],
        "barycenter_fallbacks": [int(i) for i in analyzer.barycenter_fallbacks_],
        "config": config,
    }


def comparison_report(result, config: dict) -> dict:
    """Trainer-vs-user report with per-anchor precision and fit indices."""
    trainer, user = result.trainer, result.user
    per_pose = []
    for entry in result.report.per_pose:
        i = entry.anchor_index
        per_pose.append(
            {
                "anchor_index": i,
                "trainer_sigma": float(trainer.stats_[i].avg_deviation),
                "user_sigma": float(result.user_sigma_matched[i]),
                "trainer_precision": float(entry.trainer_precision),
                "user_precision": float(entry.user_precision),
                "mean_pose_distance": float(result.mean_pose_distance[i]),
                "fit": float(entry.fit),
            }
        )
    fits = sorted(e.fit for e in result.report.per_pose)
    mid = len(fits) // 2
    median_fit = fits[mid] if len(fits) % 2 else (fits[mid - 1] + fits[mid]) / 2.0
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "compare",
        "period": float(trainer.period_),
        "num_cycles": len(trainer.cycle_ranges_),
        "user_period": float(user.period_),
        "user_num_cycles": len(user.cycle_ranges_),
        "per_pose": per_pose,
        "best_index": int(result.report.best_index),
        "worst_index": int(result.report.worst_index),
        "median_fit": float(median_fit),
        "barycenter_fallbacks": [int(i) for i in trainer.barycenter_fallbacks_],
        "config": config,
    }


def write_csv(path, per_pose: list[dict]) -> None:
    """Per-pose table with one row per trainer anchor."""
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(PER_POSE_FIELDS)
        for row in per_pose:
            writer.writerow(_format_number(row[k]) for k in PER_POSE_FIELDS)


_SVG_SIZE = (800, 420)
_MARGIN = 50
_SERIES_STYLE = (
    ("trainer precision", "#1f77b4"),
    ("user precision", "#d62728"),
    ("fit", "#2ca02c"),
)


def render_svg(trainer_precision, user_precision, fit) -> str:
    """Line chart with the three comparison curves, as deterministic text."""
    series = [list(map(float, s)) for s in (trainer_precision, user_precision, fit)]
    width, height = _SVG_SIZE
    plot_w = width - 2 * _MARGIN
    plot_h = height - 2 * _MARGIN
    n = max(len(s) for s in series)
    top = max(max(s) for s in series if s) or 1.0

    def x_at(i: int) -> float:
        return _MARGIN + (plot_w * i / max(n - 1, 1))

    def y_at(v: float) -> float:
        return height - _MARGIN - plot_h * (v / top)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{height - _MARGIN}" x2="{width - _MARGIN}" '
        f'y2="{height - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{height - _MARGIN}" stroke="black"/>',
        f'<text x="{width // 2}" y="{height - 12}" text-anchor="middle" '
        f'font-size="13">pose index</text>',
        f'<text x="{width - _MARGIN}" y="{_MARGIN - 28}" text-anchor="end" '
        f'font-size="11">y max {_format_number(top)}</text>',
    ]
    for (label, color), values in zip(_SERIES_STYLE, series):
        points = " ".join(
            f"{x_at(i):.2f},{y_at(v):.2f}" for i, v in enumerate(values)
        )
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{points}"><title>{label}</title></polyline>'
        )
    for k, (label, color) in enumerate(_SERIES_STYLE):
        y = _MARGIN - 10 + k * 14
        parts.append(
            f'<rect x="{_MARGIN}" y="{y - 8}" width="10" height="10" fill="{color}"/>'
            f'<text x="{_MARGIN + 16}" y="{y}" font-size="12">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
