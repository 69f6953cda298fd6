"""Minimal deterministic SVG emission for decay curves (no plotting backend)."""

from __future__ import annotations

import math

_COLORS = ("#1f6fb2", "#c44e52", "#55a868", "#8172b3", "#ccb974")

_WIDTH, _HEIGHT = 640, 420
_MARGIN = 56


def _transform(values, lo, hi, out_lo, out_hi):
    span = hi - lo or 1.0
    return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in values]


def write_loglog_svg(path, title: str, xs, series: dict, x_label: str = "n", y_label: str = "value"):
    """Write a log-log polyline chart; series maps label -> y values over xs.

    Nonpositive values are clipped to 1e-300 before taking logs so that
    exactly-zero tails still draw.
    """
    log_x = [math.log10(max(float(x), 1e-300)) for x in xs]
    all_y = []
    clipped = {}
    for label, ys in series.items():
        ly = [math.log10(max(float(y), 1e-300)) for y in ys]
        clipped[label] = ly
        all_y.extend(ly)
    if not all_y:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(log_x), max(log_x)
    y_lo, y_hi = min(all_y), max(all_y)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH // 2}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_WIDTH - 2 * _MARGIN}" '
        f'height="{_HEIGHT - 2 * _MARGIN}" fill="none" stroke="#444"/>',
        f'<text x="{_WIDTH // 2}" y="{_HEIGHT - 12}" text-anchor="middle" font-size="12">'
        f"log10 {x_label}</text>",
        f'<text x="16" y="{_HEIGHT // 2}" font-size="12" '
        f'transform="rotate(-90 16 {_HEIGHT // 2})" text-anchor="middle">log10 {y_label}</text>',
    ]
    for i, (label, ly) in enumerate(sorted(clipped.items())):
        px = _transform(log_x, x_lo, x_hi, _MARGIN, _WIDTH - _MARGIN)
        py = _transform(ly, y_lo, y_hi, _HEIGHT - _MARGIN, _MARGIN)
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(px, py))
        color = _COLORS[i % len(_COLORS)]
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{_WIDTH - _MARGIN + 4}" y="{_MARGIN + 16 * i + 12}" '
            f'font-size="11" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
