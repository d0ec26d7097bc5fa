"""CSV, JSON and SVG writers for curves, operators and reports."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

SVG_WIDTH = 800
SVG_HEIGHT = 500


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def format_vector(v: Sequence[int]) -> str:
    return ",".join(str(int(c)) for c in v)


def curve_csv(schedule: Iterable[tuple[float, float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["T1", "probability"])
    for t, prob in schedule:
        w.writerow([fmt(float(t)), fmt(float(prob))])
    return buf.getvalue()


def rows_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / count
    return [lo + k * step for k in range(count + 1)]


def curve_svg(xs: Sequence[float], ys: Sequence[float], title: str = "",
              xlabel: str = "T1", ylabel: str = "p(T1)") -> str:
    """Single-polyline line plot on a fixed 800x500 canvas with linear axes."""
    left, right, top, bottom = 70, 20, 40, 60
    pw, ph = SVG_WIDTH - left - right, SVG_HEIGHT - top - bottom
    x0, x1 = (min(xs), max(xs)) if len(xs) else (0.0, 1.0)
    y0, y1 = 0.0, max(1e-12, max(ys) if len(ys) else 1.0)
    if x1 == x0:
        x1 = x0 + 1.0

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" '
        f'height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for tx in _ticks(x0, x1):
        X = sx(tx)
        parts.append(f'<line x1="{X:.2f}" y1="{top + ph}" x2="{X:.2f}" y2="{top + ph + 6}" stroke="black"/>')
        parts.append(f'<text x="{X:.2f}" y="{top + ph + 22}" font-size="12" text-anchor="middle">{tx:.3g}</text>')
    for ty in _ticks(y0, y1):
        Y = sy(ty)
        parts.append(f'<line x1="{left - 6}" y1="{Y:.2f}" x2="{left}" y2="{Y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{left - 10}" y="{Y + 4:.2f}" font-size="12" text-anchor="end">{ty:.3g}</text>')
    points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
    parts.append(f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{points}"/>')
    parts.append(f'<text x="{left + pw / 2}" y="{SVG_HEIGHT - 15}" font-size="14" text-anchor="middle">{escape(xlabel)}</text>')
    parts.append(f'<text x="18" y="{top + ph / 2}" font-size="14" text-anchor="middle" '
                 f'transform="rotate(-90 18 {top + ph / 2})">{escape(ylabel)}</text>')
    if title:
        parts.append(f'<text x="{left + pw / 2}" y="24" font-size="16" text-anchor="middle">{escape(title)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
