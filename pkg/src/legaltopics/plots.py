"""Dependency-free SVG emission: topic scatter, topic word bars, K-sweep
lines."""

from __future__ import annotations

import html

import numpy as np

_PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]
_NOISE_COLOR = "#bbbbbb"


def _svg(width, height, body) -> str:
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">\n'
            f'<rect width="{width}" height="{height}" fill="white"/>\n'
            + "\n".join(body) + "\n</svg>\n")


def _scale(values, lo_px, hi_px):
    values = np.asarray(values, dtype=np.float64)
    vmin, vmax = values.min(), values.max()
    span = vmax - vmin or 1.0
    return lo_px + (values - vmin) / span * (hi_px - lo_px)


def scatter_svg(points: np.ndarray, labels, width=640, height=480) -> str:
    """2-D scatter colored by topic; noise (-1) in gray."""
    points = np.asarray(points, dtype=np.float64)
    xs = _scale(points[:, 0], 40, width - 20)
    ys = _scale(points[:, 1], height - 40, 20)  # y axis points up
    body = []
    for (x, y, label) in zip(xs, ys, labels):
        color = _NOISE_COLOR if label < 0 else _PALETTE[label % len(_PALETTE)]
        body.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}" '
                    f'fill-opacity="0.8"/>')
    return _svg(width, height, body)


def bars_svg(topics, width=640, bar_height=18, gap=6, label_width=220) -> str:
    """Horizontal bar chart of per-topic word weights, one block per topic."""
    body = []
    y = 10
    for topic in topics:
        body.append(f'<text x="10" y="{y + 12}" font-size="13" '
                    f'font-weight="bold" font-family="sans-serif">'
                    f'Topic {topic.topic_id} (n={topic.size})</text>')
        y += bar_height + gap
        if topic.words:
            wmax = max(w for _, w in topic.words) or 1.0
            for term, weight in topic.words:
                bar = max(1.0, weight / wmax * (width - label_width - 30))
                body.append(f'<text x="10" y="{y + 13}" font-size="12" '
                            f'font-family="sans-serif">'
                            f'{html.escape(term)}</text>')
                body.append(f'<rect x="{label_width}" y="{y + 2}" '
                            f'width="{bar:.2f}" height="{bar_height - 6}" '
                            f'fill="{_PALETTE[topic.topic_id % len(_PALETTE)]}"/>')
                y += bar_height
        y += 2 * gap
    return _svg(width, y + 10, body)


def sweep_svg(rows, width=640, height=400) -> str:
    """TD and coherence versus K as two polylines."""
    rows = sorted(rows, key=lambda r: r.k)
    ks = [r.k for r in rows]
    xs = _scale(ks, 50, width - 20)
    body = []
    series = [("topic_diversity", "#1f77b4",
               [r.topic_diversity for r in rows]),
              ("coherence_cv", "#d62728", [r.coherence_cv for r in rows])]
    for i, (name, color, values) in enumerate(series):
        ys = [(height - 40) - v * (height - 70) for v in values]
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
        body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                    f'stroke-width="2"/>')
        body.append(f'<text x="{width - 180}" y="{20 + 16 * i}" '
                    f'font-size="12" fill="{color}" '
                    f'font-family="sans-serif">{name}</text>')
    for k, x in zip(ks, xs):
        body.append(f'<text x="{x:.2f}" y="{height - 15}" font-size="10" '
                    f'text-anchor="middle" font-family="sans-serif">{k}</text>')
    body.append(f'<text x="{width // 2}" y="{height - 2}" font-size="11" '
                f'text-anchor="middle" font-family="sans-serif">K</text>')
    return _svg(width, height, body)
