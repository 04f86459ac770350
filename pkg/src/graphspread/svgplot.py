"""Static SVG rendering of uncertainty curves and sample clouds.

Curve and cloud coordinates are written in data units inside a transformed
group, so the file text can be checked against the CSV it came from.
"""

import html
import math
import re
from typing import Optional

import numpy as np

from .io import fmt

WIDTH, HEIGHT = 640, 440
LEFT, RIGHT, TOP, BOTTOM = 72, 24, 24, 60


def _nice_step(span: float, target: int = 5) -> float:
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 2.5, 5, 10):
        if mult * mag >= raw:
            return mult * mag
    return 10 * mag


def _ticks(hi: float) -> list:
    step = _nice_step(hi)
    n = int(math.floor(hi / step + 1e-9))
    return [round(i * step, 12) for i in range(n + 1)]


def _tick_label(v: float) -> str:
    return format(v, "g")


def render_svg(
    curve_s,
    curve_g,
    cloud_s: Optional[np.ndarray] = None,
    cloud_g: Optional[np.ndarray] = None,
    title: str = "",
) -> str:
    curve_s = np.asarray(curve_s, dtype=float)
    curve_g = np.asarray(curve_g, dtype=float)
    has_cloud = cloud_s is not None and len(cloud_s) > 0
    xs = [curve_s] + ([np.asarray(cloud_s, dtype=float)] if has_cloud else [])
    ys = [curve_g] + ([np.asarray(cloud_g, dtype=float)] if has_cloud else [])
    xmax = max(1.0, max(float(a.max()) for a in xs if a.size))
    ymax = max(float(a.max()) for a in ys if a.size)
    ymax = ymax if ymax > 0 else 1.0
    xmax *= 1.02
    ymax *= 1.05

    pw = WIDTH - LEFT - RIGHT
    ph = HEIGHT - TOP - BOTTOM
    sx, sy = pw / xmax, ph / ymax
    x0, y0 = LEFT, TOP + ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        '<defs><clipPath id="plot-area">'
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath></defs>',
    ]
    if title:
        out.append(f'<text x="{LEFT + pw / 2:g}" y="{TOP - 8}" text-anchor="middle">{html.escape(title)}</text>')

    out.append('<g class="axes" stroke="black" stroke-width="1">')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + pw}" y2="{y0}"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{TOP}"/>')
    for t in _ticks(xmax):
        px = x0 + t * sx
        out.append(f'<line x1="{px:.3f}" y1="{y0}" x2="{px:.3f}" y2="{y0 + 5}"/>')
    for t in _ticks(ymax):
        py = y0 - t * sy
        out.append(f'<line x1="{x0 - 5}" y1="{py:.3f}" x2="{x0}" y2="{py:.3f}"/>')
    out.append("</g>")
    out.append('<g class="tick-labels" fill="black">')
    for t in _ticks(xmax):
        out.append(f'<text x="{x0 + t * sx:.3f}" y="{y0 + 18}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in _ticks(ymax):
        out.append(f'<text x="{x0 - 8}" y="{y0 - t * sy + 4:.3f}" text-anchor="end">{_tick_label(t)}</text>')
    out.append("</g>")
    out.append(
        f'<text class="xlabel" x="{x0 + pw / 2:g}" y="{HEIGHT - 16}" text-anchor="middle">spectral spread</text>'
    )
    out.append(
        f'<text class="ylabel" x="18" y="{TOP + ph / 2:g}" text-anchor="middle" '
        f'transform="rotate(-90 18 {TOP + ph / 2:g})">graph spread</text>'
    )

    data_tf = f'translate({x0} {y0}) scale({fmt(sx)} {fmt(-sy)})'
    out.append(f'<g clip-path="url(#plot-area)"><g class="data" transform="{data_tf}">')
    if has_cloud:
        d = " ".join(f"M{fmt(a)} {fmt(b)}h0" for a, b in zip(cloud_s, cloud_g))
        out.append(
            f'<path class="cloud" d="{d}" fill="none" stroke="#4a72b0" stroke-width="2" '
            'stroke-linecap="round" vector-effect="non-scaling-stroke"/>'
        )
    pts = " ".join(f"{fmt(a)},{fmt(b)}" for a, b in zip(curve_s, curve_g))
    out.append(
        f'<polyline class="curve" points="{pts}" fill="none" stroke="#d62728" '
        'stroke-width="2" vector-effect="non-scaling-stroke"/>'
    )
    out.append("</g></g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def polyline_points(svg: str) -> np.ndarray:
    """Data coordinates of the curve polyline in an SVG produced here."""
    m = re.search(r'<polyline class="curve" points="([^"]*)"', svg)
    if m is None:
        raise ValueError("no curve polyline found")
    pairs = [p.split(",") for p in m.group(1).split()]
    return np.array([[float(a), float(b)] for a, b in pairs]).reshape(-1, 2)
