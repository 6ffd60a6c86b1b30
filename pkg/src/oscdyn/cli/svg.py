"""Minimal deterministic SVG writer for line plots and heat maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=150, top=30, bottom=55)
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


class FigureError(ValueError):
    pass


@dataclass
class Series:
    label: str
    x: Sequence[float]
    y: Sequence[float]


@dataclass
class HeatMap:
    x: Sequence[float]          # cell centres along x
    y: Sequence[float]          # cell centres along y
    z: np.ndarray               # shape (len(y), len(x))
    marker: Optional[tuple] = None


@dataclass
class Style:
    title: str = ""
    xlabel: str = "x"
    ylabel: str = "y"
    equal_aspect: bool = False
    extra: dict = field(default_factory=dict)


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return [float(v) for v in np.arange(start, hi + 0.5 * step, step) if lo - 1e-12 <= v <= hi + 1e-12]


def _tick_label(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s in ("-0", "0") else s


class _Canvas:
    def __init__(self, xlim, ylim, style: Style):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        self.pw = WIDTH - MARGIN["left"] - MARGIN["right"]
        self.ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]
        self.style = style
        self.parts = []

    def px(self, x):
        return MARGIN["left"] + (np.asarray(x, float) - self.x0) / (self.x1 - self.x0) * self.pw

    def py(self, y):
        return MARGIN["top"] + (self.y1 - np.asarray(y, float)) / (self.y1 - self.y0) * self.ph

    def axes(self):
        L, T = MARGIN["left"], MARGIN["top"]
        p = self.parts
        p.append(f'<rect x="{L}" y="{T}" width="{self.pw}" height="{self.ph}" fill="none" stroke="#000000"/>')
        for v in _ticks(self.x0, self.x1):
            x = _fmt(float(self.px(v)))
            p.append(f'<line x1="{x}" y1="{T + self.ph}" x2="{x}" y2="{T + self.ph + 5}" stroke="#000000"/>')
            p.append(f'<text x="{x}" y="{T + self.ph + 18}" font-size="11" text-anchor="middle">{_tick_label(v)}</text>')
        for v in _ticks(self.y0, self.y1):
            y = _fmt(float(self.py(v)))
            p.append(f'<line x1="{L - 5}" y1="{y}" x2="{L}" y2="{y}" stroke="#000000"/>')
            p.append(f'<text x="{L - 8}" y="{y}" font-size="11" text-anchor="end" dominant-baseline="middle">{_tick_label(v)}</text>')
        s = self.style
        p.append(f'<text x="{L + self.pw / 2}" y="{HEIGHT - 15}" font-size="13" text-anchor="middle">{escape(s.xlabel)}</text>')
        p.append(f'<text x="18" y="{T + self.ph / 2}" font-size="13" text-anchor="middle" '
                 f'transform="rotate(-90 18 {T + self.ph / 2})">{escape(s.ylabel)}</text>')
        if s.title:
            p.append(f'<text x="{L + self.pw / 2}" y="18" font-size="14" text-anchor="middle">{escape(s.title)}</text>')

    def render(self) -> bytes:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
                f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">')
        body = "\n".join([head, '<rect width="100%" height="100%" fill="#ffffff"/>', *self.parts, "</svg>", ""])
        return body.encode("utf-8")


def _limits(values, pad=0.05):
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    span = hi - lo
    return lo - pad * span, hi + pad * span


def line_plot(series: Sequence[Series], style: Style) -> bytes:
    if not series:
        raise FigureError("at least one series is required")
    for s in series:
        if len(s.x) != len(s.y):
            raise FigureError(f"series {s.label!r}: x has {len(s.x)} points, y has {len(s.y)}")
        if len(s.x) == 0:
            raise FigureError(f"series {s.label!r} is empty")
    xs = np.concatenate([np.asarray(s.x, float) for s in series])
    ys = np.concatenate([np.asarray(s.y, float) for s in series])
    xlim = (float(xs.min()), float(xs.max())) if xs.max() > xs.min() else _limits(xs)
    ylim = _limits(ys)
    if style.equal_aspect:
        lo = min(xlim[0], ylim[0]); hi = max(xlim[1], ylim[1])
        xlim = ylim = (lo, hi)
    c = _Canvas(xlim, ylim, style)
    c.axes()
    for i, s in enumerate(series):
        colour = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(c.px(s.x), c.py(s.y)))
        c.parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        ly = MARGIN["top"] + 15 + 18 * i
        lx = WIDTH - MARGIN["right"] + 12
        c.parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        c.parts.append(f'<text x="{lx + 26}" y="{ly}" font-size="12" dominant-baseline="middle">{escape(s.label)}</text>')
    return c.render()


def _ramp(v: float) -> str:
    # white -> dark blue; luminance decreases monotonically with v in [0, 1]
    lo, hi = np.array([255, 255, 255]), np.array([8, 48, 107])
    rgb = np.rint(lo + (hi - lo) * min(max(v, 0.0), 1.0)).astype(int)
    return "#%02x%02x%02x" % tuple(rgb)


def heat_map(hm: HeatMap, style: Style) -> bytes:
    x = np.asarray(hm.x, float)
    y = np.asarray(hm.y, float)
    z = np.asarray(hm.z, float)
    if z.shape != (y.size, x.size):
        raise FigureError(f"heat map values have shape {z.shape}, expected {(y.size, x.size)}")
    if x.size < 2 or y.size < 2:
        raise FigureError("heat map needs at least two cells per axis")
    dx, dy = x[1] - x[0], y[1] - y[0]
    c = _Canvas((x[0] - dx / 2, x[-1] + dx / 2), (y[0] - dy / 2, y[-1] + dy / 2), style)
    zmin, zmax = float(z.min()), float(z.max())
    scale = (zmax - zmin) or 1.0
    w = _fmt(float(c.px(x[0] + dx) - c.px(x[0])))
    h = _fmt(float(c.py(y[0]) - c.py(y[0] + dy)))
    for j in range(y.size):
        top = _fmt(float(c.py(y[j] + dy / 2)))
        for i in range(x.size):
            left = _fmt(float(c.px(x[i] - dx / 2)))
            c.parts.append(f'<rect x="{left}" y="{top}" width="{w}" height="{h}" '
                           f'fill="{_ramp((z[j, i] - zmin) / scale)}"/>')
    if hm.marker is not None:
        mx, my = _fmt(float(c.px(hm.marker[0]))), _fmt(float(c.py(hm.marker[1])))
        c.parts.append(f'<circle cx="{mx}" cy="{my}" r="4" fill="none" stroke="#d62728" stroke-width="1.5"/>')
    c.axes()
    lx = WIDTH - MARGIN["right"] + 20
    for i in range(11):
        v = 1.0 - i / 10
        c.parts.append(f'<rect x="{lx}" y="{MARGIN["top"] + 20 * i}" width="20" height="20" fill="{_ramp(v)}"/>')
    c.parts.append(f'<text x="{lx + 26}" y="{MARGIN["top"] + 10}" font-size="11" dominant-baseline="middle">{_tick_label(zmax)}</text>')
    c.parts.append(f'<text x="{lx + 26}" y="{MARGIN["top"] + 210}" font-size="11" dominant-baseline="middle">{_tick_label(zmin)}</text>')
    return c.render()


def emit_figure(series, style: Style) -> bytes:
    """Render either a list of line ``Series`` or a single ``HeatMap``."""
    if isinstance(series, HeatMap):
        return heat_map(series, style)
    return line_plot(list(series), style)
