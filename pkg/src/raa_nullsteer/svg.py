"""Minimal self-contained SVG line charts (no external fonts, scripts or links)."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray
    dashed: bool = False
    markers: bool = False


@dataclass
class LineChart:
    title: str
    xlabel: str
    ylabel: str
    series: list[Series] = field(default_factory=list)
    vlines: list[tuple[float, str]] = field(default_factory=list)
    width: int = 720
    height: int = 440
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None

    def add(self, label, x, y, **kw):
        self.series.append(Series(label, np.asarray(x, float), np.asarray(y, float), **kw))
        return self

    def render(self) -> str:
        left, right, top, bottom = 70, 20, 40, 60
        pw, ph = self.width - left - right, self.height - top - bottom
        xs = np.concatenate([s.x for s in self.series])
        ys = np.concatenate([s.y for s in self.series])
        x0, x1 = self.xlim or (float(xs.min()), float(xs.max()))
        y0, y1 = self.ylim or _padded(float(ys.min()), float(ys.max()))
        if x1 == x0:
            x1 = x0 + 1.0

        def px(v):
            return left + (v - x0) / (x1 - x0) * pw

        def py(v):
            return top + (y1 - np.clip(v, y0, y1)) / (y1 - y0) * ph

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}" font-family="sans-serif" font-size="12">',
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="white"/>',
            f'<text x="{self.width / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(self.title)}</text>',
        ]
        for t in _ticks(y0, y1):
            out.append(f'<line x1="{left}" y1="{py(t):.2f}" x2="{left + pw}" y2="{py(t):.2f}" stroke="#e5e5e5"/>')
            out.append(f'<text x="{left - 6}" y="{py(t) + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
        for t in _ticks(x0, x1):
            out.append(f'<line x1="{px(t):.2f}" y1="{top}" x2="{px(t):.2f}" y2="{top + ph}" stroke="#f0f0f0"/>')
            out.append(f'<text x="{px(t):.2f}" y="{top + ph + 18}" text-anchor="middle">{_fmt(t)}</text>')
        out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
        for v, label in self.vlines:
            if x0 <= v <= x1:
                out.append(
                    f'<line x1="{px(v):.2f}" y1="{top}" x2="{px(v):.2f}" y2="{top + ph}" '
                    f'stroke="#555" stroke-dasharray="2,3"/>'
                )
                out.append(f'<text x="{px(v) + 3:.2f}" y="{top + 12}" fill="#555">{escape(label)}</text>')
        for i, s in enumerate(self.series):
            color = PALETTE[i % len(PALETTE)]
            pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(s.x, s.y))
            dash = ' stroke-dasharray="6,4"' if s.dashed else ""
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
            if s.markers:
                out.extend(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="3" fill="{color}"/>' for a, b in zip(s.x, s.y))
            ly = top + 16 + 16 * i
            out.append(f'<line x1="{left + pw - 150}" y1="{ly}" x2="{left + pw - 125}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/>')
            out.append(f'<text x="{left + pw - 120}" y="{ly + 4}">{escape(s.label)}</text>')
        out.append(f'<text x="{left + pw / 2:.1f}" y="{self.height - 15}" text-anchor="middle">{escape(self.xlabel)}</text>')
        out.append(
            f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 18 {top + ph / 2:.1f})">{escape(self.ylabel)}</text>'
        )
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _padded(lo, hi):
    if hi == lo:
        return lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _ticks(lo, hi, target=8):
    span = hi - lo
    raw = span / target
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = np.ceil(lo / step) * step
    return [float(v) for v in np.arange(start, hi + 1e-9 * span, step)]


def _fmt(v):
    return f"{v:.6g}" if abs(v) > 1e-12 else "0"
