"""Static SVG charts for the experiment CSV files."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import ParseError
from .experiments import FIG1_HEADER, FIG2_HEADER

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=190, top=30, bottom=55)
COLORS = ["#1f5fbf", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#555555"]


def _read_series(csv_path):
    """Return ``(kind, series)``; series maps name -> list of (x, y, spread, bound)."""
    try:
        with open(csv_path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ParseError(f"cannot read {csv_path}: {exc}") from exc
    if not rows:
        raise ParseError("empty CSV", csv_path, 1)
    header = rows[0]
    if header == FIG1_HEADER:
        kind, key, y, spread, bound = "fig1", 1, 2, 3, None
    elif header == FIG2_HEADER:
        kind, key, y, spread, bound = "fig2", 1, 2, 3, 4
    else:
        raise ParseError(f"unrecognized header {','.join(header)!r}", csv_path, 1)
    series = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", csv_path, lineno)
        try:
            point = (float(row[0]), float(row[y]), float(row[spread]),
                     float(row[bound]) if bound is not None else None)
        except ValueError:
            raise ParseError("non-numeric field", csv_path, lineno) from None
        if not all(math.isfinite(v) for v in point if v is not None):
            raise ParseError("non-finite field", csv_path, lineno)
        series.setdefault(row[key], []).append(point)
    if not series:
        raise ParseError("no data rows", csv_path, len(rows))
    for pts in series.values():
        pts.sort()
    return kind, series


class _Axes:
    def __init__(self, xs, ys, loglog):
        self.loglog = loglog
        if loglog:
            xs = [x for x in xs if x > 0]
            ys = [y for y in ys if y > 0]
            if not xs or not ys:
                raise ParseError("log axes need positive values")
        self.x0, self.x1 = self._span(xs)
        self.y0, self.y1 = self._span(ys, floor_zero=not loglog)
        self.left = MARGIN["left"]
        self.right = WIDTH - MARGIN["right"]
        self.top = MARGIN["top"]
        self.bottom = HEIGHT - MARGIN["bottom"]

    def _t(self, v):
        return math.log10(v) if self.loglog else v

    def _span(self, vals, floor_zero=False):
        lo, hi = min(vals), max(vals)
        if floor_zero:
            lo = min(lo, 0.0)
        if self.loglog:
            lo, hi = math.log10(lo), math.log10(hi)
        if hi == lo:
            pad = abs(hi) * 0.1 or 1.0
        else:
            pad = 0.05 * (hi - lo)
        lo, hi = lo - pad, hi + pad
        if self.loglog:
            return 10 ** lo, 10 ** hi
        return lo, hi

    def px(self, x):
        a, b = self._t(self.x0), self._t(self.x1)
        return self.left + (self._t(x) - a) / (b - a) * (self.right - self.left)

    def py(self, y):
        if self.loglog:
            y = max(y, self.y0)
        a, b = self._t(self.y0), self._t(self.y1)
        return self.bottom - (self._t(y) - a) / (b - a) * (self.bottom - self.top)

    def ticks(self, lo, hi, count=5):
        if self.loglog:
            return [10.0 ** k for k in range(math.ceil(math.log10(lo)), math.floor(math.log10(hi)) + 1)]
        step = (hi - lo) / count
        mag = 10 ** math.floor(math.log10(step))
        step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= step), default=step)
        start = math.ceil(lo / step) * step
        out, v = [], start
        while v <= hi + 1e-12:
            out.append(round(v, 12))
            v += step
        return out


def _poly(points):
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in points)


def render_svg(kind, series, loglog=False, title=None):
    xs, ys = [], []
    for pts in series.values():
        for x, y, s, b in pts:
            xs.append(x)
            ys.extend([y + s, max(y - s, y * 0.5 if loglog else y - s)])
            if b is not None:
                ys.append(b)
    ax = _Axes(xs, ys, loglog)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    if title:
        out.append(f'<text x="{(ax.left + ax.right) / 2:.1f}" y="18" text-anchor="middle">{escape(title)}</text>')
    out.append(f'<rect x="{ax.left}" y="{ax.top}" width="{ax.right - ax.left}" '
               f'height="{ax.bottom - ax.top}" fill="none" stroke="#333"/>')
    for t in ax.ticks(ax.x0, ax.x1):
        x = ax.px(t)
        out.append(f'<line x1="{x:.2f}" y1="{ax.bottom}" x2="{x:.2f}" y2="{ax.bottom + 5}" stroke="#333"/>')
        out.append(f'<text x="{x:.2f}" y="{ax.bottom + 18}" text-anchor="middle">{t:g}</text>')
    for t in ax.ticks(ax.y0, ax.y1):
        y = ax.py(t)
        out.append(f'<line x1="{ax.left - 5}" y1="{y:.2f}" x2="{ax.left}" y2="{y:.2f}" stroke="#333"/>')
        out.append(f'<text x="{ax.left - 8}" y="{y + 4:.2f}" text-anchor="end">{t:g}</text>')
    xlabel = "n" if kind == "fig1" else "x"
    out.append(f'<text x="{(ax.left + ax.right) / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text transform="translate(18,{(ax.top + ax.bottom) / 2:.1f}) rotate(-90)" '
               f'text-anchor="middle">distance</text>')

    legend_y = ax.top + 10
    for idx, (name, pts) in enumerate(sorted(series.items())):
        color = COLORS[idx % len(COLORS)]
        label = escape(name)
        if name == "reference":
            y = ax.py(pts[0][1])
            out.append(f'<line class="reference" x1="{ax.left}" y1="{y:.2f}" x2="{ax.right}" y2="{y:.2f}" '
                       f'stroke="#000" stroke-dasharray="6,4" data-value="{pts[0][1]:g}"/>')
            color = "#000"
        else:
            if len(pts) > 1 and any(s > 0 for _, _, s, _ in pts):
                upper = [(ax.px(x), ax.py(y + s)) for x, y, s, _ in pts]
                lower = [(ax.px(x), ax.py(max(y - s, ax.y0) if loglog else y - s))
                         for x, y, s, _ in reversed(pts)]
                out.append(f'<polygon class="band" points="{_poly(upper + lower)}" '
                           f'fill="{color}" fill-opacity="0.15" stroke="none"/>')
            line = [(ax.px(x), ax.py(y)) for x, y, _, _ in pts]
            if len(line) > 1:
                out.append(f'<polyline class="series" points="{_poly(line)}" fill="none" '
                           f'stroke="{color}" stroke-width="1.5"/>')
            for x, y in line:
                out.append(f'<circle class="marker" cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}"/>')
            if pts[0][3] is not None:
                bound = [(ax.px(x), ax.py(b)) for x, _, _, b in pts]
                if len(bound) > 1:
                    out.append(f'<polyline class="bound" points="{_poly(bound)}" fill="none" '
                               f'stroke="{color}" stroke-width="1.5" stroke-dasharray="5,3"/>')
        lx = ax.right + 15
        out.append(f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 20}" y2="{legend_y}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{legend_y + 4}">{label}</text>')
        legend_y += 18
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg_plot(csv_path, out_path, loglog=None, title=None):
    """Render ``csv_path`` to ``out_path``; nothing is written if the CSV is unusable."""
    kind, series = _read_series(csv_path)
    if loglog is None:
        loglog = Path(csv_path).stem == "fig1-right"
    svg = render_svg(kind, series, loglog=loglog, title=title)
    Path(out_path).write_text(svg)
    return out_path
