"""Minimal standalone SVG line charts (linear axes, legend, no dependencies).

Output depends only on the input numbers, so identical data yields
byte-identical files.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 720, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 150, 40, 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def _nice_ticks(lo, hi, count=5):
    if hi == lo:
        hi = lo + 1.0 if lo == 0 else lo + abs(lo) * 0.1
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        step = m * mag
        if step >= raw:
            break
    start = math.floor(lo / step) * step
    ticks = []
    v = start
    while v <= hi + step * 1e-9:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt_tick(v):
    if v == 0:
        return "0"
    if abs(v) >= 1e5 or abs(v) < 1e-3:
        return f"{v:.2e}"
    return f"{v:.6g}"


def line_chart(x, series: dict, title="", xlabel="t") -> str:
    """Render ``{label: values}`` against the shared abscissa ``x``."""
    if not x or not series:
        raise ValueError("nothing to plot")
    finite = [v for vals in series.values() for v in vals if v is not None and math.isfinite(v)]
    if not finite:
        raise ValueError("no finite values to plot")
    x0, x1 = min(x), max(x)
    yticks = _nice_ticks(min(finite), max(finite))
    xticks = _nice_ticks(x0, x1)
    y_lo, y_hi = yticks[0], yticks[-1]
    x_lo, x_hi = min(xticks[0], x0), max(xticks[-1], x1)
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(v):
        return MARGIN_L + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return MARGIN_T + ph - (v - y_lo) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>')
    # axes
    out.append(
        f'<path d="M{MARGIN_L},{MARGIN_T} V{MARGIN_T + ph} H{MARGIN_L + pw}" fill="none" stroke="black"/>'
    )
    for v in yticks:
        yy = sy(v)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{yy:.2f}" x2="{MARGIN_L + pw}" y2="{yy:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{yy + 4:.2f}" text-anchor="end">{_fmt_tick(v)}</text>')
    for v in xticks:
        if v < x_lo or v > x_hi:
            continue
        xx = sx(v)
        out.append(f'<line x1="{xx:.2f}" y1="{MARGIN_T + ph}" x2="{xx:.2f}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{xx:.2f}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{_fmt_tick(v)}</text>')
    out.append(
        f'<text x="{MARGIN_L + pw / 2:.2f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    for k, (label, vals) in enumerate(series.items()):
        color = PALETTE[k % len(PALETTE)]
        segs = []
        pen_up = True
        for xv, yv in zip(x, vals):
            if yv is None or not math.isfinite(yv):
                pen_up = True
                continue
            segs.append(f"{'M' if pen_up else 'L'}{sx(xv):.2f},{sy(yv):.2f}")
            pen_up = False
        out.append(
            f'<path class="series" data-label="{escape(label)}" d="{" ".join(segs)}" '
            f'fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = MARGIN_T + 10 + 18 * k
        lx = MARGIN_L + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
