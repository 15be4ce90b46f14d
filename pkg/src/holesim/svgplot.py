"""Minimal deterministic SVG line charts, no external dependencies.

One line per series with vertical error bars; identical inputs always
produce byte-identical output (all coordinates use fixed decimal
formatting and no timestamps or randomness enter the file).
"""

from __future__ import annotations

from typing import Sequence

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]

WIDTH = 860
HEIGHT = 540
MARGIN_LEFT = 90
MARGIN_RIGHT = 200
MARGIN_TOP = 60
MARGIN_BOTTOM = 80


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def line_chart(
    title: str,
    x_label: str,
    y_label: str,
    series: Sequence[tuple[str, list[tuple[float, float, float]]]],
) -> str:
    """Render series of (x, mean, stddev) points to an SVG document string."""
    if not series or all(not pts for _, pts in series):
        raise ValueError("nothing to plot")
    xs = sorted({x for _, pts in series for x, _, _ in pts})
    y_hi = max(m + s for _, pts in series for _, m, s in pts)
    y_lo = min(m - s for _, pts in series for _, m, s in pts)
    if y_hi == y_lo:
        y_hi, y_lo = y_hi + 1.0, y_lo - 1.0
    pad = 0.08 * (y_hi - y_lo)
    y_hi += pad
    y_lo = min(0.0, y_lo) if y_lo > 0 and y_lo < pad * 4 else y_lo - pad

    plot_l, plot_r = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    plot_t, plot_b = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
    x_lo, x_hi = min(xs), max(xs)
    x_span = (x_hi - x_lo) or 1.0

    def px(x: float) -> float:
        return plot_l + (x - x_lo) / x_span * (plot_r - plot_l)

    def py(y: float) -> float:
        return plot_b - (y - y_lo) / (y_hi - y_lo) * (plot_b - plot_t)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.1f}" y="30" text-anchor="middle" font-size="18" '
        f'font-family="sans-serif">{_escape(title)}</text>',
    ]
    for i in range(6):
        y_val = y_lo + (y_hi - y_lo) * i / 5
        y = py(y_val)
        out.append(f'<line x1="{plot_l}" y1="{y:.2f}" x2="{plot_r}" y2="{y:.2f}" '
                   f'stroke="#dddddd" stroke-width="1"/>')
        out.append(f'<text x="{plot_l - 8}" y="{y + 4:.2f}" text-anchor="end" '
                   f'font-size="12" font-family="sans-serif">{y_val:.4g}</text>')
    out.append(f'<line x1="{plot_l}" y1="{plot_b}" x2="{plot_r}" y2="{plot_b}" '
               f'stroke="#000000" stroke-width="1.5"/>')
    out.append(f'<line x1="{plot_l}" y1="{plot_t}" x2="{plot_l}" y2="{plot_b}" '
               f'stroke="#000000" stroke-width="1.5"/>')
    for x in xs:
        out.append(f'<line x1="{px(x):.2f}" y1="{plot_b}" x2="{px(x):.2f}" '
                   f'y2="{plot_b + 6}" stroke="#000000" stroke-width="1"/>')
        out.append(f'<text x="{px(x):.2f}" y="{plot_b + 22}" text-anchor="middle" '
                   f'font-size="12" font-family="sans-serif">{x:g}</text>')
    out.append(f'<text x="{(plot_l + plot_r) / 2:.1f}" y="{HEIGHT - 28}" '
               f'text-anchor="middle" font-size="14" font-family="sans-serif">'
               f'{_escape(x_label)}</text>')
    out.append(f'<text x="24" y="{(plot_t + plot_b) / 2:.1f}" text-anchor="middle" '
               f'font-size="14" font-family="sans-serif" '
               f'transform="rotate(-90 24 {(plot_t + plot_b) / 2:.1f})">'
               f'{_escape(y_label)}</text>')

    legend_x = plot_r + 16
    legend_y = plot_t + 10
    for idx, (label, pts) in enumerate(series):
        color = COLORS[idx % len(COLORS)]
        pts = sorted(pts)
        poly = " ".join(f"{px(x):.2f},{py(m):.2f}" for x, m, _ in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2.5" '
                   f'points="{poly}"/>')
        for x, m, s in pts:
            cx, cy = px(x), py(m)
            if s > 0:
                y1, y2 = py(m + s), py(m - s)
                out.append(f'<line x1="{cx:.2f}" y1="{y1:.2f}" x2="{cx:.2f}" '
                           f'y2="{y2:.2f}" stroke="{color}" stroke-width="1"/>')
                for ye in (y1, y2):
                    out.append(f'<line x1="{cx - 4:.2f}" y1="{ye:.2f}" '
                               f'x2="{cx + 4:.2f}" y2="{ye:.2f}" '
                               f'stroke="{color}" stroke-width="1"/>')
            out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3.5" fill="{color}"/>')
        ly = legend_y + idx * 24
        out.append(f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 24}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2.5"/>')
        out.append(f'<text x="{legend_x + 30}" y="{ly + 4}" font-size="13" '
                   f'font-family="sans-serif">{_escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
