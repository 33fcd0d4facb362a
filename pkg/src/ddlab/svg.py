"""Minimal deterministic SVG line plots from sweep CSVs."""

import csv
import math
from xml.sax.saxutils import escape

from .exceptions import MissingColumn

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=150, top=30, bottom=55)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")


def _nice_step(span, target=5):
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if m * mag >= raw:
            return m * mag
    return 10 * mag


def _ticks(lo, hi):
    if hi <= lo:
        lo, hi = lo - 0.5, hi + 0.5
    step = _nice_step(hi - lo)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks, lo, hi


def _fmt(v):
    return f"{v:.2f}".rstrip("0").rstrip(".") if v == v else "nan"


def _label(v):
    return f"{v:.6g}"


def _legend_key(key):
    try:
        return _label(float(key))
    except ValueError:
        return key


def read_series(csv_path, x_column, y_column, group_column=None, log_x=False):
    """Group ``(x, y)`` pairs from a CSV by ``group_column``, keeping file order."""
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (x_column, y_column, group_column):
            if col and col not in header:
                raise MissingColumn(f"column {col!r} not in {csv_path}")
        series = {}
        for row in reader:
            xs, ys = row[x_column], row[y_column]
            if not xs or not ys:
                continue
            x, y = float(xs), float(ys)
            if log_x:
                if x <= 0:
                    continue
                x = math.log10(x)
            key = row[group_column] if group_column else ""
            series.setdefault(key, []).append((x, y))
    return series


def render_svg(series, x_label, y_label, group_label="", log_x=False):
    pts = [p for s in series.values() for p in s]
    if pts:
        xt, x0, x1 = _ticks(min(p[0] for p in pts), max(p[0] for p in pts))
        yt, y0, y1 = _ticks(min(p[1] for p in pts), max(p[1] for p in pts))
    else:
        xt, x0, x1 = _ticks(0.0, 1.0)
        yt, y0, y1 = _ticks(0.0, 1.0)
    x0, x1 = min(x0, xt[0]), max(x1, xt[-1])
    y0, y1 = min(y0, yt[0]), max(y1, yt[-1])
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN["top"] + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
    ]
    bottom = MARGIN["top"] + ph
    for t in xt:
        x = _fmt(px(t))
        text = _label(10**t) if log_x else _label(t)
        out.append(f'<line x1="{x}" y1="{bottom}" x2="{x}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{bottom + 18}" text-anchor="middle">{escape(text)}</text>')
    for t in yt:
        y = _fmt(py(t))
        out.append(f'<line x1="{MARGIN["left"] - 5}" y1="{y}" x2="{MARGIN["left"]}" y2="{y}" stroke="black"/>')
        out.append(
            f'<text x="{MARGIN["left"] - 8}" y="{y}" text-anchor="end" '
            f'dominant-baseline="middle">{escape(_label(t))}</text>'
        )
    out.append(
        f'<text x="{_fmt(MARGIN["left"] + pw / 2)}" y="{HEIGHT - 12}" '
        f'text-anchor="middle">{escape(x_label)}</text>'
    )
    out.append(
        f'<text x="16" y="{_fmt(MARGIN["top"] + ph / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_fmt(MARGIN["top"] + ph / 2)})">{escape(y_label)}</text>'
    )

    legend_x = MARGIN["left"] + pw + 15
    for i, (key, pairs) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pairs)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        ly = MARGIN["top"] + 10 + 18 * i
        name = f"{group_label}={_legend_key(key)}" if group_label else (key or y_label)
        out.append(f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{legend_x + 26}" y="{ly}" dominant-baseline="middle">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg_plot(csv_path, x_column, y_column, group_column, out_path, log_x=False):
    """Render one polyline per distinct ``group_column`` value to ``out_path``.

    Rows with an empty ``x`` or ``y`` (failed sweep points) are skipped.  The
    output depends only on the CSV contents.
    """
    series = read_series(csv_path, x_column, y_column, group_column, log_x)
    x_label = f"{x_column} (log scale)" if log_x else x_column
    text = render_svg(series, x_label, y_column, group_column or "", log_x)
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return out_path
