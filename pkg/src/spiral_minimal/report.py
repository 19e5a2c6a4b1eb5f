"""Deterministic serialization: JSON with 17-digit reals, CSV tables and SVG plots."""

from __future__ import annotations

import csv
import json
import math
from xml.sax.saxutils import escape

import numpy as np


def _real(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = "%.17g" % x
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _encode(obj, indent, level):
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + pad if indent else ", "
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _real(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[" + pad + sep.join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    if hasattr(obj, "to_dict"):
        return _encode(obj.to_dict(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every real written to 17 significant digits.

    Non-finite reals become null.  Key order is preserved, so equal inputs
    give byte-identical output.
    """
    return _encode(obj, indent, 0) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_real(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def arc_table(arc):
    """Rows (s, s1, s2, sdot1, sdot2) on the arc grid."""
    sd1, sd2, _, _ = arc.jets(arc.s)
    b = arc.params.branch
    return np.column_stack([arc.s, arc.s1, arc.s2, b * sd1, b * sd2])


ARC_HEADER = ("s", "s1", "s2", "sdot1", "sdot2")


def point_cloud_rows(U, Z):
    """Rows of parameters followed by real and imaginary parts of each coordinate."""
    return np.column_stack([U, Z.real, Z.imag]) if U.size else np.column_stack([Z.real, Z.imag])


def point_cloud_header(k, n1):
    return (
        [f"u{i}" for i in range(k)]
        + [f"re{i}" for i in range(n1)]
        + [f"im{i}" for i in range(n1)]
    )


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _panel(x0, y0, w, h, series, title, xlabel, ylabel, dots=False):
    xs = np.concatenate([np.asarray(s[0], float) for s in series])
    ys = np.concatenate([np.asarray(s[1], float) for s in series])
    xlo, xhi = float(np.nanmin(xs)), float(np.nanmax(xs))
    ylo, yhi = float(np.nanmin(ys)), float(np.nanmax(ys))
    if xhi == xlo:
        xlo, xhi = xlo - 1.0, xhi + 1.0
    if yhi == ylo:
        ylo, yhi = ylo - 1.0, yhi + 1.0
    m = 40.0
    pw, ph = w - 2 * m, h - 2 * m

    def px(x):
        return x0 + m + (x - xlo) / (xhi - xlo) * pw

    def py(y):
        return y0 + m + (yhi - y) / (yhi - ylo) * ph

    out = [
        f'<rect x="{x0 + m:.2f}" y="{y0 + m:.2f}" width="{pw:.2f}" height="{ph:.2f}" '
        'fill="none" stroke="#444" stroke-width="1"/>',
        f'<text x="{x0 + w / 2:.2f}" y="{y0 + 24:.2f}" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{x0 + w / 2:.2f}" y="{y0 + h - 8:.2f}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="{x0 + 12:.2f}" y="{y0 + h / 2:.2f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 {x0 + 12:.2f} {y0 + h / 2:.2f})">{escape(ylabel)}</text>',
        f'<text x="{x0 + m:.2f}" y="{y0 + h - m + 14:.2f}" font-size="10">{xlo:.4g}</text>',
        f'<text x="{x0 + w - m:.2f}" y="{y0 + h - m + 14:.2f}" text-anchor="end" font-size="10">{xhi:.4g}</text>',
        f'<text x="{x0 + m - 4:.2f}" y="{y0 + h - m:.2f}" text-anchor="end" font-size="10">{ylo:.4g}</text>',
        f'<text x="{x0 + m - 4:.2f}" y="{y0 + m + 10:.2f}" text-anchor="end" font-size="10">{yhi:.4g}</text>',
    ]
    for i, (x, y, label) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = [(px(a), py(b)) for a, b in zip(x, y) if math.isfinite(a) and math.isfinite(b)]
        if dots:
            out += [f'<circle cx="{a:.2f}" cy="{b:.2f}" r="1.2" fill="{color}"/>' for a, b in pts]
        else:
            d = " ".join(f"{'M' if j == 0 else 'L'}{a:.2f},{b:.2f}" for j, (a, b) in enumerate(pts))
            out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        out.append(
            f'<text x="{x0 + w - m - 4:.2f}" y="{y0 + m + 14 * (i + 1):.2f}" text-anchor="end" '
            f'font-size="11" fill="{color}">{escape(label)}</text>'
        )
    return out


def arc_svg(arc) -> str:
    """Two panels: the arguments against s, and the trace on the angle torus."""
    w, h = 480, 360
    two_pi = 2.0 * math.pi
    body = _panel(0, 0, w, h, [(arc.s, arc.s1, "s1"), (arc.s, arc.s2, "s2")],
                  "arguments along one arc", "s", "argument (rad)")
    body += _panel(w, 0, w, h, [(np.mod(arc.s1, two_pi), np.mod(arc.s2, two_pi), "trace")],
                   "torus-angle trace", "s1 mod 2pi", "s2 mod 2pi", dots=True)
    return "\n".join(
        [
            '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
            '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
            '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{2 * w}" height="{h}" '
            f'viewBox="0 0 {2 * w} {h}">',
            '<rect width="100%" height="100%" fill="white"/>',
            *body,
            "</svg>",
            "",
        ]
    )


def write_svg(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
