"""Report emission: schema-versioned JSON, CSV tables and SVG line plots."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

SCHEMA_VERSION = 1
FORMATS = ("json", "csv", "svg")
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _clean(obj):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def to_json(report) -> str:
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(report.to_dict() if hasattr(report, "to_dict") else report)
    return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"


def load_report(path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema version {doc.get('schema_version')!r}")
    return doc


def to_csv(report) -> str:
    if not hasattr(report, "csv_rows"):
        raise ValueError(f"{type(report).__name__} has no tabular form")
    header, rows = report.csv_rows()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def to_svg(report, width: int = 640, height: int = 400) -> str:
    """Hand-rolled line plot of ``report.plot_series()``."""
    if not hasattr(report, "plot_series"):
        raise ValueError(f"{type(report).__name__} has no plot form")
    xlabel, ylabel, series = report.plot_series()
    pad = 56
    pts = [(float(x), float(y)) for _, xs, ys in series for x, y in zip(xs, ys)
           if y is not None and math.isfinite(float(y))]
    xs_all = [p[0] for p in pts] or [0.0, 1.0]
    ys_all = [p[1] for p in pts] or [0.0, 1.0]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(min(ys_all), 0.0), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 16}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="16" y="{height / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {height / 2:.1f})">{escape(ylabel)}</text>',
        f'<text x="{pad - 4}" y="{height - pad + 4}" text-anchor="end" font-size="10">{y0:.4g}</text>',
        f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="10">{y1:.4g}</text>',
        f'<text x="{pad}" y="{height - pad + 16}" text-anchor="middle" font-size="10">{x0:.4g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" text-anchor="middle" font-size="10">{x1:.4g}</text>',
    ]
    for j, (label, xs, ys) in enumerate(series):
        color = _COLORS[j % len(_COLORS)]
        coords = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in zip(xs, ys)
                          if y is not None and math.isfinite(float(y)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}">'
                   f"<title>{escape(str(label))}</title></polyline>")
        out.append(f'<text x="{width - pad + 4}" y="{pad + 14 * j}" font-size="10" fill="{color}">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(report, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "svg":
        return to_svg(report)
    raise ValueError(f"unknown report format {fmt!r}; choose from {FORMATS}")


def emit_report(report, fmt: str, path=None) -> str:
    """Render ``report`` and write it to ``path`` when given; returns the text."""
    text = render(report, fmt)
    if path is not None:
        Path(path).write_text(text)
    return text
