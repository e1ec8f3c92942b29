"""Result tables, CSV/SVG writers and the run provenance record."""
import csv
from dataclasses import dataclass, field
from datetime import datetime, timezone
import json
import math
import os
from xml.sax.saxutils import escape

import numpy as np

from .exceptions import InvalidInputError

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass(frozen=True)
class ResultTable:
    """Rectangular numeric table; columns are (name, unit) pairs."""

    columns: tuple
    rows: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.size == 0:
            rows = rows.reshape(0, len(self.columns))
        if rows.shape[1] != len(self.columns):
            raise InvalidInputError("row width does not match the column count")
        for col in self.columns:
            if len(col) != 2 or not col[1]:
                raise InvalidInputError(f"column {col!r} needs a unit")
        object.__setattr__(self, "rows", rows)

    @property
    def header(self):
        return [f"{name} [{unit}]" for name, unit in self.columns]

    def column(self, name):
        for i, (n, _) in enumerate(self.columns):
            if n == name:
                return self.rows[:, i]
        raise KeyError(name)


def _fmt(v):
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(float(v))


def write_csv(table, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(table.header)
        for row in table.rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def write_line_svg(path, x, series, xlabel, ylabel, title="", note="", logy=False):
    """Minimal line plot; series is a list of (label, y-values)."""
    width, height, ml, mr, mt, mb = 640, 420, 80, 150, 40, 60
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for _, y in series]
    if logy:
        ys = [np.log10(np.where(y > 0, y, np.nan)) for y in ys]
    vals = np.concatenate([y[np.isfinite(y)] for y in ys]) if ys else np.array([])
    y_lo, y_hi = (float(vals.min()), float(vals.max())) if vals.size else (0.0, 1.0)
    allx = x[np.isfinite(x)]
    x_lo, x_hi = (float(allx.min()), float(allx.max())) if allx.size else (0.0, 1.0)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pw, ph = width - ml - mr, height - mt - mb

    def sx(v):
        return ml + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return mt + ph - (v - y_lo) / (y_hi - y_lo) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'font-family="sans-serif" font-size="12">']
    if note:
        out.append(f"<!-- {escape(note)} -->")
    out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for t in _ticks(x_lo, x_hi):
        out.append(f'<text x="{sx(t):.1f}" y="{mt + ph + 16}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y_lo, y_hi):
        lab = f"1e{t:.2f}" if logy else f"{t:.4g}"
        out.append(f'<text x="{ml - 6}" y="{sy(t) + 4:.1f}" text-anchor="end">{lab}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{mt + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 18 {mt + ph / 2})">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{ml + pw / 2}" y="24" text-anchor="middle">{escape(title)}</text>')
    for i, ((label, _), y) in enumerate(zip(series, ys)):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y) if np.isfinite(a) and np.isfinite(b))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = mt + 16 * (i + 1)
        out.append(f'<line x1="{ml + pw + 10}" y1="{ly}" x2="{ml + pw + 30}" y2="{ly}" stroke="{color}"/>')
        out.append(f'<text x="{ml + pw + 35}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
    return path


def write_heatmap_svg(path, x_axis, z_axis, magnitude, note="", max_cells=120):
    """|field| heat map (z horizontal, x vertical), decimated to at most max_cells per axis."""
    sx_step = max(1, math.ceil(len(x_axis) / max_cells))
    sz_step = max(1, math.ceil(len(z_axis) / max_cells))
    mag = np.asarray(magnitude)[::sz_step, ::sx_step]
    xs, zs = np.asarray(x_axis)[::sx_step], np.asarray(z_axis)[::sz_step]
    peak = float(mag.max()) or 1.0
    cell, ml, mt = 4, 80, 30
    w, h = ml + cell * len(zs) + 20, mt + cell * len(xs) + 50
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">']
    if note:
        out.append(f"<!-- {escape(note)} -->")
    for j in range(len(zs)):
        for i in range(len(xs)):
            v = int(255 * (1 - mag[j, i] / peak))
            out.append(f'<rect x="{ml + cell * j}" y="{mt + cell * (len(xs) - 1 - i)}" width="{cell}" '
                       f'height="{cell}" fill="rgb({v},{v},255)"/>')
    out.append(f'<text x="{ml}" y="{h - 25}">z [m]: {zs[0]:.3g} .. {zs[-1]:.3g}</text>')
    out.append(f'<text x="{ml}" y="{h - 8}">x [m]: {xs[0]:.3g} .. {xs[-1]:.3g} (bottom to top); colour |field|</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
    return path


def write_run_record(out_dir, command, cfg, outputs, version, extra=None):
    record = {
        "tool": "airybeam",
        "version": version,
        "command": command,
        "config_hash": cfg.hash,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": sorted(os.path.basename(p) for p in outputs),
        "config": cfg.raw,
    }
    if extra:
        record.update(extra)
    path = os.path.join(out_dir, "run.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, float) and math.isinf(o):
        return "inf"
    raise TypeError(f"not serialisable: {type(o)}")
