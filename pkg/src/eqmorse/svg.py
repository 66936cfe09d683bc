"""Deterministic SVG and CSV output for rank-2 data.

Each Γ-region is drawn as its apex (a filled dot) with one ray per generator.
A ray is dashed when the facet opposite to it is open, i.e. when the other
generator comes from a flipped weight.  Window weights are small grey dots,
and marked weights get a red ring.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Optional, Sequence

from .errors import InputError

_PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22"]


def _check_rank(points):
    for p in points:
        if len(p) != 2:
            raise InputError("SVG output is only supported for rank-2 data")


def render_svg(
    regions: Sequence = (),
    window: Iterable = (),
    marks: Iterable = (),
    labels: Optional[dict] = None,
    unit: int = 28,
    ray_length: float = 3.0,
) -> str:
    """SVG text for Γ-regions (``morse.GammaRegion``), window dots and marked weights."""
    window = [tuple(w) for w in window]
    marks = [tuple(m) for m in marks]
    pts = list(window) + marks
    for reg in regions:
        pts.extend(reg.apexes)
    _check_rank(pts)
    for reg in regions:
        _check_rank([g for g, _ in reg.generators])
    if not pts:
        pts = [(0, 0)]
    pad = ray_length + 1
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    width, height = (x1 - x0) * unit, (y1 - y0) * unit

    def tx(p):
        return round((p[0] - x0) * unit, 2), round((y1 - p[1]) * unit, 2)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" viewBox="0 0 {width:g} {height:g}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    # axes through the origin
    ox, oy = tx((0, 0))
    out.append(f'<line x1="0" y1="{oy}" x2="{width:g}" y2="{oy}" stroke="#ccc" stroke-width="1"/>')
    out.append(f'<line x1="{ox}" y1="0" x2="{ox}" y2="{height:g}" stroke="#ccc" stroke-width="1"/>')
    for w in window:
        cx, cy = tx(w)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="2" fill="#999"/>')
    for i, reg in enumerate(regions):
        color = _PALETTE[i % len(_PALETTE)]
        gens = [g for g, _ in reg.generators]
        open_dirs = [strict for _, strict in reg.generators]
        for apex in reg.apexes:
            ax, ay = tx(apex)
            for j, g in enumerate(gens):
                # the edge along g is open when another generator is strict
                others = [open_dirs[k] for k in range(len(gens)) if k != j]
                dashed = any(others)
                end = (apex[0] + ray_length * g[0], apex[1] + ray_length * g[1])
                ex, ey = tx(end)
                dash = ' stroke-dasharray="5,4"' if dashed else ""
                out.append(f'<line x1="{ax}" y1="{ay}" x2="{ex}" y2="{ey}" stroke="{color}" stroke-width="1.5"{dash}/>')
            out.append(f'<circle cx="{ax}" cy="{ay}" r="4" fill="{color}"/>')
            name = (labels or {}).get(i, reg.owner[0])
            if name:
                out.append(f'<text x="{ax + 6}" y="{ay - 6}" font-size="11" fill="{color}">{name}</text>')
    for m in marks:
        cx, cy = tx(m)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="7" fill="none" stroke="red" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, **kw) -> None:
    with open(path, "w") as fh:
        fh.write(render_svg(**kw))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def index_csv(coeffs: dict, rank: int) -> str:
    header = [f"x{i + 1}" for i in range(rank)] + ["coeff"]
    return _csv(header, [list(w) + [c] for w, c in coeffs.items()])


def verdict_csv(verdicts: Sequence, rank: int) -> str:
    header = [f"x{i + 1}" for i in range(rank)] + ["degree", "verdict"]
    rows = []
    for v in verdicts:
        for k, s in enumerate(v.status):
            rows.append(list(v.weight) + [k, s])
    return _csv(header, rows)
