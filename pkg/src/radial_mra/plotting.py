"""Minimal native SVG output for axis-aligned support sets."""
from __future__ import annotations

from typing import List, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["mask_rectangles", "support_svg"]

SIZE = 320
MARGIN = 40


def mask_rectangles(mask: np.ndarray) -> List[Tuple[int, int, int, int]]:
    """Cover a boolean mask (indexed [x, y]) by run-length rectangles (x, y, width, height) in cells.

    Runs along y are merged across consecutive x columns with identical runs.
    """
    mask = np.asarray(mask, dtype=bool)
    nx = mask.shape[0]
    open_runs = {}
    rects = []
    for ix in range(nx + 1):
        runs = set()
        if ix < nx:
            col = np.concatenate([[False], mask[ix], [False]]).astype(int)
            d = np.diff(col)
            runs = set(zip(np.flatnonzero(d == 1).tolist(), np.flatnonzero(d == -1).tolist()))
        for run in sorted(set(open_runs) - runs):
            start = open_runs.pop(run)
            rects.append((start, run[0], ix - start, run[1] - run[0]))
        for run in sorted(runs - set(open_runs)):
            open_runs[run] = ix
    return sorted(rects)


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def support_svg(mask: np.ndarray, title: str, extent: float = np.pi,
                tick_labels: Sequence[Tuple[float, str]] = ((-np.pi, "-π"), (-np.pi / 2, "-π/2"),
                                                            (0.0, "0"), (np.pi / 2, "π/2"), (np.pi, "π"))) -> str:
    """SVG document shading ``mask`` over the square [-extent, extent)^2.

    The first array axis is the horizontal coordinate; the vertical axis points up.
    """
    cells = mask.shape[0]
    unit = SIZE / cells
    scale = SIZE / (2 * extent)
    width = SIZE + 2 * MARGIN
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{width}" '
        f'viewBox="0 0 {width} {width}">',
        f'<title>{escape(title)}</title>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>',
    ]
    for x, y, w, h in mask_rectangles(mask):
        top = MARGIN + SIZE - (y + h) * unit
        out.append(f'<rect x="{_fmt(MARGIN + x * unit)}" y="{_fmt(top)}" width="{_fmt(w * unit)}" '
                   f'height="{_fmt(h * unit)}" fill="#7f7f7f"/>')
    for value, label in tick_labels:
        pos = (value + extent) * scale
        out.append(f'<text x="{_fmt(MARGIN + pos)}" y="{_fmt(MARGIN + SIZE + 16)}" font-size="11" '
                   f'text-anchor="middle">{escape(label)}</text>')
        out.append(f'<text x="{_fmt(MARGIN - 6)}" y="{_fmt(MARGIN + SIZE - pos + 4)}" font-size="11" '
                   f'text-anchor="end">{escape(label)}</text>')
    out.append(f'<text x="{width / 2:g}" y="{MARGIN - 14}" font-size="13" text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
