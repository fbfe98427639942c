"""Deterministic SVG pictures of one- and two-parameter modules.

Each grid cell is shaded by its dimension and the boundary of the support
is drawn as a black outline.  Output depends only on the dimension
function, so isomorphic modules render identically.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .permod import PersistenceModule

__all__ = ["render_svg", "SHADES"]

SHADES = ("#ffffff", "#c6dbef", "#6baed6", "#2171b5", "#08306b")


def _shade(n: int) -> str:
    return SHADES[min(n, len(SHADES) - 1)]


def render_svg(M: PersistenceModule, cell: int = 12, title: str | None = None, show_grid: bool = False) -> str:
    """SVG 1.1 text; the first coordinate runs right and the second runs up."""
    d = M.grid.d
    if d not in (1, 2):
        raise ValueError("only one- and two-parameter modules can be drawn")
    W = M.grid.sizes[0]
    H = M.grid.sizes[1] if d == 2 else 1
    pad = 4
    head = 16 if title else 0
    width, height = W * cell + 2 * pad, H * cell + 2 * pad + head

    def corner(i, j):
        return pad + i * cell, pad + head + (H - j) * cell

    def pt(x):
        return (x[0], x[1]) if d == 2 else (x[0], 0)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if title:
        out.append(f'<text x="{pad}" y="{pad + 11}" font-family="monospace" font-size="11">{escape(title)}</text>')
    out.append(f'<rect x="{pad}" y="{pad + head}" width="{W * cell}" height="{H * cell}" fill="none" stroke="#bbbbbb"/>')
    if M.grid.margin:
        m = M.grid.margin
        x0, _ = corner(W - m, 0)
        _, y0 = corner(0, H)
        out.append(f'<rect x="{x0}" y="{y0}" width="{m * cell}" height="{H * cell}" fill="#f4f4f4"/>')
        if d == 2:
            x1, y1 = corner(0, H)
            out.append(f'<rect x="{x1}" y="{y1}" width="{W * cell}" height="{m * cell}" fill="#f4f4f4"/>')
    out.append('<g stroke="none">')
    for x in sorted(M.dims):
        i, j = pt(x)
        cx, cy = corner(i, j + 1)
        out.append(f'<rect x="{cx}" y="{cy}" width="{cell}" height="{cell}" fill="{_shade(M.dims[x])}">'
                   f'<title>{escape(str(x))}: {M.dims[x]}</title></rect>')
    out.append("</g>")
    segs = []
    supp = {pt(x) for x in M.dims}
    for (i, j) in sorted(supp):
        if (i - 1, j) not in supp:
            segs.append((corner(i, j), corner(i, j + 1)))
        if (i + 1, j) not in supp:
            segs.append((corner(i + 1, j), corner(i + 1, j + 1)))
        if (i, j - 1) not in supp:
            segs.append((corner(i, j), corner(i + 1, j)))
        if (i, j + 1) not in supp:
            segs.append((corner(i, j + 1), corner(i + 1, j + 1)))
    path = " ".join(f"M{a[0]} {a[1]}L{b[0]} {b[1]}" for a, b in segs)
    if path:
        out.append(f'<path d="{path}" stroke="#000000" stroke-width="1.5" fill="none"/>')
    if show_grid:
        lines = [f"M{corner(i, 0)[0]} {corner(i, 0)[1]}L{corner(i, H)[0]} {corner(i, H)[1]}" for i in range(W + 1)]
        lines += [f"M{corner(0, j)[0]} {corner(0, j)[1]}L{corner(W, j)[0]} {corner(W, j)[1]}" for j in range(H + 1)]
        out.append(f'<path d="{" ".join(lines)}" stroke="#dddddd" stroke-width="0.5" fill="none"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
