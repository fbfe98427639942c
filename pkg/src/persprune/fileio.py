"""Plain-text formats for modules and CI patterns.

Module files::

    persmod 1
    grid 40 40
    field 32003
    margin 0
    # any comment
    dim 8 8 = 2
    map 8 8 axis 0 = 1 0 ; 0 1
    shape 3,3 4,2 minus 9,9

``dim`` lines list nonzero pointwise dimensions, ``map`` lines give the
matrix on the edge from a point along an axis (rows separated by ``;``).
Omitted points have dimension 0 and omitted edges are zero.  Each ``shape``
line adds an interval summand: the points of the box above some generator
and above none of the generators after ``minus``.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import ParseError
from .grid import Grid, interval_from_parts
from .permod import PersistenceModule, direct_sum, interval_module

__all__ = [
    "FORMAT_VERSION",
    "serialize_module",
    "parse_module",
    "load_module",
    "save_module",
    "serialize_pattern",
    "parse_pattern",
]

FORMAT_VERSION = 1


def _row(m) -> str:
    return " ; ".join(" ".join(str(int(v)) for v in r) for r in m)


def serialize_module(M: PersistenceModule, comments: list[str] | None = None) -> str:
    g = M.grid
    lines = [f"persmod {FORMAT_VERSION}"]
    lines += [f"# {c}" for c in comments or []]
    lines += [
        "grid " + " ".join(map(str, g.sizes)),
        f"field {M.p}",
        f"margin {g.margin}",
    ]
    for x in sorted(M.dims):
        lines.append("dim " + " ".join(map(str, x)) + f" = {M.dims[x]}")
    for (x, ax) in sorted(M.maps):
        lines.append("map " + " ".join(map(str, x)) + f" axis {ax} = " + _row(M.maps[(x, ax)]))
    return "\n".join(lines) + "\n"


def _ints(tokens, lineno, line):
    out = []
    for t in tokens:
        try:
            out.append(int(t))
        except ValueError:
            raise ParseError(f"expected an integer, got {t!r}", lineno, line.find(t) + 1) from None
    return out


def _point(tok: str, d: int, lineno: int, line: str):
    parts = tok.split(",")
    if len(parts) != d:
        raise ParseError(f"point {tok!r} needs {d} coordinates", lineno, line.find(tok) + 1)
    return tuple(_ints(parts, lineno, line))


def parse_module(text: str, check: bool = True) -> PersistenceModule:
    """Parse a module file; raises ParseError or CommutativityViolation."""
    sizes = field = None
    margin = 0
    dims, maps, shapes = {}, {}, []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        if not seen_header:
            if head != "persmod" or len(tok) != 2:
                raise ParseError("file must start with 'persmod <version>'", lineno, 1)
            if _ints(tok[1:], lineno, raw)[0] != FORMAT_VERSION:
                raise ParseError(f"unsupported version {tok[1]}", lineno, raw.find(tok[1]) + 1)
            seen_header = True
            continue
        if head == "grid":
            sizes = tuple(_ints(tok[1:], lineno, raw))
            if not sizes:
                raise ParseError("grid needs at least one size", lineno, 1)
        elif head == "field":
            field = _ints(tok[1:2], lineno, raw)[0]
        elif head == "margin":
            margin = _ints(tok[1:2], lineno, raw)[0]
        elif head in ("dim", "map", "shape"):
            if sizes is None:
                raise ParseError(f"'{head}' before 'grid'", lineno, 1)
            d = len(sizes)
            if head == "dim":
                if "=" not in tok or tok.index("=") != d + 1 or len(tok) != d + 3:
                    raise ParseError("expected 'dim x1 .. xd = n'", lineno, 1)
                x = tuple(_ints(tok[1: d + 1], lineno, raw))
                dims[x] = _ints(tok[d + 2:], lineno, raw)[0]
            elif head == "map":
                m = re.match(r"map\s+(.*?)\s+axis\s+(\S+)\s*=\s*(.*)$", line)
                if not m:
                    raise ParseError("expected 'map x1 .. xd axis i = rows'", lineno, 1)
                x = tuple(_ints(m.group(1).split(), lineno, raw))
                if len(x) != d:
                    raise ParseError(f"map point needs {d} coordinates", lineno, 5)
                ax = _ints([m.group(2)], lineno, raw)[0]
                if not 0 <= ax < d:
                    raise ParseError(f"axis {ax} out of range", lineno, raw.find("axis") + 6)
                rows = [_ints(r.split(), lineno, raw) for r in m.group(3).split(";")]
                if len({len(r) for r in rows}) > 1:
                    raise ParseError("ragged matrix rows", lineno, raw.find("=") + 2)
                maps[(x, ax)] = np.array(rows, dtype=np.int64).reshape(len(rows), -1)
            else:
                body = tok[1:]
                if "minus" in body:
                    k = body.index("minus")
                    ups, es = body[:k], body[k + 1:]
                else:
                    ups, es = body, []
                shapes.append(([_point(t, d, lineno, raw) for t in ups],
                               [_point(t, d, lineno, raw) for t in es], lineno))
        else:
            raise ParseError(f"unknown keyword {head!r}", lineno, raw.find(head) + 1)
    if not seen_header:
        raise ParseError("empty module file", 1, 1)
    if sizes is None:
        raise ParseError("missing 'grid' line", None)
    grid = Grid(sizes, margin)
    p = field if field is not None else 32003
    try:
        for (x, ax), m in list(maps.items()):
            y = x[:ax] + (x[ax] + 1,) + x[ax + 1:]
            want = (dims.get(y, 0), dims.get(x, 0))
            if m.size == 0 or want == (0, 0) or 0 in want:
                if m.any():
                    raise ParseError(f"nonzero map on edge {x} axis {ax} touching a zero space", None)
                del maps[(x, ax)]
            elif m.shape != want:
                raise ParseError(f"map at {x} axis {ax} has shape {m.shape}, expected {want}", None)
        M = PersistenceModule(grid, dims, maps, p, check=check)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if shapes:
        parts = [M] if M.dims else []
        for ups, es, lineno in shapes:
            try:
                parts.append(interval_module(interval_from_parts(ups, es, grid), p=p))
            except Exception as exc:
                raise ParseError(f"bad shape: {exc}", lineno) from exc
        M = direct_sum(parts)[0]
    return M


def load_module(path) -> PersistenceModule:
    with open(path) as fh:
        return parse_module(fh.read())


def save_module(M: PersistenceModule, path, comments: list[str] | None = None):
    with open(path, "w") as fh:
        fh.write(serialize_module(M, comments))


def serialize_pattern(P, Q) -> str:
    n = len(P)
    lines = [str(n)]
    lines += ["".join("*" if v else "0" for v in row) for row in P]
    lines += ["".join("*" if v else "0" for v in row) for row in Q]
    return "\n".join(lines) + "\n"


def parse_pattern(text: str):
    """Returns (P, Q) as nested lists of bools."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.replace(" ", "")))
    if not rows:
        raise ParseError("empty pattern file", 1, 1)
    try:
        n = int(rows[0][1])
    except ValueError:
        raise ParseError("first line must be the size n", rows[0][0], 1) from None
    if len(rows) != 2 * n + 1:
        raise ParseError(f"expected {2 * n} pattern rows, got {len(rows) - 1}", rows[-1][0])
    mats = []
    for lineno, line in rows[1:]:
        if len(line) != n:
            raise ParseError(f"row must have {n} entries", lineno, 1)
        bad = [i for i, ch in enumerate(line) if ch not in "0*"]
        if bad:
            raise ParseError(f"unexpected character {line[bad[0]]!r}", lineno, bad[0] + 1)
        mats.append([ch == "*" for ch in line])
    return mats[:n], mats[n:]
