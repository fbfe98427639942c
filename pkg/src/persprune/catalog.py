"""Builders for the small named modules used in tests, fixtures and the CLI.

Real rectangles ``[a, b]`` are discretised as half-open integer ranges
``a <= x < b`` after scaling, so that eroding ``[a, b)`` by ``eps`` gives
``[a + eps, b - eps)`` exactly.  ``offset`` translates a construction away
from the lower edge of the box, which shifted copies need.
"""

from __future__ import annotations

import itertools

from .exactlin import DEFAULT_PRIME
from .grid import Grid, rectangle, validate_interval
from .permod import (
    Morphism,
    PersistenceModule,
    direct_sum,
    image,
    interval_module,
    generated_submodule,
    shift_module,
    subquotient,
    support_submodule,
    full_submodule,
)

__all__ = [
    "interval_1d",
    "box_module",
    "glued_rectangles",
    "glued_hook",
    "square_pair",
    "cornered_square",
    "cornered_square_interleaving",
    "neck_modules",
    "two_leg_quotient_pair",
    "truncate_below",
    "bar_family",
    "half_open_l_shape",
]


def interval_1d(a: int, b: int, grid: Grid, p: int = DEFAULT_PRIME) -> PersistenceModule:
    return interval_module(rectangle((a,), (b,), grid), p=p)


def box_module(lo, hi, grid: Grid, p: int = DEFAULT_PRIME) -> PersistenceModule:
    return interval_module(rectangle(lo, hi, grid), p=p)


def _quotient_by_diagonal(parts, glue_pts, grid, p):
    """(A + B) / span(1, 1) over glue_pts, for two thin summands A, B."""
    S, _, _ = direct_sum(parts)
    src = interval_module(glue_pts, grid, p)
    comps = {x: [[1], [1]] for x in glue_pts}
    phi = Morphism(src, S, comps, check=True)
    return subquotient(full_submodule(S), image(phi))


def glued_rectangles(eps: int, scale: int = 10, offset: int = 10, p: int = DEFAULT_PRIME,
                     size: int | None = None):
    """Two overlapping rectangles glued along a small top corner.

    Rectangles ``[1,3) x [1-2e,3)`` and ``[1-2e,3) x [1,3)`` (in units of
    ``scale``) are summed and the diagonal of the corner ``[3-2e,3)^2`` is
    divided out.  Returns the module and the expected pruned summand ``L``.
    """
    lo, hi = scale + offset, 3 * scale + offset
    size = size or hi + 2 * eps + 4
    g = Grid((size, size))
    A = box_module((lo, lo - 2 * eps), (hi, hi), g, p)
    B = box_module((lo - 2 * eps, lo), (hi, hi), g, p)
    corner = list(itertools.product(range(hi - 2 * eps, hi), repeat=2))
    M = _quotient_by_diagonal([A, B], corner, g, p)
    L = half_open_l_shape(lo + eps, hi - eps, hi - 3 * eps, g, p)
    return M, L


def half_open_l_shape(lo: int, hi: int, cut: int, grid: Grid, p: int = DEFAULT_PRIME):
    """The square [lo, hi)^2 minus its corner [cut, hi)^2."""
    pts = [x for x in itertools.product(range(lo, hi), repeat=2) if not (x[0] >= cut and x[1] >= cut)]
    return interval_module(validate_interval(pts, grid), p=p)


def glued_hook(*args, **kw):
    return half_open_l_shape(*args, **kw)


def square_pair(lo: int = 8, hi: int = 30, offset: int = 0, size: int = 40, p: int = DEFAULT_PRIME):
    """Direct sum of two copies of the square [lo, hi)^2."""
    g = Grid((size, size))
    I = box_module((lo + offset,) * 2, (hi + offset,) * 2, g, p)
    return direct_sum([I, I])[0]


def cornered_square(lo: int = 8, mid: int = 10, corner: int = 28, hi: int = 30, offset: int = 0,
                    size: int = 40, p: int = DEFAULT_PRIME) -> PersistenceModule:
    """Two legs feeding a 2-dim core that collapses to 1 dim in the top corner.

    Support is ``[lo,hi) x [mid,hi)`` union ``[mid,hi) x [lo,hi)``.  The bottom
    leg enters the core as (1, 0), the left leg as (0, 1), and the core maps
    onto the corner ``[corner, hi)^2`` by the row (1 1).
    """
    o = offset
    lo, mid, corner, hi = lo + o, mid + o, corner + o, hi + o
    g = Grid((size, size))
    dims, kind = {}, {}
    for x in itertools.product(range(lo, hi), repeat=2):
        if x[0] >= mid and x[1] >= mid:
            k = "corner" if (x[0] >= corner and x[1] >= corner) else "core"
        elif x[0] >= mid:
            k = "bottom"
        elif x[1] >= mid:
            k = "left"
        else:
            continue
        kind[x] = k
        dims[x] = 2 if k == "core" else 1
    table = {
        ("core", "core"): [[1, 0], [0, 1]],
        ("core", "corner"): [[1, 1]],
        ("corner", "corner"): [[1]],
        ("bottom", "bottom"): [[1]],
        ("left", "left"): [[1]],
        ("bottom", "core"): [[1], [0]],
        ("left", "core"): [[0], [1]],
    }
    maps = {}
    for x, k in kind.items():
        for ax in range(2):
            y = x[:ax] + (x[ax] + 1,) + x[ax + 1:]
            if y in kind:
                maps[(x, ax)] = table[(k, kind[y])]
    return PersistenceModule(g, dims, maps, p)


def cornered_square_interleaving(M: PersistenceModule, N: PersistenceModule, eps: int):
    """Candidate morphisms between the square pair and the cornered square.

    Both are computed from Hom bases by a small search (see distances); this
    helper only exists so fixtures can cache the result.
    """
    from .distances import search_interleaving

    return search_interleaving(M, N, eps)


_NECK_PIECES = {
    # real rectangles (x0, x1, y0, y1) of the pieces, in units of `unit`
    "J": [(0.1, 0.9, 2.1, 2.9)],
    "K": [(1.1, 1.9, 1.1, 1.9)],
    "I'": [(2.1, 2.9, 0.1, 0.9)],
    "necks_I": [(0.9, 1.15, 2.1, 2.15), (1.1, 1.15, 1.9, 2.15)],
    "necks_J'": [(1.9, 2.15, 1.1, 1.15), (2.1, 2.15, 0.9, 1.15)],
}


def _cells(rects, unit: int, offset: int) -> set:
    pts = set()
    for x0, x1, y0, y1 in rects:
        xs = range(round(x0 * unit) + offset, round(x1 * unit) + offset)
        ys = range(round(y0 * unit) + offset, round(y1 * unit) + offset)
        pts.update(itertools.product(xs, ys))
    return pts


def neck_modules(unit: int = 20, offset: int = 2, margin: int = 6, p: int = DEFAULT_PRIME):
    """Three squares on the anti-diagonal, two of them joined by thin necks.

    ``I`` is the top-left square joined to the middle square by a neck of
    width ``unit / 20``; ``J'`` joins the middle square to the bottom-right
    one the same way.  Returns ``(M, N, Q, parts)`` with ``M = I + I'``,
    ``N = J + J'`` and ``Q = J + K + I'``.
    """
    size = 3 * unit + offset + margin
    g = Grid((size, size), margin=margin)
    c = {k: _cells(v, unit, offset) for k, v in _NECK_PIECES.items()}
    shapes = {
        "I": c["J"] | c["K"] | c["necks_I"],
        "I'": c["I'"],
        "J": c["J"],
        "J'": c["K"] | c["I'"] | c["necks_J'"],
        "K": c["K"],
    }
    parts = {k: interval_module(validate_interval(v, g), p=p) for k, v in shapes.items()}
    M = direct_sum([parts["I"], parts["I'"]])[0]
    N = direct_sum([parts["J"], parts["J'"]])[0]
    Q = direct_sum([parts["J"], parts["K"], parts["I'"]])[0]
    return M, N, Q, parts


def truncate_below(M: PersistenceModule, limit: int) -> PersistenceModule:
    """M restricted to points with every coordinate below ``limit``."""
    top = [x for x in M.dims if max(x) >= limit]
    return subquotient(full_submodule(M), support_submodule(M, top))


def two_leg_quotient_pair(eps: int, scale: int = 1, offset: int = 6, reach: int = 3,
                          margin: int | None = None, p: int = DEFAULT_PRIME):
    """A thin module on two quadrants and a quotient built from two shifted copies.

    M lives on ``<(2,0)> u <(0,2)>``.  Inside ``M(-1) + M(-1)`` take the
    submodule generated by (1,0) at (3,1) and (0,1) at (1,3), and divide out
    the submodule generated by (1,1) at (3+eps, 3+eps).  All coordinates are
    multiplied by ``scale`` and moved by ``offset``; both modules are cut off
    at ``(6 + eps + reach) * scale + offset`` below a top band of ``margin``
    empty rows kept free for negative shifts.
    """
    s, o = scale, offset
    limit = (6 + eps + reach) * s + o
    margin = margin if margin is not None else s + 2 * (eps + 1) * s
    size = limit + margin
    g = Grid((size, size), margin=margin)
    pts = [x for x in itertools.product(range(limit), repeat=2)
           if (x[0] >= 2 * s + o and x[1] >= o) or (x[0] >= o and x[1] >= 2 * s + o)]
    M = interval_module(validate_interval(pts, g), p=p)
    Mm = shift_module(M, -s)
    Np, _, _ = direct_sum([Mm, Mm])
    N1 = generated_submodule(Np, [((3 * s + o, s + o), [1, 0]), ((s + o, 3 * s + o), [0, 1])])
    c = (3 + eps) * s + o
    N2 = generated_submodule(Np, [((c, c), [1, 1])])
    N = truncate_below(subquotient(N1, N2), limit)
    return M, N


def bar_family(c: int, kind: str, offset: int | None = None, p: int = DEFAULT_PRIME):
    """One-parameter families of nested bars.

    ``A_i = [-i, i)`` and ``B_i = [-i, 2c + i)``, translated by ``offset``.
    ``kind="short"``: M = sum_{1<=i<c} B_i, N = A_c + M.
    ``kind="swap"``: M = A_{c-1} + sum_{1<=i<=c} B_i, N = A_c + sum_{1<=i<c} B_i.
    """
    o = offset if offset is not None else 2 * c + 2
    size = o + 4 * c + 4
    g = Grid((size,))
    A = lambda i: interval_1d(o - i, o + i, g, p)
    B = lambda i: interval_1d(o - i, o + 2 * c + i, g, p)
    if kind == "short":
        Mp = [B(i) for i in range(1, c)]
        Np = [A(c)] + Mp
    elif kind == "swap":
        Mp = [A(c - 1)] + [B(i) for i in range(1, c + 1)]
        Np = [A(c)] + [B(i) for i in range(1, c)]
    else:
        raise ValueError(kind)
    return direct_sum(Mp, g, p)[0], direct_sum(Np, g, p)[0], Mp, Np
