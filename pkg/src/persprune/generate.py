"""Random instances for property tests and the acceptance checks."""

from __future__ import annotations

import numpy as np

from . import exactlin as el
from .exactlin import DEFAULT_PRIME
from .grid import Grid, UpsetShape, rectangle
from .permod import (
    PersistenceModule,
    direct_sum,
    full_submodule,
    generated_submodule,
    hom_basis,
    interval_module,
    linear_combination,
    random_change_of_basis,
    shift_module,
    subquotient,
)

__all__ = [
    "random_bar",
    "random_boxes",
    "random_module",
    "random_upsets",
    "random_morphism",
]


def random_bar(rng: np.random.Generator, size: int, low: int = 0):
    """A pair (a, b) with low <= a < b <= size."""
    a = int(rng.integers(low, size - 1))
    b = int(rng.integers(a + 1, size + 1))
    return a, b


def random_boxes(rng: np.random.Generator, grid: Grid, count: int, low: int = 0, p: int = DEFAULT_PRIME):
    """Half-open boxes with corners in [low, top) where top excludes the margin band."""
    top = [n - grid.margin for n in grid.sizes]
    parts = []
    for _ in range(count):
        lo, hi = [], []
        for t in top:
            a, b = random_bar(rng, t, low)
            lo.append(a)
            hi.append(b)
        parts.append(interval_module(rectangle(lo, hi, grid), p=p))
    return parts


def random_module(rng: np.random.Generator, sizes=(6, 6), count: int = 3, low: int = 0, margin: int = 0,
                  p: int = DEFAULT_PRIME, glue: int = 1, shuffle: bool = True) -> PersistenceModule:
    """A sum of random boxes, divided by ``glue`` random generated vectors, in random bases.

    Glue vectors are drawn at points where boxes overlap when there are
    any, so the quotient often merges summands and the result need not be
    interval decomposable.
    """
    grid = Grid(tuple(sizes), margin)
    S = direct_sum(random_boxes(rng, grid, count, low, p))[0]
    gens = []
    pts = sorted(x for x, n in S.dims.items() if n > 1) or sorted(S.dims)
    for _ in range(glue):
        if not pts:
            break
        x = pts[int(rng.integers(len(pts)))]
        v = el.random_matrix(rng, S.dim(x), 1, p)[:, 0]
        if v.any():
            gens.append((x, v))
    M = subquotient(full_submodule(S), generated_submodule(S, gens)) if gens else S
    if shuffle:
        M = random_change_of_basis(M, rng)[0]
    return M


def random_upsets(rng: np.random.Generator, grid: Grid, count: int, max_gens: int = 2, low: int = 0):
    top = [n - grid.margin for n in grid.sizes]
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_gens + 1))
        pts = [tuple(int(rng.integers(low, t)) for t in top) for _ in range(k)]
        out.append(UpsetShape.from_points(pts, grid))
    return out


def random_morphism(M: PersistenceModule, N: PersistenceModule, rng: np.random.Generator, eps: int = 0):
    """A uniformly random element of Hom(M, N(eps))."""
    Ne = shift_module(N, eps)
    basis = hom_basis(M, Ne)
    coeffs = [int(c) for c in rng.integers(0, M.p, size=len(basis))]
    return linear_combination(basis, coeffs, M, Ne)
