"""Finite integer grids, diagonal shifts, and interval / upset shapes.

Points are tuples of ints.  A shift by ``eps`` moves a point along the
diagonal, ``p -> p + (eps, ..., eps)``; anything that leaves the box becomes
:data:`OUTSIDE`, where every module is zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvexityViolation, DisconnectedParts, MarginTooSmall

__all__ = [
    "OUTSIDE",
    "Grid",
    "shift_point",
    "leq",
    "IntervalShape",
    "UpsetShape",
    "validate_interval",
    "minimal_elements",
    "upset_ops",
    "contains_shifted",
    "rectangle",
    "interval_from_parts",
]


class _Outside:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "OUTSIDE"


OUTSIDE = _Outside()


def leq(p, q) -> bool:
    return all(a <= b for a, b in zip(p, q))


@dataclass(frozen=True)
class Grid:
    """The box ``0 <= p_i < sizes[i]`` in Z^d, with a declared top margin."""

    sizes: tuple[int, ...]
    margin: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if len(self.sizes) < 1 or any(s < 1 for s in self.sizes):
            raise ValueError("grid needs d >= 1 and positive sizes")
        if self.margin < 0:
            raise ValueError("margin must be nonnegative")

    @property
    def d(self) -> int:
        return len(self.sizes)

    def contains(self, p) -> bool:
        return p is not OUTSIDE and all(0 <= a < n for a, n in zip(p, self.sizes))

    def points(self):
        return itertools.product(*(range(n) for n in self.sizes))

    def shift(self, p, eps: int):
        return shift_point(p, eps, self)

    def diameter(self) -> int:
        return max(self.sizes)

    def in_top_band(self, p) -> bool:
        return any(a >= n - self.margin for a, n in zip(p, self.sizes))


def shift_point(p, eps: int, grid: Grid | None = None):
    """``p + (eps, ..., eps)``, or OUTSIDE when that leaves the grid."""
    if p is OUTSIDE:
        return OUTSIDE
    q = tuple(a + eps for a in p)
    if grid is not None and not grid.contains(q):
        return OUTSIDE
    return q


def minimal_elements(points) -> tuple[tuple[int, ...], ...]:
    pts = sorted(set(tuple(p) for p in points))
    out = []
    for p in pts:
        if not any(leq(q, p) and q != p for q in pts):
            out.append(p)
    return tuple(out)


@dataclass(frozen=True)
class UpsetShape:
    """The upset generated by an antichain, optionally tied to a grid."""

    generators: tuple[tuple[int, ...], ...]
    grid: Grid | None = field(default=None, compare=False)

    def __post_init__(self):
        gens = tuple(sorted(set(tuple(int(a) for a in g) for g in self.generators)))
        for g in gens:
            for h in gens:
                if g != h and leq(g, h):
                    raise ValueError(f"generators {g} <= {h} are not an antichain")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_points(cls, points, grid=None) -> "UpsetShape":
        return cls(minimal_elements(points), grid)

    def __contains__(self, p) -> bool:
        return p is not OUTSIDE and any(leq(g, p) for g in self.generators)

    def shifted(self, eps: int) -> "UpsetShape":
        """The upset U(eps) = {p : p + eps in U}."""
        return UpsetShape(tuple(tuple(a - eps for a in g) for g in self.generators), self.grid)

    def points(self, grid: Grid | None = None):
        grid = grid or self.grid
        lim = tuple(n - grid.margin for n in grid.sizes)
        return [p for p in grid.points() if all(a < b for a, b in zip(p, lim)) and p in self]

    def as_interval(self, grid: Grid | None = None) -> "IntervalShape":
        grid = grid or self.grid
        return IntervalShape(frozenset(self.points(grid)), grid)


@dataclass(frozen=True)
class IntervalShape:
    points: frozenset
    grid: Grid = field(compare=False)

    def __contains__(self, p) -> bool:
        return p in self.points

    def __len__(self):
        return len(self.points)

    def up_part(self) -> UpsetShape:
        """U(I): the upset generated by the interval."""
        return UpsetShape(minimal_elements(self.points), self.grid)

    def e_part(self) -> UpsetShape:
        """E(I) = U(I) minus I, restricted to the grid."""
        U = self.up_part()
        rest = [p for p in self.grid.points() if p in U and p not in self.points]
        return UpsetShape(minimal_elements(rest), self.grid)

    def minimum(self):
        """The least element, if the interval has one."""
        mins = minimal_elements(self.points)
        return mins[0] if len(mins) == 1 else None


def _mask(points, grid: Grid) -> np.ndarray:
    m = np.zeros(grid.sizes, dtype=bool)
    for p in points:
        m[p] = True
    return m


def validate_interval(S, grid: Grid) -> IntervalShape:
    """Check convexity and zigzag-connectivity; return the interval."""
    S = frozenset(tuple(int(a) for a in p) for p in S)
    if not S:
        raise ValueError("an interval must be nonempty")
    for p in S:
        if not grid.contains(p):
            raise ValueError(f"{p} lies outside the grid")
    mask = _mask(S, grid)
    down = mask.copy()
    up = mask.copy()
    for ax in range(grid.d):
        up = np.logical_or.accumulate(up, axis=ax)
        down = np.flip(np.logical_or.accumulate(np.flip(down, axis=ax), axis=ax), axis=ax)
    bad = np.argwhere(up & down & ~mask)
    if len(bad):
        q = tuple(int(a) for a in bad[0])
        p = min(s for s in S if leq(s, q))
        r = min(s for s in S if leq(q, s))
        mid = tuple((a + b) // 2 for a, b in zip(p, r))
        if mid not in S:
            q = mid
        raise ConvexityViolation(p, q, r)
    # for convex sets, zigzag components are the covering-edge components
    comps = _components(S)
    if len(comps) > 1:
        raise DisconnectedParts(comps[0], comps[1])
    return IntervalShape(S, grid)


def _components(S) -> list[frozenset]:
    seen: set = set()
    comps = []
    for start in sorted(S):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            p = stack.pop()
            for i in range(len(p)):
                for step in (-1, 1):
                    q = p[:i] + (p[i] + step,) + p[i + 1 :]
                    if q in S and q not in comp:
                        comp.add(q)
                        stack.append(q)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def contains_shifted(U: UpsetShape, V: UpsetShape, eps: int, grid: Grid | None = None) -> bool:
    """True iff V is contained in U(eps), i.e. v + eps lies in U for all v in V.

    With a grid, the test refuses to decide when a shifted generator of V
    would land in the top margin band or beyond the box.
    """
    if grid is not None:
        top = tuple(n - grid.margin for n in grid.sizes)
        for v in V.generators:
            w = tuple(a + eps for a in v)
            if not all(a < b for a, b in zip(w, top)):
                raise MarginTooSmall(f"generator {v} shifted by {eps} reaches the margin band")
    return all(tuple(a + eps for a in v) in U for v in V.generators)


def upset_ops(U: UpsetShape, V: UpsetShape, eps: int = 0, interval: IntervalShape | None = None,
              grid: Grid | None = None) -> dict:
    """Containment of V in U(eps), intersection and union, plus U/E parts of an interval."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    inter = minimal_elements(
        tuple(max(a, b) for a, b in zip(g, h)) for g in U.generators for h in V.generators
    )
    out = {
        "contains_shifted": contains_shifted(U, V, eps, grid),
        "intersection": UpsetShape(inter, U.grid),
        "union": UpsetShape(minimal_elements(U.generators + V.generators), U.grid),
    }
    if interval is not None:
        out["up_part"] = interval.up_part()
        out["e_part"] = interval.e_part()
    return out


def rectangle(lo, hi, grid: Grid) -> IntervalShape:
    """Half-open box ``lo <= p < hi`` as an interval."""
    pts = itertools.product(*(range(a, b) for a, b in zip(lo, hi)))
    return validate_interval(pts, grid)


def interval_from_parts(up_gens, e_gens, grid: Grid) -> IntervalShape:
    """Points of the box in <up_gens> but not in <e_gens>, honouring the margin."""
    U = UpsetShape(minimal_elements(up_gens), grid)
    E = UpsetShape(minimal_elements(e_gens), grid) if e_gens else None
    pts = [p for p in U.points(grid) if E is None or p not in E]
    return validate_interval(pts, grid)
