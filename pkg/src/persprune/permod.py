"""Persistence modules on a finite grid, their morphisms and submodules.

A module stores its nonzero pointwise dimensions and one matrix per covering
edge ``x -> x + e_i`` whose endpoints both carry nonzero spaces.  Missing
entries are zero.  The box is embedded in Z^d by extending with zeros, which
is always a valid module because the part of Z^d above the box is an upset.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from . import exactlin as el
from .errors import (
    CommutativityViolation,
    Inconclusive,
    MarginTooSmall,
    NaturalityViolation,
    NotNested,
)
from .exactlin import DEFAULT_PRIME
from .grid import Grid, IntervalShape, UpsetShape

__all__ = [
    "PersistenceModule",
    "Morphism",
    "Submodule",
    "zero_module",
    "interval_module",
    "upset_module",
    "shift_module",
    "transition",
    "identity_morphism",
    "zero_morphism",
    "hom_basis",
    "hom_basis_dense",
    "naturality_system",
    "image",
    "kernel",
    "preimage",
    "apply_to",
    "sub_sum",
    "sub_intersect",
    "full_submodule",
    "zero_submodule",
    "generated_submodule",
    "support_submodule",
    "submodule_module",
    "subquotient",
    "Subquotient",
    "direct_sum",
    "find_isomorphism",
    "are_isomorphic",
    "linear_combination",
    "random_change_of_basis",
]


def _step(x, axis, k=1):
    return x[:axis] + (x[axis] + k,) + x[axis + 1 :]


class PersistenceModule:
    """Pointwise dimensions plus one matrix per covering edge."""

    def __init__(self, grid: Grid, dims: dict, maps: dict | None = None, p: int = DEFAULT_PRIME,
                 check: bool = True):
        self.grid = grid
        self.p = int(p)
        self.dims = {tuple(int(a) for a in x): int(n) for x, n in dims.items() if int(n) > 0}
        for x in self.dims:
            if not grid.contains(x):
                raise ValueError(f"point {x} outside the grid")
        self.maps = {}
        for (x, ax), m in (maps or {}).items():
            x = tuple(int(a) for a in x)
            y = _step(x, ax)
            a, b = self.dims.get(y, 0), self.dims.get(x, 0)
            m = el.as_matrix(m, self.p, a, b)
            if m.shape != (a, b):
                raise ValueError(f"edge {x}+e{ax} has shape {m.shape}, expected {(a, b)}")
            if a and b and m.any():
                self.maps[(x, ax)] = m
        if check:
            self.check_commutativity()

    # -- basic queries -------------------------------------------------
    def dim(self, x) -> int:
        return self.dims.get(x, 0)

    def edge(self, x, axis: int) -> np.ndarray:
        m = self.maps.get((x, axis))
        if m is not None:
            return m
        return el.zeros(self.dim(_step(x, axis)), self.dim(x))

    @cached_property
    def support(self) -> list:
        return sorted(self.dims)

    @property
    def supdim(self) -> int:
        return max(self.dims.values(), default=0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def compatible(self, other: "PersistenceModule") -> bool:
        return self.grid.sizes == other.grid.sizes and self.p == other.p

    def same_dims(self, other) -> bool:
        return self.dims == other.dims

    def __eq__(self, other):
        if not isinstance(other, PersistenceModule):
            return NotImplemented
        if not self.compatible(other) or self.dims != other.dims:
            return False
        keys = set(self.maps) | set(other.maps)
        return all(np.array_equal(self.edge(*k), other.edge(*k)) for k in keys)

    __hash__ = None

    def __repr__(self):
        return f"PersistenceModule(grid={self.grid.sizes}, p={self.p}, support={len(self.dims)}, supdim={self.supdim})"

    def check_commutativity(self):
        d = self.grid.d
        p = self.p
        for x in self.dims:
            for i, j in itertools.combinations(range(d), 2):
                xi, xj = _step(x, i), _step(x, j)
                top = _step(xi, j)
                if not self.dim(top):
                    continue
                a = (self.edge(xi, j) @ self.edge(x, i)) % p
                b = (self.edge(xj, i) @ self.edge(x, j)) % p
                if not np.array_equal(a, b):
                    raise CommutativityViolation(x, (i, j))

    # -- structure maps ------------------------------------------------
    def map_between(self, x, y) -> np.ndarray:
        """M_{x->y} for x <= y, composed axis by axis."""
        if not self.dim(x) or not self.dim(y):
            return el.zeros(self.dim(y), self.dim(x))
        mat = el.identity(self.dim(x))
        cur = x
        for ax in range(self.grid.d):
            for _ in range(y[ax] - x[ax]):
                nxt = _step(cur, ax)
                if not self.dim(nxt):
                    return el.zeros(self.dim(y), self.dim(x))
                mat = (self.edge(cur, ax) @ mat) % self.p
                cur = nxt
        return mat

    @cached_property
    def _diag_cache(self) -> dict:
        return {}

    def diagonal(self, x, k: int) -> np.ndarray:
        """M_{x -> x + (k,...,k)} for k >= 0; x may lie outside the box."""
        y = tuple(a + k for a in x)
        dx, dy = self.dim(x), self.dim(y)
        if k == 0:
            return el.identity(dx)
        if not dx or not dy:
            return el.zeros(dy, dx)
        key = (x, k)
        hit = self._diag_cache.get(key)
        if hit is not None:
            return hit
        if k == 1:
            out = self.map_between(x, y)
        else:
            h = k // 2
            mid = tuple(a + h for a in x)
            out = (self.diagonal(mid, k - h) @ self.diagonal(x, h)) % self.p
        self._diag_cache[key] = out
        return out

    def key(self) -> tuple:
        """Hashable normal form for ordering (not an isomorphism invariant)."""
        maps = tuple((x, ax, tuple(m.ravel().tolist())) for (x, ax), m in sorted(self.maps.items()))
        return (self.grid.sizes, self.p, tuple(sorted(self.dims.items())), maps)


def zero_module(grid: Grid, p: int = DEFAULT_PRIME) -> PersistenceModule:
    return PersistenceModule(grid, {}, {}, p, check=False)


def interval_module(shape, grid: Grid | None = None, p: int = DEFAULT_PRIME) -> PersistenceModule:
    """The module that is k on the interval with identity maps inside it."""
    if isinstance(shape, IntervalShape):
        grid = shape.grid
        pts = shape.points
    else:
        pts = frozenset(tuple(x) for x in shape)
    dims = {x: 1 for x in pts}
    maps = {}
    for x in pts:
        for ax in range(grid.d):
            if _step(x, ax) in pts:
                maps[(x, ax)] = [[1]]
    return PersistenceModule(grid, dims, maps, p, check=False)


def upset_module(U: UpsetShape, grid: Grid | None = None, p: int = DEFAULT_PRIME) -> PersistenceModule:
    """Upset module, truncated below the grid's top margin band."""
    grid = grid or U.grid
    return interval_module(U.points(grid), grid, p)


def shift_module(M: PersistenceModule, eps: int) -> PersistenceModule:
    """M(eps) with M(eps)_x = M_{x + eps}; refuses to drop nonzero data."""
    if eps == 0:
        return M
    dims = {}
    for x, n in M.dims.items():
        y = tuple(a - eps for a in x)
        if not M.grid.contains(y):
            raise MarginTooSmall(f"shift by {eps} moves support point {x} out of the grid")
        dims[y] = n
    maps = {(tuple(a - eps for a in x), ax): m for (x, ax), m in M.maps.items()}
    return PersistenceModule(M.grid, dims, maps, M.p, check=False)


class Morphism:
    """A natural transformation, one matrix per point of the common support."""

    def __init__(self, source: PersistenceModule, target: PersistenceModule, comps: dict,
                 check: bool = True):
        if not source.compatible(target):
            raise ValueError("source and target live on different grids or fields")
        self.source, self.target = source, target
        p = source.p
        self.comps = {}
        for x, m in comps.items():
            a, b = target.dim(x), source.dim(x)
            if not a or not b:
                continue
            m = el.as_matrix(m, p, a, b)
            if m.shape != (a, b):
                raise ValueError(f"component at {x} has shape {m.shape}, expected {(a, b)}")
            if m.any():
                self.comps[x] = m
        if check:
            self.check_naturality()

    @property
    def p(self) -> int:
        return self.source.p

    def at(self, x) -> np.ndarray:
        m = self.comps.get(x)
        if m is not None:
            return m
        return el.zeros(self.target.dim(x), self.source.dim(x))

    def check_naturality(self):
        M, N, p = self.source, self.target, self.p
        pts = set(self.comps)
        for x in self.comps:
            for ax in range(M.grid.d):
                pts.add(_step(x, ax))
                pts.add(x[:ax] + (x[ax] - 1,) + x[ax + 1 :])
        for x in pts:
            for ax in range(M.grid.d):
                y = _step(x, ax)
                if x not in self.comps and y not in self.comps:
                    continue
                lhs = (self.at(y) @ M.edge(x, ax)) % p
                rhs = (N.edge(x, ax) @ self.at(x)) % p
                if not np.array_equal(lhs, rhs):
                    raise NaturalityViolation(x, ax)

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        if self.source.dims != other.source.dims or self.target.dims != other.target.dims:
            return False
        keys = set(self.comps) | set(other.comps)
        return all(np.array_equal(self.at(x), other.at(x)) for x in keys)

    __hash__ = None

    def compose(self, first: "Morphism") -> "Morphism":
        """self o first."""
        if first.target.dims != self.source.dims:
            raise ValueError("composition of incompatible morphisms")
        p = self.p
        comps = {x: (self.at(x) @ first.comps[x]) % p for x in first.comps if x in self.comps}
        return Morphism(first.source, self.target, comps, check=False)

    def __matmul__(self, other):
        return self.compose(other)

    def __add__(self, other: "Morphism") -> "Morphism":
        p = self.p
        keys = set(self.comps) | set(other.comps)
        return Morphism(self.source, self.target, {x: (self.at(x) + other.at(x)) % p for x in keys},
                        check=False)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "Morphism":
        p = self.p
        return Morphism(self.source, self.target, {x: (m * (c % p)) % p for x, m in self.comps.items()},
                        check=False)

    def shift(self, eps: int) -> "Morphism":
        """f(eps): M(eps) -> N(eps)."""
        if eps == 0:
            return self
        S, T = shift_module(self.source, eps), shift_module(self.target, eps)
        comps = {tuple(a - eps for a in x): m for x, m in self.comps.items()}
        return Morphism(S, T, comps, check=False)

    def with_target(self, target: PersistenceModule) -> "Morphism":
        """Same components, reinterpreted against an equal-dimension target."""
        return Morphism(self.source, target, self.comps, check=False)

    def with_source(self, source: PersistenceModule) -> "Morphism":
        return Morphism(source, self.target, self.comps, check=False)

    def is_mono(self) -> bool:
        return all(el.rank(self.at(x), self.p) == n for x, n in self.source.dims.items())

    def is_epi(self) -> bool:
        return all(el.rank(self.at(x), self.p) == n for x, n in self.target.dims.items())

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_mono()

    def flat(self, points) -> np.ndarray:
        return np.concatenate([self.at(x).ravel() for x in points]) if points else el.zeros(1, 0)[0]


def identity_morphism(M: PersistenceModule) -> Morphism:
    return Morphism(M, M, {x: el.identity(n) for x, n in M.dims.items()}, check=False)


def zero_morphism(M: PersistenceModule, N: PersistenceModule) -> Morphism:
    return Morphism(M, N, {}, check=False)


def transition(M: PersistenceModule, a: int, b: int) -> Morphism:
    """The structure morphism M(a) -> M(b) for a <= b."""
    if a > b:
        raise ValueError("transition needs a <= b")
    S, T = shift_module(M, a), shift_module(M, b)
    comps = {}
    for x in S.dims:
        if T.dim(x):
            comps[x] = M.diagonal(tuple(c + a for c in x), b - a)
    return Morphism(S, T, comps, check=False)


def linear_combination(basis: list, coeffs, M=None, N=None) -> Morphism:
    if not basis:
        return zero_morphism(M, N)
    p = basis[0].p
    out = basis[0].scale(int(coeffs[0]))
    for c, f in zip(coeffs[1:], basis[1:]):
        if c % p:
            out = out + f.scale(int(c))
    return out


# -- Hom spaces -------------------------------------------------------------

def naturality_system(M: PersistenceModule, N: PersistenceModule):
    """Dense matrix whose kernel is Hom(M, N), over the row-major flattened components."""
    p = M.p
    pts = sorted(x for x in M.dims if N.dim(x))
    offset, pos = {}, 0
    for x in pts:
        offset[x] = pos
        pos += N.dim(x) * M.dim(x)
    blocks = []
    edges = set()
    for x in pts:
        for ax in range(M.grid.d):
            edges.add((x, ax))
            edges.add((x[:ax] + (x[ax] - 1,) + x[ax + 1 :], ax))
    for x, ax in sorted(edges):
        y = _step(x, ax)
        # f_y M_{x->y} - N_{x->y} f_x = 0, an (N(y) * M(x))-block of equations
        ny, mx = N.dim(y), M.dim(x)
        if not ny or not mx:
            continue
        row = el.zeros(ny * mx, pos)
        if y in offset:
            row[:, offset[y]: offset[y] + ny * M.dim(y)] = np.kron(el.identity(ny), M.edge(x, ax).T)
        if x in offset:
            row[:, offset[x]: offset[x] + N.dim(x) * mx] -= np.kron(N.edge(x, ax), el.identity(mx))
        blocks.append(row % p)
    A = np.vstack(blocks) if blocks else el.zeros(0, pos)
    return A, pts


def _morphisms_from_rows(M, N, pts, rows) -> list:
    out = []
    for r in rows:
        comps, pos = {}, 0
        for x in pts:
            a, b = N.dim(x), M.dim(x)
            comps[x] = r[pos: pos + a * b].reshape(a, b)
            pos += a * b
        out.append(Morphism(M, N, comps, check=False))
    return out


def hom_basis_dense(M: PersistenceModule, N: PersistenceModule) -> list:
    """Hom basis from one global nullspace; the reference route for small inputs."""
    A, pts = naturality_system(M, N)
    K = el.nullspace(A, M.p)
    if K.shape[1] == 0:
        return []
    R, piv = el.rref(K.T, M.p)
    return _morphisms_from_rows(M, N, pts, R[: len(piv)])


def hom_basis(M: PersistenceModule, N: PersistenceModule) -> list:
    """A basis of Hom(M, N) in reduced echelon normal form.

    Points of the common support are visited in lexicographic order.  The
    components found so far are kept as linear functions of a parameter
    vector; each new point adds the constraints from its incoming edges and
    from edges into points where the components are forced to be zero.
    The result is canonicalised, so it equals the basis of
    :func:`hom_basis_dense` row for row.
    """
    if not M.compatible(N):
        raise ValueError("modules live on different grids or fields")
    p, d = M.p, M.grid.d
    pts = sorted(x for x in M.dims if N.dim(x))
    unknown = set(pts)
    A: dict = {}
    P = 0
    for x in pts:
        a, b = N.dim(x), M.dim(x)
        nx = a * b
        Ls, Rs = [], []
        for ax in range(d):
            y = x[:ax] + (x[ax] - 1,) + x[ax + 1 :]
            my = M.dim(y)
            if my:
                Ls.append(np.kron(el.identity(a), M.edge(y, ax).T))
                if y in unknown:
                    Ay = A[y]
                    R = (np.kron(N.edge(y, ax), el.identity(my)) @ Ay) % p
                    if Ay.shape[1] < P:
                        R = np.hstack([R, el.zeros(R.shape[0], P - Ay.shape[1])])
                    Rs.append(R)
                else:
                    Rs.append(el.zeros(a * my, P))
            z = _step(x, ax)
            if z not in unknown and N.dim(z):
                Ls.append(np.kron(N.edge(x, ax), el.identity(b)))
                Rs.append(el.zeros(N.dim(z) * b, P))
        if Ls:
            L = np.vstack(Ls)
            R = np.vstack(Rs)
            red, piv = el.rref(np.hstack([L, (-R) % p]), p)
        else:
            red, piv = el.zeros(0, nx + P), []
        xpiv = [c for c in piv if c < nx]
        cons = [i for i, c in enumerate(piv) if c >= nx]
        X = el.zeros(nx, P)
        for i, c in enumerate(xpiv):
            X[c] = (-red[i, nx:]) % p
        free = [c for c in range(nx) if c not in set(xpiv)]
        Y = el.zeros(nx, len(free))
        for k, f in enumerate(free):
            Y[f, k] = 1
            for i, c in enumerate(xpiv):
                Y[c, k] = (-red[i, f]) % p
        if cons:
            Z = el.nullspace(red[cons, nx:], p)
            for y in A:
                A[y] = (A[y] @ Z[: A[y].shape[1]]) % p
            X = (X @ Z) % p
            P = Z.shape[1]
        A[x] = np.hstack([X, Y])
        P += len(free)
    if P == 0:
        return []
    F = np.vstack([np.hstack([A[x], el.zeros(A[x].shape[0], P - A[x].shape[1])]) for x in pts])
    R, piv = el.rref(F.T, p)
    return _morphisms_from_rows(M, N, pts, R[: len(piv)])


# -- submodules -------------------------------------------------------------

class Submodule:
    """Pointwise subspaces in canonical column form, closed under the structure maps."""

    def __init__(self, ambient: PersistenceModule, basis: dict, canonical: bool = False, check: bool = False):
        self.ambient = ambient
        p = ambient.p
        self.basis = {}
        for x, B in basis.items():
            if not ambient.dim(x):
                continue
            B = np.asarray(B, dtype=np.int64)
            if B.ndim != 2 or B.shape[1] == 0:
                continue
            if not canonical:
                B = el.colspace(B % p, p)
            if B.shape[1]:
                self.basis[x] = B
        if check:
            self.check_closure()

    def at(self, x) -> np.ndarray:
        B = self.basis.get(x)
        if B is not None:
            return B
        return el.zeros(self.ambient.dim(x), 0)

    def dim(self, x) -> int:
        B = self.basis.get(x)
        return 0 if B is None else B.shape[1]

    @property
    def dims(self) -> dict:
        return {x: B.shape[1] for x, B in self.basis.items()}

    def check_closure(self):
        M, p = self.ambient, self.ambient.p
        for x, B in self.basis.items():
            for ax in range(M.grid.d):
                y = _step(x, ax)
                if M.dim(y) and not el.contains(self.at(y), (M.edge(x, ax) @ B) % p, p):
                    raise NotNested(y)

    def __le__(self, other: "Submodule") -> bool:
        p = self.ambient.p
        return all(el.contains(other.at(x), B, p) for x, B in self.basis.items())

    def first_escape(self, other: "Submodule"):
        """A point where self is not inside other, or None."""
        p = self.ambient.p
        for x in sorted(self.basis):
            if not el.contains(other.at(x), self.basis[x], p):
                return x
        return None

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        if set(self.basis) != set(other.basis):
            return False
        return all(np.array_equal(B, other.basis[x]) for x, B in self.basis.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return all(self.dim(x) == n for x, n in self.ambient.dims.items())

    def __repr__(self):
        return f"Submodule(points={len(self.basis)}, total_dim={sum(self.dims.values())})"


def full_submodule(M: PersistenceModule) -> Submodule:
    return Submodule(M, {x: el.identity(n) for x, n in M.dims.items()}, canonical=True)


def zero_submodule(M: PersistenceModule) -> Submodule:
    return Submodule(M, {}, canonical=True)


def generated_submodule(M: PersistenceModule, gens) -> Submodule:
    """Smallest submodule containing the vectors ``v`` at points ``x`` for ``(x, v)`` in gens."""
    p = M.p
    cols: dict = {}
    for x, v in gens:
        x = tuple(x)
        v = np.asarray(v, dtype=np.int64).reshape(-1, 1) % p
        if v.shape[0] != M.dim(x):
            raise ValueError(f"generator at {x} has length {v.shape[0]}, expected {M.dim(x)}")
        for y in M.dims:
            if all(a <= b for a, b in zip(x, y)):
                cols.setdefault(y, []).append((M.map_between(x, y) @ v) % p)
    return Submodule(M, {y: np.hstack(c) for y, c in cols.items()})


def support_submodule(M: PersistenceModule, pts) -> Submodule:
    """The whole of M on an upward-closed set of points."""
    S = Submodule(M, {x: el.identity(M.dim(x)) for x in pts if M.dim(x)}, canonical=True)
    S.check_closure()
    return S


def image(f: Morphism) -> Submodule:
    p = f.p
    return Submodule(f.target, {x: el.colspace(m, p) for x, m in f.comps.items()}, canonical=True)


def kernel(f: Morphism) -> Submodule:
    p = f.p
    basis = {}
    for x, n in f.source.dims.items():
        m = f.comps.get(x)
        basis[x] = el.identity(n) if m is None else el.colspace(el.nullspace(m, p), p)
    return Submodule(f.source, basis, canonical=True)


def apply_to(f: Morphism, S: Submodule) -> Submodule:
    """The submodule f(S) of the target."""
    p = f.p
    return Submodule(f.target, {x: (f.comps[x] @ B) % p for x, B in S.basis.items() if x in f.comps})


def preimage(f: Morphism, T: Submodule) -> Submodule:
    """f^{-1}(T) as a submodule of the source."""
    p = f.p
    basis = {}
    for x, n in f.source.dims.items():
        m = f.comps.get(x)
        if m is None:
            basis[x] = el.identity(n)
        else:
            basis[x] = el.preimage(m, T.at(x), p)
    return Submodule(f.source, basis, canonical=True)


def sub_sum(*subs: Submodule) -> Submodule:
    M = subs[0].ambient
    pts = set().union(*(s.basis for s in subs))
    return Submodule(M, {x: np.hstack([s.at(x) for s in subs]) for x in pts}, canonical=False)


def sub_intersect(*subs: Submodule) -> Submodule:
    M = subs[0].ambient
    p = M.p
    pts = set(subs[0].basis)
    for s in subs[1:]:
        pts &= set(s.basis)
    basis = {}
    for x in pts:
        B = subs[0].basis[x]
        for s in subs[1:]:
            B = el.intersect(B, s.basis[x], p)
            if B.shape[1] == 0:
                break
        basis[x] = B
    return Submodule(M, basis, canonical=True)


class Subquotient:
    """The module S1/S2 together with pointwise projection and lift matrices.

    ``proj[x]`` sends ambient vectors lying in S1 to quotient coordinates,
    ``lift[x]`` sends quotient coordinates to ambient representatives.
    """

    def __init__(self, S1: Submodule, S2: Submodule):
        M = S1.ambient
        p = M.p
        bad = S2.first_escape(S1)
        if bad is not None:
            raise NotNested(bad)
        self.S1, self.S2 = S1, S2
        self.proj, self.lift, dims = {}, {}, {}
        for x, B1 in S1.basis.items():
            C = el.coords(B1, S2.at(x))
            W = el.colspace(C, p)
            Q = el.quotient_map(W, p)
            if Q.shape[0] == 0:
                continue
            k1 = B1.shape[1]
            piv = set(int(np.flatnonzero(W[:, j])[0]) for j in range(W.shape[1]))
            rest = [i for i in range(k1) if i not in piv]
            Lsec = el.zeros(k1, len(rest))
            for r, i in enumerate(rest):
                Lsec[i, r] = 1
            self.proj[x] = (Q, B1)
            self.lift[x] = (B1 @ Lsec) % p
            dims[x] = Q.shape[0]
        maps = {}
        for x in dims:
            for ax in range(M.grid.d):
                y = _step(x, ax)
                if y in dims:
                    v = (M.edge(x, ax) @ self.lift[x]) % p
                    maps[(x, ax)] = self.project(y, v)
        self.module = PersistenceModule(M.grid, dims, maps, p, check=False)

    def project(self, x, v) -> np.ndarray:
        """Quotient coordinates of ambient vectors v in S1 at x."""
        if x not in self.proj:
            return el.zeros(0, np.shape(v)[1])
        Q, B1 = self.proj[x]
        return (Q @ el.coords(B1, v)) % self.S1.ambient.p


def submodule_module(S: Submodule) -> tuple[PersistenceModule, Morphism]:
    """S as a module in its own coordinates, with the inclusion into the ambient."""
    sq = Subquotient(S, zero_submodule(S.ambient))
    inc = Morphism(sq.module, S.ambient, dict(sq.lift), check=False)
    return sq.module, inc


def subquotient(S1: Submodule, S2: Submodule) -> PersistenceModule:
    """The module S1/S2; raises NotNested unless S2 lies inside S1."""
    return Subquotient(S1, S2).module


def direct_sum(parts: list, grid: Grid | None = None, p: int | None = None):
    """Block-diagonal direct sum with canonical inclusions and projections."""
    if not parts:
        if grid is None:
            raise ValueError("empty direct sum needs a grid")
        Z = zero_module(grid, p or DEFAULT_PRIME)
        return Z, [], []
    grid, p = parts[0].grid, parts[0].p
    for P in parts:
        if not P.compatible(parts[0]):
            raise ValueError("summands live on different grids or fields")
    pts = sorted(set().union(*(P.dims for P in parts)))
    dims = {x: sum(P.dim(x) for P in parts) for x in pts}
    offs = {x: np.cumsum([0] + [P.dim(x) for P in parts]) for x in pts}
    maps = {}
    for x in pts:
        for ax in range(grid.d):
            y = _step(x, ax)
            if y not in dims:
                continue
            m = el.zeros(dims[y], dims[x])
            for k, P in enumerate(parts):
                if P.dim(x) and P.dim(y):
                    m[offs[y][k]: offs[y][k + 1], offs[x][k]: offs[x][k + 1]] = P.edge(x, ax)
            maps[(x, ax)] = m
    S = PersistenceModule(grid, dims, maps, p, check=False)
    incs, projs = [], []
    for k, P in enumerate(parts):
        ic, pc = {}, {}
        for x, n in P.dims.items():
            e = el.zeros(dims[x], n)
            e[offs[x][k]: offs[x][k + 1], :] = el.identity(n)
            ic[x] = e
            pc[x] = e.T.copy()
        incs.append(Morphism(P, S, ic, check=False))
        projs.append(Morphism(S, P, pc, check=False))
    return S, incs, projs


def random_change_of_basis(M: PersistenceModule, rng: np.random.Generator):
    """An isomorphic copy of M with random pointwise bases, and the isomorphism M -> copy."""
    p = M.p
    G = {}
    for x, n in M.dims.items():
        while True:
            g = el.random_matrix(rng, n, n, p)
            if el.is_invertible(g, p):
                break
        G[x] = g
    Ginv = {x: el.inverse(g, p) for x, g in G.items()}
    maps = {(x, ax): (G[_step(x, ax)] @ m @ Ginv[x]) % p for (x, ax), m in M.maps.items()}
    C = PersistenceModule(M.grid, M.dims, maps, p, check=False)
    return C, Morphism(M, C, G, check=False)


# -- isomorphism ------------------------------------------------------------

def _pointwise_invertible(f: Morphism, order) -> bool:
    p = f.p
    for x in order:
        if el.rank(f.at(x), p) != f.source.dims[x]:
            return False
    return True


def find_isomorphism(M: PersistenceModule, N: PersistenceModule, seed: int = 0, trials: int = 24,
                     exhaustive_cap: int = 12):
    """An isomorphism M -> N, or None when none exists; Inconclusive if undecided."""
    if not M.compatible(N):
        raise ValueError("modules live on different grids or fields")
    if M.dims != N.dims:
        return None
    if M.is_zero():
        return zero_morphism(M, N)
    B = hom_basis(M, N)
    if not B:
        return None
    p = M.p
    order = sorted(M.dims, key=lambda x: (-M.dims[x], x))
    # exact obstructions: a common kernel or a common proper image at some point
    for x in order:
        n = M.dims[x]
        mats = [f.at(x) for f in B]
        if el.rank(np.vstack(mats), p) < n or el.rank(np.hstack(mats), p) < n:
            return None
    if len(B) == 1:
        return B[0] if _pointwise_invertible(B[0], order) else None
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        c = rng.integers(1, p, size=len(B)) if p > 2 else rng.integers(0, p, size=len(B))
        f = linear_combination(B, c)
        if _pointwise_invertible(f, order):
            return f
    if len(B) != len(hom_basis(M, M)) or len(B) != len(hom_basis(N, M)):
        return None
    if p ** len(B) <= p ** exhaustive_cap and p <= 3:
        for c in itertools.product(range(p), repeat=len(B)):
            # projective search: first nonzero coefficient equal to 1
            nz = [v for v in c if v]
            if not nz or nz[0] != 1:
                continue
            f = linear_combination(B, c)
            if _pointwise_invertible(f, order):
                return f
        return None
    raise Inconclusive("no invertible morphism found by sampling and the exhaustive cap was exceeded")


def are_isomorphic(M: PersistenceModule, N: PersistenceModule, seed: int = 0, **kw) -> bool:
    return find_isomorphism(M, N, seed=seed, **kw) is not None
