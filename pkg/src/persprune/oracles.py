"""Exhaustive searches over tiny modules, used as independent reference answers.

Everything here enumerates, so it only runs on small fields and small total
dimension.  Callers get :class:`CapExceeded` instead of a long wait.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import exactlin as el
from .errors import CapExceeded
from .permod import PersistenceModule, Submodule, Subquotient, find_isomorphism

__all__ = [
    "all_subspaces",
    "enumerate_submodules",
    "hom_count_bruteforce",
    "subquotient_bruteforce",
    "en_membership_bruteforce",
    "preimage_bruteforce",
]

MAX_TOTAL_DIM = 8
MAX_POINTS = 16


@lru_cache(maxsize=None)
def _subspaces(n: int, p: int) -> tuple:
    out = []
    for k in range(n + 1):
        for piv in itertools.combinations(range(n), k):
            # free slots: entries right of each pivot in its row, outside pivot columns
            slots = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, n) if c not in piv]
            for vals in itertools.product(range(p), repeat=len(slots)):
                R = el.zeros(k, n)
                for i, pc in enumerate(piv):
                    R[i, pc] = 1
                for (i, c), v in zip(slots, vals):
                    R[i, c] = v
                B = np.ascontiguousarray(R.T)
                B.setflags(write=False)
                out.append(B)
    return tuple(out)


def all_subspaces(n: int, p: int) -> tuple:
    """Every subspace of GF(p)^n as a canonical column basis."""
    if p ** (n * n // 4 + n) > 5_000_000:
        raise CapExceeded(f"too many subspaces of GF({p})^{n}")
    return _subspaces(n, p)


def enumerate_submodules(M: PersistenceModule, lower: Submodule | None = None,
                         upper: Submodule | None = None, dims: dict | None = None):
    """Yield every submodule S with lower <= S <= upper (and given pointwise dims)."""
    p = M.p
    pts = M.support
    choices = {}
    for x in pts:
        n = M.dims[x]
        opts = []
        for B in all_subspaces(n, p):
            if dims is not None and B.shape[1] != dims.get(x, 0):
                continue
            if lower is not None and not el.contains(B, lower.at(x), p):
                continue
            if upper is not None and not el.contains(upper.at(x), B, p):
                continue
            opts.append(B)
        if not opts:
            return
        choices[x] = opts
    preds = {x: [(x[:a] + (x[a] - 1,) + x[a + 1:], a) for a in range(M.grid.d)] for x in pts}
    chosen: dict = {}

    def rec(i):
        if i == len(pts):
            yield Submodule(M, dict(chosen), canonical=True)
            return
        x = pts[i]
        need = [(M.edge(y, a) @ chosen[y]) % p for y, a in preds[x] if y in chosen and chosen[y].shape[1]]
        for B in choices[x]:
            if all(el.contains(B, v, p) for v in need):
                chosen[x] = B
                yield from rec(i + 1)
        chosen.pop(x, None)

    yield from rec(0)


def _check_caps(M: PersistenceModule, caps: tuple | None = None):
    max_dim, max_pts = caps or (MAX_TOTAL_DIM, MAX_POINTS)
    if M.p > 3:
        raise CapExceeded("brute force runs over GF(2) or GF(3) only")
    if M.total_dim > max_dim or len(M.dims) > max_pts:
        raise CapExceeded(f"total dim {M.total_dim} / {len(M.dims)} points beyond the brute-force caps")


def _iso(A, B) -> bool:
    return find_isomorphism(A, B, exhaustive_cap=16) is not None


def hom_count_bruteforce(M: PersistenceModule, N: PersistenceModule) -> int:
    """Number of natural transformations M -> N, by enumerating all components."""
    p = M.p
    pts = sorted(x for x in M.dims if N.dim(x))
    sizes = [N.dim(x) * M.dim(x) for x in pts]
    if sum(sizes) > 16 or p > 3:
        raise CapExceeded("too many component entries to enumerate")
    from .permod import Morphism
    from .errors import NaturalityViolation

    count = 0
    for vals in itertools.product(range(p), repeat=sum(sizes)):
        comps, pos = {}, 0
        for x, s in zip(pts, sizes):
            comps[x] = np.array(vals[pos: pos + s], dtype=np.int64).reshape(N.dim(x), M.dim(x))
            pos += s
        try:
            Morphism(M, N, comps, check=True)
        except NaturalityViolation:
            continue
        count += 1
    return count


def preimage_bruteforce(A, W, p: int) -> int:
    """Dimension of {x : A x in span W} by enumerating GF(p)^n."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    Wc = el.colspace(W, p) if np.size(W) else el.zeros(A.shape[0], 0)
    hits = 0
    for v in itertools.product(range(p), repeat=n):
        y = (A @ np.array(v, dtype=np.int64).reshape(-1, 1)) % p
        if el.contains(Wc, y, p):
            hits += 1
    return round(np.log(hits) / np.log(p))


def subquotient_bruteforce(N: PersistenceModule, M: PersistenceModule, caps: tuple | None = None) -> bool:
    """Whether N is isomorphic to I/K for submodules K <= I <= M."""
    _check_caps(M, caps)
    if any(M.dim(x) < n for x, n in N.dims.items()):
        return False
    for I in enumerate_submodules(M):
        Id = I.dims
        if any(Id.get(x, 0) < n for x, n in N.dims.items()):
            continue
        target = {x: Id[x] - N.dim(x) for x in Id}
        for K in enumerate_submodules(M, upper=I, dims=target):
            if _iso(Subquotient(I, K).module, N):
                return True
    return False


def en_membership_bruteforce(N: PersistenceModule, M: PersistenceModule, eps: int,
                             caps: tuple | None = None) -> bool:
    """Exact test of N in EN_eps(M) by enumerating all witnesses.

    ``caps`` is (max total dim, max support points) of M and defaults to
    the module constants.
    """
    from .erode import img_eps, ker_eps
    from .permod import sub_intersect

    _check_caps(M, caps)
    lo = img_eps(M, eps)
    ker = ker_eps(M, eps)
    for M1 in enumerate_submodules(M, lower=lo):
        d1 = M1.dims
        if any(d1.get(x, 0) < n for x, n in N.dims.items()):
            continue
        target = {x: d1[x] - N.dim(x) for x in d1}
        upper = sub_intersect(ker, M1)
        for M2 in enumerate_submodules(M, upper=upper, dims=target):
            if _iso(Subquotient(M1, M2).module, N):
                return True
    return False
