"""Exact dense linear algebra over a prime field GF(p).

Matrices are numpy int64 arrays holding residues in [0, p).  Every function
takes the characteristic explicitly, so nothing depends on global state.
Products of two residues stay below 2**31 for the default prime, which keeps
int64 matrix products exact for any size we use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy import isprime

from .errors import Inconsistent

__all__ = [
    "DEFAULT_PRIME",
    "Field",
    "as_matrix",
    "zeros",
    "identity",
    "matmul",
    "rref",
    "rank",
    "nullspace",
    "colspace",
    "solve",
    "solve_and_bases",
    "quotient_map",
    "preimage",
    "intersect",
    "span_sum",
    "contains",
    "coords",
    "inverse",
    "is_invertible",
    "random_matrix",
]

DEFAULT_PRIME = 32003


@dataclass(frozen=True)
class Field:
    """A prime field, validated at construction."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not isprime(int(self.p)):
            raise ValueError(f"characteristic {self.p!r} is not prime")
        if self.p >= 2**31:
            raise ValueError("characteristic too large for int64 products")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(int(a), self.p - 2, self.p)


def as_matrix(A, p: int, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    M = np.array(A, dtype=np.int64)
    if M.size == 0:
        r = rows if rows is not None else (M.shape[0] if M.ndim == 2 else 0)
        c = cols if cols is not None else (M.shape[1] if M.ndim == 2 else 0)
        return np.zeros((r, c), dtype=np.int64)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    return M % p


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(*mats, p: int) -> np.ndarray:
    """Product of the given matrices mod p (left to right)."""
    out = mats[0]
    for m in mats[1:]:
        out = (out @ m) % p
    return out


def rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = np.array(A, dtype=np.int64) % p if np.size(A) else np.zeros(np.shape(A), dtype=np.int64)
    if R.ndim != 2:
        R = R.reshape(R.shape[0] if R.ndim else 0, -1)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        lead = int(R[r, c])
        if lead != 1:
            R[r] = (R[r] * pow(lead, p - 2, p)) % p
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit] = (R[hit] - np.outer(col[hit], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, p: int) -> int:
    if np.size(A) == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> np.ndarray:
    """Columns form a basis of ker A; free variables get unit vectors in order."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    if A.shape[0] == 0 or cols == 0:
        return identity(cols)
    R, piv = rref(A, p)
    free = [c for c in range(cols) if c not in set(piv)]
    N = zeros(cols, len(free))
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, c in enumerate(piv):
            N[c, j] = (-R[i, f]) % p
    return N


def colspace(A, p: int) -> np.ndarray:
    """Canonical basis of the column space: the transpose is in RREF."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.size == 0:
        return zeros(n, 0)
    R, piv = rref(A.T, p)
    return np.ascontiguousarray(R[: len(piv)].T)


def _pivots_of_canonical(B: np.ndarray) -> list[int]:
    # first nonzero row in each column of a canonical basis
    return [int(np.flatnonzero(B[:, j])[0]) for j in range(B.shape[1])]


def coords(B: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coordinates of columns of v in the canonical basis B (no membership check)."""
    if B.shape[1] == 0:
        return zeros(0, v.shape[1])
    return v[_pivots_of_canonical(B), :].copy()


def quotient_map(W: np.ndarray, p: int) -> np.ndarray:
    """Matrix of the projection GF(p)^n -> GF(p)^n / span W (W canonical)."""
    n, k = W.shape
    if k == 0:
        return identity(n)
    piv = _pivots_of_canonical(W)
    rest = [i for i in range(n) if i not in set(piv)]
    Q = zeros(n - k, n)
    for r, i in enumerate(rest):
        Q[r, i] = 1
    # x - sum_j x[piv_j] * W[:, j] restricted to the non-pivot rows
    Q[:, piv] = (-W[rest, :]) % p
    return Q


def solve(A, b, p: int) -> np.ndarray:
    """One particular solution x of A x = b; raises Inconsistent otherwise."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    m, n = A.shape
    if m == 0:
        x = zeros(n, b.shape[1])
        return x[:, 0] if vec else x
    R, piv = rref(np.hstack([A, b]), p)
    if piv and piv[-1] >= n:
        raise Inconsistent("right-hand side not in the column space")
    x = zeros(n, b.shape[1])
    for i, c in enumerate(piv):
        x[c] = R[i, n:]
    return x[:, 0] if vec else x


def preimage(A, W, p: int) -> np.ndarray:
    """Basis of {x : A x in span W}, as the kernel of the composite quotient."""
    A = np.asarray(A, dtype=np.int64)
    W = colspace(W, p) if np.size(W) else zeros(A.shape[0], 0)
    Q = quotient_map(W, p)
    return colspace(nullspace((Q @ A) % p if Q.shape[0] else zeros(0, A.shape[1]), p), p)


def solve_and_bases(A, b=None, W=None, *, p: int) -> dict:
    """Image basis, a particular solution of A x = b, and the preimage of span W."""
    A = np.asarray(A, dtype=np.int64)
    out = {"image_basis": colspace(A, p)}
    if b is not None:
        try:
            out["solution"] = solve(A, b, p)
        except Inconsistent:
            out["solution"] = "inconsistent"
    if W is not None:
        out["preimage_basis"] = preimage(A, W, p)
    return out


def intersect(U, V, p: int) -> np.ndarray:
    U = np.asarray(U, dtype=np.int64)
    if U.shape[1] == 0 or np.asarray(V).shape[1] == 0:
        return zeros(U.shape[0], 0)
    return colspace((U @ preimage(U, V, p)) % p, p)


def span_sum(*spaces, p: int) -> np.ndarray:
    return colspace(np.hstack(spaces), p)


def contains(U, V, p: int) -> bool:
    """True iff span V is inside span U (U canonical)."""
    V = np.asarray(V, dtype=np.int64)
    if V.shape[1] == 0:
        return True
    if U.shape[1] == 0:
        return not V.any()
    return not ((quotient_map(U, p) @ V) % p).any()


def inverse(A, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(np.hstack([A, identity(n)]), p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return np.ascontiguousarray(R[:, n:])


def is_invertible(A, p: int) -> bool:
    A = np.asarray(A)
    return A.shape[0] == A.shape[1] and rank(A, p) == A.shape[0]


def random_matrix(rng: np.random.Generator, r: int, c: int, p: int, density: float = 1.0) -> np.ndarray:
    M = rng.integers(0, p, size=(r, c), dtype=np.int64)
    if density < 1.0:
        M *= rng.random((r, c)) < density
    return M
