"""Constrained-invertibility (CI) problems and their links to upset modules.

A CI problem of size n is a pair of n x n zero/star patterns (P, Q).  Its
graph has vertices u_1..u_n, v_1..v_n, an edge u_i -> v_j when P[j][i] is a
star and an edge v_j -> u_i when Q[i][j] is a star.  A solution is a pair of
matrices (A, B) with AB = I, A zero where P is zero and B zero where Q is
zero; it is simple when A is a permutation matrix.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import networkx as nx
import numpy as np

from . import exactlin as el
from .errors import CapExceeded, EvenC, Inconsistent, NotAnInterleaving, NotBenign
from .grid import Grid, UpsetShape, contains_shifted, interval_from_parts
from .permod import (
    Morphism,
    PersistenceModule,
    Submodule,
    direct_sum,
    generated_submodule,
    interval_module,
    shift_module,
    upset_module,
    submodule_module,
)

__all__ = [
    "CIProblem",
    "CISolution",
    "example_problem",
    "example_solution",
    "verify_solution",
    "simple_solution",
    "permutation_solution",
    "weaken",
    "solve",
    "ci_from_upsets",
    "upsets_from_ci",
    "UpsetFamily",
    "distance_vectors",
    "random_problem",
    "interleaving_from_endomorphism",
    "counterexample_family",
    "CounterexampleFamily",
    "benign_block_ci",
    "BlockCI",
]


@dataclass(frozen=True)
class CIProblem:
    P: tuple
    Q: tuple

    def __post_init__(self):
        P = tuple(tuple(bool(v) for v in row) for row in self.P)
        Q = tuple(tuple(bool(v) for v in row) for row in self.Q)
        n = len(P)
        if len(Q) != n or any(len(r) != n for r in P + Q):
            raise ValueError("P and Q must both be n x n")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    @property
    def n(self) -> int:
        return len(self.P)

    @classmethod
    def from_strings(cls, P: list[str], Q: list[str]) -> "CIProblem":
        return cls([[c == "*" for c in r] for r in P], [[c == "*" for c in r] for r in Q])

    def to_strings(self) -> tuple[list[str], list[str]]:
        f = lambda M: ["".join("*" if v else "0" for v in r) for r in M]
        return f(self.P), f(self.Q)

    def edges(self) -> tuple[set, set]:
        """(u->v edges as (i, j), v->u edges as (j, i))."""
        n = self.n
        uv = {(i, j) for i in range(n) for j in range(n) if self.P[j][i]}
        vu = {(j, i) for i in range(n) for j in range(n) if self.Q[i][j]}
        return uv, vu

    def star_count(self) -> int:
        return sum(map(sum, self.P)) + sum(map(sum, self.Q))


@dataclass
class CISolution:
    A: np.ndarray
    B: np.ndarray
    p: int


def example_problem() -> CIProblem:
    """The size-3 problem with a solution but no simple solution."""
    return CIProblem.from_strings(["***", "*0*", "**0"], ["***", "**0", "*0*"])


def example_solution(p: int) -> CISolution:
    A = np.array([[1, 1, 1], [1, 0, 1], [1, 1, 0]])
    B = np.array([[-1, 1, 1], [1, -1, 0], [1, 0, -1]])
    return CISolution(A % p, B % p, p)


def verify_solution(prob: CIProblem, sol: CISolution) -> tuple[bool, bool]:
    """(is a solution, is a simple solution)."""
    n, p = prob.n, sol.p
    A, B = np.asarray(sol.A) % p, np.asarray(sol.B) % p
    if A.shape != (n, n) or B.shape != (n, n):
        raise ValueError("solution size does not match the problem")
    P, Q = np.array(prob.P, dtype=bool), np.array(prob.Q, dtype=bool)
    ok = (np.array_equal((A @ B) % p, el.identity(n))
          and not A[~P].any() and not B[~Q].any())
    simple = ok and all(sorted(r.tolist()) == [0] * (n - 1) + [1] for r in A)
    return bool(ok), bool(simple)


def simple_solution(prob: CIProblem):
    """A permutation sigma with edges u_i <-> v_sigma(i) both ways, or None.

    Maximum bipartite matching by Hopcroft-Karp on the bidirectional edges.
    """
    n = prob.n
    # integer nodes keep the matching independent of string hash seeds
    G = nx.Graph()
    top = list(range(n))
    G.add_nodes_from(top, bipartite=0)
    G.add_nodes_from(range(n, 2 * n), bipartite=1)
    for i in range(n):
        for j in range(n):
            if prob.P[j][i] and prob.Q[i][j]:
                G.add_edge(i, n + j)
    match = nx.bipartite.hopcroft_karp_matching(G, top_nodes=top)
    if sum(1 for u in top if u in match) < n:
        return None
    return [match[i] - n for i in range(n)]


def permutation_solution(sigma: list, p: int) -> CISolution:
    n = len(sigma)
    A = el.zeros(n, n)
    for i, j in enumerate(sigma):
        A[j, i] = 1
    return CISolution(A, A.T.copy(), p)


def _distances(prob: CIProblem, limit: int):
    """Shortest path lengths (capped at limit) from each vertex, as dicts."""
    uv, vu = prob.edges()
    n = prob.n
    adj = {("u", i): [] for i in range(n)}
    adj.update({("v", j): [] for j in range(n)})
    for i, j in uv:
        adj[("u", i)].append(("v", j))
    for j, i in vu:
        adj[("v", j)].append(("u", i))
    out = {}
    for s in adj:
        dist = {s: 0}
        dq = deque([s])
        while dq:
            a = dq.popleft()
            if dist[a] >= limit:
                continue
            for b in adj[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    dq.append(b)
        out[s] = dist
    return out


def weaken(prob: CIProblem, c: int) -> CIProblem:
    """The c-weakening: edges wherever a path of length at most c exists."""
    if c < 1 or c % 2 == 0:
        raise EvenC(f"c must be an odd integer >= 1, got {c}")
    n = prob.n
    D = _distances(prob, c)
    P = [[("v", j) in D[("u", i)] for i in range(n)] for j in range(n)]
    Q = [[("u", i) in D[("v", j)] for j in range(n)] for i in range(n)]
    return CIProblem(P, Q)


def _row_choices(mask, p):
    """Rows over GF(p) supported in mask, scaled so the first nonzero entry is 1."""
    idx = [k for k, v in enumerate(mask) if v]
    n = len(mask)
    for lead in range(len(idx)):
        for tail in itertools.product(range(p), repeat=len(idx) - lead - 1):
            row = [0] * n
            row[idx[lead]] = 1
            for k, t in zip(idx[lead + 1:], tail):
                row[k] = t
            yield row


def solve(prob: CIProblem, p: int = 2, max_n: int = 4, max_stars: int = 14):
    """Exact solution search over GF(2) or GF(3); None when there is none.

    Rows of A are enumerated up to scaling (scaling a row of A and the
    matching column of B preserves a solution); rows must stay linearly
    independent.  For a complete A, each column of B is a linear system
    restricted to the stars of the matching column of Q.
    """
    if p not in (2, 3):
        raise ValueError("exact CI solving supports GF(2) and GF(3) only")
    n = prob.n
    stars = sum(map(sum, prob.P))
    if n > max_n or stars > max_stars:
        raise CapExceeded(f"n={n}, stars in P={stars} exceed caps ({max_n}, {max_stars})")
    if any(not any(r) for r in prob.P) or any(not any(prob.Q[i][j] for i in range(n)) for j in range(n)):
        return None
    choices = [list(_row_choices(prob.P[j], p)) for j in range(n)]

    def complete(A):
        B = el.zeros(n, n)
        for j in range(n):
            S = [i for i in range(n) if prob.Q[i][j]]
            e = el.zeros(n, 1)
            e[j, 0] = 1
            try:
                b = el.solve(A[:, S], e, p)
            except Inconsistent:
                return None
            B[S, j] = b[:, 0]
        return B

    rows: list = []

    def rec(j):
        if j == n:
            A = np.array(rows, dtype=np.int64)
            B = complete(A)
            return None if B is None else CISolution(A, B, p)
        for r in choices[j]:
            rows.append(r)
            if el.rank(np.array(rows, dtype=np.int64), p) == len(rows):
                found = rec(j + 1)
                if found is not None:
                    return found
            rows.pop()
        return None

    return rec(0)


def random_problem(n: int, rng: np.random.Generator, density: float = 0.5) -> CIProblem:
    P = rng.random((n, n)) < density
    Q = rng.random((n, n)) < density
    return CIProblem(P.tolist(), Q.tolist())


# -- upsets ----------------------------------------------------------------

def ci_from_upsets(U: list, V: list, eps: int, check_margin: bool = False) -> CIProblem:
    """P[j][i] = * iff U_i lies in V_j(eps); Q[i][j] = * iff V_j lies in U_i(eps).

    This is the indexing under which graph edges u_i -> v_j are exactly
    the containments U_i in V_j(eps), i.e. the nonzero morphisms
    U_i -> V_j(eps).
    """
    if len(U) != len(V):
        raise ValueError("upset families must have equal length")
    n = len(U)

    def grid_of(S):
        return S.grid if check_margin else None

    P = [[contains_shifted(V[j], U[i], eps, grid_of(U[i])) for i in range(n)] for j in range(n)]
    Q = [[contains_shifted(U[i], V[j], eps, grid_of(V[j])) for j in range(n)] for i in range(n)]
    return CIProblem(P, Q)


@dataclass
class UpsetFamily:
    U: list
    V: list
    grid: Grid
    w: list
    z: list
    degenerate: bool

    def modules(self, p: int = 2):
        M = direct_sum([upset_module(u, self.grid, p) for u in self.U])[0]
        N = direct_sum([upset_module(v, self.grid, p) for v in self.V])[0]
        return M, N


def distance_vectors(prob: CIProblem, C: int):
    """Vectors w_i (for u_i) and z_j (for v_j): entry k is the path length from vertex k, or C + 2n."""
    n = prob.n
    cap = C + 2 * n
    D = _distances(prob, 2 * n + 1)
    order = [("u", i) for i in range(n)] + [("v", j) for j in range(n)]

    def vec(y):
        return tuple(min(D[s].get(y, cap), cap) for s in order)

    return [vec(("u", i)) for i in range(n)], [vec(("v", j)) for j in range(n)]


def upsets_from_ci(prob: CIProblem, C: int, anchor: tuple | None = None, margin: int | None = None) -> UpsetFamily:
    """Staircase upsets whose containment pattern at shift c is the c-weakening of prob.

    Anchors p_k step right by C + 2n and down by C + 2n; the upset of a
    vertex is generated by the points p_k + (x_k, x_k) for its vector x.
    """
    n = prob.n
    D = C + 2 * n
    w, z = distance_vectors(prob, C)
    k = 2 * n
    margin = margin if margin is not None else C + 1
    base = anchor or (0, 0)
    anchors = [(base[0] + i * D, base[1] + (k - 1 - i) * D) for i in range(k)]
    size = k * D + max(base) + C + 2 + margin
    grid = Grid((size, size), margin=margin)

    def upset(x):
        return UpsetShape.from_points([(a[0] + t, a[1] + t) for a, t in zip(anchors, x)], grid)

    uv, vu = prob.edges()
    sinks = ({i for i in range(n)} - {i for i, _ in uv}) | ({j for j in range(n)} - {j for j, _ in vu})
    return UpsetFamily([upset(x) for x in w], [upset(x) for x in z], grid, w, z, degenerate=bool(sinks))


# -- the endomorphism interleaving and the counterexample family ------------

def _block_diag(a, b):
    return np.block([[a, el.zeros(a.shape[0], b.shape[1])], [el.zeros(b.shape[0], a.shape[1]), b]])


def interleaving_from_endomorphism(M: PersistenceModule, f: Morphism, eps: int):
    """The eps-interleaved pair built from an endomorphism f: M -> M(eps).

    A = M + im((T - f(-eps)) f(-2eps)) and B = im f(-eps) + im(T - f(-eps)),
    with T the internal map over eps, both realised as submodules of M + M.
    The interleaving maps are the block matrices
    [[f, T], [T - f, -T]] and [[T, T], [T - f, -f]] restricted to A and B.
    Returns (A, B, phi, psi).
    """
    p, g = M.p, M.grid
    S = direct_sum([M, M])[0]
    baseA, baseB = {}, {}
    for x, n in M.dims.items():
        y1 = tuple(a - eps for a in x)
        y2 = tuple(a - 2 * eps for a in x)
        empty = el.zeros(n, 0)
        im1 = im2 = imA = empty
        if g.contains(y1) and M.dim(y1):
            T, F = M.diagonal(y1, eps), f.at(y1)
            im1, im2 = F, (T - F) % p
            if g.contains(y2) and M.dim(y2):
                imA = ((T - F) @ f.at(y2)) % p
        baseA[x] = _block_diag(el.identity(n), imA)
        baseB[x] = _block_diag(im1, im2)
    subA, subB = Submodule(S, baseA), Submodule(S, baseB)
    subA.check_closure()
    subB.check_closure()
    A, incA = submodule_module(subA)
    B, incB = submodule_module(subB)

    def restrict(src, inc, tgt_inc, blocks):
        comps = {}
        for x in src.dims:
            y = tuple(a + eps for a in x)
            if not g.contains(y) or not S.dim(y):
                continue
            T, F = M.diagonal(x, eps), f.at(x)
            tl, tr, bl, br = blocks(T, F)
            rhs = (np.block([[tl, tr], [bl, br]]) @ inc.at(x)) % p
            if not tgt_inc.source.dim(y):
                if rhs.any():
                    raise NotAnInterleaving(f"image leaves the target at {x}")
                continue
            try:
                comps[x] = el.solve(tgt_inc.at(y), rhs, p)
            except Inconsistent:
                raise NotAnInterleaving(f"image leaves the target submodule at {x}") from None
        return comps

    phi_c = restrict(A, incA, incB, lambda T, F: (F, T, (T - F) % p, (-T) % p))
    psi_c = restrict(B, incB, incA, lambda T, F: (T, T, (T - F) % p, (-F) % p))
    phi = Morphism(A, shift_module(B, eps), phi_c, check=True)
    psi = Morphism(B, shift_module(A, eps), psi_c, check=True)
    return A, B, phi, psi


@dataclass
class CounterexampleFamily:
    n: int
    I_parts: list
    I: PersistenceModule
    M: PersistenceModule
    inclusion: Morphism
    f: Morphism
    A: PersistenceModule
    B: PersistenceModule
    phi: Morphism
    psi: Morphism
    offset: int


def _interval_shift_map(I: PersistenceModule, parts: list, target_of: dict, eps: int) -> Morphism:
    """The map I -> I(eps) sending e_i to e_{target_of[i]} where both are present."""
    Ie = shift_module(I, eps)
    comps = {}
    for x, nx_ in I.dims.items():
        y = tuple(a + eps for a in x)
        if not Ie.dim(x):
            continue
        src = [i for i, P in enumerate(parts) if P.dim(x)]
        tgt = [i for i, P in enumerate(parts) if P.dim(y)]
        m = el.zeros(len(tgt), len(src))
        for c, i in enumerate(src):
            j = target_of[i]
            if j in tgt:
                m[tgt.index(j), c] = 1
        comps[x] = m
    return Morphism(I, Ie, comps, check=True)


def counterexample_family(n: int, offset: int = 2, p: int = 32003, max_n: int = 3) -> CounterexampleFamily:
    """The 2n intervals I_i, the submodule M of their sum, the shift map f and the
    1-interleaved pair built from (M, f)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > max_n:
        raise CapExceeded(f"n={n} exceeds the cap {max_n}")
    o = offset
    top = 2 * n * n + 10 * n
    size = top + 2 * o
    g = Grid((size, size))
    shift = lambda pt: (pt[0] + o, pt[1] + o)
    q, x, y, z = (0, 6 * n), (2 * n * n, 4 * n), (2 * n * n + 2 * n, 2 * n), (2 * n * n + 4 * n, 0)
    ups = [shift(a) for a in (q, x, y, z)]
    parts = []
    for i in range(1, 2 * n + 1):
        c = 2 * n * n + 8 * n + i
        es = [shift((0, top)), shift((c, c)), shift((top, 0))]
        parts.append(interval_module(interval_from_parts(ups, es, g), p=p))
    I = direct_sum(parts)[0]

    def unit(pt, coeffs):
        pt = shift(pt)
        present = [i for i, P in enumerate(parts) if P.dim(pt)]
        v = [0] * len(present)
        for i, c in coeffs.items():
            if i not in present:
                raise ValueError(f"e_{i + 1} is not present at {pt}")
            v[present.index(i)] = c % p
        return pt, v

    tilde = lambda i: min(i, 2 * n - 1)  # 0-based index of e~_{i+1}
    gens = []
    for i in range(2 * n - 1):
        k = i + 1
        qi = (q[0] + 2 * n * n - k * n, q[1] + 2 * n * n - k * n)
        gens.append(unit(qi, {i: 1}))
        gens.append(unit((x[0] + k, x[1] + k), {i: 1}))
        gens.append(unit((y[0] + k, y[1] + k), {i: 1, tilde(i + n): -1}))
        gens.append(unit((z[0] + k, z[1] + k), {i: 1, tilde(i + n - 1): -1}))
    last, k = 2 * n - 1, 2 * n
    qn = (q[0] + 2 * n * n - k * n, q[1] + 2 * n * n - k * n)
    for pt in (qn, (x[0] + k, x[1] + k), (y[0] + k, y[1] + k), (z[0] + k, z[1] + k)):
        gens.append(unit(pt, {last: 1}))
    Msub = generated_submodule(I, gens)
    M, inc = submodule_module(Msub)

    fI = _interval_shift_map(I, parts, {i: min(i + 1, 2 * n - 1) for i in range(2 * n)}, 1)
    Me = shift_module(M, 1)
    comps = {}
    for xx in M.dims:
        yy = tuple(a + 1 for a in xx)
        if not Me.dim(xx):
            continue
        rhs = (fI.at(xx) @ inc.at(xx)) % p
        try:
            comps[xx] = el.solve(inc.at(yy), rhs, p)
        except Inconsistent:
            raise NotAnInterleaving(f"f does not restrict to M at {xx}") from None
    f = Morphism(M, Me, comps, check=True)
    A, B, phi, psi = interleaving_from_endomorphism(M, f, 1)
    return CounterexampleFamily(n, parts, I, M, inc, f, A, B, phi, psi, o)


# -- benign families ---------------------------------------------------------

@dataclass
class BlockCI:
    problem: CIProblem
    solution: CISolution
    A: np.ndarray
    B: np.ndarray
    m: int
    n: int

    def matching(self, c: int):
        """Pairs (i, j) matched by a simple solution of the c-weakening, or None."""
        sigma = simple_solution(weaken(self.problem, c))
        if sigma is None:
            return None
        return [(i, sigma[i]) for i in range(self.m) if sigma[i] < self.n]


def _standard_interval(P: PersistenceModule):
    from .decomp import interval_support

    s = interval_support(P)
    if s is None or any(int(m[0, 0]) != 1 for m in P.maps.values()):
        raise NotBenign("summands must be interval modules with identity structure maps")
    return s


def _benign_kind(shapes) -> str:
    if all(s.minimum() is not None for s in shapes):
        return "principal"
    if all(not _bounded_e_part(s) for s in shapes):
        return "upsets"
    raise NotBenign("intervals are neither all principal nor all upsets")


def _bounded_e_part(s) -> bool:
    lim = [k - s.grid.margin for k in s.grid.sizes]
    return any(all(a < b for a, b in zip(e, lim)) for e in s.e_part().generators)


def _block_scalars(src_parts, tgt_parts, F: Morphism, eps: int, p: int) -> np.ndarray:
    """w-values: the scalar of each block F_{i->j} on the overlap of the supports."""
    out = el.zeros(len(tgt_parts), len(src_parts))
    for x in sorted(F.comps):
        y = tuple(a + eps for a in x)
        src = [i for i, P in enumerate(src_parts) if P.dim(x)]
        tgt = [j for j, P in enumerate(tgt_parts) if P.dim(y)]
        m = F.comps[x]
        for c, i in enumerate(src):
            for r, j in enumerate(tgt):
                if out[j, i] == 0 and m[r, c] % p:
                    out[j, i] = m[r, c] % p
    return out


def benign_block_ci(M_parts: list, N_parts: list, phi: Morphism, psi: Morphism, eps: int) -> BlockCI:
    """The block CI problem built from an interleaving of interval-decomposable modules.

    ``phi`` and ``psi`` act on direct_sum(M_parts) and direct_sum(N_parts)
    in the standard coordinates.  With A the n x m matrix of scalars of phi
    and B the m x n matrix of psi, C = [[A, I_n], [I_m - BA, -B]] and
    D = [[B, I_m], [I_n - AB, -A]] satisfy CD = I.
    """
    from .erode import check_interleaving

    shapes = [_standard_interval(P) for P in M_parts + N_parts]
    _benign_kind(shapes)
    M, N = phi.source, psi.source
    if not check_interleaving(M, N, phi, psi, eps):
        raise NotAnInterleaving("phi and psi do not form an interleaving")
    p = M.p
    m, n = len(M_parts), len(N_parts)
    A = _block_scalars(M_parts, N_parts, phi, eps, p)
    B = _block_scalars(N_parts, M_parts, psi, eps, p)
    C = np.block([[A, el.identity(n)], [(el.identity(m) - B @ A) % p, (-B) % p]]) % p
    D = np.block([[B, el.identity(m)], [(el.identity(n) - A @ B) % p, (-A) % p]]) % p
    prob = CIProblem((C != 0).tolist(), (D != 0).tolist())
    return BlockCI(prob, CISolution(C, D, p), A, B, m, n)
