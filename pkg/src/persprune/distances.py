"""Erosion distance, bottleneck distances, interleaving search and d_EN brackets.

All distances live on the integer grid.  Pointwise ranks, containments of
shifted shapes and the existence of morphisms only change at integer
shifts, so every infimum below is attained at an integer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import exactlin as el
from .erode import check_interleaving, common_en_from_interleaving, erosion_dim
from .errors import CapExceeded, Inconsistent, NoFiniteMatching, NotAnInterleaving
from .grid import UpsetShape
from .permod import (
    Morphism,
    PersistenceModule,
    hom_basis,
    linear_combination,
    shift_module,
    transition,
)

__all__ = [
    "d_E",
    "erosion_dominated",
    "verify_interleaving",
    "search_interleaving",
    "Interleaving",
    "bottleneck_1d",
    "bottleneck_upset",
    "upset_pair_cost",
    "DistanceBracket",
    "d_EN_bracket",
]


# -- erosion distance ---------------------------------------------------------

def erosion_dominated(M: PersistenceModule, N: PersistenceModule, eps: int) -> bool:
    """dim Er_eps(M)_x <= dim N_x at every point."""
    for x in M.dims:
        if erosion_dim(M, eps, x) > N.dim(x):
            return False
    return True


def d_E(M: PersistenceModule, N: PersistenceModule) -> int:
    """Smallest eps with Er_eps(M) <=* N and Er_eps(N) <=* M."""
    if M.grid != N.grid:
        raise ValueError("modules live on different grids")
    for eps in range(M.grid.diameter() + 1):
        if erosion_dominated(M, N, eps) and erosion_dominated(N, M, eps):
            return eps
    return M.grid.diameter()


# -- interleavings ------------------------------------------------------------

def verify_interleaving(M, N, phi: Morphism, psi: Morphism, eps: int) -> bool:
    return check_interleaving(M, N, phi, psi, eps)


@dataclass
class Interleaving:
    eps: int
    phi: Morphism
    psi: Morphism
    exhaustive: bool = False


def _solve_psi(M, N, phi, psi_basis, eps):
    """psi in span(psi_basis) completing phi to an interleaving, or None."""
    p = M.p
    Ne, Me = shift_module(N, eps), shift_module(M, eps)
    TM, TN = transition(M, 0, 2 * eps), transition(N, 0, 2 * eps)
    phi_t = phi.with_target(Ne)
    phi_e = phi.shift(eps)
    ptsM = sorted(M.dims)
    ptsN = sorted(N.dims)

    def vec(left, right):
        return np.concatenate([left.flat(ptsM), right.flat(ptsN)])

    cols = [vec(g.shift(eps).compose(phi_t), phi_e.compose(g.with_target(Me))) for g in psi_basis]
    rhs = vec(TM, TN).reshape(-1, 1) % p
    if not cols:
        return None if rhs.any() else []
    A = np.stack(cols, axis=1) % p
    try:
        c = el.solve(A, rhs, p)
    except Inconsistent:
        return None
    return [int(v) for v in c[:, 0]]


def search_interleaving(M: PersistenceModule, N: PersistenceModule, eps: int, cap: int = 20000,
                        seed: int = 0, random_trials: int = 12):
    """Look for an eps-interleaving; phi ranges over Hom(M, N(eps)), psi is solved for.

    Returns an :class:`Interleaving` or None.  None means no interleaving
    exists; it is returned only when the search covered all phi up to
    scaling (the pair (c phi, psi / c) interleaves whenever (phi, psi) does).
    Otherwise CapExceeded is raised.
    """
    p = M.p
    Ne, Me = shift_module(N, eps), shift_module(M, eps)
    phi_basis = hom_basis(M, Ne)
    psi_basis = hom_basis(N, Me)
    k = len(phi_basis)

    def attempt(coeffs):
        phi = linear_combination(phi_basis, coeffs, M, Ne) if k else Morphism(M, Ne, {}, check=False)
        c = _solve_psi(M, N, phi, psi_basis, eps)
        if c is None:
            return None
        psi = linear_combination(psi_basis, c, N, Me) if psi_basis else Morphism(N, Me, {}, check=False)
        return (phi, psi) if check_interleaving(M, N, phi, psi, eps) else None

    if k == 0:
        found = attempt([])
        return Interleaving(eps, *found, exhaustive=True) if found else None

    count = (p ** k - 1) // (p - 1)
    if count <= cap:
        # projective representatives: first nonzero coefficient equal to 1
        for lead in range(k):
            for tail in itertools.product(range(p), repeat=k - lead - 1):
                coeffs = [0] * lead + [1] + list(tail)
                found = attempt(coeffs)
                if found:
                    return Interleaving(eps, *found, exhaustive=True)
        return None

    rng = np.random.default_rng(seed)
    for _ in range(random_trials):
        found = attempt(rng.integers(0, p, size=k))
        if found:
            return Interleaving(eps, *found, exhaustive=False)
    raise CapExceeded(f"{count} projective choices of phi exceed the cap {cap}")


# -- bottleneck distances -------------------------------------------------------

def _bars(M: PersistenceModule):
    from .decomp import decompose, interval_support

    if M.grid.d != 1:
        raise ValueError("one-parameter modules only")
    out = []
    for P in decompose(M).parts:
        s = interval_support(P)
        if s is None:
            raise ValueError("summand is not an interval")
        xs = sorted(x[0] for x in s.points)
        out.append((xs[0], xs[-1] + 1))
    return sorted(out)


def _bottleneck_search(costs_pair, del_a, del_b):
    """Least value t admitting a matching of cost <= t with deletions of cost <= t."""
    na, nb = len(del_a), len(del_b)
    cands = sorted({0, *del_a, *del_b, *(c for row in costs_pair for c in row)})

    def feasible(t):
        # deletion of a_i pairs it with a dummy copy of b, and vice versa;
        # integer nodes keep the matching independent of string hash seeds
        a = lambda i: i
        db = lambda j: na + j
        b = lambda j: na + nb + j
        da = lambda i: na + 2 * nb + i
        G = nx.Graph()
        left = [a(i) for i in range(na)] + [db(j) for j in range(nb)]
        G.add_nodes_from(left, bipartite=0)
        G.add_nodes_from(range(na + nb, 2 * (na + nb)), bipartite=1)
        for i in range(na):
            for j in range(nb):
                if costs_pair[i][j] <= t:
                    G.add_edge(a(i), b(j))
            if del_a[i] <= t:
                G.add_edge(a(i), da(i))
        for j in range(nb):
            if del_b[j] <= t:
                G.add_edge(db(j), b(j))
        for i in range(na):
            for j in range(nb):
                G.add_edge(db(j), da(i))
        match = nx.bipartite.hopcroft_karp_matching(G, top_nodes=left)
        if sum(1 for v in left if v in match) < na + nb:
            return None
        return {i: match[a(i)] - na - nb for i in range(na) if match[a(i)] < na + 2 * nb}

    lo, hi = 0, len(cands) - 1
    if feasible(cands[hi]) is None:
        raise NoFiniteMatching("no matching even at the largest candidate")
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cands[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    return cands[lo], feasible(cands[lo])


def bottleneck_1d(M: PersistenceModule, N: PersistenceModule):
    """One-parameter bottleneck distance of the barcodes, with an optimal matching.

    Bars are half-open [a, b).  Matching [a, b) with [c, d) costs
    max(|a-c|, |b-d|); leaving [a, b) unmatched costs ceil((b-a)/2).
    """
    A, B = _bars(M), _bars(N)
    pair = [[max(abs(a - c), abs(b - d)) for c, d in B] for a, b in A]
    dela = [math.ceil((b - a) / 2) for a, b in A]
    delb = [math.ceil((d - c) / 2) for c, d in B]
    val, match = _bottleneck_search(pair, dela, delb)
    return val, [(A[i], B[j]) for i, j in sorted(match.items())]


def _contain_shift(U: UpsetShape, V: UpsetShape) -> int:
    """Least e >= 0 with V inside U(e), i.e. every generator of V above some generator of U shifted by -e."""
    worst = 0
    for v in V.generators:
        best = min(max(max(u_k - v_k for u_k, v_k in zip(u, v)), 0) for u in U.generators)
        worst = max(worst, best)
    return worst


def upset_pair_cost(U: UpsetShape, V: UpsetShape) -> int:
    """Least e with V inside U(e) and U inside V(e)."""
    return max(_contain_shift(U, V), _contain_shift(V, U))


def _upsets_of(M: PersistenceModule):
    from .decomp import decompose, interval_support

    out = []
    for P in decompose(M).parts:
        s = interval_support(P)
        if s is None or s.e_part().generators and _e_part_inside_band(s):
            raise ValueError("summand is not an upset module")
        out.append(s.up_part())
    return out


def _e_part_inside_band(s) -> bool:
    lim = [n - s.grid.margin for n in s.grid.sizes]
    return any(all(a < b for a, b in zip(g, lim)) for g in s.e_part().generators)


def bottleneck_upset(M, N, ci_predicate: bool = True):
    """Least eps admitting an eps-matching of the upset summands, with the matching.

    Upset summands stand for infinite upsets (the top margin band of the
    grid plays the role of infinity), so none is eps-trivial and unequal
    summand counts admit no matching.  With ``ci_predicate`` the feasibility
    test goes through ci_from_upsets + simple_solution; otherwise through a
    direct bipartite matching on the pair costs.
    """
    from .ciproblems import ci_from_upsets, simple_solution

    Us = M if isinstance(M, list) else _upsets_of(M)
    Vs = N if isinstance(N, list) else _upsets_of(N)
    if len(Us) != len(Vs):
        raise NoFiniteMatching(f"{len(Us)} versus {len(Vs)} summands and none can be deleted")
    if not Us:
        return 0, []
    cost = [[upset_pair_cost(U, V) for V in Vs] for U in Us]
    cands = sorted({c for row in cost for c in row})

    def feasible(t):
        if ci_predicate:
            sigma = simple_solution(ci_from_upsets(Us, Vs, t))
            return None if sigma is None else {i: sigma[i] for i in range(len(Us))}
        return _perfect_matching(cost, t)

    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cands[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    match = feasible(cands[lo])
    return cands[lo], sorted(match.items())


def _perfect_matching(cost, t):
    n = len(cost)
    G = nx.Graph()
    G.add_nodes_from(range(n), bipartite=0)
    G.add_nodes_from(range(n, 2 * n), bipartite=1)
    G.add_edges_from((i, n + j) for i in range(n) for j in range(n) if cost[i][j] <= t)
    m = nx.bipartite.hopcroft_karp_matching(G, top_nodes=list(range(n)))
    if len(m) != 2 * n:
        return None
    return {i: m[i] - n for i in range(n)}


# -- d_EN brackets -----------------------------------------------------------

@dataclass
class DistanceBracket:
    lower: int = 0
    upper: float = math.inf
    witnesses: dict = field(default_factory=dict)
    reasons: list = field(default_factory=list)

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"inconsistent bracket [{self.lower}, {self.upper}]")


def d_EN_bracket(M: PersistenceModule, N: PersistenceModule, known: Interleaving | None = None,
                 interleaving_lower: int = 0, compute_d_E: bool = True) -> DistanceBracket:
    """Bounds on d_EN(M, N).

    Upper: a verified eps-interleaving yields a common member of EN_eps(M)
    and EN_eps(N).  Lower: d_E <= d_EN, and d_I <= 2 d_EN turns a proven
    interleaving lower bound into ceil(lower / 2).
    """
    lower, reasons, wit = 0, [], {}
    upper = math.inf
    if M == N:
        return DistanceBracket(0, 0, {}, ["identical modules"])
    if compute_d_E:
        dE = d_E(M, N)
        lower = max(lower, dE)
        reasons.append(f"d_E = {dE} is a lower bound")
        wit["d_E"] = dE
    if interleaving_lower:
        half = math.ceil(interleaving_lower / 2)
        if half > lower:
            lower = half
        reasons.append(f"no interleaving below {interleaving_lower} gives lower bound {half}")
    if known is not None:
        if not check_interleaving(M, N, known.phi, known.psi, known.eps):
            raise NotAnInterleaving("supplied morphisms do not interleave")
        common = common_en_from_interleaving(M, N, known.phi, known.psi, known.eps)
        upper = known.eps
        wit["common_member"] = common
        reasons.append(f"common member from a verified {known.eps}-interleaving")
    return DistanceBracket(lower, upper, wit, reasons)
