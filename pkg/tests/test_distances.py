import itertools
import math

import pytest
from hypothesis import given, strategies as st

from persprune import catalog
from persprune.distances import (
    bottleneck_1d,
    bottleneck_upset,
    d_E,
    d_EN_bracket,
    search_interleaving,
    upset_pair_cost,
)
from persprune.errors import NoFiniteMatching, NotAnInterleaving
from persprune.grid import Grid, UpsetShape
from persprune.permod import direct_sum, upset_module

SIZE = 24
bars = st.lists(st.tuples(st.integers(0, 10), st.integers(1, 12)).map(lambda t: (t[0], t[0] + t[1])),
                min_size=1, max_size=3)


def module(barlist, size=SIZE):
    g = Grid((size,))
    return direct_sum([catalog.interval_1d(a, b, g) for a, b in barlist], g)[0]


def eroded_count(barlist, eps, x):
    return sum(1 for a, b in barlist if a <= x - eps and x + eps < b)


def d_E_oracle(A, B, size=SIZE):
    """Erosion distance of two barcodes, straight from bar counts."""
    for eps in range(size + 1):
        if all(eroded_count(A, eps, x) <= sum(a <= x < b for a, b in B) and
               eroded_count(B, eps, x) <= sum(a <= x < b for a, b in A) for x in range(size)):
            return eps
    return size


def bottleneck_oracle(A, B):
    """Brute force over partial matchings; deleting [a, b) costs ceil((b - a) / 2)."""
    dele = lambda a, b: math.ceil((b - a) / 2)
    best = math.inf
    for k in range(min(len(A), len(B)) + 1):
        for ia in itertools.combinations(range(len(A)), k):
            for ib in itertools.permutations(range(len(B)), k):
                cost = max([max(abs(A[i][0] - B[j][0]), abs(A[i][1] - B[j][1])) for i, j in zip(ia, ib)]
                           + [dele(*A[i]) for i in range(len(A)) if i not in ia]
                           + [dele(*B[j]) for j in range(len(B)) if j not in ib], default=0)
                best = min(best, cost)
    return best


def test_erosion_distance_of_nested_bars():
    assert d_E(module([(0, 10)]), module([(2, 8)])) == 2


@given(bars, bars)
def test_erosion_distance_matches_bar_counts(A, B):
    assert d_E(module(A), module(B)) == d_E_oracle(A, B)


@given(bars, bars)
def test_erosion_distance_symmetric(A, B):
    assert d_E(module(A), module(B)) == d_E(module(B), module(A))


@given(bars, bars, bars)
def test_erosion_distance_triangle(A, B, C):
    assert d_E(module(A), module(C)) <= d_E(module(A), module(B)) + d_E(module(B), module(C))


@given(bars, bars)
def test_bottleneck_matches_enumeration(A, B):
    val, match = bottleneck_1d(module(A), module(B))
    assert val == bottleneck_oracle(sorted(A), sorted(B))
    assert all(max(abs(a[0] - b[0]), abs(a[1] - b[1])) <= val for a, b in match)


@given(bars, bars)
def test_erosion_distance_below_bottleneck(A, B):
    assert d_E(module(A), module(B)) <= bottleneck_1d(module(A), module(B))[0]


def test_nested_bar_family_erosion_distances():
    for c, want in {2: 2, 3: 2, 4: 3, 5: 3}.items():
        o = 2 * c + 2
        Bs = [(o - i, o + 2 * c + i) for i in range(1, c)]
        M, N, _, _ = catalog.bar_family(c, "short")
        assert d_E_oracle(Bs, [(o - c, o + c)] + Bs, size=o + 4 * c + 4) == want
        assert d_E(M, N) == want


def upsets(gens, g):
    return [UpsetShape(tuple(map(tuple, gs)), g) for gs in gens]


upset_gens = st.lists(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=2),
                      min_size=1, max_size=3)


def shift_cost_oracle(U, V):
    """Least e with V inside U(e) and U inside V(e), by trying e = 0, 1, ..."""
    for e in range(64):
        if all(tuple(a + e for a in v) in U for v in V.generators) and \
                all(tuple(a + e for a in u) in V for u in U.generators):
            return e
    raise AssertionError("no finite shift")


@given(upset_gens, upset_gens)
def test_upset_bottleneck_matches_enumeration(ga, gb):
    g = Grid((30, 30), margin=10)
    gb = (gb * 3)[: len(ga)]
    Us = [UpsetShape.from_points(x, g) for x in ga]
    Vs = [UpsetShape.from_points(x, g) for x in gb]
    best = min(max(shift_cost_oracle(Us[i], Vs[s[i]]) for i in range(len(Us)))
               for s in itertools.permutations(range(len(Vs))))
    via_ci, m1 = bottleneck_upset(Us, Vs)
    direct, m2 = bottleneck_upset(Us, Vs, ci_predicate=False)
    assert via_ci == direct == best
    assert all(upset_pair_cost(Us[i], Vs[j]) <= best for i, j in m1)


def test_upset_bottleneck_from_modules():
    g = Grid((20, 20), margin=6)
    M = direct_sum([upset_module(UpsetShape(((2, 5),), g)), upset_module(UpsetShape(((5, 2),), g))])[0]
    N = direct_sum([upset_module(UpsetShape(((3, 5),), g)), upset_module(UpsetShape(((5, 4),), g))])[0]
    assert bottleneck_upset(M, N)[0] == 2


def test_upset_bottleneck_unequal_counts():
    g = Grid((10, 10), margin=3)
    with pytest.raises(NoFiniteMatching):
        bottleneck_upset([UpsetShape(((1, 1),), g)], [])


def test_bracket_from_interleaving():
    g = Grid((16,), margin=3)
    M, N = catalog.interval_1d(2, 10, g), catalog.interval_1d(3, 11, g)
    il = search_interleaving(M, N, 1)
    br = d_EN_bracket(M, N, known=il)
    assert br.lower == 1 and br.upper == 1
    assert "common_member" in br.witnesses


def test_bracket_rejects_fake_interleaving():
    g = Grid((16,), margin=3)
    M, N = catalog.interval_1d(2, 10, g), catalog.interval_1d(3, 11, g)
    il = search_interleaving(M, N, 1)
    il.phi = il.phi.scale(0)
    with pytest.raises(NotAnInterleaving):
        d_EN_bracket(M, N, known=il)


def test_bracket_of_equal_modules():
    M = module([(1, 6)])
    assert d_EN_bracket(M, M).upper == 0


def test_interleaving_search_on_bars():
    g = Grid((20,), margin=4)
    M, N = catalog.interval_1d(4, 14, g), catalog.interval_1d(6, 12, g)
    assert search_interleaving(M, N, 1) is None
    il = search_interleaving(M, N, 2)
    assert il is not None
