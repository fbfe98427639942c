import numpy as np
import pytest
from hypothesis import given, strategies as st

from persprune.catalog import box_module, interval_1d
from persprune.errors import CommutativityViolation, MarginTooSmall, NaturalityViolation
from persprune.generate import random_module
from persprune.grid import Grid
from persprune.oracles import hom_count_bruteforce
from persprune.permod import (
    Morphism,
    PersistenceModule,
    are_isomorphic,
    direct_sum,
    full_submodule,
    generated_submodule,
    hom_basis,
    hom_basis_dense,
    identity_morphism,
    image,
    kernel,
    random_change_of_basis,
    shift_module,
    sub_intersect,
    sub_sum,
    subquotient,
    transition,
)

seeds = st.integers(0, 2**32 - 1)


def small(seed, p=32003, sizes=(5, 5), count=2, glue=1):
    return random_module(np.random.default_rng(seed), sizes=sizes, count=count, p=p, glue=glue)


def test_noncommuting_square_rejected():
    g = Grid((2, 2))
    dims = {x: 1 for x in [(0, 0), (1, 0), (0, 1), (1, 1)]}
    maps = {((0, 0), 0): [[1]], ((0, 0), 1): [[1]], ((1, 0), 1): [[1]], ((0, 1), 0): [[2]]}
    with pytest.raises(CommutativityViolation):
        PersistenceModule(g, dims, maps, 5)


def test_shift_refuses_to_drop_support():
    g = Grid((6,))
    M = interval_1d(0, 3, g)
    with pytest.raises(MarginTooSmall):
        shift_module(M, 1)
    assert sorted(shift_module(M, -2).dims) == [(2,), (3,), (4,)]


def test_non_natural_map_rejected():
    g = Grid((4,))
    M = interval_1d(0, 3, g)
    with pytest.raises(NaturalityViolation):
        Morphism(M, M, {(0,): [[1]], (1,): [[2]], (2,): [[2]]})


@given(seeds, seeds)
def test_hom_basis_matches_dense_route(s1, s2):
    M, N = small(s1), small(s2)
    fast = hom_basis(M, N)
    dense = hom_basis_dense(M, N)
    assert len(fast) == len(dense)
    assert all(f.comps.keys() == g.comps.keys() and all(np.array_equal(f.at(x), g.at(x)) for x in f.comps)
               for f, g in zip(fast, dense))


@given(seeds, seeds)
def test_hom_dimension_matches_enumeration_over_gf2(s1, s2):
    M = small(s1, p=2, sizes=(3, 3), count=2)
    N = small(s2, p=2, sizes=(3, 3), count=2)
    pts = [x for x in M.dims if N.dim(x)]
    if sum(M.dim(x) * N.dim(x) for x in pts) > 12:
        return
    assert hom_count_bruteforce(M, N) == 2 ** len(hom_basis(M, N))


def test_hom_between_bars():
    g = Grid((10,))
    # [a, b) -> [c, d) is nonzero iff c <= a < d <= b
    assert len(hom_basis(interval_1d(2, 6, g), interval_1d(1, 4, g))) == 1
    assert len(hom_basis(interval_1d(1, 4, g), interval_1d(2, 6, g))) == 0
    assert len(hom_basis(interval_1d(2, 6, g), interval_1d(7, 9, g))) == 0


@given(seeds)
def test_hom_basis_is_natural(s):
    M = small(s)
    for f in hom_basis(M, M):
        f.check_naturality()


@given(seeds)
def test_change_of_basis_is_isomorphism(s):
    M = small(s)
    C, iso = random_change_of_basis(M, np.random.default_rng(s))
    iso.check_naturality()
    assert iso.is_iso() and are_isomorphic(M, C)


def test_direct_sum_witnesses():
    g = Grid((6, 6))
    A, B = box_module((0, 0), (3, 3), g), box_module((1, 1), (5, 4), g)
    S, incs, projs = direct_sum([A, B])
    assert S.dim((2, 2)) == 2 and S.dim((4, 1)) == 1
    assert projs[0].compose(incs[0]) == identity_morphism(A)
    assert projs[1].compose(incs[0]).is_zero()


def test_image_kernel_and_quotient_of_transition():
    g = Grid((10,), margin=3)
    # the 2-step transition of a bar needs room two steps below its start
    M = interval_1d(3, 8, g)
    T = transition(M, 0, 2)
    assert sorted(image(T).dims) == [(x,) for x in range(3, 6)]
    assert sorted(kernel(T).dims) == [(6,), (7,)]
    Q = subquotient(full_submodule(M), kernel(T))
    assert sorted(Q.dims) == [(x,) for x in range(3, 6)]


@given(seeds)
def test_submodule_lattice(s):
    M = small(s, glue=0, count=3)
    pts = sorted(M.dims)
    rng = np.random.default_rng(s)
    gens = [(pts[int(rng.integers(len(pts)))], rng.integers(0, M.p, size=None)) for _ in range(2)]
    A = generated_submodule(M, [(x, [int(v) % M.p] * M.dim(x)) for x, v in gens[:1]])
    B = generated_submodule(M, [(x, [int(v) % M.p] * M.dim(x)) for x, v in gens[1:]])
    S, I = sub_sum(A, B), sub_intersect(A, B)
    for x in M.dims:
        assert S.dim(x) + I.dim(x) == A.dim(x) + B.dim(x)
    assert I <= A <= S and I <= B <= S
    S.check_closure()
    I.check_closure()
