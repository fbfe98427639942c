import numpy as np
import pytest
from hypothesis import given, strategies as st

from persprune import catalog
from persprune import exactlin as el
from persprune.decomp import interval_support
from persprune.errors import CapExceeded
from persprune.grid import Grid
from persprune.oracles import (
    all_subspaces,
    en_membership_bruteforce,
    preimage_bruteforce,
    subquotient_bruteforce,
)


def test_subspace_counts():
    # Gaussian binomials: GF(2)^3 has 1 + 7 + 7 + 1 subspaces, GF(3)^2 has 1 + 4 + 1
    assert len(all_subspaces(3, 2)) == 16
    assert len(all_subspaces(2, 3)) == 6


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_preimage_dimension(seed, p):
    rng = np.random.default_rng(seed)
    A = el.random_matrix(rng, 3, 3, p)
    W = el.random_matrix(rng, 3, 1, p)
    assert preimage_bruteforce(A, W, p) == el.preimage(A, W, p).shape[1]


def test_caps():
    g = Grid((20, 20))
    big = catalog.box_module((0, 0), (10, 10), g, 2)
    with pytest.raises(CapExceeded):
        en_membership_bruteforce(big, big, 1)
    small = catalog.box_module((0, 0), (2, 2), g, 2)
    assert en_membership_bruteforce(small, small, 0, caps=(4, 4))


def test_subquotient_of_bar():
    g = Grid((8,))
    M = catalog.interval_1d(1, 7, g, p=2)
    assert subquotient_bruteforce(catalog.interval_1d(2, 5, g, p=2), M)
    assert not subquotient_bruteforce(catalog.interval_1d(0, 3, g, p=2), M)


def test_cornered_square_shape():
    N = catalog.cornered_square()
    assert N.dim((15, 15)) == 2 and N.dim((29, 29)) == 1 and N.dim((9, 9)) == 0
    assert N.dim((8, 20)) == 1 and N.dim((20, 8)) == 1


def test_neck_parts_are_intervals():
    M, N, Q, parts = catalog.neck_modules()
    assert all(interval_support(P) is not None for P in parts.values())
    assert M.supdim == 1 and N.supdim == 1


def test_two_leg_pair():
    M, N = catalog.two_leg_quotient_pair(1)
    assert interval_support(M) is not None
    assert N.supdim == 2


@pytest.mark.parametrize("kind", ["short", "swap"])
def test_bar_family_counts(kind):
    M, N, Mp, Np = catalog.bar_family(3, kind)
    assert len(Mp) == (2 if kind == "short" else 4)
    assert len(Np) == 3
    with pytest.raises(ValueError):
        catalog.bar_family(3, "other")
