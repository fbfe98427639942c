import numpy as np
import pytest
from hypothesis import given, strategies as st

from persprune.catalog import box_module, interval_1d
from persprune.erode import (
    ENWitness,
    check_en_witness,
    check_interleaving,
    common_en_from_interleaving,
    erosion,
    erosion_dim,
    erosion_morphism,
    erosion_witness,
    member_interleaving,
)
from persprune.errors import ENViolation
from persprune.generate import random_module
from persprune.grid import Grid
from persprune.permod import direct_sum, hom_basis, shift_module, zero_submodule

seeds = st.integers(0, 2**32 - 1)


def eroded_set(pts, eps):
    """Points x with x - eps and x + eps both in the set."""
    pts = set(pts)
    return {x for x in pts if tuple(a - eps for a in x) in pts and tuple(a + eps for a in x) in pts}


@given(st.integers(0, 10), st.integers(1, 12), st.integers(0, 7))
def test_bar_erosion(a, length, eps):
    g = Grid((24,))
    M = interval_1d(a, a + length, g)
    assert set(erosion(M, eps).dims) == eroded_set(M.dims, eps)


@given(st.tuples(st.integers(0, 5), st.integers(0, 5)), st.tuples(st.integers(1, 8), st.integers(1, 8)),
       st.integers(0, 4))
def test_box_erosion(lo, size, eps):
    g = Grid((14, 14))
    M = box_module(lo, tuple(a + s for a, s in zip(lo, size)), g)
    E = erosion(M, eps)
    assert set(E.dims) == eroded_set(M.dims, eps)
    assert all(n == 1 for n in E.dims.values())


@given(seeds, st.integers(1, 2))
def test_erosion_dims_are_ranks(s, eps):
    M = random_module(np.random.default_rng(s), sizes=(8, 8), count=3, low=eps, margin=eps)
    E = erosion(M, eps)
    assert E.dims == {x: n for x in M.dims if (n := erosion_dim(M, eps, x))}


@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_erosion_composes(s, a, b):
    M = random_module(np.random.default_rng(s), sizes=(9, 9), count=3)
    assert erosion(erosion(M, a), b).dims == erosion(M, a + b).dims


@given(seeds)
def test_erosion_of_identity_is_identity(s):
    M = random_module(np.random.default_rng(s), sizes=(7, 7), count=2)
    f = hom_basis(M, M)[0]
    Ef = erosion_morphism(f, 1)
    Ef.check_naturality()


def test_erosion_witness_gives_the_erosion():
    g = Grid((12, 12), margin=2)
    M = direct_sum([box_module((2, 2), (8, 8), g), box_module((3, 1), (9, 6), g)])[0]
    assert check_en_witness(erosion_witness(M, 2)).dims == erosion(M, 2).dims


def test_witness_below_image_rejected():
    g = Grid((12,))
    M = interval_1d(2, 8, g)
    with pytest.raises(ENViolation):
        check_en_witness(ENWitness(M, zero_submodule(M), zero_submodule(M), 1))


@given(seeds, st.integers(1, 2))
def test_member_is_interleaved_with_ambient(s, eps):
    M = random_module(np.random.default_rng(s), sizes=(6 + 2 * eps, 6 + 2 * eps), count=2,
                      low=2 * eps, margin=eps)
    Q, phi, psi = member_interleaving(erosion_witness(M, eps))
    assert check_interleaving(Q, M, phi, psi, eps)
    cm = common_en_from_interleaving(Q, M, phi, psi, eps)
    assert cm.iso.is_iso() and cm.preimages_agree


def test_interleaving_check_rejects_zero_maps():
    g = Grid((12,), margin=2)
    M = interval_1d(2, 8, g)
    Me = shift_module(M, 1)
    assert check_interleaving(M, M, hom_basis(M, Me)[0], hom_basis(M, Me)[0], 1)
    zero = hom_basis(M, Me)[0].scale(0)
    assert not check_interleaving(M, M, zero, zero, 1)
