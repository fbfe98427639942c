import numpy as np
import pytest
from hypothesis import given, strategies as st

from persprune import catalog
from persprune.decomp import decompose, interval_support
from persprune.generate import random_module
from persprune.grid import Grid
from persprune.permod import are_isomorphic, direct_sum, full_submodule
from persprune.prune import pruning, pruning_pair, pruning_properties

seeds = st.integers(0, 2**32 - 1)


def test_zero_eps_is_identity():
    M = catalog.square_pair()
    pair = pruning_pair(M, 0)
    assert pair.I == full_submodule(M) and pair.K.is_zero()
    assert pruning(M, 0, pair) == M


def test_negative_eps_rejected():
    with pytest.raises(ValueError):
        pruning_pair(catalog.square_pair(), -1)


@given(seeds, st.integers(1, 2))
def test_pair_properties_on_random_modules(s, eps):
    M = random_module(np.random.default_rng(s), sizes=(7 + 4 * eps, 7 + 4 * eps), count=3,
                      low=2 * eps, margin=eps, glue=2)
    props = pruning_properties(pruning_pair(M, eps))
    assert all(props.values()), props


@pytest.mark.parametrize("eps", [1, 2])
def test_glued_rectangles_prune_to_two_l_shapes(eps):
    M, L = catalog.glued_rectangles(eps)
    P = pruning(M, eps)
    parts = decompose(P).parts
    assert len(parts) == 2
    assert all(are_isomorphic(part, L) for part in parts)


def test_glued_rectangles_pruning_on_grid():
    # frozen: rectangles at scale 10 plus offset 10 leave [21,39)^2 minus [37,39)^2, twice
    M, _ = catalog.glued_rectangles(1)
    P = pruning(M, 1)
    expected = {(i, j): 2 for i in range(21, 39) for j in range(21, 39) if not (i >= 37 and j >= 37)}
    assert P.dims == expected


def test_interval_module_prunes_to_its_erosion_support():
    g = Grid((16, 16), margin=2)
    M = catalog.box_module((4, 4), (12, 12), g)
    P = pruning(M, 1)
    assert interval_support(P) is not None
    assert set(P.dims) == {(i, j) for i in range(5, 11) for j in range(5, 11)}


def test_pruning_is_additive_without_cross_maps():
    g = Grid((24, 24), margin=2)
    A = catalog.box_module((2, 12), (8, 20), g)
    B = catalog.box_module((12, 2), (20, 8), g)
    S = direct_sum([A, B])[0]
    assert pruning(S, 1).dims == direct_sum([pruning(A, 1), pruning(B, 1)])[0].dims


def test_pruning_is_not_additive_with_cross_maps():
    # cross maps between the boxes change the fixed point
    g = Grid((16, 16), margin=2)
    A = catalog.box_module((4, 4), (12, 12), g)
    B = catalog.box_module((3, 5), (10, 13), g)
    S = direct_sum([A, B])[0]
    assert pruning(S, 1).dims != direct_sum([pruning(A, 1), pruning(B, 1)])[0].dims


def test_steps_within_supdim():
    M, _ = catalog.glued_rectangles(1)
    pair = pruning_pair(M, 1)
    assert pair.steps <= M.supdim
