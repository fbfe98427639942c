import pytest

from persprune import Decomposer, Eroder, Pruner, catalog, erosion, pruning
from persprune.grid import Grid


@pytest.fixture(scope="module")
def glued():
    return catalog.glued_rectangles(1)[0]


def test_params_round_trip():
    e = Eroder(epsilon=2)
    assert e.get_params() == {"epsilon": 2}
    assert e.set_params(epsilon=3).epsilon == 3
    assert repr(e) == "Eroder(epsilon=3)"
    with pytest.raises(ValueError):
        e.set_params(sigma=1)


def test_eroder_matches_function(glued):
    assert Eroder(2).fit_transform(glued) == erosion(glued, 2)


@pytest.mark.parametrize("eps", [-1, 1.5, True])
def test_bad_epsilon(glued, eps):
    with pytest.raises(ValueError):
        Eroder(eps).fit(glued)


def test_unfitted_and_wrong_input(glued):
    with pytest.raises(RuntimeError):
        Pruner(1).transform(glued)
    with pytest.raises(TypeError):
        Eroder(1).fit("not a module")


def test_pruner_keeps_pair(glued):
    pr = Pruner(1).fit(glued)
    assert pr.steps_ == pr.pair_.steps
    assert pr.transform(glued) == pruning(glued, 1)
    other = catalog.box_module((2, 2), (5, 5), Grid(glued.grid.sizes))
    with pytest.raises(ValueError):
        pr.transform(other)


def test_decomposer(glued):
    P = Pruner(1).fit_transform(glued)
    dec = Decomposer(seed=3).fit(P)
    assert dec.n_summands_ == 2 and dec.barcode_.multiplicities() == [2]
    assert len(dec.transform(P)) == 2
    single = catalog.box_module((2, 2), (5, 5), Grid(glued.grid.sizes))
    assert len(dec.transform(single)) == 1
