import pytest
from hypothesis import given, strategies as st

from persprune.errors import ConvexityViolation, DisconnectedParts, MarginTooSmall
from persprune.grid import (
    OUTSIDE,
    Grid,
    UpsetShape,
    contains_shifted,
    interval_from_parts,
    leq,
    minimal_elements,
    rectangle,
    shift_point,
    validate_interval,
)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(())
    with pytest.raises(ValueError):
        Grid((3,), margin=-1)
    g = Grid((4, 5), margin=1)
    assert g.d == 2 and g.in_top_band((3, 0)) and not g.in_top_band((2, 3))


def test_shift_leaves_grid():
    g = Grid((5, 5))
    assert shift_point((1, 1), 2, g) == (3, 3)
    assert shift_point((4, 1), 1, g) is OUTSIDE
    assert shift_point(OUTSIDE, -3, g) is OUTSIDE


def test_rectangle_is_half_open():
    g = Grid((6, 6))
    R = rectangle((1, 2), (3, 5), g)
    assert len(R) == 2 * 3 and (2, 4) in R and (3, 4) not in R


def test_nonconvex_set_rejected():
    g = Grid((4, 4))
    ring = {(i, j) for i in range(3) for j in range(3)} - {(1, 1)}
    with pytest.raises(ConvexityViolation):
        validate_interval(ring, g)


def test_disconnected_set_rejected():
    g = Grid((6, 6))
    with pytest.raises(DisconnectedParts):
        validate_interval({(0, 3), (3, 0)}, g)


def test_l_shape_parts():
    g = Grid((6, 6))
    I = interval_from_parts([(1, 1)], [(3, 3)], g)
    assert I.up_part().generators == ((1, 1),)
    assert I.e_part().generators == ((3, 3),)
    assert I.minimum() == (1, 1)


def test_upset_antichain_enforced():
    with pytest.raises(ValueError):
        UpsetShape(((0, 0), (1, 1)))


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=8))
def test_minimal_elements_generate_same_upset(pts):
    mins = minimal_elements(pts)
    for p in pts:
        assert any(leq(m, p) for m in mins)
    for a in mins:
        assert not any(leq(b, a) and a != b for b in mins)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_shifted_containment(a, b, eps):
    g = Grid((12, 12), margin=4)
    U = UpsetShape(((a, b),), g)
    assert contains_shifted(U, U, eps, g)


def test_shifted_containment_needs_margin():
    g = Grid((6, 6), margin=0)
    U = UpsetShape(((5, 5),), g)
    with pytest.raises(MarginTooSmall):
        contains_shifted(U, U, 2, g)
