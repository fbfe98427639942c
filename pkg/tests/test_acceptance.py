"""One test per acceptance criterion, plus the facts that replace the known gaps.

Each criterion prints a single PASS/FAIL line; the lines are collected again
in the terminal summary.  Criteria whose stated target cannot hold for the
construction as given are strict xfails, so an unexpected pass is reported.
"""

import pytest

from persprune import catalog
from persprune.acceptance import (
    CHECKS,
    bar_family_erosion_distances,
    check_cornered_square_supplement,
    check_family_hom_supplement,
    run_check,
)
from persprune.distances import bottleneck_1d

KNOWN_GAPS = {
    "AC04": "the square pair and the cornered square admit no 1-interleaving, and the "
            "1-pruning of the square pair is not a 3-refinement of the cornered square",
    "AC10": "nonzero maps between the family's intervals exist for every j <= i + 1, not only j in {i, i+1}",
    "AC11": "the erosion distance of the nested bar family grows with c, it is not bounded by 1",
}


def _param(key, title, gap):
    marks = [pytest.mark.xfail(strict=True, reason=KNOWN_GAPS[key])] if gap else []
    return pytest.param(key, id=f"{key} {title}", marks=marks)


@pytest.mark.parametrize("key", [_param(k, t, g) for k, t, _, g in CHECKS])
def test_criterion(key, record_acceptance):
    res = run_check(key)
    print(res.line())
    record_acceptance(res.line())
    assert res.passed, res.detail


# -- the parts of the known-gap criteria that do hold ---------------------------

@pytest.fixture(scope="module")
def cornered():
    return run_check("AC04").parts


def test_cornered_parts_that_hold(cornered):
    assert cornered["erosion5_indecomposable"]
    assert cornered["pruning_two_summands"]
    assert cornered["refines_M"]


def test_cornered_supplement():
    parts = check_cornered_square_supplement()
    assert all(parts.values()), parts


def test_endomorphism_parts_that_hold():
    parts = run_check("AC10").parts
    assert parts["random_endomorphisms"]
    assert parts["family_supdim"]
    assert parts["family_interleaved"]


def test_family_hom_pattern_is_lower_triangle_plus_one():
    parts = check_family_hom_supplement()
    assert all(parts.values()), parts


def test_bar_family_bottleneck_holds():
    for c in (2, 3, 4, 5):
        M, N, _, _ = catalog.bar_family(c, "short")
        assert bottleneck_1d(M, N)[0] == c


def test_bar_family_erosion_distance_values():
    # frozen from the independent one-parameter computation in test_distances
    assert bar_family_erosion_distances() == {2: 2, 3: 2, 4: 3, 5: 3}
