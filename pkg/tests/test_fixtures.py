"""The files under fixtures/ agree with the builders they were written from."""

from pathlib import Path

import pytest

from persprune.acceptance import corpus
from persprune.ciproblems import CIProblem, example_problem
from persprune.fileio import load_module, parse_pattern

FIX = Path(__file__).resolve().parent.parent / "fixtures"
CORPUS = corpus()


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_module_fixture_matches_builder(name):
    text = (FIX / f"{name}.mod").read_text()
    assert text.splitlines()[1].startswith("#"), "fixtures describe their construction"
    assert load_module(FIX / f"{name}.mod") == CORPUS[name]


def test_pattern_fixtures():
    P, Q = parse_pattern((FIX / "ci_no_simple.pat").read_text())
    assert CIProblem(P, Q) == example_problem()
    P, Q = parse_pattern((FIX / "ci_two.pat").read_text())
    assert CIProblem(P, Q) == CIProblem.from_strings(["*0", "**"], ["*0", "0*"])
