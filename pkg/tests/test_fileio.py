import numpy as np
import pytest
from hypothesis import given, strategies as st

from persprune.errors import CommutativityViolation, ParseError
from persprune.fileio import load_module, parse_module, parse_pattern, save_module, serialize_module, serialize_pattern
from persprune.generate import random_module

GOOD = """persmod 1
grid 3 3
field 5
margin 0
dim 0 0 = 1
dim 1 0 = 1
dim 0 1 = 1
dim 1 1 = 1
map 0 0 axis 0 = 1
map 0 0 axis 1 = 1
map 1 0 axis 1 = 1
map 0 1 axis 0 = 1
"""


@given(st.integers(0, 2**32 - 1))
def test_round_trip(seed):
    M = random_module(np.random.default_rng(seed), sizes=(5, 5), count=3, glue=1)
    assert parse_module(serialize_module(M)) == M


def test_save_and_load(tmp_path):
    M = parse_module(GOOD)
    save_module(M, tmp_path / "m.mod", ["a square"])
    assert "# a square" in (tmp_path / "m.mod").read_text()
    assert load_module(tmp_path / "m.mod") == M


def test_shape_lines():
    M = parse_module("persmod 1\ngrid 6 6\nfield 2\nshape 1,1 minus 3,3\nshape 2,0\n")
    assert M.dim((1, 1)) == 1 and M.dim((3, 3)) == 1 and M.dim((2, 2)) == 2


def test_corrupted_map_breaks_commutativity():
    with pytest.raises(CommutativityViolation):
        parse_module(GOOD.replace("map 0 1 axis 0 = 1", "map 0 1 axis 0 = 2"))


@pytest.mark.parametrize("text, line", [
    ("grid 3 3\n", 1),
    ("persmod 9\ngrid 3\n", 1),
    ("persmod 1\ndim 0 = 1\n", 2),
    ("persmod 1\ngrid 3\nmap 0 axis 4 = 1\n", 3),
    ("persmod 1\ngrid 3\nbogus 1\n", 3),
    ("persmod 1\ngrid 3 3\nmap 0 0 axis 0 = 1 0 ; 1\n", 3),
])
def test_parse_errors_carry_position(text, line):
    with pytest.raises(ParseError) as exc:
        parse_module(text)
    assert exc.value.line == line


def test_shape_mismatch_reported():
    with pytest.raises(ParseError):
        parse_module("persmod 1\ngrid 3\ndim 0 = 1\ndim 1 = 1\nmap 0 axis 0 = 1 1\n")


def test_pattern_round_trip_and_errors():
    P = [[True, False], [True, True]]
    Q = [[True, False], [False, True]]
    assert parse_pattern(serialize_pattern(P, Q)) == (P, Q)
    with pytest.raises(ParseError):
        parse_pattern("2\n*0\n**\n*0\n")
    with pytest.raises(ParseError):
        parse_pattern("2\n*0\n*x\n*0\n0*\n")
