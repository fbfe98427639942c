import numpy as np
import pytest
import xml.etree.ElementTree as ET

from persprune import catalog
from persprune.generate import random_module
from persprune.grid import Grid
from persprune.permod import random_change_of_basis
from persprune.render import SHADES, render_svg


def test_valid_svg_with_title():
    M = catalog.cornered_square()
    root = ET.fromstring(render_svg(M, title="a < b"))
    assert root.tag.endswith("svg")
    assert SHADES[2] in render_svg(M)


def test_depends_only_on_dimensions():
    rng = np.random.default_rng(0)
    M = random_module(rng, sizes=(6, 6), count=3)
    C, _ = random_change_of_basis(M, rng)
    assert render_svg(M) == render_svg(C)


def test_one_parameter_and_margin():
    g = Grid((10,), margin=2)
    svg = render_svg(catalog.interval_1d(2, 6, g), show_grid=True)
    assert svg.count("<title>") == 4
    assert "#f4f4f4" in svg


def test_three_parameters_rejected():
    g = Grid((2, 2, 2))
    with pytest.raises(ValueError):
        render_svg(catalog.box_module((0, 0, 0), (1, 1, 1), g))
