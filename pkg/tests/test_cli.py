import json
from itertools import permutations
from pathlib import Path

import pytest
from click.testing import CliRunner

from persprune.ciproblems import CIProblem
from persprune.cli import main
from persprune.fileio import load_module, serialize_module
from persprune.grid import Grid
from persprune.catalog import interval_1d

FIX = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)


def test_validate(runner):
    res = invoke(runner, "validate", FIX / "glued_rectangles_e1.mod")
    assert res.exit_code == 0 and "supdim 2" in res.output


def test_missing_file_exit_2(runner):
    assert invoke(runner, "validate", "nope.mod").exit_code == 2


def test_corrupted_file_exit_2(runner, tmp_path):
    bad = tmp_path / "bad.mod"
    bad.write_text("persmod 1\ngrid 3\ndim 0 = 1\nfrobnicate\n")
    res = invoke(runner, "validate", bad)
    assert res.exit_code == 2 and "line 4" in res.output


def test_prune_writes_module_and_stats(runner, tmp_path):
    out = tmp_path / "p.mod"
    res = invoke(runner, "prune", "--epsilon", 1, FIX / "glued_rectangles_e1.mod", "--out", out)
    assert res.exit_code == 0
    stats = json.loads(res.output)
    assert stats["barcode_multiplicities"] == [2]
    assert load_module(out).dim((30, 30)) == 2


def test_decompose_table(runner):
    res = invoke(runner, "decompose", FIX / "square_pair.mod")
    assert res.exit_code == 0 and "yes" in res.output


def test_erode_and_hom(runner, tmp_path):
    g = Grid((12,), margin=2)
    a = tmp_path / "a.mod"
    a.write_text(serialize_module(interval_1d(2, 9, g)))
    res = invoke(runner, "erode", "--epsilon", 2, a)
    assert res.exit_code == 0 and "dim 4 = 1" in res.output and "dim 3 = 1" not in res.output
    res = invoke(runner, "hom", a, a, "--shift", 1)
    assert res.exit_code == 0


def test_en_check_exit_codes(runner, tmp_path):
    g = Grid((10,))
    m, n, bad = tmp_path / "m.mod", tmp_path / "n.mod", tmp_path / "bad.mod"
    m.write_text(serialize_module(interval_1d(1, 8, g, p=2)))
    n.write_text(serialize_module(interval_1d(2, 7, g, p=2)))
    bad.write_text(serialize_module(interval_1d(5, 7, g, p=2)))
    assert invoke(runner, "en-check", n, m, "--epsilon", 1).exit_code == 0
    assert invoke(runner, "en-check", bad, m, "--epsilon", 1).exit_code == 1


def test_ci_commands(runner, tmp_path):
    pat = FIX / "ci_no_simple.pat"
    assert "simple: False" in invoke(runner, "ci", "solve", pat).output
    assert invoke(runner, "ci", "match", pat).output.strip() == "none"
    pairs = invoke(runner, "ci", "match", "-c", 3, pat).output.split()
    assert sorted(x.split("-")[1] for x in pairs) == ["v1", "v2", "v3"]
    assert invoke(runner, "ci", "weaken", "-c", 2, pat).exit_code != 0
    res = invoke(runner, "ci", "to-upsets", "-C", 4, FIX / "ci_two.pat", "--out", tmp_path)
    assert res.exit_code == 0 and "u2: 2 0 3 1" in res.output
    res = invoke(runner, "ci", "from-upsets", tmp_path / "first.mod", tmp_path / "second.mod", "--epsilon", 1)
    assert res.exit_code == 0
    # summands come back in canonical order, so compare up to relabeling
    rows = res.output.splitlines()[1:]
    got = CIProblem.from_strings(rows[:2], rows[2:])
    want = CIProblem.from_strings(["*0", "**"], ["*0", "0*"])
    assert any(relabel(want, su, sv) == got for su in permutations(range(2)) for sv in permutations(range(2)))


def relabel(prob, su, sv):
    n = prob.n
    P = [[prob.P[sv[j]][su[i]] for i in range(n)] for j in range(n)]
    Q = [[prob.Q[su[i]][sv[j]] for j in range(n)] for i in range(n)]
    return CIProblem(P, Q)


def test_distance_kinds(runner):
    m, n = FIX / "bars_short_c3_M.mod", FIX / "bars_short_c3_N.mod"
    assert json.loads(invoke(runner, "distance", "--kind", "dE", m, n).output)["value"] == 2
    res = invoke(runner, "distance", "--kind", "dEN-bracket", m, n)
    assert json.loads(res.output)["lower"] == 2


def test_render_is_deterministic(runner, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    invoke(runner, "render", FIX / "cornered_square.mod", "--out", a)
    invoke(runner, "render", FIX / "cornered_square.mod", "--out", b)
    assert a.read_text() == b.read_text() and a.read_text().startswith("<?xml")


def test_bad_caps(runner):
    assert invoke(runner, "--caps", "nonsense=3", "validate", FIX / "square_pair.mod").exit_code == 2


def test_verify_paper_exit_codes(runner):
    res = invoke(runner, "verify-paper", "--only", "AC08", "--only", "AC11")
    assert res.exit_code == 0
    assert "AC08 CI example without simple solution: PASS" in res.output
    assert "known gap" in res.output
    assert invoke(runner, "verify-paper", "--only", "AC11", "--strict").exit_code == 1


def test_output_independent_of_hash_seed():
    import os
    import subprocess
    import sys

    cmd = [sys.executable, "-m", "persprune.cli", "ci", "match", "-c", "3", str(FIX / "ci_no_simple.pat")]
    outs = {subprocess.run(cmd, env={**os.environ, "PYTHONHASHSEED": str(s)}, capture_output=True,
                           text=True, check=True).stdout for s in (1, 2, 3)}
    assert len(outs) == 1


def test_library_errors_exit_2(runner):
    # the bars start 5 steps from the origin, too close for a 2 * 3 transition
    m, n = FIX / "bars_short_c3_M.mod", FIX / "bars_short_c3_N.mod"
    res = invoke(runner, "en-common", m, n, "--epsilon", 3)
    assert res.exit_code == 2 and "MarginTooSmall" in res.output
