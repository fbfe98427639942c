"""Regenerate the files under fixtures/ from the catalog builders."""

from __future__ import annotations

import sys
from pathlib import Path

from persprune.ciproblems import CIProblem, example_problem
from persprune.fileio import serialize_module, serialize_pattern

OUT = Path(__file__).resolve().parent.parent / "fixtures"

NOTES = {
    "square_pair": [
        "two copies of the square [0.8, 3.0)^2, coordinates x10",
    ],
    "cornered_square": [
        "legs [0.8,3.0)x[1.0,3.0) and [1.0,3.0)x[0.8,3.0) feed a 2-dim core that",
        "collapses by the row (1 1) on the corner [2.8,3.0)^2; coordinates x10",
    ],
    "neck_M": [
        "top-left square joined to the middle square by thin necks, plus the",
        "bottom-right square; unit 20, offset 2, top band 6",
    ],
    "neck_N": ["top-left square, plus the middle and bottom-right squares joined by necks"],
    "neck_Q": ["the three squares of the neck modules without necks"],
    "two_leg_M": ["thin module on <(2,0)> u <(0,2)>, offset 6, cut at 10 + offset"],
    "two_leg_N": [
        "(1,0) at (3,1) and (0,1) at (1,3) generate inside M(-1) + M(-1);",
        "(1,1) at (4,4) generates the part divided out; offset 6",
    ],
    "glued_rectangles_e1": [
        "rectangles [1,3)x[1-2e,3) and [1-2e,3)x[1,3) with e = 0.1, glued along the",
        "diagonal of the corner [3-2e,3)^2; coordinates x10 plus offset 10",
        "its 1-pruning is two copies of [1.1,2.9)^2 minus [2.7,2.9)^2, on the grid",
        "two copies of [21,39)^2 minus [37,39)^2",
    ],
    "glued_rectangles_e2": ["as glued_rectangles_e1 with e = 0.2"],
    "bars_short_c3_M": ["bars [-i, 6+i) for i = 1, 2, shifted by 8"],
    "bars_short_c3_N": ["the bars of bars_short_c3_M plus [-3, 3), shifted by 8"],
}


def main() -> int:
    from persprune.acceptance import corpus

    OUT.mkdir(exist_ok=True)
    for name, M in corpus().items():
        (OUT / f"{name}.mod").write_text(serialize_module(M, NOTES.get(name)))
    ex = example_problem()
    (OUT / "ci_no_simple.pat").write_text(
        "# size-3 problem with a solution over every field but no simple solution\n"
        "# bidirectional edges: u1-v1 u1-v2 u1-v3 u2-v1 u3-v1, so u2 and u3 compete for v1\n"
        "# 3-weakening: u2 -> v1 -> u1 -> v2 and v2 -> u2; u3 -> v1 -> u1 -> v3 and v3 -> u3\n"
        "# so the diagonal u1-v1 u2-v2 u3-v3 is a simple solution of the 3-weakening\n"
        + serialize_pattern(ex.P, ex.Q)
    )
    small = CIProblem.from_strings(["*0", "**"], ["*0", "0*"])
    (OUT / "ci_two.pat").write_text(
        "# size-2 problem; with C = 4 the distance vectors are\n"
        "# u1 0 8 1 8, u2 2 0 3 1, v1 1 8 0 8, v2 1 1 2 0\n"
        + serialize_pattern(small.P, small.Q)
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
