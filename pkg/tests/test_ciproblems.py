import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from persprune import catalog
from persprune.ciproblems import (
    CIProblem,
    benign_block_ci,
    ci_from_upsets,
    distance_vectors,
    example_problem,
    example_solution,
    permutation_solution,
    random_problem,
    simple_solution,
    solve,
    upsets_from_ci,
    verify_solution,
    weaken,
)
from persprune.errors import CapExceeded, EvenC
from persprune.distances import search_interleaving
from persprune.grid import Grid
from persprune.permod import direct_sum


@st.composite
def problems(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    bits = draw(st.lists(st.booleans(), min_size=2 * n * n, max_size=2 * n * n))
    P = [bits[r * n:(r + 1) * n] for r in range(n)]
    Q = [bits[n * n + r * n: n * n + (r + 1) * n] for r in range(n)]
    return CIProblem(P, Q)


def has_solution_bruteforce(prob, p):
    """Enumerate every A, B supported on the stars; tiny problems only."""
    n = prob.n
    sp = [(j, i) for j in range(n) for i in range(n) if prob.P[j][i]]
    sq = [(i, j) for i in range(n) for j in range(n) if prob.Q[i][j]]
    for va in itertools.product(range(p), repeat=len(sp)):
        A = np.zeros((n, n), dtype=np.int64)
        for (j, i), v in zip(sp, va):
            A[j, i] = v
        for vb in itertools.product(range(p), repeat=len(sq)):
            B = np.zeros((n, n), dtype=np.int64)
            for (i, j), v in zip(sq, vb):
                B[i, j] = v
            if np.array_equal((A @ B) % p, np.eye(n, dtype=np.int64)):
                return True
    return False


def test_string_round_trip_and_edges():
    prob = example_problem()
    assert CIProblem.from_strings(*prob.to_strings()) == prob
    uv, vu = prob.edges()
    assert (1, 1) not in uv and (1, 0) in uv
    assert prob.star_count() == 14


def test_example_solution_over_several_fields():
    prob = example_problem()
    for p in (2, 3, 5, 7, 32003):
        assert verify_solution(prob, example_solution(p)) == (True, False)
    assert simple_solution(prob) is None


def test_example_weakenings():
    prob = example_problem()
    assert weaken(prob, 1) == prob
    assert simple_solution(weaken(prob, 3)) == [0, 1, 2]
    assert all(all(r) for r in weaken(prob, 3).P)


def test_even_c_rejected():
    with pytest.raises(EvenC):
        weaken(example_problem(), 2)
    with pytest.raises(ValueError):
        weaken(example_problem(), 0)


@given(problems())
def test_simple_solutions_are_solutions(prob):
    sigma = simple_solution(prob)
    if sigma is not None:
        assert sorted(sigma) == list(range(prob.n))
        assert verify_solution(prob, permutation_solution(sigma, 2)) == (True, True)


@given(problems(), st.sampled_from([1, 3, 5]))
def test_weakening_is_monotone(prob, c):
    lo, hi = weaken(prob, c), weaken(prob, c + 2)
    assert all(a <= b for ra, rb in zip(lo.P + lo.Q, hi.P + hi.Q) for a, b in zip(ra, rb))


@given(problems(), st.sampled_from([1, 3, 5]), st.sampled_from([1, 3]))
def test_weakenings_compose(prob, a, b):
    assert weaken(weaken(prob, a), b) == weaken(prob, a * b)


@given(problems(max_n=2), st.sampled_from([2, 3]))
def test_solve_agrees_with_enumeration(prob, p):
    sol = solve(prob, p)
    if sol is None:
        assert not has_solution_bruteforce(prob, p)
    else:
        assert verify_solution(prob, sol)[0]


@given(problems(max_n=3))
def test_solve_finds_valid_solutions(prob):
    if sum(map(sum, prob.P)) > 9:
        return
    sol = solve(prob, 2)
    if sol is not None:
        assert verify_solution(prob, sol)[0]
    if simple_solution(prob) is not None:
        assert sol is not None


def test_solve_caps():
    prob = CIProblem([[True] * 5] * 5, [[True] * 5] * 5)
    with pytest.raises(CapExceeded):
        solve(prob, 2)
    with pytest.raises(ValueError):
        solve(example_problem(), 5)


def test_solve_rejects_zero_row_quickly():
    prob = CIProblem.from_strings(["00", "**"], ["**", "**"])
    assert solve(prob, 2) is None


def test_two_vertex_distance_vectors():
    # hand BFS with C = 4, unreachable = 8
    prob = CIProblem.from_strings(["*0", "**"], ["*0", "0*"])
    w, z = distance_vectors(prob, 4)
    assert w == [(0, 8, 1, 8), (2, 0, 3, 1)]
    assert z == [(1, 8, 0, 8), (1, 1, 2, 0)]


@given(problems(max_n=3), st.sampled_from([1, 3, 5, 7]))
def test_upsets_reproduce_weakenings(prob, c):
    fam = upsets_from_ci(prob, 9)
    assert ci_from_upsets(fam.U, fam.V, c, check_margin=True) == weaken(prob, c)


def test_upset_modules_are_sums_of_n_upsets():
    fam = upsets_from_ci(example_problem(), 5)
    assert not fam.degenerate
    for M in fam.modules(2):
        assert M.supdim == 3


def test_random_problem_shape():
    prob = random_problem(3, np.random.default_rng(0))
    assert prob.n == 3


def test_block_ci_for_hook_pair():
    g = Grid((24, 24), margin=2)
    a = catalog.glued_hook(12, 20, 18, g)
    b = catalog.glued_hook(13, 21, 19, g)
    il = search_interleaving(a, b, 1)
    block = benign_block_ci([a], [b], il.phi, il.psi, 1)
    assert verify_solution(block.problem, block.solution)[0]
    assert block.problem.to_strings()[0] == ["**", "0*"]
    assert block.matching(1) == [(0, 0)]


def test_block_ci_for_two_bars():
    g = Grid((20,), margin=3)
    M_parts = [catalog.interval_1d(4, 12, g), catalog.interval_1d(6, 9, g)]
    N_parts = [catalog.interval_1d(5, 13, g), catalog.interval_1d(6, 10, g)]
    M, N = direct_sum(M_parts)[0], direct_sum(N_parts)[0]
    il = search_interleaving(M, N, 1)
    block = benign_block_ci(M_parts, N_parts, il.phi, il.psi, 1)
    assert verify_solution(block.problem, block.solution)[0]
    match = block.matching(1)
    assert match is not None and sorted(i for i, _ in match) == [0, 1]
