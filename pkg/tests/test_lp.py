from fractions import Fraction as F

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy.solvers.simplex import lpmax

from polytrope.lp import Unbounded, nullspace, rank, rref, solve_max


def test_small_lp():
    res = solve_max([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert res.value == F(14, 5)
    assert res.x == (F(8, 5), F(6, 5))


def test_unbounded():
    with pytest.raises(Unbounded):
        solve_max([1, 0], [[-1, 1]], [1])


def test_needs_origin_feasible():
    with pytest.raises(ValueError):
        solve_max([1], [[1]], [-1])


def test_rank_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank(rows) == 2
    N = nullspace(rows, 3)
    assert len(N) == 1
    assert all(sum(F(a) * b for a, b in zip(r, N[0])) == 0 for r in rows)
    R, piv = rref(rows)
    assert piv == [0, 1]


@st.composite
def lps(draw):
    m = draw(st.integers(1, 4))
    k = draw(st.integers(1, 4))
    ints = st.integers(-4, 5)
    c = [draw(ints) for _ in range(k)]
    A = [[draw(ints) for _ in range(k)] for _ in range(m)]
    b = [draw(st.integers(0, 6)) for _ in range(m)]
    return c, A, b


@settings(max_examples=120, deadline=None)
@given(lps())
def test_against_sympy(problem):
    c, A, b = problem
    xs = sympy.symbols(f"x0:{len(c)}")
    cons = [sum(a * x for a, x in zip(row, xs)) <= bi for row, bi in zip(A, b)] + [x >= 0 for x in xs]
    try:
        ref = lpmax(sum(ci * x for ci, x in zip(c, xs)), cons)[0]
    except sympy.solvers.simplex.UnboundedLPError:
        with pytest.raises(Unbounded):
            solve_max(c, A, b)
        return
    res = solve_max(c, A, b)
    assert res.value == F(int(ref.p), int(ref.q))
    assert all(x >= 0 for x in res.x)
    assert all(sum(F(a) * x for a, x in zip(row, res.x)) <= bi for row, bi in zip(A, b))
    assert sum(F(ci) * x for ci, x in zip(c, res.x)) == res.value


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_matches_sympy(rows):
    assume(any(any(r) for r in rows))
    assert rank(rows) == sympy.Matrix(rows).rank()
    N = nullspace(rows, 4)
    assert len(N) == 4 - rank(rows)
