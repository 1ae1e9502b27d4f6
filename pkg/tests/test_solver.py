import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_lineq
from vaporlab import solver
from vaporlab.errors import VaporlabError
from vaporlab.sequences import explicit, factorials

F10 = factorials(1, 10)


def naive_combination(terms, coeffs, target):
    return sorted(
        {
            vals
            for vals in itertools.permutations(terms, len(coeffs))
            if sum(c * v for c, v in zip(coeffs, vals)) == target
        }
    )


def greedy_factorial_digits(t):
    """Independent oracle: largest factorial first, then read digits off."""
    if t == 0:
        return []
    fs = [1]
    while fs[-1] * (len(fs) + 1) <= t:
        fs.append(fs[-1] * (len(fs) + 1))
    digits = []
    for f in reversed(fs):
        c, t = divmod(t, f)
        digits.append(c)
    return digits[::-1]


def test_lineq_examples():
    s = solver.enumerate_lineq_solutions(F10, 1, 2, 0)
    assert s.solutions == (((1,), (0, 0)),)
    assert s.max_index_bound == 1 and s.bound_checked
    assert solver.enumerate_lineq_solutions(F10, 1, 1, 0).solutions == ()
    s = solver.enumerate_lineq_solutions(F10, 2, 1, -3, require_max_differ=False)
    assert ((0, 1), (2,)) in s.solutions
    assert solver.SolutionSet.from_dict(s.to_dict()) == s


def test_lineq_rejects_bad_arity():
    with pytest.raises(VaporlabError):
        solver.enumerate_lineq_solutions(F10, 0, 1, 0)


def test_lineq_no_certificate_flags_bound():
    s = solver.enumerate_lineq_solutions(explicit([1, 2, 4, 8]), 1, 2, 0)
    assert s.max_index_bound is None and not s.bound_checked


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(1, 40), min_size=1, max_size=6, unique=True),
    st.integers(1, 3),
    st.integers(1, 2),
    st.integers(-15, 15),
    st.booleans(),
)
def test_lineq_matches_naive(values, m, n, r, differ):
    terms = sorted(values)
    got = solver.enumerate_lineq_solutions(terms, m, n, r, differ)
    assert list(got.solutions) == naive_lineq(terms, m, n, r, differ)


def test_combination_examples():
    assert solver.solve_combination(F10, [1, 1], 1, 30) == [(6, 24), (24, 6)]
    assert solver.solve_combination(F10, [1, 1], 1, 4) == []
    assert solver.solve_combination(F10, [2, -1], 1, 0) == [(1, 2)]


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(1, 50), min_size=1, max_size=7, unique=True),
    st.lists(st.sampled_from([-3, -2, -1, 1, 2, 3]), min_size=1, max_size=3),
    st.integers(1, 3),
    st.integers(-40, 40),
)
def test_combination_matches_naive(values, coeffs, mult, target):
    terms = sorted(values)
    assert solver.solve_combination(terms, coeffs, mult, target) == naive_combination(terms, coeffs, mult * target)


def test_combination_agrees_with_lineq():
    # distinct-value x1 = y1 + y2 solutions, seen from both solvers
    terms = factorials(1, 8).terms
    for t in range(0, 60):
        combo = solver.solve_combination(terms, [1, 1], 1, t)
        lin = {
            (terms[y[0]], terms[y[1]])
            for x, y in solver.enumerate_lineq_solutions(terms, 1, 2, 0, False).solutions
            if terms[x[0]] == t and y[0] != y[1]
        }
        if t in terms:
            assert set(combo) == lin


def test_factorial_base_examples():
    assert solver.factorial_base(0) == []
    assert solver.factorial_base(30) == [0, 0, 1, 1]
    assert solver.factorial_base(7) == [1, 0, 1]
    with pytest.raises(VaporlabError):
        solver.factorial_base(-1)


def test_factorial_base_roundtrip_many():
    rng = random.Random(7)
    for _ in range(10_000):
        t = rng.randrange(10**40)
        digits = solver.factorial_base(t)
        assert solver.from_factorial_base(digits) == t
        assert all(0 <= c <= k for k, c in enumerate(digits, start=1))


@given(st.integers(0, 10**30))
def test_factorial_base_matches_greedy(t):
    assert solver.factorial_base(t) == greedy_factorial_digits(t)
