import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from siltstab import linalg

PRIMES = [2, 3, 5]


def random_matrix(draw, p, max_dim=5):
    rows = draw(st.integers(0, max_dim))
    cols = draw(st.integers(0, max_dim))
    data = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return np.array(data, dtype=np.int64).reshape(rows, cols)


@st.composite
def matrix_and_prime(draw):
    p = draw(st.sampled_from(PRIMES))
    return random_matrix(draw, p), p


@given(matrix_and_prime())
@settings(max_examples=200, deadline=None)
def test_nullspace_annihilates(mp):
    mat, p = mp
    ns = linalg.nullspace(mat, p)
    assert ns.shape[0] == mat.shape[1]
    if mat.size and ns.size:
        assert not np.any(linalg.matmul(mat, ns, p))
    assert linalg.rank(mat, p) + ns.shape[1] == mat.shape[1]


@given(matrix_and_prime())
@settings(max_examples=200, deadline=None)
def test_rref_is_idempotent(mp):
    mat, p = mp
    r1, piv1 = linalg.rref(mat, p)
    r2, piv2 = linalg.rref(r1, p)
    assert np.array_equal(r1, r2)
    assert piv1 == piv2


@given(matrix_and_prime(), st.data())
@settings(max_examples=200, deadline=None)
def test_solve_finds_consistent_solutions(mp, data):
    mat, p = mp
    x = np.array(data.draw(st.lists(st.integers(0, p - 1),
                                    min_size=mat.shape[1], max_size=mat.shape[1])),
                 dtype=np.int64)
    rhs = linalg.matmul(mat, x.reshape(-1, 1), p).reshape(-1)
    sol = linalg.solve(mat, rhs, p)
    assert sol is not None
    assert np.array_equal(linalg.matmul(mat, sol.reshape(-1, 1), p).reshape(-1), rhs)


def test_solve_detects_inconsistency():
    mat = np.array([[1, 0], [1, 0]], dtype=np.int64)
    rhs = np.array([1, 0], dtype=np.int64)
    assert linalg.solve(mat, rhs, 2) is None


def test_inverse_round_trip():
    mat = np.array([[1, 1], [0, 1]], dtype=np.int64)
    inv = linalg.inverse(mat, 2)
    assert np.array_equal(linalg.matmul(mat, inv, 2), linalg.eye(2))


def test_row_space_key_identifies_row_spaces():
    a = np.array([[1, 1, 0], [0, 0, 1]], dtype=np.int64)
    b = np.array([[1, 1, 1], [0, 0, 1]], dtype=np.int64)  # same row space over F_2
    c = np.array([[1, 0, 0], [0, 0, 1]], dtype=np.int64)
    assert linalg.row_space_key(a, 2) == linalg.row_space_key(b, 2)
    assert linalg.row_space_key(a, 2) != linalg.row_space_key(c, 2)


def test_frac_solve_exact():
    cols = [[Fraction(0), Fraction(1), Fraction(-1)], [Fraction(-1), Fraction(0), Fraction(0)]]
    sol = linalg.frac_solve(cols, [Fraction(-1), Fraction(1), Fraction(-1)])
    assert sol == [Fraction(1), Fraction(1)]
    assert linalg.frac_solve(cols, [Fraction(0), Fraction(0), Fraction(1)]) is None
    with pytest.raises(ValueError):
        linalg.frac_solve([[Fraction(1)], [Fraction(1)]][:1] * 2, [Fraction(1)])


def test_frac_rank():
    rows = [[Fraction(1), Fraction(0)], [Fraction(2), Fraction(0)], [Fraction(0), Fraction(3)]]
    assert linalg.frac_rank(rows) == 2
