import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hnflow.exact import linalg
from hnflow.exact import kernel

from conftest import random_rational_matrix

small = st.integers(-6, 6)


def matrices(max_dim=5):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(small.map(Fraction), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rref_identity():
    R, piv = linalg.rref(linalg.identity(4))
    assert R == linalg.identity(4)
    assert len(piv) == 4


def test_kernel_of_row_sum():
    V = kernel([[1, 1]])
    assert V.basis == ((1, -1),)


def test_det_shear(r2):
    assert linalg.det([[1, r2], [0, 1]]) == 1


def test_solve_and_inverse():
    rng = random.Random(3)
    for _ in range(20):
        m = random_rational_matrix(rng, 4)
        b = [Fraction(rng.randint(-5, 5)) for _ in range(4)]
        x = linalg.solve(m, b)
        assert linalg.matvec(m, x) == tuple(b)
        assert linalg.matmul(m, linalg.inverse(m)) == linalg.identity(4)


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        linalg.inverse([[1, 2], [2, 4]])


def test_integer_helpers():
    assert linalg.int_det([[2, 1], [1, 1]]) == 1
    assert linalg.int_rank([[1, 2], [2, 4]]) == 1
    assert linalg.primitive((Fraction(2, 3), Fraction(-4, 3))) == (1, -2)


@given(matrices())
def test_rref_idempotent_and_rank_nullity(m):
    R, piv = linalg.rref(m)
    assert linalg.rref(R)[0] == R
    ncols = len(m[0])
    assert linalg.rank(m) + len(linalg.kernel_basis(m, ncols)) == ncols
    for v in linalg.kernel_basis(m, ncols):
        assert all(x == 0 for x in linalg.matvec(m, v))


@given(st.integers(2, 4).flatmap(lambda d: st.lists(st.lists(small, min_size=d, max_size=d), min_size=d, max_size=d)))
def test_int_det_matches_exact_det(m):
    assert linalg.int_det(m) == linalg.det([[Fraction(x) for x in r] for r in m])
