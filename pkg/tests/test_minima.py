import itertools
import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hnflow.exact import linalg
from hnflow.latticeflow import gram_schmidt_data, integral_lll, successive_minima, unimodular_completion


def brute_minima(B, box=6):
    B = np.asarray(B, dtype=float)
    d = B.shape[0]
    cs = np.array([c for c in itertools.product(range(-box, box + 1), repeat=d) if any(c)])
    norms = np.linalg.norm(cs @ B.T, axis=1)
    chosen, out = [], []
    for i in np.argsort(norms, kind="stable"):
        trial = chosen + [cs[i]]
        if np.linalg.matrix_rank(np.array(trial, dtype=float)) == len(trial):
            chosen, out = trial, out + [norms[i]]
            if len(chosen) == d:
                break
    return out


def test_identity_minima():
    res = successive_minima([[1, 0], [0, 1]])
    assert [float(x) for x in res.minima] == [1.0, 1.0]
    assert sorted(res.minimizers) == [(0, 1), (1, 0)]


def test_orthogonal_diagonal():
    res = successive_minima([[Fraction(1, 2), 0], [0, 2]])
    assert [float(x) for x in res.minima] == [0.5, 2.0]


def test_skew_basis_second_minimizer():
    res = successive_minima([[1, Fraction(3, 5)], [0, 1]])
    assert float(res.minima[0]) == 1.0
    with mpmath.workprec(128):
        assert abs(res.minima[1] - mpmath.sqrt(mpmath.mpf(116) / 100)) < mpmath.mpf(10) ** -30
    c = res.minimizers[1]
    assert c in ((1, -1), (-1, 1))


def test_bad_inputs():
    with pytest.raises(ValueError):
        successive_minima([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(ValueError):
        successive_minima([[1, 0], [0, 1]], enumeration_bound_factor=Fraction(1, 2))


@given(st.integers(2, 4), st.integers(0, 2 ** 31))
def test_minima_vs_brute_force(d, seed):
    rng = np.random.default_rng(seed)
    while True:
        B = rng.uniform(-1, 1, size=(d, d))
        if np.linalg.cond(B) < 4:
            break
    res = successive_minima(B.tolist())
    want = brute_minima(B, box=6 if d < 4 else 3)
    got = [float(x) for x in res.minima]
    assert all(x <= y for x, y in zip(got, got[1:]))
    np.testing.assert_allclose(got, want, rtol=1e-10)
    M = np.array(res.minimizers, dtype=float)
    assert np.linalg.matrix_rank(M) == d
    for c, lam in zip(res.minimizers, res.minima):
        v = B @ np.array(c, dtype=float)
        assert abs(np.linalg.norm(v) - float(lam)) < 1e-9


def test_scaling_shifts_logs():
    rng = np.random.default_rng(3)
    B = rng.uniform(-1, 1, size=(3, 3)).tolist()
    with mpmath.workprec(200):
        s = mpmath.mpf(7) / 3
        a = successive_minima(B, 200)
        b = successive_minima([[s * mpmath.mpf(x) for x in r] for r in B], 200)
        for x, y in zip(a.minima, b.minima):
            assert abs((mpmath.log(y) - mpmath.log(x)) - mpmath.log(s)) < mpmath.mpf(10) ** -50


def test_extreme_scales():
    # entries spanning e^{+-40}: precision must carry the reduction
    t = 40
    with mpmath.workprec(256):
        e = mpmath.exp(t)
        r2 = mpmath.sqrt(2)
        B = [[e, e * r2], [0, 1 / e]]
        res = successive_minima(B, 256)
        assert all(mpmath.isfinite(x) and x > 0 for x in res.minima)
        assert abs(mpmath.log(res.minima[0] * res.minima[1])) < 2


# LLL --------------------------------------------------------------------------------


@given(st.integers(2, 5), st.integers(0, 2 ** 31))
def test_lll_reduced_and_unimodular(d, seed):
    rng = random.Random(seed)
    while True:
        B = [[rng.randint(-20, 20) for _ in range(d)] for _ in range(d)]
        if linalg.int_det(B):
            break
    res = integral_lll(B)
    T = res.transform
    assert abs(linalg.int_det(T)) == 1
    assert [list(r) for r in linalg.matmul(T, B)] == [list(r) for r in res.basis]
    mu, bn = res.mu(), res.bnorm2()
    for i in range(d):
        for j in range(i):
            assert abs(mu[i][j]) <= Fraction(1, 2)
    for k in range(1, d):
        assert bn[k] >= (Fraction(99, 100) - mu[k][k - 1] ** 2) * bn[k - 1]
    D, _ = gram_schmidt_data(res.basis)
    assert D[-1] == linalg.int_det(B) ** 2


@given(st.lists(st.integers(-30, 30), min_size=2, max_size=5))
def test_unimodular_completion(u):
    g = 0
    for x in u:
        g = math.gcd(g, x)
    if g != 1:
        return
    M = unimodular_completion(u)
    assert abs(linalg.int_det(M)) == 1
    assert [row[0] for row in M] == list(u)
