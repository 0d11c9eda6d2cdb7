import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hnflow import kernels
from hnflow.exact import linalg
from hnflow.latticeflow import integral_lll, successive_minima

needs_compiled = pytest.mark.skipif(kernels.compiled is None, reason="compiled extension not built")


def float_gs(seed, d):
    rng = random.Random(seed)
    while True:
        B = [[rng.randint(-9, 9) for _ in range(d)] for _ in range(d)]
        if linalg.int_det(B):
            break
    res = integral_lll(B)
    mu = [[float(x) for x in row] for row in res.mu()]
    bn = [float(x) for x in res.bnorm2()]
    return mu, bn


@needs_compiled
@given(st.integers(2, 6), st.integers(0, 2 ** 31), st.integers(0, 1))
def test_enumeration_backends_agree(d, seed, head):
    mu, bn = float_gs(seed, d)
    radius2 = max(bn) * d
    a = kernels.python.enum_candidates(mu, bn, head, radius2, 1e-9, 10000)
    b = kernels.compiled.enum_candidates(mu, bn, head, radius2, 1e-9, 10000)
    assert [tuple(c) for _, c in a] == [tuple(c) for _, c in b]
    np.testing.assert_allclose([n for n, _ in a], [n for n, _ in b], rtol=1e-12)


@needs_compiled
@pytest.mark.parametrize("eps", [0.25, 0.5, 2.0])
def test_scan_backends_agree(eps):
    Lf = [[1.0, 2 ** 0.5], [0.0, 1.0]]
    a = kernels.python.scan_prefilter(Lf, 300, eps, 1e-12)
    b = kernels.compiled.scan_prefilter(Lf, 300, eps, 1e-12)
    assert sorted(map(tuple, np.asarray(a).tolist())) == sorted(map(tuple, np.asarray(b).tolist()))


@needs_compiled
def test_scan_backends_agree_d3():
    Lf = [[1.0, 2 ** 0.5, 3 ** 0.5], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    a = kernels.python.scan_prefilter(Lf, 12, 0.5, 1e-12)
    b = kernels.compiled.scan_prefilter(Lf, 12, 0.5, 1e-12)
    assert sorted(map(tuple, np.asarray(a).tolist())) == sorted(map(tuple, np.asarray(b).tolist()))


def test_minima_identical_across_backends():
    rng = np.random.default_rng(0)
    B = rng.uniform(-1, 1, size=(4, 4)).tolist()
    a = successive_minima(B, enum=kernels.python.enum_candidates)
    b = successive_minima(B)
    assert a.minimizers == b.minimizers
    assert a.minima == b.minima


def test_env_var_forces_fallback():
    env = dict(os.environ, HNFLOW_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from hnflow import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
