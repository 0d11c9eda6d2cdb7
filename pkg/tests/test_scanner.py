import math
from fractions import Fraction

import mpmath
import pytest

from hnflow.exact import span
from hnflow.scanner import (
    NotASolution,
    ScanConfig,
    SolutionTooSmall,
    ZeroFormError,
    classify,
    exceptional_subspaces,
    flow_census,
    operator_bound,
    reverify,
    scan_solutions,
    solution_to_flow,
    vwma_test,
)
from hnflow.slopes import Flow, MatrixFamily

I2 = ((1, 0), (0, 1))
HALF = Fraction(1, 2)


def roth(r2):
    return ((1, r2), (0, 1))


def test_identity_solutions_are_axes():
    sols = scan_solutions(ScanConfig(I2, HALF, 100))
    assert sorted(s.x for s in sols) == [(0, 1), (1, 0)]
    assert all(s.zero_product for s in sols)


def test_zero_products_can_be_dropped():
    assert scan_solutions(ScanConfig(I2, HALF, 20, include_zero_products=False)) == []


def test_roth_convergents(r2):
    sols = {s.x: s for s in scan_solutions(ScanConfig(roth(r2), HALF, 100))}
    assert (3, -2) in sols  # |2 sqrt2 - 3| * 2 = 0.343 <= 3^(-1/2)
    lo, hi = sols[(3, -2)].product_log
    with mpmath.workprec(200):
        ref = mpmath.log(2 * (3 - 2 * mpmath.sqrt(2)))
        assert mpmath.mpf(lo) <= ref <= mpmath.mpf(hi)
    # |5 sqrt2 - 7| * 5 = 0.355 beats 7^(-1/2) but not |x|_2^(-1/2)
    assert (7, -5) not in sols
    sup = [s.x for s in scan_solutions(ScanConfig(roth(r2), HALF, 100, norm="sup"))]
    assert (7, -5) in sup


def test_reverify(r2):
    cfg = ScanConfig(roth(r2), HALF, 30)
    assert all(reverify(s, cfg) for s in scan_solutions(cfg))


def test_config_validation():
    with pytest.raises(ValueError):
        ScanConfig(I2, 0, 10)
    with pytest.raises(ValueError):
        ScanConfig(I2, HALF, 0)
    with pytest.raises(ValueError):
        ScanConfig(((1, 2), (2, 4)), HALF, 10)
    with pytest.raises(ValueError):
        ScanConfig(I2, HALF, 10, norm="taxicab")


def test_classify():
    sols = scan_solutions(ScanConfig(I2, HALF, 50))
    c = classify(sols, [span([(1, 0)]), span([(0, 1)])])
    assert c.outliers == [] and c.max_outlier_norm is None
    everything = classify(sols, [])
    assert len(everything.outliers) == len(sols)


def test_classify_roth_outliers(r2):
    sols = [s for s in scan_solutions(ScanConfig(roth(r2), HALF, 100)) if not s.zero_product]
    c = classify(sols, [span([(1, 0)])])
    assert len(c.outliers) == len(sols) > 0


def test_classify_rejects_full_space():
    from hnflow.exact import Subspace
    with pytest.raises(ValueError):
        classify([], [Subspace.full(2)])


def test_solution_to_flow_d2():
    L = ((Fraction(1, 10 ** 6), 0), (0, Fraction(1, 10 ** 6)))
    f = solution_to_flow((1, 10 ** 7), L, HALF)
    assert f.t == 1
    assert f.n == (8, -8) and sum(f.n) == 0
    assert f.ok and f.lhs <= 2 * math.exp(-1)
    assert f.clamped == ()
    for bi, ni in zip(f.b, f.n):
        assert abs(bi / f.t - ni) <= 1.5


def test_solution_to_flow_clamped_d3():
    L = ((Fraction(1, 10 ** 400), 0, 0), (0, 1, 0), (0, 0, 1))
    f = solution_to_flow((1, 3 * 10 ** 10, 1), L, HALF)
    assert f.clamped == (0,)
    assert f.ok and sum(f.n) == 0


def test_solution_to_flow_errors(r2):
    with pytest.raises(ZeroFormError):
        solution_to_flow((1, 0), I2, HALF)
    with pytest.raises(SolutionTooSmall):
        solution_to_flow((3, -2), roth(r2), HALF)
    # the convergent (-7, 5) is not a solution at eps = 4
    with pytest.raises(NotASolution):
        solution_to_flow((-7, 5), roth(r2), 4)


def test_flow_census_dedups():
    L = ((Fraction(1, 10 ** 6), 0), (0, Fraction(1, 10 ** 6)))
    f = solution_to_flow((1, 10 ** 7), L, HALF)
    assert flow_census([f, f]) == {(8, -8)}


def test_operator_bound():
    assert operator_bound(I2) == 2
    assert operator_bound(((3, 4), (0, 0))) == 5


def test_exceptional_subspaces_identity():
    flows = [Flow([1, -1]), Flow([-1, 1])]
    assert exceptional_subspaces(MatrixFamily.identity(2), 1, flows) == [span([(0, 1)]), span([(1, 0)])]


def test_exceptional_subspaces_roth_and_constant(r2):
    fam = MatrixFamily.single(roth(r2))
    assert exceptional_subspaces(fam, 1, [Flow([1, -1])]) == []
    assert exceptional_subspaces(MatrixFamily.identity(2), 1, [Flow([0, 0])]) == []
    with pytest.raises(ValueError):
        exceptional_subspaces(fam, 1, [Flow([1, 1])])


def test_vwma_zero_vector():
    hits = vwma_test([0], 1, 5)
    assert hits == [(0, (q,)) for q in range(1, 6)]


def test_vwma_sqrt2_convergents(r2):
    hits = vwma_test([r2], Fraction(1, 5), 100)
    assert [q[0] for _, q in hits] == [1, 2, 3, 5, 12, 29, 70]
    for p, (q,) in hits:
        err = abs(p + q * math.sqrt(2))
        assert err * q <= q ** -0.2 + 1e-12


def test_vwma_rational_point():
    hits = dict((q, p) for p, q in vwma_test([Fraction(1, 3)], Fraction(1, 5), 6))
    assert hits[(3,)] == -1
