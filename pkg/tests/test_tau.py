import random
from fractions import Fraction

from hypothesis import given, strategies as st

from hnflow.exact import Subspace, linalg, span
from hnflow.slopes import (
    Flow,
    MatrixFamily,
    TauOracle,
    plucker_span,
    random_subspace,
    tau_family,
    tau_pivot,
    tau_single,
)

from conftest import random_rational_matrix

I2 = ((1, 0), (0, 1))
e2 = span([(0, 1)])


def test_tau_single_examples(r2):
    assert tau_single(I2, e2, Flow([1, -1])) == -1
    assert tau_single(((1, r2), (0, 1)), e2, Flow([1, -1])) == 1


def test_full_space_gives_total():
    rng = random.Random(1)
    for d in (1, 2, 3, 4):
        L = random_rational_matrix(rng, d)
        a = Flow([rng.randint(-5, 5) for _ in range(d)])
        full = Subspace.full(d)
        assert tau_single(L, full, a) == tau_pivot(L, full, a) == a.total


def test_tau_pivot_examples():
    I3 = linalg.identity(3)
    assert tau_pivot(I3, Subspace.coordinate(3, [1, 2]), Flow([1, 0, -1])) == -1
    assert tau_pivot(I2, span([(1, 1)]), Flow([1, -1])) == 1


def test_tau_family_takes_max():
    fam = MatrixFamily([I2, ((0, 1), (1, 0))])
    assert tau_family(fam, e2, Flow([1, -1])) == 1
    assert tau_family(MatrixFamily.single(I2), e2, Flow([1, -1])) == -1


def test_oracle_memoizes(r2):
    fam = MatrixFamily.single(((1, r2), (0, 1)))
    o = TauOracle(fam, Flow([1, -1]))
    assert o(e2) == o(e2) == 1
    assert o(Subspace.zero(2)) == 0


@given(st.integers(1, 5), st.integers(0, 2 ** 31))
def test_routes_agree(d, seed):
    rng = random.Random(seed)
    L = random_rational_matrix(rng, d)
    V = random_subspace(rng, d)
    a = Flow([Fraction(rng.randint(-6, 6), rng.choice((1, 2))) for _ in range(d)])
    assert tau_single(L, V, a) == tau_pivot(L, V, a)


@given(st.integers(2, 4), st.integers(0, 2 ** 31))
def test_basis_change_and_scaling_invariance(d, seed):
    rng = random.Random(seed)
    L = random_rational_matrix(rng, d)
    V = random_subspace(rng, d)
    a = Flow([rng.randint(-4, 4) for _ in range(d)])
    if V.dim == 0:
        return
    scaled = [[c * x for x in row] for row, c in zip(V.basis, (Fraction(rng.randint(1, 5)) for _ in V.basis))]
    mixed = [tuple(x + y for x, y in zip(scaled[0], row)) if i else row for i, row in enumerate(scaled)]
    assert tau_single(L, Subspace(d, mixed), a) == tau_single(L, V, a)


def test_routes_agree_over_number_field(r2):
    L = ((1, r2, 0), (0, 1, r2), (r2, 0, 1))
    rng = random.Random(5)
    for _ in range(30):
        V = random_subspace(rng, 3)
        a = Flow([rng.randint(-3, 3) for _ in range(3)])
        assert tau_single(L, V, a) == tau_pivot(L, V, a)


def test_plucker_span_examples():
    assert plucker_span(MatrixFamily.single(I2))[0] == 1
    assert plucker_span(MatrixFamily([I2, ((2, 0), (0, 1))]))[0] == 2
    rng = random.Random(2)
    samples = [random_rational_matrix(rng, 2) for _ in range(10)]
    assert plucker_span(MatrixFamily(samples))[0] == 5
