import random
from itertools import combinations
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hnflow.exact import Subspace, linalg, span
from hnflow.slopes import (
    Flow,
    GraysonPolygon,
    HNFiltration,
    MatrixFamily,
    SubmodularityError,
    TableOracle,
    TauOracle,
    UnsaturatedLatticeError,
    close_lattice,
    flag_generators,
    flow_sweep,
    grayson_polygon,
    hn_filtration,
    is_semistable,
    lattice_for,
    lower_hull,
    ordered_bell,
    random_subspace,
    rational_subspaces,
    slopes_to_lambda,
    submodularity_check,
    verify_hn_bruteforce,
)

from conftest import random_rational_matrix

I3 = MatrixFamily.identity(3)
a3 = Flow([1, 0, -1])


def coordinate_subspaces(d):
    return [Subspace.coordinate(d, idx) for k in range(1, d) for idx in combinations(range(d), k)]


def roth(r2):
    return MatrixFamily.single(((1, r2), (0, 1)), "roth")


# closure ---------------------------------------------------------------------


def test_close_single_line():
    lat = close_lattice([span([(1, 0)])])
    assert lat.saturated
    assert set(lat.members) == {Subspace.zero(2), span([(1, 0)]), Subspace.full(2)}


def test_close_two_coordinate_flags():
    f1 = [Subspace.coordinate(3, [0]), Subspace.coordinate(3, [0, 1])]
    f2 = [Subspace.coordinate(3, [2]), Subspace.coordinate(3, [1, 2])]
    lat = close_lattice(f1 + f2)
    assert lat.saturated
    assert Subspace.coordinate(3, [1]) in lat
    assert Subspace.coordinate(3, [0, 2]) in lat
    for U in lat.members:
        for V in lat.members:
            assert U + V in lat and U & V in lat


def test_round_cap_flags_unsaturated():
    rng = random.Random(0)
    lines = [random_subspace(rng, 4, 1) for _ in range(4)]
    lat = close_lattice(lines, max_rounds=0)
    assert not lat.saturated
    with pytest.raises(UnsaturatedLatticeError):
        hn_filtration(TableOracle(4, default=0), lat)


def test_flag_generators_rational_only(r2):
    fam = roth(r2)
    assert flag_generators(fam, Flow([1, -1])) == []
    gens = flag_generators(fam, Flow([1, -1]), rational_only=False)
    assert len(gens) == 1 and not gens[0].is_rational()


# polygon and filtration --------------------------------------------------------


def test_identity_d3_polygon_and_chain():
    lat = lattice_for(I3, a3)
    poly = grayson_polygon(TauOracle(I3, a3), lat)
    assert poly.vertices == ((0, 0), (1, -1), (2, -1), (3, 0))
    assert poly.slopes == (-1, 0, 1)
    filt = hn_filtration(TauOracle(I3, a3), lat)
    assert filt.interior == (Subspace.coordinate(3, [2]), Subspace.coordinate(3, [1, 2]))
    assert filt.slopes == (-1, 0, 1)
    assert filt.polygon() == poly


def test_identity_d2():
    fam = MatrixFamily.identity(2)
    a = Flow([1, -1])
    filt = hn_filtration(TauOracle(fam, a), lattice_for(fam, a))
    assert filt.interior == (span([(0, 1)]),)
    assert filt.slopes == (-1, 1)
    assert not is_semistable(TauOracle(fam, a), lattice_for(fam, a))


def test_roth_semistable(r2):
    fam, a = roth(r2), Flow([1, -1])
    lat = lattice_for(fam, a, rational_subspaces(2, 10))
    oracle = TauOracle(fam, a)
    assert grayson_polygon(oracle, lat).vertices == ((0, 0), (2, 0))
    assert all(oracle(V) == 1 for V in lat.members if V.dim == 1)
    assert hn_filtration(oracle, lat).length == 1
    assert is_semistable(oracle, lat)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_zero_oracle_is_semistable(d):
    lat = close_lattice([Subspace.coordinate(d, [0])], d=d)
    poly = grayson_polygon(TableOracle(d, default=0), lat)
    assert poly.vertices == ((0, 0), (d, 0))


def test_constant_flow_semistable():
    a = Flow([2, 2, 2])
    assert is_semistable(TauOracle(I3, a), lattice_for(I3, a, coordinate_subspaces(3)))
    fam = MatrixFamily.single(random_rational_matrix(random.Random(4), 3))
    assert is_semistable(TauOracle(fam, a), lattice_for(fam, a))


def test_slopes_to_lambda():
    assert slopes_to_lambda(GraysonPolygon(((0, 0), (1, -1), (2, -1), (3, 0)))) == [-1, 0, 1]
    assert slopes_to_lambda(GraysonPolygon(((0, 0), (2, 0)))) == [0, 0]
    assert slopes_to_lambda(GraysonPolygon(((0, 0), (3, 5)))) == [Fraction(5, 3)] * 3


def test_polygon_validation():
    with pytest.raises(ValueError):
        GraysonPolygon(((0, 0), (1, 1), (2, 1)))
    with pytest.raises(ValueError):
        GraysonPolygon(((1, 0), (2, 0)))


def test_lower_hull_drops_collinear():
    assert lower_hull([(0, 0), (1, -1), (2, -2), (3, 0), (1, 5)]) == ((0, 0), (2, -2), (3, 0))


# submodularity -----------------------------------------------------------------


def test_zero_table_has_no_violations():
    rep = submodularity_check(TableOracle(3, default=0), trials=200, d=3)
    assert rep.ok and rep.pairs_checked == 200


def test_singleton_family_d4_no_violations():
    fam = MatrixFamily.single(random_rational_matrix(random.Random(7), 4))
    rep = submodularity_check(TauOracle(fam, Flow([3, 1, -1, -3])), trials=500, seed=1)
    assert rep.ok and rep.pairs_checked == 500


# two samples that maximize on incompatible minors; found by random search, frozen
VIOLATING = MatrixFamily([
    ((0, -1, 1, -1), (0, -1, 0, 1), (1, 1, 0, -1), (-1, 0, 0, -1)),
    ((-1, 1, 0, 1), (-1, 0, 0, 1), (1, 1, -1, -1), (1, 0, 0, 0)),
])


def test_two_sample_family_violates():
    oracle = TauOracle(VIOLATING, Flow([1, 1, -1, -1]))
    U = Subspace(4, [(0, 1, 0, 1), (0, 0, 1, 0)])
    V = Subspace(4, [(1, 0, 0, 0), (0, 0, 1, 0)])
    rep = submodularity_check(oracle, pairs=[(U, V)])
    assert not rep.ok
    _, _, lhs, rhs = rep.violations[0]
    assert (lhs, rhs) == (0, 2)
    lat = close_lattice([U, V])
    with pytest.raises(SubmodularityError):
        hn_filtration(oracle, lat)


# coherence properties -----------------------------------------------------------


@given(st.integers(2, 4), st.integers(0, 2 ** 31))
def test_filtration_coherence(d, seed):
    rng = random.Random(seed)
    fam = MatrixFamily.single(random_rational_matrix(rng, d))
    a = Flow([rng.randint(-4, 4) for _ in range(d)])
    oracle = TauOracle(fam, a)
    lat = lattice_for(fam, a)
    filt = hn_filtration(oracle, lat)
    poly = grayson_polygon(oracle, lat)
    assert filt.polygon() == poly
    assert sum(slopes_to_lambda(poly)) == a.total
    for V in lat.members:
        assert oracle(V) >= poly.value_at(V.dim)
    if filt.length > 1:
        V1 = filt.chain[1][0]
        tail = hn_filtration(oracle, lat, base=V1)
        assert tail.chain == filt.chain[1:]
        assert tail.slopes == filt.slopes[1:]


def test_sandwich_with_number_field_candidates(r2):
    oracle = TauOracle(roth(r2), Flow([1, -1]))
    rational = close_lattice(rational_subspaces(2, 6), d=2)
    extended = close_lattice(list(rational.members) + flag_generators(roth(r2), oracle.flow, rational_only=False), d=2)
    p_rat = grayson_polygon(oracle, rational)
    p_ext = grayson_polygon(oracle, extended)
    for k in range(3):
        assert p_rat.value_at(k) >= p_ext.value_at(k)
    # the irrational line L^{-1}<e_2> drops below the semistable rational polygon
    assert p_ext.vertices == ((0, 0), (1, -1), (2, 0))
    assert p_rat.vertices == ((0, 0), (2, 0))


def test_member_cap_stops_generic_closure():
    rng = random.Random(4)
    gens = [random_subspace(rng, 3, k) for k in (1, 1, 2, 2, 1, 2)]
    lat = close_lattice(gens, max_members=100)
    assert not lat.saturated


# brute force ---------------------------------------------------------------------


def test_bruteforce_examples():
    assert verify_hn_bruteforce(MatrixFamily.identity(2), Flow([1, -1]), 5)
    assert verify_hn_bruteforce(I3, a3, 3)
    fam = MatrixFamily.identity(2)
    filt = hn_filtration(TauOracle(fam, Flow([1, -1])), lattice_for(fam, Flow([1, -1])))
    bad = GraysonPolygon(((0, 0), (1, -2), (2, 0)))
    assert not verify_hn_bruteforce(fam, Flow([1, -1]), 5, polygon=bad, filtration=filt)


def test_bruteforce_random_rational():
    rng = random.Random(11)
    for _ in range(10):
        d = rng.choice((2, 3))
        while True:
            L = [[rng.randint(-5, 5) for _ in range(d)] for _ in range(d)]
            if linalg.int_det(L):
                break
        assert verify_hn_bruteforce(MatrixFamily.single(L), Flow([rng.randint(-4, 4) for _ in range(d)]), 3)


def test_bruteforce_limits(r2):
    with pytest.raises(ValueError):
        verify_hn_bruteforce(MatrixFamily.identity(4), Flow([1, 0, 0, -1]), 2)
    with pytest.raises(ValueError):
        verify_hn_bruteforce(roth(r2), Flow([1, -1]), 2)


# census ----------------------------------------------------------------------------


def test_ordered_bell():
    assert [ordered_bell(n) for n in range(6)] == [1, 1, 3, 13, 75, 541]


def test_identity_census_only_coordinate_lines():
    rng = random.Random(0)
    flows = []
    for _ in range(50):
        x = rng.randint(-5, 5)
        flows.append(Flow([x, -x]))
    res = flow_sweep(MatrixFamily.identity(2), flows)
    assert set(res.census) <= {span([(1, 0)]), span([(0, 1)])}
    assert res.size <= ordered_bell(4) == res.bound


def test_single_flow_census_and_constant_flow():
    res = flow_sweep(I3, [a3, Flow([1, 1, 1])])
    assert res.census == (Subspace.coordinate(3, [2]), Subspace.coordinate(3, [1, 2]))
    assert res.per_flow[1][1] == ()


def test_sweep_threads_deterministic():
    rng = random.Random(2)
    flows = [Flow([rng.randint(-3, 3) for _ in range(3)]) for _ in range(20)]
    assert flow_sweep(I3, flows).census == flow_sweep(I3, flows, threads=4).census


def test_sweep_dimension_mismatch():
    with pytest.raises(ValueError):
        flow_sweep(I3, [Flow([1, -1])])
