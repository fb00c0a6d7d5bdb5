import math
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from cyclecone.chow_ring import RingContext
from cyclecone.cycle_spaces import CycleClass
from cyclecone.linear_systems import (
    CoordinateStratum, MHMonomial, MonomialSystem, base_locus, basis_Ws, minimal_transversals,
    multiplicity_along_L, order_witness, restrict_to_stratum, restricted_system_on_E,
    restricted_zero_locus, zero_strata,
)


def names(sys):
    return sorted(str(m) for m in sys.monomials)


def test_basis_examples():
    assert names(basis_Ws(2, 1)) == ["y2"]
    assert names(basis_Ws(3, 1)) == ["x2*y3", "y2*x3", "y2*y3"]
    assert names(basis_Ws(4, 3)) == ["y2*y3*y4"]
    with pytest.raises(ValueError):
        basis_Ws(3, 3)


@pytest.mark.parametrize("n", range(2, 8))
def test_basis_sizes(n):
    for s in range(1, n):
        assert len(basis_Ws(n, s).monomials) == sum(math.comb(n - 1, t) for t in range(s, n))


def test_base_locus_examples():
    L = base_locus(basis_Ws(3, 1))
    assert [(str(st), str(c)) for st, c in L] == [("{y2,y3}", "H{2,3} - E{1,1}")]
    L = base_locus(basis_Ws(3, 2))
    assert [(str(st), str(c)) for st, c in L] == [("{y2}", "H{2} - E{1,2}"), ("{y3}", "H{3} - E{1,2}")]


def _oracle_components(n, monomials):
    """Minimal coordinate strata on which every monomial vanishes, by listing all strata."""
    supports = [m.support() for m in monomials]
    hits = []
    for choice in product((None, "x", "y"), repeat=n):
        V = frozenset((c, i) for i, c in enumerate(choice, start=1) if c)
        if all(S & V for S in supports):
            hits.append(V)
    return {V for V in hits if not any(U < V for U in hits)}


@pytest.mark.parametrize("n", range(2, 7))
def test_base_locus_against_brute_force(n):
    ctx = RingContext(n, 1)
    for s in range(1, n):
        sys = basis_Ws(n, s)
        got = base_locus(sys)
        assert {st.vanishing for st, _ in got} == _oracle_components(n, sys.monomials)
        assert len(got) == math.comb(n - 1, n - s)
        want = {CycleClass(ctx, s, {frozenset(I): 1}, {1: -1}) for I in combinations(range(2, n + 1), n - s)}
        assert {c for _, c in got} == want


monomial_sets = st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.sampled_from([(0, 1), (1, 0)]), min_size=n, max_size=n), min_size=1, max_size=6),
))


@settings(max_examples=80, deadline=None)
@given(monomial_sets)
def test_zero_strata_against_brute_force(data):
    n, raw = data
    monos = [MHMonomial(tuple(e)) for e in raw]
    assert {st.vanishing for st in zero_strata(monos)} == _oracle_components(n, monos)


def test_transversals():
    edges = [frozenset("ab"), frozenset("bc")]
    assert sorted(map(sorted, minimal_transversals(edges))) == [["a", "c"], ["b"]]


@pytest.mark.parametrize("n", range(2, 9))
def test_multiplicity_along_L(n):
    for s in range(1, n):
        order, witness = order_witness(basis_Ws(n, s))
        assert order == s == multiplicity_along_L(basis_Ws(n, s))
        assert witness.y_degree(range(2, n + 1)) == s


def test_multiplicity_examples():
    x2x3 = MHMonomial.from_sets(3, xs={2, 3})
    y2y3 = MHMonomial.from_sets(3, ys={2, 3})
    assert multiplicity_along_L(MonomialSystem(3, frozenset({x2x3}))) == 0
    assert multiplicity_along_L(MonomialSystem(3, frozenset({y2y3}))) == 2
    with pytest.raises(ValueError):
        multiplicity_along_L(MonomialSystem(3, frozenset()))


def test_restriction_example():
    sys = basis_Ws(3, 1)
    st = CoordinateStratum.of_y([2])
    assert names(restrict_to_stratum(sys, st)) == ["x2*y3"]
    assert [str(z) for z in restricted_zero_locus(sys, st)] == ["{y2,y3}"]
    assert restrict_to_stratum(sys, CoordinateStratum(frozenset())).monomials == sys.monomials


@pytest.mark.parametrize("n", range(3, 7))
def test_restriction_recursion(n):
    for s in range(1, n - 1):
        sys = basis_Ws(n, s)
        for T, _ in base_locus(basis_Ws(n, s + 1)):
            assert len(restrict_to_stratum(sys, T).monomials) == 1
            zeros = {z.vanishing for z in restricted_zero_locus(sys, T)}
            assert zeros == {T.vanishing | {("y", j)} for j in range(2, n + 1) if j not in T.indices()}


def test_invalid_inputs():
    with pytest.raises(ValueError, match="empty"):
        CoordinateStratum(frozenset({("x", 1), ("y", 1)}))
    with pytest.raises(ValueError, match="squarefree"):
        zero_strata([MHMonomial(((2, 0), (0, 1)))])
    with pytest.raises(ValueError, match="multidegrees"):
        MonomialSystem(2, frozenset({MHMonomial(((1, 0), (0, 0))), MHMonomial(((1, 0), (0, 1)))}))


def test_restricted_system_on_E_examples():
    ex = restricted_system_on_E(4, 2)
    assert sorted(map(sorted, ex.monomials)) == [[2, 3], [2, 4], [3, 4]]
    assert ex.point_orders == {2: 1, 3: 1, 4: 1}
    ex = restricted_system_on_E(3, 1)
    assert sorted(map(sorted, ex.monomials)) == [[2], [3]]
    assert ex.point_orders == {2: 0, 3: 0}


@pytest.mark.parametrize("n", range(3, 7))
def test_restricted_system_on_E(n):
    for s in range(1, n):
        ex = restricted_system_on_E(n, s)
        assert len(ex.monomials) == math.comb(n - 1, s)
        assert ex.multiplicity_ok()
        # local order at p_j: total degree minus the exponent of z_j
        assert ex.point_orders == {j: min(s - (j in I) for I in ex.monomials) for j in range(2, n + 1)}
