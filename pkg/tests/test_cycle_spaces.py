import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import assume, given, settings, strategies as st

from cyclecone.chow_ring import E, H, RingContext
from cyclecone.cycle_spaces import (
    CONSISTENT, NOT_FIBER_GENERATED, CycleClass, DecompositionError, DimensionMismatchError,
    FiberCone, basis, cf_membership, decompose, dual_rays, dual_via_polyhedral,
    exceptional_class, fg_criterion, fiber_class, from_chow, index_sets, pair,
    pair_via_chow, pairing_matrix, space_dimension, to_chow,
)
from cyclecone.polyhedral import RationalCone, contains


def S(*xs):
    return frozenset(xs)


def test_basis_and_dimension():
    for n in range(2, 6):
        for k in range(1, n):
            for r in range(4):
                ctx = RingContext(n, r)
                b = basis(ctx, k)
                assert len(b) == space_dimension(ctx, k) == math.comb(n, k) + r
                assert all(len(I) == n - k for c in b for I in c.h_coeffs)


def test_class_validation():
    ctx = RingContext(3, 1)
    with pytest.raises(ValueError):
        CycleClass(ctx, 1, {S(1): 1})
    with pytest.raises(ValueError):
        CycleClass(ctx, 1, {}, {2: 1})
    with pytest.raises(ValueError):
        CycleClass(ctx, 3)


def test_signed_multiplicities():
    c = CycleClass(RingContext(4, 2), 2, {S(1, 2): 3}, {1: -2, 2: 5})
    assert c.b(1) == 2 and c.b(2) == -5
    assert c.sum_a() == 3 and c.sum_b() == -3
    assert str(c) == "3*H{1,2} - 2*E{1,2} + 5*E{2,2}"


def test_pair_examples():
    ctx = RingContext(2, 1)
    H1, H2 = CycleClass(ctx, 1, {S(1): 1}), CycleClass(ctx, 1, {S(2): 1})
    E1 = exceptional_class(ctx, 1, 1)
    assert pair(H1, H2) == 1
    assert pair(E1, E1) == -1
    assert pair(H1, E1) == 0
    assert pair(H1, H1) == 0
    with pytest.raises(DimensionMismatchError):
        pair(CycleClass(RingContext(3, 1), 1, {S(1, 2): 1}), CycleClass(RingContext(3, 1), 1, {S(1, 2): 1}))


def test_chow_conversion_examples():
    ctx = RingContext(3, 1)
    x = to_chow(exceptional_class(ctx, 1, 1))
    assert x.terms == {E(1, 2): -1}
    assert from_chow(x, 1) == exceptional_class(ctx, 1, 1)
    assert to_chow(CycleClass(ctx, 1, {S(2, 3): 1})).terms == {H(S(2, 3)): 1}
    with pytest.raises(DimensionMismatchError):
        from_chow(ctx.h(1), 1)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_pairing_matrix_is_identity_join(n, r):
    ctx = RingContext(n, r)
    for k in range(1, n):
        N = math.comb(n, k)
        want = [[(1 if i < N else -1) if i == j else 0 for j in range(N + r)] for i in range(N + r)]
        assert pairing_matrix(ctx, k) == want
        assert pairing_matrix(ctx, k, via_chow=True) == want


def test_fiber_cone_generators():
    for n, k, r in [(2, 1, 1), (3, 1, 2), (4, 2, 3)]:
        cone = FiberCone(RingContext(n, r), k)
        assert len(cone.generators) == r * math.comb(n, k) + r
    cone = FiberCone(RingContext(3, 0), 1)
    assert len(cone.generators) == 3
    assert all(not g.e_coeffs for g in cone.generators)


def test_decompose_example():
    dec = decompose([2, 1], [1, 1])
    assert dec.fibers == {(1, 1): 1, (1, 2): 1, (2, 1): 1}
    assert dec.exceptional == {1: 1}
    assert dec.vector() == (2, 1, -1, -1)


def test_decompose_base_cases():
    dec = decompose([5, 0, 0], [])
    assert dec.plain == {1: 5} and dec.is_nonnegative()
    assert dec.vector() == (5, 0, 0)
    with pytest.raises(DecompositionError, match="sum"):
        decompose([1], [2])
    with pytest.raises(DecompositionError, match="a_2"):
        decompose([1, -1], [0])


def test_decompose_rational():
    dec = decompose([Fraction(1, 2), Fraction(1, 3)], [Fraction(2, 3)])
    assert dec.is_nonnegative()
    assert dec.vector() == (Fraction(1, 2), Fraction(1, 3), Fraction(-2, 3))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 20), min_size=1, max_size=10), st.lists(st.integers(0, 20), max_size=6))
def test_decompose_reconstructs(a, b):
    assume(sum(b) <= sum(a))
    dec = decompose(a, b)
    assert dec.is_nonnegative()
    assert list(dec.vector()) == a + [-x for x in b]


def test_membership_examples():
    ctx = RingContext(2, 1)
    g = fiber_class(ctx, [2], 1)
    m = cf_membership(g)
    assert m.inside and m.decomposition.reconstruct(ctx, 1) == g

    ctx3 = RingContext(2, 3)
    D = CycleClass(ctx3, 1, {S(1): 1, S(2): 1}, {1: -1, 2: -1, 3: -1})
    m = cf_membership(D)
    assert not m.inside
    assert pair(D, m.separator) < 0

    ctx2 = RingContext(2, 2)
    c = CycleClass(ctx2, 1, {S(1): 2, S(2): 1}, {1: -1, 2: -1})
    m = cf_membership(c)
    assert m.inside
    assert m.decomposition.reconstruct(ctx2, 1) == c
    combo = m.decomposition.combo(ctx2, 1)
    assert sum((g * w for g, w in combo.items()), CycleClass(ctx2, 1)) == c


def test_membership_negative_a():
    ctx = RingContext(3, 1)
    c = CycleClass(ctx, 1, {S(1, 2): -1, S(2, 3): 2})
    m = cf_membership(c)
    assert not m.inside
    assert pair(c, m.separator) < 0


def class_strategy(ctx, k, lo=-4, hi=6):
    sets = index_sets(ctx.n, ctx.n - k)
    return st.tuples(
        st.lists(st.integers(lo, hi), min_size=len(sets), max_size=len(sets)),
        st.lists(st.integers(lo, hi), min_size=ctx.r, max_size=ctx.r),
    ).map(lambda t: CycleClass(ctx, k, dict(zip(sets, t[0])), dict(enumerate(t[1], 1))))


CASES = [(2, 1, 2), (3, 1, 2), (3, 2, 3), (4, 2, 2)]


@pytest.mark.parametrize("n,k,r", CASES)
def test_membership_agrees_with_polyhedral(n, k, r):
    ctx = RingContext(n, r)
    rc = FiberCone(ctx, k).as_rational_cone()

    @settings(max_examples=40, deadline=None)
    @given(class_strategy(ctx, k))
    def check(alpha):
        m = cf_membership(alpha)
        assert m.inside == contains(rc, alpha.vector()).inside
        if m.inside:
            assert m.decomposition.is_nonnegative()
            assert m.decomposition.reconstruct(ctx, k) == alpha
        else:
            assert pair(alpha, m.separator) < 0

    check()


@pytest.mark.parametrize("n,k,r", CASES)
def test_pairing_two_ways(n, k, r):
    ctx = RingContext(n, r)

    @settings(max_examples=25, deadline=None)
    @given(class_strategy(ctx, k), class_strategy(ctx, n - k))
    def check(a, b):
        assert pair(a, b) == pair_via_chow(a, b) == pair(b, a)
        assert from_chow(to_chow(a), k) == a

    check()


def test_dual_rays_examples():
    ctx = RingContext(2, 1)
    rays = dual_rays(FiberCone(ctx, 1))
    assert [str(r) for r in rays] == ["H{1}", "H{2}", "H{1} + H{2} - E{1,1}"]
    assert len(dual_rays(FiberCone(RingContext(2, 2), 1))) == 5
    assert [str(r) for r in dual_rays(FiberCone(RingContext(3, 0), 1))] == ["H{1}", "H{2}", "H{3}"]


@pytest.mark.parametrize("n,k,r", [(2, 1, 1), (2, 1, 2), (3, 1, 1), (3, 1, 2), (3, 2, 2), (4, 2, 2), (4, 1, 2)])
def test_dual_rays_match_double_description(n, k, r):
    cone = FiberCone(RingContext(n, r), k)
    listed = dual_rays(cone)
    assert len(listed) == math.comb(n, k) + 2 ** r - 1
    assert all(pair(g, ray) >= 0 for g in cone.generators for ray in listed)
    assert set(listed) == set(dual_via_polyhedral(cone))


def test_fg_criterion():
    ctx = RingContext(2, 3)
    D = CycleClass(ctx, 1, {S(1): 1, S(2): 1}, {1: -1, 2: -1, 3: -1})
    rep = fg_criterion([D])
    assert rep.verdict == NOT_FIBER_GENERATED and rep.refuted
    assert fg_criterion([fiber_class(ctx, [2], 1)]).verdict == CONSISTENT
    ctx4 = RingContext(4, 4)
    Y = CycleClass(ctx4, 2, {I: 2 for I in index_sets(4, 2)}, {j: -2 for j in range(1, 5)})
    rep = fg_criterion([Y])
    assert rep.verdict == CONSISTENT
    assert (rep.entries[0].sum_a, rep.entries[0].sum_b) == (12, 8)
    with pytest.raises(ValueError, match="negative"):
        fg_criterion([CycleClass(ctx, 1, {S(1): -1})])


def test_generators_are_extremal_small():
    from cyclecone.polyhedral import extremal_rays

    for n in (2, 3):
        for k in range(1, n):
            for r in (1, 2):
                cone = FiberCone(RingContext(n, r), k)
                rays = extremal_rays(RationalCone(space_dimension(cone.context, k), cone.generator_vectors()))
                assert len(rays) == len(cone.generators)


def test_index_sets_order():
    assert index_sets(3, 2) == [frozenset(c) for c in combinations(range(1, 4), 2)]
