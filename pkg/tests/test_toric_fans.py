import math
from itertools import combinations, product

import pytest

from cyclecone.cycle_spaces import CycleClass, FiberCone, exceptional_class
from cyclecone.toric_fans import (
    Fan, FanError, QuotientMismatchError, UnsupportedFanError, apply_matrix, blowup_one_point,
    blowup_tilde, blowup_two_points, blowup_two_points_on_fiber, cox_grading, cox_sections_Ws,
    enumerate_cones, expected_exceptional_images, fan_p1n, invariant_cycle_classes, preset,
    quotient_fan_exceptional, quotient_matrix, restrict_sections_to_exceptional, stellar_subdivide,
    tilde_W,
)


def test_fan_p1n_sizes():
    assert (len(fan_p1n(2).rays), len(fan_p1n(2).max_cones)) == (4, 4)
    assert (len(fan_p1n(3).rays), len(fan_p1n(3).max_cones)) == (6, 8)


@pytest.mark.parametrize("n", range(1, 7))
def test_cone_counts(n):
    f = fan_p1n(n)
    for k in range(n):
        assert len(enumerate_cones(f, k)) == 2 ** (n - k) * math.comb(n, k)


def test_cone_count_examples():
    assert len(enumerate_cones(fan_p1n(3), 1)) == 12
    assert len(enumerate_cones(fan_p1n(4), 2)) == 24


def test_blowup_ray_counts():
    for n in range(2, 6):
        assert len(blowup_one_point(n).fan.rays) == 2 * n + 1
        assert len(blowup_two_points(n).fan.rays) == 2 * n + 2


def test_subdivision_rejects_boundary_ray():
    f = fan_p1n(2)
    with pytest.raises(FanError, match="relative interior"):
        stellar_subdivide(f, {0, 1}, (1, 0))


def test_broken_fan_rejected():
    with pytest.raises(FanError):
        Fan(2, ((1, 0), (0, 1), (1, 1)), ({0, 1}, {1, 2})).check()


def _covering_cones(fan, p):
    return [c for c in fan.max_cones if fan.contains_point(c, p)]


@pytest.mark.parametrize("n", [2, 3])
def test_subdivision_keeps_support(n):
    fans = [fan_p1n(n), blowup_one_point(n).fan, blowup_two_points(n).fan, blowup_tilde(n).fan]
    for p in product(range(-2, 3), repeat=n):
        for f in fans:
            assert _covering_cones(f, p)


def _class(ctx, k, I, points=()):
    return CycleClass(ctx, k, {frozenset(I): 1}, {j: -1 for j in points})


def test_two_point_table_rows():
    n, k = 4, 2
    nf = blowup_two_points(n)
    ctx = nf.context
    table = dict(invariant_cycle_classes(nf, k))
    # <e_1, e_2>
    assert table[frozenset({0, 1})] == _class(ctx, k, {1, 2}, [1])
    # <-e_1, -e_2>
    assert table[frozenset({n, n + 1})] == _class(ctx, k, {1, 2}, [2])
    # <e_1, rho>
    rho = nf.points[0].ray
    assert table[frozenset({0, rho})] == exceptional_class(ctx, k, 1)
    # mixed signs go through neither point
    assert table[frozenset({0, n + 1})] == _class(ctx, k, {1, 2})


@pytest.mark.parametrize("n", range(2, 6))
def test_two_point_classes_contain_generators(n):
    nf = blowup_two_points(n)
    for k in range(1, n):
        classes = {c for _, c in invariant_cycle_classes(nf, k)}
        gens = set(FiberCone(nf.context, k).generators)
        assert gens <= classes
        assert all(not c.e_coeffs and len(c.h_coeffs) == 1 for c in classes - gens)


def test_one_point_classes():
    nf = blowup_one_point(3)
    classes = {c for _, c in invariant_cycle_classes(nf, 1)}
    ctx = nf.context
    assert _class(ctx, 1, {2, 3}, [1]) in classes
    assert exceptional_class(ctx, 1, 1) in classes


def test_two_points_on_fiber():
    n, s = 4, 2
    nf = blowup_two_points_on_fiber(n, s)
    ctx = nf.context
    J = set(nf.params["J"])
    table = {c for _, c in invariant_cycle_classes(nf, s)}
    # the fiber H_J through both points
    assert _class(ctx, s, J, [1, 2]) in table
    with pytest.raises(ValueError):
        blowup_two_points_on_fiber(n, s, J={1})


def test_unsupported_fans():
    with pytest.raises(UnsupportedFanError):
        invariant_cycle_classes(blowup_tilde(3), 2)
    with pytest.raises(UnsupportedFanError):
        preset("nope", 3)


def test_xtilde_fan():
    nf = blowup_tilde(3)
    assert nf.fan.rays[nf.params["rho2"]] == (0, -1, -1)
    assert len(nf.fan.rays) == 8


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_quotient_images(n):
    fan, images = quotient_fan_exceptional(n)
    assert images == expected_exceptional_images(n)
    assert fan.dim == n - 1
    # P^1 x P^(n-2) has 2 * (n - 1) maximal cones
    assert len(fan.max_cones) == 2 * (n - 1)
    M = quotient_matrix(n)
    assert apply_matrix(M, (1,) + (0,) * (n - 1)) == (1,) + (0,) * (n - 2)
    assert not any(apply_matrix(M, (0,) + (-1,) * (n - 1)))


def test_quotient_n3_images():
    _, images = quotient_fan_exceptional(3)
    assert images == [(1, 0), (-1, 0), (0, 1), (0, -1)]
    with pytest.raises(ValueError):
        quotient_fan_exceptional(2)


def test_quotient_mismatch_is_reported(monkeypatch):
    import cyclecone.toric_fans as tf

    monkeypatch.setattr(tf, "expected_exceptional_images", lambda n: [(0,) * (n - 1)] * (n + 1))
    with pytest.raises(QuotientMismatchError, match="ray e1"):
        tf.quotient_fan_exceptional(3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cox_grading_relations(n):
    assert cox_grading(n).relation_defects() == []
    assert cox_grading(n, as_printed=True).relation_defects()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_cox_sections_homogeneous(n):
    g = cox_grading(n)
    for s in range(1, n):
        secs = cox_sections_Ws(n, s)
        assert len(secs) == sum(math.comb(n - 1, t) for t in range(s, n))
        assert all(g.degree(dict(m)) == tilde_W(n, s) for m in secs)
        restricted = restrict_sections_to_exceptional(n, s)
        assert sorted(map(sorted, restricted)) == [list(I) for I in combinations(range(2, n + 1), s)]


def test_cox_section_examples():
    assert len(cox_sections_Ws(3, 1)) == 3
    assert len(cox_sections_Ws(4, 3)) == 1
    assert sorted(map(sorted, restrict_sections_to_exceptional(3, 1))) == [[2], [3]]
