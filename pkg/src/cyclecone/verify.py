"""Self-checks reproducing the computable statements, one function per check.

Each check returns a plain dict with a boolean ``passed`` plus whatever it
swept, so the CLI can serialize it directly.  Random sweeps use a fixed seed.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations, product

from .chow_ring import RingContext
from .cycle_spaces import (
    CycleClass, DecompositionError, FiberCone, basis, cf_membership, decompose,
    dual_rays, dual_via_polyhedral, index_sets, pairing_matrix,
)
from .linear_systems import (
    CoordinateStratum, base_locus, basis_Ws, order_witness, restrict_to_stratum,
    restricted_system_on_E, restricted_zero_locus,
)
from .polyhedral import RationalCone, contains, extremal_rays
from .theorems import (
    D1_cap_D2, factorial_boundary, hyperplane_through_points, lemma_con_identity,
    phi_map, prop44_identity, prop_not_construction,
)
from .toric_fans import (
    blowup_two_points, cox_grading, enumerate_cones, fan_p1n, invariant_cycle_classes,
    quotient_fan_exceptional, restrict_sections_to_exceptional,
)

SEED = 20240601


def _identity_join(N: int, r: int) -> list[list[int]]:
    size = N + r
    return [[(1 if i < N else -1) if i == j else 0 for j in range(size)] for i in range(size)]


def check_pairing(max_n: int = 4, max_r: int = 3) -> dict:
    checked, failures = [], []
    for n in range(2, max_n + 1):
        for k in range(1, n):
            for r in range(max_r + 1):
                ctx = RingContext(n, r)
                want = _identity_join(math.comb(n, k), r)
                direct = pairing_matrix(ctx, k)
                via_ring = pairing_matrix(ctx, k, via_chow=True)
                checked.append([n, k, r])
                if direct != want or via_ring != want:
                    failures.append([n, k, r])
    return {"check": "pairing", "passed": not failures, "checked": checked, "failures": failures}


def _random_valid(rng: random.Random, N: int, r: int) -> tuple[list[int], list[int]]:
    a = [rng.randint(0, 20) for _ in range(N)]
    b = [rng.randint(0, 20) for _ in range(r)]
    while sum(b) > sum(a):
        j = rng.randrange(r)
        b[j] = rng.randint(0, b[j])
    return a, b


def check_lemma_num(trials: int = 1000, max_N: int = 10, max_r: int = 6, seed: int = SEED) -> dict:
    rng = random.Random(seed)
    failures = []
    for t in range(trials):
        N, r = rng.randint(1, max_N), rng.randint(0, max_r)
        a, b = _random_valid(rng, N, r)
        dec = decompose(a, b)
        if not dec.is_nonnegative() or list(dec.vector()) != a + [-x for x in b]:
            failures.append({"a": a, "b": b})
    rejected = 0
    bad_inputs = [([1, 2], [4]), ([3, -1], [1]), ([2, 2], [-1]), ([0], [1])]
    for _ in range(trials // 10):
        N, r = rng.randint(1, max_N), rng.randint(1, max_r)
        a = [rng.randint(0, 20) for _ in range(N)]
        b = [rng.randint(0, 20) for _ in range(r)]
        b[0] += sum(a) - sum(b) + 1 if sum(b) <= sum(a) else 0
        bad_inputs.append((a, b))
    for a, b in bad_inputs:
        try:
            decompose(a, b)
        except DecompositionError:
            rejected += 1
        else:
            failures.append({"a": a, "b": b, "error": "accepted"})
    return {"check": "lemma-num", "passed": not failures, "decomposed": trials,
            "rejected": rejected, "failures": failures}


def _brute_force_components(n: int, monomials) -> set[frozenset]:
    """Minimal pair-free vanishing sets killing every monomial, by listing all 3^n strata."""
    supports = [m.support() for m in monomials]
    hits = []
    for choice in product((None, "x", "y"), repeat=n):
        V = frozenset((c, i) for i, c in enumerate(choice, start=1) if c)
        if all(S & V for S in supports):
            hits.append(V)
    return {V for V in hits if not any(U < V for U in hits)}


def check_lemma_bs(max_n: int = 6) -> dict:
    checked, failures = [], []
    for n in range(2, max_n + 1):
        ctx = RingContext(n, 1)
        loci = {}
        for s in range(1, n):
            sys = basis_Ws(n, s)
            got = base_locus(sys)
            strata = {st.vanishing for st, _ in got}
            loci[s] = strata
            want = {frozenset(("y", i) for i in I) for I in combinations(range(2, n + 1), n - s)}
            classes = {c for _, c in got}
            want_classes = {CycleClass(ctx, s, {frozenset(I): 1}, {1: -1})
                            for I in combinations(range(2, n + 1), n - s)}
            order, witness = order_witness(sys)
            ok = (strata == want and classes == want_classes
                  and strata == _brute_force_components(n, sys.monomials)
                  and order == s and witness.y_degree(range(2, n + 1)) == s)
            checked.append([n, s])
            if not ok:
                failures.append([n, s])
        for s in range(1, n - 1):
            grown = {T | {("y", j)} for T in loci[s + 1] for j in range(2, n + 1) if ("y", j) not in T}
            if grown != loci[s]:
                failures.append([n, s, "recursion"])
            sys = basis_Ws(n, s)
            for T in loci[s + 1]:
                stratum = CoordinateStratum(T)
                survivors = restrict_to_stratum(sys, stratum).monomials
                zeros = {st.vanishing for st in restricted_zero_locus(sys, stratum)}
                want = {T | {("y", j)} for j in range(2, n + 1) if ("y", j) not in T}
                if len(survivors) != 1 or zeros != want:
                    failures.append([n, s, "restriction", str(stratum)])
    return {"check": "lemma-bs", "passed": not failures, "checked": checked, "failures": failures}


def check_lemma_tor(max_n: int = 6) -> dict:
    checked, failures = [], []
    for n in range(3, max_n + 1):
        for s in range(1, n):
            ex = restricted_system_on_E(n, s)
            want = {frozenset(c) for c in combinations(range(2, n + 1), s)}
            # local order at p_j: total degree minus the exponent of z_j
            orders = {j: min(s - (j in I) for I in want) for j in range(2, n + 1)}
            from_cox = set(restrict_sections_to_exceptional(n, s))
            ok = (set(ex.monomials) == want == from_cox and ex.point_orders == orders
                  and ex.multiplicity_ok() and len(want) == math.comb(n - 1, s))
            checked.append([n, s])
            if not ok:
                failures.append([n, s])
        try:
            quotient_fan_exceptional(n)
        except AssertionError as exc:
            failures.append([n, "quotient", str(exc)])
        if cox_grading(n).relation_defects():
            failures.append([n, "cox grading"])
    return {"check": "lemma-tor", "passed": not failures, "checked": checked, "failures": failures}


def check_prop_tor(max_n: int = 5) -> dict:
    checked, failures = [], []
    for n in range(2, max_n + 1):
        nf = blowup_two_points(n)
        for k in range(1, n):
            # cones with n - k rays, i.e. k-dimensional orbit closures
            count = len(enumerate_cones(fan_p1n(n), k))
            if count != 2 ** (n - k) * math.comb(n, k):
                failures.append([n, k, "cone count"])
            classes = {c for _, c in invariant_cycle_classes(nf, k)}
            cone = FiberCone(nf.context, k)
            gens = set(cone.generators)
            extras = classes - gens
            pure = all(not c.e_coeffs and len(c.h_coeffs) == 1 for c in extras)
            rc = cone.as_rational_cone()
            inside = all(contains(rc, c.vector()).inside for c in extras)
            table_cone = RationalCone(rc.ambient_dim, [c.vector() for c in classes])
            extremal = {CycleClass.from_vector(nf.context, k, v) for v in extremal_rays(table_cone)}
            checked.append([n, k])
            if not (gens <= classes and pure and inside and extremal == gens):
                failures.append([n, k])
    return {"check": "prop-tor", "passed": not failures, "checked": checked, "failures": failures}


def _random_class(rng: random.Random, ctx: RingContext, k: int, lo: int = -20, hi: int = 20) -> CycleClass:
    h = {I: rng.randint(lo, hi) for I in index_sets(ctx.n, ctx.n - k)}
    e = {j: rng.randint(lo, hi) for j in range(1, ctx.r + 1)}
    return CycleClass(ctx, k, h, e)


def check_lemma_con(max_n: int = 5, trials: int = 200, seed: int = SEED) -> dict:
    rng = random.Random(seed)
    checked, failures = [], []
    cases = [(n, k) for n in range(2, max_n + 1) for k in range(1, n)]
    for n, k in cases:
        ctx = RingContext(n, 1)
        for Y in basis(ctx, k):
            try:
                lemma_con_identity(n, k, Y)
            except AssertionError:
                failures.append([n, k, str(Y)])
        checked.append([n, k])
    for _ in range(trials):
        n, k = rng.choice(cases)
        Y = _random_class(rng, RingContext(n, 1), k)
        try:
            lemma_con_identity(n, k, Y)
        except AssertionError:
            failures.append([n, k, str(Y)])
    return {"check": "lemma-con", "passed": not failures, "checked": checked,
            "random": trials, "failures": failures}


def check_thm_linear(max_n: int = 5) -> dict:
    checked = []
    confirmed = True
    for n in range(2, max_n + 1):
        fact = math.factorial(n)
        for r in range(fact + 3):
            value = factorial_boundary(n, r)
            checked.append([n, r, value])
            if value != fact - r or ((value >= 0) != (r <= fact)):
                confirmed = False
    return {"check": "thm-linear", "passed": confirmed, "checked": checked, "boundary_confirmed": confirmed}


def check_prop_not(max_n: int = 5, trials: int = 20, seed: int = SEED) -> dict:
    rng = random.Random(seed)
    checked, failures = [], []
    for n in range(3, max_n + 1):
        for k in range(1, n):
            m = n - k + 1
            for r in (1, 3):
                ctx = RingContext(m, r)
                for _ in range(trials):
                    C = _random_class(rng, ctx, 1, 0, 5)
                    C = CycleClass(ctx, 1, C.h_coeffs, {j: -abs(c) for j, c in C.e_coeffs.items()})
                    out = prop_not_construction(n, k, r, C)
                    Z = out.product
                    if (Z.sum_a() != C.sum_a() or Z.sum_b() != C.sum_b()
                            or out.curve_violates != out.product_violates
                            or out.product_violates != (C.sum_a() < C.sum_b())
                            or any(not I <= frozenset(range(1, m + 1)) for I in Z.h_coeffs)):
                        failures.append([n, k, r, str(C)])
                checked.append([n, k])
    return {"check": "prop-not", "passed": not failures, "checked": sorted(set(map(tuple, checked))),
            "failures": failures}


def check_prop44(trials: int = 50, seed: int = SEED) -> dict:
    rng = random.Random(seed)
    ctx = RingContext(4, 4)
    values, failures = {}, []
    for Y in basis(ctx, 2):
        try:
            values[str(Y)] = prop44_identity(Y)
        except AssertionError:
            failures.append(str(Y))
    for _ in range(trials):
        Y = _random_class(rng, ctx, 2)
        Y = CycleClass(ctx, 2, {I: Fraction(c, rng.randint(1, 6)) for I, c in Y.h_coeffs.items()}, Y.e_coeffs)
        try:
            prop44_identity(Y)
        except AssertionError:
            failures.append(str(Y))
    D = D1_cap_D2()
    d_value = prop44_identity(D)
    margin = D.sum_a() - D.sum_b()
    if d_value != 8 or margin != 4:
        failures.append(f"D1.D2 gives {d_value}, margin {margin}")
    return {"check": "prop-4-4", "passed": not failures, "basis_values": values,
            "D1D2": str(D), "D1D2_value": d_value, "D1D2_margin": margin, "failures": failures}


def check_phi(max_n: int = 6, max_r: int = 4) -> dict:
    checked, failures = [], []
    for n in range(2, max_n + 1):
        for r in range(1, max_r + 1):
            P = phi_map(n, r)
            ok = abs(P.determinant) == 1
            for c in range(n + r):
                e = [0] * (n + r)
                e[c] = 1
                ok = ok and P.backward(P.forward(e)) == e
            checked.append([n, r])
            if not ok:
                failures.append([n, r])
    transported = {}
    for n in range(2, max_n + 1):
        P = phi_map(n, 3)
        ctx = RingContext(n, 3)
        want = CycleClass(ctx, n - 1, {frozenset({1}): 1, frozenset({2}): 1}, {1: -1, 2: -1, 3: -1})
        src = hyperplane_through_points(n)
        got = P.forward(src)
        transported[str(n)] = {"source": src, "image": str(got)}
        if got != want or P.backward(want) != src:
            failures.append([n, "cor-div"])
    return {"check": "phi", "passed": not failures, "checked": checked,
            "cor_div": transported, "failures": failures}


def check_dual(cases=((2, 1, 1), (2, 1, 2), (3, 1, 2), (3, 2, 2), (4, 2, 2))) -> dict:
    """Listed dual rays against double description (not part of ``verify all``)."""
    failures = []
    for n, k, r in cases:
        cone = FiberCone(RingContext(n, r), k)
        listed = set(dual_rays(cone))
        computed = set(dual_via_polyhedral(cone))
        if listed != computed or len(listed) != math.comb(n, k) + 2 ** r - 1:
            failures.append([n, k, r])
    return {"check": "dual", "passed": not failures, "checked": [list(c) for c in cases], "failures": failures}


def check_membership(max_n: int = 4, trials: int = 50, seed: int = SEED) -> dict:
    """cf_membership certificates: decompositions reconstruct, separators pair negatively."""
    from .cycle_spaces import pair

    rng = random.Random(seed)
    failures = []
    for _ in range(trials):
        n = rng.randint(2, max_n)
        ctx = RingContext(n, rng.randint(0, 3))
        k = rng.randint(1, n - 1)
        alpha = _random_class(rng, ctx, k, -3, 8)
        m = cf_membership(alpha)
        if m.inside:
            ok = m.decomposition.is_nonnegative() and m.decomposition.reconstruct(ctx, k) == alpha
        else:
            ok = pair(alpha, m.separator) < 0
        if not ok:
            failures.append(str(alpha))
    return {"check": "membership", "passed": not failures, "failures": failures}


CHECKS = {
    "pairing": check_pairing,
    "lemma-num": check_lemma_num,
    "lemma-bs": check_lemma_bs,
    "lemma-tor": check_lemma_tor,
    "prop-tor": check_prop_tor,
    "lemma-con": check_lemma_con,
    "thm-linear": check_thm_linear,
    "prop-not": check_prop_not,
    "prop-4-4": check_prop44,
    "phi": check_phi,
}

# checks that take a size bound
SIZED = {"pairing", "lemma-bs", "lemma-tor", "prop-tor", "lemma-con", "thm-linear", "prop-not", "phi"}


def run(name: str, max_n: int | None = None) -> dict:
    if name == "all":
        results = [run(key, max_n) for key in CHECKS]
        return {"check": "all", "passed": all(r["passed"] for r in results), "results": results}
    if name not in CHECKS:
        raise KeyError(name)
    fn = CHECKS[name]
    if max_n is not None and name in SIZED:
        return fn(max_n=max_n)
    return fn()
