"""Numerical cycle classes N_k(X) on the blowup of (P^1)^n at r points.

A k-dimensional class is written on the basis ``H_I`` (``|I| = n - k``) and
``E_{j,k}`` (a k-plane in the j-th exceptional divisor).  Coefficients are
stored signed: the usual effective form ``sum a_I H_I - sum b_j E_{j,k}``
has ``e_coeffs[j] == -b_j``.

The module also carries the cone of fibers CF_k, its closed-form dual,
membership with certificates, and the decomposition of a class satisfying
``a_I >= 0, b_j >= 0, sum a >= sum b`` into fiber generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain, combinations
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .chow_ring import E, H, ChowElement, RingContext, degree, multiply


class DimensionMismatchError(ValueError):
    pass


class DecompositionError(ValueError):
    """Raised when a vector violates the hypotheses of the decomposition."""


def index_sets(n: int, size: int) -> list[frozenset]:
    """All subsets of ``{1..n}`` of the given size, in lexicographic order."""
    return [frozenset(c) for c in combinations(range(1, n + 1), size)]


def format_set(S: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(S)) + "}"


def _frac(c) -> Fraction:
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise TypeError(f"coefficients must be exact rationals, got {c!r}")
    return Fraction(c)


def _plain(c: Fraction):
    return c.numerator if c.denominator == 1 else c


class CycleClass:
    """Immutable element of N_k(X_r^n) with rational coefficients."""

    __slots__ = ("context", "k", "h_coeffs", "e_coeffs", "_key")

    def __init__(self, context: RingContext, k: int,
                 h_coeffs: Mapping[Iterable[int], Rational] | None = None,
                 e_coeffs: Mapping[int, Rational] | None = None):
        n = context.n
        if not isinstance(k, int) or not 1 <= k <= n - 1:
            raise ValueError(f"cycle dimension k must lie in 1..{n - 1}, got {k!r}")
        hs: dict = {}
        for I, c in (h_coeffs or {}).items():
            I = frozenset(I)
            if len(I) != n - k or not I <= context.full:
                raise ValueError(f"H index set {format_set(I)} invalid for n={n}, k={k}")
            hs[I] = hs.get(I, Fraction(0)) + _frac(c)
        es: dict = {}
        for j, c in (e_coeffs or {}).items():
            if not 1 <= j <= context.r:
                raise ValueError(f"E index {j} out of range 1..{context.r}")
            es[j] = es.get(j, Fraction(0)) + _frac(c)
        hs = {I: c for I, c in sorted(hs.items(), key=lambda t: sorted(t[0])) if c != 0}
        es = {j: c for j, c in sorted(es.items()) if c != 0}
        for name, value in (("context", context), ("k", k), ("h_coeffs", hs), ("e_coeffs", es)):
            object.__setattr__(self, name, value)
        object.__setattr__(self, "_key", (context, k, tuple(hs.items()), tuple(es.items())))

    def __setattr__(self, name, value):
        raise AttributeError("CycleClass is immutable")

    # -- basis and coordinates ------------------------------------------------

    @property
    def n(self) -> int:
        return self.context.n

    @property
    def r(self) -> int:
        return self.context.r

    def a(self, I: Iterable[int]) -> Fraction:
        return self.h_coeffs.get(frozenset(I), Fraction(0))

    def e(self, j: int) -> Fraction:
        return self.e_coeffs.get(j, Fraction(0))

    def b(self, j: int) -> Fraction:
        """Multiplicity ``b_j``: minus the coefficient of ``E_{j,k}``."""
        return -self.e(j)

    def sum_a(self) -> Fraction:
        return sum(self.h_coeffs.values(), Fraction(0))

    def sum_b(self) -> Fraction:
        return -sum(self.e_coeffs.values(), Fraction(0))

    def vector(self) -> tuple:
        """Coordinates on ``basis(context, k)``."""
        hs = tuple(self.a(I) for I in index_sets(self.n, self.n - self.k))
        return hs + tuple(self.e(j) for j in range(1, self.r + 1))

    @classmethod
    def from_vector(cls, context: RingContext, k: int, vec: Sequence[Rational]) -> "CycleClass":
        sets = index_sets(context.n, context.n - k)
        if len(vec) != len(sets) + context.r:
            raise DimensionMismatchError(
                f"vector of length {len(vec)} for N_{k} of dimension {len(sets) + context.r}")
        h = dict(zip(sets, vec[: len(sets)]))
        e = {j + 1: c for j, c in enumerate(vec[len(sets):])}
        return cls(context, k, h, e)

    # -- arithmetic -----------------------------------------------------------

    def _same_space(self, other):
        if not isinstance(other, CycleClass):
            return False
        if other.context != self.context or other.k != self.k:
            raise DimensionMismatchError(
                f"N_{self.k}(n={self.n},r={self.r}) vs N_{other.k}(n={other.n},r={other.r})")
        return True

    def __add__(self, other):
        if not self._same_space(other):
            return NotImplemented
        h = dict(self.h_coeffs)
        for I, c in other.h_coeffs.items():
            h[I] = h.get(I, 0) + c
        e = dict(self.e_coeffs)
        for j, c in other.e_coeffs.items():
            e[j] = e.get(j, 0) + c
        return CycleClass(self.context, self.k, h, e)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if not self._same_space(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, bool) or not isinstance(c, Rational):
            return NotImplemented
        return CycleClass(self.context, self.k,
                          {I: v * c for I, v in self.h_coeffs.items()},
                          {j: v * c for j, v in self.e_coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.h_coeffs and not self.e_coeffs

    def __eq__(self, other):
        if not isinstance(other, CycleClass):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"CycleClass(n={self.n}, r={self.r}, k={self.k}: {self})"

    def __str__(self):
        terms = [(c, f"H{format_set(I)}") for I, c in self.h_coeffs.items()]
        terms += [(c, f"E{{{j},{self.k}}}") for j, c in self.e_coeffs.items()]
        if not terms:
            return "0"
        out = ""
        for idx, (c, name) in enumerate(terms):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = name if mag == 1 else f"{_plain(mag)}*{name}"
            if idx == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += f" {sign} {body}"
        return out


def basis(context: RingContext, k: int) -> list[CycleClass]:
    """Canonical basis of N_k: ``H_I`` in lexicographic order, then ``E_{j,k}``."""
    hs = [CycleClass(context, k, {I: 1}) for I in index_sets(context.n, context.n - k)]
    return hs + [exceptional_class(context, k, j) for j in range(1, context.r + 1)]


def space_dimension(context: RingContext, k: int) -> int:
    return math.comb(context.n, k) + context.r


def fiber_class(context: RingContext, I: Iterable[int], j: int | None = None, k: int | None = None) -> CycleClass:
    """``H_I - E_{j,k}``, or ``H_I`` when ``j`` is None (k defaults to n - |I|)."""
    I = frozenset(I)
    k = context.n - len(I) if k is None else k
    return CycleClass(context, k, {I: 1}, {} if j is None else {j: -1})


def exceptional_class(context: RingContext, k: int, j: int) -> CycleClass:
    return CycleClass(context, k, {}, {j: 1})


# -- intersection pairing and Chow conversion ---------------------------------


def pair(alpha: CycleClass, beta: CycleClass) -> Fraction:
    """Intersection number of classes of complementary dimension."""
    if alpha.context != beta.context:
        raise DimensionMismatchError(f"contexts differ: {alpha.context} vs {beta.context}")
    if alpha.k + beta.k != alpha.n:
        raise DimensionMismatchError(f"dimensions {alpha.k} and {beta.k} are not complementary in n={alpha.n}")
    full = alpha.context.full
    total = Fraction(0)
    for I, c in alpha.h_coeffs.items():
        total += c * beta.a(full - I)
    for j, c in alpha.e_coeffs.items():
        total -= c * beta.e(j)
    return total


def to_chow(alpha: CycleClass) -> ChowElement:
    """``H_I -> h_I`` and ``E_{j,k} -> (-1)^(n-k+1) e_j^(n-k)``."""
    n, k = alpha.n, alpha.k
    sign = (-1) ** (n - k + 1)
    terms = [(H(I), c) for I, c in alpha.h_coeffs.items()]
    terms += [(E(j, n - k), sign * c) for j, c in alpha.e_coeffs.items()]
    return ChowElement(alpha.context, terms)


def from_chow(x: ChowElement, k: int) -> CycleClass:
    n = x.context.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"cycle dimension k must lie in 1..{n - 1}, got {k}")
    degs = x.degrees()
    if degs and degs != {n - k}:
        raise DimensionMismatchError(f"element has degrees {sorted(degs)}, expected codimension {n - k}")
    sign = (-1) ** (n - k + 1)
    h, e = {}, {}
    for mono, c in x.terms.items():
        if isinstance(mono, H):
            h[mono.S] = c
        else:
            e[mono.j] = sign * c
    return CycleClass(x.context, k, h, e)


def pair_via_chow(alpha: CycleClass, beta: CycleClass) -> Fraction:
    if alpha.k + beta.k != alpha.n:
        raise DimensionMismatchError("dimensions are not complementary")
    return Fraction(degree(multiply(to_chow(alpha), to_chow(beta))))


def pairing_matrix(context: RingContext, k: int, via_chow: bool = False) -> list[list[Fraction]]:
    """Matrix of N_k x N_{n-k}; N_{n-k} is ordered by complements of the N_k basis.

    With this ordering the matrix is ``diag(I_N, -I_r)``.
    """
    rows = basis(context, k)
    cols = dual_ordered_basis(context, k)
    f = pair_via_chow if via_chow else pair
    return [[f(a, b) for b in cols] for a in rows]


def dual_ordered_basis(context: RingContext, k: int) -> list[CycleClass]:
    """Basis of N_{n-k} listing ``H_{I^c}`` in the order of ``basis(context, k)``."""
    full = context.full
    hs = [CycleClass(context, context.n - k, {full - I: 1}) for I in index_sets(context.n, context.n - k)]
    return hs + [exceptional_class(context, context.n - k, j) for j in range(1, context.r + 1)]


# -- the cone of fibers -------------------------------------------------------


@dataclass(frozen=True)
class FiberCone:
    """The cone CF_k generated by ``H_I - E_{j,k}`` and ``E_{j,k}``.

    With no blown-up points the cone is taken to be generated by the ``H_I``.
    """

    context: RingContext
    k: int
    generators: tuple = field(init=False)

    def __post_init__(self):
        ctx, k = self.context, self.k
        if not 1 <= k <= ctx.n - 1:
            raise ValueError(f"cycle dimension k must lie in 1..{ctx.n - 1}, got {k}")
        sets = index_sets(ctx.n, ctx.n - k)
        if ctx.r == 0:
            gens = [fiber_class(ctx, I, k=k) for I in sets]
        else:
            gens = [fiber_class(ctx, I, j, k) for j in range(1, ctx.r + 1) for I in sets]
            gens += [exceptional_class(ctx, k, j) for j in range(1, ctx.r + 1)]
        object.__setattr__(self, "generators", tuple(gens))

    def generator_vectors(self) -> list[tuple]:
        return [g.vector() for g in self.generators]

    def as_rational_cone(self):
        from .polyhedral import RationalCone

        return RationalCone(space_dimension(self.context, self.k), self.generator_vectors())


@dataclass
class Decomposition:
    """Non-negative combination of fiber generators.

    ``fibers[(i, j)]`` weights ``e_i - e_{N+j}`` (the class ``H_{I_i} - E_{j,k}``),
    ``exceptional[j]`` weights ``e_{N+j}`` and ``plain[i]`` weights ``e_i``
    (only used when there are no exceptional coordinates).  Indices are 1-based.
    """

    N: int
    r: int
    fibers: dict = field(default_factory=dict)
    exceptional: dict = field(default_factory=dict)
    plain: dict = field(default_factory=dict)

    def _add(self, table: dict, key, c):
        table[key] = table.get(key, Fraction(0)) + Fraction(c)

    def coefficients(self) -> list:
        return list(self.fibers.values()) + list(self.exceptional.values()) + list(self.plain.values())

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coefficients())

    def vector(self) -> tuple:
        v = [Fraction(0)] * (self.N + self.r)
        for (i, j), c in self.fibers.items():
            v[i - 1] += c
            v[self.N + j - 1] -= c
        for j, c in self.exceptional.items():
            v[self.N + j - 1] += c
        for i, c in self.plain.items():
            v[i - 1] += c
        return tuple(v)

    def scaled(self, factor) -> "Decomposition":
        f = Fraction(factor)
        return Decomposition(self.N, self.r,
                             {key: c * f for key, c in self.fibers.items()},
                             {key: c * f for key, c in self.exceptional.items()},
                             {key: c * f for key, c in self.plain.items()})

    def combo(self, context: RingContext, k: int) -> dict:
        """The decomposition as ``{generator class: weight}``."""
        sets = index_sets(context.n, context.n - k)
        out: dict = {}
        for (i, j), c in self.fibers.items():
            out[fiber_class(context, sets[i - 1], j, k)] = c
        for j, c in self.exceptional.items():
            out[exceptional_class(context, k, j)] = c
        for i, c in self.plain.items():
            out[fiber_class(context, sets[i - 1], k=k)] = c
        return out

    def reconstruct(self, context: RingContext, k: int) -> CycleClass:
        return CycleClass.from_vector(context, k, self.vector())


def _decompose_integral(a: list[int], b: list[int]) -> Decomposition:
    N, r = len(a), len(b)
    a, b = list(a), list(b)
    dec = Decomposition(N, r)
    while any(b):
        i = next(idx for idx, v in enumerate(a) if v > 0)
        j = next(idx for idx, v in enumerate(b) if v > 0)
        m = min(a[i], b[j])
        dec._add(dec.fibers, (i + 1, j + 1), m)
        a[i] -= m
        b[j] -= m
    if r == 0:
        for i, v in enumerate(a):
            if v:
                dec._add(dec.plain, i + 1, v)
        return dec
    total = sum(a)
    for i, v in enumerate(a):
        if v:
            dec._add(dec.fibers, (i + 1, 1), v)
    if total:
        dec._add(dec.exceptional, 1, total)
    return dec


def decompose(a: Sequence[Rational], b: Sequence[Rational]) -> Decomposition:
    """Write ``(a_1..a_N, -b_1..-b_r)`` as a non-negative combination of
    ``e_{N+j}`` and ``e_i - e_{N+j}``.

    Requires every ``a_i, b_j >= 0`` and ``sum(a) >= sum(b)``.  Rational input
    is scaled to integers, decomposed, and scaled back.  Whenever several
    pairs ``(i, j)`` are available the smallest indices are used.
    """
    a = [_frac(x) for x in a]
    b = [_frac(x) for x in b]
    for name, vals in (("a", a), ("b", b)):
        for idx, v in enumerate(vals, start=1):
            if v < 0:
                raise DecompositionError(f"{name}_{idx} = {_plain(v)} < 0")
    if sum(a) < sum(b):
        raise DecompositionError(f"sum(a) = {_plain(sum(a, Fraction(0)))} < sum(b) = {_plain(sum(b, Fraction(0)))}")
    scale = math.lcm(*(x.denominator for x in chain(a, b)))
    dec = _decompose_integral([int(x * scale) for x in a], [int(x * scale) for x in b])
    return dec.scaled(Fraction(1, scale))


def dual_rays(cone: FiberCone) -> list[CycleClass]:
    """Extremal rays of the dual of CF_k, as classes of dimension n - k.

    ``H_I`` for ``|I| = k``, then ``sum_{|I|=k} H_I - sum_{j in S} E_{j,n-k}``
    for every non-empty ``S``, ordered by size of ``S`` and then
    lexicographically.
    """
    ctx, k = cone.context, cone.k
    m = ctx.n - k
    sets = index_sets(ctx.n, k)
    rays = [CycleClass(ctx, m, {I: 1}) for I in sets]
    everything = {I: 1 for I in sets}
    for size in range(1, ctx.r + 1):
        for S in combinations(range(1, ctx.r + 1), size):
            rays.append(CycleClass(ctx, m, everything, {j: -1 for j in S}))
    return rays


@dataclass
class Membership:
    inside: bool
    decomposition: Decomposition | None = None
    separator: CycleClass | None = None


def cf_membership(alpha: CycleClass) -> Membership:
    """Decide ``alpha in CF_k``.

    Inside comes with a Decomposition; outside comes with a dual ray pairing
    negatively with ``alpha``.
    """
    ctx, k = alpha.context, alpha.k
    sets = index_sets(ctx.n, ctx.n - k)
    a = [alpha.a(I) for I in sets]
    b = [alpha.b(j) for j in range(1, ctx.r + 1)]
    full = ctx.full
    for I, v in zip(sets, a):
        if v < 0:
            return Membership(False, separator=CycleClass(ctx, ctx.n - k, {full - I: 1}))
    positive_b = [max(v, Fraction(0)) for v in b]
    if sum(a) < sum(positive_b):
        S = [j for j, v in enumerate(b, start=1) if v > 0]
        sep = CycleClass(ctx, ctx.n - k, {I: 1 for I in index_sets(ctx.n, k)}, {j: -1 for j in S})
        return Membership(False, separator=sep)
    dec = decompose(a, positive_b)
    for j, v in enumerate(b, start=1):
        if v < 0:
            dec._add(dec.exceptional, j, -v)
    return Membership(True, decomposition=dec)


@dataclass
class CriterionEntry:
    cls: CycleClass
    sum_a: Fraction
    sum_b: Fraction

    @property
    def passes(self) -> bool:
        return self.sum_a >= self.sum_b


@dataclass
class CriterionReport:
    entries: list
    verdict: str

    @property
    def refuted(self) -> bool:
        return any(not e.passes for e in self.entries)


NOT_FIBER_GENERATED = "not fiber-generated"
CONSISTENT = "consistent with fiber-generation relative to the supplied classes"


def fg_criterion(classes: Iterable[CycleClass]) -> CriterionReport:
    """Check ``sum a_I >= sum b_j`` for classes of irreducible subvarieties.

    A failing class certifies that the pseudoeffective cone is larger than
    CF_k.  Passing every supplied class decides nothing beyond those classes.
    """
    entries = []
    for c in classes:
        bad = [f"H{format_set(I)}" for I, v in c.h_coeffs.items() if v < 0]
        bad += [f"E{{{j},{c.k}}}" for j, v in c.e_coeffs.items() if v > 0]
        if bad:
            raise ValueError(f"class {c} has a_I or b_j negative at {', '.join(bad)}")
        entries.append(CriterionEntry(c, c.sum_a(), c.sum_b()))
    verdict = NOT_FIBER_GENERATED if any(not e.passes for e in entries) else CONSISTENT
    return CriterionReport(entries, verdict)


def dual_via_polyhedral(cone: FiberCone) -> list[CycleClass]:
    """Extremal rays of the dual of CF_k computed by double description.

    The standard-dual rays ``w`` are mapped back through the pairing: the
    class ``beta`` with ``pair(g, beta) == g . w`` for every ``g``.
    """
    from .polyhedral import dualize, extremal_rays

    ctx, k = cone.context, cone.k
    dual = dualize(cone.as_rational_cone())
    sets = index_sets(ctx.n, ctx.n - k)
    full = ctx.full
    out = []
    for w in extremal_rays(dual):
        h = {full - I: w[idx] for idx, I in enumerate(sets)}
        e = {j: -w[len(sets) + j - 1] for j in range(1, ctx.r + 1)}
        out.append(CycleClass(ctx, ctx.n - k, h, e))
    return out
