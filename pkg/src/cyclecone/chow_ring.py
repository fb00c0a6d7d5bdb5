"""Chow ring of the blowup X of (P^1)^n at r points.

The ring is presented as

    Z[h_1..h_n, e_1..e_r] / (h_i^2, h_i e_j, e_j e_l (j != l),
                            e_j^n - (-1)^(n-1) h_1...h_n)

Elements are stored on the monomial basis ``H(S)`` (a squarefree product of
the h_i, ``H(frozenset())`` being the unit) and ``E(j, s)`` (the power
``e_j^s`` with ``1 <= s <= n-1``).  ``e_j^n`` never appears in a stored
element: it is rewritten to ``(-1)^(n-1) H({1..n})`` on construction, so
equality of elements is equality of their term maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, NamedTuple, Union

Coeff = Union[int, Fraction]


class ContextMismatchError(ValueError):
    pass


class NotTopDegreeError(ValueError):
    pass


@dataclass(frozen=True)
class RingContext:
    """Number ``n`` of P^1 factors and number ``r`` of blown-up points."""

    n: int
    r: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        if not isinstance(self.r, int) or self.r < 0:
            raise ValueError(f"r must be a non-negative integer, got {self.r!r}")

    @property
    def full(self) -> frozenset:
        return frozenset(range(1, self.n + 1))

    def h(self, i: int) -> "ChowElement":
        return make_generator(self, "H", i)

    def e(self, j: int) -> "ChowElement":
        return make_generator(self, "E", j)

    def one(self) -> "ChowElement":
        return ChowElement(self, {H(frozenset()): 1})

    def zero(self) -> "ChowElement":
        return ChowElement(self, {})


class H(NamedTuple):
    S: frozenset

    @property
    def degree(self) -> int:
        return len(self.S)

    def __str__(self):
        if not self.S:
            return "1"
        return "*".join(f"h{i}" for i in sorted(self.S))


class E(NamedTuple):
    j: int
    s: int

    @property
    def degree(self) -> int:
        return self.s

    def __str__(self):
        return f"e{self.j}" if self.s == 1 else f"e{self.j}^{self.s}"


Monomial = Union[H, E]


def monomial_key(m: Monomial) -> tuple:
    """Total order on monomials: by degree, H before E, then indices."""
    if isinstance(m, H):
        return (m.degree, 0, tuple(sorted(m.S)))
    return (m.degree, 1, (m.j,))


def _normalize_coeff(c) -> Coeff:
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise TypeError(f"coefficients must be exact rationals, got {c!r}")
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _canonical_terms(ctx: RingContext, terms: Iterable[tuple[Monomial, Coeff]]) -> dict:
    n = ctx.n
    out: dict = {}
    for mono, c in terms:
        c = _normalize_coeff(c)
        if isinstance(mono, H):
            S = frozenset(mono.S)
            if not S <= ctx.full:
                raise ValueError(f"H index set {sorted(S)} not inside 1..{n}")
            mono = H(S)
        elif isinstance(mono, E):
            if not 1 <= mono.j <= ctx.r:
                raise ValueError(f"E index {mono.j} out of range 1..{ctx.r}")
            if mono.s < 1:
                raise ValueError(f"E exponent must be positive, got {mono.s}")
            if mono.s > n:
                continue
            if mono.s == n:
                mono, c = H(ctx.full), c * (-1) ** (n - 1)
        else:
            raise TypeError(f"not a Chow monomial: {mono!r}")
        out[mono] = out.get(mono, 0) + c
    return {m: _normalize_coeff(c) for m, c in out.items() if c != 0}


def _multiply_monomials(ctx: RingContext, a: Monomial, b: Monomial):
    """Product of two basis monomials as ``(monomial, sign)`` or None for zero."""
    if isinstance(a, H) and isinstance(b, H):
        if a.S & b.S:
            return None
        return H(a.S | b.S), 1
    if isinstance(a, E) and isinstance(b, E):
        if a.j != b.j:
            return None
        s = a.s + b.s
        if s > ctx.n:
            return None
        if s == ctx.n:
            return H(ctx.full), (-1) ** (ctx.n - 1)
        return E(a.j, s), 1
    h, e = (a, b) if isinstance(a, H) else (b, a)
    if h.S:
        return None
    return e, 1


class ChowElement:
    """Immutable element of the Chow ring, a finite map monomial -> coefficient."""

    __slots__ = ("context", "_terms", "_hash")

    def __init__(self, context: RingContext, terms: Mapping[Monomial, Coeff] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        object.__setattr__(self, "context", context)
        canon = _canonical_terms(context, items)
        object.__setattr__(self, "_terms", dict(sorted(canon.items(), key=lambda t: monomial_key(t[0]))))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ChowElement is immutable")

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coefficient(self, mono: Monomial) -> Coeff:
        return self._terms.get(mono, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set[int]:
        return {m.degree for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, d: int) -> "ChowElement":
        return ChowElement(self.context, {m: c for m, c in self._terms.items() if m.degree == d})

    def normalized(self) -> "ChowElement":
        return ChowElement(self.context, self._terms)

    def _check(self, other: "ChowElement"):
        if not isinstance(other, ChowElement):
            return NotImplemented
        if other.context != self.context:
            raise ContextMismatchError(f"{self.context} vs {other.context}")
        return None

    def __add__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            other = ChowElement(self.context, {H(frozenset()): other})
        if self._check(other) is NotImplemented:
            return NotImplemented
        return ChowElement(self.context, list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return ChowElement(self.context, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            return ChowElement(self.context, {m: c * other for m, c in self._terms.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self * other
        return NotImplemented

    def __pow__(self, m: int):
        if not isinstance(m, int) or m < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.context.one()
        for _ in range(m):
            result = multiply(result, self)
        return result

    def __eq__(self, other):
        if isinstance(other, ChowElement):
            return self.context == other.context and self._terms == other._terms
        if isinstance(other, Rational) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.context, tuple(self._terms.items()))))
        return self._hash

    def __repr__(self):
        return f"ChowElement({self.context.n}, {self.context.r}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self._terms.items():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = str(mono)
            if body == "1":
                text = str(a)
            elif a == 1:
                text = body
            else:
                text = f"{a}*{body}"
            parts.append((sign, text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out


def make_generator(ctx: RingContext, which: str, index: int) -> ChowElement:
    """Degree-one generator ``h_i`` (``which="H"``) or ``e_j`` (``which="E"``)."""
    if which == "H":
        if not 1 <= index <= ctx.n:
            raise IndexError(f"H index {index} out of range 1..{ctx.n}")
        return ChowElement(ctx, {H(frozenset({index})): 1})
    if which == "E":
        if not 1 <= index <= ctx.r:
            raise IndexError(f"E index {index} out of range 1..{ctx.r}")
        return ChowElement(ctx, {E(index, 1): 1})
    raise ValueError(f"unknown generator kind {which!r}")


def multiply(a: ChowElement, b: ChowElement) -> ChowElement:
    if not isinstance(a, ChowElement) or not isinstance(b, ChowElement):
        raise TypeError("multiply expects two ChowElements")
    if a.context != b.context:
        raise ContextMismatchError(f"{a.context} vs {b.context}")
    ctx = a.context
    acc: dict = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            prod = _multiply_monomials(ctx, ma, mb)
            if prod is None:
                continue
            mono, sign = prod
            acc[mono] = acc.get(mono, 0) + sign * ca * cb
    return ChowElement(ctx, acc)


def degree(a: ChowElement) -> Coeff:
    """Degree of a top-dimensional class: the coefficient of the point class."""
    degs = a.degrees()
    if degs and degs != {a.context.n}:
        raise NotTopDegreeError(f"element has degrees {sorted(degs)}, expected only {a.context.n}")
    return a.coefficient(H(a.context.full))


def self_intersection(d: ChowElement, m: int) -> ChowElement:
    if d.degrees() - {1}:
        raise ValueError("self_intersection expects a divisor (homogeneous of degree 1)")
    if not isinstance(m, int) or not 1 <= m <= d.context.n:
        raise ValueError(f"power must lie in 1..{d.context.n}, got {m!r}")
    return d ** m


def hyperplane_sum(ctx: RingContext, indices: Iterable[int] | None = None) -> ChowElement:
    """``sum h_i`` over the given factor indices (all factors by default)."""
    idx = range(1, ctx.n + 1) if indices is None else indices
    return ChowElement(ctx, {H(frozenset({i})): 1 for i in idx})


def hyperplanes_minus_points(ctx: RingContext, r: int | None = None) -> ChowElement:
    """The divisor ``sum_i h_i - sum_{j<=r} e_j``."""
    r = ctx.r if r is None else r
    return hyperplane_sum(ctx) - ChowElement(ctx, {E(j, 1): 1 for j in range(1, r + 1)})


def point_class(ctx: RingContext) -> ChowElement:
    return ChowElement(ctx, {H(ctx.full): 1})

