"""Monomial linear systems on (P^1)^n and their base loci.

Coordinates are ``(x_i : y_i)`` on the i-th factor and the blown-up point is
``q_1 = ((1:0), .., (1:0))``, i.e. the point where every ``y_i`` vanishes.
A variable is written ``("x", i)`` or ``("y", i)``.

For a system of squarefree monomials the common zero set is a union of
coordinate strata ``{v = 0 : v in V}``: its components are the minimal
vertex covers of the hypergraph of monomial supports that never contain both
``x_i`` and ``y_i`` (those strata are empty in P^1).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .chow_ring import RingContext
from .cycle_spaces import CycleClass

Variable = tuple  # ("x", i) or ("y", i)


def var_name(v: Variable) -> str:
    return f"{v[0]}{v[1]}"


def _var_key(v: Variable):
    return (v[1], v[0])


@dataclass(frozen=True)
class MHMonomial:
    """Multihomogeneous monomial: ``exps[i-1] = (deg in x_i, deg in y_i)``."""

    exps: tuple

    @classmethod
    def from_sets(cls, n: int, xs: Iterable[int] = (), ys: Iterable[int] = ()) -> "MHMonomial":
        xs, ys = set(xs), set(ys)
        return cls(tuple((int(i in xs), int(i in ys)) for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.exps)

    @property
    def multidegree(self) -> tuple:
        return tuple(dx + dy for dx, dy in self.exps)

    def is_squarefree(self) -> bool:
        return all(dx + dy <= 1 for dx, dy in self.exps)

    def support(self) -> frozenset:
        out = set()
        for i, (dx, dy) in enumerate(self.exps, start=1):
            if dx:
                out.add(("x", i))
            if dy:
                out.add(("y", i))
        return frozenset(out)

    def y_degree(self, indices: Iterable[int] | None = None) -> int:
        idx = range(1, self.n + 1) if indices is None else indices
        return sum(self.exps[i - 1][1] for i in idx)

    def __str__(self):
        parts = []
        for i, (dx, dy) in enumerate(self.exps, start=1):
            for name, d in (("x", dx), ("y", dy)):
                if d == 1:
                    parts.append(f"{name}{i}")
                elif d > 1:
                    parts.append(f"{name}{i}^{d}")
        return "*".join(parts) or "1"


def _mono_key(m: MHMonomial):
    return tuple((-dy, dx) for dx, dy in m.exps)


@dataclass(frozen=True)
class MonomialSystem:
    n: int
    monomials: frozenset
    cls: CycleClass | None = None

    def __post_init__(self):
        degs = {m.multidegree for m in self.monomials}
        if len(degs) > 1:
            raise ValueError(f"monomials of different multidegrees {sorted(degs)}")
        if any(m.n != self.n for m in self.monomials):
            raise ValueError(f"monomials must have {self.n} factors")

    def sorted_monomials(self) -> list[MHMonomial]:
        return sorted(self.monomials, key=_mono_key)


@dataclass(frozen=True)
class CoordinateStratum:
    """The locus where every variable in ``vanishing`` is zero."""

    vanishing: frozenset

    def __post_init__(self):
        idx = [i for _, i in self.vanishing]
        if len(idx) != len(set(idx)):
            raise ValueError(f"stratum {self} asks x_i = y_i = 0, which is empty")

    @classmethod
    def of_y(cls, indices: Iterable[int]) -> "CoordinateStratum":
        return cls(frozenset(("y", i) for i in indices))

    def indices(self) -> frozenset:
        return frozenset(i for _, i in self.vanishing)

    def sorted_vars(self) -> list[Variable]:
        return sorted(self.vanishing, key=_var_key)

    def __str__(self):
        return "{" + ",".join(var_name(v) for v in self.sorted_vars()) + "}"


def W_class(n: int, s: int) -> CycleClass:
    """``W_s = H_2 + .. + H_n - s E_1`` as a divisor class on X_1^n."""
    ctx = RingContext(n, 1)
    return CycleClass(ctx, n - 1, {frozenset({i}): 1 for i in range(2, n + 1)}, {1: -s})


def basis_Ws(n: int, s: int) -> MonomialSystem:
    """Monomials ``prod_{i in I} y_i prod_{j in I^c} x_j``, ``I`` in ``{2..n}``, ``|I| >= s``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 1 <= s <= n - 1:
        raise ValueError(f"s must lie in 1..{n - 1}, got {s}")
    rest = list(range(2, n + 1))
    monos = set()
    for size in range(s, n):
        for I in combinations(rest, size):
            monos.add(MHMonomial.from_sets(n, xs=set(rest) - set(I), ys=I))
    return MonomialSystem(n, frozenset(monos), W_class(n, s))


def minimal_transversals(edges: Iterable[frozenset]) -> list[frozenset]:
    """Minimal vertex covers of a hypergraph (Berge's incremental algorithm)."""
    covers = [frozenset()]
    for edge in edges:
        nxt = set()
        for T in covers:
            if T & edge:
                nxt.add(T)
            else:
                for v in edge:
                    nxt.add(T | {v})
        covers = [T for T in nxt if not any(U < T for U in nxt)]
    return covers


def _pair_free(vs: Iterable[Variable]) -> bool:
    idx = [i for _, i in vs]
    return len(idx) == len(set(idx))


def zero_strata(monomials: Iterable[MHMonomial], inside: CoordinateStratum | None = None) -> list[CoordinateStratum]:
    """Components of the common zero set, optionally within a given stratum."""
    base = inside.vanishing if inside else frozenset()
    edges = []
    for m in monomials:
        if not m.is_squarefree():
            raise ValueError(f"monomial {m} is not squarefree")
        supp = m.support()
        if supp & base:
            continue
        edges.append(supp)
    covers = [T | base for T in minimal_transversals(edges) if _pair_free(T | base)]
    covers = [T for T in covers if not any(U < T for U in covers)]
    strata = [CoordinateStratum(T) for T in covers]
    return sorted(strata, key=lambda st: [_var_key(v) for v in st.sorted_vars()])


def stratum_class(n: int, stratum: CoordinateStratum, ctx: RingContext | None = None) -> CycleClass | None:
    """Class on X_1^n of a coordinate stratum: ``H_I``, minus ``E_{1,dim}`` when
    it passes through ``q_1`` (only y's vanish).  None for points and for the
    whole space."""
    ctx = ctx or RingContext(n, 1)
    I = stratum.indices()
    k = n - len(I)
    if not 1 <= k <= n - 1:
        return None
    through_q1 = all(kind == "y" for kind, _ in stratum.vanishing)
    return CycleClass(ctx, k, {I: 1}, {1: -1} if through_q1 and ctx.r >= 1 else {})


def base_locus(sys: MonomialSystem) -> list[tuple[CoordinateStratum, CycleClass | None]]:
    """Base locus of a squarefree monomial system as strata with their classes."""
    return [(st, stratum_class(sys.n, st)) for st in zero_strata(sys.monomials)]


def multiplicity_along_L(sys: MonomialSystem) -> int:
    """Order of the system in the ideal ``(y_2, .., y_n)`` of L."""
    return order_witness(sys)[0]


def order_witness(sys: MonomialSystem) -> tuple[int, MHMonomial]:
    """The order along L and a monomial realising it (so not in the next power)."""
    if not sys.monomials:
        raise ValueError("empty linear system")
    idx = range(2, sys.n + 1)
    witness = min(sys.sorted_monomials(), key=lambda m: m.y_degree(idx))
    return witness.y_degree(idx), witness


def restrict_to_stratum(sys: MonomialSystem, stratum: CoordinateStratum) -> MonomialSystem:
    """Substitute zero for the stratum's variables and keep the survivors."""
    survivors = frozenset(m for m in sys.monomials if not (m.support() & stratum.vanishing))
    return MonomialSystem(sys.n, survivors, None)


def restricted_zero_locus(sys: MonomialSystem, stratum: CoordinateStratum) -> list[CoordinateStratum]:
    """Zero set on the stratum of a general member of the restricted system."""
    return zero_strata(restrict_to_stratum(sys, stratum).monomials, inside=stratum)


@dataclass(frozen=True)
class ExceptionalSystem:
    """Squarefree degree-s monomials ``prod_{i in I} z_i`` on P^(n-2) (variables ``z_2..z_n``)."""

    n: int
    s: int
    monomials: tuple
    point_orders: dict

    def multiplicity_ok(self) -> bool:
        return all(v == self.s - 1 for v in self.point_orders.values())


def restricted_system_on_E(n: int, s: int) -> ExceptionalSystem:
    """Degree-s squarefree monomials in ``z_2..z_n`` with their order at each
    fundamental point ``p_j`` (the point where only ``z_j`` is non-zero).

    The local order of ``prod_{i in I} z_i`` at ``p_j`` is ``s - [j in I]``;
    ``point_orders[j]`` is the minimum over the system.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 1 <= s <= n - 1:
        raise ValueError(f"s must lie in 1..{n - 1}")
    monos = tuple(frozenset(c) for c in combinations(range(2, n + 1), s))
    orders = {j: min(len(I - {j}) for I in monos) for j in range(2, n + 1)}
    return ExceptionalSystem(n, s, monos, orders)
