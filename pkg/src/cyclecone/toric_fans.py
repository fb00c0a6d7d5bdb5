"""Simplicial fans of (P^1)^n and of its toric blowups.

Covers the fan of (P^1)^n, stellar subdivision, enumeration of cones by
codimension, the classes of torus-invariant cycles on the blowups at one or
two fixed points, and the blowup ``Xt`` of X_1^n along the curve L together
with its Cox ring grading and the quotient fan of the exceptional divisor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .chow_ring import RingContext
from .cycle_spaces import CycleClass, exceptional_class
from .polyhedral import linear_feasible, primitive


class FanError(ValueError):
    pass


class UnsupportedFanError(ValueError):
    pass


class QuotientMismatchError(AssertionError):
    pass


# -- exact linear algebra on small square systems -----------------------------


def solve(columns: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Solve ``sum_i x_i columns[i] == v``; None if singular or inconsistent."""
    n = len(v)
    m = len(columns)
    A = [[Fraction(columns[c][r]) for c in range(m)] + [Fraction(v[r])] for r in range(n)]
    piv_cols = []
    row = 0
    for col in range(m):
        p = next((i for i in range(row, n) if A[i][col] != 0), None)
        if p is None:
            return None
        A[row], A[p] = A[p], A[row]
        pv = A[row][col]
        A[row] = [x / pv for x in A[row]]
        for i in range(n):
            if i != row and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[row])]
        piv_cols.append(col)
        row += 1
    if any(A[i][-1] != 0 for i in range(row, n)):
        return None
    return [A[i][-1] for i in range(m)]


def kernel_vector(rows: Sequence[Sequence], d: int) -> tuple:
    """A non-zero vector orthogonal to ``d - 1`` independent rows."""
    for t in range(d):
        target = [Fraction(0)] * len(rows) + [Fraction(1)]
        probe = [tuple(r) for r in rows] + [tuple(1 if i == t else 0 for i in range(d))]
        cols = [tuple(row[i] for row in probe) for i in range(d)]
        x = solve(cols, target)
        if x is not None:
            return tuple(primitive(x))
    raise FanError("rows are not independent")


# -- fans ---------------------------------------------------------------------


@dataclass(frozen=True)
class Fan:
    """Simplicial fan: primitive integer rays and maximal cones as ray-index sets."""

    dim: int
    rays: tuple
    max_cones: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        cones = sorted({frozenset(c) for c in self.max_cones}, key=lambda c: sorted(c))
        object.__setattr__(self, "max_cones", tuple(cones))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(list(r)) for r in self.rays))

    def label(self, cone: Iterable[int]) -> str:
        return "<" + ", ".join(self.labels[i] for i in sorted(cone)) + ">"

    def ray_vectors(self, cone: Iterable[int]) -> list[tuple]:
        return [self.rays[i] for i in sorted(cone)]

    def contains_point(self, cone: Iterable[int], v: Sequence, interior: bool = False) -> bool:
        x = solve(self.ray_vectors(cone), v)
        if x is None:
            return False
        return all(c > 0 for c in x) if interior else all(c >= 0 for c in x)

    def check(self) -> "Fan":
        """Verify the simplicial fan axioms; raises FanError on failure."""
        n = self.dim
        for r in self.rays:
            if len(r) != n or tuple(primitive(r)) != r:
                raise FanError(f"ray {r} is not a primitive vector of length {n}")
        for c in self.max_cones:
            if len(c) != n:
                raise FanError(f"maximal cone {self.label(c)} has {len(c)} rays, expected {n}")
            if solve(self.ray_vectors(c), [0] * n) is None:
                raise FanError(f"maximal cone {self.label(c)} is not simplicial")
        walls: dict = {}
        for c in self.max_cones:
            for w in combinations(sorted(c), n - 1):
                walls.setdefault(frozenset(w), []).append(c)
        if all(len(cs) == 2 for cs in walls.values()):
            self._check_complete(walls)
        else:
            self._check_pairwise()
        return self

    def _check_complete(self, walls: dict):
        # complete simplicial fans: every wall separates its two cones, and a
        # generic point is covered exactly once
        n = self.dim
        for w, (c1, c2) in walls.items():
            normal = kernel_vector(self.ray_vectors(w), n) if n > 1 else (1,)
            (u,) = c1 - w
            (v,) = c2 - w
            su = sum(a * b for a, b in zip(normal, self.rays[u]))
            sv = sum(a * b for a, b in zip(normal, self.rays[v]))
            if su * sv >= 0:
                raise FanError(f"cones {self.label(c1)} and {self.label(c2)} overlap across a wall")
        probe = _generic_point(self)
        hits = [c for c in self.max_cones if self.contains_point(c, probe, interior=True)]
        if len(hits) != 1:
            raise FanError(f"generic point {probe} lies in {len(hits)} maximal cones")

    def _check_pairwise(self):
        n = self.dim
        for c1, c2 in combinations(self.max_cones, 2):
            common = c1 & c2
            eq = [self.rays[i] for i in common]
            ge = [self.rays[i] for i in c1 - common] + [tuple(-x for x in self.rays[i]) for i in c2 - common]
            if not linear_feasible(eq, ge, [1] * len(ge), n):
                raise FanError(f"cones {self.label(c1)} and {self.label(c2)} do not meet in a common face")


def _generic_point(fan: Fan) -> tuple:
    n = fan.dim
    for shift in range(1, 200):
        p = tuple(shift * (i + 1) ** 2 + i for i in range(n))
        p = tuple(x if i % 2 == 0 else -x for i, x in enumerate(p))
        on_wall = False
        for c in fan.max_cones:
            x = solve(fan.ray_vectors(c), p)
            if x is not None and any(t == 0 for t in x):
                on_wall = True
                break
        if not on_wall:
            return p
    raise FanError("no generic point found")


def _unit(n: int, i: int, sign: int = 1) -> tuple:
    return tuple(sign if t == i - 1 else 0 for t in range(n))


def fan_p1n(n: int) -> Fan:
    """Rays ``e_1..e_n, -e_1..-e_n`` (indices 0..2n-1); one cone per sign choice."""
    if n < 1:
        raise ValueError("n must be positive")
    rays = [_unit(n, i) for i in range(1, n + 1)] + [_unit(n, i, -1) for i in range(1, n + 1)]
    labels = [f"e{i}" for i in range(1, n + 1)] + [f"-e{i}" for i in range(1, n + 1)]
    cones = [frozenset(i if s > 0 else n + i for i, s in enumerate(signs))
             for signs in product((1, -1), repeat=n)]
    return Fan(n, tuple(rays), tuple(cones), tuple(labels)).check()


def stellar_subdivide(f: Fan, cone: Iterable[int], new_ray: Sequence[int], label: str | None = None) -> Fan:
    """Star subdivision of ``f`` at a ray in the relative interior of ``cone``.

    Every maximal cone ``sigma`` containing ``cone`` is replaced by the cones
    ``{new} + sigma - {rho}`` for ``rho`` in ``cone``.  The new ray gets the
    next free index.
    """
    cone = frozenset(cone)
    new_ray = tuple(int(x) for x in new_ray)
    if not cone or not any(cone <= c for c in f.max_cones):
        raise FanError(f"{sorted(cone)} is not a cone of the fan")
    if not f.contains_point(cone, new_ray, interior=True):
        raise FanError(f"ray {list(new_ray)} is not in the relative interior of {f.label(cone)}")
    idx = len(f.rays)
    rays = f.rays + (tuple(primitive(new_ray)),)
    labels = f.labels + (label or str(list(new_ray)),)
    cones = []
    for sigma in f.max_cones:
        if cone <= sigma:
            cones.extend((sigma - {rho}) | {idx} for rho in cone)
        else:
            cones.append(sigma)
    return Fan(f.dim, rays, tuple(cones), labels).check()


def enumerate_cones(f: Fan, codim: int) -> list[frozenset]:
    """All cones with ``dim - codim`` rays, sorted by ray indices."""
    if not 0 <= codim <= f.dim:
        raise ValueError(f"codimension must lie in 0..{f.dim}")
    size = f.dim - codim
    faces = {frozenset(s) for c in f.max_cones for s in combinations(sorted(c), size)}
    return sorted(faces, key=lambda c: sorted(c))


# -- the named toric blowups ------------------------------------------------------


@dataclass(frozen=True)
class BlownUpPoint:
    j: int
    cone: frozenset  # maximal cone of (P^1)^n of the fixed point
    ray: int  # index of the exceptional ray


@dataclass(frozen=True)
class NamedFan:
    name: str
    n: int
    fan: Fan
    points: tuple = ()
    params: dict = field(default_factory=dict)

    @property
    def context(self) -> RingContext:
        return RingContext(self.n, len(self.points))


def _sign_cone(n: int, positive: Iterable[int]) -> frozenset:
    pos = set(positive)
    return frozenset(i - 1 if i in pos else n + i - 1 for i in range(1, n + 1))


def _blowup_points(name: str, n: int, point_signs: list[set], params=None) -> NamedFan:
    fan = fan_p1n(n)
    points = []
    for j, pos in enumerate(point_signs, start=1):
        cone = _sign_cone(n, pos)
        ray = tuple(1 if i in pos else -1 for i in range(1, n + 1))
        fan = stellar_subdivide(fan, cone, ray, label=f"rho{j}")
        points.append(BlownUpPoint(j, cone, len(fan.rays) - 1))
    return NamedFan(name, n, fan, tuple(points), dict(params or {}))


def blowup_one_point(n: int) -> NamedFan:
    """X_1^n: the cone ``<e_1..e_n>`` subdivided at ``sum e_i``."""
    return _blowup_points("x1", n, [set(range(1, n + 1))])


def blowup_two_points(n: int) -> NamedFan:
    """X_2^n: ``<e_i>`` and ``<-e_i>`` subdivided at ``rho`` and ``-rho``."""
    return _blowup_points("x2", n, [set(range(1, n + 1)), set()])


def blowup_two_points_on_fiber(n: int, s: int, J: Iterable[int] | None = None) -> NamedFan:
    """Two fixed points on a common s-dimensional fiber of ``p_J``, ``|J| = n - s``.

    The points are ``<e_i>`` and the cone with ``+`` on J and ``-`` off J.
    """
    if not 1 <= s <= n - 1:
        raise ValueError(f"s must lie in 1..{n - 1}")
    J = set(range(1, n - s + 1)) if J is None else set(J)
    if len(J) != n - s or not J <= set(range(1, n + 1)):
        raise ValueError(f"J must be a subset of 1..{n} of size {n - s}")
    return _blowup_points("x2fiber", n, [set(range(1, n + 1)), J], {"s": s, "J": sorted(J)})


def blowup_tilde(n: int) -> NamedFan:
    """The blowup of X_1^n along L.

    The point is the cone ``<-e_1..-e_n>`` (subdivided at ``rho1 = -sum e_i``),
    L is ``<-e_2..-e_n>`` (subdivided at ``rho2 = -sum_{i>=2} e_i``).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    fan = fan_p1n(n)
    c_point = _sign_cone(n, set())
    fan = stellar_subdivide(fan, c_point, [-1] * n, label="rho1")
    rho1 = len(fan.rays) - 1
    c_curve = frozenset(n + i - 1 for i in range(2, n + 1))
    fan = stellar_subdivide(fan, c_curve, [0] + [-1] * (n - 1), label="rho2")
    return NamedFan("xtilde", n, fan, (BlownUpPoint(1, c_point, rho1),), {"rho2": len(fan.rays) - 1})


def preset(name: str, n: int, s: int | None = None) -> NamedFan | Fan:
    if name == "p1n":
        return NamedFan("p1n", n, fan_p1n(n))
    if name == "x1":
        return blowup_one_point(n)
    if name == "x2":
        return blowup_two_points(n)
    if name == "x2fiber":
        if s is None:
            raise ValueError("preset x2fiber needs s")
        return blowup_two_points_on_fiber(n, s)
    if name == "xtilde":
        return blowup_tilde(n)
    raise UnsupportedFanError(f"unknown preset {name!r}")


def invariant_cycle_classes(nf: NamedFan, k: int) -> list[tuple[frozenset, CycleClass]]:
    """Class of the orbit closure of every cone with ``n - k`` rays.

    A cone through an exceptional ray ``rho_j`` gives ``E_{j,k}``.  A cone of
    rays ``+-e_i`` (``i in I``) gives ``H_I - sum E_{j,k}`` over the blown-up
    points whose maximal cone contains it.
    """
    if nf.name == "xtilde":
        raise UnsupportedFanError("cycle classes on Xt are only available as Cox divisor classes")
    if nf.name not in ("p1n", "x1", "x2", "x2fiber"):
        raise UnsupportedFanError(f"no class table for fan {nf.name!r}")
    n = nf.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}")
    ctx = nf.context
    exceptional = {p.ray: p for p in nf.points}
    out = []
    for tau in enumerate_cones(nf.fan, k):
        hit = [exceptional[i] for i in tau if i in exceptional]
        if len(hit) > 1:
            raise UnsupportedFanError(f"cone {nf.fan.label(tau)} meets two exceptional rays")
        if hit:
            out.append((tau, exceptional_class(ctx, k, hit[0].j)))
            continue
        I = frozenset(i % n + 1 for i in tau)
        through = {p.j: -1 for p in nf.points if tau <= p.cone}
        out.append((tau, CycleClass(ctx, k, {I: 1}, through)))
    return out


# -- Xt: Cox ring, grading and the exceptional divisor -------------------------


@dataclass(frozen=True)
class TildeDivisor:
    """Divisor class on Xt in the basis ``H_1..H_n, E_1, E``."""

    h: tuple
    e1: int
    e: int

    def __add__(self, other):
        return TildeDivisor(tuple(a + b for a, b in zip(self.h, other.h)), self.e1 + other.e1, self.e + other.e)

    def __mul__(self, c: int):
        return TildeDivisor(tuple(a * c for a in self.h), self.e1 * c, self.e * c)

    __rmul__ = __mul__

    def __str__(self):
        parts = [(c, f"H{i}") for i, c in enumerate(self.h, start=1)] + [(self.e1, "E1"), (self.e, "E")]
        out = ""
        for c, name in parts:
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            body = name if abs(c) == 1 else f"{abs(c)}*{name}"
            out = (("-" if sign == "-" else "") + body) if not out else f"{out} {sign} {body}"
        return out or "0"


def _tdiv(n: int, h: dict | None = None, e1: int = 0, e: int = 0) -> TildeDivisor:
    h = h or {}
    return TildeDivisor(tuple(h.get(i, 0) for i in range(1, n + 1)), e1, e)


@dataclass(frozen=True)
class CoxVariable:
    name: str
    ray: tuple
    divisor: TildeDivisor


@dataclass(frozen=True)
class CoxGrading:
    n: int
    variables: tuple

    def degree(self, monomial: dict) -> TildeDivisor:
        by_name = {v.name: v.divisor for v in self.variables}
        total = _tdiv(self.n)
        for name, exp in monomial.items():
            total = total + by_name[name] * exp
        return total

    def relation_defects(self) -> list[tuple[int, TildeDivisor]]:
        """Characters ``m = e_i^*`` whose relation ``sum <m, v_rho> D_rho`` is not zero."""
        bad = []
        for i in range(self.n):
            total = _tdiv(self.n)
            for v in self.variables:
                if v.ray[i]:
                    total = total + v.divisor * v.ray[i]
            if total != _tdiv(self.n):
                bad.append((i + 1, total))
        return bad


def cox_grading(n: int, as_printed: bool = False) -> CoxGrading:
    """Cox variables of Xt with their divisor classes.

    ``U_1`` (the ray ``rho1``) has class ``E_1``: this is forced by the
    relation ``T_1 = S_1 U_1`` and is the value under which the sections of
    ``Wt_s`` are homogeneous.  ``as_printed=True`` uses ``E_1 - E`` instead,
    which fails those relations.
    """
    vs = []
    for i in range(1, n + 1):
        vs.append(CoxVariable(f"T{i}", _unit(n, i), _tdiv(n, {i: 1})))
    vs.append(CoxVariable("S1", _unit(n, 1, -1), _tdiv(n, {1: 1}, e1=-1)))
    for i in range(2, n + 1):
        vs.append(CoxVariable(f"S{i}", _unit(n, i, -1), _tdiv(n, {i: 1}, e1=-1, e=-1)))
    u1 = _tdiv(n, e1=1, e=-1) if as_printed else _tdiv(n, e1=1)
    vs.append(CoxVariable("U1", tuple([-1] * n), u1))
    vs.append(CoxVariable("U2", tuple([0] + [-1] * (n - 1)), _tdiv(n, e=1)))
    order = {name: t for t, name in enumerate(_cox_order(n))}
    return CoxGrading(n, tuple(sorted(vs, key=lambda v: order[v.name])))


def _cox_order(n: int) -> list[str]:
    return [x for i in range(1, n + 1) for x in (f"T{i}", f"S{i}")] + ["U1", "U2"]


def tilde_W(n: int, s: int) -> TildeDivisor:
    """Strict transform ``sum_{i>=2} H_i - s E_1 - s E`` of ``W_s``."""
    return _tdiv(n, {i: 1 for i in range(2, n + 1)}, e1=-s, e=-s)


def _freeze(mono: dict, n: int) -> tuple:
    order = _cox_order(n)
    return tuple((name, mono[name]) for name in order if mono.get(name))


def cox_sections_Ws(n: int, s: int) -> list[tuple]:
    """Monomials ``prod T_j S_i (U_1 U_2)^{|I|-s}`` over ``I`` in ``{2..n}``, ``|I| >= s``.

    Each monomial is a tuple of ``(variable, exponent)`` pairs.
    """
    if not 1 <= s <= n - 1:
        raise ValueError(f"s must lie in 1..{n - 1}")
    out = []
    rest = range(2, n + 1)
    for size in range(s, n):
        for I in combinations(rest, size):
            mono = {f"S{i}": 1 for i in I}
            mono.update({f"T{j}": 1 for j in rest if j not in I})
            mono["U1"] = mono["U2"] = size - s
            out.append(_freeze(mono, n))
    return out


def restrict_sections_to_exceptional(n: int, s: int) -> list[frozenset]:
    """Set ``U_2 = 0`` and read each survivor as ``prod_{i in I} z_i`` (returns the sets I)."""
    out = []
    for mono in cox_sections_Ws(n, s):
        d = dict(mono)
        if d.get("U2"):
            continue
        out.append(frozenset(int(name[1:]) for name in d if name.startswith("S")))
    return out


def quotient_matrix(n: int) -> list[list[int]]:
    """The (n-1) x n matrix killing ``rho2``: row 1 is ``e_1^*``, row i is ``-e_i^* + e_n^*``."""
    rows = [[1] + [0] * (n - 1)]
    for i in range(2, n):
        row = [0] * n
        row[i - 1] = -1
        row[n - 1] = 1
        rows.append(row)
    return rows


def apply_matrix(M: Sequence[Sequence[int]], v: Sequence[int]) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def expected_exceptional_images(n: int) -> list[tuple]:
    """``eps_1, -eps_1, eps_2, .., eps_{n-1}, -sum_{i=2}^{n-1} eps_i``."""
    m = n - 1
    imgs = [_unit(m, 1), _unit(m, 1, -1)]
    imgs += [_unit(m, i) for i in range(2, m + 1)]
    imgs.append(tuple([0] + [-1] * (m - 1)))
    return imgs


def quotient_fan_exceptional(n: int) -> tuple[Fan, list[tuple]]:
    """Fan of the exceptional divisor of Xt -> X_1^n, i.e. of P^1 x P^(n-2).

    The rays ``e_1, rho1, -e_2..-e_n`` of the star of ``rho2`` are pushed
    through ``quotient_matrix(n)``; a disagreement with
    ``expected_exceptional_images`` raises QuotientMismatchError naming the ray.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    nf = blowup_tilde(n)
    fan = nf.fan
    M = quotient_matrix(n)
    rho2 = nf.params["rho2"]
    if any(apply_matrix(M, fan.rays[rho2])):
        raise QuotientMismatchError(f"quotient matrix does not kill rho2: {apply_matrix(M, fan.rays[rho2])}")
    star = [c for c in fan.max_cones if rho2 in c]
    link_rays = sorted(set().union(*star) - {rho2})
    named = [0, nf.points[0].ray] + [n + i - 1 for i in range(2, n + 1)]
    if sorted(named) != link_rays:
        raise QuotientMismatchError(
            f"star of rho2 has rays {[fan.labels[i] for i in link_rays]}, expected e1, rho1, -e2..-e{n}")
    images = [apply_matrix(M, fan.rays[i]) for i in named]
    for i, img, want in zip(named, images, expected_exceptional_images(n)):
        if img != want:
            raise QuotientMismatchError(f"ray {fan.labels[i]} maps to {list(img)}, expected {list(want)}")
    position = {i: t for t, i in enumerate(named)}
    cones = [frozenset(position[i] for i in c if i != rho2) for c in star]
    labels = ["eps1", "-eps1"] + [f"eps{i}" for i in range(2, n)] + [f"-(eps2+..+eps{n - 1})"]
    quotient = Fan(n - 1, tuple(images), tuple(cones), tuple(labels)).check()
    return quotient, images
