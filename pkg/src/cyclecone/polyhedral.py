"""Exact rational polyhedral cones.

Cones are stored by generators (V-description) and/or inward facet normals
(H-description ``{x : f . x >= 0}``).  Conversion between the two uses the
double description method of Motzkin et al. over ``fractions.Fraction``,
inserting constraints in input order.  A small Bland-rule simplex supplies
explicit non-negative combinations for membership certificates.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_DIM_LIMIT = 12
DIM_LIMIT_ENV = "CYCLECONE_DIM_LIMIT"

Vector = tuple


class DimensionLimitError(RuntimeError):
    pass


class NotPointedError(ValueError):
    def __init__(self, line):
        self.line = line
        super().__init__(f"cone is not pointed: it contains the line spanned by {list(line)}")


def dim_limit() -> int:
    raw = os.environ.get(DIM_LIMIT_ENV)
    return int(raw) if raw else DEFAULT_DIM_LIMIT


def _vec(v: Iterable) -> Vector:
    return tuple(Fraction(x) for x in v)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def primitive(v: Sequence) -> tuple:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    v = _vec(v)
    if not any(v):
        return tuple(0 for _ in v)
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


def _sign_normalized(v: Sequence) -> tuple:
    p = primitive(v)
    first = next((x for x in p if x), 0)
    return tuple(-x for x in p) if first < 0 else p


def rank(rows: Sequence[Sequence]) -> int:
    m = [list(_vec(r)) for r in rows]
    rk, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rk < len(m) and col < ncols:
        piv = next((i for i in range(rk, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(rk + 1, len(m)):
            if m[i][col]:
                f = m[i][col] / m[rk][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        rk += 1
        col += 1
    return rk


def _check_dim(d: int):
    limit = dim_limit()
    if d > limit:
        raise DimensionLimitError(
            f"ambient dimension {d} exceeds the limit {limit} (set {DIM_LIMIT_ENV} to raise it)")


def double_description(inequalities: Sequence[Sequence], d: int):
    """Generators of ``{x in Q^d : a . x >= 0 for every a}``.

    Returns ``(rays, lines)``: extreme rays modulo the lineality space, and a
    basis of the lineality space.  Rays are primitive integer vectors.
    """
    _check_dim(d)
    lines: list[Vector] = [_vec(1 if i == j else 0 for j in range(d)) for i in range(d)]
    rays: list[Vector] = []
    # zero sets: indices of processed inequalities tight at each ray
    zeros: list[frozenset] = []
    processed: list[Vector] = []
    for a in inequalities:
        a = _vec(a)
        if len(a) != d:
            raise ValueError(f"inequality of length {len(a)} in dimension {d}")
        idx = len(processed)
        processed.append(a)
        pidx = next((t for t, l in enumerate(lines) if dot(a, l) != 0), None)
        if pidx is not None:
            pivot = lines[pidx]
            pa = dot(a, pivot)
            if pa < 0:
                pivot = tuple(-x for x in pivot)
                pa = -pa
            new_lines = []
            for t, l in enumerate(lines):
                if t == pidx:
                    continue
                al = dot(a, l)
                new_lines.append(l if al == 0 else tuple(x - (al / pa) * y for x, y in zip(l, pivot)))
            new_rays, new_zeros = [], []
            for ray, z in zip(rays, zeros):
                ar = dot(a, ray)
                proj = ray if ar == 0 else tuple(x - (ar / pa) * y for x, y in zip(ray, pivot))
                new_rays.append(proj)
                new_zeros.append(z | {idx})
            # the pivot direction itself becomes a ray, tight on every earlier constraint
            new_rays.append(pivot)
            new_zeros.append(frozenset(range(idx)))
            lines, rays, zeros = new_lines, new_rays, new_zeros
            continue
        pos, neg, zer = [], [], []
        for t, ray in enumerate(rays):
            s = dot(a, ray)
            (pos if s > 0 else neg if s < 0 else zer).append((t, s))
        new_rays = [rays[t] for t, _ in pos] + [rays[t] for t, _ in zer]
        new_zeros = [zeros[t] for t, _ in pos] + [zeros[t] | {idx} for t, _ in zer]
        for tp, sp in pos:
            for tn, sn in neg:
                common = zeros[tp] & zeros[tn]
                if not _adjacent(tp, tn, common, zeros):
                    continue
                combo = tuple(sp * x - sn * y for x, y in zip(rays[tn], rays[tp]))
                new_rays.append(combo)
                new_zeros.append(common | {idx})
        rays, zeros = new_rays, new_zeros
    rays = [primitive(r) for r in rays]
    lines = [_sign_normalized(l) for l in lines]
    return _dedupe(rays), sorted(set(lines))


def _adjacent(tp: int, tn: int, common: frozenset, zeros: list[frozenset]) -> bool:
    for t, z in enumerate(zeros):
        if t != tp and t != tn and common <= z:
            return False
    return True


def _dedupe(rays: list[tuple]) -> list[tuple]:
    seen, out = set(), []
    for r in rays:
        if any(r) and r not in seen:
            seen.add(r)
            out.append(r)
    return out


class RationalCone:
    """A finitely generated cone in Q^ambient_dim.

    At least one of ``generators`` and ``facets`` must be given; the missing
    description is computed on demand.  ``facets`` are inward normals.
    """

    def __init__(self, ambient_dim: int, generators: Iterable | None = None,
                 facets: Iterable | None = None, check: bool = False):
        if generators is None and facets is None:
            raise ValueError("a cone needs generators or facets")
        self.ambient_dim = ambient_dim
        self._generators = None if generators is None else [_vec(g) for g in generators]
        self._facets = None if facets is None else [_vec(f) for f in facets]
        for v in (self._generators or []) + (self._facets or []):
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in dimension {ambient_dim}")
        if check and generators is not None and facets is not None:
            gens = self._generators
            fs = self._facets
            if any(dot(f, g) < 0 for f in fs for g in gens):
                raise ValueError("a generator violates a facet")
            other = RationalCone(ambient_dim, facets=fs)
            if any(not contains(RationalCone(ambient_dim, generators=gens), g).inside
                   for g in other.generators):
                raise ValueError("generator and facet descriptions disagree")

    @property
    def generators(self) -> list[Vector]:
        """Generators, with the lineality space (if any) listed as ``+l, -l``."""
        if self._generators is None:
            rays, lines = double_description(self._facets, self.ambient_dim)
            gens = [_vec(r) for r in rays]
            for l in lines:
                gens.append(_vec(l))
                gens.append(tuple(-x for x in _vec(l)))
            self._generators = gens
        return list(self._generators)

    @property
    def facets(self) -> list[Vector]:
        """Inward normals, equations listed as ``+f, -f``."""
        if self._facets is None:
            rays, lines = double_description(self._generators, self.ambient_dim)
            fs = [_vec(r) for r in rays]
            for l in lines:
                fs.append(_vec(l))
                fs.append(tuple(-x for x in _vec(l)))
            self._facets = fs
        return list(self._facets)

    def __repr__(self):
        return f"RationalCone(dim={self.ambient_dim}, generators={len(self.generators)})"


def dualize(c: RationalCone) -> RationalCone:
    """The dual cone ``{y : x . y >= 0 for all x in c}``.

    Facets of ``c`` become generators of the dual and vice versa.
    """
    _check_dim(c.ambient_dim)
    if c._generators is not None:
        return RationalCone(c.ambient_dim, generators=c.facets, facets=c._generators)
    return RationalCone(c.ambient_dim, generators=c._facets, facets=c.generators)


def extremal_rays(c: RationalCone) -> list[tuple]:
    """Primitive integer extremal rays, lexicographically sorted.

    Raises NotPointedError naming a line when the cone contains one.
    """
    rays, lines = double_description(c.facets, c.ambient_dim)
    if lines:
        raise NotPointedError(lines[0])
    return sorted(rays)


def lineality_space(c: RationalCone) -> list[tuple]:
    return double_description(c.facets, c.ambient_dim)[1]


class ContainmentResult:
    def __init__(self, inside: bool, combination=None, separator=None):
        self.inside = inside
        self.combination = combination
        self.separator = separator

    def __bool__(self):
        return self.inside

    def __repr__(self):
        if self.inside:
            return f"ContainmentResult(inside, combination={self.combination})"
        return f"ContainmentResult(outside, separator={self.separator})"


def contains(c: RationalCone, v: Sequence) -> ContainmentResult:
    """Membership with a certificate.

    Inside: a list of non-negative weights on ``c.generators`` summing to
    ``v``.  Outside: a primitive facet normal ``f`` with ``f . v < 0``.
    """
    v = _vec(v)
    if len(v) != c.ambient_dim:
        raise ValueError(f"vector of length {len(v)} in dimension {c.ambient_dim}")
    for f in c.facets:
        if dot(f, v) < 0:
            return ContainmentResult(False, separator=primitive(f))
    gens = c.generators
    weights = nonnegative_combination(gens, v)
    if weights is None:
        raise AssertionError("facet test and LP disagree on membership")
    return ContainmentResult(True, combination=weights)


def nonnegative_combination(generators: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Find ``w >= 0`` with ``sum w_i g_i == v`` by an exact phase-one simplex.

    Returns None when no such combination exists.
    """
    gens = [_vec(g) for g in generators]
    v = _vec(v)
    d, m = len(v), len(gens)
    # rows: sum_i g_i[row] w_i + s_row = |v[row]| after sign-fixing each row
    A = []
    for row in range(d):
        sgn = -1 if v[row] < 0 else 1
        A.append([sgn * g[row] for g in gens] + [Fraction(1 if k == row else 0) for k in range(d)]
                 + [sgn * v[row]])
    basis = [m + row for row in range(d)]
    ncols = m + d
    # objective: minimize sum of artificials, stored as reduced costs
    cost = [Fraction(0)] * (ncols + 1)
    for row in range(d):
        for col in range(ncols + 1):
            cost[col] -= A[row][col]
    for row in range(d):
        cost[m + row] += 1
    while True:
        enter = next((col for col in range(ncols) if cost[col] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for row in range(d):
            if A[row][enter] > 0:
                ratio = A[row][-1] / A[row][enter]
                if best is None or ratio < best or (ratio == best and basis[row] < basis[leave]):
                    best, leave = ratio, row
        if leave is None:
            break
        piv = A[leave][enter]
        A[leave] = [x / piv for x in A[leave]]
        for row in range(d):
            if row != leave and A[row][enter] != 0:
                f = A[row][enter]
                A[row] = [x - f * y for x, y in zip(A[row], A[leave])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, A[leave])]
        basis[leave] = enter
    if -cost[-1] != 0:
        return None
    w = [Fraction(0)] * m
    for row, b in enumerate(basis):
        if b < m:
            w[b] = A[row][-1]
    return w


def linear_feasible(eq_rows: Sequence[Sequence], ge_rows: Sequence[Sequence],
                    ge_rhs: Sequence, d: int) -> bool:
    """Is there a free ``x`` in Q^d with ``E x = 0`` and ``G x >= g``?

    Reduced to ``nonnegative_combination`` via ``x = p - q`` and surplus
    variables.
    """
    cols = []
    nrows = len(eq_rows) + len(ge_rows)
    rows = [_vec(r) for r in eq_rows] + [_vec(r) for r in ge_rows]
    rhs = [Fraction(0)] * len(eq_rows) + [Fraction(x) for x in ge_rhs]
    for i in range(d):
        cols.append(tuple(r[i] for r in rows))
        cols.append(tuple(-r[i] for r in rows))
    for t in range(len(ge_rows)):
        cols.append(tuple(Fraction(-1) if s == len(eq_rows) + t else Fraction(0) for s in range(nrows)))
    if nrows == 0:
        return True
    return nonnegative_combination(cols, rhs) is not None
