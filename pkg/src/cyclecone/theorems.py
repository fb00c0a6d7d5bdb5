"""Numerical identities and bounds about fiber generation on X_r^n.

Every function here computes in the Chow ring and compares with the closed
forms; a mismatch raises AssertionError, since it would mean the ring model
and the published identity disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chow_ring import ChowElement, E, RingContext, degree, hyperplane_sum, hyperplanes_minus_points
from .cycle_spaces import CycleClass, NOT_FIBER_GENERATED, fg_criterion, to_chow

FIBER_GENERATED = "fiber-generated"
OPEN = "open"


# -- the Picard basis change ----------------------------------------------------


def _det(M: Sequence[Sequence]) -> Fraction:
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    det = Fraction(1)
    for col in range(n):
        p = next((i for i in range(col, n) if A[i][col] != 0), None)
        if p is None:
            return Fraction(0)
        if p != col:
            A[col], A[p] = A[p], A[col]
            det = -det
        det *= A[col][col]
        for i in range(col + 1, n):
            f = A[i][col] / A[col][col]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return det


def _inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        p = next(i for i in range(col, n) if A[i][col] != 0)
        A[col], A[p] = A[p], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for i in range(n):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return [row[n:] for row in A]


@dataclass(frozen=True)
class PicardBasisChange:
    """Matrix of phi on Picard groups.

    Column ``c`` holds the image of the c-th source basis vector
    ``(H, E_1, .., E_{n+r-1})`` (blowup of P^n at n+r-1 points) in the target
    basis ``(H_1, .., H_n, E_1, .., E_r)`` of X_r^n.
    """

    n: int
    r: int
    matrix: tuple
    inverse: tuple

    @property
    def determinant(self) -> Fraction:
        return _det(self.matrix)

    def forward(self, coeffs: Sequence) -> CycleClass:
        """Image of ``c_0 H + sum c_i E_i`` as a divisor class on X_r^n."""
        size = self.n + self.r
        if len(coeffs) > size:
            raise ValueError(f"at most {size} coefficients (H, E_1..E_{size - 1})")
        c = [Fraction(x) for x in coeffs] + [Fraction(0)] * (size - len(coeffs))
        img = [sum(self.matrix[row][col] * c[col] for col in range(size)) for row in range(size)]
        return divisor_from_vector(RingContext(self.n, self.r), img)

    def backward(self, D: CycleClass) -> list[Fraction]:
        """Coefficients on ``(H, E_1, ..)`` of the preimage of a divisor class."""
        if D.k != self.n - 1 or D.context != RingContext(self.n, self.r):
            raise ValueError("phi transports divisor classes of X_r^n only")
        v = divisor_vector(D)
        size = self.n + self.r
        return [sum(self.inverse[row][col] * v[col] for col in range(size)) for row in range(size)]


def divisor_vector(D: CycleClass) -> list[Fraction]:
    n = D.n
    return [D.a({i}) for i in range(1, n + 1)] + [D.e(j) for j in range(1, D.r + 1)]


def divisor_from_vector(ctx: RingContext, v: Sequence) -> CycleClass:
    n = ctx.n
    return CycleClass(ctx, n - 1, {frozenset({i}): v[i - 1] for i in range(1, n + 1)},
                      {j: v[n + j - 1] for j in range(1, ctx.r + 1)})


def phi_map(n: int, r: int) -> PicardBasisChange:
    """``H -> sum H_i - (n-1) E_1``; ``E_i -> H_{n+1-i} - E_1`` (i <= n);
    ``E_i -> E_{i-n+1}`` (i > n)."""
    if n < 2 or r < 1:
        raise ValueError("phi needs n >= 2 and r >= 1")
    size = n + r
    cols = []
    col = [1] * n + [0] * r
    col[n] = -(n - 1)
    cols.append(col)
    for i in range(1, n + 1):
        col = [0] * size
        col[n + 1 - i - 1] = 1
        col[n] = -1
        cols.append(col)
    for i in range(n + 1, n + r):
        col = [0] * size
        col[n + (i - n + 1) - 1] = 1
        cols.append(col)
    M = tuple(tuple(cols[c][row] for c in range(size)) for row in range(size))
    det = _det(M)
    if abs(det) != 1:
        raise AssertionError(f"phi matrix has determinant {det}")
    inv = _inverse(M)
    if any(x.denominator != 1 for row in inv for x in row):
        raise AssertionError("phi inverse is not integral")
    return PicardBasisChange(n, r, M, tuple(tuple(int(x) for x in row) for row in inv))


def hyperplane_through_points(n: int) -> list[int]:
    """Source coefficients of ``H - sum_{i<=n-2} E_i - E_{n+1} - E_{n+2}``.

    A hyperplane of P^n through n of the points, hence effective; its image
    under phi is ``H_1 + H_2 - E_1 - E_2 - E_3``.
    """
    coeffs = [1] + [0] * (n + 2)
    for i in list(range(1, n - 1)) + [n + 1, n + 2]:
        coeffs[i] = -1
    return coeffs


# -- the n! boundary for curves ---------------------------------------------------


def factorial_boundary(n: int, r: int) -> int:
    """``deg (sum H_i - sum_{j<=r} E_j)^n``; a negative value shows the divisor is not nef."""
    if n < 2:
        raise ValueError("n must be at least 2")
    ctx = RingContext(n, r)
    return degree(hyperplanes_minus_points(ctx) ** n)


# -- identities from the proofs ---------------------------------------------------


def W_divisor(ctx: RingContext, s: int) -> ChowElement:
    return hyperplane_sum(ctx, range(2, ctx.n + 1)) - ChowElement(ctx, {E(1, 1): s})


def lemma_con_identity(n: int, k: int, Y: CycleClass) -> Fraction:
    """Check ``W_1 ... W_k . Y == k! (sum_{1 in I} a_I - b_1)`` and return
    ``beta = b_1 - sum_{1 in I} a_I``."""
    ctx = RingContext(n, 1)
    if Y.context != ctx or Y.k != k:
        raise ValueError(f"Y must be a {k}-dimensional class on X_1^{n}")
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}")
    prod = ctx.one()
    for s in range(1, k + 1):
        prod = prod * W_divisor(ctx, s)
    value = Fraction(degree(prod * to_chow(Y)))
    beta = Y.b(1) - sum((c for I, c in Y.h_coeffs.items() if 1 in I), Fraction(0))
    if value != -math.factorial(k) * beta:
        raise AssertionError(f"W_1..W_{k}.Y = {value}, closed form gives {-math.factorial(k) * beta}")
    return beta


@dataclass
class ProductConstruction:
    curve: CycleClass
    product: CycleClass
    curve_violates: bool
    product_violates: bool


def prop_not_construction(n: int, k: int, r: int, C: CycleClass) -> ProductConstruction:
    """Lift a curve class on X_r^{n-k+1} to ``(P^1)^{k-1} x C`` on X_r^n.

    ``alpha_I = a_I`` for ``I`` inside ``J = {1..n-k+1}``; the multiplicities
    ``b_j`` carry over to ``E_{j,k}``.
    """
    m = n - k + 1
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}")
    if C.n != m or C.k != 1 or C.r != r:
        raise ValueError(f"C must be a curve class on X_{r}^{m}")
    J = frozenset(range(1, m + 1))
    for I, c in C.h_coeffs.items():
        if not I <= J or len(I) != n - k:
            raise ValueError(f"support H{sorted(I)} is not a subset of J of size {n - k}")
        if c < 0:
            raise ValueError("coefficients a_I must be non-negative")
    if any(c > 0 for c in C.e_coeffs.values()):
        raise ValueError("coefficients b_j must be non-negative")
    ctx = RingContext(n, r)
    Z = CycleClass(ctx, k, dict(C.h_coeffs), dict(C.e_coeffs))
    curve_bad = fg_criterion([C]).verdict == NOT_FIBER_GENERATED
    prod_bad = fg_criterion([Z]).verdict == NOT_FIBER_GENERATED
    return ProductConstruction(C, Z, curve_bad, prod_bad)


D1_MULTIPLICITIES = (2, 2, 1, 1)
D2_MULTIPLICITIES = (1, 1, 2, 2)


def prop44_divisors() -> tuple[ChowElement, ChowElement]:
    ctx = RingContext(4, 4)
    D1 = hyperplane_sum(ctx) - ChowElement(ctx, {E(j, 1): m for j, m in enumerate(D1_MULTIPLICITIES, 1)})
    D2 = hyperplane_sum(ctx) - ChowElement(ctx, {E(j, 1): m for j, m in enumerate(D2_MULTIPLICITIES, 1)})
    return D1, D2


def prop44_identity(Y: CycleClass) -> Fraction:
    """``deg(D_1 . D_2 . Y)``, checked against ``2 (sum a_I - sum b_k)``."""
    if Y.context != RingContext(4, 4) or Y.k != 2:
        raise ValueError("Y must be a surface class on X_4^4")
    D1, D2 = prop44_divisors()
    value = Fraction(degree(D1 * D2 * to_chow(Y)))
    expected = 2 * (Y.sum_a() - Y.sum_b())
    if value != expected:
        raise AssertionError(f"D1.D2.Y = {value}, closed form gives {expected}")
    return value


def D1_cap_D2() -> CycleClass:
    """The class of ``D_1 . D_2`` read back from the Chow ring."""
    from .cycle_spaces import from_chow

    D1, D2 = prop44_divisors()
    return from_chow(D1 * D2, 2)


# -- status of fiber generation ------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    n: int
    k: int
    r: int
    status: str
    reason: str


def status(n: int, k: int, r: int) -> BoundReport:
    """What the known theorems say about fiber generation of Eff_k(X_r^n)."""
    if n < 2 or not 1 <= k <= n - 1 or r < 0:
        raise ValueError(f"need n >= 2, 1 <= k <= n-1, r >= 0; got n={n}, k={k}, r={r}")

    def report(st, reason):
        return BoundReport(n, k, r, st, reason)

    if r <= 2:
        return report(FIBER_GENERATED, "toric for r <= 2")
    if k == n - 1:
        return report(NOT_FIBER_GENERATED, "divisors: fiber-generated iff r <= 2")
    if k == 1:
        if r <= math.factorial(n):
            return report(FIBER_GENERATED, f"curves: fiber-generated iff r <= n! = {math.factorial(n)}")
        return report(NOT_FIBER_GENERATED, f"curves: r > n! = {math.factorial(n)}")
    if r <= n - k + 1:
        return report(FIBER_GENERATED, f"r <= n-k+1 = {n - k + 1}")
    if r > math.factorial(n - k + 1):
        return report(NOT_FIBER_GENERATED, f"r > (n-k+1)! = {math.factorial(n - k + 1)}")
    if (n, k, r) == (4, 2, 4):
        return report(FIBER_GENERATED, "surfaces on X_4^4")
    return report(OPEN, f"{n - k + 1} < r <= {math.factorial(n - k + 1)}")


def is_mori_dream(n: int, r: int) -> bool:
    if n < 2:
        raise ValueError("n must be at least 2")
    bound = {2: 7, 3: 6, 4: 5}.get(n, 4)
    return r <= bound
