"""Explicit family of pairs (w1, w2) in Z[theta] with w1^2 + w2^2 = n - theta.

A family member is pinned by three integers: alpha (even, the theta^2
coefficient of w2), beta (coprime to alpha, the theta^2 coefficient of w1)
and v1 (the theta coefficient of w2, fixed modulo 2*alpha). The remaining
coordinates follow by solving a 2x2 linear system whose determinant is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import Iterator

from .errors import (
    AlphaNotEven,
    CongruenceViolation,
    ConsistencyError,
    NotCoprime,
    OddnessViolation,
    ParityViolation,
)
from .ring import CubicPoly, ThetaElem, square_sum_expand


@dataclass(frozen=True)
class BezoutPair:
    """Odd u, v with u*alpha - v*beta = 1 and 0 < v <= 2*alpha."""

    u: int
    v: int


@dataclass(frozen=True)
class Solution:
    omega1: ThetaElem
    omega2: ThetaElem
    n: int
    alpha: int
    beta: int
    v1: int

    @property
    def height(self) -> int:
        return max(self.omega1.height, self.omega2.height)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _check_alpha_beta(alpha: int, beta: int) -> None:
    if alpha < 2 or alpha % 2:
        raise AlphaNotEven(f"alpha must be even and >= 2, got {alpha}")
    if gcd(alpha, beta) != 1:
        raise NotCoprime(f"gcd({alpha}, {beta}) = {gcd(alpha, beta)}")


def bezout_odd(alpha: int, beta: int) -> BezoutPair:
    _check_alpha_beta(alpha, beta)
    g, x, y = ext_gcd(alpha, beta)
    u, v = g * x, -g * y
    if u % 2 == 0:
        # beta is odd, so one shift by (beta, alpha) flips the parity of u
        u, v = u + beta, v + alpha
    m = 2 * alpha
    v_canon = (v - 1) % m + 1
    t = (v_canon - v) // m
    u, v = u + 2 * beta * t, v_canon
    assert u * alpha - v * beta == 1 and u % 2 == 1 and v % 2 == 1
    return BezoutPair(u, v)


def h_values(p: CubicPoly, u1: int, u2: int, v1: int, v2: int) -> tuple[int, int]:
    """Right-hand sides of the linear system for (u0, v0)."""
    a2, a1, a0 = p.a2, p.a1, p.a0
    e1 = a1 * a2 - a0
    e2 = a2 * a2 - a1
    h1 = -1 + 2 * a1 * u1 * u2 - u2 * u2 * e1 + 2 * a1 * v1 * v2 - v2 * v2 * e1
    h2 = -u1 * u1 + 2 * a2 * u1 * u2 - u2 * u2 * e2 - v1 * v1 + 2 * a2 * v1 * v2 - v2 * v2 * e2
    return h1, h2


def complete(p: CubicPoly, alpha: int, beta: int, v1: int) -> Solution:
    """Build the unique family member with the given (alpha, beta, v1).

    Raises CongruenceViolation if v1 is not in the Bezout class mod 2*alpha,
    ParityViolation if p fails the parity conditions.
    """
    if not p.parity_ok:
        raise ParityViolation(p.parity_failures())
    bez = bezout_odd(alpha, beta)
    if (v1 - bez.v) % (2 * alpha):
        raise CongruenceViolation(f"v1={v1} is not {bez.v} mod {2 * alpha}")

    u2, v2 = beta, alpha
    num = 1 + v1 * beta
    if num % alpha:
        raise OddnessViolation(f"1 + v1*beta = {num} not divisible by alpha = {alpha}")
    u1 = num // alpha
    if beta % 2 == 0 or u1 % 2 == 0 or v1 % 2 == 0:
        raise OddnessViolation(f"expected odd beta, u1, v1; got {beta}, {u1}, {v1}")
    if gcd(u2, v2) != 1:
        raise ConsistencyError(f"gcd(u2, v2) = {gcd(u2, v2)}")
    det = u1 * v2 - v1 * u2
    if det != 1:
        raise ConsistencyError(f"u1*v2 - v1*u2 = {det}")

    h1, h2 = h_values(p, u1, u2, v1, v2)
    if h1 % 2 or h2 % 2:
        raise OddnessViolation(f"h1 = {h1}, h2 = {h2} must both be even")
    u0 = v2 * (h1 // 2) - v1 * (h2 // 2)
    v0 = -u2 * (h1 // 2) + u1 * (h2 // 2)

    w1 = ThetaElem(u0, u1, u2)
    w2 = ThetaElem(v0, v1, v2)
    g = square_sum_expand(p, w1, w2)
    if g.c1 != -1 or g.c2 != 0:
        raise ConsistencyError(f"w1^2 + w2^2 = {g}, expected n - theta")
    return Solution(w1, w2, g.c0, alpha, beta, v1)


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def floor_sixth_root_times(c: Fraction, X: int) -> int:
    """floor(c * X^(1/6)) computed exactly."""
    c = Fraction(c)
    if c <= 0:
        return 0
    r = c ** 6 * X
    return iroot(r.numerator // r.denominator, 6)


def alpha_limit(X: int, c: Fraction) -> int:
    """Largest alpha with alpha <= (c/4) X^(1/6)."""
    return floor_sixth_root_times(Fraction(c) / 4, X)


def enumerate_alpha(p: CubicPoly, alpha: int, X: int, c: Fraction) -> Iterator[Solution]:
    """All family members for one alpha, ordered by (beta, v1)."""
    vmax = floor_sixth_root_times(c, X)
    m = 2 * alpha
    for beta in range(1, alpha + 1):
        if gcd(alpha, beta) != 1:
            continue
        r = bezout_odd(alpha, beta).v
        first = r - m * ((r + vmax) // m)
        for v1 in range(first, vmax + 1, m):
            yield complete(p, alpha, beta, v1)


def enumerate_family(p: CubicPoly, X: int, c: Fraction = Fraction(1)) -> Iterator[Solution]:
    """Family members with alpha even in [2, (c/4) X^(1/6)], |v1| <= c X^(1/6).

    Emission order is lexicographic in (alpha, beta, v1). Small X simply
    gives an empty stream.
    """
    c = Fraction(c)
    for alpha in range(2, alpha_limit(X, c) + 1, 2):
        yield from enumerate_alpha(p, alpha, X, c)


def vc_cardinality(alpha: int, beta: int, X: int, c: Fraction = Fraction(1)) -> int:
    """Number of v1 in the Bezout class mod 2*alpha with |v1| <= c X^(1/6)."""
    vmax = floor_sixth_root_times(c, X)
    r = bezout_odd(alpha, beta).v
    m = 2 * alpha
    return (vmax - r) // m - (-vmax - r + m - 1) // m + 1 if vmax >= 0 else 0


def class_bound_holds(count: int, alpha: int, X: int, c: Fraction) -> bool:
    """Exact test of count >= c X^(1/6) / (4 alpha)."""
    c = Fraction(c)
    lhs = Fraction(4 * alpha * count) / c
    return lhs >= 0 and lhs ** 6 >= X


def height_budget(p: CubicPoly) -> Fraction:
    """A rational d > 0 with 2 (1 + |theta| + |theta|^2)^2 d^2 < 1.

    |theta| is bounded above by the far end of the isolating interval, and
    d = 1 / ceil(3K/2) with K = 1 + T + T^2 gives 2K^2 d^2 <= 8/9.
    """
    lo, hi = p.theta_interval
    t = max(abs(lo), abs(hi))
    k = 1 + t + t * t
    d = Fraction(1, ceil(Fraction(3, 2) * k))
    assert 2 * k * k * d * d < 1
    return d
