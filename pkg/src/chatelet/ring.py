"""Exact arithmetic in Z[theta] and Z[theta, i] for a monic cubic.

Every element is stored fully reduced (degree < 3 in theta), so equality is
structural. Norms and symmetric products over the three conjugates are
computed as Sylvester resultants with exact integer (or Gaussian integer)
entries; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .errors import ParityViolation, Reducible


# --- Gaussian integers ---


@dataclass(frozen=True)
class GaussianInteger:
    re: int
    im: int = 0

    def __add__(self, other):
        other = _as_gauss(other)
        return GaussianInteger(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gauss(other)
        return GaussianInteger(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_gauss(other) - self

    def __neg__(self):
        return GaussianInteger(-self.re, -self.im)

    def __mul__(self, other):
        other = _as_gauss(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianInteger(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self) -> GaussianInteger:
        return GaussianInteger(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def divmod_round(self, other) -> tuple[GaussianInteger, GaussianInteger]:
        """Division with the quotient rounded to the nearest Gaussian integer.

        The remainder has norm at most half the divisor's norm, which is what
        the Euclidean algorithm in Z[i] needs.
        """
        other = _as_gauss(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        num = self * other.conjugate()
        q = GaussianInteger(_round_div(num.re, n), _round_div(num.im, n))
        return q, self - q * other

    def __floordiv__(self, other):
        # exact division only; Bareiss elimination relies on it
        q, r = self.divmod_round(other)
        if r.re or r.im:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return q

    def __bool__(self):
        return bool(self.re or self.im)

    def __str__(self):
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


def _as_gauss(x) -> GaussianInteger:
    if isinstance(x, GaussianInteger):
        return x
    if isinstance(x, int):
        return GaussianInteger(x, 0)
    return NotImplemented


def _round_div(a: int, n: int) -> int:
    # nearest integer to a/n for n > 0, ties toward +inf
    return (2 * a + n) // (2 * n)


def gaussian_gcd(a: GaussianInteger, b: GaussianInteger) -> GaussianInteger:
    while b:
        _, r = a.divmod_round(b)
        a, b = b, r
    return a


# --- integer polynomials ---


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients in ascending degree order."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        head_sign, head = terms[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def poly_mul(f: Sequence, g: Sequence) -> list:
    """Product of two ascending coefficient lists over any commutative ring."""
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return out


def _poly_compose_shift(f: Sequence[int], s) -> list:
    """Coefficients of f(x + s) for integer f and a ring element s."""
    out: list = [0]
    for c in reversed(f):
        # out = out * (x + s) + c
        out = poly_mul(out, [s, 1])
        out[0] = out[0] + c
    return out


# --- resultants ---


def bareiss_det(rows: Sequence[Sequence]):
    """Determinant by fraction-free Gaussian elimination.

    Works over any integral domain whose ``//`` is exact division
    (``int`` and :class:`GaussianInteger` both qualify).
    """
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0 * m[0][0]
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(f: Sequence, g: Sequence) -> list[list]:
    """Sylvester matrix of f and g given as ascending coefficient lists.

    Formal degrees are len(f)-1 and len(g)-1; a zero leading entry of g is
    kept, so that Res(f, g) = lc(f)^deg(g) * prod g(root) still holds.
    """
    n, m = len(f) - 1, len(g) - 1
    size = n + m
    zero = 0 * f[0]
    rows = []
    fd = list(reversed(f))
    gd = list(reversed(g))
    for k in range(m):
        rows.append([zero] * k + fd + [zero] * (size - k - len(fd)))
    for k in range(n):
        rows.append([zero] * k + gd + [zero] * (size - k - len(gd)))
    return rows


def resultant(f: Sequence, g: Sequence):
    return bareiss_det(sylvester_matrix(f, g))


# --- the cubic ---


@dataclass(frozen=True)
class ThetaElem:
    """c0 + c1*theta + c2*theta^2; always reduced."""

    c0: int = 0
    c1: int = 0
    c2: int = 0

    @classmethod
    def from_seq(cls, seq: Sequence[int]) -> ThetaElem:
        c0, c1, c2 = seq
        return cls(int(c0), int(c1), int(c2))

    def __iter__(self):
        return iter((self.c0, self.c1, self.c2))

    def __add__(self, other: ThetaElem) -> ThetaElem:
        return ThetaElem(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    def __sub__(self, other: ThetaElem) -> ThetaElem:
        return ThetaElem(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2)

    def __neg__(self) -> ThetaElem:
        return ThetaElem(-self.c0, -self.c1, -self.c2)

    def scale(self, k: int) -> ThetaElem:
        return ThetaElem(k * self.c0, k * self.c1, k * self.c2)

    @property
    def height(self) -> int:
        """Largest absolute coefficient."""
        return max(abs(self.c0), abs(self.c1), abs(self.c2))

    def __str__(self):
        return f"{self.c0} + {self.c1}*t + {self.c2}*t^2"


ZERO = ThetaElem(0, 0, 0)
ONE = ThetaElem(1, 0, 0)
THETA = ThetaElem(0, 1, 0)


@dataclass(frozen=True)
class GaussThetaElem:
    """re + i*im with re, im in Z[theta]."""

    re: ThetaElem
    im: ThetaElem = ZERO

    def conjugate(self) -> GaussThetaElem:
        return GaussThetaElem(self.re, -self.im)

    def __add__(self, other: GaussThetaElem) -> GaussThetaElem:
        return GaussThetaElem(self.re + other.re, self.im + other.im)

    def is_zero(self) -> bool:
        return self.re == ZERO and self.im == ZERO


@dataclass(frozen=True)
class CubicPoly:
    """Monic cubic x^3 + a2 x^2 + a1 x + a0 with an isolating interval for theta.

    theta is the largest real root. Build instances with :func:`validate_poly`.
    """

    a2: int
    a1: int
    a0: int
    theta_interval: tuple[Fraction, Fraction] = field(compare=False)

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a0, self.a1, self.a2, 1)

    def __call__(self, x):
        return ((x + self.a2) * x + self.a1) * x + self.a0

    @property
    def even_condition(self) -> bool:
        return (self.a2 * self.a2 - self.a1) % 2 == 0

    @property
    def odd_condition(self) -> bool:
        return (self.a1 * self.a2 - self.a0) % 2 == 1

    @property
    def parity_ok(self) -> bool:
        return self.even_condition and self.odd_condition

    def parity_failures(self) -> list[str]:
        out = []
        if not self.even_condition:
            out.append("a2^2-a1 even")
        if not self.odd_condition:
            out.append("a1*a2-a0 odd")
        return out

    @property
    def label(self) -> str:
        return f"{self.a2},{self.a1},{self.a0}"

    def __str__(self):
        return str(IntPoly(self.coeffs))


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = []
    large = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def integer_roots(a2: int, a1: int, a0: int) -> list[int]:
    """All integer roots of x^3 + a2 x^2 + a1 x + a0."""
    if a0 == 0:
        # x = 0 is a root; the rest come from the quadratic x^2 + a2 x + a1
        roots = {0}
        disc = a2 * a2 - 4 * a1
        if disc >= 0:
            s = isqrt(disc)
            if s * s == disc and (s - a2) % 2 == 0:
                roots.update({(-a2 + s) // 2, (-a2 - s) // 2})
        return sorted(roots)
    out = []
    for d in _divisors(a0):
        for r in (d, -d):
            if ((r + a2) * r + a1) * r + a0 == 0:
                out.append(r)
    return sorted(out)


def _sturm_chain(coeffs: Sequence[int]) -> list[list[Fraction]]:
    f = [Fraction(c) for c in coeffs]
    df = [k * c for k, c in enumerate(f)][1:]
    chain = [f, df]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _poly_rem(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    f = list(f)
    while len(f) >= len(g) and f:
        q = f[-1] / g[-1]
        shift = len(f) - len(g)
        for k, c in enumerate(g):
            f[k + shift] -= q * c
        f.pop()
        while f and f[-1] == 0:
            f.pop()
    return f


def _eval(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign_changes(chain, x) -> int:
    signs = [s for s in (_eval(c, x) for c in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))


def isolate_largest_root(a2: int, a1: int, a0: int, width=Fraction(1, 2**32)) -> tuple[Fraction, Fraction]:
    """Rational interval containing exactly the largest real root, by bisection.

    Assumes the cubic has no rational root (so endpoints never hit a root).
    """
    coeffs = (a0, a1, a2, 1)
    chain = _sturm_chain(coeffs)
    bound = 1 + max(abs(a2), abs(a1), abs(a0))
    lo, hi = Fraction(-bound), Fraction(bound)
    v_hi = _sign_changes(chain, hi)
    # invariant: (lo, hi] contains the largest root
    while hi - lo > width or _sign_changes(chain, lo) - v_hi != 1:
        mid = (lo + hi) / 2
        if _sign_changes(chain, mid) - v_hi >= 1:
            lo = mid
        else:
            hi = mid
            v_hi = _sign_changes(chain, hi)
    return lo, hi


def validate_poly(a2: int, a1: int, a0: int, *, relaxed: bool = False) -> CubicPoly:
    """Check irreducibility (and, unless ``relaxed``, the parity conditions).

    A monic cubic is reducible over Q iff it has an integer root, so the
    irreducibility test is rational-root exhaustion over the divisors of a0.
    """
    a2, a1, a0 = int(a2), int(a1), int(a0)
    roots = integer_roots(a2, a1, a0)
    if roots:
        raise Reducible(roots[0])
    interval = isolate_largest_root(a2, a1, a0)
    p = CubicPoly(a2, a1, a0, interval)
    if not relaxed and not p.parity_ok:
        raise ParityViolation(p.parity_failures())
    return p


# --- Z[theta] arithmetic ---


def theta_mul(p: CubicPoly, x: ThetaElem, y: ThetaElem) -> ThetaElem:
    """Product in Z[theta], reduced with theta^3 = -a2 theta^2 - a1 theta - a0."""
    x0, x1, x2 = x.c0, x.c1, x.c2
    y0, y1, y2 = y.c0, y.c1, y.c2
    d0 = x0 * y0
    d1 = x0 * y1 + x1 * y0
    d2 = x0 * y2 + x1 * y1 + x2 * y0
    d3 = x1 * y2 + x2 * y1
    d4 = x2 * y2
    a2, a1, a0 = p.a2, p.a1, p.a0
    # theta^4 = (a2^2 - a1) theta^2 + (a1 a2 - a0) theta + a0 a2
    return ThetaElem(
        d0 - a0 * d3 + a0 * a2 * d4,
        d1 - a1 * d3 + (a1 * a2 - a0) * d4,
        d2 - a2 * d3 + (a2 * a2 - a1) * d4,
    )


def theta_pow(p: CubicPoly, x: ThetaElem, k: int) -> ThetaElem:
    out = ONE
    while k:
        if k & 1:
            out = theta_mul(p, out, x)
        x = theta_mul(p, x, x)
        k >>= 1
    return out


def square_sum_expand(p: CubicPoly, u: ThetaElem, v: ThetaElem) -> ThetaElem:
    """u^2 + v^2 via the closed-form quadratic expressions g0, g1, g2."""
    a2, a1, a0 = p.a2, p.a1, p.a0
    e1 = a1 * a2 - a0
    e2 = a2 * a2 - a1

    def g(w0, w1, w2):
        return (
            w0 * w0 - 2 * a0 * w1 * w2 + w2 * w2 * a0 * a2,
            2 * w0 * w1 - 2 * a1 * w1 * w2 + w2 * w2 * e1,
            2 * w0 * w2 + w1 * w1 - 2 * a2 * w1 * w2 + w2 * w2 * e2,
        )

    gu = g(u.c0, u.c1, u.c2)
    gv = g(v.c0, v.c1, v.c2)
    return ThetaElem(gu[0] + gv[0], gu[1] + gv[1], gu[2] + gv[2])


def norm(p: CubicPoly, x: ThetaElem) -> int:
    """Product of x over the three conjugates of theta, as Res(p, x(t))."""
    return resultant(list(p.coeffs), [x.c0, x.c1, x.c2])


# --- Z[theta, i] ---


def gauss_theta_mul(p: CubicPoly, x: GaussThetaElem, y: GaussThetaElem) -> GaussThetaElem:
    rr = theta_mul(p, x.re, y.re)
    ii = theta_mul(p, x.im, y.im)
    ri = theta_mul(p, x.re, y.im)
    ir = theta_mul(p, x.im, y.re)
    return GaussThetaElem(rr - ii, ri + ir)


def gauss_theta_eval(p: CubicPoly, poly: IntPoly, x: GaussThetaElem) -> GaussThetaElem:
    acc = GaussThetaElem(ZERO, ZERO)
    for c in reversed(poly.coeffs):
        acc = gauss_theta_mul(p, acc, x) + GaussThetaElem(ThetaElem(c), ZERO)
    return acc


def degree_six_minpoly(p: CubicPoly) -> IntPoly:
    """Q(x) = p(x - i) p(x + i), the degree-6 polynomial annihilating theta + i."""
    plus = _poly_compose_shift(p.coeffs, GaussianInteger(0, 1))
    minus = _poly_compose_shift(p.coeffs, GaussianInteger(0, -1))
    prod = poly_mul(plus, minus)
    coeffs = []
    for c in prod:
        c = _as_gauss(c)
        if c.im:
            raise ArithmeticError("p(x-i)p(x+i) has a non-real coefficient")
        coeffs.append(c.re)
    return IntPoly(tuple(coeffs))
