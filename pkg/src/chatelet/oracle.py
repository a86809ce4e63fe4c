"""Sum-of-two-squares certification by factorization.

An integer n >= 0 is a sum of two squares iff every prime p = 3 (mod 4)
divides it to an even power. Members get an explicit witness (a, b) with
a^2 + b^2 = n, built from the Gaussian prime above each p = 1 (mod 4);
non-members get the offending prime.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Optional

import numpy as np

from . import _rho_jit
from .errors import EffortExceeded
from .ring import CubicPoly, GaussianInteger, gaussian_gcd

TRIAL_LIMIT = 10_000
RHO_BUDGET = 2**24
# deterministic for every n < 2^64
_MR_BASES_64 = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].tolist()


_SMALL_PRIMES = primes_up_to(TRIAL_LIMIT)


# --- primality ---


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    """Strong Lucas test with Selfridge's parameter choice."""
    r = isqrt(n)
    if r * r == n:
        return False
    D = 5
    while _jacobi(D, n) != -1:
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def half(x):
        return (x + n) // 2 % n if x % 2 else x // 2 % n

    U, V, Qk = 0, 2, 1
    # left-to-right binary ladder for U_d, V_d
    for bit in bin(d)[2:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = half(P * U + V), half(D * U + P * V)
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic below 2^64; above, 40 seeded random bases plus strong Lucas."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    if n < 10_000:
        return True
    if n < _rho_jit.LIMIT:
        nn = np.uint64(n)
        return all(_rho_jit.strong_probable_prime(nn, np.uint64(a)) for a in _MR_BASES_64)
    if n < 2**64:
        return all(_strong_probable_prime(n, a) for a in _MR_BASES_64 if a % n)
    if not _strong_probable_prime(n, 2):
        return False
    rng = random.Random(n)
    if not all(_strong_probable_prime(n, rng.randrange(3, n - 1)) for _ in range(40)):
        return False
    return _strong_lucas_probable_prime(n)


# --- factorization ---


@dataclass(frozen=True)
class Factorization:
    factors: tuple[tuple[int, int], ...]
    sign: int = 1

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __str__(self):
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors) or "1"
        return ("-" if self.sign < 0 else "") + body


def brent_rho(n: int, budget: int = RHO_BUDGET, seed: int = 1) -> Optional[int]:
    """Find a nontrivial factor of composite odd n, or None within ``budget`` steps."""
    if n % 2 == 0:
        return 2
    rng = random.Random(seed)
    steps = 0
    if n < _rho_jit.LIMIT:
        while steps < budget:
            y, c = rng.randrange(1, n), rng.randrange(1, n)
            g, used = _rho_jit.rho_attempt(np.uint64(n), np.uint64(y), np.uint64(c), np.uint64(budget - steps))
            steps += int(used)
            if g:
                return int(g)
        return None
    while steps < budget:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            steps += r
            r *= 2
            if steps >= budget and g == 1:
                return None
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


def factorize(n: int, budget: int = RHO_BUDGET) -> Factorization:
    """Complete prime factorization: trial division to 10^4, then Brent rho.

    Raises EffortExceeded when a composite cofactor survives ``budget`` rho
    steps.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        _split_cofactor(n, m, found, budget)
    return Factorization(tuple(sorted(found.items())), sign)


def _split_cofactor(n: int, m: int, found: dict[int, int], budget: int) -> None:
    """Add the prime factors of m > 1 to ``found``; n is only for error reports."""
    stack = [m]
    while stack:
        c = stack.pop()
        if is_prime(c):
            found[c] = found.get(c, 0) + 1
            continue
        r = isqrt(c)
        if r * r == c:
            stack.extend((r, r))
            continue
        d = brent_rho(c, budget)
        if d is None:
            raise EffortExceeded(n, dict(sorted(found.items())), c)
        stack.extend((d, c // d))


# --- witnesses ---


def sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks square root of a quadratic residue a modulo an odd prime p."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def gaussian_prime_above(p: int) -> GaussianInteger:
    """a + bi with a^2 + b^2 = p for a prime p = 2 or p = 1 (mod 4)."""
    if p == 2:
        return GaussianInteger(1, 1)
    x = sqrt_mod(p - 1, p)
    g = gaussian_gcd(GaussianInteger(p, 0), GaussianInteger(x, 1))
    assert g.norm() == p
    return g


@dataclass(frozen=True)
class TwoSquareCertificate:
    n: int
    member: bool
    witness: Optional[tuple[int, int]] = None
    obstruction: Optional[int] = None
    negative: bool = False
    factorization: Optional[Factorization] = field(default=None, compare=False)

    def __str__(self):
        if self.member:
            return f"yes ({self.witness[0]},{self.witness[1]})"
        if self.negative:
            return "no (negative)"
        e = self.factorization.as_dict()[self.obstruction] if self.factorization else 1
        return f"no ({self.obstruction}^{e})"


def is_sum_two_squares(n: int, budget: int = RHO_BUDGET) -> TwoSquareCertificate:
    if n < 0:
        return TwoSquareCertificate(n, False, negative=True)
    if n == 0:
        return TwoSquareCertificate(0, True, witness=(0, 0))
    f = factorize(n, budget)
    for p, e in f.factors:
        if p % 4 == 3 and e % 2:
            return TwoSquareCertificate(n, False, obstruction=p, factorization=f)
    z = GaussianInteger(1, 0)
    for p, e in f.factors:
        if p % 4 == 3:
            z = z * (p ** (e // 2))
        else:
            z = z * _gauss_pow(gaussian_prime_above(p), e)
    a, b = sorted((abs(z.re), abs(z.im)))
    assert a * a + b * b == n
    return TwoSquareCertificate(n, True, witness=(a, b), factorization=f)


def _gauss_pow(z: GaussianInteger, e: int) -> GaussianInteger:
    out = GaussianInteger(1, 0)
    while e:
        if e & 1:
            out = out * z
        z = z * z
        e >>= 1
    return out


# --- counting B_p(X) ---


def _pmulmod(f, g, c, ell):
    """Product of two residues mod (x^3 + c2 x^2 + c1 x + c0, ell)."""
    d0 = f[0] * g[0]
    d1 = f[0] * g[1] + f[1] * g[0]
    d2 = f[0] * g[2] + f[1] * g[1] + f[2] * g[0]
    d3 = f[1] * g[2] + f[2] * g[1]
    d4 = f[2] * g[2] % ell
    c0, c1, c2 = c
    d3 = (d3 - c2 * d4) % ell
    d2 -= c1 * d4
    d1 -= c0 * d4
    d2 -= c2 * d3
    d1 -= c1 * d3
    d0 -= c0 * d3
    return (d0 % ell, d1 % ell, d2 % ell)


def _xpow_mod(e, c, ell, base=(0, 1, 0)):
    res = (1, 0, 0)
    while e:
        if e & 1:
            res = _pmulmod(res, base, c, ell)
        base = _pmulmod(base, base, c, ell)
        e >>= 1
    return res


def _trim(a, ell):
    a = [x % ell for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _pgcd(a, b, ell):
    a, b = _trim(a, ell), _trim(b, ell)
    while b:
        inv = pow(b[-1], -1, ell)
        while len(a) >= len(b):
            q = a[-1] * inv % ell
            s = len(a) - len(b)
            for i, x in enumerate(b):
                a[i + s] = (a[i + s] - q * x) % ell
            a = _trim(a, ell)
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, ell)
        a = [x * inv % ell for x in a]
    return a


def _pdiv(a, b, ell):
    """Exact quotient a / b mod ell, b monic."""
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for s in range(len(a) - len(b), -1, -1):
        coef = a[s + len(b) - 1] % ell
        q[s] = coef
        for i, x in enumerate(b):
            a[i + s] = (a[i + s] - coef * x) % ell
    return q


def _split_roots(g, ell, c, rng):
    """Roots of a monic squarefree g that splits into linear factors mod odd ell."""
    if len(g) == 2:
        return [(-g[0]) % ell]
    if len(g) == 3:
        b, a0 = g[1], g[0]
        disc = (b * b - 4 * a0) % ell
        s = sqrt_mod(disc, ell)
        inv2 = (ell + 1) // 2
        return [(-b + s) * inv2 % ell, (-b - s) * inv2 % ell]
    # degree 3: g equals the cubic mod ell
    while True:
        a = rng.randrange(ell)
        h = _xpow_mod((ell - 1) // 2, c, ell, base=(a, 1, 0))
        d = _pgcd(g, [(h[0] - 1) % ell, h[1], h[2]], ell)
        if 1 < len(d) < len(g):
            return _split_roots(d, ell, c, rng) + _split_roots(_pdiv(g, d, ell), ell, c, rng)


def cubic_roots_mod(p: CubicPoly, ell: int) -> list[int]:
    """Distinct roots of p modulo a prime ell."""
    if ell < 64:
        return [r for r in range(ell) if p(r) % ell == 0]
    c = (p.a0 % ell, p.a1 % ell, p.a2 % ell)
    xl = _xpow_mod(ell, c, ell)
    g = _pgcd([c[0], c[1], c[2], 1], [xl[0], xl[1] - 1, xl[2]], ell)
    if len(g) <= 1:
        return []
    return sorted(_split_roots(g, ell, c, random.Random(ell)))


def _int64_safe(p: CubicPoly, lo: int, hi: int) -> bool:
    bound = 2**62
    m = max(abs(lo), abs(hi)) + abs(p.a2) + 1
    return m**3 + abs(p.a1) * m + abs(p.a0) < bound


def _count_range_scan(p: CubicPoly, lo: int, hi: int, budget: int) -> int:
    count = 0
    for n in range(lo, hi + 1):
        try:
            count += is_sum_two_squares(p(n), budget).member
        except EffortExceeded as e:
            e.at = n
            raise
    return count


def _count_range_sieve(p: CubicPoly, lo: int, hi: int, budget: int) -> int:
    """Count n in [lo, hi] with p(n) a sum of two squares.

    Divides out every prime ell <= max(hi, 10^4) from the values p(n) along
    the root progressions of p mod ell, recording odd exponents of primes
    3 (mod 4). The cofactor left over has only large prime factors and is
    settled by a primality test, the residue mod 4, or full factorization.
    """
    size = hi - lo + 1
    n = np.arange(lo, hi + 1, dtype=np.int64)
    vals = ((n + p.a2) * n + p.a1) * n + p.a0
    bad = vals < 0
    rem = np.abs(vals)
    limit = max(hi, TRIAL_LIMIT)
    for ell in primes_up_to(limit):
        for r in cubic_roots_mod(p, ell):
            start = (r - lo) % ell
            if start >= size:
                continue
            sub = rem[start::ell]
            odd = np.zeros(len(sub), dtype=bool)
            hit = sub % ell == 0
            while hit.any():
                sub[hit] //= ell
                odd[hit] ^= True
                hit &= sub % ell == 0
            rem[start::ell] = sub
            if ell % 4 == 3:
                bad[start::ell] |= odd
    count = 0
    lim2 = limit * limit
    for i in np.nonzero(~bad)[0].tolist():
        r = int(rem[i])
        if r == 1:
            count += 1
        elif r % 4 == 3:
            # odd and 3 mod 4: cannot be a sum of two squares
            continue
        elif r < lim2 or is_prime(r):
            count += 1
        else:
            found: dict[int, int] = {}
            try:
                _split_cofactor(r, r, found, budget)
            except EffortExceeded as e:
                e.at = lo + i
                raise
            count += all(e % 2 == 0 for q, e in found.items() if q % 4 == 3)
    return count


def _count_range(args) -> int:
    p, lo, hi, budget = args
    if lo > hi:
        return 0
    if _int64_safe(p, lo, hi):
        return _count_range_sieve(p, lo, hi, budget)
    return _count_range_scan(p, lo, hi, budget)


def shard_bounds(X: int, shards: int) -> list[tuple[int, int]]:
    step = -(-X // shards)
    return [(lo, min(lo + step - 1, X)) for lo in range(1, X + 1, step)]


def count_B(p: CubicPoly, X: int, shards: int = 1, budget: int = RHO_BUDGET) -> int:
    """#{1 <= n <= X : p(n) is a sum of two squares}.

    With ``shards`` > 1 the range is split into disjoint blocks counted in
    worker processes; the total does not depend on the split.
    """
    if X < 1:
        raise ValueError("X must be >= 1")
    jobs = [(p, lo, hi, budget) for lo, hi in shard_bounds(X, max(1, shards))]
    if len(jobs) == 1:
        return _count_range(jobs[0])
    with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
        return sum(pool.map(_count_range, jobs))
