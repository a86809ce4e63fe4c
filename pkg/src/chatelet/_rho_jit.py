"""Compiled Brent rho for odd moduli below 2^63.

Products are reduced with Montgomery multiplication; the 128-bit
intermediate is assembled from 32-bit limbs since numba has no wide integer.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_ONE = np.uint64(1)
_ZERO = np.uint64(0)

LIMIT = 2**63


@njit(cache=True)
def _mul128(a, b):
    a0 = a & _M32
    a1 = a >> _S32
    b0 = b & _M32
    b1 = b >> _S32
    p00 = a0 * b0
    p01 = a0 * b1
    p10 = a1 * b0
    p11 = a1 * b1
    mid = (p00 >> _S32) + (p01 & _M32) + (p10 & _M32)
    lo = (p00 & _M32) | (mid << _S32)
    hi = p11 + (p01 >> _S32) + (p10 >> _S32) + (mid >> _S32)
    return hi, lo


@njit(cache=True)
def _redc_mul(a, b, n, ninv):
    # a, b < n < 2^63, so the reduced value stays below 2n < 2^64
    hi, lo = _mul128(a, b)
    m = lo * ninv
    mhi, _ = _mul128(m, n)
    carry = _ONE if lo != _ZERO else _ZERO
    t = hi + mhi + carry
    if t >= n:
        t -= n
    return t


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _step(y, n, ninv, c):
    y = _redc_mul(y, y, n, ninv) + c
    if y >= n:
        y -= n
    return y


@njit(cache=True)
def rho_attempt(n, y0, c, budget):
    """One Brent cycle search. Returns (factor or 0, steps used)."""
    inv = n
    for _ in range(6):
        inv *= np.uint64(2) - n * inv
    ninv = _ZERO - inv
    y = y0 % n
    x = y
    ys = y
    q = _ONE
    g = _ONE
    r = _ONE
    steps = _ZERO
    m = np.uint64(128)
    while g == _ONE:
        x = y
        i = _ZERO
        while i < r:
            y = _step(y, n, ninv, c)
            i += _ONE
        k = _ZERO
        while k < r and g == _ONE:
            ys = y
            lim = m if r - k > m else r - k
            j = _ZERO
            while j < lim:
                y = _step(y, n, ninv, c)
                d = x - y if x > y else y - x
                q = _redc_mul(q, d, n, ninv)
                j += _ONE
            g = _gcd(q, n)
            k += m
        steps += r
        r *= np.uint64(2)
        if steps >= budget and g == _ONE:
            return _ZERO, steps
    if g == n:
        g = _ONE
        while g == _ONE:
            ys = _step(ys, n, ninv, c)
            d = x - ys if x > ys else ys - x
            g = _gcd(d, n)
    if g == n:
        return _ZERO, steps
    return g, steps


@njit(cache=True)
def strong_probable_prime(n, a):
    """Miller-Rabin round for odd n < 2^63 and base a (any size; reduced mod n)."""
    a = a % n
    if a == _ZERO:
        return True
    inv = n
    for _ in range(6):
        inv *= np.uint64(2) - n * inv
    ninv = _ZERO - inv
    one_m = (_ZERO - n) % n  # 2^64 mod n, the Montgomery form of 1
    r2 = one_m
    for _ in range(64):
        r2 = r2 + r2
        if r2 >= n:
            r2 -= n
    minus_one_m = n - one_m
    d = n - _ONE
    s = 0
    while d & _ONE == _ZERO:
        d >>= _ONE
        s += 1
    base = _redc_mul(a, r2, n, ninv)
    x = one_m
    while d:
        if d & _ONE:
            x = _redc_mul(x, base, n, ninv)
        base = _redc_mul(base, base, n, ninv)
        d >>= _ONE
    if x == one_m or x == minus_one_m:
        return True
    for _ in range(s - 1):
        x = _redc_mul(x, x, n, ninv)
        if x == minus_one_m:
            return True
    return False
