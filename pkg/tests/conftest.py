import random
from math import isqrt

import pytest
from hypothesis import strategies as st

from chatelet.ring import ThetaElem, integer_roots, validate_poly

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# --- independent oracles ---


def reduce_mod_monic(coeffs, monic):
    """Remainder of an ascending integer coefficient list by a monic polynomial."""
    r = list(coeffs)
    d = len(monic) - 1
    for k in range(len(r) - 1, d - 1, -1):
        q = r[k]
        if q:
            for j, m in enumerate(monic):
                r[k - d + j] -= q * m
    r = r[:d] + [0] * max(0, d - len(r))
    return r


def naive_poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def naive_theta_product(p, x, y):
    """x*y in Z[theta] by schoolbook multiplication and long division by p."""
    return ThetaElem.from_seq(reduce_mod_monic(naive_poly_mul(list(x), list(y)), list(p.coeffs)))


def two_squares_brute(n):
    if n < 0:
        return None
    for a in range(isqrt(n // 2) + 1):
        b2 = n - a * a
        b = isqrt(b2)
        if b * b == b2:
            return a, b
    return None


def trial_factor(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


# --- polynomials ---


def is_valid_cubic(a2, a1, a0, parity=True):
    if integer_roots(a2, a1, a0):
        return False
    if not parity:
        return True
    return (a2 * a2 - a1) % 2 == 0 and (a1 * a2 - a0) % 2 == 1


def random_valid_cubics(k, seed, span=40, parity=True):
    rng = random.Random(seed)
    out = []
    while len(out) < k:
        a2, a1, a0 = (rng.randint(-span, span) for _ in range(3))
        if is_valid_cubic(a2, a1, a0, parity):
            out.append(validate_poly(a2, a1, a0, relaxed=not parity))
    return out


@pytest.fixture
def p112():
    return validate_poly(1, 1, 2)


@pytest.fixture
def p17():
    return validate_poly(0, 0, 17)


coef = st.integers(-10**6, 10**6)
theta_elems = st.builds(ThetaElem, coef, coef, coef)

cubic_coeffs = st.tuples(
    st.integers(-60, 60), st.integers(-60, 60), st.integers(-200, 200)
).filter(lambda t: not integer_roots(*t))
parity_cubic_coeffs = cubic_coeffs.filter(lambda t: is_valid_cubic(*t))
