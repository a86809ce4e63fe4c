"""From w1^2 + w2^2 = n - theta in Z[theta] to p(n) = u^2 + v^2 in Z.

The product of w1 + i*w2 over the three conjugates of theta is symmetric in
the roots, hence a Gaussian integer u + vi; its conjugate is the matching
product for w1 - i*w2, and the two multiply to the product of (n - theta_j),
which is p(n).
"""

from __future__ import annotations

from .constructor import Solution
from .errors import TransferMismatch
from .ring import CubicPoly, GaussianInteger, ThetaElem, resultant


def gaussian_norm_product(p: CubicPoly, omega1: ThetaElem, omega2: ThetaElem) -> GaussianInteger:
    """prod_j (w1(theta_j) + i w2(theta_j)) as Res(p, w1 + i w2) over Z[i]."""
    quad = [GaussianInteger(a, b) for a, b in zip(omega1, omega2)]
    monic = [GaussianInteger(c) for c in p.coeffs]
    return resultant(monic, quad)


def certify_transfer(p: CubicPoly, s: Solution) -> GaussianInteger:
    z = gaussian_norm_product(p, s.omega1, s.omega2)
    target = p(s.n)
    if z.norm() != target:
        raise TransferMismatch(f"u^2 + v^2 = {z.norm()} but p({s.n}) = {target}")
    return z
