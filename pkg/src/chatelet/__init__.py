"""Integers n for which a monic cubic p(n) is a sum of two squares.

Exact arithmetic in Z[theta], an explicit family of w1, w2 with
w1^2 + w2^2 = n - theta, the transfer to p(n) = u^2 + v^2, and a
factorization-based oracle for cross-checking and counting.
"""

from .constructor import (
    BezoutPair,
    Solution,
    bezout_odd,
    complete,
    enumerate_family,
    height_budget,
    vc_cardinality,
)
from .errors import (
    AlphaNotEven,
    ChateletError,
    CongruenceViolation,
    ConsistencyError,
    EffortExceeded,
    NotCoprime,
    OddnessViolation,
    ParityViolation,
    Reducible,
    TransferMismatch,
)
from .oracle import Factorization, TwoSquareCertificate, count_B, factorize, is_sum_two_squares
from .ring import (
    CubicPoly,
    GaussianInteger,
    GaussThetaElem,
    IntPoly,
    ThetaElem,
    degree_six_minpoly,
    norm,
    square_sum_expand,
    theta_mul,
    validate_poly,
)
from .transfer import certify_transfer, gaussian_norm_product

__version__ = "0.1.0"
