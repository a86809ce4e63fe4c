"""Exception types shared across the package."""

from __future__ import annotations


class ChateletError(Exception):
    """Base class for all package errors."""


class Reducible(ChateletError):
    def __init__(self, root: int):
        super().__init__(f"polynomial has the integer root {root}")
        self.root = root


class ParityViolation(ChateletError):
    """Raised when a cubic lacks the parity conditions the construction needs.

    ``conditions`` names the failing checks: ``"a2^2-a1 even"`` and/or
    ``"a1*a2-a0 odd"``.
    """

    def __init__(self, conditions: list[str]):
        super().__init__("parity condition failed: " + ", ".join(conditions))
        self.conditions = conditions


class NotCoprime(ChateletError):
    pass


class AlphaNotEven(ChateletError):
    pass


class CongruenceViolation(ChateletError):
    pass


class ConsistencyError(ChateletError):
    """An identity that must hold by construction did not. Always a bug."""


class OddnessViolation(ConsistencyError):
    pass


class TransferMismatch(ConsistencyError):
    pass


class EffortExceeded(ChateletError):
    """Factorization budget exhausted.

    ``partial`` maps primes found so far to exponents; ``cofactor`` is the
    unfactored remainder.
    """

    def __init__(self, n: int, partial: dict[int, int], cofactor: int):
        super().__init__(f"could not finish factoring {n}: composite cofactor {cofactor} left")
        self.n = n
        self.partial = partial
        self.cofactor = cofactor
        # argument of the polynomial whose value was being factored, if known
        self.at: int | None = None
