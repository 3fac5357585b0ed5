"""Exception types shared across the package.

Every domain error derives from :class:`PoissonForgeError`, which lets the
command-line front end separate domain failures (exit code 2) from usage
mistakes (exit code 1).
"""

from __future__ import annotations


class PoissonForgeError(Exception):
    """Base class for domain errors."""

    code = "PoissonForgeError"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class IncompatibleTowers(PoissonForgeError):
    code = "IncompatibleTowers"


class NotAQuadraticTower(PoissonForgeError):
    code = "NotAQuadraticTower"


class ArityMismatch(PoissonForgeError):
    code = "ArityMismatch"


class NonInvertibleSubstitution(PoissonForgeError):
    code = "NonInvertibleSubstitution"


class NotDivisible(PoissonForgeError):
    code = "NotDivisible"


class DegreeCapExceeded(PoissonForgeError):
    code = "DegreeCapExceeded"


class NotAPoissonIdeal(PoissonForgeError):
    code = "NotAPoissonIdeal"


class NotCentral(PoissonForgeError):
    code = "NotCentral"


class NotGraded(PoissonForgeError):
    code = "NotGraded"


class AlphaNotPoisson(PoissonForgeError):
    code = "AlphaNotPoisson"


class DeltaNotCompatible(PoissonForgeError):
    code = "DeltaNotCompatible"


class NotHomogeneous(PoissonForgeError):
    code = "NotHomogeneous"


class DegreeTooHigh(PoissonForgeError):
    code = "DegreeTooHigh"


class NotAntisymmetric(PoissonForgeError):
    code = "NotAntisymmetric"


class LieJacobiFails(PoissonForgeError):
    code = "LieJacobiFails"

    def __init__(self, witness):
        super().__init__(f"Lie Jacobi identity fails on basis triple {witness}")
        self.witness = witness


class ZeroParameter(PoissonForgeError):
    code = "ZeroParameter"


class RequiresOracle(PoissonForgeError):
    """Raised when a polynomial falls outside the bounded factorizer.

    ``part`` holds the factor whose irreducibility could not be decided.
    """

    code = "RequiresOracle"

    def __init__(self, part, message: str | None = None):
        super().__init__(message or f"cannot factor {part} within supported shapes")
        self.part = part


class FactorizationUnavailable(PoissonForgeError):
    code = "FactorizationUnavailable"


class PolySyntaxError(PoissonForgeError, ValueError):
    code = "SyntaxError"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self), "position": self.position}


class UnknownGenerator(PoissonForgeError, ValueError):
    code = "UnknownGenerator"


class ZeroDenominator(PoissonForgeError, ZeroDivisionError):
    code = "ZeroDenominator"
