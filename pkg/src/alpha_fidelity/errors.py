"""Exception hierarchy; each error carries the CLI exit code it maps to."""

from __future__ import annotations

from typing import Optional

USAGE_EXIT_CODE = 2
DOMAIN_EXIT_CODE = 3


class AlphaFidelityError(ValueError):
    """Base error with an exit code and optional structured data."""

    exit_code = USAGE_EXIT_CODE

    def __init__(self, message: str, data: Optional[dict] = None) -> None:
        super().__init__(message)
        self.message = message
        self.data = data or {}


# validation errors -------------------------------------------------------


class InvalidStateError(AlphaFidelityError):
    """Input is not a valid quantum state."""


class DimensionError(AlphaFidelityError):
    """Matrix dimensions are unsupported or do not match."""


class ContractViolation(AlphaFidelityError):
    """Input breaks a precondition such as Hermiticity."""


class NotPSDError(AlphaFidelityError):
    """Matrix has an eigenvalue below the PSD tolerance."""


class SingularConstructionError(AlphaFidelityError):
    """A construction is undefined for the given input."""


class ParameterError(AlphaFidelityError):
    """A model or constructor parameter lies outside its valid range."""


class SizeError(AlphaFidelityError):
    """Dense oracle requested beyond its supported size."""


class IdenticalUnitariesError(AlphaFidelityError):
    """Programming bound requested for indistinguishable unitaries."""


# computation-domain errors -----------------------------------------------


class InfeasibleError(AlphaFidelityError):
    """No start produced a finite objective value."""

    exit_code = DOMAIN_EXIT_CODE


class BracketError(AlphaFidelityError):
    """Root search interval has no sign change."""

    exit_code = DOMAIN_EXIT_CODE


class EmptyIntervalError(AlphaFidelityError):
    """Fidelity constraint admits no Loschmidt value."""

    exit_code = DOMAIN_EXIT_CODE


class CrossoverNotFound(AlphaFidelityError):
    """Frequency scan does not bracket a compatible/incompatible crossover."""

    exit_code = DOMAIN_EXIT_CODE


__all__ = [
    "AlphaFidelityError",
    "BracketError",
    "ContractViolation",
    "CrossoverNotFound",
    "DOMAIN_EXIT_CODE",
    "DimensionError",
    "EmptyIntervalError",
    "IdenticalUnitariesError",
    "InfeasibleError",
    "InvalidStateError",
    "NotPSDError",
    "ParameterError",
    "SingularConstructionError",
    "SizeError",
    "USAGE_EXIT_CODE",
]
