"""
Standardized error hierarchy for photocount computations.
"""

from typing import Any, Dict, Optional


class PhotocountError(Exception):
    """Base exception for all photocount errors."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        self.message = message
        self.context = context or {}
        super().__init__(message)


class ContractViolationError(PhotocountError):
    """An operation was called outside its precondition."""

    def __init__(self, operation: str, message: str, context: Optional[Dict[str, Any]] = None):
        self.operation = operation
        super().__init__(f"[{operation}] {message}", context)


class NotInvertibleError(ContractViolationError):
    """Coefficient sequence with vanishing constant term has no inverse."""

    def __init__(self, context: Optional[Dict[str, Any]] = None):
        super().__init__("inverse", "sequence is not invertible: constant term is zero", context)


class DomainError(PhotocountError):
    """Argument lies outside the mathematical domain of a function."""

    def __init__(self, function: str, message: str, context: Optional[Dict[str, Any]] = None):
        self.function = function
        super().__init__(f"{function}: {message}", context)


class NumericalDegradationError(PhotocountError):
    """Floating-point evaluation lost the structure the result must have."""

    def __init__(self, message: str, advice: str, context: Optional[Dict[str, Any]] = None):
        self.advice = advice
        super().__init__(f"{message} ({advice})", context)


class InequalityViolationError(PhotocountError):
    """An a-priori estimate failed to hold."""

    def __init__(self, lemma: str, m: Optional[int], tau: float,
                 context: Optional[Dict[str, Any]] = None):
        self.lemma = lemma
        self.m = m
        self.tau = tau
        where = f"m={m}, " if m is not None else ""
        super().__init__(f"Inequality '{lemma}' violated at {where}tau={tau!r}", context)


class ConfigurationError(PhotocountError):
    """Configuration validation or loading error."""

    def __init__(self, message: str, config_key: Optional[str] = None,
                 context: Optional[Dict[str, Any]] = None):
        self.config_key = config_key
        if config_key:
            formatted_message = f"Configuration error for '{config_key}': {message}"
        else:
            formatted_message = f"Configuration error: {message}"
        super().__init__(formatted_message, context)


class SimulationError(PhotocountError):
    """Monte-Carlo sampling or estimation failed."""
