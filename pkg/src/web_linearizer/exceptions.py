"""Custom exception hierarchy for the web linearizer.

Every failure the pipeline can report maps onto one of these classes, and
the CLI maps each family onto its own exit status.
"""

from typing import Optional, Dict, Any, Sequence
import time


class WebLinearizerError(Exception):
    """Base exception class for all web linearizer errors."""

    exit_code = 1

    def __init__(self, message: str, error_code: Optional[str] = None, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.context = context or {}
        self.timestamp = time.time()

    def __str__(self):
        return f"[{self.error_code}] {self.message}"


class ExpressionSyntaxError(WebLinearizerError):
    """Exception raised when an expression cannot be parsed."""

    exit_code = 2

    def __init__(self, source: str, position: int, reason: str, **kwargs):
        message = f"Syntax error at position {position}: {reason}"
        super().__init__(message, **kwargs)
        self.source = source
        self.position = position
        self.reason = reason
        self.context.update({'source': source, 'position': position})


class UnknownIdentifierError(ExpressionSyntaxError):
    """Exception raised for identifiers outside the supported alphabet."""

    def __init__(self, source: str, name: str, position: int, **kwargs):
        super().__init__(source, position, f"unknown identifier '{name}'", **kwargs)
        self.name = name


class EvaluationDomainError(WebLinearizerError):
    """Exception raised when an expression is evaluated outside its domain."""

    exit_code = 3

    def __init__(self, operation: str, reason: str, point: Optional[Sequence[Any]] = None, **kwargs):
        message = f"Domain error in {operation}: {reason}"
        if point is not None:
            message += f" at ({', '.join(str(c) for c in point)})"
        super().__init__(message, **kwargs)
        self.operation = operation
        self.reason = reason
        self.point = tuple(point) if point is not None else None


class DerivationError(WebLinearizerError):
    """Base exception for failures of the symbolic obstruction pipeline."""

    exit_code = 4

    def __init__(self, stage: str, reason: str, **kwargs):
        message = f"Derivation failed in {stage}: {reason}"
        super().__init__(message, **kwargs)
        self.stage = stage
        self.reason = reason


class ShapeViolationError(DerivationError):
    """Exception raised when a polynomial keeps monomials it must not have."""

    def __init__(self, stage: str, offending: Sequence[str], **kwargs):
        shown = ", ".join(list(offending)[:8])
        super().__init__(stage, f"unexpected monomials {shown}", **kwargs)
        self.offending = list(offending)


class DegreeOverrunError(DerivationError):
    """Exception raised when a polynomial exceeds its degree bound."""

    def __init__(self, name: str, degree: int, bound: int, **kwargs):
        super().__init__(name, f"degree {degree} exceeds bound {bound}", **kwargs)
        self.name = name
        self.degree = degree
        self.bound = bound


class NonTerminationError(DerivationError):
    """Exception raised when a rewrite loop exceeds its pass bound."""

    def __init__(self, stage: str, passes: int, **kwargs):
        super().__init__(stage, f"no normal form after {passes} passes", **kwargs)
        self.passes = passes


class DeterminantIdentityError(DerivationError):
    """Exception raised when the 4x4 determinant of the row system is nonzero."""

    def __init__(self, witness: Any, **kwargs):
        super().__init__("determinant identity", f"nonzero determinant {witness} under a random binding", **kwargs)
        self.witness = witness


class PhiMismatchError(DerivationError):
    """Exception raised when the derived and printed first obstruction differ."""

    def __init__(self, differences: Sequence[str], **kwargs):
        super().__init__("first obstruction", f"{len(differences)} monomials disagree beyond an overall scale", **kwargs)
        self.differences = list(differences)


class ParallelizableBranch(WebLinearizerError):
    """Signal raised when the curvature vanishes at the evaluation point."""

    exit_code = 0

    def __init__(self, point: Sequence[Any], **kwargs):
        message = f"Curvature vanishes at ({', '.join(str(c) for c in point)}); parallelizable branch"
        super().__init__(message, **kwargs)
        self.point = tuple(point)


class IntegrationError(WebLinearizerError):
    """Exception raised when the field integration must stop."""

    exit_code = 5

    def __init__(self, node: Any, reason: str, **kwargs):
        message = f"Integration aborted at node {node}: {reason}"
        super().__init__(message, **kwargs)
        self.node = node
        self.reason = reason


class IllConditionedError(WebLinearizerError):
    """Exception raised when a float-mode decision has no clear numerical gap."""

    exit_code = 6

    def __init__(self, operation: str, singular_value_gap: float, **kwargs):
        message = f"Ill-conditioned {operation}: singular value gap {singular_value_gap:.3g}"
        super().__init__(message, **kwargs)
        self.operation = operation
        self.singular_value_gap = singular_value_gap


class ConfigurationError(WebLinearizerError):
    """Exception raised for configuration-related errors."""

    exit_code = 2

    def __init__(self, setting: str, value: Any, reason: str, **kwargs):
        message = f"Configuration error for {setting}={value}: {reason}"
        super().__init__(message, **kwargs)
        self.setting = setting
        self.value = value
        self.reason = reason


class CacheError(WebLinearizerError):
    """Exception raised when a cache entry cannot be read or written."""

    def __init__(self, path: str, reason: str, **kwargs):
        message = f"Cache error at {path}: {reason}"
        super().__init__(message, **kwargs)
        self.path = path
        self.reason = reason


class ClassCountError(WebLinearizerError):
    """Exception raised when more than 15 linearization classes are reported."""

    def __init__(self, count: int, **kwargs):
        super().__init__(f"{count} projective classes reported, at most 15 are possible", **kwargs)
        self.count = count
