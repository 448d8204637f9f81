"""Tagged numeric values: exact rationals with a high-precision float fallback."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union
import logging

import mpmath

from ..config import settings
from ..exceptions import EvaluationDomainError

logger = logging.getLogger(__name__)

mpmath.mp.prec = settings.float_precision_bits

Scalar = Union[Fraction, mpmath.mpf]


def to_scalar(value, exact: bool = True) -> Scalar:
    """Coerce ints, Fractions, floats and mpf values into the working scalar type."""
    if isinstance(value, NumValue):
        return value.value
    if exact and isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, mpmath.mpf):
        return value
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


@dataclass(frozen=True)
class NumValue:
    """A number that remembers whether it was computed exactly.

    Arithmetic between two exact values stays exact. Anything touching a
    float demotes the result to an mpmath float and clears the flag.
    """

    value: Scalar
    exact: bool = True

    @classmethod
    def of(cls, value) -> "NumValue":
        if isinstance(value, NumValue):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value), True)
        return cls(to_scalar(value, exact=False), False)

    @classmethod
    def inexact(cls, value) -> "NumValue":
        return cls(to_scalar(value, exact=False), False)

    def _combine(self, other, op) -> "NumValue":
        other = NumValue.of(other)
        if self.exact and other.exact:
            return NumValue(op(self.value, other.value), True)
        return NumValue(op(to_scalar(self.value, False), to_scalar(other.value, False)), False)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return NumValue.of(other) - self

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = NumValue.of(other)
        if other.is_zero():
            raise EvaluationDomainError("division", "division by zero")
        return self._combine(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return NumValue.of(other) / self

    def __neg__(self):
        return NumValue(-self.value, self.exact)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("NumValue powers must be integers")
        if exponent < 0 and self.is_zero():
            raise EvaluationDomainError("power", f"zero raised to {exponent}")
        return NumValue(self.value ** exponent, self.exact)

    def __eq__(self, other):
        if isinstance(other, NumValue):
            return self.value == other.value
        return self.value == other

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        other = NumValue.of(other)
        if self.exact and other.exact:
            return self.value < other.value
        return self.to_mpf() < other.to_mpf()

    def __float__(self):
        return float(self.value)

    def is_zero(self, tolerance: float = 0.0) -> bool:
        if self.exact or tolerance == 0.0:
            return self.value == 0
        return abs(self.value) <= tolerance

    def to_float(self) -> float:
        return float(self.value)

    def to_mpf(self) -> mpmath.mpf:
        return to_scalar(self.value, exact=False)

    def __str__(self):
        if self.exact:
            return str(self.value)
        return mpmath.nstr(self.value, 17)

    def __repr__(self):
        return f"NumValue({self}, exact={self.exact})"
