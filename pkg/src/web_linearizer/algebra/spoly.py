"""Polynomials in the base s over an arbitrary coefficient ring.

The same class carries the symbolic rows of the obstruction tower (RAlg
coefficients), their evaluations at a point (NumValue, Fraction or mpf) and
whole grids of evaluations (numpy arrays, one entry per node).
"""

from fractions import Fraction
from typing import Callable, Dict, List, Sequence
import logging
import re

import numpy as np

from .jetpoly import JetPoly, S, s
from .ralg import RAlg
from ..exceptions import ConfigurationError, DegreeOverrunError

logger = logging.getLogger(__name__)


def is_zero_coefficient(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    if isinstance(c, np.ndarray):
        return not np.any(c)
    return c == 0


class SPoly:
    """Coefficient list, lowest power of s first, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        coeffs = list(coeffs)
        while coeffs and is_zero_coefficient(coeffs[-1]):
            coeffs.pop()
        self.coeffs: List = coeffs

    @classmethod
    def monomial(cls, coefficient, power: int) -> "SPoly":
        return cls([coefficient * 0] * power + [coefficient])

    @property
    def degree(self) -> int:
        """Degree of the stored form; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, power: int):
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        raise IndexError(power)

    def coefficient(self, power: int, zero=0):
        return self.coeffs[power] if 0 <= power < len(self.coeffs) else zero

    def leading(self):
        return self.coeffs[-1] if self.coeffs else None

    # arithmetic ------------------------------------------------------------

    def __add__(self, other) -> "SPoly":
        if not isinstance(other, SPoly):
            other = SPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for j in range(n):
            if j >= len(self.coeffs):
                out.append(other.coeffs[j])
            elif j >= len(other.coeffs):
                out.append(self.coeffs[j])
            else:
                out.append(self.coeffs[j] + other.coeffs[j])
        return SPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "SPoly":
        return SPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "SPoly":
        if not isinstance(other, SPoly):
            other = SPoly([other])
        return self + (-other)

    def __rsub__(self, other) -> "SPoly":
        return SPoly([other]) - self

    def scale(self, factor) -> "SPoly":
        return SPoly([c * factor for c in self.coeffs])

    def __mul__(self, other) -> "SPoly":
        if not isinstance(other, SPoly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return SPoly()
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                product = a * b
                out[i + j] = product if out[i + j] is None else out[i + j] + product
        return SPoly(out)

    def __rmul__(self, other) -> "SPoly":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "SPoly":
        if exponent < 0:
            raise ValueError("SPoly powers must be non-negative")
        result = None
        for _ in range(exponent):
            result = self if result is None else result * self
        return result if result is not None else SPoly([1])

    def shift(self, power: int) -> "SPoly":
        """Multiply by s^power."""
        if self.is_zero() or power == 0:
            return self
        return SPoly([self.coeffs[0] * 0] * power + self.coeffs)

    def derivative(self) -> "SPoly":
        """d/ds."""
        return SPoly([c * j for j, c in enumerate(self.coeffs) if j > 0])

    def map(self, fn: Callable) -> "SPoly":
        return SPoly([fn(c) for c in self.coeffs])

    def evaluate(self, value):
        """Horner evaluation at s = value."""
        if not self.coeffs:
            return value * 0
        total = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            total = total * value + c
        return total

    def __eq__(self, other):
        if not isinstance(other, SPoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(is_zero_coefficient(a - b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(str(c) for c in self.coeffs))

    # text ------------------------------------------------------------------

    def to_text(self) -> str:
        """Canonical serialization, one '(coefficient)*s^j' per nonzero power."""
        pieces = []
        for j, c in enumerate(self.coeffs):
            if is_zero_coefficient(c):
                continue
            text = c.to_text() if hasattr(c, "to_text") else str(c)
            pieces.append(f"({text})" + ("" if j == 0 else "*s" if j == 1 else f"*s^{j}"))
        return " + ".join(pieces) if pieces else "0"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"SPoly({self.to_text()!r})"


_SPOLY_TERM = re.compile(r"\s*(?:\+\s*)?\((?P<coef>[^()]*)\)(?P<power>\*s(?:\^(?P<exp>\d+))?)?")


def parse_spoly(text: str, reader: Callable[[str], object] = RAlg.from_text) -> SPoly:
    """Inverse of SPoly.to_text for RAlg (default) or other coefficients."""
    text = text.strip()
    if text == "0":
        return SPoly()
    found: Dict[int, object] = {}
    position = 0
    while position < len(text):
        match = _SPOLY_TERM.match(text, position)
        if not match or match.end() == position:
            raise ConfigurationError("spoly", text[:60], f"cannot read term at offset {position}")
        if match.group("exp"):
            power = int(match.group("exp"))
        else:
            power = 1 if match.group("power") else 0
        coefficient = reader(match.group("coef"))
        found[power] = found[power] + coefficient if power in found else coefficient
        position = match.end()
    zero = reader("0")
    return SPoly([found.get(j, zero) for j in range(max(found) + 1)])


def det3(rows: Sequence[Sequence[SPoly]]) -> SPoly:
    """Determinant of a 3x3 matrix of SPolys by cofactor expansion."""
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def det3_derivative(rows: Sequence[Sequence[SPoly]], derived: Sequence[Sequence[SPoly]]) -> SPoly:
    """Derivative of det3(rows) given the derivative of every entry (Jacobi)."""
    total = SPoly()
    for k in range(3):
        replaced = [derived[r] if r == k else rows[r] for r in range(3)]
        total = total + det3(replaced)
    return total


def from_jetpoly(e: JetPoly) -> SPoly:
    """A JetPoly in s alone as an SPoly with RAlg coefficients."""
    return SPoly(e.s_coefficients())


def to_jetpoly(p: SPoly) -> JetPoly:
    total = JetPoly()
    for j, c in enumerate(p.coeffs):
        if not is_zero_coefficient(c):
            total = total + s(S, j) * c if j else total + JetPoly.const(c)
    return total


def evaluate_coefficients(p: SPoly, binding, one=Fraction(1)) -> SPoly:
    """Bind the R-words of every RAlg coefficient to numbers (or arrays)."""
    return SPoly([c.evaluate(binding, one) for c in p.coeffs])


def require_degree(name: str, p: SPoly, bound: int) -> None:
    if p.degree > bound:
        raise DegreeOverrunError(name, p.degree, bound)


def det4(rows: Sequence[Sequence[SPoly]]) -> SPoly:
    """Determinant of a 4x4 matrix of SPolys by expansion along the first row."""
    total = SPoly()
    for j in range(4):
        minor = [[row[k] for k in range(4) if k != j] for row in rows[1:]]
        term = rows[0][j] * det3(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
