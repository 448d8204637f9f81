"""Univariate polynomials over the rationals, with a floating point fallback.

Exact polynomials delegate GCD chains, squarefree parts, resultants and
rational factorisation to sympy over QQ. Inexact polynomials (the web was only
evaluated in mpmath floats) use an SVD of the Sylvester matrix for the
approximate GCD, first in float64 and again at the mpmath working precision
when float64 shows no clear rank gap. Roots come from mpmath; every zero test
there carries the configured relative tolerance.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd as igcd, lcm as ilcm
from typing import List, Sequence, Tuple, Union
import logging

import mpmath
import numpy as np
import sympy
from scipy import linalg

from .spoly import SPoly
from ..config import settings
from ..exceptions import IllConditionedError
from ..models.numeric import NumValue

logger = logging.getLogger(__name__)

S_SYMBOL = sympy.Symbol("s")

Number = Union[int, Fraction, NumValue, mpmath.mpf, float]


def _num(value: Number) -> NumValue:
    return NumValue.of(value)


class QPoly:
    """Polynomial in s with NumValue coefficients, lowest power first.

    Exact polynomials are kept primitive: integer coefficients without a common
    factor and a positive leading coefficient. The removed factor is kept in
    ``content`` so that ``content * self`` is the polynomial that was given.
    """

    __slots__ = ("coeffs", "exact", "content")

    def __init__(self, coeffs: Sequence[Number] = (), normalize: bool = True):
        values = [_num(c) for c in coeffs]
        self.exact = all(v.exact for v in values)
        tolerance = 0.0 if self.exact else settings.zero_tolerance * max((abs(v.value) for v in values), default=0)
        while values and values[-1].is_zero(tolerance):
            values.pop()
        self.content = NumValue(Fraction(1))
        if normalize and self.exact and values:
            fractions = [v.value for v in values]
            numerators = reduce(igcd, (abs(f.numerator) for f in fractions))
            denominators = reduce(ilcm, (f.denominator for f in fractions))
            factor = Fraction(numerators, denominators)
            if fractions[-1] < 0:
                factor = -factor
            values = [NumValue(f / factor) for f in fractions]
            self.content = NumValue(factor)
        self.coeffs: List[NumValue] = values

    # construction -----------------------------------------------------------

    @classmethod
    def from_spoly(cls, p: SPoly) -> "QPoly":
        return cls(p.coeffs)

    @classmethod
    def from_roots(cls, roots: Sequence[Number]) -> "QPoly":
        product = [NumValue(Fraction(1))]
        for r in roots:
            r = _num(r)
            shifted = [NumValue(Fraction(0))] + product
            scaled = [c * r for c in product] + [NumValue(Fraction(0))]
            product = [a - b for a, b in zip(shifted, scaled)]
        return cls(product)

    @classmethod
    def one(cls) -> "QPoly":
        return cls([1])

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> "QPoly":
        return cls([Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())])

    def to_sympy(self) -> sympy.Poly:
        if not self.exact:
            raise ValueError("only exact polynomials convert to sympy")
        coefficients = [sympy.Rational(c.value.numerator, c.value.denominator) for c in reversed(self.coeffs)]
        return sympy.Poly(coefficients or [0], S_SYMBOL, domain=sympy.QQ)

    # queries ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def monic(self) -> "QPoly":
        lead = self.coeffs[-1]
        return QPoly([c / lead for c in self.coeffs], normalize=False)

    def expanded(self) -> List[NumValue]:
        """Coefficients with the content multiplied back in."""
        return [c * self.content for c in self.coeffs]

    def evaluate(self, value: Number) -> NumValue:
        total = NumValue(Fraction(0))
        for c in reversed(self.coeffs):
            total = total * value + c
        return total

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            return NotImplemented
        return [c.value for c in self.coeffs] == [c.value for c in other.coeffs]

    def __hash__(self):
        return hash(tuple(c.value for c in self.coeffs))

    def to_text(self) -> str:
        """Highest power first, e.g. 's^2 - 1' or 's + 1'."""
        if not self.coeffs:
            return "0"
        pieces = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c.is_zero():
                continue
            magnitude = str(-c if c < 0 else c)
            power = "" if j == 0 else "s" if j == 1 else f"s^{j}"
            body = magnitude if not power else (power if magnitude == "1" else f"{magnitude}*{power}")
            sign = "-" if c < 0 else "+"
            pieces.append(body if not pieces and sign == "+" else f"-{body}" if not pieces else f" {sign} {body}")
        return "".join(pieces)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"QPoly({self.to_text()!r}, exact={self.exact})"


@dataclass(frozen=True)
class Root:
    """A root of a QPoly with its multiplicity."""

    value: Union[Fraction, mpmath.mpc, mpmath.mpf]
    multiplicity: int
    exact: bool

    @property
    def is_real(self) -> bool:
        if isinstance(self.value, Fraction):
            return True
        return abs(mpmath.im(self.value)) <= settings.zero_tolerance

    def __str__(self):
        if self.exact:
            return str(self.value)
        return mpmath.nstr(self.value, 15)


# ---------------------------------------------------------------------------
# float helpers


def _sylvester(p: Sequence, q: Sequence) -> List[List]:
    """Sylvester matrix of two coefficient vectors (highest power first)."""
    n, m = len(p) - 1, len(q) - 1
    rows = []
    for row in range(m):
        rows.append([0] * row + list(p) + [0] * (m - 1 - row))
    for row in range(n):
        rows.append([0] * row + list(q) + [0] * (n - 1 - row))
    return rows


def _convolution_matrix(p: Sequence, columns: int) -> List[List]:
    matrix = [[0] * columns for _ in range(len(p) + columns - 1)]
    for col in range(columns):
        for i, c in enumerate(p):
            matrix[col + i][col] = c
    return matrix


def _mp_coeffs(p: QPoly) -> List[mpmath.mpf]:
    """Coefficients at the working precision, highest power first, unit 2-norm."""
    values = [c.to_mpf() for c in reversed(p.coeffs)]
    norm = mpmath.sqrt(mpmath.fsum(v * v for v in values))
    return [v / norm for v in values]


def _polydiv(a: Sequence[mpmath.mpf], b: Sequence[mpmath.mpf]) -> List[mpmath.mpf]:
    """Quotient of a by b, highest power first; the remainder is dropped."""
    remainder = list(a)
    quotient = []
    for i in range(len(a) - len(b) + 1):
        factor = remainder[i] / b[0]
        quotient.append(factor)
        for j, c in enumerate(b):
            remainder[i + j] -= factor * c
    return quotient


def _gcd_degree(singular: Sequence) -> Tuple[int, float]:
    """Degree of the approximate gcd and the singular value gap that separates it.

    Singular values are relative to the largest one. The numerical rank drop is
    placed at the largest ratio between neighbours among the values below the
    zero tolerance, so noise at any working precision is separated from the
    smallest genuine singular value.
    """
    top = singular[0]
    scaled = [v / top for v in singular]
    small = [i for i, v in enumerate(scaled) if i > 0 and v <= settings.zero_tolerance]
    if not small:
        return 0, float("inf")
    floor = mpmath.eps ** 2
    best, gap = small[0], 0.0
    for i in range(small[0], len(scaled)):
        ratio = float(scaled[i - 1] / max(scaled[i], floor))
        if ratio > gap:
            best, gap = i, ratio
    return len(scaled) - best, gap


def _float64_gcd(a: List[mpmath.mpf], b: List[mpmath.mpf]) -> Tuple[int, float]:
    matrix = np.array(_sylvester([float(c) for c in a], [float(c) for c in b]), dtype=float)
    singular = linalg.svd(matrix, compute_uv=False)
    return _gcd_degree([mpmath.mpf(float(v)) for v in singular])


def _mp_gcd(a: List[mpmath.mpf], b: List[mpmath.mpf]) -> Tuple[int, float]:
    singular = mpmath.svd_r(mpmath.matrix(_sylvester(a, b)), compute_uv=False)
    return _gcd_degree([singular[i] for i in range(singular.rows)])


def _approximate_gcd(p: QPoly, q: QPoly) -> QPoly:
    a, b = _mp_coeffs(p), _mp_coeffs(q)
    n, m = len(a) - 1, len(b) - 1
    k, gap = _float64_gcd(a, b)
    if gap < settings.gcd_gap_ratio:
        logger.debug(f"float64 singular value gap {gap:.3g}, retrying at {mpmath.mp.prec} bits")
        k, gap = _mp_gcd(a, b)
    if gap < settings.gcd_gap_ratio:
        raise IllConditionedError("approximate gcd", gap)
    if k == 0:
        return QPoly.one()
    # cofactors u = p/g, v = q/g satisfy p*v - q*u = 0
    left = _convolution_matrix(a, m - k + 1)
    right = _convolution_matrix([-c for c in b], n - k + 1)
    system = mpmath.matrix([l_row + r_row for l_row, r_row in zip(left, right)])
    _, _, vh = mpmath.svd_r(system, compute_uv=True)
    null = [vh[vh.rows - 1, j] for j in range(vh.cols)]
    u = null[m - k + 1:]
    g = _polydiv(a, u)
    g = [c / g[0] for c in g]
    logger.debug(f"approximate gcd of degree {k}, singular value gap {gap:.3g}")
    return QPoly([NumValue.inexact(c) for c in reversed(g)], normalize=False)


def _float_roots(p: QPoly) -> List[Root]:
    coefficients = [c.to_mpf() for c in reversed(p.coeffs)]
    found = mpmath.polyroots(coefficients, maxsteps=200, extraprec=2 * settings.float_precision_bits)
    clusters: List[Tuple[object, int]] = []
    for r in found:
        for index, (centre, count) in enumerate(clusters):
            if abs(r - centre) <= 1e-6 * max(1, abs(centre)):
                clusters[index] = (centre, count + 1)
                break
        else:
            clusters.append((r, 1))
    return [Root(value, count, False) for value, count in clusters]


# ---------------------------------------------------------------------------
# public operations


def gcd(p: QPoly, q: QPoly) -> QPoly:
    """Monic greatest common divisor."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if q.is_zero():
        return p.monic()
    if p.is_zero():
        return q.monic()
    if p.exact and q.exact:
        chain = p.to_sympy().subresultants(q.to_sympy())
        last = next(r for r in reversed(chain) if not r.is_zero)
        return QPoly.from_sympy(last.monic()).monic()
    if p.is_constant() or q.is_constant():
        return QPoly.one()
    return _approximate_gcd(p, q)


def squarefree(p: QPoly) -> QPoly:
    """Product of the distinct irreducible factors of p, monic."""
    if p.is_constant():
        return QPoly.one()
    if p.exact:
        return QPoly.from_sympy(p.to_sympy().sqf_part()).monic()
    derivative = QPoly([c * j for j, c in enumerate(p.coeffs) if j > 0], normalize=False)
    common = gcd(p, derivative)
    if common.is_constant():
        return p.monic()
    quotient = _polydiv([c.to_mpf() for c in reversed(p.coeffs)], [c.to_mpf() for c in reversed(common.coeffs)])
    return QPoly([NumValue.inexact(c) for c in reversed(quotient)], normalize=False).monic()


def radical_at_point(qs: Sequence[QPoly]) -> QPoly:
    """Squarefree generator of the common zeros of all inputs."""
    nonzero = [q for q in qs if not q.is_zero()]
    if not nonzero:
        raise ValueError("radical of an all-zero family")
    common = reduce(gcd, nonzero[1:], nonzero[0].monic())
    result = squarefree(common)
    logger.debug(f"radical of {len(nonzero)} polynomials has degree {result.degree}")
    return result


def sylvester_matrix(p: QPoly, q: QPoly) -> List[List[NumValue]]:
    n, m = p.degree, q.degree
    zero = NumValue(Fraction(0))
    rows = []
    high_p, high_q = list(reversed(p.expanded())), list(reversed(q.expanded()))
    for row in range(m):
        rows.append([zero] * row + high_p + [zero] * (m - 1 - row))
    for row in range(n):
        rows.append([zero] * row + high_q + [zero] * (n - 1 - row))
    return rows


def resultant(p: QPoly, q: QPoly) -> NumValue:
    """Determinant of the Sylvester matrix of p and q (contents included)."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant needs two nonzero polynomials")
    if p.exact and q.exact:
        value = p.to_sympy().resultant(q.to_sympy())
        value = sympy.Rational(value)
        scale = p.content.value ** q.degree * q.content.value ** p.degree
        return NumValue(Fraction(int(value.p), int(value.q)) * scale)
    matrix = mpmath.matrix([[c.to_mpf() for c in row] for row in sylvester_matrix(p, q)])
    return NumValue.inexact(mpmath.det(matrix))


def _root_order(r: Root):
    if isinstance(r.value, Fraction):
        return (False, float(r.value), 0.0)
    return (True, float(mpmath.re(r.value)), float(mpmath.im(r.value)))


def roots(p: QPoly) -> List[Root]:
    """Rational roots exactly, the remaining ones numerically, with multiplicities."""
    if p.degree < 1:
        raise ValueError("roots of a constant polynomial")
    if not p.exact:
        return _float_roots(p)
    found: List[Root] = []
    _, factors = p.to_sympy().factor_list()
    for factor, multiplicity in factors:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            value = -sympy.Rational(b) / sympy.Rational(a)
            found.append(Root(Fraction(int(value.p), int(value.q)), multiplicity, True))
            continue
        for r in _float_roots(QPoly.from_sympy(factor)):
            found.append(Root(r.value, multiplicity, False))
    return sorted(found, key=_root_order)
