"""Universal polynomials in the partial derivatives of f.

An FJet is a polynomial in the symbols F_ij = d^(i+j) f / dx^i dy^j with
rational coefficients. Only F_10 and F_01 may carry negative exponents, which
is enough to write every frame quantity of a web {x, y, f}: the frame is
(1/F_10) d/dx, (1/F_01) d/dy and the connection scalar is
-F_11 / (F_10 F_01).

Working on these symbols instead of on Expr trees keeps the curvature ladder
independent of the particular f; a concrete web only substitutes values for
the F_ij at the end.
"""

from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Tuple
import logging

logger = logging.getLogger(__name__)

Index = Tuple[int, int]
Monomial = Tuple[Tuple[Index, int], ...]

_INVERTIBLE = ((1, 0), (0, 1))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exponents = dict(a)
    for index, e in b:
        exponents[index] = exponents.get(index, 0) + e
    return tuple(sorted((k, v) for k, v in exponents.items() if v != 0))


class FJet:
    """Sparse Laurent polynomial in the partials F_ij."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] = None):
        self.terms: Dict[Monomial, Fraction] = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, value) -> "FJet":
        return cls({(): Fraction(value)})

    @classmethod
    def partial(cls, i: int, j: int, exponent: int = 1) -> "FJet":
        if exponent < 0 and (i, j) not in _INVERTIBLE:
            raise ValueError(f"F_{i}{j} is not invertible")
        return cls({(((i, j), exponent),): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, FJet) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "FJet") -> "FJet":
        result = dict(self.terms)
        for m, c in other.terms.items():
            result[m] = result.get(m, 0) + c
        return FJet(result)

    def __neg__(self) -> "FJet":
        return FJet({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "FJet") -> "FJet":
        return self + (-other)

    def scale(self, factor) -> "FJet":
        factor = Fraction(factor)
        if factor == 0:
            return FJet()
        return FJet({m: c * factor for m, c in self.terms.items()})

    def __mul__(self, other) -> "FJet":
        if not isinstance(other, FJet):
            return self.scale(other)
        result: Dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                result[m] = result.get(m, 0) + ca * cb
        return FJet(result)

    __rmul__ = __mul__

    def total_derivative(self, axis: int) -> "FJet":
        """d/dx (axis 0) or d/dy (axis 1), with d F_ij = F_(i+1)j or F_i(j+1)."""
        result: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for k, (index, e) in enumerate(m):
                shifted = (index[0] + 1, index[1]) if axis == 0 else (index[0], index[1] + 1)
                rest = m[:k] + ((index, e - 1),) + m[k + 1:]
                rest = tuple(p for p in rest if p[1] != 0)
                term = _mono_mul(rest, ((shifted, 1),))
                result[term] = result.get(term, 0) + c * e
        return FJet(result)

    def order(self) -> int:
        """Highest total order i + j of a partial appearing."""
        return max((i + j for m in self.terms for (i, j), _ in m), default=0)

    def evaluate(self, values: Mapping[Index, object], one=Fraction(1)):
        """Substitute ``values[(i, j)]`` for every F_ij.

        Values may be Fractions, mpmath floats or numpy arrays; powers are
        cached per symbol so large ladders evaluate quickly.
        """
        powers: Dict[Tuple[Index, int], object] = {}
        total = None
        for m, c in self.terms.items():
            term = None
            for index, e in m:
                key = (index, e)
                if key not in powers:
                    base = values[index]
                    powers[key] = base ** e if e > 0 else one / base ** (-e)
                term = powers[key] if term is None else term * powers[key]
            coefficient = _coerce(c, one)
            term = coefficient if term is None else term * coefficient
            total = term if total is None else total + term
        if total is None:
            return one * 0
        return total

    def map_partials(self, substitute: Callable[[Index, int], object], build_sum, build_product, build_const):
        """Rebuild the polynomial in another algebra (used to produce Expr trees)."""
        terms = []
        for m, c in sorted(self.terms.items()):
            factors = [build_const(c)] + [substitute(index, e) for index, e in m]
            terms.append(build_product(factors))
        return build_sum(terms)

    def __repr__(self):
        return f"FJet({len(self.terms)} terms, order {self.order()})"


def _coerce(c: Fraction, one):
    if isinstance(one, Fraction):
        return c
    return (one * c.numerator) / c.denominator


# ---------------------------------------------------------------------------
# frame calculus on FJets

FX = FJet.partial(1, 0)
FY = FJet.partial(0, 1)
INV_FX = FJet.partial(1, 0, -1)
INV_FY = FJet.partial(0, 1, -1)
MU = -(FJet.partial(1, 1) * INV_FX * INV_FY)


def frame_apply(c: FJet, i: int) -> FJet:
    """e_i(c) for the adapted frame e1 = (1/f_x) d/dx, e2 = (1/f_y) d/dy."""
    if i == 1:
        return INV_FX * c.total_derivative(0)
    if i == 2:
        return INV_FY * c.total_derivative(1)
    raise ValueError(f"frame index must be 1 or 2, got {i}")


# sign of the connection term in a covariant derivative of a weighted scalar
KAPPA = -1


def covariant(c: FJet, weight: int, i: int) -> FJet:
    """Covariant derivative e_i(c) + KAPPA * weight * mu * c of a weighted scalar."""
    result = frame_apply(c, i)
    if weight:
        result = result + MU * c * (KAPPA * weight)
    return result


def curvature_fjet() -> FJet:
    """R = e2(mu) - e1(mu)."""
    return frame_apply(MU, 2) - frame_apply(MU, 1)


def word_fjet(word: str, cache: Dict[str, FJet] = None) -> FJet:
    """R_w with the convention R_(i w) = D_i(R_w): the leading index acts last."""
    cache = cache if cache is not None else {}
    if word in cache:
        return cache[word]
    if word == "":
        value = curvature_fjet()
    else:
        inner = word_fjet(word[1:], cache)
        value = covariant(inner, 2 + len(word) - 1, int(word[0]))
    cache[word] = value
    logger.debug(f"R_{word or '()'} has {len(value)} terms")
    return value


def required_order(max_word_length: int) -> int:
    """Partials of f needed for every word up to the given length."""
    return max_word_length + 3


def indices_up_to(order: int) -> Iterable[Index]:
    for total in range(1, order + 1):
        for i in range(total, -1, -1):
            yield (i, total - i)
