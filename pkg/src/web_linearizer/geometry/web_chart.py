"""Webs {x = c, y = c, f(x, y) = c}: adapted frame, connection and curvature.

The adapted frame is e1 = (1/f_x) d/dx, e2 = (1/f_y) d/dy. Both connection
scalars equal mu = -f_xy / (f_x f_y), so [e1, e2] = -mu e1 + mu e2, and the
curvature scalar is R = e2(mu) - e1(mu).

Horizontal tensors are carried as one scalar with an integer weight; the
covariant derivative of a weight-w scalar c along e_i is
e_i(c) + KAPPA * w * mu * c.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple
import logging

import mpmath
import numpy as np

from .fjet import FJet, KAPPA, indices_up_to, required_order, word_fjet
from ..exceptions import EvaluationDomainError
from ..models.expr import (
    Add, ArrayEvaluation, Const, Evaluation, Expr, Mul, Pow, diff, simplify,
)
from ..models.numeric import NumValue
from ..models.parser import parse

logger = logging.getLogger(__name__)

MAX_LADDER_ORDER = 6

_UNIVERSAL_WORDS: Dict[str, FJet] = {}


def universal_word(word: str) -> FJet:
    """R_w as a polynomial in the partials of f, shared by every web."""
    return word_fjet(word, _UNIVERSAL_WORDS)


def canonical_words(max_order: int) -> List[str]:
    """All words 1^a 2^b with a + b <= max_order, shortest first."""
    words = []
    for length in range(max_order + 1):
        for ones in range(length, -1, -1):
            words.append("1" * ones + "2" * (length - ones))
    return words


class WebChart:
    """A web given by f, with lazily cached partial derivatives of f."""

    def __init__(self, f: Expr, source: str = None):
        self.f = f
        self.source = source if source is not None else str(f)
        self._partials: Dict[Tuple[int, int], Expr] = {(0, 0): f}

    @classmethod
    def from_text(cls, source: str) -> "WebChart":
        return cls(parse(source), source)

    def partial(self, i: int, j: int) -> Expr:
        """d^(i+j) f / dx^i dy^j; x-derivatives are taken first."""
        key = (i, j)
        if key not in self._partials:
            if j > 0:
                self._partials[key] = diff(self.partial(i, j - 1), "y")
            else:
                self._partials[key] = diff(self.partial(i - 1, 0), "x")
        return self._partials[key]

    @property
    def fx(self) -> Expr:
        return self.partial(1, 0)

    @property
    def fy(self) -> Expr:
        return self.partial(0, 1)

    def partials_up_to(self, order: int) -> Dict[Tuple[int, int], Expr]:
        return {index: self.partial(*index) for index in indices_up_to(order)}

    def frame(self) -> "FrameField":
        return FrameField.of(self)

    def in_general_position(self, point: Sequence, mode: str = "exact") -> bool:
        """True when f_x f_y is nonzero at the point."""
        try:
            check_general_position(self, point, mode)
        except EvaluationDomainError:
            return False
        return True

    def __repr__(self):
        return f"WebChart({self.source!r})"


def check_general_position(chart: WebChart, point: Sequence, mode: str = "exact") -> Tuple[NumValue, NumValue]:
    """Evaluate f_x and f_y at the point; zero values are a domain error."""
    evaluation = Evaluation(point, mode)
    fx, fy = evaluation(chart.fx), evaluation(chart.fy)
    if fx.is_zero() or fy.is_zero():
        raise EvaluationDomainError("web chart", "f_x * f_y vanishes, the web is not in general position", point)
    return fx, fy


@dataclass(frozen=True)
class FrameField:
    """Coefficients of e1, e2 along d/dx, d/dy and the connection scalar."""

    e1: Expr
    e2: Expr
    mu: Expr

    @classmethod
    def of(cls, chart: WebChart) -> "FrameField":
        fx, fy, fxy = chart.fx, chart.fy, chart.partial(1, 1)
        return cls(
            e1=Pow(fx, -1),
            e2=Pow(fy, -1),
            mu=simplify(Mul(Const(-1), fxy, Pow(fx, -1), Pow(fy, -1))),
        )

    def apply(self, c: Expr, i: int) -> Expr:
        if i == 1:
            return simplify(Mul(self.e1, diff(c, "x")))
        if i == 2:
            return simplify(Mul(self.e2, diff(c, "y")))
        raise ValueError(f"frame index must be 1 or 2, got {i}")

    def bracket_residual(self) -> Tuple[Expr, Expr]:
        """Components of [e1, e2] - (-mu e1 + mu e2) along d/dx and d/dy."""
        x_part = Add(Mul(Const(-1), self.e2, diff(self.e1, "y")), Mul(self.mu, self.e1))
        y_part = Add(Mul(self.e1, diff(self.e2, "x")), Mul(Const(-1), self.mu, self.e2))
        return simplify(x_part), simplify(y_part)

    def transversal_residual(self, chart: WebChart) -> Expr:
        """df(e1) - df(e2); zero means e1 - e2 is tangent to the level sets of f."""
        return simplify(Add(Mul(chart.fx, self.e1), Mul(Const(-1), chart.fy, self.e2)))


def curvature(chart: WebChart) -> Expr:
    """Closed form of R in terms of the partials of f."""
    fx, fy = chart.fx, chart.fy
    fxx, fxy, fyy = chart.partial(2, 0), chart.partial(1, 1), chart.partial(0, 2)
    fxxy, fxyy = chart.partial(2, 1), chart.partial(1, 2)
    bracket = Add(
        Mul(fxxy, Pow(fx, -1)),
        Mul(Const(-1), fxyy, Pow(fy, -1)),
        Mul(fxy, fyy, Pow(fy, -2)),
        Mul(Const(-1), fxx, fxy, Pow(fx, -2)),
    )
    return Mul(Pow(fx, -1), Pow(fy, -1), bracket)


def frame_curvature(chart: WebChart) -> Expr:
    """R computed from the frame as e2(mu) - e1(mu)."""
    frame = chart.frame()
    return simplify(Add(frame.apply(frame.mu, 2), Mul(Const(-1), frame.apply(frame.mu, 1))))


def frame_derive(chart: WebChart, c: Expr, weight: int, i: int) -> Expr:
    """Covariant derivative along e_i of the weight-``weight`` scalar c."""
    frame = chart.frame()
    derivative = frame.apply(c, i)
    if weight == 0:
        return derivative
    return simplify(Add(derivative, Mul(Const(KAPPA * weight), frame.mu, c)))


def fjet_to_expr(poly: FJet, chart: WebChart) -> Expr:
    return poly.map_partials(
        lambda index, e: Pow(chart.partial(*index), e),
        lambda terms: Add(*terms),
        lambda factors: Mul(*factors),
        Const,
    )


@dataclass
class CurvLadder:
    """R_w for every canonical word w with |w| <= max_order."""

    chart: WebChart
    max_order: int
    words: Dict[str, FJet] = field(default_factory=dict)
    _exprs: Dict[str, Expr] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not 0 <= self.max_order <= MAX_LADDER_ORDER:
            raise ValueError(f"ladder order must lie in 0..{MAX_LADDER_ORDER}")
        if not self.words:
            self.words = {w: universal_word(w) for w in canonical_words(self.max_order)}

    @property
    def partial_order(self) -> int:
        return required_order(self.max_order)

    def entry(self, word: str) -> Expr:
        """R_w as an Expr in x and y."""
        if word not in self.words:
            raise KeyError(f"R_{word} is not a canonical ladder entry of order {self.max_order}")
        if word not in self._exprs:
            self._exprs[word] = fjet_to_expr(self.words[word], self.chart)
        return self._exprs[word]

    def raw(self, word: str) -> FJet:
        """R_w for any word, canonical or not."""
        if len(word) > self.max_order:
            raise KeyError(f"word {word} is longer than the ladder order {self.max_order}")
        return universal_word(word)

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return len(self.words)


def ladder(chart: WebChart, max_order: int = MAX_LADDER_ORDER) -> CurvLadder:
    """All curvature derivatives up to the given word length."""
    result = CurvLadder(chart, max_order)
    logger.debug(f"ladder of order {max_order}: {len(result)} words, "
                 f"{sum(len(p) for p in result.words.values())} terms")
    return result


class PointValues:
    """Partials of f at one point, ready for FJet substitution."""

    def __init__(self, chart: WebChart, point: Sequence, mode: str, order: int):
        check_general_position(chart, point, mode)
        evaluation = Evaluation(point, mode)
        values = {index: evaluation(expr) for index, expr in chart.partials_up_to(order).items()}
        self.point = tuple(point)
        self.exact = all(v.exact for v in values.values())
        if evaluation.fallbacks:
            logger.warning(f"{evaluation.fallbacks} function values at {self.point} are not rational; "
                           f"continuing in floating point")
        if self.exact:
            self.one = Fraction(1)
            self.values = {k: v.value for k, v in values.items()}
        else:
            self.one = mpmath.mpf(1)
            self.values = {k: v.to_mpf() for k, v in values.items()}

    def __call__(self, poly: FJet) -> NumValue:
        value = poly.evaluate(self.values, self.one)
        return NumValue(value, True) if self.exact else NumValue.inexact(value)


def evaluate_ladder(l: CurvLadder, point: Sequence, mode: str = "exact") -> Dict[str, NumValue]:
    """Numeric value of every ladder word at the point."""
    values = PointValues(l.chart, point, mode, l.partial_order)
    return {word: values(poly) for word, poly in l.words.items()}


def evaluate_word(l: CurvLadder, word: str, point: Sequence, mode: str = "exact") -> NumValue:
    values = PointValues(l.chart, point, mode, required_order(len(word)))
    return values(l.raw(word))


@dataclass
class GridFields:
    """Frame data of a web sampled on a set of points (float64 arrays)."""

    fx: np.ndarray
    fy: np.ndarray
    fxx: np.ndarray
    fyy: np.ndarray
    mu: np.ndarray
    words: Dict[str, np.ndarray]


def ladder_arrays(l: CurvLadder, xs: np.ndarray, ys: np.ndarray, words: Sequence[str] = None) -> GridFields:
    """Vectorised frame data and ladder words on arrays of points."""
    evaluation = ArrayEvaluation(xs, ys)
    values = {index: evaluation(expr) for index, expr in l.chart.partials_up_to(l.partial_order).items()}
    fx, fy = values[(1, 0)], values[(0, 1)]
    if np.any(fx == 0) or np.any(fy == 0):
        raise EvaluationDomainError("web chart", "f_x * f_y vanishes on the grid")
    one = np.ones_like(fx)
    mu = -values[(1, 1)] / (fx * fy)
    chosen = l.words if words is None else {w: l.raw(w) for w in words}
    return GridFields(
        fx=fx,
        fy=fy,
        fxx=values[(2, 0)],
        fyy=values[(0, 2)],
        mu=mu,
        words={w: np.asarray(poly.evaluate(values, one), dtype=float) for w, poly in chosen.items()},
    )


def point_values(chart: WebChart, point: Sequence, mode: str = "exact", order: int = 3) -> PointValues:
    return PointValues(chart, point, mode, order)
