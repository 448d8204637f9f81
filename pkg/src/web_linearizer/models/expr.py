"""Symbolic expressions in the plane coordinates x and y.

Expr trees are immutable. The node constructors apply a light canonical
form (flattening, constant folding, dropping 0 and 1 identities) so that
trees built by the parser, by differentiation and by hand compare equal
whenever they are built the same way. ``simplify`` goes further and
collects like terms and equal bases.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union
import logging
import math

import mpmath
import numpy as np

from .numeric import NumValue
from ..exceptions import EvaluationDomainError

logger = logging.getLogger(__name__)

VARIABLES = ("x", "y")
FUNCTIONS = ("exp", "log", "sin", "cos", "arctan", "sqrt")


class Expr:
    """Base class of expression nodes."""

    __slots__ = ("_hash",)
    precedence = 100

    def children(self) -> Tuple["Expr", ...]:
        return ()

    def key(self) -> tuple:
        raise NotImplementedError

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr) or self._hash != other._hash:
            return False
        return self.key() == other.key()

    def __ne__(self, other):
        return not self == other

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Add(self, negate(as_expr(other)))

    def __rsub__(self, other):
        return Add(as_expr(other), negate(self))

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Mul(self, Pow(as_expr(other), -1))

    def __rtruediv__(self, other):
        return Mul(as_expr(other), Pow(self, -1))

    def __neg__(self):
        return negate(self)

    def __pow__(self, exponent: int):
        return Pow(self, exponent)

    def __str__(self):
        from .parser import to_text
        return to_text(self)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)
        self._hash = hash(("const", self.value))

    def key(self):
        return ("const", self.value)


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        if name not in VARIABLES:
            raise ValueError(f"unsupported variable {name}")
        self.name = name
        self._hash = hash(("var", name))

    def key(self):
        return ("var", self.name)


class Func(Expr):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr):
        if name not in FUNCTIONS:
            raise ValueError(f"unsupported function {name}")
        self.name = name
        self.arg = arg
        self._hash = hash(("func", name, arg._hash))

    def children(self):
        return (self.arg,)

    def key(self):
        return ("func", self.name, self.arg)


class _Nary(Expr):
    __slots__ = ("args",)
    tag = ""

    def children(self):
        return self.args

    def key(self):
        return (self.tag,) + self.args


class Add(_Nary):
    """Sum node; constants are folded into one trailing term."""

    __slots__ = ()
    tag = "add"
    precedence = 10

    def __new__(cls, *terms: Expr):
        flat = []
        constant = Fraction(0)
        for term in terms:
            parts = term.args if isinstance(term, Add) else (term,)
            for part in parts:
                if isinstance(part, Const):
                    constant += part.value
                else:
                    flat.append(part)
        if constant != 0:
            flat.append(Const(constant))
        if not flat:
            return Const(0)
        if len(flat) == 1:
            return flat[0]
        node = object.__new__(cls)
        node.args = tuple(flat)
        node._hash = hash(("add",) + tuple(a._hash for a in node.args))
        return node

    def __init__(self, *terms):
        pass


class Mul(_Nary):
    """Product node; constants are folded into one leading coefficient."""

    __slots__ = ()
    tag = "mul"
    precedence = 20

    def __new__(cls, *factors: Expr):
        flat = []
        coefficient = Fraction(1)
        for factor in factors:
            parts = factor.args if isinstance(factor, Mul) else (factor,)
            for part in parts:
                if isinstance(part, Const):
                    coefficient *= part.value
                else:
                    flat.append(part)
        if coefficient == 0:
            return Const(0)
        if coefficient != 1:
            flat.insert(0, Const(coefficient))
        if not flat:
            return Const(1)
        if len(flat) == 1:
            return flat[0]
        node = object.__new__(cls)
        node.args = tuple(flat)
        node._hash = hash(("mul",) + tuple(a._hash for a in node.args))
        return node

    def __init__(self, *factors):
        pass

    def split_coefficient(self) -> Tuple[Fraction, Expr]:
        if isinstance(self.args[0], Const):
            return self.args[0].value, Mul(*self.args[1:])
        return Fraction(1), self


class Pow(Expr):
    """Integer power node."""

    __slots__ = ("base", "exponent")
    precedence = 30

    def __new__(cls, base: Expr, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("only integer powers are supported")
        if exponent == 0:
            return Const(1)
        if exponent == 1:
            return base
        if isinstance(base, Const) and not (base.value == 0 and exponent < 0):
            return Const(base.value ** exponent)
        if isinstance(base, Pow):
            return Pow(base.base, base.exponent * exponent)
        node = object.__new__(cls)
        node.base = base
        node.exponent = exponent
        node._hash = hash(("pow", base._hash, exponent))
        return node

    def __init__(self, base, exponent):
        pass

    def children(self):
        return (self.base,)

    def key(self):
        return ("pow", self.base, self.exponent)


ZERO = Const(0)
ONE = Const(1)
X = Var("x")
Y = Var("y")


def as_expr(value: Union[Expr, int, Fraction, str]) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        return Var(value)
    return Const(value)


def negate(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    if isinstance(e, Mul) and isinstance(e.args[0], Const):
        return Mul(Const(-e.args[0].value), *e.args[1:])
    return Mul(Const(-1), e)


def func(name: str, arg: Expr) -> Expr:
    return Func(name, as_expr(arg))


def exp(arg) -> Expr:
    return func("exp", arg)


def log(arg) -> Expr:
    return func("log", arg)


def sin(arg) -> Expr:
    return func("sin", arg)


def cos(arg) -> Expr:
    return func("cos", arg)


def arctan(arg) -> Expr:
    return func("arctan", arg)


def sqrt(arg) -> Expr:
    return func("sqrt", arg)


# ---------------------------------------------------------------------------
# simplification


_RANK = {"const": 0, "var": 1, "func": 2, "pow": 3, "mul": 4, "add": 5}


@lru_cache(maxsize=65536)
def sort_key(e: Expr) -> tuple:
    """Total order on trees, used to put factors and terms in a fixed order."""
    if isinstance(e, Const):
        return (0, e.value)
    if isinstance(e, Var):
        return (1, e.name)
    if isinstance(e, Func):
        return (2, e.name, sort_key(e.arg))
    if isinstance(e, Pow):
        return (3, sort_key(e.base), e.exponent)
    tag = e.key()[0]
    return (_RANK[tag], tuple(sort_key(a) for a in e.args))


def _split_term(term: Expr) -> Tuple[Fraction, Expr]:
    if isinstance(term, Const):
        return term.value, ONE
    if isinstance(term, Mul):
        return term.split_coefficient()
    return Fraction(1), term


def _split_power(factor: Expr) -> Tuple[Expr, int]:
    if isinstance(factor, Pow):
        return factor.base, factor.exponent
    return factor, 1


@lru_cache(maxsize=65536)
def simplify(e: Expr) -> Expr:
    """Conservative simplification: like terms, equal bases, 0/1 identities."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Func):
        return Func(e.name, simplify(e.arg))
    if isinstance(e, Pow):
        return Pow(simplify(e.base), e.exponent)
    if isinstance(e, Mul):
        exponents: Dict[Expr, int] = {}
        order = []
        coefficient = Fraction(1)
        for factor in (simplify(a) for a in e.args):
            parts = factor.args if isinstance(factor, Mul) else (factor,)
            for part in parts:
                if isinstance(part, Const):
                    coefficient *= part.value
                    continue
                base, power = _split_power(part)
                if base not in exponents:
                    order.append(base)
                    exponents[base] = 0
                exponents[base] += power
        factors = [Pow(base, exponents[base]) for base in sorted(order, key=sort_key) if exponents[base] != 0]
        return Mul(Const(coefficient), *factors)
    if isinstance(e, Add):
        coefficients: Dict[Expr, Fraction] = {}
        order = []
        for term in (simplify(a) for a in e.args):
            parts = term.args if isinstance(term, Add) else (term,)
            for part in parts:
                c, rest = _split_term(part)
                if rest not in coefficients:
                    order.append(rest)
                    coefficients[rest] = Fraction(0)
                coefficients[rest] += c
        terms = [Mul(Const(coefficients[rest]), rest) for rest in sorted(order, key=sort_key) if coefficients[rest] != 0]
        return Add(*terms)
    raise TypeError(f"unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# differentiation


@lru_cache(maxsize=65536)
def _diff(e: Expr, v: str) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == v else ZERO
    if isinstance(e, Add):
        return Add(*(_diff(a, v) for a in e.args))
    if isinstance(e, Mul):
        terms = []
        for i, factor in enumerate(e.args):
            d = _diff(factor, v)
            if d != ZERO:
                terms.append(Mul(*e.args[:i], d, *e.args[i + 1:]))
        return Add(*terms)
    if isinstance(e, Pow):
        d = _diff(e.base, v)
        if d == ZERO:
            return ZERO
        return Mul(Const(e.exponent), Pow(e.base, e.exponent - 1), d)
    if isinstance(e, Func):
        d = _diff(e.arg, v)
        if d == ZERO:
            return ZERO
        u = e.arg
        if e.name == "exp":
            outer = e
        elif e.name == "log":
            outer = Pow(u, -1)
        elif e.name == "sin":
            outer = Func("cos", u)
        elif e.name == "cos":
            outer = negate(Func("sin", u))
        elif e.name == "arctan":
            outer = Pow(Add(ONE, Pow(u, 2)), -1)
        else:
            outer = Mul(Const(Fraction(1, 2)), Pow(e, -1))
        return Mul(outer, d)
    raise TypeError(f"unknown node {type(e).__name__}")


def diff(e: Expr, v: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to ``v`` in {x, y}."""
    if v not in VARIABLES:
        raise ValueError(f"can only differentiate with respect to x or y, not {v}")
    return simplify(_diff(e, v))


# ---------------------------------------------------------------------------
# evaluation


def _exact_function(name: str, value: Fraction) -> Optional[Fraction]:
    """Rational value of a function call when an identity forces one."""
    if name == "exp" and value == 0:
        return Fraction(1)
    if name == "log" and value == 1:
        return Fraction(0)
    if name in ("sin", "arctan") and value == 0:
        return Fraction(0)
    if name == "cos" and value == 0:
        return Fraction(1)
    if name == "sqrt" and value >= 0:
        num, den = value.numerator, value.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn == num and rd * rd == den:
            return Fraction(int(rn), int(rd))
    return None


_MP_FUNCTIONS = {
    "exp": mpmath.exp,
    "log": mpmath.log,
    "sin": mpmath.sin,
    "cos": mpmath.cos,
    "arctan": mpmath.atan,
    "sqrt": mpmath.sqrt,
}


def _check_function_domain(name: str, value: NumValue, point) -> None:
    if name == "log" and value.value <= 0:
        raise EvaluationDomainError("log", f"argument {value} is not positive", point)
    if name == "sqrt" and value.value < 0:
        raise EvaluationDomainError("sqrt", f"argument {value} is negative", point)


class Evaluation:
    """Evaluates many expressions at one point, sharing a memo across the DAG."""

    def __init__(self, point: Sequence, mode: str = "exact"):
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown evaluation mode {mode}")
        self.mode = mode
        self.point = tuple(point)
        if mode == "exact":
            self._env = {name: NumValue.of(Fraction(c)) for name, c in zip(VARIABLES, self.point)}
        else:
            self._env = {name: NumValue.inexact(c) for name, c in zip(VARIABLES, self.point)}
        self._memo: Dict[Expr, NumValue] = {}
        self.fallbacks = 0

    def __call__(self, e: Expr) -> NumValue:
        stack = [e]
        memo = self._memo
        while stack:
            node = stack[-1]
            if node in memo:
                stack.pop()
                continue
            pending = [c for c in node.children() if c not in memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            memo[node] = self._visit(node)
        return memo[e]

    def _visit(self, node: Expr) -> NumValue:
        memo = self._memo
        if isinstance(node, Const):
            return NumValue.of(node.value) if self.mode == "exact" else NumValue.inexact(node.value)
        if isinstance(node, Var):
            return self._env[node.name]
        if isinstance(node, Add):
            total = memo[node.args[0]]
            for a in node.args[1:]:
                total = total + memo[a]
            return total
        if isinstance(node, Mul):
            product = memo[node.args[0]]
            for a in node.args[1:]:
                product = product * memo[a]
            return product
        if isinstance(node, Pow):
            base = memo[node.base]
            if node.exponent < 0 and base.is_zero():
                raise EvaluationDomainError("division", "division by zero", self.point)
            return base ** node.exponent
        if isinstance(node, Func):
            arg = memo[node.arg]
            _check_function_domain(node.name, arg, self.point)
            if arg.exact:
                value = _exact_function(node.name, arg.value)
                if value is not None:
                    return NumValue.of(value)
                self.fallbacks += 1
                logger.debug(f"{node.name}({arg}) has no rational value; using float fallback")
            return NumValue.inexact(_MP_FUNCTIONS[node.name](arg.to_mpf()))
        raise TypeError(f"unknown node {type(node).__name__}")


def evaluate(e: Expr, point: Sequence, mode: str = "exact") -> NumValue:
    """Value of ``e`` at ``point``; the result records whether it stayed exact."""
    return Evaluation(point, mode)(e)


_NP_FUNCTIONS = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "arctan": np.arctan,
    "sqrt": np.sqrt,
}


class ArrayEvaluation:
    """Vectorised float64 evaluation over arrays of points."""

    def __init__(self, xs: np.ndarray, ys: np.ndarray):
        self.xs = np.asarray(xs, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        self._memo: Dict[Expr, np.ndarray] = {}

    def __call__(self, e: Expr) -> np.ndarray:
        stack = [e]
        memo = self._memo
        while stack:
            node = stack[-1]
            if node in memo:
                stack.pop()
                continue
            pending = [c for c in node.children() if c not in memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            memo[node] = self._visit(node)
        return memo[e]

    def _visit(self, node: Expr) -> np.ndarray:
        memo = self._memo
        shape = self.xs.shape
        if isinstance(node, Const):
            return np.full(shape, float(node.value))
        if isinstance(node, Var):
            return self.xs if node.name == "x" else self.ys
        if isinstance(node, Add):
            return sum((memo[a] for a in node.args[1:]), memo[node.args[0]])
        if isinstance(node, Mul):
            product = memo[node.args[0]]
            for a in node.args[1:]:
                product = product * memo[a]
            return product
        if isinstance(node, Pow):
            base = memo[node.base]
            if node.exponent < 0 and np.any(base == 0):
                raise EvaluationDomainError("division", "division by zero on the grid")
            return base ** node.exponent if node.exponent > 0 else 1.0 / base ** (-node.exponent)
        if isinstance(node, Func):
            arg = memo[node.arg]
            if node.name == "log" and np.any(arg <= 0):
                raise EvaluationDomainError("log", "non-positive argument on the grid")
            if node.name == "sqrt" and np.any(arg < 0):
                raise EvaluationDomainError("sqrt", "negative argument on the grid")
            return _NP_FUNCTIONS[node.name](arg)
        raise TypeError(f"unknown node {type(node).__name__}")


def evaluate_array(e: Expr, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    return ArrayEvaluation(xs, ys)(e)


def free_variables(e: Expr) -> Iterable[str]:
    seen = set()
    stack = [e]
    names = set()
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        if isinstance(node, Var):
            names.add(node.name)
        stack.extend(node.children())
    return sorted(names)


def node_count(e: Expr) -> int:
    """Number of distinct nodes in the expression DAG."""
    seen = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(node.children())
    return len(seen)
