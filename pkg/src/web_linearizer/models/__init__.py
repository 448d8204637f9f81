"""Expression engine: exact symbolic functions of x and y."""

from .expr import (
    Add, Const, Expr, Func, Mul, Pow, Var, X, Y,
    diff, evaluate, evaluate_array, simplify,
)
from .numeric import NumValue
from .parser import parse, to_text

__all__ = [
    "Add", "Const", "Expr", "Func", "Mul", "Pow", "Var", "X", "Y",
    "diff", "evaluate", "evaluate_array", "simplify",
    "NumValue", "parse", "to_text",
]
