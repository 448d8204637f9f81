"""Infix parser and printer for Expr trees.

Grammar (EBNF)::

    expr     = term , { ("+" | "-") , term } ;
    term     = unary , { ("*" | "/") , unary } ;
    unary    = "-" , unary | power ;
    power    = atom , [ "^" , unary ] ;          (* right associative, integer *)
    atom     = number | "x" | "y" | call | "(" , expr , ")" ;
    call     = fname , "(" , expr , ")" ;
    fname    = "exp" | "log" | "sin" | "cos" | "arctan" | "sqrt" ;
    number   = digits , [ "." , digits ] , [ ("e" | "E") , [ "+" | "-" ] , digits ] ;

Numbers are read as exact rationals, so ``1/2`` and ``0.5`` both become the
constant 1/2. The exponent of ``^`` must reduce to an integer constant.

``to_text`` prints a tree so that ``parse(to_text(e)) == e`` for every tree
built through the canonicalizing constructors.
"""

from fractions import Fraction
from typing import List, NamedTuple, Tuple
import logging
import re

from .expr import (
    Add, Const, Expr, FUNCTIONS, Func, Mul, Pow, Var, VARIABLES, negate,
)
from ..exceptions import ExpressionSyntaxError, UnknownIdentifierError

logger = logging.getLogger(__name__)

_TOKEN_PATTERN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


class Token(NamedTuple):
    kind: str
    text: str
    position: int


# left binding powers
_LBP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_UNARY_RBP = 15


def tokenize(source: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(source):
        if source[position:].strip() == "":
            break
        match = _TOKEN_PATTERN.match(source, position)
        if not match or match.end() == position:
            offset = len(source[position:]) - len(source[position:].lstrip())
            raise ExpressionSyntaxError(source, position + offset, f"unexpected character '{source[position + offset]}'")
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class Parser:
    """Pratt parser: each token kind has a prefix (nud) and infix (led) handler."""

    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.index = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def lbp(self, token: Token) -> int:
        if token.kind == "op":
            return _LBP.get(token.text, 0)
        return 0

    def parse(self) -> Expr:
        result = self.expression(0)
        if self.token.kind != "end":
            raise ExpressionSyntaxError(self.source, self.token.position, f"unexpected '{self.token.text}'")
        return result

    def expression(self, rbp: int) -> Expr:
        token = self.advance()
        left = self.nud(token)
        while rbp < self.lbp(self.token):
            token = self.advance()
            left = self.led(token, left)
        return left

    def expect(self, text: str) -> None:
        if self.token.kind != "op" or self.token.text != text:
            found = self.token.text or "end of input"
            raise ExpressionSyntaxError(self.source, self.token.position, f"expected '{text}', found '{found}'")
        self.advance()

    def nud(self, token: Token) -> Expr:
        if token.kind == "number":
            return Const(Fraction(token.text))
        if token.kind == "name":
            if token.text in VARIABLES:
                return Var(token.text)
            if token.text in FUNCTIONS:
                self.expect("(")
                arg = self.expression(0)
                self.expect(")")
                return Func(token.text, arg)
            raise UnknownIdentifierError(self.source, token.text, token.position)
        if token.kind == "op":
            if token.text == "-":
                return negate(self.expression(_UNARY_RBP))
            if token.text == "+":
                return self.expression(_UNARY_RBP)
            if token.text == "(":
                inner = self.expression(0)
                self.expect(")")
                return inner
        found = token.text or "end of input"
        raise ExpressionSyntaxError(self.source, token.position, f"unexpected '{found}'")

    def led(self, token: Token, left: Expr) -> Expr:
        op = token.text
        if op == "+":
            return Add(left, self.expression(_LBP["+"]))
        if op == "-":
            return Add(left, negate(self.expression(_LBP["-"])))
        if op == "*":
            return Mul(left, self.expression(_LBP["*"]))
        if op == "/":
            return Mul(left, Pow(self.expression(_LBP["/"]), -1))
        if op == "^":
            exponent = self.expression(_LBP["^"] - 1)
            if not isinstance(exponent, Const) or exponent.value.denominator != 1:
                raise ExpressionSyntaxError(self.source, token.position, "exponent must be an integer constant")
            return Pow(left, int(exponent.value))
        raise ExpressionSyntaxError(self.source, token.position, f"unexpected '{op}'")


def parse(source: str) -> Expr:
    """Parse infix text into an Expr."""
    if not source or not source.strip():
        raise ExpressionSyntaxError(source or "", 0, "empty expression")
    return Parser(source).parse()


# ---------------------------------------------------------------------------
# printing

_ATOM = 100
_POW = 30
_MUL = 20
_NEG = 15
_ADD = 10


def _wrap(text: str, prec: int, required: int) -> str:
    return text if prec >= required else f"({text})"


def _is_negative(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value < 0
    return isinstance(e, Mul) and isinstance(e.args[0], Const) and e.args[0].value < 0


def _const_text(value: Fraction) -> Tuple[str, int]:
    if value < 0:
        inner, _ = _const_text(-value)
        return f"-{inner}", _NEG
    if value.denominator == 1:
        return str(value.numerator), _ATOM
    return f"{value.numerator}/{value.denominator}", _MUL


def _power_text(base: Expr, exponent: int) -> str:
    text, prec = _render(base)
    text = _wrap(text, prec, _POW + 1)
    if exponent == 1:
        return text
    if exponent < 0:
        return f"{text}^({exponent})"
    return f"{text}^{exponent}"


def _render(e: Expr) -> Tuple[str, int]:
    if isinstance(e, Const):
        return _const_text(e.value)
    if isinstance(e, Var):
        return e.name, _ATOM
    if isinstance(e, Func):
        inner, _ = _render(e.arg)
        return f"{e.name}({inner})", _ATOM
    if isinstance(e, Pow):
        if e.exponent < 0 and not isinstance(e.base, Const):
            return f"1/{_power_text(e.base, -e.exponent)}", _MUL
        return _power_text(e.base, e.exponent), _POW
    if isinstance(e, Add):
        pieces = []
        for i, term in enumerate(e.args):
            if i > 0 and _is_negative(term):
                text, prec = _render(negate(term))
                pieces.append(" - " + _wrap(text, prec, _ADD + 1))
                continue
            text, prec = _render(term)
            pieces.append((" + " if i > 0 else "") + _wrap(text, prec, _ADD + 1 if i > 0 else _ADD))
        return "".join(pieces), _ADD
    if isinstance(e, Mul):
        if _is_negative(e):
            text, prec = _render(negate(e))
            return "-" + _wrap(text, prec, _NEG), _NEG
        pieces = []
        factors = list(e.args)
        if isinstance(factors[0], Const):
            coefficient = factors.pop(0).value
            text, prec = _const_text(coefficient)
            pieces.append(_wrap(text, prec, _ATOM))
        for factor in factors:
            if isinstance(factor, Pow) and factor.exponent < 0 and not isinstance(factor.base, Const):
                pieces.append(("/" if pieces else "1/") + _power_text(factor.base, -factor.exponent))
                continue
            text, prec = _render(factor)
            pieces.append(("*" if pieces else "") + _wrap(text, prec, _MUL + 1))
        return "".join(pieces), _MUL
    raise TypeError(f"unknown node {type(e).__name__}")


def to_text(e: Expr) -> str:
    """Print an Expr as infix text that parses back to the same tree."""
    text, _ = _render(e)
    return text
