"""Differential polynomials in the jets of the base s.

A JetPoly is a polynomial in jet variables s_w (w a word over {1, 2}, the
empty word being s itself) with RAlg coefficients. The jet s_w has weight
1 + |w|. The canonical variables are s, s_1, s_2 and s_21; every other jet is
rewritten through

    s_12 = s_21 + R s
    s_11 = 2 s_21 - 2 s s_2 + s s_1 + R s + R_1
    s_22 = 2 s_21 - s s_2 + 2 s s_1 + R s + R_2

and through their derivatives. The third-order values D_1 s_21 and D_2 s_21 are
not transcribed: they are solved from the two ways of computing s_211 and
s_122, which is a linear system of determinant 3.

Jet words follow the same convention as R-words: s_(i w) = D_i(s_w).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union
import logging
import re

from .ralg import RAlg, Word
from ..config import settings
from ..exceptions import ConfigurationError, NonTerminationError, ShapeViolationError

logger = logging.getLogger(__name__)

JetMono = Tuple[Tuple[Word, int], ...]

RULE_VERSION = "jetpoly-1"

S, S1, S2, S21 = "", "1", "2", "21"
CANONICAL_JETS = (S, S1, S2, S21)

Coefficient = Union[RAlg, int, Fraction]


def jet_weight(word: Word) -> int:
    return 1 + len(word)


def _jet_key(word: Word):
    return (len(word), word)


def _mono_merge(a: JetMono, b: JetMono) -> JetMono:
    powers = dict(a)
    for w, e in b:
        powers[w] = powers.get(w, 0) + e
    return tuple(sorted(((w, e) for w, e in powers.items() if e != 0), key=lambda p: _jet_key(p[0])))


def _as_ralg(value: Coefficient) -> RAlg:
    return value if isinstance(value, RAlg) else RAlg.const(value)


def _add_into(acc: Dict[JetMono, RAlg], poly: "JetPoly") -> None:
    for m, c in poly.terms.items():
        acc[m] = acc[m] + c if m in acc else c


class JetPoly:
    """Sparse polynomial in jet variables with RAlg coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[JetMono, RAlg] = None):
        self.terms: Dict[JetMono, RAlg] = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def const(cls, value: Coefficient) -> "JetPoly":
        return cls({(): _as_ralg(value)})

    @classmethod
    def jet(cls, word: Word = S, power: int = 1) -> "JetPoly":
        if power == 0:
            return cls.const(1)
        return cls({((word, power),): RAlg.const(1)})

    # queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def jet_words(self) -> List[Word]:
        seen = {w for m in self.terms for w, _ in m}
        return sorted(seen, key=_jet_key)

    def is_canonical(self) -> bool:
        return all(w in CANONICAL_JETS for w in self.jet_words())

    def degree(self, word: Word) -> int:
        return max((dict(m).get(word, 0) for m in self.terms), default=0)

    def total_degree(self, words: Iterable[Word]) -> int:
        words = tuple(words)
        return max((sum(e for w, e in m if w in words) for m in self.terms), default=0)

    def max_word_length(self) -> int:
        return max((c.max_word_length() for c in self.terms.values()), default=0)

    def coefficient(self, **powers: int) -> "JetPoly":
        """Coefficient of s_1^a s_2^b s_21^c as a polynomial in s (keywords s1, s2, s21)."""
        wanted = {S1: powers.get("s1", 0), S2: powers.get("s2", 0), S21: powers.get("s21", 0)}
        return self.split(wanted.keys()).get(tuple(wanted.values()), JetPoly())

    def split(self, words: Iterable[Word]) -> Dict[Tuple[int, ...], "JetPoly"]:
        """Group terms by their exponents in the given jets."""
        words = tuple(words)
        groups: Dict[Tuple[int, ...], Dict[JetMono, RAlg]] = {}
        for m, c in self.terms.items():
            powers = dict(m)
            key = tuple(powers.get(w, 0) for w in words)
            rest = tuple((w, e) for w, e in m if w not in words)
            bucket = groups.setdefault(key, {})
            bucket[rest] = bucket[rest] + c if rest in bucket else c
        return {k: JetPoly(v) for k, v in groups.items()}

    def ralg_value(self) -> RAlg:
        """The coefficient of a JetPoly without jets."""
        if any(m for m in self.terms):
            raise ShapeViolationError("constant extraction", [monomial_text(m) for m in self.terms if m])
        return self.terms.get((), RAlg())

    def s_coefficients(self) -> List[RAlg]:
        """Coefficients of a polynomial in s alone, lowest power first."""
        extra = [w for w in self.jet_words() if w != S]
        if extra:
            raise ShapeViolationError("s-polynomial extraction", [f"s_{w}" for w in extra])
        degree = self.degree(S)
        coefficients = [RAlg() for _ in range(degree + 1)]
        for m, c in self.terms.items():
            coefficients[dict(m).get(S, 0)] = c
        return coefficients

    # arithmetic ------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, JetPoly):
            other = JetPoly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "JetPoly":
        if not isinstance(other, JetPoly):
            other = JetPoly.const(other)
        result = dict(self.terms)
        for m, c in other.terms.items():
            result[m] = result[m] + c if m in result else c
        return JetPoly(result)

    __radd__ = __add__

    def __neg__(self) -> "JetPoly":
        return JetPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "JetPoly":
        if not isinstance(other, JetPoly):
            other = JetPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "JetPoly":
        return JetPoly.const(other) - self

    def __mul__(self, other) -> "JetPoly":
        if not isinstance(other, JetPoly):
            factor = _as_ralg(other)
            return JetPoly({m: c * factor for m, c in self.terms.items()})
        result: Dict[JetMono, RAlg] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_merge(ma, mb)
                product = ca * cb
                result[m] = result[m] + product if m in result else product
        return JetPoly(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "JetPoly":
        result = JetPoly.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def map_coefficients(self, fn: Callable[[RAlg], RAlg]) -> "JetPoly":
        return JetPoly({m: fn(c) for m, c in self.terms.items()})

    def substitute(self, word: Word, replacement: "JetPoly") -> "JetPoly":
        """Replace every occurrence of the jet s_word."""
        cache = {0: JetPoly.const(1), 1: replacement}
        result: Dict[JetMono, RAlg] = {}
        for m, c in self.terms.items():
            powers = dict(m)
            e = powers.pop(word, 0)
            if e == 0:
                _add_into(result, JetPoly({m: c}))
                continue
            if e not in cache:
                cache[e] = replacement ** e
            rest = tuple(sorted(powers.items(), key=lambda p: _jet_key(p[0])))
            _add_into(result, JetPoly({rest: c}) * cache[e])
        return JetPoly(result)

    def evaluate(self, ralg_binding: Mapping[Word, object], jets: Mapping[Word, object], one=Fraction(1)):
        """Numeric value with R-words and canonical jets bound to numbers."""
        total = one * 0
        for m, c in self.terms.items():
            term = c.evaluate(ralg_binding, one)
            for w, e in m:
                term = term * jets[w] ** e
            total = total + term
        return total

    # text ------------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: tuple((_jet_key(w), e) for w, e in item[0]))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            jets = monomial_text(m)
            pieces.append(f"({c.to_text()})" + (f"*{jets}" if jets else ""))
        return " + ".join(pieces)

    @classmethod
    def from_text(cls, text: str) -> "JetPoly":
        return parse_jetpoly(text)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"JetPoly({self.to_text()!r})"


def monomial_text(m: JetMono) -> str:
    factors = []
    for w, e in m:
        name = "s" if w == S else f"s_{w}"
        factors.append(name if e == 1 else f"{name}^{e}")
    return "*".join(factors)


_JET_TERM = re.compile(r"\s*(?:\+\s*)?\((?P<coef>[^()]*)\)(?P<jets>(?:\*s(?:_[12]+)?(?:\^\d+)?)*)")
_JET_FACTOR = re.compile(r"s(?:_(?P<word>[12]+))?(?:\^(?P<exp>\d+))?")


def parse_jetpoly(text: str) -> JetPoly:
    """Inverse of JetPoly.to_text."""
    text = text.strip()
    if text == "0":
        return JetPoly()
    result: Dict[JetMono, RAlg] = {}
    position = 0
    while position < len(text):
        match = _JET_TERM.match(text, position)
        if not match:
            raise ConfigurationError("jetpoly", text[:60], f"cannot read term at offset {position}")
        powers: Dict[Word, int] = {}
        for factor in _JET_FACTOR.finditer(match.group("jets")):
            word = factor.group("word") or S
            powers[word] = powers.get(word, 0) + int(factor.group("exp") or 1)
        m = _mono_merge((), tuple(powers.items()))
        coefficient = RAlg.from_text(match.group("coef"))
        result[m] = result[m] + coefficient if m in result else coefficient
        position = match.end()
    return JetPoly(result)


# ---------------------------------------------------------------------------
# shorthands

R = RAlg.r()


def r_word(word: Word) -> RAlg:
    return RAlg.word(word)


def s(word: Word = S, power: int = 1) -> JetPoly:
    return JetPoly.jet(word, power)


def second_order_rules() -> Dict[Word, JetPoly]:
    """The three second-order jets that are not canonical."""
    return {
        "12": s(S21) + s() * R,
        "11": s(S21) * 2 - s() * s(S2) * 2 + s() * s(S1) + s() * R + JetPoly.const(r_word("1")),
        "22": s(S21) * 2 - s() * s(S2) + s() * s(S1) * 2 + s() * R + JetPoly.const(r_word("2")),
    }


# ---------------------------------------------------------------------------
# raw, free and canonical derivations


def raw_derive(e: JetPoly, i: int) -> JetPoly:
    """Leibniz derivation that only prepends the index to jet words."""
    result: Dict[JetMono, RAlg] = {}
    for m, c in e.terms.items():
        dc = c.derive(i)
        if not dc.is_zero():
            _add_into(result, JetPoly({m: dc}))
        for idx, (w, p) in enumerate(m):
            rest = m[:idx] + ((w, p - 1),) + m[idx + 1:]
            rest = tuple(q for q in rest if q[1] != 0)
            _add_into(result, JetPoly({rest: c * p}) * s(str(i) + w))
    return JetPoly(result)


@lru_cache(maxsize=None)
def _free_jet_derive(word: Word, i: int) -> JetPoly:
    # words of the free algebra are kept in the form 2^a 1^b
    if i == 2 or not word.startswith("2"):
        return s(str(i) + word)
    inner = word[1:]
    commuted = free_derive(_free_jet_derive(inner, 1), 2)
    return commuted + s(inner) * R * jet_weight(inner)


def free_derive(e: JetPoly, i: int) -> JetPoly:
    """Derivation in the algebra of jets modulo commutation only."""
    result: Dict[JetMono, RAlg] = {}
    for m, c in e.terms.items():
        dc = c.derive(i)
        if not dc.is_zero():
            _add_into(result, JetPoly({m: dc}))
        for idx, (w, p) in enumerate(m):
            rest = m[:idx] + ((w, p - 1),) + m[idx + 1:]
            rest = tuple(q for q in rest if q[1] != 0)
            _add_into(result, JetPoly({rest: c * p}) * _free_jet_derive(w, i))
    return JetPoly(result)


@lru_cache(maxsize=None)
def third_order_rules() -> Dict[Tuple[Word, int], JetPoly]:
    """D_1 s_21 and D_2 s_21 solved from the consistency of s_211 and s_122."""
    rules = second_order_rules()
    e1, e2 = rules["11"], rules["22"]
    # D2(E1) = s_211 = s_121 - 2 R s_1 and D1(E2) = s_122 = s_221 + R_2 s + 3 R s_2
    d2e1 = _derive_with(e1, 2, {(S21, 2): s("221"), (S21, 1): s("121")})
    d1e2 = _derive_with(e2, 1, {(S21, 2): s("221"), (S21, 1): s("121")})
    u = d2e1.substitute("221", JetPoly()) + s(S1) * R * 2
    v = (s() * JetPoly.const(r_word("2")) + s(S2) * R * 3) - d1e2.substitute("121", JetPoly())
    x1 = (v * 2 - u) * Fraction(1, 3)
    x2 = (v - u * 2) * Fraction(1, 3)
    logger.debug(f"third-order rules: D1 s_21 has {len(x1.terms)} terms, D2 s_21 has {len(x2.terms)} terms")
    return {(S21, 1): x1, (S21, 2): x2}


def _base_rule(word: Word, i: int) -> JetPoly:
    rules = second_order_rules()
    if word == S:
        return s(str(i))
    if word == S1:
        return rules["11"] if i == 1 else s(S21)
    if word == S2:
        return rules["12"] if i == 1 else rules["22"]
    if word == S21:
        return third_order_rules()[(S21, i)]
    raise ValueError(f"s_{word} is not a canonical jet")


def _derive_with(e: JetPoly, i: int, overrides: Mapping[Tuple[Word, int], JetPoly]) -> JetPoly:
    result: Dict[JetMono, RAlg] = {}
    for m, c in e.terms.items():
        dc = c.derive(i)
        if not dc.is_zero():
            _add_into(result, JetPoly({m: dc}))
        for idx, (w, p) in enumerate(m):
            rest = m[:idx] + ((w, p - 1),) + m[idx + 1:]
            rest = tuple(q for q in rest if q[1] != 0)
            image = overrides[(w, i)] if (w, i) in overrides else _base_rule(w, i)
            _add_into(result, JetPoly({rest: c * p}) * image)
    return JetPoly(result)


def derive(e: JetPoly, i: int) -> JetPoly:
    """Covariant derivative along e_i; the result is canonical."""
    if i not in (1, 2):
        raise ValueError(f"derivation index must be 1 or 2, got {i}")
    if not e.is_canonical():
        e = normalize(e)
    return _derive_with(e, i, {})


# ---------------------------------------------------------------------------
# normalization


def _canonical_inner(word: Word) -> JetPoly:
    if word in CANONICAL_JETS:
        return s(word)
    return derive(_canonical_inner(word[1:]), int(word[0]))


def _canonical_outer(word: Word) -> JetPoly:
    if word in CANONICAL_JETS:
        return s(word)
    position = word.find("12")
    if position >= 0:
        prefix, rest = word[:position], word[position + 2:]
        correction = s(rest) * R * jet_weight(rest)
        for index in reversed(prefix):
            correction = raw_derive(correction, int(index))
        raw = s(prefix + "21" + rest) + correction
        return normalize(raw, strategy="outer")
    # word is 2^a 1^b
    rules = second_order_rules()
    if word.endswith("11"):
        prefix, base = word[:-2], rules["11"]
    elif word.endswith("22"):
        prefix, base = word[:-2], rules["22"]
    else:
        prefix, base = word[:-3], third_order_rules()[(S21, int(word[-3]))]
    for index in reversed(prefix):
        base = raw_derive(base, int(index))
    return normalize(base, strategy="outer")


_STRATEGIES = {"inner": _canonical_inner, "outer": _canonical_outer}


@lru_cache(maxsize=None)
def canonical_jet(word: Word, strategy: str = "inner") -> JetPoly:
    """Canonical form of the jet s_word."""
    return _STRATEGIES[strategy](word)


def normalize(e: JetPoly, strategy: str = "inner") -> JetPoly:
    """Rewrite every non-canonical jet of e.

    Words up to length 3 have a unique canonical form. For longer words the
    result is unique modulo the first obstruction, which is exactly where the
    two strategies can differ.
    """
    if strategy not in _STRATEGIES:
        raise ValueError(f"unknown normalization strategy {strategy}")
    result = e
    for word in e.jet_words():
        if word not in CANONICAL_JETS:
            result = result.substitute(word, canonical_jet(word, strategy))
    return result


# ---------------------------------------------------------------------------
# eliminations


def _solve_for(poly: JetPoly, word: Word, power: int, stage: str) -> JetPoly:
    """Solve poly = 0 for s_word^power when its coefficient is c R^k."""
    parts = poly.split([word])
    lead = parts.get((power,), JetPoly())
    if any(k[0] > power for k in parts):
        raise ShapeViolationError(stage, [f"s_{word}^{k[0]}" for k in parts if k[0] > power])
    if len(lead.terms) != 1 or () not in lead.terms:
        raise ShapeViolationError(stage, [f"non-invertible coefficient of s_{word or 's'}^{power}: {lead}"])
    coefficient = lead.terms[()]
    if not coefficient.is_monomial() or coefficient.words():
        raise ShapeViolationError(stage, [f"coefficient {coefficient} is not a power of R"])
    remainder = JetPoly()
    for k, part in parts.items():
        if k[0] != power:
            remainder = remainder + part * s(word, k[0]) if k[0] else remainder + part
    return -(remainder * coefficient.inverse())


def eliminate_s21(e: JetPoly, phi: JetPoly) -> JetPoly:
    """Substitute s_21 from phi = 0; the result has no s_21."""
    replacement = _solve_for(phi, S21, 1, "s_21 elimination")
    if replacement.degree(S21):
        raise ShapeViolationError("s_21 elimination", ["phi is not linear in s_21"])
    return e.substitute(S21, replacement)


def eliminate_squares(e: JetPoly, psi1: JetPoly, psi2: JetPoly, max_passes: Optional[int] = None) -> JetPoly:
    """Reduce e modulo psi1 = psi2 = 0 until it is at most linear in s_1 and in s_2."""
    s2_squared = _solve_for(psi1, S2, 2, "square elimination")
    s1_squared = _solve_for(psi2, S1, 2, "square elimination")
    if max_passes is None:
        max_passes = settings.max_square_passes_factor * max(1, e.total_degree((S1, S2)))
    current = e
    for passes in range(max_passes + 1):
        pending = [m for m in current.terms if dict(m).get(S1, 0) >= 2 or dict(m).get(S2, 0) >= 2]
        if not pending:
            logger.debug(f"square elimination finished after {passes} passes")
            return current
        if passes == max_passes:
            break
        result: Dict[JetMono, RAlg] = {}
        for m, c in current.terms.items():
            powers = dict(m)
            if powers.get(S1, 0) >= 2:
                powers[S1] -= 2
                replacement = s1_squared
            elif powers.get(S2, 0) >= 2:
                powers[S2] -= 2
                replacement = s2_squared
            else:
                _add_into(result, JetPoly({m: c}))
                continue
            rest = _mono_merge((), tuple(powers.items()))
            _add_into(result, JetPoly({rest: c}) * replacement)
        current = JetPoly(result)
    raise NonTerminationError("square elimination", max_passes)


# ---------------------------------------------------------------------------
# weights


@dataclass
class Inhomogeneous:
    """Weights found in an inhomogeneous JetPoly, with sample terms of each."""

    weights: Dict[int, List[str]]

    def __str__(self):
        return "inhomogeneous (" + ", ".join(f"{w}: {', '.join(t[:3])}" for w, t in sorted(self.weights.items())) + ")"


def term_weights(e: JetPoly) -> Dict[int, List[str]]:
    found: Dict[int, List[str]] = {}
    for m, c in e.terms.items():
        jets = sum(p * jet_weight(w) for w, p in m)
        for w, part in c.weights().items():
            found.setdefault(w + jets, []).append(f"({part})*{monomial_text(m)}" if m else f"({part})")
    return found


def weight_of(e: JetPoly) -> Union[int, Inhomogeneous]:
    """The common weight of every term, or an Inhomogeneous report."""
    found = term_weights(e)
    if len(found) == 1:
        return next(iter(found))
    if not found:
        return 0
    return Inhomogeneous(found)


def is_homogeneous(e: JetPoly) -> bool:
    return not isinstance(weight_of(e), Inhomogeneous)
