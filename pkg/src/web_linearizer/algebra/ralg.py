"""The coefficient algebra: Laurent in R, polynomial in the words R_w.

A term is q * R^k * prod(R_w ^ e) with q rational, k any integer and every w
a nonempty canonical word 1^a 2^b. Non-canonical words are rewritten with

    D2(R_(1v)) = D1(D2(R_v)) - (2 + |v|) * R * R_v

which is the commutation rule C_12 - C_21 = weight * R * C applied to R_v.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Tuple
import logging
import re

from ..exceptions import ConfigurationError

logger = logging.getLogger(__name__)

Word = str
WordPowers = Tuple[Tuple[Word, int], ...]
RMonomial = Tuple[int, WordPowers]

RULE_VERSION = "ralg-1"


def is_canonical_word(word: Word) -> bool:
    return "21" not in word


def word_weight(word: Word) -> int:
    return 2 + len(word)


def _word_key(word: Word):
    return (len(word), word)


def _merge(a: WordPowers, b: WordPowers) -> WordPowers:
    powers = dict(a)
    for w, e in b:
        powers[w] = powers.get(w, 0) + e
    return tuple(sorted(((w, e) for w, e in powers.items() if e != 0), key=lambda p: _word_key(p[0])))


class RAlg:
    """Element of Q[R, 1/R, R_w]."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[RMonomial, Fraction] = None):
        self.terms: Dict[RMonomial, Fraction] = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def const(cls, value) -> "RAlg":
        return cls({(0, ()): Fraction(value)})

    @classmethod
    def r(cls, power: int = 1) -> "RAlg":
        return cls({(power, ()): Fraction(1)})

    @classmethod
    def word(cls, word: Word) -> "RAlg":
        """R_w for any word; non-canonical words are rewritten."""
        return normalize_word(word)

    @classmethod
    def canonical_word(cls, word: Word, power: int = 1) -> "RAlg":
        if word == "":
            return cls.r(power)
        if not is_canonical_word(word):
            raise ValueError(f"R_{word} is not canonical")
        return cls({(0, ((word, power),)): Fraction(1)})

    # queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == (0, ()) for m in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0, ()), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def words(self) -> Iterable[Word]:
        seen = set()
        for _, powers in self.terms:
            for w, _ in powers:
                seen.add(w)
        return sorted(seen, key=_word_key)

    def max_word_length(self) -> int:
        return max((len(w) for w in self.words()), default=0)

    def weights(self) -> Dict[int, "RAlg"]:
        """Split into weight-homogeneous parts."""
        parts: Dict[int, Dict[RMonomial, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(monomial_weight(m), {})[m] = c
        return {w: RAlg(t) for w, t in parts.items()}

    def weight(self) -> Optional[int]:
        """Common weight of all terms, or None when inhomogeneous or zero."""
        found = {monomial_weight(m) for m in self.terms}
        return found.pop() if len(found) == 1 else None

    def min_r_power(self) -> int:
        return min((k for k, _ in self.terms), default=0)

    # arithmetic ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RAlg.const(other)
        return isinstance(other, RAlg) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other) -> "RAlg":
        if isinstance(other, (int, Fraction)):
            other = RAlg.const(other)
        elif not isinstance(other, RAlg):
            return NotImplemented
        result = dict(self.terms)
        for m, c in other.terms.items():
            result[m] = result.get(m, 0) + c
        return RAlg(result)

    __radd__ = __add__

    def __neg__(self) -> "RAlg":
        return RAlg({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "RAlg":
        if isinstance(other, (int, Fraction)):
            other = RAlg.const(other)
        elif not isinstance(other, RAlg):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RAlg":
        return RAlg.const(other) - self

    def scale(self, factor) -> "RAlg":
        factor = Fraction(factor)
        if factor == 0:
            return RAlg()
        return RAlg({m: c * factor for m, c in self.terms.items()})

    def __mul__(self, other) -> "RAlg":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, RAlg):
            return NotImplemented
        result: Dict[RMonomial, Fraction] = {}
        for (ka, wa), ca in self.terms.items():
            for (kb, wb), cb in other.terms.items():
                m = (ka + kb, _merge(wa, wb))
                result[m] = result.get(m, 0) + ca * cb
        return RAlg(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "RAlg":
        if exponent < 0:
            if not self.is_monomial():
                raise ValueError("only monomials in R can be inverted")
            (k, powers), c = next(iter(self.terms.items()))
            if powers:
                raise ValueError("R-words are never inverted")
            return RAlg({(k * exponent, ()): Fraction(c) ** exponent})
        result = RAlg.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def inverse(self) -> "RAlg":
        return self ** -1

    def derive(self, i: int) -> "RAlg":
        """Covariant derivative along e_i, with canonical words in the result."""
        result: Dict[RMonomial, Fraction] = {}

        def accumulate(poly: "RAlg", factor: Fraction):
            for m, c in poly.terms.items():
                result[m] = result.get(m, 0) + c * factor

        for (k, powers), c in self.terms.items():
            if k != 0:
                rest = RAlg({(k - 1, powers): Fraction(1)})
                accumulate(rest * derive_word("", i), c * k)
            for idx, (w, e) in enumerate(powers):
                rest_powers = powers[:idx] + ((w, e - 1),) + powers[idx + 1:]
                rest = RAlg({(k, tuple(p for p in rest_powers if p[1] != 0)): Fraction(1)})
                accumulate(rest * derive_word(w, i), c * e)
        return RAlg(result)

    def evaluate(self, binding: Mapping[Word, object], one=Fraction(1)):
        """Substitute numbers for R (key "") and for every word."""
        total = one * 0
        r_value = binding[""]
        powers: Dict[Tuple[Word, int], object] = {}
        for (k, word_powers), c in self.terms.items():
            term = (one * c.numerator) / c.denominator if not isinstance(one, Fraction) else c
            if k:
                key = ("", k)
                if key not in powers:
                    powers[key] = r_value ** k if k > 0 else one / r_value ** (-k)
                term = term * powers[key]
            for w, e in word_powers:
                key = (w, e)
                if key not in powers:
                    powers[key] = binding[w] ** e
                term = term * powers[key]
            total = total + term
        return total

    def substitute(self, mapping: Mapping[Word, "RAlg"]) -> "RAlg":
        """Replace R (key "") and words by other RAlg elements."""
        result = RAlg()
        for (k, word_powers), c in self.terms.items():
            term = RAlg.const(c)
            if k:
                base = mapping.get("", RAlg.r())
                term = term * (base ** k)
            for w, e in word_powers:
                term = term * (mapping.get(w, RAlg.canonical_word(w)) ** e)
            result = result + term
        return result

    # text ------------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: _monomial_sort_key(item[0]))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            factors = monomial_text(m)
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            body = str(magnitude) if not factors else (factors if magnitude == 1 else f"{magnitude}*{factors}")
            if i == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    @classmethod
    def from_text(cls, text: str) -> "RAlg":
        return parse_ralg(text)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RAlg({self.to_text()!r})"


def monomial_weight(m: RMonomial) -> int:
    k, powers = m
    return 2 * k + sum(e * word_weight(w) for w, e in powers)


def _monomial_sort_key(m: RMonomial):
    k, powers = m
    return (-k, tuple((_word_key(w), -e) for w, e in powers))


def monomial_text(m: RMonomial) -> str:
    k, powers = m
    factors = []
    if k == 1:
        factors.append("R")
    elif k:
        factors.append(f"R^{k}")
    for w, e in powers:
        factors.append(f"R_{w}" if e == 1 else f"R_{w}^{e}")
    return "*".join(factors)


_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<coef>\d+(?:/\d+)?)(?:\*|(?=\s*[+-]|\s*$)))?"
    r"(?P<factors>(?:R(?:_[12]+)?(?:\^-?\d+)?\*?)*)"
)
_FACTOR = re.compile(r"R(?:_(?P<word>[12]+))?(?:\^(?P<exp>-?\d+))?")


def parse_ralg(text: str) -> RAlg:
    """Inverse of RAlg.to_text."""
    text = text.strip()
    if text == "0":
        return RAlg()
    result: Dict[RMonomial, Fraction] = {}
    position = 0
    while position < len(text):
        match = _TERM.match(text, position)
        if not match or match.end() == position:
            raise ConfigurationError("ralg", text, f"cannot read term at offset {position}")
        coefficient = Fraction(match.group("coef") or 1)
        if match.group("sign") == "-":
            coefficient = -coefficient
        k, powers = 0, {}
        for factor in _FACTOR.finditer(match.group("factors") or ""):
            exponent = int(factor.group("exp") or 1)
            if factor.group("word"):
                powers[factor.group("word")] = powers.get(factor.group("word"), 0) + exponent
            else:
                k += exponent
        m = (k, _merge((), tuple(powers.items())))
        result[m] = result.get(m, 0) + coefficient
        position = match.end()
    return RAlg(result)


# ---------------------------------------------------------------------------
# word rewriting


@lru_cache(maxsize=None)
def derive_word(word: Word, i: int) -> RAlg:
    """D_i(R_w) for a canonical word w (w = "" stands for R itself)."""
    if i not in (1, 2):
        raise ValueError(f"derivation index must be 1 or 2, got {i}")
    if i == 1 or not word.startswith("1"):
        return RAlg.canonical_word(str(i) + word)
    inner = word[1:]
    commuted = derive_word(inner, 2).derive(1)
    return commuted - RAlg.r() * RAlg.canonical_word(inner) * word_weight(inner)


@lru_cache(maxsize=None)
def normalize_word(word: Word) -> RAlg:
    """Canonical form of R_w for any word, the leading index acting last."""
    if word == "":
        return RAlg.r()
    inner = normalize_word(word[1:])
    return inner.derive(int(word[0]))
