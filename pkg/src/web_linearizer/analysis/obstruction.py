"""
Obstruction tower for the linearizability of 3-webs.

The tower is web-independent. It is derived once in the abstract curvature
algebra: the first obstruction phi, the two second obstructions psi1 and psi2,
the four rows a s_1 + b s_2 + c s_1 s_2 = d of the linear system obtained by
differentiating psi1 = psi2 = 0, and the e_1 / e_2 derivatives of every row
coefficient. The determinants D, A, B, C and the polynomials Q1..Q7 are never
expanded symbolically; they are materialised as polynomials in s with numeric
coefficients under a binding of the curvature words (a web point or a random
binding).
"""

from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import logging
import random

import mpmath

from . import printed_formulas
from ..algebra.jetpoly import (
    JetPoly, R, RULE_VERSION as JETPOLY_RULE_VERSION, S, S1, S2, S21, canonical_jet, derive,
    eliminate_s21, eliminate_squares, free_derive, normalize, parse_jetpoly, s, second_order_rules,
    third_order_rules, weight_of,
)
from ..algebra.ralg import RAlg, RULE_VERSION as RALG_RULE_VERSION, derive_word
from ..algebra.spoly import (
    SPoly, det3, det3_derivative, det4, evaluate_coefficients, from_jetpoly, parse_spoly,
    require_degree, to_jetpoly,
)
from ..config import settings
from ..exceptions import (
    DerivationError, DeterminantIdentityError, ParallelizableBranch, PhiMismatchError, ShapeViolationError,
)
from ..geometry.web_chart import CurvLadder, MAX_LADDER_ORDER, canonical_words, evaluate_ladder
from ..models.numeric import NumValue

logger = logging.getLogger(__name__)

PIPELINE_VERSION = "tower-1"

ROW_NAMES = ("psi1_1", "psi1_2", "psi2_1", "psi2_2")
ROW_FIELDS = ("a", "b", "c", "d")

ROW_DEGREE_BOUNDS = {
    "a": (3, 3, 3, 3),
    "b": (3, 3, 3, 3),
    "c": (1, 0, 0, 1),
    "d": (5, 4, 4, 5),
}
DET_DEGREE_BOUNDS = {"D": 7, "A": 8, "B": 8, "C": 11}
Q_DEGREE_BOUNDS = {"Q1": 18, "Q2": 15, "Q3": 23, "Q4": 23, "Q5": 24, "Q6": 17, "Q7": 17}

# Cramer columns: s_1 = A/D, s_2 = B/D, s_1 s_2 = C/D
_CRAMER = {
    "D": ("a", "b", "c"),
    "A": ("d", "b", "c"),
    "B": ("a", "d", "c"),
    "C": ("a", "b", "d"),
}


# ---------------------------------------------------------------------------
# helpers


def rational_ratio(numerator: JetPoly, denominator: JetPoly) -> Optional[Fraction]:
    """q with numerator == q * denominator, or None when they are not proportional."""
    if denominator.is_zero():
        return None if not numerator.is_zero() else Fraction(1)
    jets, coefficient = next(iter(denominator.sorted_terms()))
    monomial, value = next(iter(coefficient.sorted_terms()))
    other = numerator.terms.get(jets)
    if other is None or monomial not in other.terms:
        return None
    ratio = other.terms[monomial] / value
    return ratio if (numerator - denominator * ratio).is_zero() else None


def _require_weight(name: str, e: JetPoly, expected: int) -> None:
    found = weight_of(e)
    if found != expected:
        raise DerivationError(name, f"expected weight {expected}, found {found}")


def _swap_indices(word: str) -> str:
    return word.translate(str.maketrans("12", "21"))


def mirror_ralg(c: RAlg) -> RAlg:
    """Exchange e_1 and e_2: R -> -R and R_w -> -R_(w swapped)."""
    mapping = {"": -R}
    for word in c.words():
        mapping[word] = -RAlg.word(_swap_indices(word))
    return c.substitute(mapping)


def mirror(e: JetPoly) -> JetPoly:
    """Exchange e_1 and e_2 together with s -> -s.

    The second-order rules are invariant under this map, so it commutes with
    normalization and sends D_1 to D_2.
    """
    images = {S: -s(), S1: -s(S2), S2: -s(S1), S21: -(s(S21) + R * s())}
    result = JetPoly()
    for m, c in e.terms.items():
        term = JetPoly.const(mirror_ralg(c))
        for word, power in m:
            term = term * images[word] ** power
        result = result + term
    return result


def mirror_sign(e: JetPoly, image: JetPoly) -> Optional[int]:
    mirrored = mirror(e)
    if (mirrored - image).is_zero():
        return 1
    if (mirrored + image).is_zero():
        return -1
    return None


# ---------------------------------------------------------------------------
# the first obstruction


def build_phi() -> JetPoly:
    """The first obstruction in canonical form, weight 5."""
    phi = normalize(printed_formulas.corrected_phi())
    _require_weight("first obstruction", phi, 5)
    return phi


def p2_residuals() -> Tuple[JetPoly, JetPoly]:
    """The two second-order residuals, in the jets of the free algebra."""
    r_a = 2 * s(S21) - s("22") - s() * s(S2) + 2 * s() * s(S1) + R * s() + RAlg.word("2")
    r_b = 2 * s(S21) - s("11") - 2 * s() * s(S2) + s() * s(S1) + R * s() + RAlg.word("1")
    return r_a, r_b


def derive_phi_from_p2() -> JetPoly:
    """Combine second derivatives of the residuals so that fourth-order jets cancel."""
    r_a, r_b = p2_residuals()

    def nabla(e: JetPoly, outer: int, inner: int) -> JetPoly:
        return free_derive(free_derive(e, inner), outer)

    combined = nabla(r_a, 1, 1) - 2 * nabla(r_a, 1, 2) + 2 * nabla(r_b, 1, 2) - nabla(r_b, 2, 2)
    fourth = [w for w in combined.jet_words() if len(w) >= 4]
    if fourth:
        raise ShapeViolationError("fourth-order cancellation", [f"s_{w}" for w in fourth])
    phi = normalize(combined)
    logger.debug(f"phi from the second-order residuals: {len(phi.terms)} terms")
    return phi


def commutator_defect() -> JetPoly:
    """D_1 D_2 s_21 - D_2 D_1 s_21 - 3 R s_21 computed through the third-order rules."""
    rules = third_order_rules()
    return derive(rules[(S21, 2)], 1) - derive(rules[(S21, 1)], 2) - 3 * R * s(S21)


def derived_phi() -> JetPoly:
    """The first obstruction as derived, scaled to -24 R s_21 and checked.

    The derived form must agree with build_phi() exactly and with the printed
    formula up to the documented typos; anything else is a derivation bug.
    """
    raw = derive_phi_from_p2()
    lead = raw.coefficient(s21=1)
    target = JetPoly.const(-24 * R)
    scale = rational_ratio(target, lead)
    if scale is None:
        raise DerivationError("first obstruction", f"s_21 coefficient {lead} is not a multiple of R")
    phi = raw * scale
    logger.debug(f"phi normalised by the factor {scale}")

    corrected = build_phi()
    differences = printed_formulas.compare("phi", phi, corrected)
    if differences:
        raise PhiMismatchError([f"{d.monomial}: {d.printed} vs {d.derived}" for d in differences])

    _, unexpected = printed_formulas.split_known(printed_formulas.compare("phi", phi, printed_formulas.printed_phi()))
    if unexpected:
        raise PhiMismatchError([f"{d.monomial}: printed {d.printed}, derived {d.derived}" for d in unexpected])

    defect = commutator_defect()
    if rational_ratio(defect, phi) is None:
        raise DerivationError("first obstruction", "commutator defect of s_21 is not a multiple of phi")
    return phi


# ---------------------------------------------------------------------------
# the second obstructions


_PSI_SHAPES = {
    "psi1": {(0, 2): 24, (1, 1): -48},
    "psi2": {(2, 0): -24, (1, 1): 48},
}
_PSI_LINEAR = {(0, 0), (1, 0), (0, 1)}


def _check_psi_shape(name: str, psi: JetPoly) -> None:
    if psi.degree(S21):
        raise ShapeViolationError(name, ["s_21"])
    parts = psi.split([S1, S2])
    quadratic = _PSI_SHAPES[name]
    offending = [f"s_1^{k[0]}*s_2^{k[1]}" for k in parts if k not in _PSI_LINEAR and k not in quadratic]
    for key, factor in quadratic.items():
        if not (parts.get(key, JetPoly()) - JetPoly.const(factor * R)).is_zero():
            offending.append(f"coefficient of s_1^{key[0]}*s_2^{key[1]} is {parts.get(key, JetPoly())}")
    if offending:
        raise ShapeViolationError(name, offending)


def build_psi(phi: JetPoly) -> Tuple[JetPoly, JetPoly]:
    """psi1 = D_2 phi - 2 D_1 phi and psi2 = D_1 phi - 2 D_2 phi with s_21 eliminated.

    The term of the second obstructions carrying the derivative of the
    second-order residuals vanishes identically in canonical form.
    """
    d1, d2 = derive(phi, 1), derive(phi, 2)
    psi1 = eliminate_s21(d2 - 2 * d1, phi)
    psi2 = eliminate_s21(d1 - 2 * d2, phi)
    for name, psi in (("psi1", psi1), ("psi2", psi2)):
        _check_psi_shape(name, psi)
        _require_weight(name, psi, 6)
    logger.debug(f"psi1 has {len(psi1.terms)} terms, psi2 has {len(psi2.terms)} terms")
    return psi1, psi2


# ---------------------------------------------------------------------------
# the linear system


@dataclass
class SRow:
    """One row a s_1 + b s_2 + c s_1 s_2 = d of the linear system."""

    a: SPoly
    b: SPoly
    c: SPoly
    d: SPoly

    @classmethod
    def from_jetpoly(cls, name: str, e: JetPoly) -> "SRow":
        """Read off a, b, c, d from e = a s_1 + b s_2 + c s_1 s_2 - d."""
        parts = e.split([S1, S2, S21])
        allowed = {(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)}
        offending = [f"s_1^{k[0]}*s_2^{k[1]}*s_21^{k[2]}" for k in parts if k not in allowed]
        if offending:
            raise ShapeViolationError(name, offending)

        def coefficient(key) -> SPoly:
            return from_jetpoly(parts.get(key, JetPoly()))

        return cls(
            a=coefficient((1, 0, 0)),
            b=coefficient((0, 1, 0)),
            c=coefficient((1, 1, 0)),
            d=-coefficient((0, 0, 0)),
        )

    def fields(self) -> Tuple[SPoly, SPoly, SPoly, SPoly]:
        return self.a, self.b, self.c, self.d

    def map(self, fn) -> "SRow":
        return SRow(*(p.map(fn) for p in self.fields()))

    def evaluate(self, binding: Mapping[str, object], one=Fraction(1)) -> "SRow":
        return SRow(*(evaluate_coefficients(p, binding, one) for p in self.fields()))

    def as_jetpoly(self) -> JetPoly:
        return (
            to_jetpoly(self.a) * s(S1) + to_jetpoly(self.b) * s(S2)
            + to_jetpoly(self.c) * s(S1) * s(S2) - to_jetpoly(self.d)
        )

    def max_word_length(self) -> int:
        return max((c.max_word_length() for p in self.fields() for c in p.coeffs), default=0)


def derive_S(phi: JetPoly, psi1: JetPoly, psi2: JetPoly) -> List[SRow]:
    """Rows of D_1 psi1, D_2 psi1, D_1 psi2, D_2 psi2, reduced modulo phi, psi1, psi2."""
    rows = []
    for index, (psi, i) in enumerate(((psi1, 1), (psi1, 2), (psi2, 1), (psi2, 2))):
        name = ROW_NAMES[index]
        reduced = eliminate_squares(eliminate_s21(derive(psi, i), phi), psi1, psi2)
        _require_weight(name, reduced, 7)
        row = SRow.from_jetpoly(name, reduced)
        for field_name, p in zip(ROW_FIELDS, row.fields()):
            require_degree(f"{field_name}{index + 1}", p, ROW_DEGREE_BOUNDS[field_name][index])
        rows.append(row)
        logger.debug(f"row {name}: degrees a={row.a.degree} b={row.b.degree} c={row.c.degree} d={row.d.degree}")
    return rows


def row_relation(rows: Sequence[SRow]) -> JetPoly:
    """-r1 + 2 r2 - 2 r3 + r4, which vanishes when the rows are dependent in this way."""
    r1, r2, r3, r4 = (row.as_jetpoly() for row in rows)
    return -r1 + 2 * r2 - 2 * r3 + r4


def derive_rows(rows: Sequence[SRow]) -> Dict[int, List[SRow]]:
    """Coefficient-wise e_1 and e_2 derivatives of every row."""
    return {i: [row.map(lambda c, i=i: c.derive(i)) for row in rows] for i in (1, 2)}


# ---------------------------------------------------------------------------
# the tower


@dataclass
class ObstructionTower:
    """The symbolic part of the obstruction tower, with its provenance."""

    phi: JetPoly
    psi1: JetPoly
    psi2: JetPoly
    rows: List[SRow]
    derived_rows: Dict[int, List[SRow]]
    provenance: Dict[str, str] = field(default_factory=dict)

    def to_entries(self) -> Dict[str, str]:
        """Canonical text of every symbolic component, one entry per name."""
        entries = {"phi": self.phi.to_text(), "psi1": self.psi1.to_text(), "psi2": self.psi2.to_text()}
        for k, row in enumerate(self.rows, start=1):
            for name, p in zip(ROW_FIELDS, row.fields()):
                entries[f"row{k}_{name}"] = p.to_text()
        for i, rows in self.derived_rows.items():
            for k, row in enumerate(rows, start=1):
                for name, p in zip(ROW_FIELDS, row.fields()):
                    entries[f"row{k}_{name}_d{i}"] = p.to_text()
        return entries

    @classmethod
    def from_entries(cls, entries: Mapping[str, str], provenance: Mapping[str, str] = None) -> "ObstructionTower":
        def row(k: int, suffix: str = "") -> SRow:
            return SRow(*(parse_spoly(entries[f"row{k}_{name}{suffix}"]) for name in ROW_FIELDS))

        return cls(
            phi=parse_jetpoly(entries["phi"]),
            psi1=parse_jetpoly(entries["psi1"]),
            psi2=parse_jetpoly(entries["psi2"]),
            rows=[row(k) for k in range(1, 5)],
            derived_rows={i: [row(k, f"_d{i}") for k in range(1, 5)] for i in (1, 2)},
            provenance=dict(provenance or {}),
        )

    def row_degrees(self) -> Dict[str, int]:
        return {
            f"{name}{k}": p.degree
            for k, row in enumerate(self.rows, start=1)
            for name, p in zip(ROW_FIELDS, row.fields())
        }

    def __eq__(self, other):
        if not isinstance(other, ObstructionTower):
            return NotImplemented
        return self.to_entries() == other.to_entries()


def pipeline_versions() -> Dict[str, str]:
    return {
        "pipeline": PIPELINE_VERSION,
        "ralg_rules": RALG_RULE_VERSION,
        "jetpoly_rules": JETPOLY_RULE_VERSION,
    }


class TowerBuilder:
    """Runs the derivation pipeline and the identity checks on its output."""

    def __init__(self, identity_trials: Optional[int] = None, seed: int = 0):
        self.identity_trials = identity_trials if identity_trials is not None else settings.identity_trials
        self.seed = seed
        self.timings: Dict[str, str] = {}

    def _stamp(self, stage: str) -> None:
        self.timings[f"derived_{stage}"] = datetime.now().isoformat(timespec="seconds")

    def build(self) -> ObstructionTower:
        logger.info("Deriving the obstruction tower")
        phi = derived_phi()
        self._stamp("phi")
        psi1, psi2 = build_psi(phi)
        self._stamp("psi")
        rows = derive_S(phi, psi1, psi2)
        self._stamp("rows")

        self.check_mirror(phi, psi1, psi2, rows)
        derived = derive_rows(rows)
        longest = max(row.max_word_length() for rows_i in derived.values() for row in rows_i)
        if longest > MAX_LADDER_ORDER:
            raise DerivationError("row derivatives", f"curvature word of length {longest} exceeds {MAX_LADDER_ORDER}")

        tower = ObstructionTower(phi, psi1, psi2, rows, derived, {**pipeline_versions(), **self.timings})
        self.check_determinant(tower)
        if self.identity_trials:
            check_bindings(tower, self.identity_trials, self.seed)
        logger.info(f"Obstruction tower built: row degrees {tower.row_degrees()}")
        return tower

    @staticmethod
    def check_mirror(phi: JetPoly, psi1: JetPoly, psi2: JetPoly, rows: Sequence[SRow]) -> None:
        if mirror_sign(phi, phi) is None:
            raise DerivationError("mirror symmetry", "phi is not invariant under the exchange of e_1 and e_2")
        if mirror_sign(psi1, psi2) is None:
            raise DerivationError("mirror symmetry", "psi1 does not map to psi2")
        for left, right in ((0, 3), (1, 2)):
            if mirror_sign(rows[left].as_jetpoly(), rows[right].as_jetpoly()) is None:
                raise DerivationError(
                    "mirror symmetry", f"row {ROW_NAMES[left]} does not map to row {ROW_NAMES[right]}"
                )
        logger.debug("mirror symmetry holds for phi, psi and the four rows")

    def check_determinant(self, tower: ObstructionTower) -> None:
        """The 4x4 determinant of the rows vanishes identically."""
        relation = row_relation(tower.rows)
        if relation.is_zero():
            logger.debug("row relation -r1 + 2 r2 - 2 r3 + r4 = 0 holds symbolically")
            return
        logger.warning("row relation does not vanish symbolically; checking the determinant by evaluation")
        rng = random.Random(self.seed)
        for _ in range(max(1, self.identity_trials)):
            binding = random_binding(rng)
            values = [row.evaluate(binding) for row in tower.rows]
            det = det4([list(row.fields()) for row in values])
            if not det.is_zero():
                raise DeterminantIdentityError(det.to_text())


# ---------------------------------------------------------------------------
# numeric materialisation


def random_binding(rng: random.Random, max_order: int = MAX_LADDER_ORDER) -> Dict[str, Fraction]:
    """Random rational values for R (nonzero) and every canonical word."""
    binding = {}
    for word in canonical_words(max_order):
        value = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if word == "" and value == 0:
            value = Fraction(1)
        binding[word] = value
    return binding


@dataclass
class TowerValues:
    """D, A, B, C, their derivatives and Q1..Q7 under one binding."""

    dets: Dict[str, SPoly]
    derived: Dict[str, SPoly]
    qs: Dict[str, SPoly]
    r_value: object

    def degrees(self) -> Dict[str, int]:
        return {name: p.degree for name, p in {**self.dets, **self.qs}.items()}


def _cramer(rows: Sequence[SRow], columns: Tuple[str, str, str]) -> List[List[SPoly]]:
    return [[getattr(row, name) for name in columns] for row in rows[:3]]


def _numerator(e: JetPoly, jets: Mapping[str, Tuple[SPoly, int]], D: SPoly, binding, one) -> SPoly:
    """e with every jet replaced by its fraction over a power of D, times the minimal power of D."""
    clearing = max((sum(jets[w][1] * p for w, p in m if w != S) for m in e.terms), default=0)
    base = SPoly([one * 0, one])
    d_powers = [SPoly([one])]
    for _ in range(clearing):
        d_powers.append(d_powers[-1] * D)
    total = SPoly()
    for m, c in e.terms.items():
        term = SPoly([c.evaluate(binding, one)])
        used = 0
        for w, p in m:
            if w == S:
                term = term * base ** p
            else:
                numerator, power = jets[w]
                term = term * numerator ** p
                used += power * p
        total = total + term * d_powers[clearing - used]
    return total


def materialize(tower: ObstructionTower, binding: Mapping[str, object], one=Fraction(1)) -> TowerValues:
    """D, A, B, C and Q1..Q7 as polynomials in s with numeric coefficients.

    Denominators are cleared by the smallest power of D. Content is left in
    place; QPoly removes it on conversion.
    """
    rows = [row.evaluate(binding, one) for row in tower.rows]
    derived_rows = {i: [row.evaluate(binding, one) for row in rs] for i, rs in tower.derived_rows.items()}

    dets = {name: det3(_cramer(rows, columns)) for name, columns in _CRAMER.items()}
    derived = {
        f"{name}{i}": det3_derivative(_cramer(rows, _CRAMER[name]), _cramer(derived_rows[i], _CRAMER[name]))
        for name in ("D", "A", "B")
        for i in (1, 2)
    }
    D, A, B, C = dets["D"], dets["A"], dets["B"], dets["C"]
    r_value = binding[""]

    n21 = derived["A2"] * D * D + A.derivative() * B * D - A * derived["D2"] * D - A * D.derivative() * B
    n11 = derived["A1"] * D * D + A.derivative() * A * D - A * derived["D1"] * D - A * D.derivative() * A
    n22 = derived["B2"] * D * D + B.derivative() * B * D - B * derived["D2"] * D - B * D.derivative() * B
    jets = {S1: (A, 1), S2: (B, 1), S21: (n21, 3), "11": (n11, 3), "22": (n22, 3)}

    rules = second_order_rules()
    qs = {
        "Q1": A * B - C * D,
        "Q2": q2(dets, derived, r_value, one),
        "Q3": _numerator(s("11") - rules["11"], jets, D, binding, one),
        "Q4": _numerator(s("22") - rules["22"], jets, D, binding, one),
        "Q5": _numerator(tower.phi, jets, D, binding, one),
        "Q6": _numerator(tower.psi1, jets, D, binding, one),
        "Q7": _numerator(tower.psi2, jets, D, binding, one),
    }
    return TowerValues(dets=dets, derived=derived, qs=qs, r_value=r_value)


def q2(dets: Mapping[str, SPoly], derived: Mapping[str, SPoly], r_value, one=Fraction(1)) -> SPoly:
    """Numerator of s_12 - s_21 - R s with s_1 = A/D and s_2 = B/D, cleared by D^2."""
    D, A, B = dets["D"], dets["A"], dets["B"]
    base = SPoly([one * 0, one])
    return (
        derived["B1"] * D - B * derived["D1"] - derived["A2"] * D + A * derived["D2"]
        + A * B.derivative() - A.derivative() * B - base * D * D * r_value
    )


# dual numbers carry one directional derivative through the row evaluation


@dataclass(frozen=True)
class Dual:
    value: object
    eps: object

    def _coerce(self, other) -> "Dual":
        return other if isinstance(other, Dual) else Dual(other, other * 0)

    def __add__(self, other):
        other = self._coerce(other)
        return Dual(self.value + other.value, self.eps + other.eps)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.value, -self.eps)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return Dual(self.value * other.value, self.value * other.eps + self.eps * other.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return Dual(
            self.value / other.value,
            (self.eps * other.value - self.value * other.eps) / (other.value * other.value),
        )

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent: int):
        if exponent < 0:
            return Dual(self.value * 0 + 1, self.eps * 0) / self ** (-exponent)
        result = Dual(self.value * 0 + 1, self.eps * 0)
        for _ in range(exponent):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return self.value == 0 and self.eps == 0


def dual_binding(binding: Mapping[str, object], i: int, max_order: int = MAX_LADDER_ORDER - 1) -> Dict[str, Dual]:
    """Each word paired with the value of its e_i derivative."""
    one = Fraction(1)
    dual = {}
    for word in canonical_words(max_order):
        dual[word] = Dual(binding[word], derive_word(word, i).evaluate(binding, one))
    return dual


def q2_by_dual_numbers(tower: ObstructionTower, binding: Mapping[str, Fraction]) -> SPoly:
    """Q2 with the derivatives of A, B and D taken by forward differentiation."""
    dets: Dict[str, SPoly] = {}
    derived: Dict[str, SPoly] = {}
    for i in (1, 2):
        dual = dual_binding(binding, i)
        rows = [row.evaluate(dual, Dual(Fraction(1), Fraction(0))) for row in tower.rows]
        for name in ("D", "A", "B"):
            det = det3(_cramer(rows, _CRAMER[name]))
            dets[name] = det.map(lambda c: c.value)
            derived[f"{name}{i}"] = det.map(lambda c: c.eps)
    return q2(dets, derived, binding[""])


def check_bindings(tower: ObstructionTower, trials: int, seed: int = 0) -> Dict[str, int]:
    """Degree bounds and the Q2 identity under random exact bindings.

    Returns how often each degree bound was attained.
    """
    rng = random.Random(seed)
    attained = {name: 0 for name in {**DET_DEGREE_BOUNDS, **Q_DEGREE_BOUNDS}}
    for trial in range(trials):
        binding = random_binding(rng)
        values = materialize(tower, binding)
        for name, p in values.dets.items():
            require_degree(name, p, DET_DEGREE_BOUNDS[name])
        for name, p in values.qs.items():
            require_degree(name, p, Q_DEGREE_BOUNDS[name])
        for name, degree in values.degrees().items():
            bound = {**DET_DEGREE_BOUNDS, **Q_DEGREE_BOUNDS}[name]
            attained[name] += int(degree == bound)
        if q2_by_dual_numbers(tower, binding) != values.qs["Q2"]:
            raise DerivationError("Q2 identity", f"forward differentiation disagrees under binding {trial}")
    low = {name: count for name, count in attained.items() if count < trials}
    if low:
        logger.warning(f"degree bounds not always attained over {trials} bindings: {low}")
    logger.debug(f"tower identities hold under {trials} random bindings")
    return attained


def ladder_binding(l: CurvLadder, point: Sequence, mode: str = "exact"):
    """Ladder values at a point as a plain binding, with the matching unit."""
    values = evaluate_ladder(l, point, mode)
    if values[""].is_zero(settings.zero_tolerance):
        raise ParallelizableBranch(point)
    if all(v.exact for v in values.values()):
        return {w: v.value for w, v in values.items()}, Fraction(1)
    return {w: v.to_mpf() for w, v in values.items()}, mpmath.mpf(1)


def evaluate_tower(t: ObstructionTower, l: CurvLadder, p: Sequence, mode: str = "exact") -> Dict[str, SPoly]:
    """Every determinant and Q polynomial at the point, with NumValue coefficients."""
    binding, one = ladder_binding(l, p, mode)
    values = materialize(t, binding, one)
    result = {name: poly.map(NumValue.of) for name, poly in {**values.dets, **values.qs}.items()}
    logger.debug(f"tower at {tuple(str(c) for c in p)}: degrees {values.degrees()}")
    return result


# ---------------------------------------------------------------------------
# comparison with the printed formulas


def printed_ledger(tower: ObstructionTower) -> Dict[str, List[printed_formulas.LedgerEntry]]:
    """Mismatches against every printed formula, split into known typos and the rest."""
    found: List[printed_formulas.LedgerEntry] = []
    found += printed_formulas.compare("phi", tower.phi, printed_formulas.printed_phi())
    for word, printed in printed_formulas.printed_third_order().items():
        found += printed_formulas.compare(f"s_{word}", canonical_jet(word), normalize(printed))

    psi_parts = {
        "alpha": tower.psi1.coefficient(s1=1), "beta": tower.psi1.coefficient(s2=1),
        "gamma": tower.psi1.coefficient(),
        "alpha_hat": tower.psi2.coefficient(s1=1), "beta_hat": tower.psi2.coefficient(s2=1),
        "gamma_hat": tower.psi2.coefficient(),
    }
    printed_psi = printed_formulas.printed_psi_coefficients()
    for name, derived in psi_parts.items():
        found += printed_formulas.compare(name, derived, to_jetpoly(printed_psi[name]))

    printed_rows = printed_formulas.printed_rows()
    for k in (1, 2, 3):
        row = tower.rows[k - 1]
        scale = printed_formulas.common_scale(row.c, printed_rows[f"c{k}"])
        if scale is None:
            found.append(printed_formulas.LedgerEntry(f"c{k}", "*", Fraction(0), Fraction(0), "no common monomial"))
            continue
        for name in ("a", "b", "c", "d"):
            found += printed_formulas.compare(
                f"{name}{k}", to_jetpoly(getattr(row, name)), to_jetpoly(printed_rows[f"{name}{k}"]), scale
            )

    known, unexpected = printed_formulas.split_known(found)
    for entry in unexpected:
        logger.warning(f"{entry.formula}: {entry.monomial} printed {entry.printed}, derived {entry.derived}")
    return {"known": known, "unexpected": unexpected}
