"""Published formulas, transcribed for cross-checking the derived tower.

The printed obstruction, third-order system and coefficient tables carry
typesetting damage. Each formula below is transcribed as printed, except for
glyph splits and bracket placements that only admit one weight-consistent
reading; those readings are listed in READINGS. Monomials where a derived
formula disagrees with the transcription go into the typo ledger.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from ..algebra.jetpoly import JetPoly, S1, S2, S21, monomial_text as jet_monomial_text, s
from ..algebra.ralg import RAlg, monomial_text as ralg_monomial_text
from ..algebra.spoly import SPoly, from_jetpoly, to_jetpoly

logger = logging.getLogger(__name__)

R = RAlg.r()
F = Fraction


def W(word: str) -> RAlg:
    return RAlg.word(word)


def _over_r(value: RAlg, power: int = 1) -> RAlg:
    return value * R ** -power


READINGS = [
    "b1: the glyph 'q144' is read as 144",
    "b2: the split glyphs '3 9/4' and '12 9/4' are read as 39/4 and 129/4",
    "a1: the terms 363/2 R_12, the s-coefficient bracket and R_111..R_222 sit outside the 1/R bracket",
    "a2: the missing '+' before (-342/2 R_1 + 417/2 R_2) R is restored",
    "gamma-hat: the split glyph '1 4' is read as 14",
    "alpha: 'R}2' is read as R_2",
    "d2: the split glyphs '3 45/4' and '12 3/2' are read as 345/4 and 123/2",
    "d3: the split glyphs '6 9/16' and '6 9/8' are read as 69/16 and 69/8",
]


# ---------------------------------------------------------------------------
# the first obstruction


def printed_phi() -> JetPoly:
    """The first obstruction exactly as printed."""
    return (
        -24 * R * s(S21)
        - (24 * R * s() + 12 * W("1") - 6 * W("2")) * s(S1)
        + (24 * R * s() + 6 * W("1") - 8 * W("2")) * s(S2)
        + 3 * R * s() ** 3
        + (-4 * W("2") - 3 * W("22") + W("21") + 2 * W("12") - 13 * R ** 2 - 3 * W("11")) * s()
        + 2 * W("122") - W("221") - W("112") - 5 * R * W("1") - 2 * W("121") - 11 * R * W("2")
    )


def corrected_phi() -> JetPoly:
    """The printed obstruction with the ledger corrections applied."""
    return (
        -24 * R * s(S21)
        - (24 * R * s() + 12 * W("1") - 6 * W("2")) * s(S1)
        + (24 * R * s() + 6 * W("1") - 12 * W("2")) * s(S2)
        + 3 * R * s() ** 3
        + (-3 * W("22") + W("21") + 2 * W("12") - 13 * R ** 2 - 3 * W("11")) * s()
        + 2 * W("122") + W("221") - W("112") - 5 * R * W("1") - 2 * W("121") - 11 * R * W("2")
    )


# ---------------------------------------------------------------------------
# the printed third-order system


def printed_third_order() -> Dict[str, JetPoly]:
    """s_212, s_211, s_111 and s_222 as printed."""
    S_ = s()
    return {
        "212": (
            S_ * s(S21) - F(1, 3) * s(S1) * s(S2) + F(4, 3) * s(S2, 2) - F(2, 3) * s(S1, 2)
            + F(4, 3) * R * s(S2) + 2 * S_ ** 2 * s(S1) + R * S_ ** 2 + (2 * W("2") - W("1")) * S_
            - F(2, 3) * W("21") - F(1, 3) * W("12")
        ),
        "211": (
            -S_ * s(S21) + F(1, 3) * s(S1) * s(S2) + F(2, 3) * s(S2, 2) - F(4, 3) * s(S1, 2)
            + (F(5, 3) * R + 2 * S_ ** 2) * s(S2) - 10 * R * s(S1) + (W("2") - 2 * W("1")) * S_
            - F(1, 3) * W("21") - F(2, 3) * W("12")
        ),
        "111": (
            -2 * S_ * s(S21) - F(4, 3) * s(S1) * s(S2) + F(4, 3) * s(S2, 2) - F(5, 3) * s(S1, 2)
            + (F(10, 3) * R + 2 * S_ ** 2) * s(S2) - (F(5, 3) * R - S_ ** 2) * s(S1)
            - R * S_ ** 2 + (2 * W("2") - 2 * W("1")) * S_
            - F(2, 3) * W("21") - F(4, 3) * W("12") + W("11")
        ),
        "222": (
            2 * S_ * s(S21) + F(4, 3) * s(S1) * s(S2) + F(5, 3) * s(S2, 2) - F(4, 3) * s(S1, 2)
            + (F(5, 3) * R + S_ ** 2) * s(S2) - (F(10, 3) * R - 2 * S_ ** 2) * s(S1)
            + R * S_ ** 2 + (2 * W("2") - 2 * W("1")) * S_
            - F(4, 3) * W("21") - F(2, 3) * W("12") + W("22")
        ),
    }


# ---------------------------------------------------------------------------
# the coefficients of the second obstructions


def printed_psi_coefficients() -> Dict[str, SPoly]:
    """alpha, beta, gamma and their hatted partners as polynomials in s."""
    S_ = s()
    q = F(3, 4)
    alpha = (
        30 * R * S_ ** 2 - 18 * W("2") * S_
        - q * _over_r(-16 * R * W("22") + 14 * W("2") ** 2 - 40 * R ** 3 - 56 * W("1") * W("2")
                      + 40 * R * W("12") + 56 * W("1") ** 2 - 40 * R * W("11"))
    )
    beta = (
        q * _over_r(24 * R * W("2") - 24 * R * W("1")) * S_ - 15 * R * S_ ** 2
        - q * _over_r(70 * W("1") * W("2") - 44 * R * W("12") + 20 * R * W("11") + 20 * R * W("22")
                      - 28 * W("1") ** 2 - 28 * W("2") ** 2 - 60 * R ** 3)
    )
    gamma = (
        -q * _over_r(-6 * R * W("1") + 3 * R * W("2")) * S_ ** 3
        - q * _over_r(7 * W("2") * W("12") + 12 * R * W("112") - 14 * W("1") * W("12") - 7 * W("2") * W("22")
                      + 14 * W("1") * W("11") - 8 * R * W("111") + 4 * R * W("222") - 47 * W("2") * R ** 2
                      + 14 * W("1") * W("22") - 7 * W("11") * W("2") - 30 * W("1") * R ** 2
                      - 12 * R * W("122")) * S_
        - q * _over_r(-7 * W("2") * W("112") + 7 * W("2") * W("122") + 35 * W("1") * W("2") * R
                      - 38 * W("1") ** 2 * R - 2 * W("2") ** 2 * R + 12 * W("1122") * R - 8 * W("1112") * R
                      - 4 * W("1222") * R - 48 * R ** 2 * W("12") + 8 * R ** 2 * W("11") + 40 * R ** 2 * W("22")
                      + 8 * R ** 4 - 14 * W("1") * W("122") + 14 * W("1") * W("112"))
    )
    alpha_hat = (
        q * _over_r(24 * R * W("2") - 24 * R * W("1")) * S_ - 15 * R * S_ ** 2
        - q * _over_r(20 * R * W("22") + 70 * W("1") * W("2") - 28 * W("1") ** 2 + 60 * R ** 3
                      - 28 * W("2") ** 2 - 44 * R * W("21") + 20 * R * W("11"))
    )
    beta_hat = (
        30 * R * S_ ** 2 + 18 * W("1") * S_
        - q * _over_r(40 * R ** 3 - 16 * R * W("11") - 56 * W("1") * W("2") + 56 * W("2") ** 2
                      + 14 * W("1") ** 2 + 40 * R * W("21") - 40 * R * W("22"))
    )
    gamma_hat = (
        -q * _over_r(3 * R * W("1") - 6 * R * W("2")) * S_ ** 3
        - q * _over_r(-7 * W("1") * W("22") - 14 * W("2") * W("21") + 12 * R * W("221") + 14 * W("11") * W("2")
                      + 7 * W("1") * W("21") - 12 * R * W("211") - 8 * R * W("222") + 14 * W("2") * W("22")
                      - 7 * W("1") * W("11") + 4 * R * W("111") + 30 * W("2") * R ** 2
                      + 47 * W("1") * R ** 2) * S_
        - q * _over_r(35 * W("1") * W("2") * R - 7 * W("1") * W("211") + 7 * W("1") * W("221")
                      + 8 * W("2221") * R + 4 * W("2111") * R - 12 * W("2211") * R + 8 * R ** 2 * W("22")
                      - 2 * W("1") ** 2 * R + 40 * R ** 2 * W("11") - 48 * R ** 2 * W("21")
                      - 38 * W("2") ** 2 * R - 8 * R ** 4 + 14 * W("2") * W("211") - 14 * W("2") * W("221"))
    )
    table = {
        "alpha": alpha, "beta": beta, "gamma": gamma,
        "alpha_hat": alpha_hat, "beta_hat": beta_hat, "gamma_hat": gamma_hat,
    }
    return {name: from_jetpoly(_as_jet(value)) for name, value in table.items()}


def printed_rows() -> Dict[str, SPoly]:
    """a, b, c and d of the first three rows of the linear system."""
    S_ = s()
    a1 = (
        -F(297, 2) * R * S_ ** 3 + (F(441, 4) * W("2") - 72 * W("1")) * S_ ** 2
        + (F(363, 2) * W("12") + _over_r(F(381, 2) * W("1") ** 2 - F(1023, 4) * W("1") * W("2") + 96 * W("2") ** 2)
           - F(1305, 2) * R ** 2 - F(273, 2) * W("11") - F(165, 2) * W("22")) * S_
        + (F(825, 4) * W("2") - 102 * W("1")) * R
        + 15 * W("122") - 33 * W("112") - 3 * W("222") + 36 * W("111")
        + _over_r((-36 * W("22") - 147 * W("11") + 114 * W("12")) * W("1")
                  + (F(57, 4) * W("22") + F(189, 4) * W("11") - F(177, 4) * W("12")) * W("2"))
        + _over_r(F(231, 2) * W("1") ** 3 - F(525, 4) * W("1") ** 2 * W("2") + F(273, 4) * W("1") * W("2") ** 2
                  - F(63, 4) * W("2") ** 3, 2)
    )
    a2 = (
        -F(9, 2) * R * S_ ** 3 + (-F(45, 2) * W("1") + 18 * W("2")) * S_ ** 2
        + (F(39, 2) * R ** 2 - 3 * W("22") - F(39, 2) * W("12") + F(39, 2) * W("11")
           + _over_r(-F(57, 2) * W("1") ** 2 + 42 * W("1") * W("2") - F(21, 8) * W("2") ** 2)) * S_
        + (-F(342, 2) * W("1") + F(417, 2) * W("2")) * R - 42 * W("122") + 12 * W("222") + 42 * W("112")
        + _over_r((24 * W("22") - F(45, 2) * W("11") - F(87, 2) * W("12")) * W("1")
                  + (-F(39, 2) * W("22") - F(15, 2) * W("11") + F(81, 2) * W("12")) * W("2"))
        + _over_r(F(63, 2) * W("1") ** 3 - F(21, 2) * W("1") ** 2 * W("2") - F(105, 8) * W("1") * W("2") ** 2
                  + F(21, 4) * W("2") ** 3, 2)
    )
    a3 = (
        -F(9, 4) * R * S_ ** 3 + (-18 * W("1") + F(117, 4) * W("2")) * S_ ** 2
        + (F(999, 4) * R ** 2 - F(129, 4) * W("12") + F(39, 4) * W("22") + F(39, 4) * W("11")
           + _over_r(-F(57, 4) * W("1") ** 2 + F(429, 8) * W("1") * W("2") - F(111, 4) * W("2") ** 2)) * S_
        + (-F(429, 2) * W("1") + F(159, 4) * W("2")) * R
        + 48 * W("112") + 6 * W("222") - 30 * W("122") - 18 * W("111")
        + _over_r((F(9, 2) * W("22") + F(75, 2) * W("11") - F(141, 2) * W("12")) * W("1")
                  + (F(39, 4) * W("22") - F(45, 4) * W("11") + F(39, 4) * W("12")) * W("2"))
        + _over_r(-F(21, 2) * W("1") ** 3 + F(21, 2) * W("1") ** 2 * W("2") + F(231, 8) * W("1") * W("2") ** 2
                  - F(63, 4) * W("2") ** 3, 2)
    )
    b1 = (
        144 * R * S_ ** 3 + (-63 * W("2") + F(531, 4) * W("1")) * S_ ** 2
        + (120 * R ** 2 + 156 * W("22") - 156 * W("12") + 57 * W("11")
           + _over_r(-F(183, 4) * W("1") ** 2 + F(465, 2) * W("1") * W("2") - 219 * W("2") ** 2)) * S_
        + (-99 * W("2") + F(279, 4) * W("1")) * R + 39 * W("112") - 21 * W("122") - 15 * W("111")
        + _over_r((F(291, 4) * W("11") + F(159, 4) * W("22") - F(423, 4) * W("12")) * W("1")
                  + (60 * W("12") - 75 * W("11") - 27 * W("22")) * W("2"))
        + _over_r(-F(231, 4) * W("1") ** 3 + F(609, 4) * W("1") ** 2 * W("2") - F(357, 4) * W("1") * W("2") ** 2
                  + F(63, 2) * W("2") ** 3, 2)
    )
    b2 = (
        F(9, 4) * R * S_ ** 3 + (F(117, 4) * W("1") - 18 * W("2")) * S_ ** 2
        + (F(741, 4) * R ** 2 - F(39, 4) * W("11") - F(39, 4) * W("22") + F(129, 4) * W("12")
           + _over_r(F(111, 4) * W("1") ** 2 - F(429, 8) * W("1") * W("2") + F(57, 4) * W("2") ** 2)) * S_
        + (F(603, 4) * W("1") + F(39, 2) * W("2")) * R
        + 48 * W("122") - 30 * W("112") - 18 * W("222") + 6 * W("111")
        + _over_r((F(39, 4) * W("11") + F(39, 4) * W("12") - F(45, 4) * W("22")) * W("1")
                  + (F(9, 2) * W("11") - F(141, 2) * W("12") + F(75, 2) * W("22")) * W("2"))
        + _over_r(-F(63, 4) * W("1") ** 3 + F(231, 8) * W("1") ** 2 * W("2") + F(21, 2) * W("1") * W("2") ** 2
                  - F(21, 2) * W("2") ** 3, 2)
    )
    b3 = (
        F(9, 2) * R * S_ ** 3 + (-F(45, 2) * W("2") + 18 * W("1")) * S_ ** 2
        + (-F(39, 2) * R ** 2 + 3 * W("11") + F(39, 2) * W("12") - F(39, 2) * W("22")
           + _over_r(F(21, 8) * W("1") ** 2 - 42 * W("1") * W("2") + F(57, 2) * W("2") ** 2)) * S_
        + (F(243, 2) * W("2") + F(9, 2) * W("1")) * R - 42 * W("112") + 42 * W("122") + 12 * W("111")
        + _over_r((-F(39, 2) * W("11") + F(81, 2) * W("12") - F(15, 2) * W("22")) * W("1")
                  + (24 * W("11") - F(87, 2) * W("12") - F(45, 2) * W("22")) * W("2"))
        + _over_r(F(21, 4) * W("1") ** 3 - F(105, 8) * W("1") ** 2 * W("2") - F(21, 2) * W("1") * W("2") ** 2
                  + F(63, 2) * W("2") ** 3, 2)
    )
    d1 = (
        F(45, 8) * R * S_ ** 5
        + (-F(171, 8) * W("1") + F(45, 2) * W("2")) * S_ ** 4
        + (F(9, 2) * W("11") - F(9, 2) * W("22")
           + _over_r(-F(99, 8) * W("1") ** 2 + F(63, 8) * W("1") * W("2") - F(27, 8) * W("2") ** 2)) * S_ ** 3
        + ((-F(21, 4) * W("2") - 411 * W("1")) * R - F(423, 8) * W("122") + F(423, 8) * W("112")
           + 33 * W("222") - F(51, 2) * W("111")
           + _over_r((-F(375, 8) * W("12") + F(375, 8) * W("22") + F(375, 8) * W("11")) * W("1")
                     + (-F(111, 2) * W("11") - F(111, 2) * W("22") + F(111, 2) * W("12")) * W("2"))) * S_ ** 2
        + (-F(2205, 8) * R ** 3
           + (F(1233, 4) * W("22") - F(501, 4) * W("12") + F(87, 4) * W("11") - F(567, 2) * W("21")) * R
           - F(363, 2) * W("1") ** 2 + F(903, 8) * W("1") * W("2") - F(417, 8) * W("2") ** 2
           - F(69, 2) * W("1112") - 36 * W("1222") + F(135, 2) * W("1122") + 6 * W("1111")
           + _over_r((-F(567, 8) * W("122") + F(567, 8) * W("112") + F(15, 2) * W("222") - F(33, 2) * W("111"))
                     * W("1")
                     + (-F(9, 2) * W("222") + 63 * W("122") - 63 * W("112") + 3 * W("111")) * W("2")
                     - F(129, 8) * W("11") ** 2 + (F(99, 4) * W("12") - F(69, 4) * W("22")) * W("11")
                     + F(39, 4) * W("12") * W("22") - F(9, 8) * W("22") ** 2 - F(69, 8) * W("12") ** 2)
           + _over_r((F(231, 8) * W("22") - F(231, 8) * W("12") + F(231, 8) * W("11")) * W("1") ** 2
                     + (-F(147, 8) * W("22") - F(147, 8) * W("11") + F(147, 8) * W("12")) * W("2") * W("1")
                     + (F(63, 8) * W("22") - F(63, 8) * W("12") + F(63, 8) * W("11")) * W("2") ** 2, 2)) * S_
        + (F(39, 4) * W("2") - F(303, 8) * W("1")) * R ** 2
        + (-6 * W("111") + F(138, 8) * W("112") - F(135, 8) * W("122")) * R
        + (F(465, 8) * W("22") + F(741, 8) * W("11") - F(549, 8) * W("12") - 63 * W("21")) * W("1")
        + (-F(207, 4) * W("22") + 21 * W("12") - F(231, 4) * W("11") + F(315, 4) * W("21")) * W("2")
        + 6 * W("11112") - 9 * W("11122") + 3 * W("11222")
        + _over_r(-F(627, 8) * W("1") ** 3 + F(717, 8) * W("1") ** 2 * W("2")
                  + (-F(33, 2) * W("1112") + 24 * W("1122") - F(33, 8) * W("2") ** 2 - F(15, 2) * W("1222")) * W("1")
                  + F(9, 4) * W("2") ** 3 + (3 * W("1112") + F(9, 2) * W("1222") - F(15, 2) * W("1122")) * W("2")
                  + (-F(129, 8) * W("112") + F(129, 8) * W("122")) * W("11")
                  + (-F(69, 8) * W("122") + F(69, 8) * W("112")) * W("12")
                  + (-F(9, 8) * W("112") + F(9, 8) * W("122")) * W("22"))
        + _over_r((-F(231, 8) * W("122") + F(231, 8) * W("112")) * W("1") ** 2
                  + (F(147, 8) * W("122") - F(147, 8) * W("112")) * W("2") * W("1")
                  + (F(63, 8) * W("112") - F(63, 8) * W("122")) * W("2") ** 2, 2)
    )
    d2 = (
        (F(9, 8) * W("1") - F(9, 16) * W("2")) * S_ ** 4
        + (-9 * R ** 2 - F(9, 2) * W("22") + 9 * W("12")
           + _over_r(-F(27, 8) * W("1") ** 2 - F(9, 16) * W("1") * W("2") + F(9, 8) * W("2") ** 2)) * S_ ** 3
        + ((F(261, 8) * W("1") + F(573, 16) * W("2")) * R
           - F(45, 4) * W("112") - F(15, 4) * W("222") + F(45, 4) * W("122") + F(15, 2) * W("111")
           + _over_r((-F(69, 8) * W("11") + F(69, 8) * W("12") - F(69, 8) * W("22")) * W("1")
                     + (F(69, 16) * W("11") + F(69, 16) * W("22") - F(69, 16) * W("12")) * W("2"))) * S_ ** 2
        + (-F(165, 2) * R ** 3 + (135 * W("12") - F(165, 2) * W("11") - 36 * W("22")) * R
           - F(345, 4) * W("1") ** 2 + F(261, 4) * W("1") * W("2") + F(51, 4) * W("2") ** 2 - 3 * W("2222")
           + F(27, 2) * W("1112") + F(51, 4) * W("1222") - F(81, 4) * W("1122")
           + _over_r((F(3, 4) * W("222") + F(27, 8) * W("122") - F(27, 8) * W("112") - F(9, 2) * W("111")) * W("1")
                     + (F(3, 2) * W("222") - F(117, 16) * W("122") + F(117, 16) * W("112") - F(3, 2) * W("111"))
                     * W("2")
                     + (F(15, 2) * W("22") - 15 * W("12")) * W("11") + 15 * W("12") ** 2
                     - F(45, 2) * W("12") * W("22") + F(15, 2) * W("22") ** 2)
           + _over_r((F(63, 8) * W("22") - F(63, 8) * W("12") + F(63, 8) * W("11")) * W("1") ** 2
                     + (F(21, 16) * W("22") - F(21, 16) * W("12") + F(21, 16) * W("11")) * W("2") * W("1")
                     + (F(21, 8) * W("12") - F(21, 8) * W("11") - F(21, 8) * W("22")) * W("2") ** 2, 2)) * S_
        + (F(123, 2) * W("1") - 174 * W("2")) * R ** 2
        + (111 * W("122") - 72 * W("112") - 45 * W("222")) * R
        + (-96 * W("12") + 78 * W("22") + F(9, 2) * W("11")) * W("1")
        + (-F(75, 2) * W("11") + 42 * W("12") - 45 * W("22")) * W("2")
        - 9 * W("11222") + 6 * W("11122") + 3 * W("12222")
        + _over_r(-F(171, 8) * W("1") ** 3 + F(303, 16) * W("1") ** 2 * W("2")
                  + (-F(3, 4) * W("1222") - F(9, 2) * W("1112") + F(21, 4) * W("1122") + 3 * W("2") ** 2) * W("1")
                  - F(3, 4) * W("2") ** 3 + (3 * W("1122") - F(3, 2) * W("1222") - F(3, 2) * W("1112")) * W("2")
                  + (-15 * W("112") + 15 * W("122")) * W("12")
                  + (-F(15, 2) * W("122") + F(15, 2) * W("112")) * W("22"))
        + _over_r((-F(63, 8) * W("122") + F(63, 8) * W("112")) * W("1") ** 2
                  + (F(21, 16) * W("112") - F(21, 16) * W("122")) * W("2") * W("1")
                  + (F(21, 8) * W("122") - F(21, 8) * W("112")) * W("2") ** 2, 2)
    )
    d3 = (
        (-F(9, 8) * W("2") + F(9, 16) * W("1")) * S_ ** 4
        + (-9 * R ** 2 - F(9, 2) * W("11") + 9 * W("12")
           + _over_r(F(9, 8) * W("1") ** 2 - F(9, 16) * W("1") * W("2") - F(27, 8) * W("2") ** 2)) * S_ ** 3
        + ((-F(231, 8) * W("2") + F(1695, 16) * W("1")) * R
           - F(15, 2) * W("222") + F(45, 4) * W("122") - F(45, 4) * W("112") + F(15, 4) * W("111")
           + _over_r((-F(69, 16) * W("22") + F(69, 16) * W("12") - F(69, 16) * W("11")) * W("1")
                     + (-F(69, 8) * W("12") + F(69, 8) * W("22") + F(69, 8) * W("11")) * W("2"))) * S_ ** 2
        + (-36 * R ** 3 + (-F(237, 4) * W("11") + F(177, 2) * W("12") - 36 * W("22")) * R
           - F(897, 16) * W("1") ** 2 + F(1041, 16) * W("1") * W("2") + F(249, 8) * W("2") ** 2 - 3 * W("1111")
           - F(81, 4) * W("1122") + F(27, 2) * W("1222") + F(51, 4) * W("1112")
           + _over_r((-F(117, 16) * W("112") - F(3, 2) * W("222") + F(117, 16) * W("122") + F(3, 2) * W("111"))
                     * W("1")
                     + (-F(9, 2) * W("222") - F(27, 8) * W("122") + F(27, 8) * W("112") + F(3, 4) * W("111")) * W("2")
                     + F(15, 2) * W("11") ** 2 + (F(15, 2) * W("22") - F(45, 2) * W("12")) * W("11")
                     + 15 * W("12") ** 2 - 15 * W("12") * W("22"))
           + _over_r((F(21, 8) * W("12") - F(21, 8) * W("11") - F(21, 8) * W("22")) * W("1") ** 2
                     + (F(21, 16) * W("22") - F(21, 16) * W("12") + F(21, 16) * W("11")) * W("2") * W("1")
                     + (F(63, 8) * W("22") - F(63, 8) * W("12") + F(63, 8) * W("11")) * W("2") ** 2, 2)) * S_
        + (147 * W("2") + 6 * W("1")) * R ** 2
        + (36 * W("122") - 66 * W("112") + 3 * W("111")) * R
        + (30 * W("22") - 27 * W("12") - 39 * W("11")) * W("1")
        + (-45 * W("22") + F(33, 2) * W("12") - F(15, 4) * W("11")) * W("2")
        + 9 * W("11122") - 6 * W("11222") - 3 * W("11112")
        + _over_r(F(57, 8) * W("1") ** 3 + F(3, 16) * W("1") ** 2 * W("2")
                  + (-3 * W("1122") + 15 * W("2") ** 2 + F(3, 2) * W("1112") + F(3, 2) * W("1222")) * W("1")
                  + F(9, 4) * W("2") ** 3
                  + (-F(21, 4) * W("1122") + F(9, 2) * W("1222") + F(3, 4) * W("1112")) * W("2")
                  + (-F(15, 2) * W("122") + F(15, 2) * W("112")) * W("11")
                  + (-15 * W("112") + 15 * W("122")) * W("12"))
        + _over_r((F(21, 8) * W("122") - F(21, 8) * W("112")) * W("1") ** 2
                  + (F(21, 16) * W("112") - F(21, 16) * W("122")) * W("2") * W("1")
                  + (-F(63, 8) * W("122") + F(63, 8) * W("112")) * W("2") ** 2, 2)
    )
    c1 = 234 * R * S_ + 18 * W("2") + 18 * W("1")
    c2 = JetPoly.const(36 * W("1") - 18 * W("2"))
    c3 = JetPoly.const(18 * W("1") - 36 * W("2"))
    table = {
        "a1": a1, "a2": a2, "a3": a3, "b1": b1, "b2": b2, "b3": b3,
        "c1": c1, "c2": c2, "c3": c3, "d1": d1, "d2": d2, "d3": d3,
    }
    return {name: from_jetpoly(_as_jet(value)) for name, value in table.items()}


def _as_jet(value) -> JetPoly:
    return value if isinstance(value, JetPoly) else JetPoly.const(value)


# ---------------------------------------------------------------------------
# the typo ledger


@dataclass(frozen=True)
class LedgerEntry:
    """One monomial where a derived formula and its printed form disagree."""

    formula: str
    monomial: str
    printed: Fraction
    derived: Fraction
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "formula": self.formula,
            "monomial": self.monomial,
            "printed": str(self.printed),
            "derived": str(self.derived),
            "note": self.note,
        }


_LINEAR_TERM = "the -4 R_2 printed in the s coefficient belongs to s_2"
_FLIPPED_SIGN = "the sign of R_221 is flipped"

KNOWN_TYPOS: List[LedgerEntry] = [
    LedgerEntry("phi", "R_2*s", F(-4), F(0), _LINEAR_TERM),
    LedgerEntry("phi", "R_2*s_2", F(-8), F(-12), _LINEAR_TERM),
    LedgerEntry("phi", "R_122", F(1), F(3), _FLIPPED_SIGN),
    LedgerEntry("phi", "R*R_2", F(-4), F(-18), _FLIPPED_SIGN),
    LedgerEntry("s_212", "R*s_1", F(0), F(-5, 3), "the term -5/3 R s_1 is dropped"),
    LedgerEntry("s_211", "R*s_1", F(-10), F(-10, 3), "-10 R s_1 stands for -10/3 R s_1"),
    LedgerEntry("a2", "R*R_1", F(-171), F(-657, 2), "-342/2 R_1 R stands for -657/2 R_1 R"),
]


def monomial_key(jets: Tuple, ralg_monomial: Tuple) -> str:
    parts = [ralg_monomial_text(ralg_monomial), jet_monomial_text(jets)]
    return "*".join(p for p in parts if p) or "1"


def coefficient_table(e: JetPoly) -> Dict[str, Fraction]:
    table: Dict[str, Fraction] = {}
    for jets, coefficient in e.terms.items():
        for m, q in coefficient.terms.items():
            table[monomial_key(jets, m)] = q
    return table


def compare(formula: str, derived: JetPoly, printed: JetPoly, scale: Fraction = F(1)) -> List[LedgerEntry]:
    """Per-monomial differences between derived and scale * printed."""
    left, right = coefficient_table(derived), coefficient_table(printed)
    entries = []
    for key in sorted(set(left) | set(right)):
        d, p = left.get(key, F(0)), right.get(key, F(0)) * scale
        if d != p:
            entries.append(LedgerEntry(formula, key, p, d))
    return entries


def split_known(entries: Sequence[LedgerEntry]) -> Tuple[List[LedgerEntry], List[LedgerEntry]]:
    """Separate mismatches recorded in KNOWN_TYPOS from unexpected ones."""
    known = {(e.formula, e.monomial, e.printed, e.derived): e for e in KNOWN_TYPOS}
    recorded, unexpected = [], []
    for entry in entries:
        match = known.get((entry.formula, entry.monomial, entry.printed, entry.derived))
        if match is not None:
            recorded.append(match)
        else:
            unexpected.append(entry)
    return recorded, unexpected


def common_scale(derived: SPoly, printed: SPoly) -> Optional[Fraction]:
    """Ratio derived / printed read off the first monomial present in both."""
    left = coefficient_table(to_jetpoly(derived))
    right = coefficient_table(to_jetpoly(printed))
    for key in sorted(right):
        if key in left:
            return left[key] / right[key]
    return None


def printed_q2(A: SPoly, B: SPoly, D: SPoly, derived: Dict[str, SPoly], r_value) -> SPoly:
    """The printed expansion of the second Q polynomial, for comparison only.

    ``derived`` holds the coefficient-wise derivatives "A1", "A2", "B1", "B2",
    "D1", "D2" of A, B and D along e_1 and e_2.
    """
    base = SPoly([r_value * 0, r_value * 0 + 1])
    return (
        derived["B2"] * D - B * derived["D2"] - derived["A1"] * D - A * derived["D1"]
        + B.derivative() * A - B * A.derivative() - base * D * D * r_value
    )
