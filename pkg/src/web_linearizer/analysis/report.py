"""Verdict reports: a stable key-value document plus plain-text tables."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple
import json
import logging

import mpmath
from tabulate import tabulate

from ..algebra.qpoly import Root
from ..exceptions import ClassCountError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"

LINEARIZABLE = "linearizable"
NOT_LINEARIZABLE = "not-linearizable"
PARALLELIZABLE = "parallelizable"
INCONCLUSIVE = "inconclusive-numeric"
DECISIVE = (LINEARIZABLE, NOT_LINEARIZABLE, PARALLELIZABLE)

MAX_CLASSES = 15

PARALLEL_NOTE = (
    "the curvature vanishes identically: every initial base s0 (with any t0, z0) prolongs to a germ "
    "of linearizations, and different bases are not projectively equivalent"
)


def exact_text(value: Any) -> Any:
    """Numbers as text: fractions exactly, floats with their full repr."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if hasattr(value, "exact") and hasattr(value, "value"):
        return str(value)
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(value, 17)
    if isinstance(value, float):
        return repr(value)
    return value


@dataclass
class RootReport:
    """One root of the radical: an admissible base when real and D does not vanish there."""

    value: str
    multiplicity: int
    exact: bool
    real: bool
    admissible: bool
    reason: Optional[str] = None
    integration: Optional[Dict[str, Any]] = None
    verification: Optional[Dict[str, Any]] = None
    root: Optional[Root] = field(default=None, repr=False, compare=False)

    @property
    def verified(self) -> bool:
        return bool(self.verification and self.verification.get("passed"))

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "multiplicity": self.multiplicity,
            "exact": self.exact,
            "real": self.real,
            "admissible": self.admissible,
            "reason": self.reason,
            "integration": self.integration,
            "verification": self.verification,
        }


@dataclass
class Report:
    """Everything one command established about a web at a point."""

    command: str
    job: Dict[str, Any] = field(default_factory=dict)
    curvature: Optional[str] = None
    parallelizable: Optional[bool] = None
    degrees: Dict[str, int] = field(default_factory=dict)
    radical: Optional[str] = None
    radical_degree: Optional[int] = None
    roots: List[RootReport] = field(default_factory=list)
    class_count: Optional[int] = None
    class_bound: Optional[int] = None
    resultants: Dict[str, str] = field(default_factory=dict)
    neighborhood: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, Any] = field(default_factory=dict)
    ledger: Dict[str, List[dict]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    verdict: Optional[str] = None
    provenance: Dict[str, Any] = field(default_factory=dict)

    @property
    def decisive(self) -> bool:
        return self.verdict in DECISIVE

    @property
    def exit_code(self) -> int:
        if self.verdict is None:
            return 6 if self.checks.get("verification", {}).get("passed") is False else 0
        return 0 if self.decisive else 6

    def add_note(self, note: str) -> None:
        if note not in self.notes:
            self.notes.append(note)

    def set_class_count(self, count: int) -> None:
        if count > MAX_CLASSES:
            raise ClassCountError(count)
        self.class_count = count

    def result(self) -> dict:
        """The part of the report that is compared between runs."""
        return {
            "command": self.command,
            "job": self.job,
            "curvature": self.curvature,
            "parallelizable": self.parallelizable,
            "degrees": dict(sorted(self.degrees.items())),
            "radical": self.radical,
            "radical_degree": self.radical_degree,
            "roots": [r.to_dict() for r in self.roots],
            "class_count": self.class_count,
            "class_bound": self.class_bound,
            "resultants": dict(sorted(self.resultants.items())),
            "neighborhood": self.neighborhood,
            "checks": self.checks,
            "ledger": self.ledger,
            "notes": list(self.notes),
            "verdict": self.verdict,
        }

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "result": self.result(), "provenance": self.provenance}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=exact_text)

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(self.to_json() + "\n")
        logger.info(f"report written to {path}")


def neighborhood_points(point: Sequence[Fraction], radius: Fraction, samples: int) -> List[Tuple[Fraction, Fraction]]:
    """Rational sample points around the point, vertical offsets first."""
    x0, y0 = point
    half = radius / 2
    candidates = [
        (x0, y0 + radius), (x0, y0 - radius), (x0, y0 + half), (x0, y0 - half),
        (x0 + radius, y0), (x0 - radius, y0), (x0 + half, y0), (x0 - half, y0),
        (x0 + half, y0 + half), (x0 - half, y0 - half), (x0 + half, y0 - half), (x0 - half, y0 + half),
    ]
    return candidates[:samples]


def class_bound(q_degrees: Dict[str, int]) -> Optional[int]:
    """Roots of the lowest-degree nonzero Q bound the number of classes."""
    degrees = [d for d in q_degrees.values() if d >= 0]
    return min(degrees) if degrees else None


def degree_table(degrees: Dict[str, int], bounds: Dict[str, int] = None) -> str:
    rows = []
    for name in sorted(degrees, key=lambda n: (n[0] != "Q", len(n), n)):
        bound = (bounds or {}).get(name)
        rows.append([name, degrees[name], "" if bound is None else bound])
    return tabulate(rows, headers=["polynomial", "degree", "bound"], tablefmt="simple")


def ledger_table(entries: Sequence[dict]) -> str:
    if not entries:
        return "(no mismatches)"
    rows = [[e["formula"], e["monomial"], e["printed"], e["derived"], e.get("note", "")] for e in entries]
    return tabulate(rows, headers=["formula", "monomial", "printed", "derived", "note"], tablefmt="simple")


def roots_table(roots: Sequence[RootReport]) -> str:
    rows = []
    for r in roots:
        verification = r.verification or {}
        rows.append([
            r.value, r.multiplicity, "yes" if r.admissible else "no",
            verification.get("p1_residual", ""), verification.get("curvature_residual", ""),
            "" if not verification else ("passed" if r.verified else "failed"),
        ])
    return tabulate(rows, headers=["root", "mult", "admissible", "P1", "curvature", "check"], tablefmt="simple")
