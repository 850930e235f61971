"""Scaling exponents, junction-condition flags and the limit-problem case map.

The stiffener width and height shrink like ``eps**w`` and ``eps**h`` while the
plate thickness shrinks like ``eps``.  Four discriminants built from the
derived exponent ``k = (w + h - 1)/2`` decide which junction conditions
survive in the limit; their signs classify the admissible ``(w, h)`` quadrant
into the case map, and combined with the three cross-section branches they
yield 23 distinct limit problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Optional, Union

Number = Union[float, Fraction]

DEFAULT_SIGN_TOL = 1e-12


class Branch(str, Enum):
    """Which of the two stiffener section exponents dominates."""

    W_GT_H = "WgtH"
    H_GT_W = "HgtW"
    W_EQ_H = "WeqH"


class ExponentDomainError(ValueError):
    """Raised when (w, h) violates the standing assumptions w > 0, 0 < h < 1."""


@dataclass(frozen=True)
class ScalingExponents:
    """Width/height exponents with the derived quantities they force.

    ``k = (w + h - 1)/2`` exactly; ``max_exp``/``min_exp`` are max/min of
    ``(w, h)``.  Values stay exact :class:`~fractions.Fraction` instances when
    both inputs are supplied as rationals, so regime boundaries (measure-zero
    lines) can be detected without tolerances.
    """

    w: Number
    h: Number
    k: Number
    max_exp: Number
    min_exp: Number

    @property
    def exact(self) -> bool:
        return isinstance(self.k, Fraction)

    def discriminants(self) -> tuple[Number, Number, Number, Number]:
        """The four junction discriminants ``(k, k+w, k+h-1, k+max_exp-1)``."""
        return (self.k, self.k + self.w, self.k + self.h - 1, self.k + self.max_exp - 1)


def derive_exponents(w: Number, h: Number) -> ScalingExponents:
    """Validate ``(w, h)`` and compute the derived exponents.

    Pass :class:`~fractions.Fraction` (or int) arguments to get exact
    arithmetic; floats fall back to tolerance-based sign tests downstream.
    """
    if not w > 0:
        raise ExponentDomainError(f"width exponent must be positive, got w={w}")
    if not 0 < h < 1:
        raise ExponentDomainError(f"height exponent must lie in (0, 1), got h={h}")
    if isinstance(w, Rational) and isinstance(h, Rational):
        w = Fraction(w)
        h = Fraction(h)
        k: Number = (w + h - 1) / 2
    else:
        w = float(w)
        h = float(h)
        k = (w + h - 1.0) / 2.0
    return ScalingExponents(w=w, h=h, k=k, max_exp=max(w, h), min_exp=min(w, h))


def _sign(value: Number, tol: float) -> str:
    if isinstance(value, Fraction):
        if value > 0:
            return "+"
        if value < 0:
            return "-"
        return "0"
    if value > tol:
        return "+"
    if value < -tol:
        return "-"
    return "0"


@dataclass(frozen=True)
class JunctionRule:
    """Indicator flags of the four limit junction conditions.

    For each condition the plate flag is 1 iff the discriminant is <= 0 and
    the beam flag is 1 iff it is >= 0; on a zero line both are active.  Order
    of the tuples: axial (disc ``k``), lateral (``k+w``), vertical (``k+h-1``),
    twist (``k+max_exp-1``).
    """

    plate_flags: tuple[int, int, int, int]
    beam_flags: tuple[int, int, int, int]
    branch: Branch
    sign_vector: tuple[str, str, str, str]
    case_letter: Optional[str] = None


# sign vectors whose limit models carry recovery-sequence proofs; the other
# letters of the case map are configurable via an alias file (see load_case_aliases)
ANCHORED_LETTERS = {
    ("0", "+", "-", "-"): "G",
    ("-", "-", "-", "-"): "A",
    ("+", "+", "+", "+"): "E",
}


def junction_flags(exp: ScalingExponents, tol: float = DEFAULT_SIGN_TOL) -> JunctionRule:
    """Junction-condition flags and branch for the given exponents."""
    signs = tuple(_sign(d, tol) for d in exp.discriminants())
    plate = tuple(0 if s == "+" else 1 for s in signs)
    beam = tuple(0 if s == "-" else 1 for s in signs)
    if isinstance(exp.w, Fraction) and isinstance(exp.h, Fraction):
        cmp = (exp.w > exp.h) - (exp.w < exp.h)
    else:
        diff = float(exp.w) - float(exp.h)
        cmp = 0 if abs(diff) <= tol else (1 if diff > 0 else -1)
    branch = {1: Branch.W_GT_H, -1: Branch.H_GT_W, 0: Branch.W_EQ_H}[cmp]
    return JunctionRule(plate_flags=plate, beam_flags=beam, branch=branch, sign_vector=signs)


def classify_case(
    exp: ScalingExponents,
    tol: float = DEFAULT_SIGN_TOL,
    aliases: Optional[dict[tuple[str, ...], str]] = None,
) -> JunctionRule:
    """Junction rule with the case letter filled in where one is anchored.

    Only the three proof-anchored letters are assigned by default; extra
    ``sign_vector -> letter`` pairs may be supplied via ``aliases``.
    """
    rule = junction_flags(exp, tol=tol)
    letter = ANCHORED_LETTERS.get(rule.sign_vector)
    if letter is None and aliases:
        letter = aliases.get(rule.sign_vector)
    if letter is None:
        return rule
    return JunctionRule(
        plate_flags=rule.plate_flags,
        beam_flags=rule.beam_flags,
        branch=rule.branch,
        sign_vector=rule.sign_vector,
        case_letter=letter,
    )


# case ids per branch; the published case map lists nine cases when the width
# exponent dominates, seven when the height one does, and seven on the
# diagonal where the torsion case is reported ambiguously as H (or I).
_CASES_W_GT_H = ("A", "B", "C", "D", "E", "F", "G", "I", "J")
_CASES_H_GT_W = ("A", "B", "C", "E", "F", "G", "H")
_CASES_W_EQ_H = ("A", "B", "C", "E", "F", "G", "H_or_I")


def enumerate_limit_problems() -> list[tuple[Branch, str]]:
    """All 23 (branch, case id) pairs of the limit-problem family."""
    out: list[tuple[Branch, str]] = []
    out += [(Branch.W_GT_H, c) for c in _CASES_W_GT_H]
    out += [(Branch.H_GT_W, c) for c in _CASES_H_GT_W]
    out += [(Branch.W_EQ_H, c) for c in _CASES_W_EQ_H]
    return out


def recovery_proved(rule: JunctionRule) -> bool:
    """Whether the limit model for this regime carries a recovery-sequence proof.

    True for case E in any branch, case G when the width exponent dominates,
    and case A when the height exponent dominates; every other regime is a
    conjectured limit (the lower bound holds for all of them).
    """
    if rule.case_letter == "E":
        return True
    if rule.case_letter == "G" and rule.branch is Branch.W_GT_H:
        return True
    if rule.case_letter == "A" and rule.branch is Branch.H_GT_W:
        return True
    return False


def load_case_aliases(path: Union[str, Path]) -> dict[tuple[str, ...], str]:
    """Parse a case-alias file with lines ``-,-,-,- = A``.

    Blank lines and ``#`` comments are ignored.  Signs are given in the order
    of the discriminants ``(k, k+w, k+h-1, k+max_exp-1)``.
    """
    aliases: dict[tuple[str, ...], str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'sign_vector = letter', got {raw!r}")
        lhs, rhs = line.split("=", 1)
        signs = tuple(s.strip() for s in lhs.split(","))
        letter = rhs.strip()
        if len(signs) != 4 or any(s not in {"-", "0", "+"} for s in signs):
            raise ValueError(f"{path}:{lineno}: bad sign vector {lhs.strip()!r}")
        if not letter:
            raise ValueError(f"{path}:{lineno}: empty case letter")
        aliases[signs] = letter
    return aliases
