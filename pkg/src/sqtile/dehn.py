"""Tilability verdicts and impossibility certificates.

A rectangle is tilable by squares iff its side ratio is rational.  The
negative verdict ships a certificate: at any negative y the outer
rectangle's basis-relative area is y itself, yet every square's is a
square of a rational, so a genuine square tiling would sum nonnegative
numbers to a negative one.  Refutation of a claimed square tiling finds
the first checkable failure in a fixed order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .basis import commensurability_ratio, extract_basis
from .errors import AmbiguousComparison, NotInSpan
from .exactnum import LinExpr
from .hamel import y_area
from .tiling import Tiling, is_square, validate

__all__ = [
    "Certificate",
    "Verdict",
    "RefutationKind",
    "Refutation",
    "decide",
    "verify_certificate",
    "refute_square_tiling",
]

DEFAULT_CERTIFICATE_Y = Fraction(-1)


@dataclass(frozen=True, slots=True)
class Certificate:
    """A negative y witnessing impossibility.

    The outer rectangle's basis-relative area at y is exactly y (negative),
    while every square's is (a + b*y)^2 >= 0.
    """

    y: Fraction

    def __post_init__(self):
        if self.y >= 0:
            raise ValueError(f"certificate y must be negative, got {self.y}")

    @property
    def statement(self) -> str:
        return (
            f"at y = {self.y} the outer rectangle's basis-relative area equals "
            f"{self.y} < 0, while every square's is a square of a rational, "
            "hence nonnegative; a square tiling would sum nonnegative numbers "
            "to a negative one"
        )

    def as_dict(self) -> dict:
        return {"y": str(self.y), "outer_y_area": str(self.y), "statement": self.statement}


@dataclass(frozen=True, slots=True)
class Verdict:
    """Either Tilable with the side ratio, or NotTilable with a certificate."""

    tilable: bool
    ratio: Fraction | None = None
    certificate: Certificate | None = None

    def as_dict(self) -> dict:
        if self.tilable:
            return {"verdict": "tilable", "ratio": str(self.ratio)}
        return {"verdict": "not_tilable", "certificate": self.certificate.as_dict()}


def decide(w: LinExpr, h: LinExpr, *, y=DEFAULT_CERTIFICATE_Y) -> Verdict:
    """Decide square-tilability of the w x h rectangle.

    Tilable with ratio q when h = q*w for rational q; otherwise
    NotTilable with a certificate at the given negative y.  Positivity
    of the sides is certified first (AmbiguousComparison when the
    enclosures cannot).
    """
    zero = LinExpr.zero(w.table)
    for name, e in (("width", w), ("height", h)):
        if e.cmp(zero) <= 0:
            raise ValueError(f"{name} must be positive")
    q = commensurability_ratio(w, h)
    if q is not None:
        return Verdict(tilable=True, ratio=q)
    return Verdict(tilable=False, certificate=Certificate(Fraction(y)))


def verify_certificate(w: LinExpr, h: LinExpr, cert: Certificate) -> bool:
    """Re-check a NotTilable certificate against the rectangle.

    Confirms y < 0, that (w, h) really are incommensurable, and that the
    outer basis-relative area at y re-evaluates to exactly y.
    """
    if cert.y >= 0:
        return False
    if commensurability_ratio(w, h) is not None:
        return False
    basis = extract_basis([w, h])
    return y_area(w, h, basis, cert.y) == cert.y


class RefutationKind(Enum):
    GEOMETRY_INVALID = "geometry_invalid"
    TILE_NOT_SQUARE = "tile_not_square"
    SIDES_NOT_IN_SPAN = "sides_not_in_span"
    ADDITIVITY_VIOLATED = "additivity_violated"


@dataclass(frozen=True, slots=True)
class Refutation:
    """Why a claimed square tiling fails, with a re-checkable witness."""

    kind: RefutationKind
    witness: dict

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "witness": self.witness}


def refute_square_tiling(t: Tiling, *, y=DEFAULT_CERTIFICATE_Y) -> Refutation:
    """Find the first failure in a claimed square tiling of an
    incommensurable rectangle.

    Checks run in a fixed order so witnesses are deterministic:
    geometric validity, squareness of every tile, span membership of
    every side (a guard; basis extraction over all sides cannot miss
    one), and exact additivity at the certificate y.  At least one
    always fires; reporting "no failure" is a hard error.
    """
    verdict = decide(t.outer_w, t.outer_h, y=y)
    if verdict.tilable:
        raise ValueError(
            f"outer sides are commensurable (ratio {verdict.ratio}); "
            "nothing to refute, use the constructive path"
        )
    y = Fraction(y)

    report = validate(t)
    if report.is_ambiguous:
        raise AmbiguousComparison(
            f"cannot certify the claimed tiling's geometry: {report}; "
            "declare tighter generator enclosures and retry"
        )
    if not report.is_valid:
        return Refutation(RefutationKind.GEOMETRY_INVALID, {"failures": report.as_dict()["failures"]})

    for i, p in enumerate(t.tiles):
        if not is_square(p):
            return Refutation(
                RefutationKind.TILE_NOT_SQUARE,
                {"tile": i, "w": str(p.w), "h": str(p.h)},
            )

    basis = extract_basis(t.side_lengths())
    try:
        outer = y_area(t.outer_w, t.outer_h, basis, y)
        tile_areas = [y_area(p.w, p.h, basis, y) for p in t.tiles]
    except NotInSpan as exc:
        return Refutation(RefutationKind.SIDES_NOT_IN_SPAN, {"detail": str(exc)})

    total = sum(tile_areas, Fraction(0))
    if outer != total:
        return Refutation(
            RefutationKind.ADDITIVITY_VIOLATED,
            {"y": str(y), "outer_y_area": str(outer), "tile_y_area_sum": str(total)},
        )

    raise RuntimeError(
        "no failure found in a claimed square tiling of an incommensurable "
        "rectangle; this contradicts the theorem and indicates a bug"
    )
