"""Divisor-coefficient ledger for blowup resolutions of automorphism pairs.

The divisor class group of a blowup obtained by a chain of monoidal
transformations is the free abelian group on the proper transform of the
hyperplane at infinity together with the exceptional divisors.  A
``ResolutionDatum`` records, for one side of an automorphism pair, the
coefficient vectors of the two relevant pullbacks of the hyperplane class
over that basis:

    blowdown pullback:  a = (1; a_1 ... a_k)    with a_t = degree_other,
    map pullback:       b = (degree_own; b_1 ... b_k)  with b_t = 1,

where ``t`` marks the essential exceptional divisor (the unique one whose
pushforward is the hyperplane class).  The validator checks each law
independently and reports violations as data:

    blowdown-normalization        a_0 == 1
    map-degree                    b_0 == degree_own
    essential-map-coefficient     b_t == 1
    essential-blowdown-coefficient a_t == degree_other
    map-positivity                b_i >= 1 for every exceptional index
    blowdown-nonnegativity        a_i >= 0 for i != t
    effectivity-inequality        degree_other * b_i >= a_i for i != t

Coefficient tables are ledger inputs (computing them from blowup geometry
is out of scope); the bundled dataset ships the tables for the degree-2
three-variable Henon automorphism.  Combining the two sides produces the
three pullbacks on a common blowup, and the rational divisor class

    D = (1/d) phi*H + (1/d') psi*H - (1 + 1/(d d')) pi*H

is effective exactly when the effectivity inequalities hold; its closed
forms (hyperplane coefficient ``1 - 1/(d d')``, exceptional coefficients
``(d' b_i - a_i)/(d d')`` and mirrored) serve as an independent oracle in
the tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence


class DatumError(ValueError):
    """Structurally unusable ledger input (not a mere law violation)."""


@dataclass(frozen=True)
class PicBasis:
    """Ordered divisor labels: hyperplane transform first, then exceptionals."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise DatumError("empty basis")
        if len(set(self.labels)) != len(self.labels):
            raise DatumError("duplicate divisor label")

    @property
    def rank(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class DivisorClass:
    """Coefficient vector over a basis; rational coefficients allowed."""

    basis: PicBasis
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.basis.rank:
            raise DatumError(
                f"{len(self.coeffs)} coefficients over a rank-{self.basis.rank} basis"
            )

    @classmethod
    def make(cls, basis: PicBasis, coeffs: Sequence) -> "DivisorClass":
        return cls(basis, tuple(Fraction(c) for c in coeffs))

    def scale(self, factor) -> "DivisorClass":
        factor = Fraction(factor)
        return DivisorClass(self.basis, tuple(factor * c for c in self.coeffs))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if self.basis != other.basis:
            raise DatumError("divisor classes over different bases")
        return DivisorClass(
            self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + other.scale(-1)

    def as_text(self) -> str:
        pieces = [f"{c}*{label}" for label, c in zip(self.basis.labels, self.coeffs)]
        return " + ".join(pieces)


@dataclass(frozen=True)
class PushforwardMap:
    """Pushforward to the rank-1 group of projective space.

    ``multiples[i]`` is the multiple of the hyperplane class that basis
    element ``i`` maps to; the hyperplane-transform slot must map to 0.
    """

    multiples: tuple[int, ...]

    def __post_init__(self):
        if self.multiples[0] != 0:
            raise DatumError("the hyperplane transform must push forward to 0")
        if any(s < 0 for s in self.multiples):
            raise DatumError("pushforward multiples must be non-negative")

    def apply(self, divisor: DivisorClass) -> Fraction:
        if len(self.multiples) != divisor.basis.rank:
            raise DatumError("pushforward rank mismatch")
        return sum(
            (s * c for s, c in zip(self.multiples, divisor.coeffs)), Fraction(0)
        )


@dataclass(frozen=True)
class ResolutionDatum:
    """Coefficient tables for one side of the pair (see module docstring)."""

    side: str  # "forward" or "inverse"
    degree_own: int
    degree_other: int
    basis: PicBasis
    a: tuple[int, ...]  # blowdown pullback of H
    b: tuple[int, ...]  # map pullback of H
    t: int  # essential index, 1-based over the exceptionals
    pushforward: PushforwardMap | None = None
    name: str | None = None

    def __post_init__(self):
        if self.side not in ("forward", "inverse"):
            raise DatumError(f"side must be 'forward' or 'inverse', got {self.side!r}")
        rank = self.basis.rank
        if len(self.a) != rank or len(self.b) != rank:
            raise DatumError("coefficient vectors must match the basis rank")
        if not 1 <= self.t < rank:
            raise DatumError(f"essential index {self.t} out of range")
        if self.degree_own < 1 or self.degree_other < 1:
            raise DatumError("degrees must be >= 1")
        if self.pushforward is not None and len(self.pushforward.multiples) != rank:
            raise DatumError("pushforward rank mismatch")

    @property
    def k(self) -> int:
        return self.basis.rank - 1


@dataclass(frozen=True)
class Violation:
    law: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    datum_name: str | None
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_resolution(datum: ResolutionDatum) -> ValidationReport:
    """Check every ledger law independently; violations are data."""
    labels = datum.basis.labels
    out: list[Violation] = []
    if datum.a[0] != 1:
        out.append(
            Violation(
                "blowdown-normalization",
                f"{labels[0]} coefficient of the blowdown pullback is {datum.a[0]}, expected 1",
            )
        )
    if datum.b[0] != datum.degree_own:
        out.append(
            Violation(
                "map-degree",
                f"{labels[0]} coefficient of the map pullback is {datum.b[0]}, "
                f"expected the map degree {datum.degree_own}",
            )
        )
    if datum.b[datum.t] != 1:
        out.append(
            Violation(
                "essential-map-coefficient",
                f"essential divisor {labels[datum.t]} has map-pullback coefficient "
                f"{datum.b[datum.t]}, expected 1",
            )
        )
    if datum.a[datum.t] != datum.degree_other:
        out.append(
            Violation(
                "essential-blowdown-coefficient",
                f"essential divisor {labels[datum.t]} has blowdown-pullback coefficient "
                f"{datum.a[datum.t]}, expected the other degree {datum.degree_other}",
            )
        )
    for i in range(1, datum.basis.rank):
        if datum.b[i] < 1:
            out.append(
                Violation(
                    "map-positivity",
                    f"map-pullback coefficient of {labels[i]} is {datum.b[i]}, expected >= 1",
                )
            )
    for i in range(1, datum.basis.rank):
        if i == datum.t:
            continue
        if datum.a[i] < 0:
            out.append(
                Violation(
                    "blowdown-nonnegativity",
                    f"blowdown-pullback coefficient of {labels[i]} is {datum.a[i]}, expected >= 0",
                )
            )
        if datum.degree_other * datum.b[i] < datum.a[i]:
            out.append(
                Violation(
                    "effectivity-inequality",
                    f"{labels[i]}: {datum.degree_other}*{datum.b[i]} < {datum.a[i]} "
                    f"(need degree_other * b >= a off the essential index)",
                )
            )
    return ValidationReport(datum.name, tuple(out))


def find_essential(
    b: Sequence[int], pushforward: PushforwardMap | Sequence[int]
) -> int:
    """The unique exceptional index with ``s_t * b_t == 1``.

    Raises ``DatumError`` when there is no candidate (the push-pull
    identity could not hold) or more than one (inconsistent input).
    """
    if not isinstance(pushforward, PushforwardMap):
        pushforward = PushforwardMap(tuple(pushforward))
    s = pushforward.multiples
    if len(s) != len(b):
        raise DatumError("pushforward and coefficient vector lengths differ")
    candidates = [i for i in range(1, len(b)) if s[i] * b[i] == 1]
    if len(candidates) != 1:
        raise DatumError(
            f"expected exactly one essential index, found {len(candidates)} "
            f"(pushforward of the map pullback must be the hyperplane class)"
        )
    return candidates[0]


def check_pushpull_identity(
    datum: ResolutionDatum, pushforward: PushforwardMap | Sequence[int] | None = None
) -> bool:
    """Push the map pullback forward: the result must be exactly 1 * H."""
    if pushforward is None:
        pushforward = datum.pushforward
    if pushforward is None:
        raise DatumError("no pushforward data supplied")
    if not isinstance(pushforward, PushforwardMap):
        pushforward = PushforwardMap(tuple(pushforward))
    total = sum(s * c for s, c in zip(pushforward.multiples, datum.b))
    return total == 1


# -- combination and the effective divisor ------------------------------


@dataclass(frozen=True)
class CombinedResolution:
    """Both sides on one blowup: basis and the three hyperplane pullbacks."""

    basis: PicBasis
    d: int
    d_inv: int
    blowdown_pullback: DivisorClass  # pi*H
    forward_pullback: DivisorClass  # phi*H
    inverse_pullback: DivisorClass  # psi*H
    essential_forward: int  # index of the forward essential in the basis
    essential_inverse: int


def combine_resolutions(
    forward: ResolutionDatum, inverse: ResolutionDatum
) -> CombinedResolution:
    """Assemble the common-blowup pullbacks from the two sides.

    The exceptional blocks are taken from the data; the hyperplane
    coefficients (1, d, d') are structural.  The degree conventions of the
    two sides must mirror each other.
    """
    if (
        forward.degree_own != inverse.degree_other
        or forward.degree_other != inverse.degree_own
    ):
        raise DatumError(
            f"degree mismatch: forward ({forward.degree_own}, {forward.degree_other}) "
            f"vs inverse ({inverse.degree_own}, {inverse.degree_other})"
        )
    d = forward.degree_own
    d_inv = inverse.degree_own
    labels = ("H",) + forward.basis.labels[1:] + inverse.basis.labels[1:]
    basis = PicBasis(labels)
    k = forward.k
    e_block_a = list(forward.a[1:])
    f_block_a = list(inverse.a[1:])
    e_block_b = list(forward.b[1:])
    f_block_b = list(inverse.b[1:])

    pi = DivisorClass.make(basis, [1, *e_block_a, *f_block_a])
    phi = DivisorClass.make(
        basis, [d, *e_block_b, *(d * c for c in f_block_a)]
    )
    psi = DivisorClass.make(
        basis, [d_inv, *(d_inv * c for c in e_block_a), *f_block_b]
    )
    return CombinedResolution(
        basis=basis,
        d=d,
        d_inv=d_inv,
        blowdown_pullback=pi,
        forward_pullback=phi,
        inverse_pullback=psi,
        essential_forward=forward.t,
        essential_inverse=k + inverse.t,
    )


def compute_D(combined: CombinedResolution) -> DivisorClass:
    """The rational divisor class whose effectivity carries the inequality:

        D = (1/d) phi*H + (1/d') psi*H - (1 + 1/(d d')) pi*H.
    """
    d = Fraction(combined.d)
    d_inv = Fraction(combined.d_inv)
    return (
        combined.forward_pullback.scale(1 / d)
        + combined.inverse_pullback.scale(1 / d_inv)
        - combined.blowdown_pullback.scale(1 + 1 / (d * d_inv))
    )


@dataclass(frozen=True)
class EffectivityResult:
    effective: bool
    first_negative: str | None = None
    coefficient: Fraction | None = None


def check_effective(divisor: DivisorClass) -> EffectivityResult:
    """Effective iff every coefficient is >= 0; reports the first failure."""
    for label, coeff in zip(divisor.basis.labels, divisor.coeffs):
        if coeff < 0:
            return EffectivityResult(False, label, coeff)
    return EffectivityResult(True)


# -- datum files ---------------------------------------------------------

_REQUIRED_KEYS = {
    "side",
    "labels",
    "degree_own",
    "degree_other",
    "blowdown_pullback",
    "map_pullback",
    "essential_index",
}
_OPTIONAL_KEYS = {"pushforward", "name"}


def datum_from_dict(data: dict) -> ResolutionDatum:
    keys = set(data)
    missing = _REQUIRED_KEYS - keys
    unknown = keys - _REQUIRED_KEYS - _OPTIONAL_KEYS
    if missing:
        raise DatumError(f"missing keys: {sorted(missing)}")
    if unknown:
        raise DatumError(f"unknown keys: {sorted(unknown)}")
    pushforward = None
    if data.get("pushforward") is not None:
        pushforward = PushforwardMap(tuple(int(s) for s in data["pushforward"]))
    return ResolutionDatum(
        side=data["side"],
        degree_own=int(data["degree_own"]),
        degree_other=int(data["degree_other"]),
        basis=PicBasis(tuple(str(x) for x in data["labels"])),
        a=tuple(int(x) for x in data["blowdown_pullback"]),
        b=tuple(int(x) for x in data["map_pullback"]),
        t=int(data["essential_index"]),
        pushforward=pushforward,
        name=data.get("name"),
    )


def datum_to_dict(datum: ResolutionDatum) -> dict:
    out = {
        "side": datum.side,
        "labels": list(datum.basis.labels),
        "degree_own": datum.degree_own,
        "degree_other": datum.degree_other,
        "blowdown_pullback": list(datum.a),
        "map_pullback": list(datum.b),
        "essential_index": datum.t,
    }
    if datum.pushforward is not None:
        out["pushforward"] = list(datum.pushforward.multiples)
    if datum.name is not None:
        out["name"] = datum.name
    return out


def load_datum(path) -> ResolutionDatum:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DatumError(f"{path}: {exc}") from None
    return datum_from_dict(data)


def bundled_dataset() -> tuple[ResolutionDatum, ResolutionDatum]:
    """The shipped coefficient tables for the degree-2 Henon automorphism
    of affine 3-space (forward side, inverse side)."""
    data_dir = Path(__file__).parent / "data"
    return (
        load_datum(data_dir / "henon3_resolution_forward.json"),
        load_datum(data_dir / "henon3_resolution_inverse.json"),
    )
