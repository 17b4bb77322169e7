"""Affine automorphism pairs: verification, iteration, and regularity.

An automorphism is a pair of polynomial maps ``(f, f_inv)`` of affine
n-space whose compositions are verified symbolically at construction; the
verification *is* the constructor.  The pair extends to projective space
as a pair of homogeneous maps whose first coordinate is ``x0**degree``
(``x0`` is the added hyperplane-at-infinity coordinate; it sits in slot 0
here, independent of how a source file orders its affine variables).

The regularity decision asks whether the two indeterminacy loci, both of
which live inside the hyperplane at infinity, are disjoint.  For n = 2
this reduces to a gcd of binary forms; for n = 3 joint emptiness in the
projective plane is decided exactly by checking whether some power of the
irrelevant ideal lies in the span of monomial shifts of the constraint
forms, up to the classical degree bound (3*max_degree - 2), which is a
complete criterion over the algebraic closure.  For n > 3 a seeded
Monte-Carlo search can certify "not regular" with a witness, else the
answer is reported as undetermined.

Automorphisms and their derived objects are immutable; orbits of distinct
points may be computed in parallel with no coordination.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Literal, Sequence

from . import kernel
from .polyring import Polynomial, coefficient_list, univariate_gcd

Direction = Literal["forward", "inverse"]

#: Per-integer bit-size cap for orbit coordinates (overridable everywhere).
DEFAULT_BIT_BUDGET = 2**20

REGULAR = "regular"
NOT_REGULAR = "not_regular"
UNDETERMINED = "undetermined"


class InverseVerificationError(ValueError):
    """The supplied pair fails to compose to the identity.

    Carries the offending coordinate index and the symbolic residual
    (composition coordinate minus the matching variable).
    """

    def __init__(self, order: str, coordinate: int, residual: Polynomial):
        self.order = order
        self.coordinate = coordinate
        self.residual = residual
        super().__init__(
            f"{order} is not the identity: coordinate {coordinate} "
            f"has residual {residual}"
        )


class IndeterminateEvaluationError(ValueError):
    """A homogeneous map was evaluated at a point of its indeterminacy locus."""


@dataclass(frozen=True)
class OrbitResult:
    """Orbit segment ``[P, f(P), ..., f^k(P)]`` with truncation metadata.

    ``truncated`` is set when the bit budget stopped iteration before the
    requested depth; ``completed_depth`` then reports the last index that
    was actually computed.
    """

    points: tuple[tuple[Fraction, ...], ...]
    requested_depth: int
    truncated: bool = False

    @property
    def completed_depth(self) -> int:
        return len(self.points) - 1

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, index):
        return self.points[index]


@dataclass(frozen=True)
class CycleResult:
    periodic: bool
    period: int | None
    searched_depth: int
    truncated: bool = False


@dataclass(frozen=True)
class HomogenizedMap:
    """Projective extension: ``n+1`` homogeneous coordinates of one degree.

    Slot 0 is ``x0**degree`` by convention; the remaining slots are the
    affine coordinates homogenized to the common degree.
    """

    coords: tuple[Polynomial, ...]
    degree: int

    def __post_init__(self):
        n1 = len(self.coords)
        x0_power = Polynomial.variable(n1, 0) ** self.degree
        if self.coords[0] != x0_power:
            raise ValueError("first homogeneous coordinate must be x0^degree")
        for poly in self.coords:
            if poly.nvars != n1:
                raise ValueError("homogeneous coordinates must have n+1 variables")
            if not poly.is_zero and not (
                poly.is_homogeneous() and poly.total_degree() == self.degree
            ):
                raise ValueError("coordinates must be homogeneous of the common degree")
        # A common factor would have to be a power of x0 (slot 0 is x0^d);
        # some affine coordinate attains the full degree, so none exists.
        if all(_x0_divides(poly) for poly in self.coords[1:]):
            raise ValueError("homogeneous coordinates share a factor of x0")

    @property
    def nvars(self) -> int:
        return len(self.coords)

    def apply_integer(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Image of a primitive integer point, reduced to primitive form."""
        if len(coords) != self.nvars:
            raise ValueError(f"expected {self.nvars} homogeneous coordinates")
        values = [poly.evaluate(coords) for poly in self.coords]
        den = 1
        for v in values:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in values]
        if all(v == 0 for v in ints):
            raise IndeterminateEvaluationError(
                f"map is undefined at {tuple(coords)}"
            )
        return kernel.normalize_projective(ints)


def _x0_divides(poly: Polynomial) -> bool:
    return all(exps[0] > 0 for exps in poly.terms) if not poly.is_zero else True


@dataclass(frozen=True)
class IndeterminacyLocus:
    """Data describing the locus at infinity where the extension is undefined.

    ``forms`` are the top-degree parts of the affine coordinates;
    ``coord_degrees`` their total degrees.  The zero set of the extension at
    infinity is cut out only by the forms of full degree (the others
    restrict to zero on the hyperplane at infinity), which
    ``constraint_forms`` returns.
    """

    forms: tuple[Polynomial, ...]
    coord_degrees: tuple[int, ...]
    degree: int

    def constraint_forms(self) -> tuple[Polynomial, ...]:
        return tuple(
            form
            for form, deg in zip(self.forms, self.coord_degrees)
            if deg == self.degree
        )


class AffineAutomorphism:
    """A verified polynomial automorphism pair of affine n-space.

    Construction composes both orders symbolically and refuses anything
    that is not exactly the identity, reporting the offending coordinate
    and residual.  ``d`` and ``d_inv`` are the maximal coordinate degrees
    of the forward and inverse maps.
    """

    def __init__(
        self,
        forward: Sequence[Polynomial],
        inverse: Sequence[Polynomial],
        names: Sequence[str] | None = None,
    ):
        forward = tuple(forward)
        inverse = tuple(inverse)
        if not forward or len(forward) != len(inverse):
            raise ValueError("forward and inverse must list the same number of coordinates")
        n = len(forward)
        for poly in (*forward, *inverse):
            if poly.nvars != n:
                raise ValueError("coordinate count and variable count must agree")
            if poly.is_zero:
                raise ValueError("automorphism coordinates cannot be zero")
        for order, outer, inner in (
            ("inverse o forward", inverse, forward),
            ("forward o inverse", forward, inverse),
        ):
            for j in range(n):
                residual = outer[j].compose(inner) - Polynomial.variable(n, j)
                if not residual.is_zero:
                    raise InverseVerificationError(order, j, residual)
        self.n = n
        self.forward = forward
        self.inverse = inverse
        self.d = max(p.total_degree() for p in forward)
        self.d_inv = max(p.total_degree() for p in inverse)
        self.names = tuple(names) if names is not None else tuple(
            f"x{i}" for i in range(n)
        )
        self._compiled: dict[str, kernel.CompiledMap] = {}
        self._homogenized: tuple[HomogenizedMap, HomogenizedMap] | None = None

    @classmethod
    def identity(cls, n: int) -> "AffineAutomorphism":
        coords = tuple(Polynomial.variable(n, i) for i in range(n))
        return cls(coords, coords)

    @property
    def degrees(self) -> tuple[int, int]:
        return (self.d, self.d_inv)

    def coordinates(self, direction: Direction) -> tuple[Polynomial, ...]:
        if direction == "forward":
            return self.forward
        if direction == "inverse":
            return self.inverse
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")

    def degree(self, direction: Direction) -> int:
        return self.d if direction == "forward" else self.d_inv

    def compiled(self, direction: Direction) -> kernel.CompiledMap:
        if direction not in self._compiled:
            self._compiled[direction] = kernel.compile_map(self.coordinates(direction))
        return self._compiled[direction]

    @property
    def map_id(self) -> str:
        """Stable 12-hex digest of the canonical coordinate serialization."""
        from .parsing import format_polynomial

        text = ";".join(
            format_polynomial(p, self.names) for p in (*self.forward, *self.inverse)
        )
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    # -- evaluation ----------------------------------------------------

    def apply(self, point: Sequence[Fraction | int], direction: Direction = "forward"):
        """Exact image of an affine rational point."""
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.n}")
        nums, den = kernel.to_common_denominator(point)
        nums, den = kernel.eval_point(self.compiled(direction), nums, den)
        return kernel.to_fractions(nums, den)

    def iterate_raw(
        self,
        point: Sequence[Fraction | int],
        depth: int,
        direction: Direction = "forward",
        bit_budget: int | None = None,
    ) -> tuple[list[tuple[tuple[int, ...], int]], bool]:
        """Orbit in common-denominator form: ``depth + 1`` raw points.

        Stops early (second return value True) as soon as any coordinate
        integer would exceed the bit budget.
        """
        if depth < 0:
            raise ValueError("depth must be >= 0")
        budget = DEFAULT_BIT_BUDGET if bit_budget is None else bit_budget
        cm = self.compiled(direction)
        nums, den = kernel.to_common_denominator(point)
        if kernel.max_bits(nums, den) > budget:
            raise ValueError("starting point already exceeds the bit budget")
        raw = [(nums, den)]
        for _ in range(depth):
            nums, den = kernel.eval_point(cm, nums, den)
            if kernel.max_bits(nums, den) > budget:
                return raw, True
            raw.append((nums, den))
        return raw, False

    def orbit(
        self,
        point: Sequence[Fraction | int],
        depth: int,
        direction: Direction = "forward",
        bit_budget: int | None = None,
    ) -> OrbitResult:
        """``[P, f(P), ..., f^depth(P)]`` with exact arithmetic."""
        raw, truncated = self.iterate_raw(point, depth, direction, bit_budget)
        points = tuple(kernel.to_fractions(nums, den) for nums, den in raw)
        return OrbitResult(points, depth, truncated)

    def detect_cycle(
        self,
        point: Sequence[Fraction | int],
        max_depth: int,
        bit_budget: int | None = None,
    ) -> CycleResult:
        """Exact-equality cycle detection along the forward orbit.

        For an automorphism the first repeat of the start point is the
        period, so only equality with the start is tested.
        """
        if max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        budget = DEFAULT_BIT_BUDGET if bit_budget is None else bit_budget
        cm = self.compiled("forward")
        start = kernel.to_common_denominator(point)
        nums, den = start
        for k in range(1, max_depth + 1):
            nums, den = kernel.eval_point(cm, nums, den)
            if (nums, den) == start:
                return CycleResult(True, k, k)
            if kernel.max_bits(nums, den) > budget:
                return CycleResult(False, None, k, truncated=True)
        return CycleResult(False, None, max_depth)

    # -- projective extension -------------------------------------------

    def homogenized_pair(self) -> tuple[HomogenizedMap, HomogenizedMap]:
        """The pair of projective extensions, of degrees ``d`` and ``d_inv``."""
        if self._homogenized is None:
            self._homogenized = (
                _homogenize_coords(self.forward, self.d),
                _homogenize_coords(self.inverse, self.d_inv),
            )
        return self._homogenized


def build_automorphism(
    forward: Sequence[Polynomial],
    inverse: Sequence[Polynomial],
    names: Sequence[str] | None = None,
) -> AffineAutomorphism:
    """Verify and package an automorphism pair (see ``AffineAutomorphism``)."""
    return AffineAutomorphism(forward, inverse, names)


def _homogenize_coords(coords: Sequence[Polynomial], degree: int) -> HomogenizedMap:
    n1 = coords[0].nvars + 1
    slot0 = Polynomial.variable(n1, 0) ** degree
    return HomogenizedMap(
        (slot0,) + tuple(p.homogenize(degree) for p in coords), degree
    )


def indeterminacy_locus(extension: HomogenizedMap) -> IndeterminacyLocus:
    """Locus data of a projective extension (restriction to x0 = 0).

    Recovers the affine coordinates by setting ``x0 = 1`` and stores their
    top-degree parts; only the full-degree ones constrain the zero set at
    infinity.
    """
    n = extension.nvars - 1
    substitution = [Polynomial.constant(n, 1)] + [
        Polynomial.variable(n, i) for i in range(n)
    ]
    forms = []
    degrees = []
    for poly in extension.coords[1:]:
        affine = poly.compose(substitution)
        forms.append(affine.leading_form())
        degrees.append(affine.total_degree())
    return IndeterminacyLocus(tuple(forms), tuple(degrees), extension.degree)


# -- regularity ---------------------------------------------------------


@dataclass(frozen=True)
class RegularityResult:
    """Verdict plus certificate for the joint-indeterminacy decision.

    ``witness`` (when present) is a projective point on the hyperplane at
    infinity, written with the leading 0 slot: ``(0, w1, ..., wn)``.
    """

    verdict: str
    method: str
    witness: tuple[int, ...] | None = None
    details: dict = field(default_factory=dict)


def is_regular(
    automorphism: AffineAutomorphism,
    seed: int = 0,
    mc_trials: int = 5000,
    witness_bound: int = 6,
) -> RegularityResult:
    """Decide whether the two indeterminacy loci are disjoint.

    Exact for n in {2, 3}; for larger n a seeded Monte-Carlo search either
    produces a witness (not regular) or returns undetermined.
    """
    n = automorphism.n
    if n < 2:
        raise ValueError("regularity is defined for dimension >= 2")
    phi, psi = automorphism.homogenized_pair()
    constraints = (
        indeterminacy_locus(phi).constraint_forms()
        + indeterminacy_locus(psi).constraint_forms()
    )
    if n == 2:
        empty, details = _p1_system_empty(constraints)
        method = "binary-form-gcd"
    elif n == 3:
        empty, details = _p2_system_empty(constraints)
        method = "irrelevant-power-elimination"
    else:
        witness = _monte_carlo_witness(constraints, n, seed, mc_trials)
        if witness is not None:
            return RegularityResult(
                NOT_REGULAR,
                "monte-carlo",
                witness=(0, *witness),
                details={"trials": mc_trials, "seed": seed},
            )
        return RegularityResult(
            UNDETERMINED, "monte-carlo", details={"trials": mc_trials, "seed": seed}
        )
    if empty:
        return RegularityResult(REGULAR, method, details=details)
    witness = _search_projective_witness(constraints, n, witness_bound)
    if witness is not None:
        details = dict(details, witness_verified=True)
        return RegularityResult(NOT_REGULAR, method, witness=(0, *witness), details=details)
    details = dict(details, witness_search_bound=witness_bound)
    return RegularityResult(NOT_REGULAR, method, details=details)


def _p1_system_empty(forms: Sequence[Polynomial]) -> tuple[bool, dict]:
    """Emptiness in P^1 of a system of binary forms, via univariate gcd."""
    active = [f for f in forms if not f.is_zero]
    if not active:
        return False, {"reason": "no constraints"}
    # Chart x1 != 0: dehomogenize at x1 = 1 and take the running gcd.
    n = active[0].nvars
    one = Polynomial.constant(n, 1)
    chart = [Polynomial.variable(n, 0), one]
    running: list[Fraction] | None = None
    for form in active:
        coeffs = coefficient_list(form.compose(chart), 0)
        running = coeffs if running is None else univariate_gcd(running, coeffs)
    finite_zero = len(running) > 1  # nonconstant gcd has a root over Qbar
    at_infinity = all(form.evaluate((1, 0)) == 0 for form in active)
    empty = not finite_zero and not at_infinity
    return empty, {"gcd_degree": len(running) - 1, "zero_at_(1:0)": at_infinity}


def _monomials(degree: int, nvars: int) -> list[tuple[int, ...]]:
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in _monomials(degree - first, nvars - 1):
            out.append((first, *rest))
    return out


def _p2_system_empty(forms: Sequence[Polynomial]) -> tuple[bool, dict]:
    """Emptiness in P^2 over the algebraic closure.

    The system is empty iff every monomial of some degree N lies in the
    span of the monomial shifts of the forms; if the variety is empty this
    happens by N = 3*max_degree - 2 (Macaulay bound applied to three
    generic members of the degree-capped system), so scanning up to that
    bound is a complete decision.
    """
    active = [f for f in forms if not f.is_zero]
    if not active:
        return False, {"reason": "no constraints"}
    if len(active) < 3:
        # Two hypersurfaces in the projective plane always intersect.
        return False, {"reason": "fewer than three constraints"}
    degrees = [f.total_degree() for f in active]
    dmax = max(degrees)
    bound = 3 * dmax - 2
    for target in range(dmax, bound + 1):
        if _spans_all_monomials(active, degrees, target):
            return True, {"saturation_degree": target, "bound": bound}
    return False, {"reason": "no saturation up to the degree bound", "bound": bound}


def _spans_all_monomials(
    forms: Sequence[Polynomial], degrees: Sequence[int], target: int
) -> bool:
    nvars = forms[0].nvars
    basis = {mono: i for i, mono in enumerate(_monomials(target, nvars))}
    rows: list[list[int]] = []
    for form, deg in zip(forms, degrees):
        denom = 1
        for coeff in form.terms.values():
            denom = denom * coeff.denominator // gcd(denom, coeff.denominator)
        int_terms = [(int(c * denom), e) for e, c in form.terms.items()]
        for shift in _monomials(target - deg, nvars):
            row = [0] * len(basis)
            for coeff, exps in int_terms:
                mono = tuple(a + b for a, b in zip(exps, shift))
                row[basis[mono]] = coeff
            rows.append(row)
    return _integer_rank(rows) == len(basis)


def _integer_rank(rows: list[list[int]]) -> int:
    """Row rank over Q by fraction-free elimination with content reduction."""
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while col < ncols and rank < len(rows):
        pivot_row = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            entry = rows[r][col]
            if not entry:
                continue
            new_row = [pivot * a - entry * b for a, b in zip(rows[r], rows[rank])]
            content = 0
            for value in new_row:
                content = gcd(content, value)
                if content == 1:
                    break
            if content > 1:
                new_row = [value // content for value in new_row]
            rows[r] = new_row
        rank += 1
        col += 1
    return rank


def _search_projective_witness(
    forms: Sequence[Polynomial], n: int, bound: int
) -> tuple[int, ...] | None:
    """Small rational projective point killing every constraint, if any."""
    active = [f for f in forms if not f.is_zero]
    for cand in itertools.product(range(-bound, bound + 1), repeat=n):
        if all(c == 0 for c in cand):
            continue
        point = kernel.normalize_projective(cand)
        if point != cand:
            continue  # enumerate each projective point once
        if all(form.evaluate(point) == 0 for form in active):
            return point
    return None


def _monte_carlo_witness(
    forms: Sequence[Polynomial], n: int, seed: int, trials: int
) -> tuple[int, ...] | None:
    active = [f for f in forms if not f.is_zero]
    rng = random.Random(seed)
    for _ in range(trials):
        cand = tuple(rng.randint(-5, 5) for _ in range(n))
        if all(c == 0 for c in cand):
            continue
        if all(form.evaluate(cand) == 0 for form in active):
            return kernel.normalize_projective(cand)
    return None
