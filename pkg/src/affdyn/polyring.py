"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in ``nvars`` variables is a finite map from exponent tuples
(one non-negative integer per variable) to nonzero ``Fraction``
coefficients.  The zero polynomial is the empty map.  Coefficients are
exact rationals throughout; nothing in this module touches floating point.

Canonical term order for display and serialization is graded
lexicographic: higher total degree first, ties broken lexicographically on
the exponent tuple.  All values are immutable after construction and safe
to share between threads.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence, Union

Scalar = Union[int, Fraction]
Exponents = tuple  # tuple[int, ...], one entry per variable


class ZeroPolynomialError(ValueError):
    """Raised by operations that are undefined for the zero polynomial."""


def _grlex_key(exps: Exponents):
    return (sum(exps), exps)


class Polynomial:
    """A sparse polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples to nonzero coefficients; the constructor
    validates exponent lengths, coerces coefficients to ``Fraction`` and
    prunes zeros.  Instances must not be mutated after construction.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponents, Scalar] | None = None):
        if nvars < 0:
            raise ValueError(f"variable count must be >= 0, got {nvars}")
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(
                    f"exponent tuple {exps} has length {len(exps)}, expected {nvars}"
                )
            if any(e < 0 or not isinstance(e, int) for e in exps):
                raise ValueError(f"exponents must be non-negative integers: {exps}")
            coeff = Fraction(coeff)
            if coeff:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
                if not clean[exps]:
                    del clean[exps]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def _make(cls, nvars: int, terms: dict[Exponents, Fraction]) -> "Polynomial":
        """Internal fast path: ``terms`` must already be canonical."""
        self = object.__new__(cls)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", terms)
        return self

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._make(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value: Scalar) -> "Polynomial":
        value = Fraction(value)
        if not value:
            return cls.zero(nvars)
        return cls._make(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls._make(nvars, {exps: Fraction(1)})

    # -- basic structure ----------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {self!s})"

    def __str__(self) -> str:
        from .parsing import format_polynomial

        return format_polynomial(self)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(
                    f"variable count mismatch: {self.nvars} vs {other.nvars}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps, Fraction(0)) + coeff
            if acc:
                out[exps] = acc
            elif exps in out:
                del out[exps]
        return Polynomial._make(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._make(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Polynomial.zero(self.nvars)
        out: dict[Exponents, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(exps, Fraction(0)) + ca * cb
                if acc:
                    out[exps] = acc
                elif exps in out:
                    del out[exps]
        return Polynomial._make(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {exponent}")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- degree structure ---------------------------------------------

    def total_degree(self) -> int:
        """Maximum exponent sum over all terms; undefined for zero."""
        if self.is_zero:
            raise ZeroPolynomialError("total degree of the zero polynomial is undefined")
        return max(sum(e) for e in self.terms)

    def leading_form(self) -> "Polynomial":
        """Sum of the terms of maximal total degree."""
        d = self.total_degree()
        return Polynomial._make(
            self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d}
        )

    def degree_in(self, var: int) -> int:
        """Largest exponent of variable ``var``; undefined for zero."""
        if self.is_zero:
            raise ZeroPolynomialError("degree of the zero polynomial is undefined")
        return max(e[var] for e in self.terms)

    def coefficients_in(self, var: int) -> list["Polynomial"]:
        """Coefficients of powers of ``var``, as polynomials with the
        ``var`` slot zeroed; entry ``k`` multiplies ``var**k``."""
        if self.is_zero:
            return [Polynomial.zero(self.nvars)]
        deg = self.degree_in(var)
        rows: list[dict[Exponents, Fraction]] = [dict() for _ in range(deg + 1)]
        for exps, coeff in self.terms.items():
            reduced = tuple(0 if i == var else e for i, e in enumerate(exps))
            rows[exps[var]][reduced] = coeff
        return [Polynomial._make(self.nvars, row) for row in rows]

    def is_homogeneous(self) -> bool:
        if self.is_zero:
            return True
        degrees = {sum(e) for e in self.terms}
        return len(degrees) == 1

    # -- substitution -------------------------------------------------

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        """Exact value at a rational point (length must equal ``nvars``)."""
        if len(point) != self.nvars:
            raise ValueError(f"point has length {len(point)}, expected {self.nvars}")
        values = [Fraction(v) for v in point]
        powers: dict[tuple[int, int], Fraction] = {}

        def power(i: int, e: int) -> Fraction:
            key = (i, e)
            if key not in powers:
                powers[key] = values[i] ** e
            return powers[key]

        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for i, e in enumerate(exps):
                if e:
                    term *= power(i, e)
            total += term
        return total

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``subs[i]`` for variable ``i`` and expand fully.

        All substituents must share a common variable count ``m``; the
        result is a polynomial in ``m`` variables.
        """
        if len(subs) != self.nvars:
            raise ValueError(f"expected {self.nvars} substituents, got {len(subs)}")
        if self.nvars == 0:
            return Polynomial._make(0, dict(self.terms))
        m = subs[0].nvars
        for s in subs:
            if s.nvars != m:
                raise ValueError("substituents must share a common variable count")
        # Cache powers of each substituent up to the largest exponent used.
        caches: list[list[Polynomial]] = [[Polynomial.constant(m, 1)] for _ in subs]

        def power(i: int, e: int) -> Polynomial:
            cache = caches[i]
            while len(cache) <= e:
                cache.append(cache[-1] * subs[i])
            return cache[e]

        total = Polynomial.zero(m)
        for exps, coeff in self.terms.items():
            term = Polynomial.constant(m, coeff)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def homogenize(self, target_degree: int) -> "Polynomial":
        """Homogenize to ``target_degree`` with a fresh variable in slot 0.

        Each term is multiplied by ``x0**(target_degree - term degree)``;
        the result has ``nvars + 1`` variables and is homogeneous of the
        target degree.
        """
        if not self.is_zero and target_degree < self.total_degree():
            raise ValueError(
                f"target degree {target_degree} is below the total degree "
                f"{self.total_degree()}"
            )
        out = {
            (target_degree - sum(exps),) + exps: coeff
            for exps, coeff in self.terms.items()
        }
        return Polynomial._make(self.nvars + 1, out)


# -- resultants --------------------------------------------------------


def resultant(p: Polynomial, q: Polynomial, var: int) -> Polynomial:
    """Resultant of ``p`` and ``q`` with respect to variable ``var``.

    Computed as the Sylvester-matrix determinant with no sign or power
    normalization.  Degenerate convention: if ``p`` has degree 0 in ``var``
    the result is ``p**deg_var(q)`` (and symmetrically); it is an error for
    ``var`` to be absent from both inputs.
    """
    if p.is_zero or q.is_zero:
        raise ZeroPolynomialError("resultant of the zero polynomial is undefined")
    m = p.degree_in(var)
    n = q.degree_in(var)
    if m == 0 and n == 0:
        raise ValueError(f"variable {var} is absent from both inputs")
    if m == 0:
        return p**n
    if n == 0:
        return q**m
    pc = p.coefficients_in(var)
    qc = q.coefficients_in(var)
    size = m + n
    zero = Polynomial.zero(p.nvars)
    rows: list[list[Polynomial]] = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + k] = pc[m - k]
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + k] = qc[n - k]
        rows.append(row)
    return _determinant(rows)


def _determinant(matrix: list[list[Polynomial]]) -> Polynomial:
    """Determinant of a square polynomial matrix by expansion along rows,
    memoized on the set of unused columns (division-free)."""
    size = len(matrix)
    nvars = matrix[0][0].nvars
    memo: dict[int, Polynomial] = {}

    def minor(row: int, mask: int) -> Polynomial:
        if row == size:
            return Polynomial.constant(nvars, 1)
        if mask in memo:
            return memo[mask]
        acc = Polynomial.zero(nvars)
        sign = 1
        for col in range(size):
            bit = 1 << col
            if not mask & bit:
                continue
            entry = matrix[row][col]
            if not entry.is_zero:
                sub = minor(row + 1, mask & ~bit)
                acc = acc + (entry * sub if sign > 0 else -(entry * sub))
            sign = -sign
        memo[mask] = acc
        return acc

    return minor(0, (1 << size) - 1)


# -- univariate helpers (used by the regularity decision) --------------


def coefficient_list(p: Polynomial, var: int) -> list[Fraction]:
    """Coefficient list of a polynomial that is univariate in ``var``
    (constant term first).  Raises if any other variable occurs."""
    if p.is_zero:
        return []
    out = [Fraction(0)] * (p.degree_in(var) + 1)
    for exps, coeff in p.terms.items():
        if any(e and i != var for i, e in enumerate(exps)):
            raise ValueError(f"polynomial is not univariate in variable {var}")
        out[exps[var]] = coeff
    return out


def univariate_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd of two univariate coefficient lists (constant term first).

    Returns ``[]`` for gcd(0, 0); a unit gcd comes back as ``[1]``.
    """

    def trim(c: list[Fraction]) -> list[Fraction]:
        while c and not c[-1]:
            c.pop()
        return c

    ra = trim([Fraction(c) for c in a])
    rb = trim([Fraction(c) for c in b])
    while rb:
        # remainder of ra modulo rb
        rem = list(ra)
        while len(rem) >= len(rb) and trim(rem):
            shift = len(rem) - len(rb)
            factor = rem[-1] / rb[-1]
            for i, c in enumerate(rb):
                rem[i + shift] -= factor * c
            rem = trim(rem)
        ra, rb = rb, rem
    if not ra:
        return []
    lead = ra[-1]
    return [c / lead for c in ra]
