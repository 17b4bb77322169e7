"""Independent oracles the tests check the library against.

These deliberately take different computational routes from the package:
dense-array polynomial arithmetic, Horner-style evaluation, a Leibniz
(permutation-sum) Sylvester determinant, and brute-force grid searches.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from affdyn.polyring import Polynomial


def to_dense(p: Polynomial) -> np.ndarray:
    shape = tuple(
        max((exps[i] for exps in p.terms), default=0) + 1 for i in range(p.nvars)
    )
    arr = np.zeros(shape, dtype=object)
    for exps, coeff in p.terms.items():
        arr[exps] = coeff
    return arr


def from_dense(arr: np.ndarray, nvars: int) -> Polynomial:
    terms = {}
    for idx in np.ndindex(arr.shape):
        if arr[idx]:
            terms[idx] = Fraction(arr[idx])
    return Polynomial(nvars, terms)


def _pad(arr: np.ndarray, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=object)
    out[tuple(slice(0, s) for s in arr.shape)] += arr
    return out


def dense_add(p: Polynomial, q: Polynomial) -> Polynomial:
    a, b = to_dense(p), to_dense(q)
    shape = tuple(max(x, y) for x, y in zip(a.shape, b.shape))
    return from_dense(_pad(a, shape) + _pad(b, shape), p.nvars)


def dense_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    a, b = to_dense(p), to_dense(q)
    shape = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
    out = np.zeros(shape, dtype=object)
    for ia in np.ndindex(a.shape):
        if not a[ia]:
            continue
        for ib in np.ndindex(b.shape):
            if b[ib]:
                out[tuple(x + y for x, y in zip(ia, ib))] += a[ia] * b[ib]
    return from_dense(out, p.nvars)


def horner_eval(p: Polynomial, point) -> Fraction:
    """Evaluate via nested Horner schemes, one variable at a time."""
    values = [Fraction(v) for v in point]

    def recurse(poly: Polynomial, var: int) -> Fraction:
        if var < 0:
            return poly.terms.get((0,) * poly.nvars, Fraction(0))
        if poly.is_zero:
            return Fraction(0)
        coeffs = poly.coefficients_in(var)
        acc = Fraction(0)
        for layer in reversed(coeffs):
            acc = acc * values[var] + recurse(layer, var - 1)
        return acc

    return recurse(p, p.nvars - 1)


def leibniz_resultant(p: Polynomial, q: Polynomial, var: int) -> Polynomial:
    """Sylvester determinant by the permutation-sum formula."""
    m = p.degree_in(var)
    n = q.degree_in(var)
    pc = p.coefficients_in(var)
    qc = q.coefficients_in(var)
    size = m + n
    zero = Polynomial.zero(p.nvars)
    matrix = [[zero] * size for _ in range(size)]
    for i in range(n):
        for k in range(m + 1):
            matrix[i][i + k] = pc[m - k]
    for i in range(m):
        for k in range(n + 1):
            matrix[n + i][i + k] = qc[n - k]
    total = Polynomial.zero(p.nvars)
    for perm in itertools.permutations(range(size)):
        sign = _parity(perm)
        prod = Polynomial.constant(p.nvars, sign)
        for row, col in enumerate(perm):
            prod = prod * matrix[row][col]
            if prod.is_zero:
                break
        total = total + prod
    return total


def _parity(perm) -> int:
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        node = start
        while not seen[node]:
            seen[node] = True
            node = perm[node]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def grid_common_zeros(forms, grid) -> list[tuple]:
    """All points of the finite grid killing every form."""
    out = []
    for cand in itertools.product(grid, repeat=forms[0].nvars):
        if all(f.evaluate(cand) == 0 for f in forms):
            out.append(cand)
    return out
