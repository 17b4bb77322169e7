# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled evaluation kernel for integer-cleared polynomial maps.

Semantics are identical to ``affdyn._kernel_py``; the win comes from
compiling the inner term loops (coefficients stay arbitrary-precision
Python integers).
"""

from math import gcd


def eval_map(terms, denoms, degs, max_exps, nums, den):
    """Evaluate a compiled polynomial map at the point ``nums / den``.

    See ``affdyn._kernel_py.eval_map`` for the contract; this is the
    compiled twin selected by ``affdyn.kernel`` when available.
    """
    cdef Py_ssize_t nvars = len(nums)
    cdef Py_ssize_t ncoords = len(terms)
    cdef Py_ssize_t i, j, k, e, s, deg_j, dmax, me

    pows = []
    for i in range(nvars):
        me = max_exps[i]
        row = [1] * (me + 1)
        value = nums[i]
        for k in range(1, me + 1):
            row[k] = row[k - 1] * value
        pows.append(row)

    dmax = 0
    for j in range(ncoords):
        k = degs[j]
        if k > dmax:
            dmax = k
    denp = [1] * (dmax + 1)
    for k in range(1, dmax + 1):
        denp[k] = denp[k - 1] * den

    red_nums = [0] * ncoords
    red_dens = [1] * ncoords
    for j in range(ncoords):
        acc = 0
        deg_j = degs[j]
        for coeff, exps in terms[j]:
            t = coeff
            s = 0
            for i in range(nvars):
                e = exps[i]
                if e:
                    t = t * pows[i][e]
                    s += e
            if deg_j > s:
                t = t * denp[deg_j - s]
            acc = acc + t
        raw_den = denoms[j] * denp[deg_j]
        g = gcd(acc, raw_den)
        red_nums[j] = acc // g
        red_dens[j] = raw_den // g

    new_den = 1
    for j in range(ncoords):
        dj = red_dens[j]
        new_den = new_den // gcd(new_den, dj) * dj
    out = []
    for j in range(ncoords):
        out.append(red_nums[j] * (new_den // red_dens[j]))
    return tuple(out), new_den
