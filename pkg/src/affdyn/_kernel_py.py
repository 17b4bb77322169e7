"""Pure-Python evaluation kernel for integer-cleared polynomial maps.

Twin of ``affdyn._speedups`` (the compiled version); ``affdyn.kernel``
picks one at import time.  Points are held in common-denominator form
``(nums, den)`` with ``den > 0`` and ``gcd(*nums, den) == 1``; all
arithmetic is exact integer arithmetic.
"""

from math import gcd


def eval_map(terms, denoms, degs, max_exps, nums, den):
    """Evaluate a compiled polynomial map at the point ``nums / den``.

    ``terms[j]`` is a sequence of ``(coeff, exps)`` pairs with integer
    coefficients (denominators cleared into ``denoms[j]``), ``degs[j]`` the
    total degree of coordinate ``j``, and ``max_exps[i]`` the largest
    exponent of variable ``i`` across the whole map.  Returns the image in
    canonical common-denominator form.
    """
    nvars = len(nums)
    pows = []
    for i in range(nvars):
        row = [1] * (max_exps[i] + 1)
        value = nums[i]
        for k in range(1, max_exps[i] + 1):
            row[k] = row[k - 1] * value
        pows.append(row)
    dmax = 0
    for d in degs:
        if d > dmax:
            dmax = d
    denp = [1] * (dmax + 1)
    for k in range(1, dmax + 1):
        denp[k] = denp[k - 1] * den

    ncoords = len(terms)
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
                    t *= pows[i][e]
                    s += e
            if deg_j > s:
                t *= denp[deg_j - s]
            acc += t
        raw_den = denoms[j] * denp[deg_j]
        g = gcd(acc, raw_den)
        red_nums[j] = acc // g
        red_dens[j] = raw_den // g

    new_den = 1
    for j in range(ncoords):
        dj = red_dens[j]
        new_den = new_den // gcd(new_den, dj) * dj
    out = tuple(red_nums[j] * (new_den // red_dens[j]) for j in range(ncoords))
    return out, new_den
