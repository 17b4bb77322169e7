"""Compare the compiled and pure-Python evaluation kernels.

Times three workloads on the bundled degree-2 Henon automorphism:
single-step map evaluation, orbit iteration, and an integer-box sweep of
the inequality statistic.  The Fraction-based generic evaluator is timed
as a reference point.

Run directly:  python benchmarks/bench_backends.py
"""

from __future__ import annotations

import importlib.resources
import time
from fractions import Fraction

from affdyn import _kernel_py, kernel
from affdyn.dynamics import AffineAutomorphism
from affdyn.parsing import parse_map_file

try:
    from affdyn import _speedups
except ImportError:
    _speedups = None


def load_henon() -> AffineAutomorphism:
    text = (
        importlib.resources.files("affdyn") / "data" / "henon3.map"
    ).read_text()
    mf = parse_map_file(text)
    return AffineAutomorphism(mf.forward, mf.inverse, mf.names)


def time_eval(backend, cm, repeats: int) -> float:
    nums, den = kernel.to_common_denominator(
        (Fraction(1, 3), Fraction(2, 5), Fraction(-3, 7))
    )
    start = time.perf_counter()
    for _ in range(repeats):
        backend.eval_map(cm.terms, cm.denoms, cm.degs, cm.max_exps, nums, den)
    return time.perf_counter() - start


def time_orbit(backend, cm, seeds, depth: int) -> float:
    start = time.perf_counter()
    for seed in seeds:
        nums, den = kernel.to_common_denominator(seed)
        for _ in range(depth):
            nums, den = backend.eval_map(cm.terms, cm.denoms, cm.degs, cm.max_exps, nums, den)
    return time.perf_counter() - start


def time_box(backend, fwd, inv, bound: int) -> float:
    start = time.perf_counter()
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            for z in range(-bound, bound + 1):
                nums = (x, y, z)
                backend.eval_map(fwd.terms, fwd.denoms, fwd.degs, fwd.max_exps, nums, 1)
                backend.eval_map(inv.terms, inv.denoms, inv.degs, inv.max_exps, nums, 1)
    return time.perf_counter() - start


def main() -> None:
    automorphism = load_henon()
    fwd = automorphism.compiled("forward")
    inv = automorphism.compiled("inverse")
    seeds = [(Fraction(a), Fraction(b), Fraction(1)) for a in range(1, 6) for b in range(1, 5)]

    backends = [("python", _kernel_py)]
    if _speedups is not None:
        backends.insert(0, ("cython", _speedups))
    else:
        print("compiled kernel not available; timing the fallback only")

    print(f"active backend at import: {kernel.BACKEND}\n")
    results: dict[str, dict[str, float]] = {}
    for name, backend in backends:
        results[name] = {
            "eval x20000": time_eval(backend, fwd, 20000),
            "orbit depth 14 x20 seeds": time_orbit(backend, fwd, seeds, 14),
            "box sweep |c|<=12": time_box(backend, fwd, inv, 12),
        }

    # Fraction-based generic evaluator, for scale.
    point = (Fraction(1, 3), Fraction(2, 5), Fraction(-3, 7))
    start = time.perf_counter()
    for _ in range(20000):
        tuple(p.evaluate(point) for p in automorphism.forward)
    frac_time = time.perf_counter() - start

    width = max(len(k) for k in next(iter(results.values())))
    header = f"{'workload':<{width}}  " + "  ".join(f"{n:>10}" for n in results)
    if len(results) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    for workload in next(iter(results.values())):
        row = f"{workload:<{width}}  " + "  ".join(
            f"{results[n][workload]:>9.3f}s" for n in results
        )
        if len(results) == 2:
            row += f"  {results['python'][workload] / results['cython'][workload]:>7.2f}x"
        print(row)
    print(f"\nFraction-based evaluate, eval x20000: {frac_time:.3f}s")


if __name__ == "__main__":
    main()
