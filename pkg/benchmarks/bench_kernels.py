"""Compare the compiled and pure-Python kernels on the two hot loops.

    python benchmarks/bench_kernels.py --scan-height 2000 --bases 50
"""

import argparse
import time

import numpy as np

from hnflow import kernels
from hnflow.latticeflow import successive_minima
from hnflow.latticeflow.minima import _float_gs
from hnflow.latticeflow.reduction import gram_schmidt_data, integral_lll


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_scan(height, repeat):
    Lf = [[1.0, 2 ** 0.5], [0.0, 1.0]]
    rows = []
    for name, mod in (("compiled", kernels.compiled), ("python", kernels.python)):
        if mod is None:
            continue
        t, out = _time(lambda: mod.scan_prefilter(Lf, height, 0.5, 2.0 ** -50), repeat)
        rows.append((name, t, len(out)))
    return rows


def bench_minima(nbases, dim, repeat, seed):
    rng = np.random.default_rng(seed)
    bases = [rng.uniform(-1, 1, size=(dim, dim)).tolist() for _ in range(nbases)]
    rows = []
    for name, mod in (("compiled", kernels.compiled), ("python", kernels.python)):
        if mod is None:
            continue
        t, out = _time(lambda: [successive_minima(B, 128, enum=mod.enum_candidates).minimizers
                                for B in bases], repeat)
        rows.append((name, t, out))
    if len(rows) == 2:
        assert rows[0][2] == rows[1][2], "kernels disagree on minimizers"
    return [(n, t, nbases) for n, t, _ in rows]


def bench_enum(dim, factor, repeat, seed):
    """Raw enumeration inside ``factor * ||b_1*||^2`` with no radius shrinking."""
    rng = np.random.default_rng(seed)
    B = [[int(x) for x in row] for row in rng.integers(-1000, 1000, size=(dim, dim))]
    red = integral_lll(B)
    mu, fb, _ = _float_gs(*gram_schmidt_data(red.basis))
    r2 = fb[0] * factor
    rows = []
    for name, mod in (("compiled", kernels.compiled), ("python", kernels.python)):
        if mod is None:
            continue
        t, out = _time(lambda: mod.enum_candidates(mu, fb, 0, r2, 1e9, 10 ** 7), repeat)
        rows.append((name, t, len(out)))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scan-height", type=int, default=1000)
    parser.add_argument("--bases", type=int, default=40)
    parser.add_argument("--dim", type=int, default=4)
    parser.add_argument("--enum-dim", type=int, default=18)
    parser.add_argument("--enum-factor", type=float, default=3.0)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if kernels.compiled is None:
        print("compiled kernels not built; only the Python fallback is timed")
    print(f"active backend: {kernels.BACKEND}")
    print(f"\nscan_prefilter, sqrt2 forms, N={args.scan_height}")
    rows = bench_scan(args.scan_height, args.repeat)
    for name, t, n in rows:
        print(f"  {name:9s} {t * 1e3:10.1f} ms   candidates={n}")
    if len(rows) == 2:
        print(f"  speedup   {rows[1][1] / rows[0][1]:10.1f}x")
    print(f"\nenum_candidates, LLL-reduced random basis, d={args.enum_dim}")
    rows = bench_enum(args.enum_dim, args.enum_factor, args.repeat, args.seed)
    for name, t, n in rows:
        print(f"  {name:9s} {t * 1e3:10.1f} ms   points={n}")
    if len(rows) == 2:
        print(f"  speedup   {rows[1][1] / rows[0][1]:10.1f}x")
    # end to end the exact LLL dominates, so the two backends are close here
    print(f"\nsuccessive_minima, {args.bases} random bases, d={args.dim}")
    rows = bench_minima(args.bases, args.dim, args.repeat, args.seed)
    for name, t, n in rows:
        print(f"  {name:9s} {t * 1e3:10.1f} ms")
    if len(rows) == 2:
        print(f"  speedup   {rows[1][1] / rows[0][1]:10.1f}x")


if __name__ == "__main__":
    main()
