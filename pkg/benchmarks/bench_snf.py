"""Compare the compiled and pure-Python dense diagonalization kernels.

Usage: python benchmarks/bench_snf.py [--sizes 20 40 80] [--repeat 3] [--seed 1]

Each case hides a known diagonal (with 2- and 6-torsion and a kernel)
behind random unimodular row and column moves; both kernels must recover it.
A second section times full homology of torus link closures, where the
sparse front end does most of the work before the dense kernel sees it.
"""

import argparse
import random
import sys
import time

from khtl import _snf_py
from khtl import homology as hmod
from khtl.compile import closure_complex, torus_braid
from khtl.homology import invariant_factors


def planted_matrix(rng, n, ops):
    """U·D·V with D = diag(1, …, 2, 6, 0, …) and U, V products of ±1 elementary moves.

    The invariant factors are known in advance and entries stay moderate,
    as in the boundary matrices homology produces.
    """
    diag = [1] * (n - n // 4) + [2] * (n // 8) + [6] * (n // 16)
    diag += [0] * (n - len(diag))
    M = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(ops):
        a, b = rng.sample(range(n), 2)
        c = rng.choice((1, -1))
        if rng.random() < 0.5:
            M[a] = [x + c * y for x, y in zip(M[a], M[b])]
        else:
            for row in M:
                row[a] += c * row[b]
    return M, sorted(d for d in diag if d)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80, 160])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args(argv)

    fast = hmod._diagonalize_fast
    print(f"selected kernel: {hmod.KERNEL}")
    if fast is None:
        print("compiled kernel unavailable; build the extension to compare")
    rng = random.Random(args.seed)
    print(f"{'size':>6} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9}  agree")
    for n in args.sizes:
        M, planted = planted_matrix(rng, n, 3 * n)
        expected = invariant_factors(planted)
        t_py, d_py = best_of(lambda: _snf_py.diagonalize([r[:] for r in M]), args.repeat)
        ok_py = invariant_factors(d_py) == expected
        if fast is not None:
            t_c, d_c = best_of(lambda: fast([r[:] for r in M]), args.repeat)
            agree = ok_py and invariant_factors(d_c) == expected
            print(f"{n:>6} {t_py:>12.4f} {t_c:>12.4f} {t_py / t_c:>9.1f}  {agree}")
        else:
            agree = ok_py
            print(f"{n:>6} {t_py:>12.4f} {'-':>12} {'-':>9}  {agree}")
        if not agree:
            return 1

    print("\nfull homology of T(n,k) closures (simplify + SNF)")
    for n, k in ((3, 12), (4, 8), (5, 6)):
        t, H = best_of(lambda: hmod.homology(closure_complex(torus_braid(n, k))), 1)
        print(f"  T({n},{k}): {t:.3f} s, {sum(f for f, _ in H.entries.values())} free generators")
    return 0


if __name__ == "__main__":
    sys.exit(main())
