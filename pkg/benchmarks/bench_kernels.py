"""Compare the compiled and numpy kernels on the three hot loops.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from spinor10 import kernels
from spinor10.clifford import EVEN
from spinor10.quadrics import canonical_system
from spinor10.variety import random_subspace_mod_p, restrict_mod_p, upper_matrices
from spinor10.groebner import F2LeadingIdeal


def _best(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        backends = {"cython": kernels.backend("cython")}
    except ImportError:
        backends = {}
        print("compiled extension not built; timing the numpy fallback only")
    backends["python"] = kernels.backend("python")

    sys_even = canonical_system(EVEN)
    cases = []
    for p in (2, 3):
        arrays = kernels.sparse_arrays(sys_even.sparse(), p)
        stop = kernels.projective_size(16, p) if p == 2 else 2_000_000
        cases.append((f"scan P^15(F_{p}) [{stop} pts]", lambda impl, a=arrays, p=p, s=stop: kernels.scan_zeros(16, p, 0, s, a, impl)))
    arrays3 = kernels.sparse_arrays(sys_even.sparse(), 3)
    pts = kernels.points_from_indices(kernels.scan_zeros(16, 3, 0, kernels.projective_size(16, 3), arrays3), 16, 3)
    cases.append((f"jacobian ranks [{len(pts)} pts over F_3]", lambda impl: kernels.jacobian_ranks(pts, 3, arrays3, impl)))
    ideal = F2LeadingIdeal(6)
    U = upper_matrices(sys_even, 2)
    W = random_subspace_mod_p(random.Random(0), 2, 6, 16)
    supports = ideal.quadric_supports(restrict_mod_p(U, W, 2))
    cases.append(("GF(2) leading monomials, degree 7", lambda impl: ideal.leading_monomials(supports, 7, impl)))

    print(f"{'kernel':45s}" + "".join(f"{name:>12s}" for name in backends) + "     agree")
    for label, fn in cases:
        row, outs = [], []
        for impl in backends.values():
            t, out = _best(lambda: fn(impl), args.repeat)
            row.append(t)
            outs.append(np.asarray(out))
        agree = all(np.array_equal(outs[0], o) for o in outs[1:])
        print(f"{label:45s}" + "".join(f"{t:11.4f}s" for t in row) + f"     {agree}")


if __name__ == "__main__":
    main()
