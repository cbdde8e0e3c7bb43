"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Covers the three hot loops that dominate the laboratory's runtime:
batch conjugacy invariants (charpoly + kernel filtration), the oracle's
class-multiplication coefficients, and the orbit-pairing histograms.
"""

import argparse
import time

import numpy as np

from glfq import gf, kernels, matgrp


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_backend(name, mod, repeat):
    rows = []

    # charpoly sweep: all of M_3(F_3)
    sp = matgrp.mat_space(3, 3)
    mats = sp.all_matrices()
    rows.append((f"charpoly M_3(F_3) x{len(mats)}",
                 timeit(lambda: mod.batch_charpoly(mats, 3, sp.sf), repeat)))

    # rank filtration: X -> rank(X^3) over the same sweep
    poly = np.array([0, 1], dtype=np.int64)
    rows.append((f"rank(X^3) M_3(F_3) x{len(mats)}",
                 timeit(lambda: mod.batch_poly_rank(mats, poly, 3, 3, sp.sf),
                        repeat)))

    # class multiplication coefficients for GL_2(F_5)
    sp2 = matgrp.mat_space(2, 5)
    els = sp2.group_elements()
    invs = mod.batch_inverse(els, 2, sp2.sf)
    classes = matgrp.enumerate_classes(2, 5)
    labels = matgrp.classify_many(sp2, els)
    lab_index = {c.label: i for i, c in enumerate(classes)}
    class_of = np.zeros(sp2.size, dtype=np.int64)
    for e, lab in zip(els, labels):
        class_of[int(e)] = lab_index[lab]
    reps = np.array([c.rep for c in classes], dtype=np.int64)
    rows.append((f"class-mult coeffs GL_2(F_5) ({len(els)} els, {len(reps)} cls)",
                 timeit(lambda: mod.class_mult_coeffs(els, invs, reps, class_of,
                                                      2, sp2.sf), repeat)))

    # orbit pairing histogram over M_2(F_7)
    sp3 = matgrp.mat_space(2, 7)
    all3 = sp3.all_matrices()
    rows.append((f"trace-phi histogram M_2(F_7) x{len(all3)}",
                 timeit(lambda: mod.trace_phi_histogram(all3, 1, 2, sp3.sf),
                        repeat)))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = kernels.implementations()
    results = {name: bench_backend(name, mod, args.repeat)
               for name, mod in impls}
    names = [n for n, _ in impls]
    print(f"{'kernel':<50} " + " ".join(f"{n:>12}" for n in names) +
          ("      speedup" if len(names) == 2 else ""))
    for i, (label, _) in enumerate(results[names[0]]):
        cells = [results[n][i][1] for n in names]
        line = f"{label:<50} " + " ".join(f"{c * 1e3:>10.2f}ms" for c in cells)
        if len(cells) == 2 and cells[0] > 0:
            line += f"   {cells[1] / cells[0]:>8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
