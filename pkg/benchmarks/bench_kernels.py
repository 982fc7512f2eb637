#!/usr/bin/env python3
"""Times the compiled and numpy kernel backends on the same workloads.

Usage:
    python benchmarks/bench_kernels.py [--per-class N] [--dims M] [--threads T]

Reports best-of-5 wall time per backend for the three kernels and the full
pipeline, and checks the backends agree to 1e-12 while timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from roby.kernels import available_backends, kind_of
from roby.synth import SynthSpec, generate_blobs

KIND_TAGS = {"p=1": 1.0, "p=2": 2.0, "inf": float("inf"), "p=3 (general)": 3.0}


def best_of(fn, repeats: int = 5) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--classes", type=int, default=10)
    parser.add_argument("--per-class", type=int, default=1000)
    parser.add_argument("--dims", type=int, default=128)
    parser.add_argument("--threads", type=int, default=4)
    args = parser.parse_args()

    backends = available_backends()
    ds = generate_blobs(
        SynthSpec(
            num_classes=args.classes,
            samples_per_class=args.per_class,
            dims=args.dims,
            separation=3.0,
            spread=1.0,
            seed=0,
        )
    )
    ii, jj = np.triu_indices(ds.num_classes, k=1)
    ii, jj = ii.astype(np.int64), jj.astype(np.int64)

    print(
        f"workload: K={args.classes}, n={args.per_class}/class, M={args.dims}, "
        f"threads={args.threads}; backends: {', '.join(backends)}"
    )
    header = f"{'kernel':<28}" + "".join(f"{name:>14}" for name in backends)
    print(header)
    print("-" * len(header))

    centers = {
        name: impl.class_centers(ds.vectors, ds.class_offsets, args.threads)
        for name, impl in backends.items()
    }

    row = f"{'class_centers':<28}"
    for name, impl in backends.items():
        t, _ = best_of(lambda: impl.class_centers(ds.vectors, ds.class_offsets, args.threads))
        row += f"{t * 1e3:>11.2f} ms"
    print(row)

    ref_centers = next(iter(centers.values()))
    for tag, p in KIND_TAGS.items():
        kind = kind_of(p)
        results = {}
        row = f"{'fsa_raw ' + tag:<28}"
        for name, impl in backends.items():
            t, out = best_of(
                lambda: impl.fsa_raw(ds.vectors, ds.class_offsets, ref_centers, kind, p, args.threads)
            )
            results[name] = out
            row += f"{t * 1e3:>11.2f} ms"
        print(row)
        values = list(results.values())
        assert all(np.allclose(values[0], v, atol=1e-12) for v in values[1:])

        row = f"{'pair_distances ' + tag:<28}"
        for name, impl in backends.items():
            t, _ = best_of(
                lambda: impl.pair_distances(ref_centers, ii, jj, kind, p, args.threads)
            )
            row += f"{t * 1e3:>11.2f} ms"
        print(row)

    print("backends agree to 1e-12 on every checked kernel output")


if __name__ == "__main__":
    main()
