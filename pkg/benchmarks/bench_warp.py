"""Warp kernel timings: compiled extension vs numpy fallback.

    python benchmarks/bench_warp.py --size 800 --repeat 5 --threads 1 4
"""
import argparse
import time

import numpy as np

from xshutter import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=800)
    parser.add_argument("--channels", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--threads", type=int, nargs="+", default=[1])
    args = parser.parse_args(argv)

    rng = np.random.default_rng(0)
    n, c = args.size, args.channels
    img = rng.random((n, n, c))
    u, v = rng.uniform(-20, 20, (2, n, n))
    g = rng.standard_normal((n, n, c))

    print(f"{n}x{n}x{c}, best of {args.repeat}")
    print(f"{'backend':8} {'threads':>7} {'warp ms':>9} {'vjp ms':>9}")
    reference = {}
    for name in kernels.available_backends():
        kernels.use_backend(name)
        for threads in args.threads if name == "cython" else [1]:
            kernels.set_threads(threads)
            w = best_of(lambda: kernels.warp(img, u, v), args.repeat)
            d = best_of(lambda: kernels.warp_vjp_flow(img, u, v, g), args.repeat)
            out = kernels.warp(img, u, v)
            reference.setdefault("warp", out)
            same = np.array_equal(out, reference["warp"])
            print(f"{name:8} {threads:7d} {1e3 * w:9.2f} {1e3 * d:9.2f}" + ("" if same else "  MISMATCH"))
    kernels.set_threads(1)


if __name__ == "__main__":
    main()
