"""Compare the compiled and pure-Python weight-classification kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

from toriclift import _backend
from toriclift.cohomology import cohomology_table
from toriclift.divisor import QDivisor
from toriclift.fan import blowup_p2, hirzebruch, projective_space


def kernel_cases():
    f = blowup_p2(2)
    yield "surface, 5 rays, 161x161 box", f.rays, [3, -2, 4, 1, -5], [-80, -80], [80, 80]
    g = projective_space(3)
    yield "P^3, 4 rays, 41^3 box", g.rays, [5, 5, 5, 5], [-20] * 3, [20] * 3


def divisor_cases():
    yield "F_3, D = (12, -9, 15, 7)", QDivisor(hirzebruch(3), [12, -9, 15, 7])
    yield "P^3, O(-12)", QDivisor(projective_space(3), [-12, 0, 0, 0])


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _backend._compiled is None:
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`")
        return
    print(f"{'case':40s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, rays, bounds, lo, hi in kernel_cases():
        py = bench(lambda: _backend.classify_weights(rays, bounds, lo, hi, backend="python"), args.repeat)
        c = bench(lambda: _backend.classify_weights(rays, bounds, lo, hi, backend="compiled"), args.repeat)
        print(f"{'kernel: ' + name:40s} {py:10.4f} {c:10.4f} {py / c:7.1f}x")
    for name, D in divisor_cases():
        cohomology_table(D)  # warm the per-mask cache so only the kernel differs
        py = bench(lambda: cohomology_table(D, backend="python"), args.repeat)
        c = bench(lambda: cohomology_table(D, backend="compiled"), args.repeat)
        print(f"{'cohomology: ' + name:40s} {py:10.4f} {c:10.4f} {py / c:7.1f}x")


if __name__ == "__main__":
    main()
