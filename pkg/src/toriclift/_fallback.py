"""Pure-Python implementations of the hot kernels.

Must stay behaviourally identical to ``_kernels.pyx``.
"""
from itertools import product


def classify_weights(rays, bounds, lo, hi):
    """Bitmask per integer weight u in the box [lo, hi].

    Bit i of the mask is set iff ``<u, rays[i]> < bounds[i]``.  Weights are
    visited in ``itertools.product`` order (last coordinate fastest).
    """
    d = len(lo)
    ranges = [range(lo[k], hi[k] + 1) for k in range(d)]
    bits = [1 << i for i in range(len(rays))]
    out = []
    append = out.append
    if d == 2:
        for u0, u1 in product(*ranges):
            m = 0
            for (v0, v1), b, bit in zip(rays, bounds, bits):
                if u0 * v0 + u1 * v1 < b:
                    m |= bit
            append(m)
        return out
    for u in product(*ranges):
        m = 0
        for v, b, bit in zip(rays, bounds, bits):
            if sum(x * y for x, y in zip(u, v)) < b:
                m |= bit
        append(m)
    return out
