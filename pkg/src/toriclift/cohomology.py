"""
Cohomology of torus-invariant line bundles on smooth complete toric varieties.

For an integral divisor D and a weight u in M let N_u be the set of rays
with ``<u, v> < -a_v``.  The u-graded piece of H^i(X, O(D)) is the reduced
cohomology in degree i-1 of the full subcomplex of the fan on N_u.
Weights outside a padded bounding box of the hyperplane arrangement
``{<u, v_i> = -a_i}`` contribute nothing; the padding-independence tests
guard that bound.

Ranks over Q and over F_p both come from the integer Smith normal form of
the same boundary matrices.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product as iproduct
from math import ceil, comb, floor

from . import _backend
from .divisor import QDivisor, arrangement_vertices, canonical_divisor, is_ample, round_up
from .errors import HypothesisError, UnsupportedRankError, ValidationError
from .fan import Fan, is_smooth, require_complete
from .lattice import dot, smith_normal_form


@dataclass(frozen=True)
class CohomologyTable:
    """dims h^0..h^d; ``by_weight`` lists only weights with a nonzero contribution."""

    h: tuple
    by_weight: tuple
    char: int

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * x for i, x in enumerate(self.h))

    def to_json(self) -> dict:
        return {
            "h": list(self.h),
            "char": self.char,
            "by_weight": [{"u": list(u), "h": list(dims)} for u, dims in self.by_weight],
        }


@dataclass(frozen=True)
class WeightComplex:
    weight: tuple
    negative_rays: frozenset
    faces: tuple = field(repr=False)


def _faces(fan: Fan, rays: frozenset) -> tuple:
    """Subsets of ``rays`` spanning a cone of the fan, including the empty face."""
    out = set()
    for c in fan.max_cones:
        local = [i for i in c if i in rays]
        for k in range(len(local) + 1):
            out.update(combinations(local, k))
    return tuple(sorted(out, key=lambda s: (len(s), s)))


def weight_complex(D: QDivisor, u) -> WeightComplex:
    neg = frozenset(i for i, v in enumerate(D.fan.rays) if dot(u, v) < -D.coeffs[i])
    return WeightComplex(tuple(u), neg, _faces(D.fan, neg))


def _boundary_diagonals(faces: tuple) -> tuple:
    """(face counts by size, SNF diagonals of the augmented boundary maps by size)."""
    by_size = {}
    for f in faces:
        by_size.setdefault(len(f), []).append(f)
    top = max(by_size)
    counts = tuple(len(by_size.get(k, ())) for k in range(top + 1))
    diags = [()]
    for k in range(1, top + 1):
        rows = {f: r for r, f in enumerate(by_size[k - 1])}
        cols = by_size[k]
        M = [[0] * len(cols) for _ in rows]
        for c, f in enumerate(cols):
            for j in range(k):
                M[rows[f[:j] + f[j + 1:]]][c] = (-1) ** j
        diags.append(smith_normal_form(M).diagonal)
    return counts, tuple(diags)


def _rank(diag, char):
    if char == 0:
        return sum(1 for x in diag if x != 0)
    return sum(1 for x in diag if x % char != 0)


def reduced_cohomology(faces: tuple, char: int = 0) -> dict:
    """{k: dim H~^k} for k >= -1 of the complex given by its faces (empty face included)."""
    counts, diags = _boundary_diagonals(faces)
    ranks = [_rank(d, char) for d in diags] + [0]
    # face of size k has dimension k - 1; H~^{k-1} = c_k - rank d_{k+1} - rank d_k
    return {k - 1: counts[k] - ranks[k + 1] - ranks[k] for k in range(len(counts))}


@lru_cache(maxsize=100_000)
def _mask_diagonals(fan: Fan, mask: int):
    rays = frozenset(i for i in range(fan.n_rays) if mask >> i & 1)
    return _boundary_diagonals(_faces(fan, rays))


def _dims_from_diagonals(data, d: int, char: int) -> tuple:
    counts, diags = data
    ranks = [_rank(x, char) for x in diags] + [0]
    red = {k - 1: counts[k] - ranks[k + 1] - ranks[k] for k in range(len(counts))}
    return tuple(red.get(i - 1, 0) for i in range(d + 1))


def _check_input(D: QDivisor):
    fan = D.fan
    if fan.rank > 3:
        raise UnsupportedRankError(f"cohomology_table supports rank <= 3, got {fan.rank}")
    if not D.is_integral():
        raise ValidationError("cohomology needs an integral divisor; round it first")
    if not is_smooth(fan):
        raise HypothesisError("fan is not smooth")
    require_complete(fan)


def weight_box(D: QDivisor, padding: int = 1):
    verts = arrangement_vertices(D.fan.rays, [-a for a in D.coeffs])
    d = D.fan.rank
    lo = [floor(min(v[k] for v in verts)) - padding for k in range(d)]
    hi = [ceil(max(v[k] for v in verts)) + padding for k in range(d)]
    return lo, hi


def _workers_default() -> int:
    try:
        return max(1, int(os.environ.get("TORICLIFT_THREADS", "1")))
    except ValueError:
        return 1


def cohomology_table(D: QDivisor, char: int = 0, padding: int = 1, backend=None, workers=None) -> CohomologyTable:
    _check_input(D)
    fan, d = D.fan, D.fan.rank
    lo, hi = weight_box(D, padding)
    bounds = [-int(a) for a in D.coeffs]
    masks = _backend.classify_weights(fan.rays, bounds, lo, hi, backend=backend)
    distinct = sorted(set(masks))
    workers = workers or _workers_default()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            data = list(ex.map(lambda m: _mask_diagonals(fan, m), distinct))
    else:
        data = [_mask_diagonals(fan, m) for m in distinct]
    dims_of = {m: _dims_from_diagonals(x, d, char) for m, x in zip(distinct, data)}
    total = [0] * (d + 1)
    by_weight = []
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    for u, m in zip(iproduct(*ranges), masks):
        dims = dims_of[m]
        if any(dims):
            by_weight.append((u, dims))
            for i, x in enumerate(dims):
                total[i] += x
    return CohomologyTable(tuple(total), tuple(by_weight), char)


def h_numbers(D: QDivisor, char: int = 0, **kw) -> tuple:
    return cohomology_table(D, char, **kw).h


# --------------------------------------------------------------------------
# Independent Cech oracle
# --------------------------------------------------------------------------

@lru_cache(maxsize=100_000)
def _cech_dims(fan: Fan, satisfied: frozenset, char: int) -> tuple:
    cones = fan.max_cones
    m = len(cones)
    live = {}
    for k in range(1, m + 1):
        live[k] = []
        for S in combinations(range(m), k):
            common = set(cones[S[0]]).intersection(*(cones[s] for s in S[1:]))
            if common <= satisfied:
                live[k].append(S)
    ranks = {}
    for k in range(1, m):
        src = {S: i for i, S in enumerate(live[k])}
        if not live[k] or not live[k + 1]:
            ranks[k] = 0
            continue
        M = [[0] * len(src) for _ in live[k + 1]]
        for r, T in enumerate(live[k + 1]):
            for j in range(k + 1):
                S = T[:j] + T[j + 1:]
                if S in src:
                    M[r][src[S]] = (-1) ** j
        ranks[k] = _rank(smith_normal_form(M).diagonal, char)
    # Cech degree q uses subsets of size q + 1
    out = []
    for q in range(fan.rank + 1):
        k = q + 1
        c = len(live.get(k, ()))
        out.append(c - ranks.get(k, 0) - ranks.get(k - 1, 0))
    return tuple(out)


def cech_oracle(D: QDivisor, u, char: int = 0) -> tuple:
    """dim H^q(X, O(D))_u for q = 0..d from the Cech complex of the max-cone cover."""
    sat = frozenset(i for i, v in enumerate(D.fan.rays) if sum(a * b for a, b in zip(u, v)) >= -D.coeffs[i])
    return _cech_dims(D.fan, sat, char)


def cech_table(D: QDivisor, char: int = 0, padding: int = 1) -> tuple:
    _check_input(D)
    lo, hi = weight_box(D, padding)
    total = [0] * (D.fan.rank + 1)
    for u in iproduct(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        for i, x in enumerate(cech_oracle(D, u, char)):
            total[i] += x
    return tuple(total)


# --------------------------------------------------------------------------
# Vanishing harness
# --------------------------------------------------------------------------

@dataclass
class KVReport:
    divisor: tuple
    d: int
    p: int
    h: tuple
    h_char0: tuple
    claimed_range: tuple
    claimed_range_pass: bool
    observed_vanishing: tuple
    log_h: tuple
    log_h_char0: tuple
    log_claimed_pass: bool
    log_observed_vanishing: tuple
    seed: int = None

    @property
    def char_dependent(self) -> bool:
        return self.h != self.h_char0 or self.log_h != self.log_h_char0

    @property
    def full_vanishing(self) -> bool:
        """h^i(K + ceil H) = 0 for i > 0 and h^i(-ceil H) = 0 for i < d."""
        return not any(self.h[1:]) and not any(self.log_h[: self.d])

    def to_json(self) -> dict:
        out = {
            "divisor": [{"num": c.numerator, "den": c.denominator} for c in self.divisor],
            "h": list(self.h),
            "h_char0": list(self.h_char0),
            "char": self.p,
            "claimed_range": list(self.claimed_range),
            "claimed_range_pass": self.claimed_range_pass,
            "observed_vanishing": list(self.observed_vanishing),
            "log_form": {
                "h_minus_ceil_H": list(self.log_h),
                "h_minus_ceil_H_char0": list(self.log_h_char0),
                "claimed_pass": self.log_claimed_pass,
                "observed_vanishing": list(self.log_observed_vanishing),
            },
            "char_dependent": self.char_dependent,
            "full_vanishing": self.full_vanishing,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def verify_kv_vanishing(fan: Fan, H: QDivisor, p: int, backend=None) -> KVReport:
    """Check H^i(K + ceil H) = 0 for i > d - min(d, p) and the log form with full boundary.

    Omega^j(log boundary) is free of rank C(d, j), so the log statement
    reduces to C(d, j) * h^i(-ceil H) = 0 for i + j < min(d, p).
    """
    if H.fan != fan:
        raise ValidationError("H does not live on the given fan")
    if not is_ample(H):
        raise HypothesisError("H is not ample")
    d = fan.rank
    A = canonical_divisor(fan) + round_up(H)
    B = -round_up(H)
    h = h_numbers(A, p, backend=backend)
    h0 = h_numbers(A, 0, backend=backend)
    lh = h_numbers(B, p, backend=backend)
    lh0 = h_numbers(B, 0, backend=backend)
    bound = min(d, p)
    claimed = tuple(i for i in range(d + 1) if i > d - bound)
    log_ok = all(comb(d, j) * lh[i] == 0 for i in range(d + 1) for j in range(d + 1) if i + j < bound)
    return KVReport(
        divisor=H.coeffs,
        d=d,
        p=p,
        h=h,
        h_char0=h0,
        claimed_range=claimed,
        claimed_range_pass=all(h[i] == 0 for i in claimed),
        observed_vanishing=tuple(i for i in range(1, d + 1) if h[i] == 0),
        log_h=lh,
        log_h_char0=lh0,
        log_claimed_pass=log_ok,
        log_observed_vanishing=tuple(i for i in range(d + 1) if lh[i] == 0),
    )
