"""
Exact integer linear algebra and rational polyhedral cones.

Lattice vectors are plain tuples of Python ints; the same representation
is used for elements of N and of the dual lattice M.  Nothing in this
module touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .errors import ValidationError

Vector = tuple  # tuple[int, ...]
Matrix = list  # list[list[int]]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vgcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return vgcd(v) == 1


def primitive(v: Sequence) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = vgcd(w)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in w)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def determinant(A: Matrix):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# --------------------------------------------------------------------------
# Smith and Hermite normal forms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SnfResult:
    """``left * A * right == diag(diagonal)`` with unimodular transforms."""

    diagonal: tuple
    left: tuple
    right: tuple

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    def rank_mod(self, p: int) -> int:
        """Rank over F_p (p = 0 means over Q) of the original matrix."""
        if p == 0:
            return self.rank
        return sum(1 for d in self.diagonal if d % p != 0)


def smith_normal_form(A: Sequence[Sequence[int]]) -> SnfResult:
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0 or n == 0:
        raise ValueError("smith_normal_form needs a nonempty matrix")
    S = [[int(x) for x in row] for row in A]
    L = identity(m)
    R = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for M in (S, R):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        for M in (S, L):
            rs, rd = M[src], M[dst]
            for k in range(len(rd)):
                rd[k] += q * rs[k]

    def add_col(dst, src, q):
        for M in (S, R):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if S[i][j] != 0 and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // piv))
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // piv))
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            for M in (S, L):
                M[t] = [-x for x in M[t]]
    diag = tuple(S[t][t] for t in range(min(m, n)))
    return SnfResult(diag, tuple(map(tuple, L)), tuple(map(tuple, R)))


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list:
    """Row-style HNF: echelon form, positive pivots, entries above pivots reduced.

    Only unimodular row operations are used, so the row lattice is preserved.
    Zero rows are dropped.
    """
    H = [list(map(int, r)) for r in rows]
    if not H:
        return []
    n = len(H[0])
    piv_row = 0
    for col in range(n):
        while True:
            nz = [i for i in range(piv_row, len(H)) if H[i][col] != 0]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(H[i][col]))
            H[piv_row], H[k] = H[k], H[piv_row]
            done = True
            for i in range(piv_row + 1, len(H)):
                if H[i][col]:
                    q = H[i][col] // H[piv_row][col]
                    H[i] = [a - q * b for a, b in zip(H[i], H[piv_row])]
                    done = done and H[i][col] == 0
            if done:
                break
        if piv_row < len(H) and H[piv_row][col] != 0:
            if H[piv_row][col] < 0:
                H[piv_row] = [-a for a in H[piv_row]]
            for i in range(piv_row):
                q = H[i][col] // H[piv_row][col]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[piv_row])]
            piv_row += 1
            if piv_row == len(H):
                break
    return [r for r in H if any(r)]


# --------------------------------------------------------------------------
# Rational linear algebra
# --------------------------------------------------------------------------

def rank(A: Sequence[Sequence]) -> int:
    if not A:
        return 0
    return len(_row_echelon([list(map(Fraction, r)) for r in A])[1])


def _row_echelon(M):
    M = [list(r) for r in M]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        k = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def solve(A: Sequence[Sequence], b: Sequence):
    """Unique rational solution of a square or overdetermined consistent system.

    Returns None when the system is inconsistent or underdetermined.
    """
    n = len(A[0])
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(A, b)]
    M, piv = _row_echelon(aug)
    if n in piv:
        return None
    if len(piv) < n:
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(piv):
        x[c] = M[r][n]
    return tuple(x)


def independent_rows(A: Sequence[Sequence[int]]) -> list:
    """Indices of a greedy maximal linearly independent subset of rows."""
    chosen, basis = [], []
    for i, row in enumerate(A):
        if rank(basis + [row]) > len(basis):
            basis.append(list(row))
            chosen.append(i)
    return chosen


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> list:
    """A Z-basis of {x in Z^ncols : A x = 0}."""
    if not A:
        return [tuple(r) for r in identity(ncols)]
    snf = smith_normal_form(A)
    r = snf.rank
    R = snf.right
    return [tuple(R[i][j] for i in range(ncols)) for j in range(r, ncols)]


# --------------------------------------------------------------------------
# Cones
# --------------------------------------------------------------------------

def _dd_pointed(A: list, r: int) -> list:
    """Extreme rays of {y : A y >= 0} for an integer A of full column rank r."""
    m = len(A)
    start = independent_rows(A)[:r]
    R = [A[i] for i in start]
    rays, zeros = [], []
    for k in range(r):
        e = [0] * r
        e[k] = 1
        y = solve(R, e)
        rays.append(primitive(y))
        zeros.append(frozenset(start[j] for j in range(r) if j != k))
    for i in range(m):
        if i in start:
            continue
        a = A[i]
        vals = [dot(a, y) for y in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        new_rays, new_zeros = [], []
        for kp in pos:
            for kn in neg:
                common = zeros[kp] & zeros[kn]
                if len(common) < r - 2:
                    continue
                if any(
                    k not in (kp, kn) and common <= zeros[k] for k in range(len(rays))
                ):
                    continue
                y = [vals[kp] * s - vals[kn] * t for s, t in zip(rays[kn], rays[kp])]
                new_rays.append(primitive(y))
                new_zeros.append(common | {i})
        keep = [k for k, v in enumerate(vals) if v >= 0]
        rays = [rays[k] for k in keep] + new_rays
        zeros = [zeros[k] | {i} if vals[k] == 0 else zeros[k] for k in keep] + new_zeros
    return rays


@lru_cache(maxsize=4096)
def dual_generators(rays: tuple, d: int) -> tuple:
    """Irredundant primitive generators of {u : <u, v> >= 0 for all rays v}.

    Double description: split off the lineality space ker(A) (returned as
    a +/- pair per basis vector), then run the incremental DD iteration on
    the pointed part expressed in coordinates of the row space of A.
    """
    A = [list(v) for v in rays]
    kernel = integer_kernel(A, d) if A else [tuple(r) for r in identity(d)]
    out = []
    for k in kernel:
        k = primitive(k)
        out.append(k)
        out.append(tuple(-x for x in k))
    if A and any(any(row) for row in A):
        basis_idx = independent_rows(A)
        B = [A[i] for i in basis_idx]
        r = len(B)
        Ay = [[dot(a, b) for b in B] for a in A]
        for y in _dd_pointed(Ay, r):
            x = [sum(y[k] * B[k][j] for k in range(r)) for j in range(d)]
            out.append(primitive(x))
    return tuple(sorted(set(out)))


def cone_contains(rays: tuple, d: int, v: Sequence[int]) -> bool:
    return all(dot(u, v) >= 0 for u in dual_generators(tuple(rays), d))


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone given by primitive generators.

    With ``check=True`` the generators must be primitive, irredundant and
    span a strongly convex cone.  ``check=False`` is used for dual cones,
    which may contain a linear subspace.
    """

    rays: tuple
    ambient_rank: int
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in v) for v in self.rays)
        object.__setattr__(self, "rays", rays)
        for v in rays:
            if len(v) != self.ambient_rank:
                raise ValidationError(f"ray {v} has length {len(v)}, expected {self.ambient_rank}")
            if not is_primitive(v):
                raise ValidationError(f"ray {v} is not primitive")
        if len(set(rays)) != len(rays):
            raise ValidationError("duplicate rays")
        if self.check:
            for i, v in enumerate(rays):
                others = rays[:i] + rays[i + 1:]
                if others and cone_contains(others, self.ambient_rank, v):
                    raise ValidationError(f"ray {v} is redundant")
            if not self.is_strongly_convex():
                raise ValidationError("cone is not strongly convex")

    @property
    def dim(self) -> int:
        return rank(self.rays)

    def is_strongly_convex(self) -> bool:
        if not self.rays:
            return True
        return rank(dual_generators(self.rays, self.ambient_rank)) == self.ambient_rank

    def contains(self, v) -> bool:
        return cone_contains(self.rays, self.ambient_rank, v)

    def facet_normals(self) -> tuple:
        """Inward normals of a full-dimensional cone's facets."""
        return dual_generators(self.rays, self.ambient_rank)


def dual_cone(c: Cone) -> Cone:
    return Cone(dual_generators(c.rays, c.ambient_rank), c.ambient_rank, check=False)


def is_smooth_cone(c: Cone) -> bool:
    """True iff the rays extend to a basis of the lattice."""
    if not c.rays:
        return True
    return all(x == 1 for x in smith_normal_form(c.rays).diagonal)


def face_rays(rays: tuple, d: int, subset: frozenset) -> frozenset:
    """Indices of rays in the smallest face of cone(rays) containing rays[subset]."""
    vanish = [u for u in dual_generators(rays, d) if all(dot(u, rays[i]) == 0 for i in subset)]
    return frozenset(i for i, v in enumerate(rays) if all(dot(u, v) == 0 for u in vanish))
