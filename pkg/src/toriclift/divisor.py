"""
Torus-invariant Q-divisors: rounding, linear equivalence, positivity,
section polytopes and intersection numbers on toric surfaces.

Sign conventions follow the section polytope: a Cartier divisor
``D = sum a_i D_i`` has local data ``u(sigma)`` with ``<u(sigma), v_i> = -a_i``
for the rays of sigma, and ``H^0(X, D)`` is spanned by the characters of
the lattice points of ``{u : <u, v_i> >= -a_i}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product as iproduct
from math import ceil, floor, lcm

from . import _backend
from .errors import HypothesisError, UnsupportedRankError, ValidationError
from .fan import Fan, ToricMorphismData, require_complete
from .lattice import dot, hermite_normal_form, rank, smith_normal_form, solve


@dataclass(frozen=True)
class QDivisor:
    fan: Fan
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.fan.n_rays:
            raise ValidationError(f"{len(coeffs)} coefficients for {self.fan.n_rays} rays")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, fan: Fan) -> "QDivisor":
        return cls(fan, (0,) * fan.n_rays)

    @classmethod
    def prime(cls, fan: Fan, i: int, mult=1) -> "QDivisor":
        c = [0] * fan.n_rays
        c[i] = mult
        return cls(fan, c)

    def _other(self, other):
        if other.fan != self.fan:
            raise ValidationError("divisors live on different fans")
        return other.coeffs

    def __add__(self, other):
        return QDivisor(self.fan, [a + b for a, b in zip(self.coeffs, self._other(other))])

    def __sub__(self, other):
        return QDivisor(self.fan, [a - b for a, b in zip(self.coeffs, self._other(other))])

    def __neg__(self):
        return QDivisor(self.fan, [-a for a in self.coeffs])

    def __mul__(self, k):
        return QDivisor(self.fan, [a * Fraction(k) for a in self.coeffs])

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def support(self) -> tuple:
        return tuple(i for i, c in enumerate(self.coeffs) if c != 0)

    def denominator(self) -> int:
        return lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1

    def int_coeffs(self) -> tuple:
        if not self.is_integral():
            raise ValidationError("divisor is not integral")
        return tuple(int(c) for c in self.coeffs)

    def __repr__(self):
        return f"QDivisor({[str(c) for c in self.coeffs]})"


# --------------------------------------------------------------------------
# Rounding calculus
# --------------------------------------------------------------------------

def round_down(D: QDivisor) -> QDivisor:
    return QDivisor(D.fan, [floor(c) for c in D.coeffs])


def round_up(D: QDivisor) -> QDivisor:
    return QDivisor(D.fan, [ceil(c) for c in D.coeffs])


def frac(D: QDivisor) -> QDivisor:
    """Fractional part <D> = D - [D]."""
    return QDivisor(D.fan, [c - floor(c) for c in D.coeffs])


def upper_frac(D: QDivisor) -> QDivisor:
    """Upper fractional part {D} = ceil(D) - D."""
    return QDivisor(D.fan, [ceil(c) - c for c in D.coeffs])


# --------------------------------------------------------------------------
# Linear equivalence
# --------------------------------------------------------------------------

def principal_divisor(fan: Fan, u) -> QDivisor:
    if len(u) != fan.rank:
        raise ValidationError("weight has wrong length")
    return QDivisor(fan, [dot(u, v) for v in fan.rays])


def canonical_divisor(fan: Fan) -> QDivisor:
    return QDivisor(fan, (-1,) * fan.n_rays)


@dataclass(frozen=True)
class ClassGroup:
    """Cokernel of ``M -> Z^N``; ``class_map`` rows give the free then torsion coordinates."""

    free_rank: int
    torsion: tuple
    class_map: tuple
    generators: tuple

    def class_of(self, D) -> tuple:
        """(free coordinates, torsion coordinates) of an integral divisor."""
        coeffs = D.int_coeffs() if isinstance(D, QDivisor) else tuple(int(c) for c in D)
        vals = [dot(row, coeffs) for row in self.class_map]
        free = tuple(vals[: self.free_rank])
        tors = tuple(v % t for v, t in zip(vals[self.free_rank:], self.torsion))
        return free, tors

    def qclass_of(self, D: QDivisor) -> tuple:
        """Free coordinates of a Q-divisor (torsion is invisible over Q)."""
        return tuple(sum(Fraction(r) * c for r, c in zip(row, D.coeffs)) for row in self.class_map[: self.free_rank])

    def is_trivial(self, D) -> bool:
        free, tors = self.class_of(D)
        return not any(free) and not any(tors)

    def equivalent(self, D1: QDivisor, D2: QDivisor) -> bool:
        return self.is_trivial(D1 - D2)


def class_group(fan: Fan) -> ClassGroup:
    d, n = fan.rank, fan.n_rays
    if rank(fan.rays) < d:
        raise ValidationError("rays do not span N_R, so M does not inject into Div_T")
    P = [list(v) for v in fan.rays]  # n x d, image of M
    snf = smith_normal_form(P)
    L = [list(r) for r in snf.left]
    diag = snf.diagonal
    torsion_rows = [L[i] for i in range(d) if diag[i] > 1]
    torsion = tuple(x for x in diag if x > 1)
    free_rows = hermite_normal_form(L[d:]) if n > d else []
    class_map = tuple(tuple(r) for r in free_rows + torsion_rows)
    # preimages of the free generators: columns of L^{-1}
    gens = []
    if free_rows:
        # solve for integer vectors x with free_rows x = e_k and torsion/image rows unconstrained
        full = free_rows + [L[i] for i in range(d)]
        for k in range(len(free_rows)):
            rhs = [int(j == k) for j in range(len(full))]
            x = solve(full, rhs)
            gens.append(tuple(int(c) for c in x))
    for i in range(d):
        if diag[i] > 1:
            full = free_rows + [L[j] for j in range(d)]
            rhs = [int(j == len(free_rows) + i) for j in range(len(full))]
            x = solve(full, rhs)
            gens.append(tuple(int(c) for c in x))
    return ClassGroup(len(free_rows), torsion, class_map, tuple(gens))


# --------------------------------------------------------------------------
# Cartier data and positivity
# --------------------------------------------------------------------------

def cartier_data(D: QDivisor) -> dict:
    """u(sigma) per max cone, solving <u, v_i> = -a_i on the rays of sigma (rational)."""
    out = {}
    for c in D.fan.max_cones:
        A = [D.fan.rays[i] for i in c]
        u = solve(A, [-D.coeffs[i] for i in c])
        if u is None:
            return None
        out[c] = u
    return out


def is_cartier(D: QDivisor) -> bool:
    """Cartier test for lcm(denominators) * D (so integral D is tested exactly)."""
    data = cartier_data(D * D.denominator())
    return data is not None and all(x.denominator == 1 for u in data.values() for x in u)


def _wall_inequalities(D: QDivisor):
    fan = D.fan
    require_complete(fan)
    data = cartier_data(D)
    if data is None:
        raise ValidationError("divisor is not Q-Cartier")
    for facet, cones in fan.walls().items():
        for a, b in ((cones[0], cones[1]), (cones[1], cones[0])):
            for j in b:
                if j not in a:
                    yield dot(data[a], fan.rays[j]) + D.coeffs[j]


def is_nef(D: QDivisor) -> bool:
    return all(x >= 0 for x in _wall_inequalities(D))


def is_ample(D: QDivisor) -> bool:
    return all(x > 0 for x in _wall_inequalities(D))


def support_function(D: QDivisor, w) -> Fraction:
    """phi_D(w) = <u(sigma), w> for a max cone sigma containing w."""
    c = D.fan.containing_cone(w)
    if c is None:
        raise ValidationError(f"{w} is outside the support")
    u = solve([D.fan.rays[i] for i in c], [-D.coeffs[i] for i in c])
    return dot(u, w)


# --------------------------------------------------------------------------
# Section polytopes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Polytope:
    """``{u in M_R : <u, normal> >= rhs}`` for each (normal, rhs) inequality."""

    inequalities: tuple
    vertices: tuple

    @property
    def rank(self) -> int:
        return len(self.inequalities[0][0])

    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, u) -> bool:
        return all(dot(u, v) >= b for v, b in self.inequalities)

    def dimension(self) -> int:
        if not self.vertices:
            return -1
        base = self.vertices[0]
        return rank([[a - b for a, b in zip(w, base)] for w in self.vertices[1:]]) if len(self.vertices) > 1 else 0

    def bounding_box(self):
        lo = [floor(min(v[k] for v in self.vertices)) for k in range(self.rank)]
        hi = [ceil(max(v[k] for v in self.vertices)) for k in range(self.rank)]
        return lo, hi

    def lattice_points(self, backend=None) -> list:
        if not self.vertices:
            return []
        lo, hi = self.bounding_box()
        normals = [v for v, _ in self.inequalities]
        bounds = [ceil(b) for _, b in self.inequalities]
        masks = _backend.classify_weights(normals, bounds, lo, hi, backend=backend)
        ranges = [range(l, h + 1) for l, h in zip(lo, hi)]
        return [u for u, m in zip(iproduct(*ranges), masks) if m == 0]


def arrangement_vertices(normals, rhs) -> list:
    """All points where d linearly independent hyperplanes <u, n_i> = rhs_i meet."""
    d = len(normals[0])
    pts = set()
    for idx in combinations(range(len(normals)), d):
        u = solve([normals[i] for i in idx], [rhs[i] for i in idx])
        if u is not None:
            pts.add(u)
    return sorted(pts)


def section_polytope(D: QDivisor) -> Polytope:
    fan = D.fan
    try:
        require_complete(fan)
    except ValidationError:
        raise ValidationError("section polytope may be unbounded: fan is not complete") from None
    ineq = tuple((v, -a) for v, a in zip(fan.rays, D.coeffs))
    verts = [u for u in arrangement_vertices(fan.rays, [-a for a in D.coeffs]) if all(dot(u, v) >= b for v, b in ineq)]
    return Polytope(ineq, tuple(sorted(verts)))


def monomial_basis(D: QDivisor, backend=None) -> list:
    """Lattice points of P_D: the weights u whose characters span H^0(X, D)."""
    if not D.is_integral():
        raise ValidationError("h0 needs an integral divisor; round it first")
    return section_polytope(D).lattice_points(backend=backend)


def h0(D: QDivisor) -> int:
    return len(monomial_basis(D))


# --------------------------------------------------------------------------
# Intersection theory on smooth complete toric surfaces
# --------------------------------------------------------------------------

def _require_surface(fan: Fan):
    if fan.rank != 2:
        raise UnsupportedRankError("intersection numbers are implemented for surfaces only")


def self_intersection_numbers(fan: Fan) -> tuple:
    """D_i^2 = -b_i where v_{i-1} + v_{i+1} = b_i v_i for the two neighbouring rays."""
    _require_surface(fan)
    out = []
    for i, v in enumerate(fan.rays):
        nb = fan.neighbours(i)
        if len(nb) != 2:
            raise ValidationError("not a complete surface fan")
        s = [fan.rays[nb[0]][k] + fan.rays[nb[1]][k] for k in range(2)]
        k = next(k for k in range(2) if v[k] != 0)
        b = Fraction(s[k], v[k])
        if any(s[j] != b * v[j] for j in range(2)) or b.denominator != 1:
            raise ValidationError("wall relation fails: fan is not smooth")
        out.append(-int(b))
    return tuple(out)


def intersection_matrix(fan: Fan) -> tuple:
    _require_surface(fan)
    n = fan.n_rays
    selfs = self_intersection_numbers(fan)
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        M[i][i] = selfs[i]
        for j in fan.neighbours(i):
            M[i][j] = 1
    return tuple(map(tuple, M))


def surface_intersection(D1: QDivisor, D2: QDivisor) -> Fraction:
    if D1.fan != D2.fan:
        raise ValidationError("divisors live on different fans")
    M = intersection_matrix(D1.fan)
    return sum(
        (D1.coeffs[i] * M[i][j] * D2.coeffs[j] for i in range(len(M)) for j in range(len(M)) if M[i][j]),
        Fraction(0),
    )


# --------------------------------------------------------------------------
# Pullback along refinements
# --------------------------------------------------------------------------

def pullback(mor: ToricMorphismData, D: QDivisor) -> QDivisor:
    if D.fan != mor.target:
        raise ValidationError("divisor does not live on the morphism target")
    return QDivisor(mor.source, [-support_function(D, w) for w in mor.source.rays])


def round_up_defect(mor: ToricMorphismData, H: QDivisor) -> QDivisor:
    """ceil(f^*H) - f^*ceil(H); supported on the exceptional rays."""
    return round_up(pullback(mor, H)) - pullback(mor, round_up(H))


def rounding_correction(mor: ToricMorphismData, H: QDivisor) -> dict:
    """Exceptional ray -> [sum_j b_j q_ji], with H = ceil(H) - sum b_j D_j and q_ji = mult of E_i in f^*D_j."""
    b = upper_frac(H).coeffs
    out = {}
    prime_pullbacks = {j: pullback(mor, QDivisor.prime(H.fan, j)) for j, bj in enumerate(b) if bj}
    for e in mor.exceptional:
        out[e] = floor(sum((b[j] * pb.coeffs[e] for j, pb in prime_pullbacks.items()), Fraction(0)))
    return out


def check_pullback_rounding(mor: ToricMorphismData, H: QDivisor) -> bool:
    """ceil(f^*H) == f^*ceil(H) - sum_i [sum_j b_j q_ji] E_i, exactly."""
    corr = rounding_correction(mor, H)
    rhs = list(pullback(mor, round_up(H)).coeffs)
    for e, c in corr.items():
        rhs[e] -= c
    return round_up(pullback(mor, H)).coeffs == tuple(rhs)


def ample_or_raise(D: QDivisor):
    if not is_ample(D):
        raise HypothesisError("divisor is not ample")


def random_ample_divisor(fan: Fan, rng, max_den: int = 6, span: int = 4, tries: int = 10_000) -> QDivisor:
    """Rejection-sample an ample Q-divisor with coefficients in [0, span] and denominators <= max_den."""
    for _ in range(tries):
        coeffs = []
        for _ in range(fan.n_rays):
            den = rng.randint(1, max_den)
            coeffs.append(Fraction(rng.randint(0, span * den), den))
        D = QDivisor(fan, coeffs)
        if is_ample(D):
            return D
    raise ValidationError("no ample divisor found; is the fan projective?")
