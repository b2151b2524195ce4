"""
Fans and the standard fan constructions.

Rays are globally ordered and divisors refer to them by index.  The
Hirzebruch fan uses rays ``(1,0), (0,1), (-1,n), (0,-1)``; with that
ordering ``D_1`` (ray ``(0,1)``) is the negative section E_1 with
``E_1^2 = -n``, ``D_3`` (ray ``(0,-1)``) is the positive section E_2 and
``D_0`` (ray ``(1,0)``) is a fiber F.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product as iproduct

from .errors import UnsupportedRankError, ValidationError
from .lattice import Cone, dot, face_rays, dual_generators, is_primitive, is_smooth_cone, rank

HIRZEBRUCH_E1, HIRZEBRUCH_E2, HIRZEBRUCH_F = 1, 3, 0


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple
    max_cones: tuple

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in v) for v in self.rays)
        cones = tuple(sorted(tuple(sorted(int(i) for i in c)) for c in self.max_cones))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        if self.rank < 1:
            raise ValidationError("fan rank must be positive")

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def cone_rays(self, c) -> tuple:
        return tuple(self.rays[i] for i in c)

    def cone(self, c) -> Cone:
        return Cone(self.cone_rays(c), self.rank)

    @cached_property
    def _facets(self) -> dict:
        """Facets of each full-dimensional max cone, as frozensets of ray indices."""
        out = {}
        for c in self.max_cones:
            rays = self.cone_rays(c)
            facets = set()
            for u in dual_generators(rays, self.rank):
                zero = frozenset(c[k] for k, v in enumerate(rays) if dot(u, v) == 0)
                facets.add(zero)
            out[c] = facets
        return out

    def walls(self) -> dict:
        """Map each facet (frozenset of ray indices) to the max cones containing it."""
        out = {}
        for c, facets in self._facets.items():
            for f in facets:
                out.setdefault(f, []).append(c)
        return out

    def neighbours(self, i: int) -> list:
        """Rays sharing a max cone with ray i (surface fans: the two adjacent rays)."""
        return sorted({j for c in self.max_cones if i in c for j in c if j != i})

    def containing_cone(self, v):
        """A max cone containing v, or None."""
        for c in self.max_cones:
            if all(dot(u, v) >= 0 for u in dual_generators(self.cone_rays(c), self.rank)):
                return c
        return None

    def is_simplicial(self) -> bool:
        return all(rank(self.cone_rays(c)) == len(c) for c in self.max_cones)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(v) for v in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Fan":
        return cls(obj["rank"], obj["rays"], obj["max_cones"])


@lru_cache(maxsize=None)
def validate(f: Fan) -> tuple:
    """Violated fan axioms; empty iff f is a valid fan."""
    return tuple(_validate(f))


def _validate(f: Fan) -> list:
    problems = []
    for i, v in enumerate(f.rays):
        if len(v) != f.rank:
            problems.append(f"ray {i}: length {len(v)} != rank {f.rank}")
        elif not is_primitive(v):
            problems.append(f"ray {i}: {v} is not primitive")
    if len(set(f.rays)) != len(f.rays):
        problems.append("duplicate rays")
    if not f.max_cones:
        problems.append("no max cones")
    if problems:
        return problems
    for c in f.max_cones:
        if any(i < 0 or i >= f.n_rays for i in c):
            problems.append(f"cone {list(c)}: ray index out of range")
    if problems:
        return problems
    used = {i for c in f.max_cones for i in c}
    for i in range(f.n_rays):
        if i not in used:
            problems.append(f"ray {i} lies in no max cone")
    good = []
    for c in f.max_cones:
        try:
            f.cone(c)
        except ValidationError as e:
            problems.append(f"cone {list(c)}: {e}")
        else:
            good.append(c)
    for a, b in combinations(good, 2):
        if not _meet_in_common_face(f, a, b):
            problems.append(f"face intersection: cones {list(a)} and {list(b)} do not meet in a common face")
    for a, b in combinations(f.max_cones, 2):
        if set(a) <= set(b) or set(b) <= set(a):
            problems.append(f"cone {list(a)} is not maximal with respect to {list(b)}")
    return problems


def _meet_in_common_face(f: Fan, a: tuple, b: tuple) -> bool:
    d = f.rank
    ra, rb = f.cone_rays(a), f.cone_rays(b)
    common = set(a) & set(b)
    # generators of the intersection: dual of the union of both dual cones
    inter = dual_generators(tuple(sorted(set(dual_generators(ra, d)) | set(dual_generators(rb, d)))), d)
    common_rays = {f.rays[i] for i in common}
    for g in inter:
        neg = tuple(-x for x in g)
        if neg in inter:
            return False
        if g not in common_rays:
            return False
    for cone, rays in ((a, ra), (b, rb)):
        local = frozenset(k for k, i in enumerate(cone) if i in common)
        if face_rays(rays, d, local) != local:
            return False
    return True


def is_valid(f: Fan) -> bool:
    return not validate(f)


@lru_cache(maxsize=None)
def is_smooth(f: Fan) -> bool:
    return all(is_smooth_cone(f.cone(c)) for c in f.max_cones)


@lru_cache(maxsize=None)
def walls_paired(f: Fan) -> bool:
    """Every facet of a full-dimensional max cone lies in exactly two max cones."""
    if any(rank(f.cone_rays(c)) != f.rank for c in f.max_cones):
        return False
    return all(len(cs) == 2 for cs in f.walls().values())


def coverage_certificate(f: Fan, radius: int = None) -> list:
    """Primitive test vectors in the box of the given radius lying in no max cone."""
    if radius is None:
        radius = {1: 2, 2: 4, 3: 3}.get(f.rank, 2)
    misses = []
    for v in iproduct(range(-radius, radius + 1), repeat=f.rank):
        if is_primitive(v) and f.containing_cone(v) is None:
            misses.append(v)
    return misses


@lru_cache(maxsize=None)
def is_complete(f: Fan) -> bool:
    if f.rank > 3:
        raise UnsupportedRankError(f"is_complete supports rank <= 3, got {f.rank}")
    return walls_paired(f) and not coverage_certificate(f)


def require_complete(f: Fan) -> None:
    """Raise unless f is complete.  Rank > 3 falls back to the wall-pairing test alone."""
    ok = walls_paired(f) if f.rank > 3 else is_complete(f)
    if not ok:
        raise ValidationError("fan is not complete")


# --------------------------------------------------------------------------
# Builders
# --------------------------------------------------------------------------

def projective_space(n: int) -> Fan:
    if n < 1:
        raise ValueError("projective_space needs n >= 1")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [c for c in combinations(range(n + 1), n)]
    return Fan(n, rays, cones)


def hirzebruch(n: int) -> Fan:
    if n < 0:
        raise ValueError("hirzebruch needs n >= 0")
    rays = [(1, 0), (0, 1), (-1, n), (0, -1)]
    return Fan(2, rays, [(0, 1), (1, 2), (2, 3), (0, 3)])


def product(f: Fan, g: Fan) -> Fan:
    rays = [tuple(v) + (0,) * g.rank for v in f.rays]
    rays += [(0,) * f.rank + tuple(w) for w in g.rays]
    off = f.n_rays
    cones = [tuple(a) + tuple(off + j for j in b) for a in f.max_cones for b in g.max_cones]
    return Fan(f.rank + g.rank, rays, cones)


def star_subdivision(f: Fan, ray) -> Fan:
    """Insert ``ray`` (appended as the last ray) by starring the max cone containing it."""
    ray = tuple(int(x) for x in ray)
    if len(ray) != f.rank or not is_primitive(ray):
        raise ValidationError(f"new ray {ray} must be primitive of length {f.rank}")
    if ray in f.rays:
        raise ValidationError(f"ray {ray} is already in the fan")
    host = None
    for c in f.max_cones:
        vals = [dot(u, ray) for u in dual_generators(f.cone_rays(c), f.rank)]
        if all(v >= 0 for v in vals):
            if any(v == 0 for v in vals) or rank(f.cone_rays(c)) < f.rank:
                raise ValidationError(f"ray {ray} lies on a wall of cone {list(c)}")
            host = c
            break
    if host is None:
        raise ValidationError(f"ray {ray} lies outside the support")
    new = f.n_rays
    cones = [c for c in f.max_cones if c != host]
    for facet in f._facets[host]:
        cones.append(tuple(sorted(facet)) + (new,))
    return Fan(f.rank, list(f.rays) + [ray], cones)


def blowup_p2(points: int = 1) -> Fan:
    """P^2 blown up at one or two torus-fixed points."""
    f = star_subdivision(projective_space(2), (1, 1))
    if points >= 2:
        f = star_subdivision(f, (-1, 0))
    if points > 2:
        raise ValueError("only one or two points supported")
    return f


@dataclass(frozen=True)
class ToricMorphismData:
    """A refinement ``source -> target``; ``ray_map[i]`` is the source index of target ray i."""

    source: Fan
    target: Fan
    ray_map: tuple = None

    def __post_init__(self):
        if self.source.rank != self.target.rank:
            raise ValidationError("source and target ranks differ")
        if self.ray_map is None:
            try:
                rm = tuple(self.source.rays.index(v) for v in self.target.rays)
            except ValueError:
                raise ValidationError("target rays do not embed in source rays") from None
            object.__setattr__(self, "ray_map", rm)
        for c in self.source.max_cones:
            if not any(
                all(dot(u, self.source.rays[i]) >= 0 for i in c for u in dual_generators(self.target.cone_rays(t), self.target.rank))
                for t in self.target.max_cones
            ):
                raise ValidationError(f"source cone {list(c)} lies in no target cone: not a refinement")

    @property
    def exceptional(self) -> tuple:
        """Source ray indices that are not target rays."""
        hit = set(self.ray_map)
        return tuple(i for i in range(self.source.n_rays) if i not in hit)

    @classmethod
    def identity(cls, f: Fan) -> "ToricMorphismData":
        return cls(f, f)


def blowup(f: Fan, ray) -> ToricMorphismData:
    return ToricMorphismData(star_subdivision(f, ray), f)


FIXTURE_BUILDERS = {
    "p1": lambda: projective_space(1),
    "p2": lambda: projective_space(2),
    "p3": lambda: projective_space(3),
    "p1xp1": lambda: product(projective_space(1), projective_space(1)),
    **{f"f{n}": (lambda n=n: hirzebruch(n)) for n in range(5)},
    "blowup1_p2": lambda: blowup_p2(1),
    "blowup2_p2": lambda: blowup_p2(2),
}
