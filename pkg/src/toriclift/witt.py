"""
Witt vectors of length two over F_p and the lifting certificates built on them.

Components ``(a0, a1)`` are residues mod p.  Addition carries through the
integer polynomial ``C(x, y) = (x^p + y^p - (x + y)^p) / p``; multiplication
is ``(a0 b0, a0^p b1 + b0^p a1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import comb

from .divisor import QDivisor, class_group, monomial_basis
from .errors import HypothesisError, ValidationError
from .fan import Fan, is_smooth, require_complete


@lru_cache(maxsize=None)
def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


@lru_cache(maxsize=None)
def carry_coefficients(p: int) -> tuple:
    """Integer coefficients -binom(p, i) / p for i = 1..p-1 (the division is exact)."""
    return tuple(-(comb(p, i) // p) for i in range(1, p))


@lru_cache(maxsize=65536)
def carry(p: int, x: int, y: int) -> int:
    return sum(c * pow(x, i, p) * pow(y, p - i, p) for i, c in enumerate(carry_coefficients(p), 1)) % p


@dataclass(frozen=True)
class WittScalar:
    p: int
    a0: int
    a1: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValidationError(f"{self.p} is not prime")
        object.__setattr__(self, "a0", self.a0 % self.p)
        object.__setattr__(self, "a1", self.a1 % self.p)

    def _same(self, other):
        if not isinstance(other, WittScalar):
            return NotImplemented
        if other.p != self.p:
            raise ValidationError(f"mismatched primes {self.p} and {other.p}")
        return other

    def __add__(self, other):
        return witt_add(self, other)

    def __mul__(self, other):
        return witt_mul(self, other)

    def __neg__(self):
        b0 = -self.a0 % self.p
        return WittScalar(self.p, b0, -self.a1 - carry(self.p, self.a0, b0))

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return f"W{self.p}({self.a0}, {self.a1})"

    @classmethod
    def zero(cls, p):
        return cls(p, 0, 0)

    @classmethod
    def one(cls, p):
        return cls(p, 1, 0)

    @classmethod
    def teichmuller(cls, p, a):
        return cls(p, a, 0)


def witt_add(x: WittScalar, y: WittScalar) -> WittScalar:
    x._same(y)
    p = x.p
    return WittScalar(p, x.a0 + y.a0, x.a1 + y.a1 + carry(p, x.a0, y.a0))


def witt_mul(x: WittScalar, y: WittScalar) -> WittScalar:
    x._same(y)
    p = x.p
    return WittScalar(p, x.a0 * y.a0, pow(x.a0, p, p) * y.a1 + pow(y.a0, p, p) * x.a1)


def elements(p: int) -> list:
    return [WittScalar(p, a0, a1) for a0, a1 in product(range(p), repeat=2)]


def reduction_r(x: WittScalar) -> int:
    """W_2(k) -> k."""
    return x.a0


def lift_p(a: int, p: int) -> WittScalar:
    """k -> p W_2(k), a |-> p * [a]; on F_p this is V(a^p) = (0, a)."""
    return WittScalar(p, 0, pow(a, p, p))


def scalar_multiple(n: int, x: WittScalar) -> WittScalar:
    out = WittScalar.zero(x.p)
    for _ in range(n):
        out = out + x
    return out


def witt_table(p: int) -> dict:
    """Addition and multiplication tables indexed by elements in (a0, a1) order."""
    if not _is_prime(p) or p > 13:
        raise ValidationError("witt tables are produced for primes p <= 13")
    els = elements(p)
    return {
        "p": p,
        "elements": [[x.a0, x.a1] for x in els],
        "add": [[[z.a0, z.a1] for z in (x + y for y in els)] for x in els],
        "mul": [[[z.a0, z.a1] for z in (x * y for y in els)] for x in els],
    }


# --------------------------------------------------------------------------
# Section modules
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SectionModule:
    """Free module on the monomial basis of P_D over k (``ring='k'``) or W_2(k) (``ring='W2'``).

    ``coefficients`` is one element of the module: ints mod p over k,
    WittScalars over W_2.
    """

    basis: tuple
    ring: str
    p: int
    coefficients: tuple = None

    def __post_init__(self):
        if self.ring not in ("k", "W2"):
            raise ValidationError("ring must be 'k' or 'W2'")
        if self.coefficients is not None and len(self.coefficients) != len(self.basis):
            raise ValidationError("one coefficient per basis element")

    @property
    def rank(self) -> int:
        return len(self.basis)


def section_module(D: QDivisor, p: int, ring: str, coefficients=None) -> SectionModule:
    return SectionModule(tuple(monomial_basis(D)), ring, p, None if coefficients is None else tuple(coefficients))


def section_reduction(M: SectionModule) -> SectionModule:
    if M.ring != "W2":
        raise ValidationError("reduction starts from a W_2 module")
    coeffs = None if M.coefficients is None else tuple(reduction_r(c) for c in M.coefficients)
    return SectionModule(M.basis, "k", M.p, coeffs)


@dataclass(frozen=True)
class SurjectivityWitness:
    """For each monomial u of H^0(X, D): a W_2 section reducing to chi^u."""

    divisor: tuple
    p: int
    basis: tuple
    preimages: tuple

    @property
    def ok(self) -> bool:
        return len(self.preimages) == len(self.basis)


def verify_section_surjectivity(D: QDivisor, p: int) -> SurjectivityWitness:
    """Witness that r: H^0(X~, D~) -> H^0(X, D) is onto.

    The lifted divisor D~ carries the same coefficients, so its section
    module is free over W_2 on the lattice points of the same polytope.
    Each basis monomial chi^u lifts to [1] chi^u.  Any failure here is a
    defect, so it aborts.
    """
    if not D.is_integral():
        raise ValidationError("section surjectivity needs an integral divisor")
    lifted = QDivisor(D.fan, D.coeffs)  # same combinatorial data over W_2
    base = section_module(D, p, "k")
    up = section_module(lifted, p, "W2")
    if up.basis != base.basis:
        raise AssertionError("W_2 and k section bases differ")
    # reduction is coefficientwise: lift every basis monomial at once and reduce
    lifts = tuple(WittScalar.teichmuller(p, 1) for _ in up.basis)
    image = section_reduction(SectionModule(up.basis, "W2", p, lifts))
    if image.coefficients != (1,) * base.rank:
        raise AssertionError("lifted monomials do not reduce to the k-basis")
    preimages = list(zip(base.basis, lifts))
    return SurjectivityWitness(D.int_coeffs(), p, base.basis, tuple(preimages))


# --------------------------------------------------------------------------
# Strong liftability certificates
# --------------------------------------------------------------------------

@dataclass
class LiftCertificate:
    fan: Fan
    p: int
    picard_lift_ok: bool
    section_surjectivity_ok: bool
    picard_witnesses: list = field(default_factory=list)
    section_witnesses: list = field(default_factory=list)
    h2_structure_sheaf: int = None

    @property
    def valid(self) -> bool:
        return self.picard_lift_ok and self.section_surjectivity_ok

    def to_json(self) -> dict:
        return {
            "fan": self.fan.to_json(),
            "p": self.p,
            "valid": self.valid,
            "picard_lift_ok": self.picard_lift_ok,
            "section_surjectivity_ok": self.section_surjectivity_ok,
            "h2_structure_sheaf": self.h2_structure_sheaf,
            "picard_witnesses": self.picard_witnesses,
            "section_witnesses": [
                {"divisor": list(w.divisor), "basis_size": len(w.basis), "preimages": [[list(u), [c.a0, c.a1]] for u, c in w.preimages]}
                for w in self.section_witnesses
            ],
        }


def effective_family(fan: Fan, count: int = 20) -> list:
    """First ``count`` effective divisors with pairwise distinct classes, by total degree."""
    cg = class_group(fan)
    seen, out = set(), []
    total = 0
    while len(out) < count:
        for coeffs in _compositions(total, fan.n_rays):
            D = QDivisor(fan, coeffs)
            cl = cg.class_of(D)
            if cl not in seen:
                seen.add(cl)
                out.append(D)
                if len(out) == count:
                    break
        total += 1
        if total > 50:
            break
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def strong_lifting_certificate(fan: Fan, p: int, family=None, count: int = 20) -> LiftCertificate:
    """Check both lifting conditions for X(fan) over W_2(F_p).

    (i) every class-group generator is represented by an invariant divisor
    whose Cartier data (the same integers over W_2) defines the lift;
    (ii) section maps are onto for a finite family of effective classes.
    """
    if not _is_prime(p):
        raise ValidationError(f"{p} is not prime")
    if not is_smooth(fan):
        raise HypothesisError("fan is not smooth; strong liftability hypothesis violated")
    cg = class_group(fan)
    pic_ok = True
    pic_w = []
    for g in cg.generators:
        D = QDivisor(fan, g)
        lifted = QDivisor(fan, D.coeffs)
        ok = lifted.coeffs == D.coeffs and cg.class_of(lifted) == cg.class_of(D) and D.is_integral()
        pic_ok = pic_ok and ok
        pic_w.append({"generator": list(g), "class": [list(x) for x in cg.class_of(D)], "lift": list(g), "ok": ok})
    cert = LiftCertificate(fan, p, pic_ok, True, pic_w)
    if fan.rank <= 3:
        from .cohomology import h_numbers

        require_complete(fan)
        h = h_numbers(QDivisor.zero(fan), p)
        cert.h2_structure_sheaf = h[2] if len(h) > 2 else 0
        if any(h[1:]):
            cert.picard_lift_ok = False
    family = effective_family(fan, count) if family is None else family
    for D in family:
        if not D.is_effective():
            raise ValidationError("certificate family must consist of effective divisors")
        w = verify_section_surjectivity(D, p)
        cert.section_witnesses.append(w)
        if not w.ok:
            cert.section_surjectivity_ok = False
    return cert


def witt_characteristic_ok(p: int) -> bool:
    one = WittScalar.one(p)
    return scalar_multiple(p, one) != WittScalar.zero(p) and scalar_multiple(p * p, one) == WittScalar.zero(p)


__all__ = [
    "WittScalar", "witt_add", "witt_mul", "reduction_r", "lift_p", "carry", "elements", "witt_table",
    "SectionModule", "section_module", "section_reduction", "verify_section_surjectivity",
    "LiftCertificate", "strong_lifting_certificate", "effective_family",
    "scalar_multiple", "witt_characteristic_ok",
]
