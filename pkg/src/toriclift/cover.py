"""
Cyclic covers ``pi: Y -> X`` obtained by taking the N-th root of an
effective divisor D with ``L^N = O(D)``.

Y is never built as a scheme.  Everything is read off the algebra
``pi_* O_Y = sum_{i<N} L^{-i}([iD/N])``: cohomology, Euler characteristic,
genus, the Hurwitz canonical class, and the data lifting the cover over
W_2.

Two branch modes are supported.  ``invariant``: the branch divisor is the
torus-invariant D itself.  ``general``: the branch is a general member of
the linear system |D|, with D only naming its class; the member is reduced
and irreducible, and smooth by Bertini once the class is ample (ample is
very ample on a smooth projective toric variety).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd

from .cohomology import h_numbers
from .divisor import (
    QDivisor,
    canonical_divisor,
    class_group,
    is_ample,
    principal_divisor,
    round_down,
)
from .errors import HypothesisError, UnsupportedRankError, ValidationError
from .fan import is_smooth, projective_space, require_complete
from .lattice import solve
from .witt import WittScalar, _is_prime, verify_section_surjectivity


@dataclass(frozen=True)
class P1Curve:
    """P^1 with distinct marked points; divisors are multiplicity lists, L is a degree."""

    name: str = "P1"

    def to_json(self):
        return {"curve": self.name}


@dataclass(frozen=True)
class CoverSpec:
    base: object
    L: tuple
    N: int
    D: tuple
    p: int
    branch: str = "invariant"

    def __post_init__(self):
        object.__setattr__(self, "L", tuple(Fraction(x) for x in self.L))
        object.__setattr__(self, "D", tuple(Fraction(x) for x in self.D))
        if self.N < 1:
            raise ValidationError("N must be a positive integer")
        if not _is_prime(self.p):
            raise ValidationError(f"p = {self.p} is not prime")
        if self.branch not in ("invariant", "general"):
            raise ValidationError("branch must be 'invariant' or 'general'")
        if any(x.denominator != 1 for x in self.L + self.D):
            raise ValidationError("L and D must be integral")
        if any(x < 0 for x in self.D):
            raise ValidationError("D must be effective")
        if self.is_curve:
            if len(self.L) != 1:
                raise ValidationError("on P1 the line bundle L is given by its degree alone")
            if self.branch == "general":
                raise ValidationError("P1 branch points are given explicitly")
        else:
            n = self.base.n_rays
            if len(self.L) != n or len(self.D) != n:
                raise ValidationError(f"L and D need {n} coefficients")

    @property
    def is_curve(self) -> bool:
        return isinstance(self.base, P1Curve)

    @property
    def L_div(self) -> QDivisor:
        return QDivisor(self.base, self.L)

    @property
    def D_div(self) -> QDivisor:
        return QDivisor(self.base, self.D)

    def class_ok(self) -> bool:
        """N [L] = [D]."""
        if self.is_curve:
            return self.N * self.L[0] == sum(self.D)
        return class_group(self.base).equivalent(self.N * self.L_div, self.D_div)

    def check_hypotheses(self):
        if gcd(self.N, self.p) != 1:
            raise HypothesisError(f"N = {self.N} not prime to p = {self.p}")
        if not self.class_ok():
            raise HypothesisError("class mismatch: N [L] != [D]")


def _multiplicities(spec: CoverSpec) -> list:
    """(component label, multiplicity) of the branch divisor."""
    if spec.branch == "general":
        return [("general", 1)] if any(spec.D) else []
    return [(i, int(a)) for i, a in enumerate(spec.D) if a > 0]


def cover_summands(spec: CoverSpec) -> list:
    """Divisors -i L + [i D / N], i = 0..N-1 (degrees on a P1 base)."""
    if not spec.class_ok():
        raise HypothesisError("class mismatch: N [L] != [D]")
    N = spec.N
    if spec.is_curve:
        return [-i * int(spec.L[0]) + sum(floor(Fraction(i * a, N)) for a in spec.D) for i in range(N)]
    if spec.branch == "general":
        # a general member of |D| is reduced and irreducible, so [iD/N] = 0 for i < N
        return [-i * spec.L_div for i in range(N)]
    return [-i * spec.L_div + round_down(Fraction(i, N) * spec.D_div) for i in range(N)]


def smooth_branch_check(spec: CoverSpec) -> bool:
    if spec.is_curve:
        return True
    fan = spec.base
    if spec.branch == "general":
        # Bertini: a general member of a very ample system is smooth in any dimension
        return not any(spec.D) or is_ample(spec.D_div)
    if fan.rank > 2:
        raise UnsupportedRankError("smooth_branch_check supports curves and surfaces")
    if fan.rank == 1:
        return True
    supp = [i for i, a in enumerate(spec.D) if a > 0]
    return not any(j in supp for i in supp for j in fan.neighbours(i))


def ramification_profile(spec: CoverSpec) -> list:
    """(component, e) with e = N / gcd(N, multiplicity)."""
    return [(c, spec.N // gcd(spec.N, a)) for c, a in _multiplicities(spec)]


def _p1_cohomology(deg: int) -> tuple:
    return (max(deg + 1, 0), max(-deg - 1, 0))


@dataclass
class CanonicalClass:
    """K_Y = pi^*(divisor); ``degree`` is set when Pic of the base is Z."""

    divisor: object
    degree: object
    general_type: bool
    derived_extension: bool

    def to_json(self):
        if isinstance(self.divisor, QDivisor):
            div = [str(c) for c in self.divisor.coeffs]
        else:
            div = str(self.divisor)
        return {
            "pullback_of": div,
            "degree": None if self.degree is None else str(self.degree),
            "general_type": self.general_type,
            "derived_extension": self.derived_extension,
        }


def canonical_and_general_type(spec: CoverSpec) -> CanonicalClass:
    """K_Y = pi^*(K_X + sum (1 - 1/e_j) D_j,red); general type iff that Q-divisor is ample."""
    if not smooth_branch_check(spec):
        raise HypothesisError("branch divisor has singular reduced support")
    prof = ramification_profile(spec)
    derived = any(a > 1 for _, a in _multiplicities(spec))
    if spec.is_curve:
        deg = Fraction(-2) + sum(Fraction(e - 1, e) for _, e in prof)
        return CanonicalClass(deg, deg, deg > 0, derived)
    fan = spec.base
    B = canonical_divisor(fan)
    if spec.branch == "general":
        if prof:
            B = B + Fraction(spec.N - 1, spec.N) * spec.D_div
    else:
        for comp, e in prof:
            B = B + QDivisor.prime(fan, comp, Fraction(e - 1, e))
    cg = class_group(fan)
    degree = cg.qclass_of(B)[0] if cg.free_rank == 1 else None
    return CanonicalClass(B, degree, is_ample(B), derived)


@dataclass
class CoverReport:
    spec: CoverSpec
    summands: list
    summand_cohomology: list
    chi: int
    h0: int
    genus: object
    smooth: bool
    ramification: list
    canonical: CanonicalClass = None
    lift: dict = None

    def to_json(self) -> dict:
        if self.spec.is_curve:
            summ = self.summands
        else:
            summ = [[str(c) for c in s.coeffs] for s in self.summands]
        return {
            "N": self.spec.N,
            "p": self.spec.p,
            "branch": self.spec.branch,
            "summands": summ,
            "summand_cohomology": [list(h) for h in self.summand_cohomology],
            "chi_O_Y": self.chi,
            "h0_O_Y": self.h0,
            "genus": self.genus,
            "smooth": self.smooth,
            "ramification": [[c, e] for c, e in self.ramification],
            "canonical": None if self.canonical is None else self.canonical.to_json(),
            "lift": self.lift,
        }

    def summary(self) -> str:
        lines = [
            f"cyclic cover of degree {self.spec.N} (p = {self.spec.p}, branch = {self.spec.branch})",
            f"  smooth: {self.smooth}",
            f"  chi(O_Y) = {self.chi}, h^0(O_Y) = {self.h0}",
        ]
        if self.genus is not None:
            lines.append(f"  genus(Y) = {self.genus}")
        lines.append(f"  ramification: {self.ramification}")
        if self.canonical is not None:
            c = self.canonical
            lines.append(f"  K_Y = pi^*({c.to_json()['pullback_of']}), general type: {c.general_type}")
            if c.degree is not None:
                lines.append(f"  degree of the pulled-back class: {c.degree}")
        if self.lift is not None:
            lines.append(f"  lift over W_2: {'ok' if self.lift['success'] else 'FAILED'}")
        return "\n".join(lines)


def cover_invariants(spec: CoverSpec) -> CoverReport:
    summands = cover_summands(spec)
    if spec.is_curve:
        coh = [_p1_cohomology(s) for s in summands]
    else:
        fan = spec.base
        if fan.rank > 2:
            raise UnsupportedRankError("cover_invariants supports bases of dimension <= 2")
        if not is_smooth(fan):
            raise HypothesisError("base fan is not smooth")
        require_complete(fan)
        coh = [h_numbers(s, 0) for s in summands]
    chi = sum(sum((-1) ** i * x for i, x in enumerate(h)) for h in coh)
    h0 = sum(h[0] for h in coh)
    dim = 1 if spec.is_curve else spec.base.rank
    genus = None
    if dim == 1 and h0 == 1:
        genus = sum(h[1] for h in coh)
    smooth = smooth_branch_check(spec)
    report = CoverReport(spec, summands, coh, chi, h0, genus, smooth, ramification_profile(spec))
    if smooth:
        report.canonical = canonical_and_general_type(spec)
    return report


def _toric_view(spec: CoverSpec):
    """(fan, L, D, general?) with a P1 base replaced by the P^1 fan."""
    if spec.is_curve:
        f = projective_space(1)
        return f, QDivisor(f, (spec.L[0], 0)), QDivisor(f, (sum(spec.D), 0)), True
    return spec.base, spec.L_div, spec.D_div, spec.branch == "general"


def lift_cover(spec: CoverSpec) -> dict:
    """Assemble the W_2 lifting data of the cover and check each piece.

    The base lifts as X(fan, W_2) with the same combinatorial data; L and D
    lift with the same coefficients; the section s of L^N cutting out D
    lifts because r: H^0(X~, L~^N) -> H^0(X, L^N) is onto (witnessed
    monomial by monomial).  The lifted algebra has the same N summands.
    """
    if gcd(spec.N, spec.p) != 1:
        raise HypothesisError(f"N = {spec.N} not prime to p = {spec.p}")
    if not smooth_branch_check(spec):
        raise HypothesisError("branch divisor has singular reduced support; smoothness is not guaranteed")
    spec.check_hypotheses()
    fan, L, D, general = _toric_view(spec)
    if not is_smooth(fan):
        raise HypothesisError("base fan is not smooth")
    p, N = spec.p, spec.N
    L_lift = QDivisor(fan, L.coeffs)
    D_lift = QDivisor(fan, D.coeffs)
    LN = N * L_lift
    witness = verify_section_surjectivity(LN, p)
    section = {}
    if general:
        section = {
            "kind": "general member of |L^N|",
            "lift": "coefficientwise Teichmueller lift of every monomial",
            "monomials": len(witness.basis),
        }
        section_ok = witness.ok and len(witness.basis) > 0
    else:
        # D = div(chi^u0) + N L'
        diff = D - N * L
        u0 = solve([list(v) for v in fan.rays], diff.coeffs)
        section_ok = (
            u0 is not None
            and all(x.denominator == 1 for x in u0)
            and principal_divisor(fan, tuple(int(x) for x in u0)) == diff
            and tuple(int(x) for x in u0) in witness.basis
        )
        u0i = None if u0 is None else [int(x) for x in u0]
        lifted = WittScalar.teichmuller(p, 1)
        section = {"kind": "monomial", "u": u0i, "lift_coefficient": [lifted.a0, lifted.a1]}
    cg = class_group(fan)
    relation_ok = cg.equivalent(LN, D_lift)
    summands = cover_summands(spec)
    if spec.is_curve:
        lifted_summands = list(summands)
    else:
        lifted_summands = [[str(c) for c in QDivisor(fan, s.coeffs).coeffs] for s in summands]
    ok = section_ok and relation_ok and witness.ok and L_lift.coeffs == L.coeffs and D_lift.coeffs == D.coeffs
    return {
        "success": ok,
        "base_lift": {"fan": fan.to_json(), "ring": "W2"},
        "L_lift": [str(c) for c in L_lift.coeffs],
        "D_lift": [str(c) for c in D_lift.coeffs],
        "relation_L^N=O(D)": relation_ok,
        "section": section,
        "surjectivity_basis_size": len(witness.basis),
        "lifted_summands": lifted_summands,
    }


def analyze(spec: CoverSpec, with_lift: bool = False) -> CoverReport:
    report = cover_invariants(spec)
    if with_lift:
        report.lift = lift_cover(spec)
    return report
