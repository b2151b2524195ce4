"""Acceptance criteria, one test each.  Every test prints a PASS/FAIL line and respects its time budget."""
import random
import time
from fractions import Fraction
from itertools import product
from math import ceil, floor, gcd

import pytest

from conftest import ACCEPTANCE_LINES, ALL_FIXTURES, SURFACES, fixture_fan
from toriclift.cohomology import cech_oracle, cohomology_table, h_numbers, verify_kv_vanishing, weight_box
from toriclift.cover import CoverSpec, P1Curve, canonical_and_general_type, cover_invariants, lift_cover, smooth_branch_check
from toriclift.divisor import (
    QDivisor,
    canonical_divisor,
    check_pullback_rounding,
    class_group,
    h0,
    pullback,
    random_ample_divisor,
    surface_intersection,
)
from toriclift.fan import HIRZEBRUCH_E1, HIRZEBRUCH_E2, HIRZEBRUCH_F, blowup, hirzebruch, projective_space
from toriclift.witt import WittScalar, elements, lift_p, reduction_r, scalar_multiple, strong_lifting_certificate


class Criterion:
    def __init__(self, number, title, budget=None):
        self.number, self.title, self.budget = number, title, budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and (self.budget is None or elapsed < self.budget)
        budget = f" (budget {self.budget:g} s)" if self.budget else ""
        line = f"criterion {self.number:2d} {'PASS' if ok else 'FAIL'}: {self.title} [{elapsed:.2f} s{budget}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        if exc_type is None and not ok:
            pytest.fail(f"criterion {self.number} exceeded its time budget: {elapsed:.2f} s")
        return False


def test_criterion_01_hirzebruch_identities():
    with Criterion(1, "Hirzebruch class and intersection identities, n in {0,2,4}", 1.0):
        for n in (0, 2, 4):
            f = hirzebruch(n)
            E1, E2, F = (QDivisor.prime(f, i) for i in (HIRZEBRUCH_E1, HIRZEBRUCH_E2, HIRZEBRUCH_F))
            assert class_group(f).equivalent(E2, E1 + n * F)
            assert surface_intersection(E1, E1) == -n
            assert surface_intersection(E2, E2) == n
            assert surface_intersection(E1, E2) == 0


def test_criterion_02_hirzebruch_double_cover():
    with Criterion(2, "F_2 double cover branched on E_1 + E_2, p = 3", 1.0):
        f = hirzebruch(2)
        L = QDivisor.prime(f, HIRZEBRUCH_E1) + QDivisor.prime(f, HIRZEBRUCH_F)  # E_1 + (n/2) F
        D = QDivisor.prime(f, HIRZEBRUCH_E1) + QDivisor.prime(f, HIRZEBRUCH_E2)
        spec = CoverSpec(f, L.coeffs, 2, D.coeffs, 3)
        assert class_group(f).equivalent(2 * L, D)
        assert smooth_branch_check(spec)
        assert lift_cover(spec)["success"]


def test_criterion_03_projective_cover_degree():
    with Criterion(3, "deg(K + (N-1)/N H) = N - (n+2) on P^n, n <= 4, N <= 12", 1.0):
        for n in range(1, 5):
            f = projective_space(n)
            for N in range(1, 13):
                for p in (2, 3, 5, 7, 11, 13):
                    if gcd(N, p) != 1:
                        continue
                    spec = CoverSpec(f, (1,) + (0,) * n, N, (N,) + (0,) * n, p, "general")
                    c = canonical_and_general_type(spec)
                    assert c.degree == N - (n + 2)
                    assert c.general_type == (N > n + 2)


def test_criterion_04_kv_vanishing():
    with Criterion(4, "KV vanishing on fixture surfaces, 50 ample H each, p in {2,3,5}", 60.0):
        rng = random.Random(20240604)
        for name in SURFACES:
            f = fixture_fan(name)
            for _ in range(50):
                H = random_ample_divisor(f, rng, max_den=6)
                for p in (2, 3, 5):
                    rep = verify_kv_vanishing(f, H, p)
                    assert not any(rep.h[1:]), (name, H, p, rep.h)
                    assert not any(rep.log_h[: f.rank]), (name, H, p, rep.log_h)


def test_criterion_05_cohomology_soundness():
    with Criterion(5, "Cech = weight complex on every weight, Serre duality, Riemann-Roch, 200 instances", 120.0):
        rng = random.Random(5)
        for k in range(200):
            name = ALL_FIXTURES[k % len(ALL_FIXTURES)]
            f = fixture_fan(name)
            D = QDivisor(f, [rng.randint(-4, 4) for _ in range(f.n_rays)])
            table = cohomology_table(D)
            by_weight = dict(table.by_weight)
            lo, hi = weight_box(D, padding=2)
            for u in product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
                assert cech_oracle(D, u) == by_weight.get(u, (0,) * (f.rank + 1))
            K = canonical_divisor(f)
            assert table.h == tuple(reversed(h_numbers(K - D)))
            if f.rank == 2:
                rr = 1 + (surface_intersection(D, D) - surface_intersection(K, D)) / 2
                assert table.euler_characteristic() == rr


def test_criterion_06_p2_sections():
    with Criterion(6, "h^0(P^2, O(d)) = (d+1)(d+2)/2, d = 0..8"):
        f = projective_space(2)
        for d in range(9):
            assert h0(QDivisor(f, [d, 0, 0])) == (d + 1) * (d + 2) // 2


def test_criterion_07_witt_ring():
    with Criterion(7, "W_2(F_p) ring axioms, isomorphism to Z/p^2, scalar exactness, p <= 7", 10.0):
        for p in (2, 3, 5, 7):
            els = elements(p)
            zero, one = WittScalar.zero(p), WittScalar.one(p)
            for x in els:
                assert x + zero == x and x * one == x and x + (-x) == zero
            for x, y in product(els, repeat=2):
                assert x + y == y + x and x * y == y * x
            for x, y, z in product(els, repeat=3):
                assert (x + y) + z == x + (y + z)
                assert (x * y) * z == x * (y * z)
                assert x * (y + z) == x * y + x * z
            n = p * p
            found = 0
            for g in els:
                multiples = [scalar_multiple(k, g) for k in range(n)]
                if len(set(multiples)) != n:
                    continue
                phi = {x: k for k, x in enumerate(multiples)}
                if all(phi[x * y] == phi[x] * phi[y] % n for x in els for y in els):
                    found += 1
            assert found == 1
            assert {lift_p(a, p) for a in range(p)} == {x for x in els if reduction_r(x) == 0}


def test_criterion_08_lifting_certificates():
    with Criterion(8, "strong-liftability certificates, 20 effective classes, p in {2,3,5}", 30.0):
        for name in ["p2", "p3", "f0", "f1", "f2", "f3", "f4", "blowup1_p2", "blowup2_p2"]:
            f = fixture_fan(name)
            for p in (2, 3, 5):
                cert = strong_lifting_certificate(f, p, count=20)
                assert cert.valid, (name, p)
                assert len(cert.section_witnesses) == 20


def pullback_oracle(mor, H, a, b):
    """f^*H when the exceptional ray is v_a + v_b inside a smooth cone: coefficient h_a + h_b there."""
    coeffs = list(H.coeffs) + [H.coeffs[a] + H.coeffs[b]]
    return coeffs


def test_criterion_09_pullback_rounding():
    with Criterion(9, "ceil(f^*H) = f^*ceil(H) - sum [sum b_j q_ji] E_i on 200 blowups", 10.0):
        rng = random.Random(9)
        for _ in range(200):
            f = fixture_fan(rng.choice(SURFACES))
            a, b = rng.choice(f.max_cones)
            mor = blowup(f, tuple(x + y for x, y in zip(f.rays[a], f.rays[b])))
            (e,) = mor.exceptional
            H = QDivisor(f, [Fraction(rng.randint(-12, 12), rng.randint(1, 6)) for _ in range(f.n_rays)])
            assert check_pullback_rounding(mor, H)
            # independent evaluation of both sides
            fH = pullback_oracle(mor, H, a, b)
            assert list(pullback(mor, H).coeffs) == fH
            Hc = [ceil(c) for c in H.coeffs]
            bj = [c - h for c, h in zip(Hc, H.coeffs)]
            rhs = Hc + [Hc[a] + Hc[b] - floor(bj[a] + bj[b])]
            assert [ceil(c) for c in fH] == rhs
            E = QDivisor.prime(mor.source, e)
            D1 = QDivisor(f, [rng.randint(-3, 3) for _ in range(f.n_rays)])
            P1, PH = pullback(mor, D1), pullback(mor, H)
            assert surface_intersection(P1, E) == 0
            assert surface_intersection(P1, PH) == surface_intersection(D1, H)


def hurwitz_genus(N, branch_points):
    # reduced branch: each point has a single preimage with index N
    return (N * (-2) + branch_points * (N - 1)) // 2 + 1


def test_criterion_10_curve_covers():
    with Criterion(10, "cyclic covers of P^1: pushforward genus = Hurwitz genus"):
        cases = [(2, k) for k in range(4, 13, 2)] + [(3, k) for k in range(3, 13, 3)]
        for N, k in cases:
            spec = CoverSpec(P1Curve(), (k // N,), N, (1,) * k, 5)
            rep = cover_invariants(spec)
            assert rep.h0 == 1
            assert rep.genus == hurwitz_genus(N, k)
