import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SURFACES, fixture_fan
from toriclift.divisor import (
    QDivisor,
    canonical_divisor,
    class_group,
    frac,
    h0,
    intersection_matrix,
    is_ample,
    is_cartier,
    is_nef,
    monomial_basis,
    principal_divisor,
    pullback,
    round_down,
    round_up,
    section_polytope,
    surface_intersection,
    upper_frac,
)
from toriclift.errors import UnsupportedRankError, ValidationError
from toriclift.fan import (
    HIRZEBRUCH_E1,
    HIRZEBRUCH_E2,
    HIRZEBRUCH_F,
    Fan,
    blowup,
    hirzebruch,
    projective_space,
)
from toriclift.lattice import solve

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@settings(max_examples=200, deadline=None)
@given(st.lists(rationals, min_size=3, max_size=3))
def test_rounding_identities(coeffs):
    D = QDivisor(projective_space(2), coeffs)
    assert round_down(D) + frac(D) == D
    assert round_up(D) - upper_frac(D) == D
    assert all(0 <= c < 1 for c in frac(D).coeffs)
    assert all(0 <= c < 1 for c in upper_frac(D).coeffs)
    assert round_up(D) == -round_down(-D)


def test_rounding_example():
    D = QDivisor(projective_space(2), [Fraction(5, 2), Fraction(-1, 3), 0])
    assert round_down(D).coeffs == (2, -1, 0)
    assert round_up(D).coeffs == (3, 0, 0)
    assert upper_frac(D).coeffs == (Fraction(1, 2), Fraction(1, 3), 0)


@pytest.mark.parametrize("name", SURFACES + ["p1", "p3"])
def test_class_group_is_cokernel(name):
    f = fixture_fan(name)
    cg = class_group(f)
    assert cg.free_rank == f.n_rays - f.rank
    assert cg.torsion == ()
    rng = random.Random(name)
    for _ in range(20):
        u = [rng.randint(-5, 5) for _ in range(f.rank)]
        assert cg.is_trivial(principal_divisor(f, u))
    for k, g in enumerate(cg.generators):
        free, _ = cg.class_of(QDivisor(f, g))
        assert free == tuple(int(j == k) for j in range(cg.free_rank))


def test_class_group_torsion():
    # P^2 / (Z/3): rays (1,0), (0,1), (-1,-1) in the lattice spanned with index 3
    f = Fan(2, [(2, -1), (-1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    cg = class_group(f)
    assert cg.free_rank == 1 and cg.torsion == (3,)


def test_p2_line_class():
    cg = class_group(projective_space(2))
    for i in range(3):
        assert cg.class_of(QDivisor.prime(projective_space(2), i)) == ((1,), ())


@pytest.mark.parametrize("n", range(5))
def test_hirzebruch_relations(n):
    f = hirzebruch(n)
    cg = class_group(f)
    E1, E2, F = (QDivisor.prime(f, i) for i in (HIRZEBRUCH_E1, HIRZEBRUCH_E2, HIRZEBRUCH_F))
    assert cg.equivalent(E2, E1 + n * F)
    assert surface_intersection(E1, E1) == -n
    assert surface_intersection(E2, E2) == n
    assert surface_intersection(E1, E2) == 0
    assert surface_intersection(E1, F) == 1
    assert surface_intersection(F, F) == 0


def moved_self_intersection(f, i):
    """D_i . D_i via a linearly equivalent divisor avoiding D_i (independent of wall relations)."""
    v = f.rays[i]
    u = solve([list(v)], [-1])
    # integral u with <u, v_i> = -1 exists since v_i is primitive
    for cand in product(range(-3, 4), repeat=2):
        if cand[0] * v[0] + cand[1] * v[1] == -1:
            u = cand
            break
    moved = QDivisor.prime(f, i) + principal_divisor(f, u)
    assert moved.coeffs[i] == 0
    return sum(moved.coeffs[j] for j in f.neighbours(i))


@pytest.mark.parametrize("name", SURFACES)
def test_self_intersections_by_moving(name):
    f = fixture_fan(name)
    M = intersection_matrix(f)
    for i in range(f.n_rays):
        assert M[i][i] == moved_self_intersection(f, i)


@pytest.mark.parametrize("name", SURFACES)
def test_intersection_respects_linear_equivalence(name):
    f = fixture_fan(name)
    rng = random.Random(name)
    for _ in range(20):
        D = QDivisor(f, [rng.randint(-3, 3) for _ in range(f.n_rays)])
        P = principal_divisor(f, [rng.randint(-3, 3) for _ in range(2)])
        for j in range(f.n_rays):
            assert surface_intersection(P, QDivisor.prime(f, j)) == 0
        assert surface_intersection(D + P, D + P) == surface_intersection(D, D)


def test_canonical_self_intersection_p2():
    f = projective_space(2)
    K = canonical_divisor(f)
    assert surface_intersection(K, K) == 9


def test_intersection_needs_surface():
    with pytest.raises(UnsupportedRankError):
        intersection_matrix(projective_space(3))


@pytest.mark.parametrize("name", SURFACES)
def test_ampleness_matches_kleiman(name):
    # on a smooth complete toric surface, D is ample iff D . D_i > 0 for every invariant curve
    f = fixture_fan(name)
    rng = random.Random(name)
    for _ in range(60):
        D = QDivisor(f, [Fraction(rng.randint(-6, 12), rng.randint(1, 4)) for _ in range(f.n_rays)])
        dots = [surface_intersection(D, QDivisor.prime(f, i)) for i in range(f.n_rays)]
        assert is_ample(D) == all(x > 0 for x in dots)
        assert is_nef(D) == all(x >= 0 for x in dots)


def test_ampleness_p4():
    f = projective_space(4)
    assert is_ample(QDivisor.prime(f, 0))
    assert not is_ample(QDivisor.zero(f))
    assert is_nef(QDivisor.zero(f))


def test_cartier():
    f = projective_space(2)
    assert is_cartier(QDivisor(f, [1, 0, 0]))
    # P(1,1,2): ray weights (1, 2, 1), so only D_1 is Cartier
    g = Fan(2, [(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
    assert not is_cartier(QDivisor.prime(g, 0))
    assert is_cartier(QDivisor.prime(g, 1))


def brute_h0(D, radius=20):
    f = D.fan
    return sum(
        1
        for u in product(range(-radius, radius + 1), repeat=f.rank)
        if all(sum(a * b for a, b in zip(u, v)) >= -c for v, c in zip(f.rays, D.coeffs))
    )


@pytest.mark.parametrize("name", SURFACES)
def test_h0_against_brute_force(name):
    f = fixture_fan(name)
    rng = random.Random(name)
    for _ in range(25):
        D = QDivisor(f, [rng.randint(-2, 4) for _ in range(f.n_rays)])
        assert h0(D) == brute_h0(D)


@pytest.mark.parametrize("backend", ["compiled", "python"])
def test_h0_p2(backend):
    f = projective_space(2)
    for d in range(9):
        assert len(monomial_basis(QDivisor(f, [d, 0, 0]), backend=backend)) == (d + 1) * (d + 2) // 2


def test_empty_polytope():
    f = projective_space(2)
    D = QDivisor(f, [-1, 0, 0])
    assert section_polytope(D).is_empty()
    assert h0(D) == 0


def test_polytope_needs_complete_fan():
    f = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
    with pytest.raises(ValidationError):
        section_polytope(QDivisor(f, [1, 1]))


@pytest.mark.parametrize("name", SURFACES)
def test_pullback_intersections(name):
    f = fixture_fan(name)
    c = f.max_cones[0]
    ray = tuple(a + b for a, b in zip(f.rays[c[0]], f.rays[c[1]]))
    mor = blowup(f, ray)
    (e,) = mor.exceptional
    E = QDivisor.prime(mor.source, e)
    assert surface_intersection(E, E) == -1
    rng = random.Random(name)
    for _ in range(10):
        D1 = QDivisor(f, [rng.randint(-3, 3) for _ in range(f.n_rays)])
        D2 = QDivisor(f, [rng.randint(-3, 3) for _ in range(f.n_rays)])
        P1, P2 = pullback(mor, D1), pullback(mor, D2)
        assert surface_intersection(P1, E) == 0
        assert surface_intersection(P1, P2) == surface_intersection(D1, D2)
