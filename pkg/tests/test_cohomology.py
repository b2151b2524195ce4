import random
from fractions import Fraction
from itertools import product
from math import comb

import pytest

from conftest import ALL_FIXTURES, SURFACES, fixture_fan
from toriclift.cohomology import (
    cech_oracle,
    cech_table,
    cohomology_table,
    h_numbers,
    reduced_cohomology,
    verify_kv_vanishing,
    weight_box,
)
from toriclift.divisor import QDivisor, canonical_divisor, surface_intersection
from toriclift.errors import HypothesisError, UnsupportedRankError, ValidationError
from toriclift.fan import Fan, hirzebruch, product as fan_product, projective_space


def random_divisor(f, rng, lo=-4, hi=4):
    return QDivisor(f, [rng.randint(lo, hi) for _ in range(f.n_rays)])


def test_reduced_cohomology_small_complexes():
    # boundary of a triangle is a circle
    circle = ((), (0,), (1,), (2,), (0, 1), (1, 2), (0, 2))
    assert reduced_cohomology(circle) == {-1: 0, 0: 0, 1: 1}
    # the empty complex has reduced cohomology in degree -1
    assert reduced_cohomology(((),)) == {-1: 1}
    # two points
    assert reduced_cohomology(((), (0,), (1,))) == {-1: 0, 0: 1}


def p2_expected(d):
    h0 = comb(d + 2, 2) if d >= 0 else 0
    h2 = comb(-d - 1, 2) if d <= -3 else 0
    return (h0, 0, h2)


@pytest.mark.parametrize("d", range(-7, 8))
def test_p2_line_bundles(d):
    f = projective_space(2)
    assert h_numbers(QDivisor(f, [d, 0, 0])) == p2_expected(d)


@pytest.mark.parametrize("d", range(-7, 5))
def test_p3_line_bundles(d):
    f = projective_space(3)
    h = h_numbers(QDivisor(f, [d, 0, 0, 0]))
    chi = (d + 1) * (d + 2) * (d + 3) // 6
    assert h[1] == h[2] == 0
    assert h[0] - h[3] == chi


def test_canonical_p2_weight():
    t = cohomology_table(canonical_divisor(projective_space(2)))
    assert t.h == (0, 0, 1)
    assert [u for u, _ in t.by_weight] == [(0, 0)]


@pytest.mark.parametrize("a,b", [(-2, 0), (-2, -2), (1, -3), (-3, 2), (0, 0)])
def test_kunneth_p1xp1(a, b):
    f = fan_product(projective_space(1), projective_space(1))
    h = h_numbers(QDivisor(f, [a, 0, b, 0]))

    def p1(d):
        return (max(d + 1, 0), max(-d - 1, 0))

    x, y = p1(a), p1(b)
    expected = (x[0] * y[0], x[0] * y[1] + x[1] * y[0], x[1] * y[1])
    assert h == expected


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_cech_agrees_on_every_weight(name):
    f = fixture_fan(name)
    rng = random.Random(name)
    for _ in range(8):
        D = random_divisor(f, rng)
        t = cohomology_table(D)
        got = dict(t.by_weight)
        lo, hi = weight_box(D)
        for u in product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
            assert cech_oracle(D, u) == got.get(u, (0,) * (f.rank + 1))


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_serre_duality(name):
    f = fixture_fan(name)
    K = canonical_divisor(f)
    rng = random.Random(name)
    for _ in range(10):
        D = random_divisor(f, rng)
        assert h_numbers(D) == tuple(reversed(h_numbers(K - D)))


@pytest.mark.parametrize("name", SURFACES)
def test_riemann_roch(name):
    f = fixture_fan(name)
    K = canonical_divisor(f)
    rng = random.Random(name)
    for _ in range(15):
        D = random_divisor(f, rng)
        chi = cohomology_table(D).euler_characteristic()
        assert chi == 1 + (surface_intersection(D, D) - surface_intersection(K, D)) / 2


@pytest.mark.parametrize("name", ["p2", "f3", "blowup2_p2", "p3"])
def test_padding_independence(name):
    f = fixture_fan(name)
    rng = random.Random(name)
    for _ in range(5):
        D = random_divisor(f, rng)
        assert cohomology_table(D, padding=1).h == cohomology_table(D, padding=3).h


@pytest.mark.parametrize("name", ["p2", "f2", "p3"])
def test_char_p_equals_char_0(name):
    # full subcomplexes of these fans have torsion-free homology
    f = fixture_fan(name)
    rng = random.Random(name)
    for _ in range(5):
        D = random_divisor(f, rng)
        h = h_numbers(D)
        for p in (2, 3):
            assert h_numbers(D, p) == h
            assert cech_table(D, p) == h


def test_backends_and_workers_agree():
    f = hirzebruch(3)
    rng = random.Random(7)
    for _ in range(5):
        D = random_divisor(f, rng)
        a = cohomology_table(D, backend="python")
        b = cohomology_table(D, backend="compiled")
        c = cohomology_table(D, workers=4)
        assert a == b == c


def test_hirzebruch_examples():
    f = hirzebruch(2)
    assert h_numbers(canonical_divisor(f)) == (0, 0, 1)
    assert h_numbers(QDivisor.prime(f, 1)) == (1, 1, 0)


def test_input_errors():
    with pytest.raises(UnsupportedRankError):
        cohomology_table(QDivisor.zero(projective_space(4)))
    with pytest.raises(ValidationError):
        cohomology_table(QDivisor(projective_space(2), [Fraction(1, 2), 0, 0]))
    singular = Fan(2, [(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(HypothesisError):
        cohomology_table(QDivisor.zero(singular))


def test_kv_example_p2():
    f = projective_space(2)
    H = QDivisor(f, [Fraction(5, 2), 0, 0])
    rep = verify_kv_vanishing(f, H, 5)
    assert rep.h[1] == rep.h[2] == 0
    assert rep.claimed_range == (1, 2)
    assert rep.claimed_range_pass and rep.log_claimed_pass and rep.full_vanishing
    js = rep.to_json()
    assert js["divisor"][0] == {"num": 5, "den": 2}


def test_kv_rejects_non_ample():
    f = projective_space(2)
    with pytest.raises(HypothesisError):
        verify_kv_vanishing(f, QDivisor(f, [-1, 0, 0]), 3)
