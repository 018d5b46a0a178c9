import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from areal_mahler.errors import DomainError, MultipleRoot
from areal_mahler.poly import ComplexPoly, IntPoly, find_roots
from areal_mahler.zeros import (
    angular_discrepancy, discriminant_energy_bound, family_scan, truncated_energy, zero_stats,
)

import oracles
from strategies import int_coeffs

# (1/n^2) sum_{j != k} log(1/|w^j - w^k|) = -(log n)/n for the n-th roots of unity, n = 64,
# plus the M/n term; no pair is truncated at M = 10. Cross-checked by a double loop.
ROOTS_OF_UNITY_64_ENERGY_M10 = -math.log(64) / 64 + 10 / 64


def unity(n):
    return np.exp(2j * np.pi * np.arange(n) / n)


def test_stats_example_family_n4():
    st_ = zero_stats(find_roots(ComplexPoly([-1, 0, 0, 0, 4])))
    assert st_.min_modulus == pytest.approx(4 ** -0.25) and st_.max_modulus == pytest.approx(4 ** -0.25)
    assert st_.angular_discrepancy <= 0.25


def test_stats_roots_of_unity():
    w = unity(64)
    r = find_roots(ComplexPoly([-1] + [0] * 63 + [1]))
    s = zero_stats(r, cutoffs=(10.0,))
    assert s.angular_discrepancy <= 1 / 64 + 1e-12
    assert s.energy_truncated[10.0] == pytest.approx(ROOTS_OF_UNITY_64_ENERGY_M10, rel=1e-10)
    assert oracles.pair_energy(w, 10.0) == pytest.approx(ROOTS_OF_UNITY_64_ENERGY_M10, rel=1e-12)


def test_concentrated_angles():
    s = zero_stats(find_roots(ComplexPoly.from_roots([0.9, 0.95])))
    assert s.angular_discrepancy > 0.99


@pytest.mark.parametrize("n", [1, 2, 3, 7, 64, 100, 255, 512])
def test_roots_of_unity_discrepancy(n):
    assert angular_discrepancy(unity(n)) <= 1 / n + 1e-12


def test_discrepancy_matches_arc_enumeration(rng):
    for n in (3, 8, 17, 40):
        z = np.exp(2j * np.pi * rng.random(n)) * rng.uniform(0.5, 2, n)
        assert angular_discrepancy(z) == pytest.approx(oracles.arc_discrepancy(z), abs=1e-9)


@given(st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=30))
def test_discrepancy_in_unit_interval(u):
    d = angular_discrepancy(np.exp(2j * np.pi * np.array(u)))
    assert 0 <= d <= 1


def test_energy_matches_double_loop(rng):
    z = rng.normal(size=25) + 1j * rng.normal(size=25)
    for m in (0.5, 1, 5, 20):
        assert truncated_energy(z, m) == pytest.approx(oracles.pair_energy(z, m), rel=1e-12)


def test_energy_monotone_in_cutoff(rng):
    z = find_roots(ComplexPoly(rng.normal(size=30))).roots
    cuts = [0.5, 1, 2, 5, 10, 20]
    e = [truncated_energy(z, m) for m in cuts]
    n = z.size
    for (m1, e1), (m2, e2) in zip(zip(cuts, e), zip(cuts[1:], e[1:])):
        assert e1 <= e2 + (m2 - m1) / n + 1e-12


def test_energy_needs_two_roots():
    with pytest.raises(DomainError):
        truncated_energy(np.array([1j]), 1.0)


def test_inside_fraction_monotone():
    s = zero_stats(find_roots(ComplexPoly.from_roots([0.1, 0.5, 0.9, 1.5, 3.0])))
    vals = [s.inside_fraction(r) for r in np.linspace(0, 4, 41)]
    assert vals == sorted(vals) and vals[0] == 0 and vals[-1] == 1
    assert s.inside_fraction(1.0) == pytest.approx(0.6)
    assert s.min_modulus <= s.max_modulus


# ---------------------------------------------------------------- scans

def test_scan_example_family():
    row = family_scan("nzn_minus_1", [100])[0]
    assert row.min_modulus == pytest.approx(100 ** -0.01, abs=1e-8)
    assert row.max_modulus == pytest.approx(100 ** -0.01, abs=1e-8)
    assert row.min_modulus == pytest.approx(0.9550, abs=1e-4)


def test_scan_areal_root_tends_to_one():
    rows = family_scan("nzn", [10, 100, 1000])
    gaps = [abs(r.areal_root - 1) for r in rows]
    assert gaps[0] > gaps[1] > gaps[2]
    assert [r.angular_discrepancy for r in rows] == sorted([r.angular_discrepancy for r in rows], reverse=True)


def test_scan_reciprocal_family_uses_degree():
    row = family_scan("recip", [5])[0]
    assert row.degree == 10


def test_scan_custom_real_roots_stay_away_from_one():
    def gen(n):
        return ComplexPoly.from_roots(-1.0 - np.arange(n) / max(n - 1, 1)).coeffs
    rows = family_scan(gen, [5, 10, 15])
    for r in rows:
        assert r.areal_root > 1.2 and r.angular_discrepancy > 0.45


@pytest.mark.parametrize("n", [10, 50, 200])
def test_family_moduli_exact(n):
    row = family_scan("nzn_minus_1", [n])[0]
    assert abs(row.min_modulus - n ** (-1 / n)) <= 1e-8
    assert abs(row.max_modulus - n ** (-1 / n)) <= 1e-8


def test_scan_parallel_matches_serial():
    a = family_scan("nzn", [8, 16, 32], workers=1)
    b = family_scan("nzn", [8, 16, 32], workers=2)
    assert a == b


def test_scan_unknown_family():
    with pytest.raises(DomainError):
        family_scan("nope", [3])


# ---------------------------------------------------------------- discriminant energy

def test_disc_energy_examples():
    d = discriminant_energy_bound(IntPoly((1, 1, 1)))
    assert d.disc == -3 and d.identity_ok
    d = discriminant_energy_bound(IntPoly((-2, 0, 1)))
    assert d.disc == 8 and d.pair_log_sum == pytest.approx(-math.log(8), rel=1e-12)
    with pytest.raises(MultipleRoot):
        discriminant_energy_bound(IntPoly((1, -2, 1)))


@given(int_coeffs(2, 8, 5))
def test_disc_identity_and_sign(c):
    p = IntPoly(c)
    try:
        d = discriminant_energy_bound(p)
    except MultipleRoot:
        return
    assert d.identity_ok
    assert d.disc_at_least_one
    assert math.log(1 / abs(d.disc)) <= 0
    if abs(c[-1]) == 1:
        assert d.energy_bound <= 0
