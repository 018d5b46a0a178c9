import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from areal_mahler.errors import DomainError, SingularNode
from areal_mahler.measures import (
    areal_measure, areal_oracle, bergman_p_norm, hardy_p_norm, mahler_measure, mahler_oracle,
    measure_report, modulus_penalty,
)
from areal_mahler.poly import ComplexPoly, IntPoly, find_roots, multiply
from areal_mahler.quadrature import QuadratureConfig
from areal_mahler.verify import random_off_grid_polys

import oracles
from strategies import complex_coeffs, int_coeffs

ORACLE_CFG = QuadratureConfig(512, 64)
# frozen from a 40-digit mpmath root computation (tests/oracles.mp_measures)
LEHMER_RATIO = 0.8705470870226627


def roots(c):
    return find_roots(ComplexPoly(c))


# ---------------------------------------------------------------- closed forms

@pytest.mark.parametrize("coeffs, expected", [
    ([-1, 0, 0, 0, 4], 4.0),
    ([-1, 1], 1.0),
    ([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1], 1.1762808),
])
def test_mahler_examples(coeffs, expected):
    assert mahler_measure(roots(coeffs)) == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("coeffs, expected", [
    ([0, 1], math.exp(-0.5)),
    ([0, 0, 2], 2 * math.exp(-1)),
    ([-1, 0, 0, 0, 4], 4 * math.exp(-1)),
])
def test_areal_examples(coeffs, expected):
    assert areal_measure(roots(coeffs)) == pytest.approx(expected, rel=1e-14)


def test_example_family_closed_form_general_n():
    for n in (2, 3, 7, 50):
        c = [-1] + [0] * (n - 1) + [n]
        assert areal_measure(roots(c)) == pytest.approx(n * math.exp(n * (n ** (-2 / n) - 1) / 2), rel=1e-12)


def test_lehmer_against_mpmath_roots(lehmer):
    m, a = oracles.mp_measures(lehmer)
    r = roots(lehmer)
    assert mahler_measure(r) == pytest.approx(m, rel=1e-13)
    assert areal_measure(r) == pytest.approx(a, rel=1e-13)


@given(complex_coeffs(1, 10))
def test_closed_forms_match_companion_roots(c):
    m, a = oracles.companion_measures(c)
    r = roots(c)
    assert mahler_measure(r) == pytest.approx(m, rel=1e-8)
    assert areal_measure(r) == pytest.approx(a, rel=1e-8)


def test_root_free_disk_areal_equals_mahler():
    r = roots([-2, 0, 1])
    assert areal_measure(r) == mahler_measure(r) == pytest.approx(2.0)


# ---------------------------------------------------------------- oracles

def test_mahler_oracle_examples(lehmer):
    assert mahler_oracle(ComplexPoly([-1, 1]), QuadratureConfig(512, 16)) == pytest.approx(1.0, abs=1e-3)
    assert mahler_oracle(ComplexPoly([-2, 0, 1])) == pytest.approx(2.0, abs=1e-6)
    assert mahler_oracle(IntPoly(lehmer).to_complex()) == pytest.approx(1.1762808, abs=1e-3)


def test_areal_oracle_examples():
    assert areal_oracle(ComplexPoly([0, 1])) == pytest.approx(math.exp(-0.5), abs=1e-4)
    assert areal_oracle(ComplexPoly([7])) == pytest.approx(7.0, abs=1e-12)
    assert areal_oracle(ComplexPoly([-1, 0, 0, 0, 4])) == pytest.approx(4 * math.exp(-1), abs=1e-4)


def test_oracle_grid_rotation_handles_node_hits():
    # z^8 - 1 vanishes on every node of an 8-point grid; the rotated grid avoids them
    coarse = mahler_oracle(ComplexPoly([-1] + [0] * 7 + [1]), QuadratureConfig(64, 16))
    fine = mahler_oracle(ComplexPoly([-1] + [0] * 7 + [1]), QuadratureConfig(4096, 16))
    assert 1.0 < coarse < 1.05
    assert fine == pytest.approx(1.0, abs=1e-3)


def test_oracle_agreement_random_off_grid(rng):
    polys, _ = random_off_grid_polys(25, rng, ORACLE_CFG)
    for p, r in polys:
        closed = areal_measure(r)
        assert abs(closed - areal_oracle(p, ORACLE_CFG)) <= 1e-4 * closed


def test_zero_polynomial_rejected():
    with pytest.raises(DomainError):
        measure_report(ComplexPoly([]))


# ---------------------------------------------------------------- p-norms

def test_bergman_examples():
    assert bergman_p_norm(ComplexPoly([1]), 2) == pytest.approx(1.0, abs=1e-12)
    assert bergman_p_norm(ComplexPoly([0, 1]), 2) == pytest.approx(math.sqrt(0.5), abs=1e-10)


def test_bergman_small_exponent_approaches_areal():
    vals = [bergman_p_norm(ComplexPoly([0, 1]), p) for p in (1, 0.1, 0.01)]
    assert vals[0] > vals[1] > vals[2] > math.exp(-0.5)
    assert vals[2] - math.exp(-0.5) < 5e-3


@pytest.mark.parametrize("coeffs, p, expected", [
    ([0, 0, 0, 1], 0.7, 1.0),
    ([0, 0, 0, 1], 3.0, 1.0),
    ([1, 1], 2, math.sqrt(2)),
    ([-2, 0, 1], 2, math.sqrt(5)),
])
def test_hardy_examples(coeffs, p, expected):
    assert hardy_p_norm(ComplexPoly(coeffs), p) == pytest.approx(expected, rel=1e-10)


def test_bergman_matches_polar_grid_oracle():
    p = ComplexPoly([1, -0.5j, 0.25, 1])
    ref = oracles.polar_grid_power_mean(lambda z: 1 - 0.5j * z + 0.25 * z ** 2 + z ** 3, 1.5) ** (1 / 1.5)
    assert bergman_p_norm(p, 1.5) == pytest.approx(ref, rel=1e-4)


@given(complex_coeffs(1, 5))
def test_bergman_limit_monotone(c):
    p = ComplexPoly(c)
    a = areal_measure(find_roots(p))
    vals = [bergman_p_norm(p, e, QuadratureConfig(512, 64)) for e in (1, 0.5, 0.25, 0.125)]
    assert all(x >= y - 1e-9 * x for x, y in zip(vals, vals[1:]))
    assert vals[-1] >= a - 1e-3


# ---------------------------------------------------------------- penalty

@pytest.mark.parametrize("x, expected", [
    (1.0, 1.0), (0.5, math.exp(-0.375) / 0.5), (2.0, math.exp(1.5) / 2),
])
def test_modulus_penalty_examples(x, expected):
    assert modulus_penalty(x) == pytest.approx(expected, rel=1e-14)
    assert modulus_penalty(0.5) == pytest.approx(1.3746, abs=1e-4)
    assert modulus_penalty(2.0) == pytest.approx(2.2408, abs=1e-4)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_modulus_penalty_domain(x):
    with pytest.raises(DomainError):
        modulus_penalty(x)


def test_modulus_penalty_large_argument_saturates():
    assert modulus_penalty(64.0) == math.inf


@given(st.floats(0.05, 0.99), st.floats(0.05, 0.99))
def test_modulus_penalty_shape(a, b):
    lo, hi = sorted((a, b))
    if hi - lo < 1e-6:
        return
    assert modulus_penalty(lo) > modulus_penalty(hi) > 1.0
    assert modulus_penalty(1 / lo) > modulus_penalty(1 / hi) > 1.0


# ---------------------------------------------------------------- report

def test_report_examples(lehmer):
    r = measure_report(ComplexPoly([-2, 0, 1]))
    assert (r.mahler, r.areal, r.ratio) == pytest.approx((2, 2, 1))
    assert r.integer_case
    r = measure_report(ComplexPoly([0, 0, 2]))
    assert r.ratio == pytest.approx(math.exp(-1), rel=1e-14)
    r = measure_report(IntPoly(lehmer).to_complex())
    assert math.exp(-5) < r.ratio <= 1
    assert r.ratio == pytest.approx(LEHMER_RATIO, rel=1e-12)
    assert not r.integer_case


@given(complex_coeffs(1, 12))
def test_report_bounds_always_hold(c):
    r = measure_report(ComplexPoly(c))
    assert r.bounds_ok.upper_ok and r.bounds_ok.a0_ok and r.bounds_ok.lower_ok
    assert math.exp(-r.degree / 2) * r.mahler <= r.areal * (1 + 1e-12) <= r.mahler * (1 + 2e-12)


@given(complex_coeffs(1, 8), complex_coeffs(1, 8))
def test_multiplicativity(a, b):
    p, q = ComplexPoly(a), ComplexPoly(b)
    rp, rq, rpq = find_roots(p), find_roots(q), find_roots(multiply(p, q))
    # shared roots become double roots of p*q, resolved only to sqrt(eps)
    both = np.concatenate([rp.roots, rq.roots])
    assume((np.abs(both[:, None] - both[None, :]) + np.eye(both.size)).min() > 1e-3)
    assert mahler_measure(rpq) == pytest.approx(mahler_measure(rp) * mahler_measure(rq), rel=1e-8)
    assert areal_measure(rpq) == pytest.approx(areal_measure(rp) * areal_measure(rq), rel=1e-8)


@given(int_coeffs(1, 10, 6))
def test_integer_lower_bound(c):
    assert areal_measure(find_roots(IntPoly(c).to_complex())) >= 1 - 1e-9
