import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import special

from areal_mahler.approximation import (
    bergman_distance, bergman_norm, default_truncation, gap, hardy_gap, hardy_norm,
    integer_approx_table, ones, polynomial_stream, powers, read_stream, stream_by_name, uniform_error,
)
from areal_mahler.errors import DomainError, ParseError, TailNotCertified
from areal_mahler.poly import IntPoly

import oracles

# ||sum_{k=1}^{64} z^k||_{3/2}: quadrature value, confirmed to 1e-6 by a 4000 x 4096 polar midpoint grid
ONES_N0_DISTANCE = 1.2618771925303724
N_DOUBLINGS = [4, 8, 16, 32, 64, 128]


# ---------------------------------------------------------------- streams

def test_truncations_are_exact_integer_polynomials():
    assert ones().truncate(4) == IntPoly((1, 1, 1, 1, 1))
    assert gap().truncate(9).coeffs == (1, 1, 0, 0, 1, 0, 0, 0, 0, 1)
    assert powers(2).truncate(3).coeffs == (1, 2, 4, 8)


def test_read_stream_fractions(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("1, 2/2 -3  # inline comment\n# whole-line comment\n0\n")
    s = read_stream(f)
    assert s.is_polynomial and s.truncate(5) == IntPoly((1, 1, -3))
    f.write_text("1 1/3")
    assert stream_by_name(f"file:{f}").coefficients(1) == [1, Fraction(1, 3)]
    f.write_text("1 x")
    with pytest.raises(ParseError):
        read_stream(f)
    with pytest.raises(ParseError):
        stream_by_name("nope")


def test_certificates():
    for p in (1.25, 1.5, 1.75):
        ones().check(p)
        gap().check(p)
    with pytest.raises(TailNotCertified):
        ones().check(2.5)
    with pytest.raises(TailNotCertified):
        bergman_distance(powers(2), 4, exponent=1.5)


# ---------------------------------------------------------------- tails

@pytest.mark.parametrize("p", [1.25, 1.5, 1.75])
@pytest.mark.parametrize("r", [0.3, 0.9, 0.99])
def test_angular_mean_identity_behind_tail(p, r):
    t = 2 * np.pi * np.arange(1 << 16) / (1 << 16)
    mean = np.mean(np.abs(1 - r * np.exp(1j * t)) ** (-p))
    assert mean == pytest.approx(special.hyp2f1(p / 2, p / 2, 1, r * r), rel=1e-8)


@pytest.mark.parametrize("T, p", [(16, 1.5), (64, 1.25), (200, 1.75)])
def test_ones_tail_against_tanh_sinh(T, p):
    import mpmath

    with mpmath.workdps(20):
        f = lambda r: 2 * r ** (p * (T + 1) + 1) * mpmath.hyp2f1(p / 2, p / 2, 1, r * r)
        ref = float(mpmath.quad(f, [0, 0.5, 0.9, 0.99, 1])) ** (1 / p)
    assert ones().tail(T, p) == pytest.approx(ref, rel=1e-6)


def test_ones_tail_decreases():
    vals = [ones().tail(T, 1.5) for T in (16, 64, 128, 256, 512)]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))


def test_gap_tail_bounds_the_true_tail():
    T, p = 64, 1.5
    deep = np.array([float(math.isqrt(k) ** 2 == k and k > T) for k in range(4096)])
    assert bergman_norm(deep, p) <= gap().tail(T, p)


def test_polynomial_stream_tail():
    s = polynomial_stream([1, 2, 3])
    assert s.tail(2, 1.5) == 0 and s.tail(1, 1.5) == math.inf


# ---------------------------------------------------------------- distances

def test_ones_n0_regression():
    d = bergman_distance(ones(), 0, exponent=1.5)
    assert d == pytest.approx(ONES_N0_DISTANCE, rel=1e-10)
    assert d > 0


def test_ones_n0_matches_polar_grid():
    ref = oracles.polar_grid_power_mean(lambda z: z * (1 - z ** 64) / (1 - z), 1.5, radial=2000, angular=2048) ** (1 / 1.5)
    assert bergman_distance(ones(), 0, exponent=1.5) == pytest.approx(ref, rel=1e-5)


def test_ones_distance_decreases_example():
    d = [bergman_distance(ones(), N, exponent=1.5) for N in (8, 16, 32, 64)]
    assert d[0] > d[1] > d[2] > d[3]


@pytest.mark.parametrize("p", [1.25, 1.5, 1.75])
def test_ones_distance_strictly_decreasing(p):
    d = [bergman_distance(ones(), N, exponent=p) for N in N_DOUBLINGS]
    assert all(a > b for a, b in zip(d, d[1:]))


def test_polynomial_stream_distance_vanishes():
    s = polynomial_stream([3, -1, 0, 2, 5, 1])
    assert bergman_distance(s, 5, truncation=20, exponent=1.5) == pytest.approx(0, abs=1e-12)
    assert bergman_distance(s, 7, exponent=1.5) == pytest.approx(0, abs=1e-12)
    assert bergman_distance(s, 4, truncation=20, exponent=1.5) > 0


def test_distance_argument_checks():
    with pytest.raises(DomainError):
        bergman_distance(ones(), 8, exponent=1.0)
    with pytest.raises(DomainError):
        bergman_distance(ones(), 8, truncation=31, exponent=1.5)


# ---------------------------------------------------------------- hardy side

def test_hardy_gap_examples():
    sums = [ones().truncate(n) for n in range(6)]
    assert hardy_gap(sums, 2) == pytest.approx([1.0] * 5, rel=1e-12)
    assert hardy_gap([sums[3], sums[3]], 2) == [0.0]
    geo = [powers(2).truncate(n) for n in range(6)]
    assert hardy_gap(geo, 2) == pytest.approx([2.0 ** n for n in range(1, 6)], rel=1e-12)


@pytest.mark.parametrize("p", [0.5, 1.0, 1.5, 3.0])
def test_hardy_gap_at_least_one_for_integer_sums(p, rng):
    for _ in range(10):
        c = rng.integers(-3, 4, size=12)
        sums = [IntPoly(tuple(int(x) for x in c[: n + 1])) for n in range(12)]
        for g, a, b in zip(hardy_gap(sums, p), sums, sums[1:]):
            if a != b:
                assert g >= 1 - 1e-6


def test_hardy_norm_monomial():
    assert hardy_norm([0, 0, 0, 1], 1.5) == pytest.approx(1.0, rel=1e-12)


# ---------------------------------------------------------------- tables

def test_table_ones():
    rows = integer_approx_table(ones(), 1.5, N_DOUBLINGS)
    berg = [r.bergman_distance for r in rows]
    assert all(a > b for a, b in zip(berg, berg[1:]))
    assert math.isnan(rows[0].hardy_gap)
    assert all(r.hardy_gap >= 1 - 1e-6 for r in rows[1:])
    assert all(r.hardy_distance >= 1 - 1e-6 for r in rows)


def test_table_polynomial_hits_zero():
    rows = integer_approx_table(polynomial_stream([1, 2, 0, -1]), 1.5, [1, 2, 3, 4])
    assert rows[2].bergman_distance == pytest.approx(0, abs=1e-14)
    assert rows[2].hardy_distance == pytest.approx(0, abs=1e-14)
    assert rows[0].bergman_distance > 0


def test_table_gap_series():
    rows = integer_approx_table(gap(), 1.5, N_DOUBLINGS)
    berg = [r.bergman_distance for r in rows]
    # S_4 = S_8 for the gap series (no square between 5 and 8), so only non-increasing
    assert all(a >= b - 1e-12 for a, b in zip(berg, berg[1:]))
    assert berg[-1] < berg[0]


# ---------------------------------------------------------------- uniform convergence

@pytest.mark.parametrize("stream", [ones(), gap(), polynomial_stream([1, -1, 2, 0, 3])])
def test_uniform_convergence_on_smaller_disk(stream):
    errs = [uniform_error(stream, N) for N in (4, 16, 64, 256)]
    assert errs[-1] < 1e-6
    assert errs[0] >= errs[-1]


def test_uniform_error_ones_closed_form():
    # |z^{N+1}/(1-z)| is largest at z = 0.9
    assert uniform_error(ones(), 10) == pytest.approx(0.9 ** 11 / 0.1, rel=1e-10)
