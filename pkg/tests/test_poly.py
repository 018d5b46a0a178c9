import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linear_sum_assignment

from areal_mahler.errors import ParseError
from areal_mahler.poly import (
    ComplexPoly, IntPoly, derivative, discriminant, evaluate, find_roots, find_roots_mp,
    format_poly, int_divmod, multiply, parse_int_poly, parse_poly, resultant,
)

import oracles
from strategies import complex_coeffs, int_coeffs


def close_poly(p, coeffs, tol=1e-12):
    c = np.asarray(coeffs, dtype=np.complex128)
    assert p.degree == len(c) - 1
    assert np.max(np.abs(p.coeffs - c)) <= tol * max(1.0, np.abs(c).max())


# ---------------------------------------------------------------- representation

def test_trailing_zeros_are_stripped():
    p = ComplexPoly([1, 2, 0, 0])
    assert p.degree == 1 and p.leading == 2


def test_zero_polynomial_is_empty():
    z = ComplexPoly([0, 0])
    assert z.is_zero() and z.degree == -1
    assert IntPoly((0,)).is_zero()


def test_intpoly_rejects_fractional_coefficients():
    with pytest.raises(ValueError):
        IntPoly((1, 0.5))


def test_intpoly_big_integers_convert_losslessly():
    c = tuple((-1) ** k * (2 ** 50 - k) for k in range(51))
    p = IntPoly(c)
    assert p.degree == 50
    assert all(int(x.real) == y and x.imag == 0 for x, y in zip(p.to_complex().coeffs, c))


# ---------------------------------------------------------------- evaluate

@pytest.mark.parametrize("coeffs, z, expected", [
    ([-2, 0, 1], 0, -2),
    ([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1], 1, -1),
    ([1, 3], 1j, 1 + 3j),
])
def test_evaluate_examples(coeffs, z, expected):
    assert evaluate(ComplexPoly(coeffs), z) == pytest.approx(expected, abs=1e-14)


def test_evaluate_zero_polynomial_is_zero():
    assert evaluate(ComplexPoly([]), 3 + 1j) == 0


def test_evaluate_vectorised_shape():
    p = ComplexPoly([1, 2, 3])
    z = np.linspace(-1, 1, 6).reshape(2, 3)
    assert evaluate(p, z).shape == (2, 3)
    assert np.allclose(evaluate(p, z), 1 + 2 * z + 3 * z * z)


# ---------------------------------------------------------------- multiply / derivative

@pytest.mark.parametrize("a, b, expected", [
    ([-1, 1], [1, 1], [-1, 0, 1]),
    ([0, 1], [0, 1], [0, 0, 1]),
    ([1, 2], [-1, 3], [-1, 1, 6]),
])
def test_multiply_examples(a, b, expected):
    close_poly(multiply(ComplexPoly(a), ComplexPoly(b)), expected)


@given(complex_coeffs(1, 10), complex_coeffs(1, 10), complex_coeffs(1, 10))
def test_multiply_associative_commutative(a, b, c):
    p, q, r = ComplexPoly(a), ComplexPoly(b), ComplexPoly(c)
    pq = multiply(p, q)
    close_poly(pq, multiply(q, p).coeffs, 1e-12)
    close_poly(multiply(pq, r), multiply(p, multiply(q, r)).coeffs, 1e-12)
    assert pq.degree == p.degree + q.degree


@pytest.mark.parametrize("coeffs, expected", [
    ([0, 0, 1], [0, 2]),
    ([0, 1] + [0] * 8 + [1], [1] + [0] * 8 + [10]),
    ([5], []),
])
def test_derivative_examples(coeffs, expected):
    d = derivative(ComplexPoly(coeffs))
    if expected:
        close_poly(d, expected)
    else:
        assert d.is_zero()


# ---------------------------------------------------------------- roots

def test_roots_quadratic():
    r = find_roots(ComplexPoly([-2, 0, 1]))
    assert sorted(r.roots.real) == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-14)
    assert r.leading == 1


def test_roots_example_family_n4():
    r = find_roots(ComplexPoly([-1, 0, 0, 0, 4]))
    assert np.allclose(np.abs(r.roots), 4 ** -0.25, atol=1e-14)
    ang = np.sort(np.mod(np.angle(r.roots), 2 * np.pi))
    assert np.allclose(np.diff(ang), np.pi / 2, atol=1e-12)


def test_origin_roots_are_stripped_exactly():
    r = find_roots(ComplexPoly([0, 0, 0, 1]))
    assert r.origin == 3 and np.all(r.roots == 0)
    r = find_roots(ComplexPoly([0, 0, -2, 0, 1]))
    assert r.origin == 2 and np.count_nonzero(r.roots == 0) == 2


def test_residuals_within_tolerance(lehmer):
    p = IntPoly(lehmer).to_complex()
    r = find_roots(p)
    assert r.degree == 10
    assert np.all(r.residuals <= 1e-12 * (1 + np.abs(p.coeffs).max()))


@given(complex_coeffs(1, 20))
def test_reconstruction_from_roots(c):
    p = ComplexPoly(c)
    r = find_roots(p)
    assert r.degree == p.degree
    rec = r.reconstruct().coeffs
    assert np.max(np.abs(rec - p.coeffs)) <= 1e-8 * np.abs(p.coeffs).max()


@given(complex_coeffs(1, 5), complex_coeffs(1, 5))
def test_roots_of_product_are_union(a, b):
    p, q = ComplexPoly(a), ComplexPoly(b)
    rp, rq = find_roots(p).roots, find_roots(q).roots
    # skip clustered inputs whose roots are ill-conditioned under multiplication
    both = np.concatenate([rp, rq])
    sep = np.abs(both[:, None] - both[None, :]) + np.eye(both.size)
    if sep.min() < 1e-2:
        return
    rpq = find_roots(multiply(p, q)).roots
    cost = np.abs(rpq[:, None] - both[None, :])
    i, j = linear_sum_assignment(cost)
    assert cost[i, j].max() <= 1e-6 * max(1.0, np.abs(both).max())


def test_roots_agree_with_companion_matrix(rng):
    for _ in range(20):
        c = rng.uniform(-1, 1, 9) + 1j * rng.uniform(-1, 1, 9)
        ours = find_roots(ComplexPoly(c)).roots
        ref = oracles.companion_roots(c)
        i, j = linear_sum_assignment(np.abs(ours[:, None] - ref[None, :]))
        assert np.abs(ours[i] - ref[j]).max() < 1e-8


def test_multiple_roots_still_converge():
    p = ComplexPoly.from_roots([1, 1, 1, -0.5, -0.5])
    r = find_roots(p)
    assert r.degree == 5
    # a triple root is only determined to about eps**(1/3); the backward error stays tiny
    assert np.all(r.residuals <= 1e-12 * (1 + np.abs(p.coeffs).max()))
    assert np.abs(r.reconstruct().coeffs - p.coeffs).max() < 1e-5


def test_high_degree_family_roots():
    n = 200
    c = np.zeros(n + 1)
    c[0], c[n] = -1, n
    r = find_roots(ComplexPoly(c))
    assert np.allclose(np.abs(r.roots), n ** (-1 / n), atol=1e-8)


def test_mp_roots_match_double_precision():
    ours = np.sort_complex(find_roots(ComplexPoly([-2, 0, 1])).roots)
    mp = np.sort_complex(np.array([complex(z) for z in find_roots_mp([-2, 0, 1])]))
    assert np.allclose(ours, mp, atol=1e-14)


# ---------------------------------------------------------------- exact algebra

@pytest.mark.parametrize("coeffs, expected", [
    ((1, 1, 1), -3),
    ((-2, 0, 1), 8),
    ((1, -2, 1), 0),
])
def test_discriminant_examples(coeffs, expected):
    assert discriminant(IntPoly(coeffs)) == expected


@given(int_coeffs(1, 7, 6, nonzero_constant=False), int_coeffs(1, 6, 6, nonzero_constant=False))
def test_resultant_matches_sylvester_determinant(a, b):
    assert resultant(list(a), list(b)) == oracles.sylvester_resultant(a, b)


@given(int_coeffs(2, 8, 5, nonzero_constant=False))
def test_discriminant_matches_sylvester(c):
    assert discriminant(IntPoly(c)) == oracles.sylvester_discriminant(c)


@given(int_coeffs(2, 8, 5))
def test_discriminant_matches_root_product(c):
    d = discriminant(IntPoly(c))
    if d == 0:
        return
    z = oracles.companion_roots(c)
    n = len(c) - 1
    diff = z[:, None] - z[None, :]
    iu = np.triu_indices(n, 1)
    log_prod = (2 * n - 2) * math.log(abs(c[-1])) + 2 * np.log(np.abs(diff[iu])).sum()
    assert log_prod == pytest.approx(math.log(abs(d)), abs=1e-4 * max(1.0, math.log(abs(d))))


def test_discriminant_sign_examples():
    # complex pair => negative; three real roots => positive
    assert discriminant(IntPoly((1, 0, 1))) == -4
    assert discriminant(IntPoly((0, -1, 0, 1))) == 4


def test_int_divmod_exact_and_inexact():
    q, r = int_divmod([-1, 0, 0, 1], [-1, 1])
    assert q == [1, 1, 1] and not any(r)
    assert int_divmod([1, 0, 1], [0, 2]) is None or any(int_divmod([1, 0, 1], [0, 2])[1])


# ---------------------------------------------------------------- text format

def test_parse_example_and_roundtrip():
    p = parse_poly("-1,0,0,0,4")
    close_poly(p, [-1, 0, 0, 0, 4])
    q = parse_poly("1+2i, -0.5i, 3")
    close_poly(q, [1 + 2j, -0.5j, 3])
    assert parse_poly(format_poly(q)) == q


@pytest.mark.parametrize("bad", ["", "  ", "1,,2", "abc", "1,2,x"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad)


def test_parse_int_poly_exact_large():
    p = parse_int_poly(f"{2 ** 60 + 1},0,-3")
    assert p.coeffs == (2 ** 60 + 1, 0, -3)
    with pytest.raises(ParseError):
        parse_int_poly("1.5,2")
