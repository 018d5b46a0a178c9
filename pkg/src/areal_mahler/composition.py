"""Szego composition as a multiplier operator, and checks of the inequalities it implies.

For ``Lam(z) = sum lam_k C(n,k) z^k`` and ``P(z) = sum a_k z^k`` (both viewed in
the degree-``n`` space) the composition is ``Lam P(z) = sum lam_k a_k z^k``.
The nominal degree ``n`` is always explicit: the multipliers depend on it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arithmetic import int_log_measures, integral_coefficients
from .errors import DegreeMismatch, DomainError
from .measures import log_areal_measure, log_mahler_measure
from .poly import ComplexPoly, as_poly, derivative, find_roots, find_roots_mp, shift_mul_z

SLACK_RTOL = 1e-9


def binomials(n: int) -> np.ndarray:
    """``C(n, k)`` for ``k = 0..n``, exact integers rounded once to float."""
    return np.array([float(math.comb(n, k)) for k in range(n + 1)])


@dataclass(frozen=True, eq=False)
class SzegoMultiplier:
    lambda_poly: ComplexPoly
    n: int

    def __post_init__(self):
        object.__setattr__(self, "lambda_poly", as_poly(self.lambda_poly))
        if self.lambda_poly.degree > self.n:
            raise DegreeMismatch(f"deg Lambda = {self.lambda_poly.degree} > n = {self.n}")

    @property
    def multipliers(self) -> np.ndarray:
        c = np.zeros(self.n + 1, dtype=np.complex128)
        c[: len(self.lambda_poly.coeffs)] = self.lambda_poly.coeffs
        return c / binomials(self.n)

    @classmethod
    def from_multipliers(cls, lam, n: int | None = None) -> "SzegoMultiplier":
        lam = np.asarray(lam, dtype=np.complex128)
        n = len(lam) - 1 if n is None else n
        c = np.zeros(n + 1, dtype=np.complex128)
        c[: len(lam)] = lam
        return cls(ComplexPoly(c * binomials(n)), n)

    # the standard choices
    @classmethod
    def identity(cls, n: int) -> "SzegoMultiplier":
        return cls(ComplexPoly(binomials(n)), n)

    @classmethod
    def z_derivative(cls, n: int) -> "SzegoMultiplier":
        """``n z (1+z)^{n-1}``, which maps ``P`` to ``z P'``."""
        return cls(ComplexPoly(np.arange(n + 1) * binomials(n)), n)

    @classmethod
    def coefficient(cls, n: int, k: int) -> "SzegoMultiplier":
        """``C(n,k) z^k``, which maps ``P`` to ``a_k z^k``."""
        return cls(ComplexPoly.monomial(k, float(math.comb(n, k))), n)


def szego_compose(lam, p, n: int) -> ComplexPoly:
    """``sum_k lam_k a_k z^k`` with both arguments zero-padded to degree ``n``."""
    if not isinstance(lam, SzegoMultiplier):
        lam = SzegoMultiplier(lam, n)
    if lam.n != n:
        raise DegreeMismatch(f"multiplier built for n = {lam.n}, composed with n = {n}")
    p = as_poly(p)
    if p.degree > n:
        raise DegreeMismatch(f"deg P = {p.degree} > n = {n}")
    a = np.zeros(n + 1, dtype=np.complex128)
    a[: len(p.coeffs)] = p.coeffs
    return ComplexPoly(lam.multipliers * a)


@dataclass(frozen=True)
class InequalityCheck:
    """``lhs <= rhs`` with slack ``rhs - lhs``; holds up to ``rtol * max(1, rhs)``."""

    lhs: float
    rhs: float
    rtol: float = SLACK_RTOL

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -self.rtol * max(1.0, abs(self.rhs))

    @property
    def relative_slack(self) -> float:
        return self.slack / max(1.0, abs(self.rhs))


def _log_measures(p, areal: bool) -> float:
    # integer input (the standard multipliers among them) may carry repeated
    # roots; the exact squarefree path keeps e.g. M((1+z)^n) = 1 to rounding
    p = as_poly(p)
    if p.is_zero():
        return -math.inf
    if p.degree == 0:
        return math.log(abs(p.coeffs[0]))
    q = integral_coefficients(p)
    if q is not None:
        return int_log_measures(q)[1 if areal else 0]
    r = find_roots(p)
    return log_areal_measure(r) if areal else log_mahler_measure(r)


def _log_m(p) -> float:
    return _log_measures(p, areal=False)


def _log_a(p) -> float:
    return _log_measures(p, areal=True)


def mahler(p) -> float:
    return math.exp(_log_m(p))


def areal(p) -> float:
    return math.exp(_log_a(p))


def _check(lhs_log: float, rhs_log: float) -> InequalityCheck:
    return InequalityCheck(math.exp(lhs_log), math.exp(rhs_log))


def check_debruijn_springer(lam, p, n: int) -> InequalityCheck:
    """``M(Lam P) <= M(Lam) M(P)``."""
    lam = lam if isinstance(lam, SzegoMultiplier) else SzegoMultiplier(lam, n)
    q = szego_compose(lam, p, n)
    return _check(_log_m(q), _log_m(lam.lambda_poly) + _log_m(p))


def check_areal_composition(lam, p, n: int) -> InequalityCheck:
    """``||Lam P||_0 <= M(Lam) ||P||_0``."""
    lam = lam if isinstance(lam, SzegoMultiplier) else SzegoMultiplier(lam, n)
    q = szego_compose(lam, p, n)
    return _check(_log_a(q), _log_m(lam.lambda_poly) + _log_a(p))


@dataclass(frozen=True)
class DerivativeBounds:
    z_derivative: InequalityCheck  # ||z P'||_0 <= n ||P||_0
    derivative: InequalityCheck  # ||P'||_0 <= sqrt(e) n ||P||_0


def derivative_bounds(p) -> DerivativeBounds:
    p = as_poly(p)
    n = p.degree
    if n < 1:
        raise DomainError("derivative_bounds needs degree >= 1")
    dp = derivative(p)
    la = _log_a(p)
    ld = _log_a(dp)
    return DerivativeBounds(
        z_derivative=_check(_log_a(shift_mul_z(dp)), math.log(n) + la),
        derivative=_check(ld, 0.5 + math.log(n) + la),
    )


@dataclass(frozen=True)
class CoefficientCheck:
    k: int
    areal: InequalityCheck  # |a_k| <= e^{k/2} C(n,k) ||P||_0
    mahler: InequalityCheck  # |a_k| <= C(n,k) M(P)

    @property
    def holds(self) -> bool:
        return self.areal.holds and self.mahler.holds


def coefficient_bounds(p) -> list[CoefficientCheck]:
    p = as_poly(p)
    if p.is_zero():
        raise DomainError("zero polynomial")
    n = p.degree
    lm, la = _log_m(p), _log_a(p)
    out = []
    for k, a in enumerate(p.coeffs):
        lb = math.log(math.comb(n, k))
        ak = abs(a)
        out.append(CoefficientCheck(
            k,
            areal=InequalityCheck(ak, math.exp(0.5 * k + lb + la)),
            mahler=InequalityCheck(ak, math.exp(lb + lm)),
        ))
    return out


def lambda_antiderivative(n: int) -> ComplexPoly:
    """``((1+z)^n - 1)/(n z) = sum_{k<n} C(n, k+1)/n z^k``."""
    return ComplexPoly(binomials(n)[1:] / n)


def antiderivative_multiplier_mahler(n: int) -> tuple[float, float]:
    """``M(Lam_{n-1})`` from the roots of ``((1+z)^n - 1)/(n z)`` and from the sine product.

    The product runs over integers ``n/6 < k < 5n/6``; a boundary term would be
    ``2 sin(pi/6) = 1`` so the endpoint convention cannot change the value.
    """
    if n < 1:
        raise DomainError("n >= 1 required")
    if n == 1:
        return 1.0, 1.0
    by_roots = _lambda_mahler_by_roots(n)
    ks = [k for k in range(1, n) if 6 * k > n and 6 * k < 5 * n]
    by_product = math.exp(sum(math.log(2.0 * math.sin(k * math.pi / n)) for k in ks) - math.log(n))
    return by_roots, by_product


@lru_cache(maxsize=None)
def _lambda_mahler_by_roots(n: int) -> float:
    # the monomial form of (1+z)^n - 1 cancels terms of size ~3^n near z = -2,
    # so double-precision roots lose about n*log10(3) digits; use exact
    # rational coefficients and extended precision instead
    import mpmath

    coeffs = [Fraction(math.comb(n, k + 1), n) for k in range(n)]
    roots = find_roots_mp(coeffs)
    with mpmath.workdps(30):
        lm = -mpmath.log(n) + mpmath.fsum(mpmath.log(abs(z)) for z in roots if abs(z) > 1)
        return float(mpmath.exp(lm))


@dataclass(frozen=True)
class AntiderivativeCheck:
    check: InequalityCheck  # M(P - P(0)) <= M(Lam_{n-1}) M(P')
    lambda_by_roots: float
    lambda_by_product: float

    @property
    def agree(self) -> bool:
        return abs(self.lambda_by_roots - self.lambda_by_product) <= 1e-8 * max(1.0, self.lambda_by_product)

    @property
    def holds(self) -> bool:
        return self.check.holds and self.agree


def antiderivative_bound(p) -> AntiderivativeCheck:
    p = as_poly(p)
    n = p.degree
    if n < 1:
        raise DomainError("antiderivative_bound needs degree >= 1")
    by_roots, by_product = antiderivative_multiplier_mahler(n)
    c = np.array(p.coeffs)
    c[0] = 0
    lhs = _log_m(ComplexPoly(c))
    rhs = math.log(by_product) + _log_m(derivative(p))
    return AntiderivativeCheck(_check(lhs, rhs), by_roots, by_product)
