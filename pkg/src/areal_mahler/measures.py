"""Mahler's measure and the areal measure: closed forms from roots, and quadrature oracles.

Closed forms work in log scale::

    log M    = log|a_n| + sum_{|z_j| > 1} log|z_j|
    log ||.||_0 = log M + 1/2 sum_{|z_j| < 1} (|z_j|^2 - 1)

Roots are classified with strict ``|z_j| < 1``; the correction term vanishes
continuously on the circle, so misclassifying a root at ``|z_j| ~ 1`` perturbs the
result by O(root error) only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature as quad
from .errors import DomainError
from .poly import ComplexPoly, RootSet, as_poly, find_roots
from .quadrature import DEFAULT, QuadratureConfig

BOUND_RTOL = 1e-9


def _roots(r) -> RootSet:
    return r if isinstance(r, RootSet) else find_roots(r)


def log_mahler_measure(r) -> float:
    r = _roots(r)
    m = np.abs(r.roots)
    return math.log(abs(r.leading)) + float(np.log(m[m > 1.0]).sum())


def log_areal_measure(r) -> float:
    r = _roots(r)
    m = np.abs(r.roots)
    inside = m[m < 1.0]
    return log_mahler_measure(r) + 0.5 * float((inside * inside - 1.0).sum())


def mahler_measure(r) -> float:
    """``|a_n| * prod_{|z_j|>1} |z_j|`` from a RootSet (or a polynomial, rooted on the fly)."""
    return math.exp(log_mahler_measure(r))


def areal_measure(r) -> float:
    """Areal measure from roots: Mahler's measure times ``exp(sum_{|z|<1}(|z|^2-1)/2)``.

    Equals :func:`mahler_measure` exactly when no root lies in the open disk.
    Each root at the origin contributes a factor ``e^{-1/2}``.
    """
    return math.exp(log_areal_measure(r))


def mahler_oracle(p, cfg: QuadratureConfig = DEFAULT) -> float:
    """``exp`` of the trapezoid mean of ``log|p|`` on the unit circle. No root finding."""
    p = as_poly(p)
    if p.is_zero():
        raise DomainError("zero polynomial")
    return math.exp(quad.circle_log_mean(p.coeffs, cfg.angular_nodes))


def areal_oracle(p, cfg: QuadratureConfig = DEFAULT) -> float:
    """``exp`` of the area mean of ``log|p|`` by Gauss-Legendre (radius) x trapezoid (angle)."""
    p = as_poly(p)
    if p.is_zero():
        raise DomainError("zero polynomial")
    return math.exp(quad.disk_log_mean(p.coeffs, cfg))


def bergman_p_norm(p, exponent: float, cfg: QuadratureConfig = DEFAULT) -> float:
    """``(1/pi * int_D |p|^exponent dA)^(1/exponent)`` by quadrature."""
    if exponent <= 0:
        raise DomainError("exponent must be > 0")
    p = as_poly(p)
    return quad.disk_power_mean(p.coeffs, exponent, cfg) ** (1.0 / exponent)


def hardy_p_norm(p, exponent: float, cfg: QuadratureConfig = DEFAULT) -> float:
    """``(1/2pi * int |p(e^{it})|^exponent dt)^(1/exponent)`` by the trapezoid rule."""
    if exponent <= 0:
        raise DomainError("exponent must be > 0")
    p = as_poly(p)
    return quad.circle_power_mean(p.coeffs, exponent, cfg.angular_nodes) ** (1.0 / exponent)


def modulus_penalty(x: float) -> float:
    """``g(x) = exp((x^2 - 1)/2) / x``; strict global minimum ``g(1) = 1`` on ``x > 0``."""
    if not x > 0:
        raise DomainError("modulus_penalty needs x > 0")
    log_g = 0.5 * (x * x - 1.0) - math.log(x)
    return math.exp(log_g) if log_g < 709.0 else math.inf


@dataclass(frozen=True)
class Bounds:
    upper_ok: bool  # areal <= mahler
    a0_ok: bool  # areal >= |a_0|
    lower_ok: bool  # areal >= exp(-n/2) mahler


@dataclass(frozen=True)
class MeasureReport:
    degree: int
    mahler: float
    areal: float
    ratio: float
    bounds_ok: Bounds
    interior_roots: int
    # True when no root lies in the open disk, so areal = mahler = |a_0| is an integer
    # for integer input; otherwise the areal value falls in the transcendental case
    integer_case: bool
    log_mahler: float
    log_areal: float


def _le(lhs_log: float, rhs_log: float) -> bool:
    # lhs <= rhs up to BOUND_RTOL, compared in log scale
    return lhs_log <= rhs_log + BOUND_RTOL


def measure_report(p, roots: RootSet | None = None) -> MeasureReport:
    """Both measures from one shared RootSet plus the three bound checks."""
    p = as_poly(p)
    if p.is_zero():
        raise DomainError("zero polynomial")
    n = p.degree
    if n == 0:
        v = abs(p.coeffs[0])
        lv = math.log(v)
        return MeasureReport(0, v, v, 1.0, Bounds(True, True, True), 0, True, lv, lv)
    r = roots
    if r is None:
        from .arithmetic import int_roots, integral_coefficients

        q = integral_coefficients(p)
        r = int_roots(q) if q is not None else find_roots(p)
    lm = log_mahler_measure(r)
    la = log_areal_measure(r)
    a0 = abs(p.coeffs[0])
    la0 = math.log(a0) if a0 > 0 else -math.inf
    bounds = Bounds(
        upper_ok=_le(la, lm),
        a0_ok=_le(la0, la),
        lower_ok=_le(lm - 0.5 * n, la),
    )
    k = int((np.abs(r.roots) < 1.0).sum())
    return MeasureReport(
        degree=n, mahler=math.exp(lm), areal=math.exp(la), ratio=math.exp(la - lm),
        bounds_ok=bounds, interior_roots=k, integer_case=(k == 0),
        log_mahler=lm, log_areal=la)
