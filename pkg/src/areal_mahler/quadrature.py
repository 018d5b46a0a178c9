"""Tensor quadrature on the unit circle and the unit disk.

Circle means use the trapezoid rule; polynomial values on each circle come from
one FFT of the scaled coefficients (exact aliasing when the degree exceeds the
node count). Disk means add Gauss-Legendre in the radius with weight ``2r``,
optionally on panels graded toward ``r = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SingularNode

EXACT = "exact-form"
ORACLE = "oracle"


@dataclass(frozen=True)
class QuadratureConfig:
    # 8192 keeps the circle trapezoid within 1e-3 for several roots on |z| = 1
    angular_nodes: int = 8192
    radial_nodes: int = 64
    mode: str = EXACT
    # >1 splits [0, 1] at 1 - 2**-k, k = 1..radial_panels-1, each with radial_nodes points
    radial_panels: int = 1

    def __post_init__(self):
        if self.angular_nodes < 64:
            raise ValueError("angular_nodes must be >= 64")
        if self.radial_nodes < 16:
            raise ValueError("radial_nodes must be >= 16")
        if self.mode not in (EXACT, ORACLE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.radial_panels < 1:
            raise ValueError("radial_panels must be >= 1")


DEFAULT = QuadratureConfig()


@lru_cache(maxsize=64)
def radial_rule(nodes: int, panels: int = 1):
    """Nodes and weights for ``int_0^1 f(r) 2r dr``; weights sum to 1."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    if panels == 1:
        edges = np.array([0.0, 1.0])
    else:
        edges = np.concatenate([[0.0], 1.0 - 2.0 ** -np.arange(1, panels), [1.0]])
    rs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        r = lo + half * (x + 1.0)
        rs.append(r)
        ws.append(w * half * 2.0 * r)
    r = np.concatenate(rs)
    w = np.concatenate(ws)
    r.setflags(write=False)
    w.setflags(write=False)
    return r, w


def ring_values(coeffs, radii, m: int, offset: float = 0.0) -> np.ndarray:
    """``p(r e^{i(offset + 2 pi j/m)})`` for each radius (rows) and node j (columns)."""
    a = np.asarray(coeffs, dtype=np.complex128)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    k = np.arange(len(a))
    with np.errstate(under="ignore"):
        b = a[None, :] * radii[:, None] ** k[None, :]
    b = b * np.exp(1j * offset * k)[None, :]
    if len(a) > m:
        folded = np.zeros((len(radii), m), dtype=np.complex128)
        for start in range(0, len(a), m):
            chunk = b[:, start:start + m]
            folded[:, : chunk.shape[1]] += chunk
        b = folded
    return np.fft.ifft(b, n=m, axis=1) * m


def _ring_scale(coeffs, radii) -> np.ndarray:
    a = np.abs(np.asarray(coeffs, dtype=np.complex128))
    k = np.arange(len(a))
    with np.errstate(under="ignore"):
        return (a[None, :] * np.atleast_1d(radii)[:, None] ** k[None, :]).sum(axis=1)


def _safe_ring_values(coeffs, radii, m):
    # rotate by a quarter step once if a node sits on a zero (to rounding level)
    step = 2.0 * np.pi / m
    scale = _ring_scale(coeffs, radii)[:, None]
    for offset in (0.0, 0.25 * step):
        v = ring_values(coeffs, radii, m, offset)
        if not np.any(np.abs(v) <= 4.0 * np.finfo(float).eps * scale):
            return v
    raise SingularNode("quadrature node on a zero of the polynomial after grid rotation")


def circle_log_mean(coeffs, m: int) -> float:
    """Trapezoid mean of ``log|p|`` on the unit circle."""
    v = _safe_ring_values(coeffs, [1.0], m)
    return float(np.log(np.abs(v)).mean())


def disk_log_mean(coeffs, cfg: QuadratureConfig) -> float:
    """Normalized-area mean of ``log|p|`` over the unit disk."""
    r, w = radial_rule(cfg.radial_nodes, cfg.radial_panels)
    v = _safe_ring_values(coeffs, r, cfg.angular_nodes)
    return float(w @ np.log(np.abs(v)).mean(axis=1))


def circle_power_mean(coeffs, exponent: float, m: int) -> float:
    v = ring_values(coeffs, [1.0], m)
    return float((np.abs(v) ** exponent).mean())


def disk_power_mean(coeffs, exponent: float, cfg: QuadratureConfig) -> float:
    r, w = radial_rule(cfg.radial_nodes, cfg.radial_panels)
    v = ring_values(coeffs, r, cfg.angular_nodes)
    return float(w @ (np.abs(v) ** exponent).mean(axis=1))
