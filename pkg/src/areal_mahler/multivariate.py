"""Multivariate Mahler and areal measures on the torus and the polydisk."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from . import kernels
from .composition import InequalityCheck
from .errors import DomainError, ParseError, SingularNode
from .poly import _parse_complex, find_roots
from .quadrature import QuadratureConfig, radial_rule

MV_RTOL = 1e-3
GOLDEN = 0.6180339887498949
TORUS_NODES = {1: 8192, 2: 2048, 3: 256}
# tensor polydisk rule: nodes per disk are radial_nodes x angular_nodes
MV_DISK = QuadratureConfig(angular_nodes=128, radial_nodes=32)
# fibered rule: quadrature over the last variable only
FIBER_DISK = QuadratureConfig(angular_nodes=256, radial_nodes=64)
FIBER_CIRCLE_NODES = 1024


@dataclass(frozen=True, eq=False)
class MultiPoly:
    """Sparse polynomial in ``d`` variables: exponent tuple -> coefficient."""

    terms: Mapping
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise DomainError("d >= 1")
        clean = {}
        for k, c in dict(self.terms).items():
            k = tuple(int(e) for e in k)
            if len(k) != self.d or any(e < 0 for e in k):
                raise DomainError(f"bad exponent {k} for d = {self.d}")
            c = complex(c)
            if c != 0:
                clean[k] = clean.get(k, 0) + c
        object.__setattr__(self, "terms", {k: c for k, c in clean.items() if c != 0})

    @classmethod
    def from_terms(cls, terms: Mapping) -> "MultiPoly":
        if not terms:
            raise DomainError("cannot infer d from an empty term map")
        return cls(terms, len(next(iter(terms))))

    @property
    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant(self) -> complex:
        return self.terms.get((0,) * self.d, 0j)

    def degrees(self) -> tuple:
        """Largest exponent of each variable."""
        if self.is_zero():
            return (0,) * self.d
        return tuple(int(x) for x in self.exponents().max(axis=0))

    def exponents(self) -> np.ndarray:
        return np.array(list(self.terms), dtype=np.int64).reshape(-1, self.d)

    def coefficients(self) -> np.ndarray:
        return np.array(list(self.terms.values()), dtype=np.complex128)

    def dense(self) -> np.ndarray:
        a = np.zeros(tuple(k + 1 for k in self.degrees()), dtype=np.complex128)
        for k, c in self.terms.items():
            a[k] = c
        return a

    def __call__(self, pts) -> np.ndarray:
        pts = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.complex128)
        if pts.shape[1] != self.d:
            raise DomainError(f"points need {self.d} columns")
        if self.is_zero():
            return np.zeros(pts.shape[0], dtype=np.complex128)
        return kernels.mv_eval(self.exponents(), self.coefficients(), pts)


def parse_multipoly(text: str) -> MultiPoly:
    """Lines ``k1 k2 ... kd : re[+imi]``; blank lines and ``#`` comments skipped."""
    terms: dict = {}
    d = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: expected 'k1 ... kd : coefficient'")
        left, right = line.split(":", 1)
        try:
            k = tuple(int(x) for x in left.split())
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad exponent list {left.strip()!r}") from exc
        if not k or any(e < 0 for e in k):
            raise ParseError(f"line {lineno}: exponents must be nonnegative integers")
        if d is None:
            d = len(k)
        elif len(k) != d:
            raise ParseError(f"line {lineno}: expected {d} exponents, got {len(k)}")
        terms[k] = terms.get(k, 0) + _parse_complex(right)
    if d is None:
        raise ParseError("no terms")
    return MultiPoly(terms, d)


def read_multipoly(path) -> MultiPoly:
    with open(path) as fh:
        return parse_multipoly(fh.read())


# ---------------------------------------------------------------- torus quadrature

def _fold(a: np.ndarray, axis: int, m: int) -> np.ndarray:
    # alias exponents k and k + m onto one FFT bin
    n = a.shape[axis]
    if n <= m:
        return a
    pad = (-n) % m
    widths = [(0, 0)] * a.ndim
    widths[axis] = (0, pad)
    a = np.pad(a, widths)
    shape = a.shape[:axis] + ((n + pad) // m, m) + a.shape[axis + 1:]
    return a.reshape(shape).sum(axis=axis)


def torus_values(dense: np.ndarray, m: int, offsets) -> np.ndarray:
    """Values on the ``m^d`` tensor grid, variable ``i`` at angles ``offsets[i] + 2 pi j/m``."""
    a = dense
    for i, off in enumerate(offsets):
        if off:
            ph = np.exp(1j * off * np.arange(a.shape[i]))
            a = a * ph.reshape([-1 if j == i else 1 for j in range(a.ndim)])
    for i in range(a.ndim):
        a = _fold(a, i, m)
    return np.fft.ifftn(a, s=(m,) * a.ndim, axes=tuple(range(a.ndim))) * m ** a.ndim


def _grid_offsets(d: int, m: int):
    # unrotated grid first, then per-variable shifts by distinct irrational fractions
    # of a step so that zero sets such as z_1^2 z_2^3 = -1 miss every node
    step = 2.0 * np.pi / m
    yield (0.0,) * d
    yield tuple(step * ((0.25 + i * GOLDEN) % 1.0) for i in range(d))


def _singular(v: np.ndarray, scale: float) -> bool:
    return bool(np.any(np.abs(v) <= 4.0 * np.finfo(float).eps * scale))


def _torus_log_mean(dense: np.ndarray, m: int, off, scale: float) -> Optional[float]:
    # None when some node sits on a zero; three variables are processed one
    # first-variable angle at a time to bound memory
    if dense.ndim < 3:
        v = torus_values(dense, m, off)
        return None if _singular(v, scale) else float(np.log(np.abs(v)).mean())
    ph = np.exp(1j * off[0] * np.arange(dense.shape[0]))[:, None, None]
    first = np.fft.ifft(_fold(dense * ph, 0, m), n=m, axis=0) * m
    total = 0.0
    for sl in first:
        v = torus_values(sl, m, off[1:])
        if _singular(v, scale):
            return None
        total += float(np.log(np.abs(v)).mean())
    return total / m


def mv_mahler(p: MultiPoly, angular_nodes: Optional[int] = None) -> float:
    """``exp`` of the tensor-trapezoid mean of ``log|p|`` over the d-torus (d <= 3)."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    if p.d > 3:
        raise DomainError("tensor torus quadrature supports d <= 3")
    m = angular_nodes or TORUS_NODES[p.d]
    dense = p.dense()
    scale = float(np.abs(dense).sum())
    for off in _grid_offsets(p.d, m):
        mean = _torus_log_mean(dense, m, off, scale)
        if mean is not None:
            return math.exp(mean)
    raise SingularNode("torus node on a zero after grid rotation")


# ---------------------------------------------------------------- polydisk quadrature

def mv_areal_quadrature(p: MultiPoly, cfg: QuadratureConfig = MV_DISK) -> float:
    """``exp`` of the tensor (Gauss-Legendre x trapezoid)^d mean of ``log|p|`` (d <= 2)."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    if p.d > 2:
        raise DomainError("tensor polydisk quadrature supports d <= 2")
    r, w = radial_rule(cfg.radial_nodes, cfg.radial_panels)
    m = cfg.angular_nodes
    dense = p.dense()
    if p.d == 1:
        from .quadrature import disk_log_mean

        return math.exp(disk_log_mean(dense, cfg))
    k1 = np.arange(dense.shape[0])
    k2 = np.arange(dense.shape[1])
    for off in _grid_offsets(2, m):
        total = 0.0
        bad = False
        for r1, w1 in zip(r, w):
            # rows: second radius; FFT over both angles
            scaled = dense[None, :, :] * (r1 ** k1)[None, :, None] * (r[:, None] ** k2[None, :])[:, None, :]
            v = np.stack([torus_values(s, m, off) for s in scaled])
            scale = np.abs(scaled).sum(axis=(1, 2))
            if np.any(np.abs(v) <= 4.0 * np.finfo(float).eps * scale[:, None, None]):
                bad = True
                break
            total += w1 * float(w @ np.log(np.abs(v)).mean(axis=(1, 2)))
        if not bad:
            return math.exp(total)
    raise SingularNode("polydisk node on a zero after grid rotation")


# ---------------------------------------------------------------- fibered quadrature

def _row_log_measures(C: np.ndarray, areal: bool) -> np.ndarray:
    """Closed-form log measure of each row of ``C`` (ascending coefficients in one variable)."""
    npts, n1 = C.shape
    n = n1 - 1
    out = np.empty(npts)
    if n == 0:
        return np.log(np.abs(C[:, 0]))
    scale = np.abs(C).max(axis=1)
    tiny = 64 * np.finfo(float).eps * scale
    good = (np.abs(C[:, 0]) > tiny) & (np.abs(C[:, n]) > tiny)
    idx = np.flatnonzero(good)
    roots = np.zeros((npts, n), dtype=np.complex128)
    ok = np.zeros(npts, dtype=bool)
    if idx.size:
        if n == 1:
            roots[idx, 0] = -C[idx, 0] / C[idx, 1]
            ok[idx] = True
        else:
            z, conv = kernels.batch_aberth(np.ascontiguousarray(C[idx]), 500)
            roots[idx] = z
            ok[idx] = conv
    for i in np.flatnonzero(~ok):
        c = C[i]
        if not np.any(c):
            raise SingularNode("fiber polynomial vanishes identically")
        rs = find_roots(c) if np.count_nonzero(c) > 1 or c[0] == 0 else None
        if rs is None:
            out[i] = math.log(abs(c[0]))
            ok[i] = True
            continue
        mod = np.abs(rs.roots)
        v = math.log(abs(rs.leading)) + float(np.log(mod[mod > 1]).sum())
        if areal:
            v += 0.5 * float((mod[mod < 1] ** 2 - 1).sum())
        out[i] = v
    sel = np.flatnonzero(good & ok)
    if sel.size:
        mod = np.abs(roots[sel])
        v = np.log(np.abs(C[sel, n])) + np.where(mod > 1, np.log(np.where(mod > 1, mod, 1.0)), 0.0).sum(axis=1)
        if areal:
            v += 0.5 * np.where(mod < 1, mod * mod - 1.0, 0.0).sum(axis=1)
        out[sel] = v
    return out


def _fiber_coefficients(p: MultiPoly, r2: np.ndarray, m: int, offset: float) -> np.ndarray:
    """Coefficients in ``z_1`` at every node ``z_2 = r e^{i t}``; shape ``(len(r2) * m, deg_1 + 1)``."""
    dense = p.dense()
    from .quadrature import ring_values

    cols = [ring_values(dense[k1], r2, m, offset).reshape(-1) for k1 in range(dense.shape[0])]
    return np.stack(cols, axis=1)


def _fibered(p: MultiPoly, areal: bool, cfg: QuadratureConfig, circle_nodes: int) -> float:
    if p.is_zero():
        raise DomainError("zero polynomial")
    if p.d != 2:
        raise DomainError("fibered quadrature is for d = 2")
    # powers of z_1 dividing p contribute log|z_1|^k: -k/2 on the disk, 0 on the circle
    k_min = min(k[0] for k in p.terms)
    shifted = MultiPoly({(k[0] - k_min, k[1]): c for k, c in p.terms.items()}, 2)
    base = -0.5 * k_min if areal else 0.0
    if areal:
        r, w = radial_rule(cfg.radial_nodes, cfg.radial_panels)
        m = cfg.angular_nodes
    else:
        r, w = np.array([1.0]), np.array([1.0])
        m = circle_nodes
    step = 2.0 * np.pi / m
    for off in (0.0, 0.25 * step):
        C = _fiber_coefficients(shifted, r, m, off)
        try:
            vals = _row_log_measures(C, areal)
        except SingularNode:
            continue
        if np.all(np.isfinite(vals)):
            return math.exp(base + float(w @ vals.reshape(len(r), m).mean(axis=1)))
    raise SingularNode("fiber polynomial degenerates at a node after grid rotation")


def mv_areal_fibered(p: MultiPoly, cfg: QuadratureConfig = FIBER_DISK) -> float:
    """Areal measure for ``d = 2``: exact inner disk mean in ``z_1`` from roots, quadrature in ``z_2``.

    The inner value ``log ||p(., z_2)||_0`` is only C^1 in ``z_2`` (kinks where a root
    crosses the unit circle), far smoother than ``log|p|``, so the outer rule converges fast.
    """
    return _fibered(p, True, cfg, FIBER_CIRCLE_NODES)


def mv_mahler_fibered(p: MultiPoly, circle_nodes: int = FIBER_CIRCLE_NODES) -> float:
    return _fibered(p, False, FIBER_DISK, circle_nodes)


# ---------------------------------------------------------------- Monte Carlo

@dataclass(frozen=True)
class MCEstimate:
    value: float
    std_error: float
    samples: int
    seed: int
    redrawn: int = 0
    log_mean: float = math.nan


def _disk_points(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    u = rng.random((count, d))
    t = rng.random((count, d))
    return np.sqrt(u) * np.exp(2j * np.pi * t)


def mv_areal_mc(p: MultiPoly, samples: int, seed: int, streams: int = 4) -> MCEstimate:
    """Monte Carlo estimate with independent seeded streams, redrawing exact zeros."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    if samples < 1000:
        raise DomainError("samples >= 1000")
    if set(p.terms) == {(0,) * p.d}:
        v = abs(p.constant)
        return MCEstimate(v, 0.0, samples, seed, 0, math.log(v))
    exps, coefs = p.exponents(), p.coefficients()
    children = np.random.SeedSequence(seed).spawn(streams)
    sizes = [samples // streams + (i < samples % streams) for i in range(streams)]
    s1 = s2 = 0.0
    redrawn = 0
    for child, size in zip(children, sizes):
        rng = np.random.default_rng(child)
        logs = np.empty(0)
        while logs.size < size:
            pts = _disk_points(rng, size - logs.size, p.d)
            a = np.abs(kernels.mv_eval(exps, coefs, pts))
            keep = a > 0
            redrawn += int((~keep).sum())
            logs = np.concatenate([logs, np.log(a[keep])])
        s1 += logs.sum()
        s2 += (logs * logs).sum()
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0) * samples / (samples - 1)
    value = math.exp(mean)
    # delta method: d exp(mu) = exp(mu) d mu
    return MCEstimate(value, value * math.sqrt(var / samples), samples, seed, redrawn, mean)


# ---------------------------------------------------------------- dispatch and checks

def mv_areal(p: MultiPoly, samples: int = 200_000, seed: int = 0) -> float:
    """Best available estimate: closed form (d = 1), fibered quadrature (d = 2), else Monte Carlo."""
    if p.d == 1:
        from .composition import areal

        return areal(p.dense())
    if p.d == 2:
        return mv_areal_fibered(p)
    return mv_areal_mc(p, samples, seed).value


def dominance_value(p: MultiPoly) -> Optional[float]:
    """``|a_0|`` when it dominates the sum of the other coefficient moduli, else ``None``."""
    a0 = abs(p.constant)
    if a0 == 0:
        return None
    rest = sum(abs(c) for k, c in p.terms.items() if any(k))
    return a0 if a0 >= rest else None


@dataclass(frozen=True)
class SandwichCheck:
    upper: InequalityCheck  # areal <= mahler
    lower: InequalityCheck  # exp(-n/2) mahler <= areal
    mahler: float
    areal: float

    @property
    def holds(self) -> bool:
        return self.upper.holds and self.lower.holds


def mv_bounds_check(p: MultiPoly, rtol: float = MV_RTOL, cfg: QuadratureConfig = FIBER_DISK,
                    circle_nodes: int = FIBER_CIRCLE_NODES) -> SandwichCheck:
    """``exp(-n/2) M <= ||p||_0 <= M`` with both sides from fibered quadrature (closed forms for d = 1)."""
    if p.d > 2:
        raise DomainError("quadrature path needs d <= 2")
    if p.d == 1:
        from .composition import areal, mahler as mahler1

        mahler, areal_v = mahler1(p.dense()), areal(p.dense())
    else:
        mahler = mv_mahler_fibered(p, circle_nodes)
        areal_v = mv_areal_fibered(p, cfg)
    n = p.total_degree
    return SandwichCheck(
        upper=InequalityCheck(areal_v, mahler, rtol),
        lower=InequalityCheck(math.exp(-0.5 * n) * mahler, areal_v, rtol),
        mahler=mahler, areal=areal_v,
    )
