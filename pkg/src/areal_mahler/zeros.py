"""Zero distribution diagnostics: moduli, angular discrepancy, truncated log energy."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from . import kernels
from .arithmetic import family_poly, FAMILY_ALIASES
from .errors import DomainError, MultipleRoot
from .measures import log_areal_measure, log_mahler_measure
from .poly import IntPoly, RootSet, discriminant, find_roots

DEFAULT_CUTOFFS = (1.0, 5.0, 10.0, 20.0)
IDENTITY_RTOL = 1e-4


def angular_discrepancy(roots) -> float:
    """Largest deviation of the zero counting measure from normalized arclength over arcs.

    With sorted angle fractions ``u_1 <= ... <= u_n`` in ``[0, 1)`` the supremum over
    arcs is ``max_j (j/n - u_j) + max_j (u_j - (j-1)/n)``; both maxima are attained at
    arcs whose endpoints sit on root angles.
    """
    z = np.asarray(roots, dtype=np.complex128)
    n = z.size
    if n == 0:
        return 0.0
    u = np.sort(np.mod(np.angle(z) / (2.0 * np.pi), 1.0))
    j = np.arange(1, n + 1)
    d_plus = np.max(j / n - u)
    d_minus = np.max(u - (j - 1) / n)
    return float(min(max(d_plus, 0.0) + max(d_minus, 0.0), 1.0))


def truncated_energy(roots, cutoff: float) -> float:
    """``(1/n^2) sum_{j != k} min(-log|z_j - z_k|, cutoff) + cutoff/n``."""
    z = np.ascontiguousarray(roots, dtype=np.complex128)
    n = z.size
    if n < 2:
        raise DomainError("energy needs at least two roots")
    return kernels.pair_energy(z, float(cutoff)) / (n * n) + cutoff / n


@dataclass(frozen=True)
class ZeroStats:
    n: int
    min_modulus: float
    max_modulus: float
    angular_discrepancy: float
    energy_truncated: dict = field(default_factory=dict)
    sorted_moduli: np.ndarray = field(default=None, repr=False)

    def inside_fraction(self, r: float) -> float:
        """Fraction of roots with ``|z| < r``."""
        if self.n == 0:
            return 0.0
        return int(np.searchsorted(self.sorted_moduli, r, side="left")) / self.n


def zero_stats(r: RootSet, cutoffs: Sequence[float] = DEFAULT_CUTOFFS) -> ZeroStats:
    z = np.asarray(r.roots, dtype=np.complex128)
    mod = np.sort(np.abs(z))
    energy = {float(m): truncated_energy(z, m) for m in cutoffs} if z.size >= 2 else {}
    return ZeroStats(
        n=z.size,
        min_modulus=float(mod[0]) if z.size else math.nan,
        max_modulus=float(mod[-1]) if z.size else math.nan,
        angular_discrepancy=angular_discrepancy(z),
        energy_truncated=energy,
        sorted_moduli=mod,
    )


@dataclass(frozen=True)
class ScanRow:
    n: int
    degree: int
    mahler_root: float  # M^{1/degree}
    areal_root: float  # ||P||_0^{1/degree}
    min_modulus: float
    max_modulus: float
    angular_discrepancy: float


Family = Union[str, Callable[[int], Sequence]]


def _scan_one(family: Family, n: int) -> ScanRow:
    if callable(family):
        p = np.asarray(family(n), dtype=np.complex128)
    else:
        p = family_poly(family, n).to_complex()
    r = find_roots(p)
    deg = r.degree
    st = zero_stats(r, cutoffs=())
    return ScanRow(
        n=n, degree=deg,
        mahler_root=math.exp(log_mahler_measure(r) / deg),
        areal_root=math.exp(log_areal_measure(r) / deg),
        min_modulus=st.min_modulus, max_modulus=st.max_modulus,
        angular_discrepancy=st.angular_discrepancy,
    )


def family_scan(family: Family, n_values: Sequence[int], workers: int = 1) -> list[ScanRow]:
    """One row of zero diagnostics per ``n``; ``family`` is a name or ``n -> coefficients``.

    The root columns use the actual degree as exponent, which is ``2n`` for the
    reciprocal family.
    """
    if not callable(family) and family not in FAMILY_ALIASES:
        raise DomainError(f"unknown family {family!r}")
    ns = [int(n) for n in n_values]
    if workers > 1 and not callable(family):
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_scan_one, [family] * len(ns), ns))
    return [_scan_one(family, n) for n in ns]


@dataclass(frozen=True)
class DiscriminantEnergy:
    disc: int
    log_abs_disc: float
    pair_log_sum: float  # sum_{j != k} log(1/|z_j - z_k|)
    energy_bound: float  # (1/n^2) log(|a_n|^{2n-2} / |disc|); <= 0 for monic input
    identity_ok: bool

    @property
    def disc_at_least_one(self) -> bool:
        # a nonzero integer, so log(1/|disc|) <= 0
        return abs(self.disc) >= 1


def discriminant_energy_bound(p) -> DiscriminantEnergy:
    if not isinstance(p, IntPoly):
        p = IntPoly(tuple(p))
    n = p.degree
    if n < 2:
        raise DomainError("degree >= 2 required")
    d = discriminant(p)
    if d == 0:
        raise MultipleRoot("discriminant is zero")
    log_d = math.log(abs(d))
    log_lead = math.log(abs(p.leading))
    r = find_roots(p.to_complex())
    pair = kernels.pair_energy(np.ascontiguousarray(r.roots), math.inf)
    # log(1/|disc|) = -(2n-2) log|a_n| + sum_{j != k} log(1/|z_j - z_k|)
    predicted = -(2 * n - 2) * log_lead + pair
    ok = abs(predicted + log_d) <= IDENTITY_RTOL * max(1.0, abs(log_d))
    return DiscriminantEnergy(d, log_d, pair, ((2 * n - 2) * log_lead - log_d) / (n * n), ok)
