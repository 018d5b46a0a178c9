"""Integer partial sums as approximants in Bergman and Hardy norms."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, special

from .errors import DomainError, ParseError, TailNotCertified
from .poly import IntPoly
from .quadrature import QuadratureConfig, circle_power_mean, disk_power_mean, ring_values


@dataclass(frozen=True)
class CoefficientStream:
    """Exact Taylor coefficients plus what is known about the function they define.

    ``tail_norm(T, p)`` bounds ``||f - f_T||_p`` in the Bergman space and is
    only trusted for exponents accepted by ``certified``. A finite stream
    (``length`` set) is a polynomial and certified for every exponent.
    """

    name: str
    coefficient: Callable[[int], object]
    certified: Callable[[float], bool] = lambda p: False
    tail_norm: Optional[Callable[[int, float], float]] = None
    length: Optional[int] = None
    closed_form: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def coefficients(self, degree: int) -> list:
        top = degree + 1 if self.length is None else min(degree + 1, self.length)
        return [self.coefficient(k) for k in range(top)] + [0] * (degree + 1 - top)

    def truncate(self, degree: int):
        """``sum_{k <= degree} c_k z^k``: an IntPoly when every coefficient is an integer."""
        c = self.coefficients(degree)
        if all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for x in c):
            return IntPoly(tuple(int(x) for x in c))
        return np.array([complex(x) for x in c])

    def float_coefficients(self, degree: int) -> np.ndarray:
        return np.array([complex(x) for x in self.coefficients(degree)], dtype=np.complex128)

    @property
    def is_polynomial(self) -> bool:
        return self.length is not None

    def check(self, exponent: float):
        if not (self.is_polynomial or self.certified(exponent)):
            raise TailNotCertified(f"stream {self.name!r} has no tail certificate for p = {exponent}")

    def tail(self, truncation: int, exponent: float) -> float:
        if self.is_polynomial:
            return 0.0 if truncation + 1 >= self.length else math.inf
        self.check(exponent)
        return self.tail_norm(truncation, exponent)


# ---------------------------------------------------------------- built-in streams

def _ones_tail(T: int, p: float) -> float:
    # ||z^{T+1}/(1-z)||_p exactly: the angular mean of |1 - r e^{it}|^{-p} is
    # 2F1(p/2, p/2; 1; r^2), which behaves like (1-r)^{1-p} at r = 1 for p > 1
    a = min(0.0, 1.0 - p) if p != 1 else -0.5

    if p > 1:
        at_one = 2.0 * math.gamma(p - 1) / math.gamma(p / 2) ** 2 * 2.0 ** (1 - p)
    elif p < 1:
        at_one = 2.0 * math.gamma(1 - p) / math.gamma(1 - p / 2) ** 2
    else:
        at_one = 0.0

    def g(r):
        if r >= 1.0:
            return at_one
        return 2.0 * r ** (p * (T + 1) + 1) * special.hyp2f1(p / 2, p / 2, 1.0, r * r) / (1.0 - r) ** a

    v, _ = integrate.quad(g, 0.0, 1.0, weight="alg", wvar=(0.0, a), limit=500)
    return v ** (1.0 / p)


def _gap_tail(T: int, p: float) -> float:
    # |sum_{k >= K} z^{k^2}| <= r^{K^2} (1 + sqrt(pi) / (2 sqrt(-log r))) with K^2 > T,
    # and the majorant to the power p grows like (1-r)^{-p/2}
    K = math.isqrt(T) + 1
    a = -0.5 * p

    def g(r):
        if r <= 0.0:
            return 0.0
        if r >= 1.0:
            return 2.0 * (math.sqrt(math.pi) / 2.0) ** p
        h = r ** (K * K) * (1.0 + math.sqrt(math.pi) / (2.0 * math.sqrt(-math.log(r))))
        return 2.0 * r * h ** p / (1.0 - r) ** a

    v, _ = integrate.quad(g, 0.0, 1.0, weight="alg", wvar=(0.0, a), limit=500)
    return v ** (1.0 / p)


def ones() -> CoefficientStream:
    """``1/(1-z)``; in the Bergman space exactly for ``p < 2``."""
    return CoefficientStream("ones", lambda k: 1, lambda p: 0 < p < 2, _ones_tail,
                             closed_form=lambda z: 1.0 / (1.0 - z))


def gap() -> CoefficientStream:
    """``sum_k z^{k^2}``; certified for ``p < 2`` through a radial majorant."""
    return CoefficientStream("gap", lambda k: int(math.isqrt(k) ** 2 == k), lambda p: 0 < p < 2, _gap_tail)


def powers(base: int) -> CoefficientStream:
    """``1/(1 - base z)``; not in any Bergman space for ``|base| > 1`` and never certified."""
    return CoefficientStream(f"powers{base}", lambda k: base ** k)


def polynomial_stream(coeffs: Sequence, name: str = "poly") -> CoefficientStream:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return CoefficientStream(name, lambda k: c[k], lambda p: True, None, length=len(c))


def _parse_exact(tok: str):
    try:
        v = Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coefficient {tok!r}") from exc
    return int(v) if v.denominator == 1 else v


def read_stream(path) -> CoefficientStream:
    """Finite stream from a file of integers or fractions ``a/b`` (comma or whitespace separated)."""
    with open(path) as fh:
        text = fh.read()
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    toks = body.replace(",", " ").split()
    if not toks:
        raise ParseError("empty coefficient file")
    return polynomial_stream([_parse_exact(t) for t in toks], name=f"file:{path}")


def stream_by_name(spec: str) -> CoefficientStream:
    if spec == "ones":
        return ones()
    if spec == "gap":
        return gap()
    if spec.startswith("file:"):
        return read_stream(spec[5:])
    raise ParseError(f"unknown stream {spec!r}; expected ones, gap or file:<path>")


# ---------------------------------------------------------------- norms

def _angular_nodes(degree: int, floor: int) -> int:
    need = 16 * (degree + 1)
    return max(floor, 1 << (need - 1).bit_length())


def _graded(degree: int, cfg: QuadratureConfig) -> QuadratureConfig:
    # panels shrink toward r = 1 down to width ~ 1/degree, where |f_T - S_N| peaks
    panels = max(cfg.radial_panels, int(math.ceil(math.log2(degree + 2))) + 2)
    return QuadratureConfig(angular_nodes=_angular_nodes(degree, cfg.angular_nodes),
                            radial_nodes=cfg.radial_nodes, mode=cfg.mode, radial_panels=panels)


APPROX_CFG = QuadratureConfig(angular_nodes=1024, radial_nodes=32)


def bergman_norm(coeffs, exponent: float, cfg: QuadratureConfig = APPROX_CFG) -> float:
    """``(1/pi int_D |g|^p dA)^(1/p)`` for a polynomial ``g``, with resolution scaled to its degree."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=np.complex128), "b")
    if c.size == 0:
        return 0.0
    return disk_power_mean(c, exponent, _graded(c.size - 1, cfg)) ** (1.0 / exponent)


def hardy_norm(coeffs, exponent: float, cfg: QuadratureConfig = APPROX_CFG) -> float:
    c = np.trim_zeros(np.asarray(coeffs, dtype=np.complex128), "b")
    if c.size == 0:
        return 0.0
    m = _angular_nodes(c.size - 1, cfg.angular_nodes)
    return circle_power_mean(c, exponent, m) ** (1.0 / exponent)


def _difference(f: CoefficientStream, N: int, T: int) -> np.ndarray:
    c = f.float_coefficients(T)
    c[: N + 1] = 0
    return c


def default_truncation(N: int) -> int:
    return max(4 * N, 64)


def bergman_distance(f: CoefficientStream, N: int, truncation: Optional[int] = None,
                     exponent: float = 1.5, cfg: QuadratureConfig = APPROX_CFG) -> float:
    """``||f_T - S_N||_p`` with ``T = truncation >= 4N``; off from ``||f - S_N||_p`` by at most ``f.tail(T, p)``."""
    if not exponent > 1:
        raise DomainError("exponent must be > 1")
    T = default_truncation(N) if truncation is None else truncation
    if T < 4 * N:
        raise DomainError("truncation must be >= 4N")
    f.check(exponent)
    return bergman_norm(_difference(f, N, T), exponent, cfg)


def hardy_gap(p_seq: Sequence, exponent: float, cfg: QuadratureConfig = APPROX_CFG) -> list[float]:
    """``||P_n - P_{n-1}||_{H^p}`` for consecutive entries."""
    if not exponent > 0:
        raise DomainError("exponent must be > 0")
    arrs = [np.array([complex(x) for x in (q.coeffs if isinstance(q, IntPoly) else q)]) for q in p_seq]
    out = []
    for a, b in zip(arrs[:-1], arrs[1:]):
        n = max(a.size, b.size)
        d = np.zeros(n, dtype=np.complex128)
        d[: b.size] += b
        d[: a.size] -= a
        out.append(hardy_norm(d, exponent, cfg))
    return out


@dataclass(frozen=True)
class ApproxRow:
    N: int
    bergman_distance: float  # ||f_T - S_N||_p
    hardy_distance: float  # ||f_T - S_N||_{H^p}
    hardy_gap: float  # ||S_N - S_{N_prev}||_{H^p}, nan on the first row
    tail_bound: float  # ||f - f_T||_p


def integer_approx_table(f: CoefficientStream, exponent: float, N_list: Sequence[int],
                         cfg: QuadratureConfig = APPROX_CFG) -> list[ApproxRow]:
    if not exponent > 1:
        raise DomainError("exponent must be > 1")
    f.check(exponent)
    rows = []
    prev = None
    for N in N_list:
        T = default_truncation(N)
        d = _difference(f, N, T)
        s = f.float_coefficients(N)
        gap_val = math.nan if prev is None else hardy_gap([prev, s], exponent, cfg)[0]
        rows.append(ApproxRow(N, bergman_norm(d, exponent, cfg), hardy_norm(d, exponent, cfg),
                              gap_val, f.tail(T, exponent)))
        prev = s
    return rows


def uniform_error(f: CoefficientStream, N: int, radius: float = 0.9, points: int = 1000) -> float:
    """Max of ``|f - S_N|`` over a polar grid of about ``points`` nodes in ``|z| <= radius``.

    Uses the closed form of ``f`` when the stream has one; otherwise a deep
    truncation plus the bound ``max|c_k| r^{T+1}/(1-r)`` on bounded-coefficient tails.
    """
    nr = max(1, int(round(math.sqrt(points / 10))))
    nt = max(1, points // nr)
    radii = radius * np.arange(1, nr + 1) / nr
    sN = ring_values(f.float_coefficients(N), radii, nt)
    if f.closed_form is not None:
        z = radii[:, None] * np.exp(2j * np.pi * np.arange(nt) / nt)[None, :]
        return float(np.abs(f.closed_form(z) - sN).max())
    if f.is_polynomial:
        full = ring_values(f.float_coefficients(f.length - 1), radii, nt)
        return float(np.abs(full - sN).max())
    T = max(4 * N, int(math.ceil(40.0 / -math.log(radius))))
    c = f.float_coefficients(T)
    deep = ring_values(c, radii, nt)
    slack = float(np.abs(c).max()) * radius ** (T + 1) / (1.0 - radius)
    return float(np.abs(deep - sN).max()) + slack
