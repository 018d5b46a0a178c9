"""Polynomial representations, arithmetic, root finding and exact discriminants."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import NonConvergence, ParseError

MAX_ITER = 500
ROOT_TOL = 1e-12


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c)
    return c[: nz[-1] + 1] if nz.size else c[:0]


@dataclass(frozen=True, eq=False)
class ComplexPoly:
    """Dense polynomial ``a_0 + a_1 z + ... + a_n z^n`` with complex coefficients.

    Trailing zeros are stripped on construction; the zero polynomial has no
    coefficients and degree -1.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = _trim(np.array(self.coeffs, dtype=np.complex128).ravel())
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __call__(self, z):
        return evaluate(self, z)

    def __mul__(self, other):
        return multiply(self, as_poly(other))

    def __add__(self, other):
        o = as_poly(other).coeffs
        c = np.zeros(max(len(o), len(self.coeffs)), dtype=np.complex128)
        c[: len(self.coeffs)] += self.coeffs
        c[: len(o)] += o
        return ComplexPoly(c)

    def __sub__(self, other):
        return self + ComplexPoly(-as_poly(other).coeffs)

    def __eq__(self, other):
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"ComplexPoly({format_poly(self)!r})"

    @classmethod
    def from_roots(cls, roots, leading=1.0) -> "ComplexPoly":
        c = np.array([leading], dtype=np.complex128)
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(c)

    @classmethod
    def monomial(cls, k: int, coef=1.0) -> "ComplexPoly":
        c = np.zeros(k + 1, dtype=np.complex128)
        c[k] = coef
        return cls(c)


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with exact (arbitrary precision) integer coefficients, ascending."""

    coeffs: tuple

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        for x, y in zip(c, self.coeffs):
            if x != y:
                raise ValueError(f"non-integer coefficient {y!r}")
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_complex(self) -> ComplexPoly:
        return ComplexPoly(np.array([complex(x) for x in self.coeffs]))

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(k * a for k, a in enumerate(self.coeffs))[1:])

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"


def as_poly(p) -> ComplexPoly:
    """Coerce a ComplexPoly, IntPoly, scalar or coefficient sequence."""
    if isinstance(p, ComplexPoly):
        return p
    if isinstance(p, IntPoly):
        return p.to_complex()
    if np.isscalar(p):
        return ComplexPoly([p])
    return ComplexPoly(p)


@dataclass(frozen=True, eq=False)
class RootSet:
    """Leading coefficient plus the raw multiset of roots, with residual certificates.

    ``roots`` holds every root with multiplicity; near-coincident roots are not
    merged. ``origin`` counts the roots stripped exactly at zero (they are also
    present in ``roots``).
    """

    leading: complex
    roots: np.ndarray
    residuals: np.ndarray
    origin: int = 0
    iterations: int = 0

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)

    def reconstruct(self) -> ComplexPoly:
        return ComplexPoly.from_roots(self.roots, self.leading)


# ---------------------------------------------------------------- arithmetic

def evaluate(p, z):
    """Horner value of ``p`` at ``z`` (scalar or array); the zero polynomial gives 0."""
    p = as_poly(p)
    scalar = np.isscalar(z)
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
    if p.is_zero():
        out = np.zeros(zz.shape, dtype=np.complex128)
    else:
        out = kernels.horner(p.coeffs, zz)
    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(z))


def multiply(p, q) -> ComplexPoly:
    p, q = as_poly(p), as_poly(q)
    if p.is_zero() or q.is_zero():
        return ComplexPoly([])
    return ComplexPoly(np.convolve(p.coeffs, q.coeffs))


def derivative(p) -> ComplexPoly:
    p = as_poly(p)
    if p.degree < 1:
        return ComplexPoly([])
    return ComplexPoly(p.coeffs[1:] * np.arange(1, p.degree + 1))


def shift_mul_z(p, k: int = 1) -> ComplexPoly:
    """``z**k * p(z)``."""
    p = as_poly(p)
    return ComplexPoly(np.concatenate([np.zeros(k, dtype=np.complex128), p.coeffs]))


# ---------------------------------------------------------------- roots

def _residual_bound(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    # accepted |p(z)|: the stated root_tol * max|a_k|, or the rounding floor of
    # Horner evaluation at z, whichever is larger
    amax = np.abs(a).max()
    floor = 16 * len(a) * kernels.EPS * kernels.horner(np.abs(a).astype(np.complex128),
                                                       np.abs(z).astype(np.complex128)).real
    return np.maximum(ROOT_TOL * (1.0 + amax) * amax, floor)


def find_roots(p, maxiter: int = MAX_ITER) -> RootSet:
    """All roots of ``p`` by Aberth-Ehrlich iteration.

    Roots at the origin are stripped from the coefficient array first and
    reported exactly. Raises :class:`NonConvergence` if the iteration budget is
    used up and some residual is still above tolerance.
    """
    p = as_poly(p)
    if p.degree < 1:
        raise ValueError("find_roots needs degree >= 1")
    a = p.coeffs
    nz = np.flatnonzero(a)
    origin = int(nz[0])
    b = np.ascontiguousarray(a[origin:])
    m = len(b) - 1
    it = 0
    if m == 0:
        core = np.zeros(0, dtype=np.complex128)
    elif m == 1:
        core = np.array([-b[0] / b[1]])
    else:
        z0 = kernels.starting_points(b)
        core, it, conv = kernels.aberth(b, z0, maxiter)
        core = _polish(b, core)
        if not conv:
            res = np.abs(kernels.horner(b, core))
            if np.any(res > _residual_bound(b, core)):
                raise NonConvergence(
                    f"Aberth iteration did not converge in {maxiter} sweeps "
                    f"(max residual {res.max():.3g}, degree {m})")
    roots = np.concatenate([np.zeros(origin, dtype=np.complex128), core])
    residuals = np.abs(kernels.horner(a, roots)) if len(roots) else np.zeros(0)
    return RootSet(leading=complex(a[-1]), roots=roots, residuals=residuals,
                   origin=origin, iterations=it)


def find_roots_mp(coeffs, dps: int | None = None) -> list:
    """Roots in extended precision (mpmath), for exactly known ill-conditioned input.

    ``coeffs`` are ascending ints, Fractions or mpmath numbers. The working
    precision defaults to 20 digits plus the decimal size of ``sum |a_k| 2^k``,
    enough to absorb the cancellation of a monomial-basis polynomial on
    ``|z| <= 2``. Returns mpmath complex numbers.
    """
    import mpmath

    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2:
        raise ValueError("find_roots_mp needs degree >= 1")
    if dps is None:
        size = sum(abs(float(x)) * 2.0 ** k for k, x in enumerate(c))
        dps = 20 + max(0, int(math.log10(max(size, 1.0))))
    with mpmath.workdps(dps):
        mc = [mpmath.mpf(x.numerator) / x.denominator if hasattr(x, "denominator") else mpmath.mpmathify(x)
              for x in c]
        return list(mpmath.polyroots(mc[::-1], maxsteps=400, extraprec=2 * dps))


def _polish(b: np.ndarray, z: np.ndarray) -> np.ndarray:
    # one Newton step per root, kept only where it lowers |p|
    ratio, _ = kernels._newton_ratio_vec(b, z, 0.0)
    cand = z - ratio
    old = np.abs(kernels.horner(b, z))
    new = np.abs(kernels.horner(b, cand))
    return np.where(np.isfinite(new) & (new < old), cand, z)


# ---------------------------------------------------------------- exact integer arithmetic

def _ipoly(c: Iterable[int]) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _content(c: Sequence[int]) -> int:
    g = 0
    for x in c:
        g = math.gcd(g, x)
    return g


def _prem(A: list, B: list) -> list:
    # pseudo-remainder: lc(B)**(degA-degB+1) * A = Q*B + R
    R = list(A)
    dB = len(B) - 1
    lb = B[-1]
    e = len(A) - len(B) + 1
    while R and len(R) - 1 >= dB:
        lr = R[-1]
        shift = len(R) - 1 - dB
        R = [lb * x for x in R]
        for i, bx in enumerate(B):
            R[i + shift] -= lr * bx
        R = _ipoly(R)
        e -= 1
    if e > 0:
        f = lb ** e
        R = [f * x for x in R]
    return R


def resultant(A, B) -> int:
    """Exact resultant of two integer polynomials by the subresultant PRS."""
    A = _ipoly(A.coeffs if isinstance(A, IntPoly) else A)
    B = _ipoly(B.coeffs if isinstance(B, IntPoly) else B)
    if not A or not B:
        return 0
    dA, dB = len(A) - 1, len(B) - 1
    if dA == 0:
        return A[0] ** dB
    if dB == 0:
        return B[0] ** dA
    a, b = _content(A), _content(B)
    A = [x // a for x in A]
    B = [x // b for x in B]
    t = a ** dB * b ** dA
    s = 1
    if dA < dB:
        A, B = B, A
        if dA % 2 and dB % 2:
            s = -1
    g = h = 1
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = _prem(A, B)
        A = B
        if not R:
            return 0
        den = g * h ** delta
        B = [x // den for x in R]
        g = A[-1]
        # h <- h**(1-delta) * g**delta, exact in Z
        if delta > 0:
            h = g ** delta // h ** (delta - 1)
        if len(B) - 1 == 0:
            break
    dA = len(A) - 1
    h = B[-1] ** dA // h ** (dA - 1) if dA > 0 else h
    return s * t * h


def discriminant(p) -> int:
    """Exact discriminant ``a_n**(2n-2) * prod_{j<k} (z_j - z_k)**2``.

    Computed as ``(-1)**(n(n-1)/2) * Res(p, p') / a_n`` over the integers.
    """
    if not isinstance(p, IntPoly):
        p = IntPoly(tuple(p))
    n = p.degree
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    r = resultant(p, p.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, p.leading)
    assert rem == 0
    return q


def int_divmod(num: Sequence[int], den: Sequence[int]):
    """Exact division in Z[z]; ``None`` if the quotient is not integral."""
    num = _ipoly(num)
    den = _ipoly(den)
    if not den:
        raise ZeroDivisionError
    q = [0] * max(len(num) - len(den) + 1, 0)
    r = list(num)
    lb = den[-1]
    for i in range(len(q) - 1, -1, -1):
        top = r[i + len(den) - 1]
        c, rem = divmod(top, lb)
        if rem:
            return None
        q[i] = c
        if c:
            for j, d in enumerate(den):
                r[i + j] -= c * d
    return _ipoly(q), _ipoly(r)


# ---------------------------------------------------------------- text format

def _parse_complex(tok: str) -> complex:
    t = tok.strip().replace("−", "-").replace(" ", "").replace("j", "i")
    if not t:
        raise ParseError("empty coefficient")
    try:
        return complex(t.replace("i", "j"))
    except ValueError:
        pass
    if t in ("i", "+i"):
        return 1j
    if t == "-i":
        return -1j
    if t.endswith("i"):
        body = t[:-1]
        if body and body[-1] in "+-":
            body += "1"
            try:
                return complex(body + "j")
            except ValueError:
                pass
    raise ParseError(f"cannot parse coefficient {tok!r}")


def parse_poly(text: str) -> ComplexPoly:
    """Parse ``"a0,a1,...,an"`` (ascending); entries ``re`` or ``re+imi``."""
    if text is None or not text.strip():
        raise ParseError("empty polynomial")
    p = ComplexPoly([_parse_complex(t) for t in text.split(",")])
    return p


def parse_int_poly(text: str) -> IntPoly:
    if text is None or not text.strip():
        raise ParseError("empty polynomial")
    out = []
    for tok in text.split(","):
        t = tok.strip().replace("−", "-")
        try:
            out.append(int(t))
        except ValueError:
            raise ParseError(f"not an integer coefficient: {tok!r}") from None
    return IntPoly(tuple(out))


def _fmt_num(x: float) -> str:
    return repr(float(format(x, ".15g")))


def format_coeff(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        r = c.real
        return str(int(r)) if r.is_integer() and abs(r) < 2 ** 53 else _fmt_num(r)
    im = c.imag
    sign = "+" if im >= 0 else "-"
    return f"{format_coeff(c.real)}{sign}{format_coeff(abs(im))}i"


def format_poly(p) -> str:
    if isinstance(p, IntPoly):
        return ",".join(str(x) for x in p.coeffs)
    return ",".join(format_coeff(c) for c in as_poly(p).coeffs)
