"""Integer polynomials: Kronecker-type classification, minimal-measure search, closed-form families."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, DomainError
from .measures import log_areal_measure, log_mahler_measure
from .poly import IntPoly, RootSet, find_roots, int_divmod, resultant

INTERIOR_TOL = 1e-8
DEFAULT_BUDGET = 10 ** 8

CYCLOTOMIC = "cyclotomic"
NO_ROOTS_IN_DISK = "no-roots-in-disk"
INTERIOR_ROOTS = "has-interior-roots"


# ---------------------------------------------------------------- cyclotomic polynomials

@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Coefficients of the m-th cyclotomic polynomial, by exact division of ``z^m - 1``."""
    if m < 1:
        raise DomainError("m >= 1")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, rem = int_divmod(num, cyclotomic_poly(d))
            assert not rem
    return tuple(num)


@lru_cache(maxsize=None)
def _totient(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


@lru_cache(maxsize=None)
def _indices_up_to(n: int) -> tuple:
    # every m with phi(m) <= n; phi(m) >= sqrt(m/2) so m <= 2 n^2 suffices
    return tuple(m for m in range(1, 2 * n * n + 1) if _totient(m) <= n)


def is_cyclotomic(p) -> bool:
    """True iff ``p`` is monic and a product of cyclotomic polynomials.

    Exact test in Z[z]: ``p`` must be (anti)palindromic, then cyclotomic
    factors ``Phi_m`` with ``phi(m) <= deg`` are divided out, repeats allowed.
    Any index that can occur satisfies ``m <= 2 n^2`` because ``phi(m) >= sqrt(m/2)``.
    For squarefree ``p`` this is the same as ``p | z^m - 1`` for some such ``m``.
    """
    if not isinstance(p, IntPoly):
        p = IntPoly(tuple(p))
    c = list(p.coeffs)
    if not c or c[0] == 0 or c[-1] != 1:
        return False
    if len(c) == 1:
        return True
    rev = c[::-1]
    if rev != c and rev != [-x for x in c]:
        return False
    for m in _indices_up_to(len(c) - 1):
        phi = cyclotomic_poly(m)
        while len(c) >= len(phi):
            res = int_divmod(c, phi)
            if res is None or res[1]:
                break
            c = res[0]
        if len(c) == 1:
            return c[0] == 1
    return len(c) == 1 and c[0] == 1


# ---------------------------------------------------------------- measures of integer input

def squarefree_parts(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Exact squarefree decomposition ``p = c * prod f_i^i`` as ``[(f_i, i), ...]``; ``c`` is dropped."""
    import sympy

    z = sympy.Symbol("z")
    _, parts = sympy.Poly(list(reversed(p.coeffs)), z).sqf_list()
    return [(IntPoly(tuple(int(x) for x in reversed(f.all_coeffs()))), k) for f, k in parts]


def integral_coefficients(p) -> Optional[IntPoly]:
    """The IntPoly equal to ``p`` when every coefficient is an exactly representable integer."""
    c = np.asarray(p.coeffs if hasattr(p, "coeffs") else p)
    if isinstance(p, IntPoly):
        return p
    c = c.astype(np.complex128)
    if c.size == 0 or np.any(c.imag != 0) or np.any(np.abs(c.real) >= 2.0 ** 53):
        return None
    re = c.real
    if np.any(re != np.round(re)):
        return None
    return IntPoly(tuple(int(x) for x in re))


def int_roots(p: IntPoly) -> RootSet:
    """Roots of an integer polynomial with exact multiplicities.

    Repeated roots are only accurate to about ``eps**(1/multiplicity)`` in double
    precision, so when ``Res(p, p') = 0`` each root comes from the exact
    squarefree factor that carries it and is repeated accordingly.
    """
    if p.degree == 1 or resultant(p, p.derivative()) != 0:
        return find_roots(p.to_complex())
    roots, origin = [], 0
    for f, k in squarefree_parts(p):
        if f.degree < 1:
            continue
        r = find_roots(f.to_complex())
        origin += k * r.origin
        roots.extend(list(r.roots) * k)
    z = np.array(roots, dtype=np.complex128)
    res = np.abs(np.polyval(np.array(p.coeffs[::-1], dtype=np.complex128), z))
    return RootSet(leading=complex(p.leading), roots=z, residuals=res, origin=origin)


def int_log_measures(p) -> tuple[float, float]:
    """``(log M, log ||p||_0)`` for an integer polynomial, robust to repeated roots."""
    if not isinstance(p, IntPoly):
        p = IntPoly(tuple(p))
    if p.is_zero():
        raise DomainError("zero polynomial")
    if p.degree == 0:
        v = math.log(abs(p.coeffs[0]))
        return v, v
    r = int_roots(p)
    return log_mahler_measure(r), log_areal_measure(r)


# ---------------------------------------------------------------- classification

@dataclass(frozen=True)
class Classification:
    kind: str
    areal_is_one: bool
    mahler_is_one: bool
    witness: Optional[complex] = None
    mahler: float = math.nan
    areal: float = math.nan


def classify(p) -> Classification:
    """Sort an integer polynomial with ``a_0 != 0`` into the three cases of the Kronecker analog.

    The exact cyclotomic test runs first, so a cyclotomic input is never
    misread because double-precision noise pushed a (multiple) root inside.
    Otherwise a root with ``|z| < 1 - 1e-8`` is a witness that the areal
    measure exceeds ``|a_0| >= 1``; with no such root the areal measure equals
    ``|a_0|``.
    """
    if not isinstance(p, IntPoly):
        p = IntPoly(tuple(p))
    if p.is_zero() or p.coeffs[0] == 0:
        raise DomainError("classify needs a_0 != 0")
    a0 = abs(p.coeffs[0])
    if p.degree == 0:
        return Classification(NO_ROOTS_IN_DISK, a0 == 1, a0 == 1, None, float(a0), float(a0))
    if is_cyclotomic(p):
        return Classification(CYCLOTOMIC, True, True, None, 1.0, 1.0)
    r = int_roots(p)
    lm, la = log_mahler_measure(r), log_areal_measure(r)
    mod = np.abs(r.roots)
    inner = np.flatnonzero(mod < 1.0 - INTERIOR_TOL)
    if inner.size:
        w = complex(r.roots[inner[np.argmin(mod[inner])]])
        # mahler_is_one is impossible here: M = |a_0| / prod_{|z|<1}|z| > 1
        return Classification(INTERIOR_ROOTS, False, False, w, math.exp(lm), math.exp(la))
    return Classification(NO_ROOTS_IN_DISK, a0 == 1, a0 == 1 and abs(p.leading) == 1 and
                          bool(np.all(mod <= 1.0 + INTERIOR_TOL)), None, math.exp(lm), math.exp(la))


# ---------------------------------------------------------------- search

@dataclass(frozen=True)
class SearchRecord:
    poly: IntPoly
    mahler: float
    areal: float
    is_cyclotomic: bool

    @property
    def degree(self) -> int:
        return self.poly.degree


def _canonical(c: tuple) -> bool:
    # representative of {p, -p, p(-z), -p(-z)}: positive leading coefficient,
    # then lexicographically smallest
    alt = tuple(x if k % 2 == 0 else -x for k, x in enumerate(c))
    cands = [v for v in (c, tuple(-x for x in c), alt, tuple(-x for x in alt)) if v[-1] > 0]
    return c == min(cands)


def search_space_size(max_degree: int, height: int) -> int:
    h2 = 2 * height
    return sum(h2 * h2 * (h2 + 1) ** (d - 1) for d in range(1, max_degree + 1))


def _block(degree: int, lead: int, height: int) -> list:
    out = []
    vals = range(-height, height + 1)
    ends = [v for v in vals if v != 0]
    for a0 in ends:
        for mid in itertools.product(vals, repeat=degree - 1):
            c = (a0, *mid, lead)
            if not _canonical(c):
                continue
            lm, la = int_log_measures(IntPoly(c))
            out.append(SearchRecord(IntPoly(c), math.exp(lm), math.exp(la), is_cyclotomic(c)))
    return out


def lehmer_search(max_degree: int, height: int, budget: int = DEFAULT_BUDGET,
                  workers: int = 1) -> list[SearchRecord]:
    """Every integer polynomial with ``a_0 != 0``, ``|a_k| <= height``, ``1 <= deg <= max_degree``.

    One representative is kept per class ``{p, -p, p(-z), -p(-z)}``; these maps
    preserve both measures. Records come back sorted by areal measure, then Mahler's.
    Blocks of fixed (degree, leading coefficient) are independent and may run
    in a process pool.
    """
    if max_degree > 12 or height > 2:
        raise DomainError("desk-scale search only: max_degree <= 12, height <= 2")
    size = search_space_size(max_degree, height)
    if size > budget:
        raise BudgetExceeded(f"{size} polynomials exceed the budget {budget}; narrow the bounds")
    blocks = [(d, lead, height) for d in range(1, max_degree + 1) for lead in range(1, height + 1)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_block_star, blocks))
    else:
        parts = [_block(*b) for b in blocks]
    recs = [r for part in parts for r in part]
    recs.sort(key=lambda r: (r.areal, r.mahler, r.degree, r.poly.coeffs))
    return recs


def _block_star(args):
    return _block(*args)


def minimal_noncyclotomic(records, k: int = 10, key: str = "areal") -> list[SearchRecord]:
    rs = [r for r in records if not r.is_cyclotomic]
    rs.sort(key=lambda r: (getattr(r, key), r.degree, r.poly.coeffs))
    return rs[:k]


# ---------------------------------------------------------------- families

NZN = "nzn_minus_1"
RECIPROCAL = "reciprocal"
FAMILY_ALIASES = {"nzn": NZN, NZN: NZN, "recip": RECIPROCAL, RECIPROCAL: RECIPROCAL}


def family_poly(family: str, n: int) -> IntPoly:
    """``n z^n - 1`` or ``z^{2n} + n z^n + 1``."""
    family = FAMILY_ALIASES.get(family, family)
    if family == NZN:
        return IntPoly((-1,) + (0,) * (n - 1) + (n,))
    if family == RECIPROCAL:
        return IntPoly((1,) + (0,) * (n - 1) + (n,) + (0,) * (n - 1) + (1,))
    raise DomainError(f"unknown family {family!r}")


@dataclass(frozen=True)
class FamilyValues:
    family: str
    n: int
    mahler: float
    areal: float
    log_mahler: float
    log_areal: float


def family_values(family: str, n: int) -> FamilyValues:
    """Closed-form measures of the two example families (no root finding).

    ``n z^n - 1``: M = n and areal = n exp(n (n^{-2/n} - 1)/2).
    ``z^{2n} + n z^n + 1``: M = (n + sqrt(n^2-4))/2 and
    areal = M exp(n/2 (((n - sqrt(n^2-4))/2)^{2/n} - 1)).
    """
    family = FAMILY_ALIASES.get(family, family)
    if n < 2:
        raise DomainError("n >= 2")
    if family == NZN:
        lm = math.log(n)
        la = lm + 0.5 * n * math.expm1(-2.0 * math.log(n) / n)
    elif family == RECIPROCAL:
        s = math.sqrt(n * n - 4.0)
        lm = math.log((n + s) / 2.0)
        # (n - s)/2 = 2/(n + s) avoids cancellation
        small = 2.0 / (n + s)
        la = lm + 0.5 * n * math.expm1(2.0 * math.log(small) / n)
    else:
        raise DomainError(f"unknown family {family!r}")
    return FamilyValues(family, n, math.exp(lm), math.exp(la), lm, la)


def family_values_by_roots(family: str, n: int) -> FamilyValues:
    family = FAMILY_ALIASES.get(family, family)
    r = find_roots(family_poly(family, n).to_complex())
    lm, la = log_mahler_measure(r), log_areal_measure(r)
    return FamilyValues(family, n, math.exp(lm), math.exp(la), lm, la)
