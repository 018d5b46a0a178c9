"""Reproduction suite: each check returns observed vs expected values and a verdict."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import arithmetic, composition, measures, zeros
from .multivariate import MultiPoly, mv_areal_mc, mv_areal_quadrature, mv_bounds_check
from .poly import ComplexPoly, IntPoly, discriminant, find_roots
from .quadrature import QuadratureConfig, radial_rule

LEHMER = (1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1)
LEHMER_M = 1.1762808
SEED = 20240601


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    observed: str
    expected: str
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:>2} {self.name:<28} observed {self.observed} | expected {self.expected} ({self.seconds:.2f}s)"


def _timed(fn: Callable[[], Result], limit: float) -> Result:
    t0 = time.perf_counter()
    res = fn()
    res.seconds = time.perf_counter() - t0
    if res.seconds > limit:
        res.passed = False
        res.observed += f" [over time limit {limit:.0f}s]"
    return res


# ---------------------------------------------------------------- 1

def lehmer_value() -> Result:
    find_roots([1.0, 2.0, 1.0, 1.0])  # compile the kernels outside the timed region

    def run():
        rep = measures.measure_report(IntPoly(LEHMER).to_complex())
        ok = abs(rep.mahler - LEHMER_M) <= 1e-6
        return Result(1, "Lehmer value", ok, f"M(L) = {rep.mahler:.10f}", f"{LEHMER_M} +- 1e-6")

    return _timed(run, 1.0)


# ---------------------------------------------------------------- 2

def _off_grid(roots, cfg: QuadratureConfig, gap: float) -> bool:
    # every root modulus keeps ``gap`` away from the radial nodes and from the unit circle
    r, _ = radial_rule(cfg.radial_nodes, cfg.radial_panels)
    mod = np.abs(roots)
    marks = np.concatenate([r, [1.0]])
    return bool(np.all(np.abs(mod[:, None] - marks[None, :]).min(axis=1) >= gap))


def random_off_grid_polys(count: int, rng: np.random.Generator, cfg: QuadratureConfig,
                          max_degree: int = 10, gap: float = 1e-2):
    out, tries = [], 0
    while len(out) < count:
        tries += 1
        n = int(rng.integers(1, max_degree + 1))
        c = rng.uniform(-1, 1, n + 1) + 1j * rng.uniform(-1, 1, n + 1)
        if abs(c[-1]) < 1e-3:
            continue
        p = ComplexPoly(c)
        r = find_roots(p)
        if _off_grid(r.roots, cfg, gap):
            out.append((p, r))
    return out, tries


def oracle_agreement(count: int = 200, seed: int = SEED) -> Result:
    cfg = QuadratureConfig(angular_nodes=512, radial_nodes=64)

    def run():
        rng = np.random.default_rng(seed)
        polys, tries = random_off_grid_polys(count, rng, cfg)
        worst = 0.0
        for p, r in polys:
            a = measures.areal_measure(r)
            worst = max(worst, abs(a - measures.areal_oracle(p, cfg)) / a)
        return Result(2, "closed form vs oracle", worst <= 1e-4, f"max rel err {worst:.2e} ({tries} drawn)",
                      "<= 1e-4", details={"max_rel_error": worst, "drawn": tries})

    return _timed(run, 30.0)


# ---------------------------------------------------------------- 3

def family_limit() -> Result:
    def run():
        ok = True
        parts = []
        for n in (10, 100, 1000):
            closed = arithmetic.family_values(arithmetic.NZN, n)
            roots = arithmetic.family_values_by_roots(arithmetic.NZN, n)
            diff = max(abs(closed.log_areal - roots.log_areal), abs(closed.log_mahler - roots.log_mahler))
            bound = 5 * math.log(n) ** 2 / n
            ok &= diff <= 1e-8 and abs(closed.log_areal) <= bound
            parts.append(f"n={n}: diff {diff:.1e}, |log a| {abs(closed.log_areal):.3g}<={bound:.3g}")
        return Result(3, "n z^n - 1 family", ok, "; ".join(parts), "diff <= 1e-8, |log a| <= 5 log^2 n/n")

    return _timed(run, 10.0)


# ---------------------------------------------------------------- 4

def bivariate_exact(seed: int = SEED) -> Result:
    def run():
        p = MultiPoly({(1, 0): 1, (0, 1): 1}, 2)
        exact = math.exp(-0.25)
        q = mv_areal_quadrature(p)
        mc = mv_areal_mc(p, 10 ** 6, seed)
        ok = abs(q - exact) <= 1e-3 and abs(mc.value - exact) <= 3 * mc.std_error
        return Result(4, "||z1 + z2||_0", ok,
                      f"quad {q:.6f}, MC {mc.value:.5f} +- {mc.std_error:.1e}", f"{exact:.6f}")

    return _timed(run, 20.0)


# ---------------------------------------------------------------- 5

def _cnormal(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def _rand_poly(rng, max_degree=8) -> ComplexPoly:
    n = int(rng.integers(1, max_degree + 1))
    return ComplexPoly(_cnormal(rng, n + 1))


def _rand_mv(rng, total=3) -> MultiPoly:
    n = int(rng.integers(1, total + 1))
    return MultiPoly({(a, b): complex(*rng.standard_normal(2))
                      for a in range(n + 1) for b in range(n + 1 - a)}, 2)


def _tightest(checks):
    return min(checks, key=lambda c: c.relative_slack)


class _Slack:
    def __init__(self):
        self.min = math.inf
        self.fails = 0
        self.count = 0

    def add(self, chk):
        self.count += 1
        self.min = min(self.min, chk.relative_slack)
        self.fails += not chk.holds


def inequality_suites(instances: int = 10_000, seed: int = SEED, mv_instances: int | None = None) -> Result:
    from .composition import InequalityCheck
    mv_cfg = QuadratureConfig(angular_nodes=64, radial_nodes=16)
    mv_n = instances if mv_instances is None else mv_instances

    def run():
        rng = np.random.default_rng(seed)
        s = {k: _Slack() for k in ("1.1", "1.2", "1.5", "3.2", "3.3", "3.4", "3.5", "3.6", "5.2")}
        for _ in range(instances):
            p = _rand_poly(rng)
            n = p.degree
            rep = measures.measure_report(p)
            upper = InequalityCheck(rep.areal, rep.mahler)
            lower = InequalityCheck(math.exp(-n / 2) * rep.mahler, rep.areal)
            s["1.1"].add(upper)
            s["1.2"].add(InequalityCheck(abs(p.coeffs[0]), rep.areal))
            s["1.5"].add(_tightest([upper, lower]))
            d = composition.derivative_bounds(p)
            s["3.4"].add(d.z_derivative)
            s["3.5"].add(d.derivative)
            s["3.6"].add(_tightest([c.areal for c in composition.coefficient_bounds(p)]))
            lam = composition.SzegoMultiplier(ComplexPoly(_cnormal(rng, n + 1)), n)
            s["3.2"].add(composition.check_debruijn_springer(lam, p, n))
            s["3.3"].add(composition.check_areal_composition(lam, p, n))
        for _ in range(mv_n):
            chk = mv_bounds_check(_rand_mv(rng), cfg=mv_cfg, circle_nodes=256)
            s["5.2"].add(_tightest([chk.upper, chk.lower]))
        ok = all(v.fails == 0 for v in s.values())
        obs = ", ".join(f"({k}) {v.min:+.1e}" for k, v in s.items())
        return Result(5, "inequality suites", ok, "min rel slack " + obs,
                      ">= -1e-9 (5.2: >= -1e-3), no failures",
                      details={k: {"min_relative_slack": v.min, "fails": v.fails, "count": v.count}
                               for k, v in s.items()})

    return _timed(run, 120.0)


# ---------------------------------------------------------------- 6

def kronecker_biconditional() -> Result:
    def run():
        recs = arithmetic.lehmer_search(8, 1)
        bad = [r for r in recs if (abs(r.areal - 1.0) <= 1e-9) != r.is_cyclotomic]
        ncyc = sum(r.is_cyclotomic for r in recs)
        gap = min(r.areal for r in recs if not r.is_cyclotomic)
        return Result(6, "Kronecker biconditional", not bad,
                      f"{len(recs)} classes, {ncyc} cyclotomic, {len(bad)} violations, min non-cyclotomic {gap:.6f}",
                      "0 violations", details={"violations": [r.poly.coeffs for r in bad]})

    return _timed(run, 300.0)


# ---------------------------------------------------------------- 7

def sine_product() -> Result:
    def run():
        worst = 0.0
        for n in range(2, 41):
            a, b = composition.antiderivative_multiplier_mahler(n)
            worst = max(worst, abs(a - b) / max(1.0, b))
        return Result(7, "sine product M(Lambda_{n-1})", worst <= 1e-8, f"max rel diff {worst:.1e}", "<= 1e-8")

    return _timed(run, 120.0)


# ---------------------------------------------------------------- 8

def random_squarefree_int_polys(count: int, rng: np.random.Generator, height: int = 5, max_degree: int = 8):
    out = []
    while len(out) < count:
        n = int(rng.integers(2, max_degree + 1))
        c = [int(x) for x in rng.integers(-height, height + 1, n + 1)]
        if c[-1] == 0 or discriminant(c) == 0:
            continue
        out.append(IntPoly(tuple(c)))
    return out


def equidistribution(seed: int = SEED) -> Result:
    def run():
        ok = True
        parts = []
        for n in (16, 64, 256):
            r = find_roots(arithmetic.family_poly(arithmetic.NZN, n).to_complex())
            disc = zeros.angular_discrepancy(r.roots)
            moderr = float(np.abs(np.abs(r.roots) - n ** (-1.0 / n)).max())
            ok &= disc <= 2.0 / n and moderr <= 1e-8
            parts.append(f"n={n}: D {disc:.4f}, mod err {moderr:.0e}")
        rng = np.random.default_rng(seed)
        ident = [zeros.discriminant_energy_bound(p) for p in random_squarefree_int_polys(100, rng)]
        n_ok = sum(e.identity_ok and e.disc_at_least_one for e in ident)
        ok &= n_ok == len(ident)
        parts.append(f"disc identity {n_ok}/{len(ident)}")
        return Result(8, "equidistribution", ok, "; ".join(parts), "D <= 2/n, mod err <= 1e-8, 100/100")

    return _timed(run, 60.0)


# ---------------------------------------------------------------- 9

def approximation_dichotomy() -> Result:
    from .approximation import hardy_gap, integer_approx_table, ones

    def run():
        f = ones()
        Ns = [4, 8, 16, 32, 64, 128]
        rows = integer_approx_table(f, 1.5, Ns)
        berg = [r.bergman_distance for r in rows]
        dec = all(b < a for a, b in zip(berg[:-1], berg[1:]))
        gaps = [r.hardy_gap for r in rows[1:]]
        gaps += hardy_gap([f.truncate(k) for k in range(Ns[-1] + 1)], 1.5)
        g_min = min(gaps)
        ok = dec and g_min >= 1 - 1e-6
        return Result(9, "approximation dichotomy", ok,
                      "bergman " + " > ".join(f"{b:.4f}" for b in berg) + f"; min hardy gap {g_min:.6f}",
                      "strictly decreasing; gaps >= 1 - 1e-6")

    return _timed(run, 30.0)


CHECKS = [lehmer_value, oracle_agreement, family_limit, bivariate_exact, inequality_suites,
          kronecker_biconditional, sine_product, equidistribution, approximation_dichotomy]


def run_all(quiet: bool = False, printer=print) -> list[Result]:
    out = []
    for chk in CHECKS:
        res = chk()
        out.append(res)
        if not quiet:
            printer(res.line())
    passed = all(r.passed for r in out)
    out.append(Result(10, "verify aggregate", passed, f"{sum(r.passed for r in out)}/{len(out)} passed", "9/9"))
    if not quiet:
        printer(out[-1].line())
    return out
