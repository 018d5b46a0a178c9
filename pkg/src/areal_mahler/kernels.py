"""Hot numeric kernels, each in a numba flavour and a pure-numpy flavour.

The public names at the bottom (``aberth``, ``horner``, ...) dispatch to the
numba versions unless ``AREAL_MAHLER_NUMBA=0``. Both flavours are importable
directly (``*_numba`` / ``*_numpy``) for tests and ``benchmarks/``.

Coefficient arrays are always ascending, ``a[k]`` multiplies ``z**k``.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

EPS = np.finfo(float).eps
# backward-error stopping threshold, in units of machine epsilon
BACKWARD_FACTOR = 8.0
SIGMA = 0.7  # angular offset for starting points, breaks symmetry with real axes


# ---------------------------------------------------------------- starting points

@njit
def newton_polygon_guesses(a):
    """Starting points for simultaneous iteration from the Newton polygon of ``a``.

    Points ``(k, log|a_k|)`` are reduced to their upper convex hull; each hull
    edge ``i -> j`` puts ``j - i`` points on a circle of radius
    ``(|a_i|/|a_j|)**(1/(j-i))``. Requires ``a[0] != 0`` and ``a[-1] != 0``.
    """
    n = a.shape[0] - 1
    y = np.empty(n + 1)
    for k in range(n + 1):
        m = abs(a[k])
        y[k] = math.log(m) if m > 0.0 else -np.inf
    hull = np.empty(n + 1, dtype=np.int64)
    h = 0
    for k in range(n + 1):
        if y[k] == -np.inf:
            continue
        while h >= 2:
            i = hull[h - 2]
            j = hull[h - 1]
            # drop j when it lies on or under the chord i -> k
            if (y[j] - y[i]) * (k - i) <= (y[k] - y[i]) * (j - i):
                h -= 1
            else:
                break
        hull[h] = k
        h += 1
    z = np.empty(n, dtype=np.complex128)
    pos = 0
    for e in range(h - 1):
        i = hull[e]
        j = hull[e + 1]
        cnt = j - i
        u = math.exp((y[i] - y[j]) / cnt)
        for m in range(cnt):
            ang = 2.0 * math.pi * m / cnt + 2.0 * math.pi * i / n + SIGMA
            z[pos] = u * complex(math.cos(ang), math.sin(ang))
            pos += 1
    return z


# ---------------------------------------------------------------- newton ratio

@njit
def _newton_ratio(a, z, tol):
    # returns p(z)/p'(z) and whether |p(z)| is at rounding level;
    # outside the unit disk the reversed polynomial is used to avoid overflow
    n = a.shape[0] - 1
    if abs(z) <= 1.0:
        p = a[n]
        dp = 0j
        s = abs(a[n])
        az = abs(z)
        for k in range(n - 1, -1, -1):
            dp = dp * z + p
            p = p * z + a[k]
            s = s * az + abs(a[k])
        small = abs(p) <= tol * s
        if dp == 0:
            return 0j, small
        return p / dp, small
    w = 1.0 / z
    q = a[0]
    dq = 0j
    s = abs(a[0])
    aw = abs(w)
    for k in range(1, n + 1):
        dq = dq * w + q
        q = q * w + a[k]
        s = s * aw + abs(a[k])
    small = abs(q) <= tol * s
    den = n * q - w * dq
    if den == 0:
        return 0j, small
    return z * q / den, small


def _newton_ratio_vec(a, z, tol):
    n = a.shape[0] - 1
    z = np.asarray(z, dtype=np.complex128)
    ratio = np.zeros(z.shape, dtype=np.complex128)
    small = np.zeros(z.shape, dtype=bool)
    inner = np.abs(z) <= 1.0
    if inner.any():
        zi = z[inner]
        az = np.abs(zi)
        p = np.full(zi.shape, a[n], dtype=np.complex128)
        dp = np.zeros_like(p)
        s = np.full(zi.shape, abs(a[n]))
        for k in range(n - 1, -1, -1):
            dp = dp * zi + p
            p = p * zi + a[k]
            s = s * az + abs(a[k])
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(dp != 0, p / dp, 0)
        ratio[inner] = r
        small[inner] = np.abs(p) <= tol * s
    outer = ~inner
    if outer.any():
        zo = z[outer]
        w = 1.0 / zo
        aw = np.abs(w)
        q = np.full(zo.shape, a[0], dtype=np.complex128)
        dq = np.zeros_like(q)
        s = np.full(zo.shape, abs(a[0]))
        for k in range(1, n + 1):
            dq = dq * w + q
            q = q * w + a[k]
            s = s * aw + abs(a[k])
        den = n * q - w * dq
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(den != 0, zo * q / den, 0)
        ratio[outer] = r
        small[outer] = np.abs(q) <= tol * s
    return ratio, small


# ---------------------------------------------------------------- aberth

@njit
def aberth_numba(a, z0, maxiter):
    """Aberth-Ehrlich iteration (Gauss-Seidel sweep) from starting points ``z0``.

    Returns ``(roots, iterations, converged)``. A root is frozen once its
    backward error reaches rounding level or its correction drops below ``eps|z|``.
    """
    n = a.shape[0] - 1
    z = z0.copy()
    done = np.zeros(n, dtype=np.bool_)
    tol = BACKWARD_FACTOR * EPS
    it = 0
    ndone = 0
    while it < maxiter and ndone < n:
        it += 1
        for i in range(n):
            if done[i]:
                continue
            ratio, small = _newton_ratio(a, z[i], tol)
            if small:
                done[i] = True
                ndone += 1
                continue
            s = 0j
            for j in range(n):
                if j != i:
                    s += 1.0 / (z[i] - z[j])
            corr = ratio / (1.0 - ratio * s)
            z[i] -= corr
            if abs(corr) <= 2.0 * EPS * abs(z[i]):
                done[i] = True
                ndone += 1
    return z, it, ndone == n


def aberth_numpy(a, z0, maxiter):
    """Vectorized Jacobi variant of :func:`aberth_numba`; same contract."""
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0] - 1
    z = np.array(z0, dtype=np.complex128)
    done = np.zeros(n, dtype=bool)
    tol = BACKWARD_FACTOR * EPS
    it = 0
    while it < maxiter and not done.all():
        it += 1
        act = np.flatnonzero(~done)
        ratio, small = _newton_ratio_vec(a, z[act], tol)
        done[act[small]] = True
        act, ratio = act[~small], ratio[~small]
        if act.size == 0:
            break
        diff = z[act, None] - z[None, :]
        diff[np.arange(act.size), act] = np.inf
        s = (1.0 / diff).sum(axis=1)
        corr = ratio / (1.0 - ratio * s)
        z[act] -= corr
        done[act[np.abs(corr) <= 2.0 * EPS * np.abs(z[act])]] = True
    return z, it, bool(done.all())


# ---------------------------------------------------------------- batched aberth

@njit
def batch_aberth_numba(A, maxiter):
    """Roots of every row of ``A`` (same degree, nonzero first and last entries).

    Starting points sit on the circle of radius ``|a_0/a_n|**(1/n)``.
    Returns ``(roots, converged)``.
    """
    m, n1 = A.shape
    n = n1 - 1
    out = np.empty((m, n), dtype=np.complex128)
    ok = np.empty(m, dtype=np.bool_)
    z0 = np.empty(n, dtype=np.complex128)
    for r in range(m):
        rad = (abs(A[r, 0]) / abs(A[r, n])) ** (1.0 / n)
        for k in range(n):
            ang = 2.0 * math.pi * k / n + SIGMA
            z0[k] = rad * complex(math.cos(ang), math.sin(ang))
        z, _, conv = aberth_numba(A[r], z0, maxiter)
        out[r] = z
        ok[r] = conv
    return out, ok


def batch_aberth_numpy(A, maxiter):
    A = np.asarray(A, dtype=np.complex128)
    m, n1 = A.shape
    n = n1 - 1
    rad = (np.abs(A[:, 0]) / np.abs(A[:, n])) ** (1.0 / n)
    ang = 2.0 * np.pi * np.arange(n) / n + SIGMA
    z = rad[:, None] * np.exp(1j * ang)[None, :]
    done = np.zeros((m, n), dtype=bool)
    tol = BACKWARD_FACTOR * EPS
    eye = np.eye(n, dtype=bool)
    for _ in range(maxiter):
        if done.all():
            break
        # horner on every (row, root); rows whose roots lie outside use the reversed form
        az = np.abs(z)
        inner = az <= 1.0
        w = np.where(inner, z, 1.0 / np.where(z == 0, 1, z))
        aw = np.abs(w)
        p = np.where(inner, A[:, n:n + 1], A[:, 0:1]).astype(np.complex128)
        dp = np.zeros_like(p)
        s = np.abs(p)
        for k in range(1, n + 1):
            c = np.where(inner, A[:, n - k:n - k + 1], A[:, k:k + 1])
            dp = dp * w + p
            p = p * w + c
            s = s * aw + np.abs(c)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(inner, p / dp, z * p / (n * p - w * dp))
        ratio = np.where(np.isfinite(ratio), ratio, 0)
        small = np.abs(p) <= tol * s
        newly = small & ~done
        done |= newly
        diff = z[:, :, None] - z[:, None, :]
        diff[:, eye] = np.inf
        sm = (1.0 / diff).sum(axis=2)
        corr = ratio / (1.0 - ratio * sm)
        corr = np.where(done, 0, corr)
        z = z - corr
        done |= np.abs(corr) <= 2.0 * EPS * np.abs(z)
    return z, done.all(axis=1)


# ---------------------------------------------------------------- horner

@njit
def horner_numba(a, z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    n = a.shape[0] - 1
    for i in range(z.shape[0]):
        v = a[n]
        zi = z[i]
        for k in range(n - 1, -1, -1):
            v = v * zi + a[k]
        out[i] = v
    return out


def horner_numpy(a, z):
    a = np.asarray(a, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    v = np.full(z.shape, a[-1], dtype=np.complex128)
    for c in a[-2::-1]:
        v = v * z + c
    return v


# ---------------------------------------------------------------- pair energy

@njit
def pair_energy_numba(z, cutoff):
    """``sum_{j != k} min(log(1/|z_j - z_k|), cutoff)``."""
    n = z.shape[0]
    x = z.real.copy()
    y = z.imag.copy()
    tot = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            dx = x[j] - x[k]
            dy = y[j] - y[k]
            d2 = dx * dx + dy * dy
            v = cutoff if d2 == 0.0 else -0.5 * math.log(d2)
            if v > cutoff:
                v = cutoff
            tot += v
    return 2.0 * tot


def pair_energy_numpy(z, cutoff):
    z = np.asarray(z, dtype=np.complex128)
    n = z.shape[0]
    if n < 2:
        return 0.0
    j, k = np.triu_indices(n, 1)
    d = np.abs(z[j] - z[k])
    with np.errstate(divide="ignore"):
        v = -np.log(d)
    return float(2.0 * np.minimum(v, cutoff).sum())


# ---------------------------------------------------------------- multivariate eval

@njit
def mv_eval_numba(exps, coefs, pts):
    """Evaluate ``sum_t coefs[t] * prod_i pts[:, i]**exps[t, i]`` at each row of ``pts``."""
    npts, d = pts.shape
    nt = exps.shape[0]
    top = 0
    for t in range(nt):
        for i in range(d):
            if exps[t, i] > top:
                top = exps[t, i]
    # powers by repeated multiplication; complex ** int would go through exp/log
    pw = np.empty((d, top + 1), dtype=np.complex128)
    out = np.zeros(npts, dtype=np.complex128)
    for q in range(npts):
        for i in range(d):
            pw[i, 0] = 1.0
            for e in range(1, top + 1):
                pw[i, e] = pw[i, e - 1] * pts[q, i]
        acc = 0j
        for t in range(nt):
            term = coefs[t]
            for i in range(d):
                term *= pw[i, exps[t, i]]
            acc += term
        out[q] = acc
    return out


def mv_eval_numpy(exps, coefs, pts):
    pts = np.asarray(pts, dtype=np.complex128)
    out = np.zeros(pts.shape[0], dtype=np.complex128)
    for t in range(exps.shape[0]):
        term = np.full(pts.shape[0], coefs[t], dtype=np.complex128)
        for i in range(pts.shape[1]):
            if exps[t, i]:
                term *= pts[:, i] ** int(exps[t, i])
        out += term
    return out


# ---------------------------------------------------------------- dispatch

IMPLEMENTATIONS = {
    "aberth": (aberth_numba, aberth_numpy),
    "batch_aberth": (batch_aberth_numba, batch_aberth_numpy),
    "horner": (horner_numba, horner_numpy),
    "pair_energy": (pair_energy_numba, pair_energy_numpy),
    "mv_eval": (mv_eval_numba, mv_eval_numpy),
}

_pick = 0 if USE_NUMBA else 1
aberth = IMPLEMENTATIONS["aberth"][_pick]
batch_aberth = IMPLEMENTATIONS["batch_aberth"][_pick]
horner = IMPLEMENTATIONS["horner"][_pick]
pair_energy = IMPLEMENTATIONS["pair_energy"][_pick]
mv_eval = IMPLEMENTATIONS["mv_eval"][_pick]
if USE_NUMBA:
    starting_points = newton_polygon_guesses
else:
    starting_points = getattr(newton_polygon_guesses, "py_func", newton_polygon_guesses)
