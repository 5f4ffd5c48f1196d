"""Sinkhorn inner loops: numba-jitted kernels with a vectorized numpy fallback.

The scaling iteration runs up to a few hundred passes over small dense
matrices (N <= ~90, M <= ~20) and is called once per (item, class) pair, so
interpreter overhead dominates a pure-numpy implementation. The numba kernels
remove it; the numpy twins keep the package fully functional without a JIT.

Engine selection, checked at call time:

    OTALIGN_ENGINE=numba   force the jitted kernels (error if numba missing)
    OTALIGN_ENGINE=numpy   force the vectorized fallback
    unset / auto           numba when importable, else numpy

Both engines implement identical semantics and are compared by
``benchmarks/bench_sinkhorn.py`` and the test suite. Kernels assume strictly
positive marginals; zero-mass rows/columns are stripped by the caller.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    numba = None
    HAS_NUMBA = False

ENGINE_ENV = "OTALIGN_ENGINE"


def active_engine() -> str:
    """Resolve the configured engine name ("numba" or "numpy")."""
    choice = os.environ.get(ENGINE_ENV, "auto").strip().lower()
    if choice in ("", "auto"):
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numba":
        if not HAS_NUMBA:
            raise RuntimeError(f"{ENGINE_ENV}=numba but numba is not importable")
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise ValueError(f"unrecognized {ENGINE_ENV}={choice!r} (use numba, numpy, or auto)")


# ---------------------------------------------------------------------------
# numpy engine
# ---------------------------------------------------------------------------


def scaling_numpy(K, r, c, tol, max_iters):
    """Alternating Sinkhorn scaling on the kernel K = exp(-C/lambda).

    Returns (u, v, iterations, converged, finite). ``finite`` False signals
    that a scaling factor left the representable range and the caller should
    retry in the log domain.
    """
    n = r.shape[0]
    m = c.shape[0]
    u = np.ones(n)
    v = np.ones(m)
    it = 0
    converged = False
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        while it < max_iters:
            it += 1
            u = r / (K @ v)
            Ku = K.T @ u
            v = c / Ku
            if not (np.isfinite(u).all() and np.isfinite(v).all()):
                return u, v, it, False, False
            row_err = np.abs(u * (K @ v) - r).sum()
            col_err = np.abs(v * Ku - c).sum()
            if max(row_err, col_err) < tol:
                converged = True
                break
    return u, v, it, converged, True


def log_numpy(C, r, c, lam, tol, max_iters):
    """Log-domain Sinkhorn on potentials f, g with T = exp((f+g-C)/lambda).

    Returns (f, g, iterations, converged, finite).
    """
    n = r.shape[0]
    m = c.shape[0]
    f = np.zeros(n)
    g = np.zeros(m)
    log_r = np.log(r)
    log_c = np.log(c)
    it = 0
    converged = False
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        Cl = C / lam
        if not np.isfinite(Cl).all():
            return f, g, it, False, False
        while it < max_iters:
            it += 1
            A = g[None, :] / lam - Cl
            mx = A.max(axis=1)
            f = lam * (log_r - mx - np.log(np.exp(A - mx[:, None]).sum(axis=1)))
            B = f[:, None] / lam - Cl
            mxb = B.max(axis=0)
            g = lam * (log_c - mxb - np.log(np.exp(B - mxb[None, :]).sum(axis=0)))
            if not (np.isfinite(f).all() and np.isfinite(g).all()):
                return f, g, it, False, False
            P = np.exp(f[:, None] / lam + g[None, :] / lam - Cl)
            row_err = np.abs(P.sum(axis=1) - r).sum()
            col_err = np.abs(P.sum(axis=0) - c).sum()
            err = max(row_err, col_err)
            if not np.isfinite(err):
                return f, g, it, False, False
            if err < tol:
                converged = True
                break
    return f, g, it, converged, True


# ---------------------------------------------------------------------------
# numba engine (same contracts, explicit loops)
# ---------------------------------------------------------------------------


def _scaling_loops(K, r, c, tol, max_iters):
    n = r.shape[0]
    m = c.shape[0]
    u = np.ones(n)
    v = np.ones(m)
    Kv = np.empty(n)
    Ku = np.empty(m)
    it = 0
    converged = False
    while it < max_iters:
        it += 1
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += K[i, j] * v[j]
            Kv[i] = s
            u[i] = r[i] / s
        for j in range(m):
            s = 0.0
            for i in range(n):
                s += K[i, j] * u[i]
            Ku[j] = s
            v[j] = c[j] / s
        ok = True
        for i in range(n):
            if not np.isfinite(u[i]):
                ok = False
                break
        if ok:
            for j in range(m):
                if not np.isfinite(v[j]):
                    ok = False
                    break
        if not ok:
            return u, v, it, False, False
        row_err = 0.0
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += K[i, j] * v[j]
            row_err += abs(u[i] * s - r[i])
        col_err = 0.0
        for j in range(m):
            col_err += abs(v[j] * Ku[j] - c[j])
        err = row_err if row_err > col_err else col_err
        if err < tol:
            converged = True
            break
    return u, v, it, converged, True


def _log_loops(C, r, c, lam, tol, max_iters):
    n = r.shape[0]
    m = c.shape[0]
    f = np.zeros(n)
    g = np.zeros(m)
    it = 0
    converged = False
    for i in range(n):
        for j in range(m):
            if not np.isfinite(C[i, j] / lam):
                return f, g, it, False, False
    while it < max_iters:
        it += 1
        for i in range(n):
            mx = -np.inf
            for j in range(m):
                a = (g[j] - C[i, j]) / lam
                if a > mx:
                    mx = a
            s = 0.0
            for j in range(m):
                s += np.exp((g[j] - C[i, j]) / lam - mx)
            f[i] = lam * (np.log(r[i]) - mx - np.log(s))
        for j in range(m):
            mx = -np.inf
            for i in range(n):
                a = (f[i] - C[i, j]) / lam
                if a > mx:
                    mx = a
            s = 0.0
            for i in range(n):
                s += np.exp((f[i] - C[i, j]) / lam - mx)
            g[j] = lam * (np.log(c[j]) - mx - np.log(s))
        ok = True
        for i in range(n):
            if not np.isfinite(f[i]):
                ok = False
                break
        if ok:
            for j in range(m):
                if not np.isfinite(g[j]):
                    ok = False
                    break
        if not ok:
            return f, g, it, False, False
        row_err = 0.0
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += np.exp((f[i] + g[j] - C[i, j]) / lam)
            row_err += abs(s - r[i])
        col_err = 0.0
        for j in range(m):
            s = 0.0
            for i in range(n):
                s += np.exp((f[i] + g[j] - C[i, j]) / lam)
            col_err += abs(s - c[j])
        err = row_err if row_err > col_err else col_err
        if not np.isfinite(err):
            return f, g, it, False, False
        if err < tol:
            converged = True
            break
    return f, g, it, converged, True


if HAS_NUMBA:
    scaling_numba = numba.njit(cache=True, error_model="numpy")(_scaling_loops)
    log_numba = numba.njit(cache=True, error_model="numpy")(_log_loops)
else:  # pragma: no cover
    scaling_numba = None
    log_numba = None


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def sinkhorn_scaling(K, r, c, tol, max_iters):
    if active_engine() == "numba":
        return scaling_numba(K, r, c, tol, max_iters)
    return scaling_numpy(K, r, c, tol, max_iters)


def sinkhorn_log(C, r, c, lam, tol, max_iters):
    if active_engine() == "numba":
        return log_numba(C, r, c, lam, tol, max_iters)
    return log_numpy(C, r, c, lam, tol, max_iters)


def warmup() -> None:
    """Trigger JIT compilation of the hot kernels (no-op on the numpy engine)."""
    if active_engine() != "numba":
        return
    K = np.array([[1.0, 0.5], [0.5, 1.0]])
    C = np.array([[0.0, 1.0], [1.0, 0.0]])
    half = np.array([0.5, 0.5])
    scaling_numba(K, half, half, 1e-9, 10)
    log_numba(C, half, half, 0.1, 1e-9, 10)
