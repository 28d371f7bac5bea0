"""numba versions of the barrier integrals.

Each integral runs its own adaptive G7/K15 loop over growable interval
arrays; the dwell integrand nests a second adaptive loop for the phase
integral of kappa.  ``mode`` is 0 for the linearized profile and 1 for the
full square-root profile (see ``tunnelkit.kernels.LINEARIZED``/``FULL``).
"""

import math

import numpy as np
from numba import njit

from ..quadrature import GK_GAUSS, GK_KRONROD, GK_NODES

_NODES = np.ascontiguousarray(GK_NODES)
_WK = np.ascontiguousarray(GK_KRONROD)
_WG = np.ascontiguousarray(GK_GAUSS)

INV_KAPPA = 1
DWELL = 2


@njit(cache=True)
def _grow(lo, hi, val, err, n):
    size = 2 * lo.size
    out = (np.empty(size), np.empty(size), np.empty(size), np.empty(size))
    out[0][:n] = lo[:n]
    out[1][:n] = hi[:n]
    out[2][:n] = val[:n]
    out[3][:n] = err[:n]
    return out


@njit(cache=True)
def kappa_at(mode, k0, g, x):
    if mode == 0:
        return k0 + g * x
    return math.sqrt(k0 * k0 + 2.0 * k0 * g * x)


@njit(cache=True)
def _kappa_rule(mode, k0, g, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    k = 0.0
    gs = 0.0
    for i in range(15):
        y = kappa_at(mode, k0, g, mid + half * _NODES[i])
        k += _WK[i] * y
        gs += _WG[i] * y
    return half * k, abs(half * (k - gs))


@njit(cache=True)
def phase(mode, k0, g, x, rel_tol, max_evals):
    """Adaptive integral of kappa over [0, x]: (value, abs_error, evaluations, converged)."""
    if x <= 0.0:
        return 0.0, 0.0, 0, True
    # interval arrays start small and double on demand; max_evals bounds the count
    cap = max(max_evals // 30 + 2, 4)
    start = min(cap, 64)
    lo = np.empty(start)
    hi = np.empty(start)
    val = np.empty(start)
    err = np.empty(start)
    v, e = _kappa_rule(mode, k0, g, 0.0, x)
    evals = 15
    lo[0] = 0.0
    hi[0] = x
    val[0] = v
    err[0] = e
    n = 1
    total = v
    total_err = e
    while total_err > rel_tol * abs(total):
        if evals + 30 > max_evals or n + 1 > cap:
            return total, total_err, evals, False
        if n + 1 > lo.size:
            lo, hi, val, err = _grow(lo, hi, val, err, n)
        j = 0
        for i in range(1, n):
            if err[i] > err[j]:
                j = i
        a0 = lo[j]
        b0 = hi[j]
        m = 0.5 * (a0 + b0)
        if not (a0 < m < b0):
            return total, total_err, evals, False
        v1, e1 = _kappa_rule(mode, k0, g, a0, m)
        v2, e2 = _kappa_rule(mode, k0, g, m, b0)
        evals += 30
        hi[j] = m
        val[j] = v1
        err[j] = e1
        lo[n] = m
        hi[n] = b0
        val[n] = v2
        err[n] = e2
        n += 1
        total = 0.0
        total_err = 0.0
        for i in range(n):
            total += val[i]
            total_err += err[i]
    return total, total_err, evals, True


@njit(cache=True)
def _rule(which, mode, k0, g, a, b, inner_tol, max_evals):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    k = 0.0
    gs = 0.0
    evals = 15
    ok = True
    for i in range(15):
        x = mid + half * _NODES[i]
        kap = kappa_at(mode, k0, g, x)
        if which == INV_KAPPA:
            y = 1.0 / kap
        else:
            ph, _, n_in, ok_in = phase(mode, k0, g, x, inner_tol, max_evals)
            evals += n_in
            ok = ok and ok_in
            y = math.exp(-2.0 * ph) / kap
        k += _WK[i] * y
        gs += _WG[i] * y
    return half * k, abs(half * (k - gs)), evals, ok


@njit(cache=True)
def adaptive(which, mode, k0, g, a, b, rel_tol, abs_tol, max_evals):
    """Adaptive integral of the INV_KAPPA or DWELL integrand over [a, b].

    Returns (value, abs_error, evaluations, converged); the inner phase
    integrals count towards the evaluations.
    """
    if b <= a:
        return 0.0, 0.0, 0, True
    inner_tol = max(rel_tol * 1e-2, 1e-14)
    # interval arrays start small and double on demand; max_evals bounds the count
    cap = max(max_evals // 30 + 2, 4)
    start = min(cap, 64)
    lo = np.empty(start)
    hi = np.empty(start)
    val = np.empty(start)
    err = np.empty(start)
    v, e, evals, ok = _rule(which, mode, k0, g, a, b, inner_tol, max_evals)
    lo[0] = a
    hi[0] = b
    val[0] = v
    err[0] = e
    n = 1
    total = v
    total_err = e
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if evals + 30 > max_evals or n + 1 > cap:
            return total, total_err, evals, False
        if n + 1 > lo.size:
            lo, hi, val, err = _grow(lo, hi, val, err, n)
        j = 0
        for i in range(1, n):
            if err[i] > err[j]:
                j = i
        a0 = lo[j]
        b0 = hi[j]
        m = 0.5 * (a0 + b0)
        if not (a0 < m < b0):
            return total, total_err, evals, False
        v1, e1, n1, ok1 = _rule(which, mode, k0, g, a0, m, inner_tol, max_evals)
        v2, e2, n2, ok2 = _rule(which, mode, k0, g, m, b0, inner_tol, max_evals)
        evals += n1 + n2
        ok = ok and ok1 and ok2
        hi[j] = m
        val[j] = v1
        err[j] = e1
        lo[n] = m
        hi[n] = b0
        val[n] = v2
        err[n] = e2
        n += 1
        total = 0.0
        total_err = 0.0
        for i in range(n):
            total += val[i]
            total_err += err[i]
    return total, total_err, evals, ok


def phase_integral(mode, k0, g, x, rel_tol, max_evals):
    return phase(mode, k0, g, x, rel_tol, max_evals)


def traversal_integral(mode, k0, g, length, rel_tol, max_evals):
    return adaptive(INV_KAPPA, mode, k0, g, 0.0, length, rel_tol, 0.0, max_evals)


def dwell_integral(mode, k0, g, length, rel_tol, max_evals):
    return adaptive(DWELL, mode, k0, g, 0.0, length, rel_tol, 0.0, max_evals)
