"""Pure-numpy versions of the barrier integrals, built on ``quadrature.integrate``.

Same signatures and return tuples as the numba kernels; non-convergence is
reported through the ``converged`` flag rather than raised.
"""

import numpy as np

from ..errors import NonConvergence
from ..quadrature import integrate


def kappa_at(mode, k0, g, x):
    x = np.asarray(x, dtype=float)
    if mode == 0:
        return k0 + g * x
    return np.sqrt(k0 * k0 + 2.0 * k0 * g * x)


def _run(f, a, b, rel_tol, max_evals):
    try:
        r = integrate(f, a, b, rel_tol=rel_tol, max_evals=max_evals)
    except NonConvergence as exc:
        return exc.estimate, exc.abs_error, exc.evaluations, False
    return r.value, r.abs_error_estimate, r.evaluations, True


def phase_integral(mode, k0, g, x, rel_tol, max_evals):
    return _run(lambda s: kappa_at(mode, k0, g, s), 0.0, x, rel_tol, max_evals)


def traversal_integral(mode, k0, g, length, rel_tol, max_evals):
    return _run(lambda s: 1.0 / kappa_at(mode, k0, g, s), 0.0, length, rel_tol, max_evals)


def dwell_integral(mode, k0, g, length, rel_tol, max_evals):
    inner_tol = max(rel_tol * 1e-2, 1e-14)
    state = {"evals": 0, "ok": True}

    def integrand(xs):
        phases = np.empty_like(xs)
        for i, x in enumerate(xs):
            ph, _, n, ok = phase_integral(mode, k0, g, x, inner_tol, max_evals)
            phases[i] = ph
            state["evals"] += n
            state["ok"] = state["ok"] and ok
        return np.exp(-2.0 * phases) / kappa_at(mode, k0, g, xs)

    value, err, n, ok = _run(integrand, 0.0, length, rel_tol, max_evals)
    return value, err, n + state["evals"], ok and state["ok"]
