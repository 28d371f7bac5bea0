"""Hot integrals over the kappa(x) profile, with a switchable backend.

``TUNNELKIT_BACKEND`` selects the implementation at import time:
``numba`` (default when numba imports) or ``numpy``.  Both expose

* ``phase_integral(mode, k0, g, x, rel_tol, max_evals)``: int_0^x kappa
* ``traversal_integral(mode, k0, g, L, rel_tol, max_evals)``: int_0^L 1/kappa
* ``dwell_integral(mode, k0, g, L, rel_tol, max_evals)``:
  int_0^L exp(-2 int_0^x kappa) / kappa dx

with ``kappa(x) = k0 + g x`` (LINEARIZED) or ``sqrt(k0^2 + 2 k0 g x)``
(FULL), ``g = eta / hbar``.  Each returns
``(value, abs_error, evaluations, converged)``.
"""

import os

from . import _numpy

LINEARIZED = 0
FULL = 1

_requested = os.environ.get("TUNNELKIT_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"TUNNELKIT_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

_impl = _numpy
if _requested == "numba":
    try:
        from . import _numba as _impl
    except ImportError:  # numba missing or broken: fall back silently
        _impl = _numpy

BACKEND = "numba" if _impl is not _numpy else "numpy"


def backend_module(name):
    """Return the kernel module for ``name`` ('numba' or 'numpy')."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba as mod
        return mod
    raise ValueError(f"unknown backend {name!r}")


def phase_integral(mode, k0, g, x, rel_tol, max_evals):
    return _impl.phase_integral(mode, float(k0), float(g), float(x), float(rel_tol), int(max_evals))


def traversal_integral(mode, k0, g, length, rel_tol, max_evals):
    return _impl.traversal_integral(mode, float(k0), float(g), float(length), float(rel_tol), int(max_evals))


def dwell_integral(mode, k0, g, length, rel_tol, max_evals):
    return _impl.dwell_integral(mode, float(k0), float(g), float(length), float(rel_tol), int(max_evals))
