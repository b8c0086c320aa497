"""Trapezoid node sums for the cosh-substitution integrals.

Every integral in the package reduces to

    S(x) = sum_k w(t_k) * exp(-x * (cosh t_k - 1))

over equally spaced nodes ``t_k = t0 + k * step``.  The exponential is
scaled by ``exp(x)`` so sums stay O(1) for large ``x``; callers undo the
scaling.  ``cosh t - 1`` is evaluated as ``2 sinh^2(t/2)`` to keep the
small-``t`` nodes exact.

Weight kinds
------------
KIND_BICKLEY   w = cosh(t)**(-n)                      (Ki_n; n = -1 gives K_1)
KIND_UEHLING   w = (1 + sech^2 t / 2) tanh^2 t        (Uehling spectral weight)
KIND_SLOPE     w = (1 + sech^2 t / 2) sinh t tanh t   (radial-derivative weight)

Two interchangeable backends exist: a numba loop and a vectorised numpy
expression.  Set ``UEHLING_DISABLE_NUMBA=1`` to force the numpy path.
"""

import math
import os

import numpy as np

KIND_BICKLEY = 0
KIND_UEHLING = 1
KIND_SLOPE = 2

DISABLE_ENV = "UEHLING_DISABLE_NUMBA"


def weighted_sum_numpy(kind, n, x, t0, step, count):
    if count <= 0:
        return 0.0
    t = t0 + step * np.arange(count, dtype=np.float64)
    sh = np.sinh(0.5 * t)
    e = np.exp(-2.0 * x * sh * sh)
    c = np.cosh(t)
    if kind == KIND_BICKLEY:
        w = c ** (-float(n))
    elif kind == KIND_UEHLING:
        th = np.tanh(t)
        w = (1.0 + 0.5 / (c * c)) * th * th
    else:
        w = (1.0 + 0.5 / (c * c)) * np.sinh(t) * np.tanh(t)
    return float(np.sum(e * w))


def _weighted_sum_loop(kind, n, x, t0, step, count):
    # two transcendental calls per node: everything hyperbolic comes from
    # a = expm1(t/2), with sinh(t/2) = a (2 + a) / (2 (1 + a)) free of cancellation
    s = 0.0
    for k in range(count):
        t = t0 + k * step
        a = math.expm1(0.5 * t)
        u = 1.0 + a
        sh = 0.5 * a * (2.0 + a) / u
        ch = 0.5 * (u + 1.0 / u)
        e = math.exp(-2.0 * x * sh * sh)
        c = 1.0 + 2.0 * sh * sh
        if kind == 0:
            w = c ** (-n)
        else:
            sinh_t = 2.0 * sh * ch
            th = sinh_t / c
            w = (1.0 + 0.5 / (c * c)) * th
            w *= th if kind == 1 else sinh_t
        s += e * w
    return s


try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

if njit is not None:
    weighted_sum_numba = njit(cache=True, nogil=True)(_weighted_sum_loop)
else:  # pragma: no cover
    weighted_sum_numba = None


def _select_backend():
    flag = os.environ.get(DISABLE_ENV, "").strip().lower()
    if weighted_sum_numba is None or flag in ("1", "true", "yes", "on"):
        return "numpy", weighted_sum_numpy
    return "numba", weighted_sum_numba


BACKEND, _active = _select_backend()


def weighted_sum(kind, n, x, t0, step, count):
    """Dispatch to the active backend with normalised argument types."""
    return _active(int(kind), int(n), float(x), float(t0), float(step), int(count))
