"""Trapezoid-with-halving integration of rapidly decaying integrands on [0, inf).

For integrands that are analytic in a strip around the real axis and decay
doubly exponentially (the cosh substitution produces exactly these), the
plain trapezoid rule converges geometrically in the step size.  Successive
halvings therefore give a reliable error estimate without any embedded
rule: the difference between the last two levels bounds the error of the
coarser one and grossly over-estimates that of the finer one.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, IntegrandError

# exp(-50) ~ 2e-22: integrand drop, relative to its value at t = 0, at which
# the semi-infinite range is truncated.
LOG_DECAY = 50.0


@dataclass(frozen=True)
class AccuracyConfig:
    """Tolerances for quadrature and finite-difference step policy.

    ``fd_step`` is the relative step (times r) used for first derivatives,
    ``fd_step2`` the one used for second derivatives.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    initial_step: float = 0.5
    max_refinements: int = 12
    fd_step: float = 1e-5
    fd_step2: float = 1e-3

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "initial_step", "fd_step", "fd_step2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be >= 1")


DEFAULT_CONFIG = AccuracyConfig()


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool


def trapezoid_halving(node_sum, upper, config=DEFAULT_CONFIG):
    """Integrate over [0, upper] given a node-sum primitive.

    ``node_sum(t0, step, count)`` must return the sum of the integrand at
    ``t0, t0 + step, ..., t0 + (count - 1) * step``.  The integral is the
    half-line trapezoid ``h * (f(0)/2 + sum_{k>=1} f(k h))``.
    """
    h = config.initial_step
    n_full = int(upper / h)
    acc = 0.5 * node_sum(0.0, h, 1) + node_sum(h, h, n_full)
    evaluations = 1 + n_full
    estimate = h * acc
    _check_finite(estimate)
    delta = math.inf
    for _ in range(config.max_refinements):
        half = 0.5 * h
        count = int((upper - half) / h) + 1 if upper >= half else 0
        acc += node_sum(half, h, count)
        evaluations += count
        h = half
        refined = h * acc
        _check_finite(refined)
        delta = abs(refined - estimate)
        estimate = refined
        if delta <= max(config.abs_tol, config.rel_tol * abs(refined)):
            return QuadratureResult(estimate, delta, evaluations, True)
    return QuadratureResult(estimate, delta, evaluations, False)


def _check_finite(value):
    if not math.isfinite(value):
        raise IntegrandError(f"integrand produced a non-finite sum ({value!r})")


def truncation_point(x, n=0, log_decay=LOG_DECAY):
    """Upper limit T where exp(-x (cosh T - 1)) * cosh(T)**(-n) <= exp(-log_decay).

    ``n`` may be negative (growing weights such as cosh t).  Requires x > 0
    unless n > 0.
    """
    if x <= 0 and n <= 0:
        raise DomainError("truncation needs x > 0 or n > 0")
    candidates = []
    if n > 0:
        candidates.append(math.log(2.0) + log_decay / n)
    if x > 0:
        # cosh T = 1 + (L + m ln cosh T)/x, fixed-point in m = max(-n, 0)
        m = max(-n, 0)
        t = math.acosh(1.0 + log_decay / x)
        for _ in range(50):
            t_next = math.acosh(1.0 + (log_decay + m * math.log(math.cosh(t))) / x)
            done = abs(t_next - t) <= 1e-12 * t_next
            t = t_next
            if done:
                break
        candidates.append(t)
    return min(candidates)


def integrate_decaying(f, config=DEFAULT_CONFIG, upper=None):
    """Integrate a vectorised integrand over [0, inf).

    ``f`` receives a float64 array of nodes and must return an array (or a
    broadcastable scalar) of integrand values.  It is called from whatever
    thread calls this function and must be reentrant.

    ``upper`` is the truncation hint: the integrand is treated as zero beyond
    it.  When omitted, the range is doubled from 1 until ``|f|`` at the end
    point falls below ``exp(-LOG_DECAY)`` times the largest value seen.

    Non-convergence is reported through ``converged``; a non-finite
    integrand value raises :class:`IntegrandError`.
    """

    def node_sum(t0, step, count):
        if count <= 0:
            return 0.0
        t = t0 + step * np.arange(count, dtype=np.float64)
        values = np.broadcast_to(np.asarray(f(t), dtype=np.float64), t.shape)
        if not np.all(np.isfinite(values)):
            raise IntegrandError("integrand returned a non-finite value")
        return float(np.sum(values))

    if upper is None:
        upper = _probe_upper(f)
    elif not (upper > 0 and math.isfinite(upper)):
        raise DomainError(f"upper must be positive and finite, got {upper!r}")
    return trapezoid_halving(node_sum, upper, config)


def _probe_upper(f, limit=1024.0):
    threshold = math.exp(-LOG_DECAY)
    upper = 1.0
    peak = 0.0
    while upper < limit:
        t = np.linspace(0.0, upper, 65)
        values = np.abs(np.broadcast_to(np.asarray(f(t), dtype=np.float64), t.shape))
        if not np.all(np.isfinite(values)):
            raise IntegrandError("integrand returned a non-finite value")
        peak = max(peak, float(values.max()))
        if values[-1] <= threshold * peak:
            return upper
        upper *= 2.0
    return limit


def kernel_integral(kind, n, x, config=DEFAULT_CONFIG):
    """exp(x) * integral_0^inf w_kind(t) exp(-x cosh t) dt via the compiled kernels."""
    upper = truncation_point(x, n if kind == _kernels.KIND_BICKLEY else _weight_growth(kind))
    sum_fn = _kernels.weighted_sum

    def node_sum(t0, step, count):
        return sum_fn(kind, n, x, t0, step, count)

    return trapezoid_halving(node_sum, upper, config)


def _weight_growth(kind):
    # exponent n such that the weight behaves like cosh(t)**(-n) for large t
    return -1 if kind == _kernels.KIND_SLOPE else 0


def uehling_integrand_transformed(zeta, z):
    """(1 - sech^2/2 - sech^4/2) * exp(-z cosh zeta), the Uehling integrand after xi = cosh zeta."""
    zeta = np.asarray(zeta, dtype=np.float64)
    s2 = 1.0 / np.cosh(zeta) ** 2
    out = (1.0 - 0.5 * s2 - 0.5 * s2 * s2) * np.exp(-z * np.cosh(zeta))
    return out if out.ndim else float(out)


def uehling_integrand_raw(xi, w):
    """(1 + 1/(2 xi^2)) sqrt(xi^2 - 1) / xi^2 * exp(-w xi), for xi >= 1."""
    xi = np.asarray(xi, dtype=np.float64)
    out = (1.0 + 0.5 / xi**2) * np.sqrt(np.maximum(xi * xi - 1.0, 0.0)) / xi**2 * np.exp(-w * xi)
    return out if out.ndim else float(out)
