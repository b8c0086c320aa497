"""Macdonald functions K0, K1 and the Bickley-Naylor functions Ki_n.

All of them come from the same integral representation,

    Ki_n(x) = int_0^inf exp(-x cosh t) cosh(t)**(-n) dt,   Ki_0 = K0,
    K1(x)   = int_0^inf exp(-x cosh t) cosh(t) dt,

evaluated with the halving trapezoid rule of :mod:`uehling.quadrature`.
"""

import math
from dataclasses import dataclass

from . import _kernels
from .errors import ConvergenceError, DomainError
from .quadrature import DEFAULT_CONFIG, kernel_integral

# exp(-x) is treated as zero from here on
UNDERFLOW_X = 700.0


@dataclass(frozen=True)
class SpecFunResult:
    value: float
    abs_error_estimate: float
    underflowed: bool = False

    def __float__(self):
        return self.value


def _check_x(x, allow_zero):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x!r}")
    if x < 0 or (x == 0 and not allow_zero):
        raise DomainError(f"argument out of domain: {x!r}")
    return x


def _cosh_moment(n, x, config):
    # n = -1 is the K1 kernel; n >= 0 are the Bickley functions
    if x >= UNDERFLOW_X:
        return SpecFunResult(0.0, 0.0, True)
    res = kernel_integral(_kernels.KIND_BICKLEY, n, x, config)
    if not res.converged:
        raise ConvergenceError(f"cosh-kernel integral n={n}, x={x} did not converge", res)
    scale = math.exp(-x)
    return SpecFunResult(res.value * scale, res.abs_error_estimate * scale)


def k0(x, config=DEFAULT_CONFIG):
    """Modified Bessel function of the second kind of order zero."""
    return _cosh_moment(0, _check_x(x, allow_zero=False), config)


def k1(x, config=DEFAULT_CONFIG):
    """Modified Bessel function of the second kind of order one."""
    return _cosh_moment(-1, _check_x(x, allow_zero=False), config)


def bickley_ki(n, x, config=DEFAULT_CONFIG):
    """Bickley-Naylor function Ki_n(x), the n-fold repeated integral of K0.

    Ki_n(0) is finite for n >= 1 (Ki_1(0) = pi/2, Ki_2(0) = 1, ...); Ki_0(0)
    diverges and is rejected.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"order must be a nonnegative integer, got {n!r}")
    n = int(n)
    x = _check_x(x, allow_zero=n > 0)
    return _cosh_moment(n, x, config)


def ki_recurrence_next(n, x, ki_nm2, ki_nm1, ki_n):
    """Ki_{n+1}(x) from Ki_{n-2}, Ki_{n-1}, Ki_n.

    n Ki_{n+1} = -x Ki_n + (n - 1) Ki_{n-1} + x Ki_{n-2}
    """
    if int(n) != n or n < 2:
        raise DomainError(f"recurrence needs integer n >= 2, got {n!r}")
    return (-x * ki_n + (n - 1) * ki_nm1 + x * ki_nm2) / n


def _k_int(nu, x, config):
    if nu == 0:
        return k0(x, config).value
    if nu == 1:
        return k1(x, config).value
    # upward recurrence K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu
    prev, cur = k0(x, config).value, k1(x, config).value
    for m in range(1, nu):
        prev, cur = cur, prev + 2.0 * m / x * cur
    return cur


def k_nu_derivative(nu, b, r, config=DEFAULT_CONFIG):
    """d/dr K_nu(b r) = -(nu / r) K_nu(b r) - b K_{nu-1}(b r), integer nu >= 1."""
    if int(nu) != nu or nu < 1:
        raise DomainError(f"nu must be an integer >= 1, got {nu!r}")
    if not (b > 0 and r > 0):
        raise DomainError(f"b and r must be positive, got b={b!r}, r={r!r}")
    nu = int(nu)
    x = b * r
    return -(nu / r) * _k_int(nu, x, config) - b * _k_int(nu - 1, x, config)
