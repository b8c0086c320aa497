"""Uehling potential by every available route, plus unit handling.

Conventions
-----------
* Charges use e = 1: every potential is reported "in units where e = 1".
  The Coulomb term is then Q / r.
* ``PhysicalParams.y`` is the electron mass as an inverse length.  In
  relativistic units (hbar = c = 1, lengths in reduced Compton wavelengths
  Lambda_e = 1/y) y = 1; in atomic units (lengths in Bohr radii a0) y =
  1/alpha.  ``b = 2 y`` is the decay constant of the Macdonald functions.
* The 1/r prefactor carries the length unit, so with lengths related by
  r_atomic = alpha * r_relativistic the potentials obey
  U_atomic(r_a) = U_relativistic(r_a / alpha) / alpha.  ``potential_scale``
  returns that factor; no math routine applies it implicitly.

Routes
------
integral              A/r * int_0^inf (1 - sech^2/2 - sech^4/2) exp(-b r cosh t) dt
closed_ki024          A/r * [K0 - Ki2/2 - Ki4/2](b r)
closed_reduced        A/r * [(1 + z^2/12) K0 - z/12 Ki1 - (5/6 + z^2/12) Ki2](z), z = b r
paper_constant_coeff  Q alpha/(18 pi r) * [(12 + b^2) K0 - b Ki1 - (10 + b^2) Ki2](b r)

The first three are the same function.  The last one uses b where the
reduced form has z = b r; it coincides with them only at r = 1 and is kept
as a diagnostic.
"""

import enum
import math
from dataclasses import dataclass, field

from . import _kernels
from .errors import ConvergenceError, DomainError
from .quadrature import DEFAULT_CONFIG, kernel_integral
from .specfun import bickley_ki, k0

ALPHA_DEFAULT = 7.2973525693e-3


class UnitSystem(str, enum.Enum):
    RELATIVISTIC = "relativistic"
    ATOMIC = "atomic"


class Route(str, enum.Enum):
    INTEGRAL = "integral"
    CLOSED_KI024 = "closed_ki024"
    CLOSED_REDUCED = "closed_reduced"
    PAPER_CONSTANT_COEFF = "paper_constant_coeff"
    ODE_IVP = "ode_ivp"


@dataclass(frozen=True)
class PhysicalParams:
    """Charge number, coupling and mass scale.

    ``mass_ratio`` rescales the mass of the polarised vacuum loop relative to
    the electron (1 for ordinary vacuum polarisation).  The mass scale is
    always derived, never set directly, so it stays tied to the unit system.
    """

    Q: float = 1.0
    alpha: float = ALPHA_DEFAULT
    unit_system: UnitSystem = UnitSystem.RELATIVISTIC
    mass_ratio: float = 1.0
    y: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "unit_system", UnitSystem(self.unit_system))
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if not (self.mass_ratio > 0 and math.isfinite(self.mass_ratio)):
            raise ValueError(f"mass_ratio must be positive, got {self.mass_ratio!r}")
        if not math.isfinite(self.Q):
            raise ValueError(f"Q must be finite, got {self.Q!r}")
        unit_mass = 1.0 if self.unit_system is UnitSystem.RELATIVISTIC else 1.0 / self.alpha
        object.__setattr__(self, "y", self.mass_ratio * unit_mass)

    @property
    def b(self):
        return 2.0 * self.y

    @property
    def A(self):
        """Prefactor 2 Q alpha / (3 pi) of the integral and closed forms."""
        return 2.0 * self.Q * self.alpha / (3.0 * math.pi)

    @property
    def compton_wavelength(self):
        """Lambda = 1/y in the active length unit."""
        return 1.0 / self.y


@dataclass(frozen=True)
class PotentialSample:
    r: float
    value: float
    route: Route
    abs_error_estimate: float = 0.0


def _check_r(r):
    r = float(r)
    if not (math.isfinite(r) and r > 0):
        raise DomainError(f"r must be positive and finite, got {r!r}")
    return r


def _spectral_integral(kind, z, cfg):
    res = kernel_integral(kind, 0, z, cfg)
    if not res.converged:
        raise ConvergenceError(f"Uehling integral at z={z} did not converge", res)
    scale = math.exp(-z)
    return res.value * scale, res.abs_error_estimate * scale


def uehling_integral(r, p, cfg=DEFAULT_CONFIG):
    """Direct quadrature of the defining integral after xi = cosh(zeta)."""
    r = _check_r(r)
    z = p.b * r
    if p.Q == 0:
        return PotentialSample(r, 0.0, Route.INTEGRAL, 0.0)
    integral, err = _spectral_integral(_kernels.KIND_UEHLING, z, cfg)
    pref = p.A / r
    return PotentialSample(r, pref * integral, Route.INTEGRAL, abs(pref) * err)


def _ki(n, z, cfg):
    res = bickley_ki(n, z, cfg)
    return res.value, res.abs_error_estimate


def uehling_closed_ki024(r, p, cfg=DEFAULT_CONFIG):
    r = _check_r(r)
    z = p.b * r
    (c0, e0), (c2, e2), (c4, e4) = _ki(0, z, cfg), _ki(2, z, cfg), _ki(4, z, cfg)
    pref = p.A / r
    value = pref * (c0 - 0.5 * c2 - 0.5 * c4)
    return PotentialSample(r, value, Route.CLOSED_KI024, abs(pref) * (e0 + 0.5 * (e2 + e4)))


def _reduced_bracket(c, z, cfg):
    """(1 + c^2/12) K0(z) - (c/12) Ki1(z) - (5/6 + c^2/12) Ki2(z) with its error bound."""
    (c0, e0), (c1, e1), (c2, e2) = _ki(0, z, cfg), _ki(1, z, cfg), _ki(2, z, cfg)
    a0 = 1.0 + c * c / 12.0
    a1 = c / 12.0
    a2 = 5.0 / 6.0 + c * c / 12.0
    return a0 * c0 - a1 * c1 - a2 * c2, a0 * e0 + a1 * e1 + a2 * e2


def uehling_closed_reduced(r, p, cfg=DEFAULT_CONFIG):
    r = _check_r(r)
    z = p.b * r
    bracket, err = _reduced_bracket(z, z, cfg)
    pref = p.A / r
    return PotentialSample(r, pref * bracket, Route.CLOSED_REDUCED, abs(pref) * err)


def uehling_paper_constant_coeff(r, p, cfg=DEFAULT_CONFIG):
    """Constant-coefficient closed form; matches the other routes only at b r = b."""
    r = _check_r(r)
    b = p.b
    z = b * r
    (c0, e0), (c1, e1), (c2, e2) = _ki(0, z, cfg), _ki(1, z, cfg), _ki(2, z, cfg)
    pref = p.Q * p.alpha / (18.0 * math.pi * r)
    bracket = (12.0 + b * b) * c0 - b * c1 - (10.0 + b * b) * c2
    err = (12.0 + b * b) * e0 + b * e1 + (10.0 + b * b) * e2
    return PotentialSample(r, pref * bracket, Route.PAPER_CONSTANT_COEFF, abs(pref) * err)


_ROUTES = {
    Route.INTEGRAL: uehling_integral,
    Route.CLOSED_KI024: uehling_closed_ki024,
    Route.CLOSED_REDUCED: uehling_closed_reduced,
    Route.PAPER_CONSTANT_COEFF: uehling_paper_constant_coeff,
}


def evaluate(route, r, p, cfg=DEFAULT_CONFIG):
    """Evaluate the potential by a named route (ode_ivp is not a pointwise route)."""
    route = Route(route)
    try:
        fn = _ROUTES[route]
    except KeyError:
        raise DomainError(f"route {route.value!r} cannot be evaluated pointwise") from None
    return fn(r, p, cfg)


def uehling_derivative_integral(r, p, cfg=DEFAULT_CONFIG):
    """Radial-derivative integral, exponential term only.

    -(4 Q alpha y / (3 pi r)) * int_1^inf (1 + 1/(2 xi^2)) sqrt(xi^2 - 1)/xi exp(-2 y r xi) dxi

    This is only the term from differentiating the exponential; the exact
    derivative of the potential also contains -U(r)/r.
    """
    r = _check_r(r)
    if p.Q == 0:
        return 0.0
    integral, _ = _spectral_integral(_kernels.KIND_SLOPE, p.b * r, cfg)
    return -4.0 * p.Q * p.alpha * p.y / (3.0 * math.pi * r) * integral


def total_potential(r, p, cfg=DEFAULT_CONFIG):
    """Coulomb plus Uehling potential, Q/r + U(r), with U from the reduced closed form."""
    r = _check_r(r)
    return p.Q / r + uehling_closed_reduced(r, p, cfg).value


def interaction_energy_atomic(r, Q, alpha=ALPHA_DEFAULT, cfg=DEFAULT_CONFIG):
    """Electron-nucleus Uehling energy in atomic units.

    2 Q alpha^2 / (3 pi r) * int_1^inf (1 + 1/(2 xi^2)) sqrt(xi^2 - 1)/xi^2 exp(-2 r xi / alpha) dxi

    r is in Bohr radii.  In the e = 1 convention this equals alpha times the
    atomic-unit potential ``uehling_integral(r, PhysicalParams(Q, alpha, "atomic"))``.
    """
    r = _check_r(r)
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if Q == 0:
        return 0.0
    integral, _ = _spectral_integral(_kernels.KIND_UEHLING, 2.0 * r / alpha, cfg)
    return 2.0 * Q * alpha**2 / (3.0 * math.pi * r) * integral


def convert_length(r, from_units, to_units, alpha=ALPHA_DEFAULT):
    """Rescale a radius between Compton-wavelength and Bohr-radius units (r_a = alpha r_rel)."""
    r = float(r)
    if not math.isfinite(r):
        raise DomainError(f"r must be finite, got {r!r}")
    src, dst = UnitSystem(from_units), UnitSystem(to_units)
    if src is dst:
        return r
    return alpha * r if src is UnitSystem.RELATIVISTIC else r / alpha


def potential_scale(from_units, to_units, alpha=ALPHA_DEFAULT):
    """Factor turning a potential in ``from_units`` into ``to_units`` at the same physical radius."""
    src, dst = UnitSystem(from_units), UnitSystem(to_units)
    if src is dst:
        return 1.0
    return 1.0 / alpha if src is UnitSystem.RELATIVISTIC else alpha
