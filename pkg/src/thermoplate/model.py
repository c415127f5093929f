"""Model coefficients of the coupled plate system and their derivation.

The 2D system couples a fourth-order plate equation for the deflection u
with two parabolic equations for the first moments of temperature (theta)
and chemical potential / pore pressure (p):

    u_tt - a0 Lap u_tt + d0 Lap^2 u + alpha Lap theta + beta Lap p = f
    a1 theta_t - gamma p_t + b1 theta - c1 Lap theta - alpha Lap u_t = phi
    a2 p_t - gamma theta_t - kappa Lap p - beta Lap u_t = g

All coefficients except ``gamma`` must be positive, and the coupling
condition a1*a2 - gamma^2 > 0 must hold; it guarantees a nonempty open
interval of admissible weights gamma0 with a1 - |gamma|/gamma0 > 0 and
a2 - |gamma|*gamma0 > 0.

For physical plates the ten coefficients derive from 3D material
constants through thickness moments; the thermoelastic-diffusion (TED)
variant shifts Lame's first constant by the diffusion expansion before
the reduction, the thermo-poroelastic (TPE) variant uses it unshifted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "ModelCoefficients",
    "Material3D",
    "MaterialError",
    "CouplingError",
    "unit_coefficients",
    "ted_coefficients",
    "tpe_coefficients",
    "gamma0_interval",
    "default_gamma0",
    "COPPER",
    "BEREA_SANDSTONE",
]


class MaterialError(ValueError):
    """3D constants violate a structural validity condition."""


class CouplingError(ValueError):
    """Derived coefficients violate a1*a2 - gamma^2 > 0."""


@dataclass(frozen=True)
class ModelCoefficients:
    a0: float
    d0: float
    alpha: float
    beta: float
    a1: float
    gamma: float
    b1: float
    c1: float
    a2: float
    kappa: float

    def validate(self) -> "ModelCoefficients":
        for name in ("a0", "d0", "alpha", "beta", "a1", "b1", "c1", "a2", "kappa"):
            if getattr(self, name) <= 0.0:
                raise CouplingError(f"coefficient {name} must be positive, got {getattr(self, name)!r}")
        if self.a1 * self.a2 - self.gamma**2 <= 0.0:
            raise CouplingError(
                f"coupling condition a1*a2 - gamma^2 > 0 violated: "
                f"{self.a1} * {self.a2} - {self.gamma}^2 = {self.a1 * self.a2 - self.gamma**2:g}"
            )
        return self

    def with_gamma(self, gamma: float) -> "ModelCoefficients":
        return replace(self, gamma=gamma).validate()


def unit_coefficients(gamma: float = 1.0, a1: float = 35.0, a2: float = 40.0) -> ModelCoefficients:
    """All-ones coefficients except (a1, a2, gamma); the smooth-study setup."""
    return ModelCoefficients(
        a0=1.0, d0=1.0, alpha=1.0, beta=1.0, a1=a1, gamma=gamma, b1=1.0, c1=1.0, a2=a2, kappa=1.0
    ).validate()


@dataclass(frozen=True)
class Material3D:
    """3D constants (SI units).  TED-only fields: varrho, alpha_c, varpi, k2.

    TPE-only fields: varrho_star (Biot modulus), beta_star (Biot-Willis),
    gamma_star (thermal dilation), k2_star (permeability).
    """

    lam: float
    mu: float
    rho: float
    c_E: float
    T0: float
    alpha_t: float
    k1: float
    varrho: float = 0.0
    alpha_c: float = 0.0
    varpi: float = 0.0
    k2: float = 0.0
    varrho_star: float = 0.0
    beta_star: float = 0.0
    gamma_star: float = 0.0
    k2_star: float = 0.0


COPPER = Material3D(
    lam=7.76e10,
    mu=3.36e10,
    varrho=9.0e5,
    alpha_t=1.78e-5,
    alpha_c=1.98e-4,
    varpi=1.2e4,
    rho=8954.0,
    c_E=383.1,
    T0=293.0,
    k1=386.0,
    k2=8.5e-9,
)

BEREA_SANDSTONE = Material3D(
    lam=10.22e9,
    mu=4.09e9,
    alpha_t=3.0e-5,
    varrho_star=12.0e9,
    beta_star=0.79,
    rho=2280.0,
    c_E=800.0,
    T0=293.0,
    gamma_star=5.0e-5,
    k1=1.0e-6,
    k2_star=1.9e-13,
)


def ted_coefficients(m: Material3D, d: float) -> ModelCoefficients:
    """Thermoelastic-diffusion plate coefficients from 3D constants.

    Uses the diffusion-shifted first Lame constant
    lam0 = lam - (3 lam + 2 mu)^2 alpha_c^2 / varrho, which must satisfy
    lam0 + mu > 0.
    """
    if d <= 0.0:
        raise ValueError("plate thickness must be positive")
    three_lam_two_mu = 3.0 * m.lam + 2.0 * m.mu
    lam0 = m.lam - three_lam_two_mu**2 * m.alpha_c**2 / m.varrho
    if lam0 + m.mu <= 0.0:
        raise MaterialError(f"lam0 + mu = {lam0 + m.mu:g} must be positive")
    gamma1 = three_lam_two_mu * (m.alpha_t + m.varpi / m.varrho * m.alpha_c)
    gamma2 = three_lam_two_mu * m.alpha_c / m.varrho
    s = lam0 + 2.0 * m.mu
    scale = 12.0 / (m.rho * d**4)
    return ModelCoefficients(
        a0=d**2 / 12.0,
        d0=4.0 * m.mu * d**2 * (lam0 + m.mu) / (12.0 * m.rho * s),
        alpha=2.0 * m.mu * gamma1 / (m.rho * d * s),
        beta=2.0 * m.mu * gamma2 / (m.rho * d * s),
        a1=scale * (m.rho * m.c_E / m.T0 + m.varpi**2 / m.varrho + gamma1**2 / s),
        gamma=-scale * (m.varpi / m.varrho + gamma1 * gamma2 / s),
        b1=12.0 * m.k1 / (m.rho * d**3),
        c1=scale * m.k1,
        a2=scale * (1.0 / m.varrho + gamma2**2 / s),
        kappa=scale * m.k2,
    ).validate()


def tpe_coefficients(m: Material3D, d: float) -> ModelCoefficients:
    """Thermo-poroelastic plate coefficients from 3D constants."""
    if d <= 0.0:
        raise ValueError("plate thickness must be positive")
    three_lam_two_mu = 3.0 * m.lam + 2.0 * m.mu
    gamma1 = m.alpha_t * three_lam_two_mu
    gamma2 = m.beta_star
    s = m.lam + 2.0 * m.mu
    scale = 12.0 / (m.rho * d**4)
    return ModelCoefficients(
        a0=d**2 / 12.0,
        d0=4.0 * m.mu * d**2 * (m.lam + m.mu) / (12.0 * m.rho * s),
        alpha=2.0 * m.mu * gamma1 / (m.rho * d * s),
        beta=2.0 * m.mu * gamma2 / (m.rho * d * s),
        a1=scale * (m.rho * m.c_E / m.T0 + gamma1**2 / s),
        gamma=scale * (3.0 * m.gamma_star - gamma1 * gamma2 / s),
        b1=12.0 * m.k1 / (m.rho * d**3),
        c1=scale * m.k1,
        a2=scale * (1.0 / m.varrho_star + gamma2**2 / s),
        kappa=scale * m.k2_star,
    ).validate()


def gamma0_interval(c: ModelCoefficients) -> tuple[float, float]:
    """Open interval (|gamma|/a1, a2/|gamma|) of admissible energy weights."""
    if c.a1 * c.a2 - c.gamma**2 <= 0.0:
        raise CouplingError("coupling condition a1*a2 - gamma^2 > 0 violated")
    g = abs(c.gamma)
    if g == 0.0:
        return (0.0, math.inf)
    return (g / c.a1, c.a2 / g)


def default_gamma0(c: ModelCoefficients) -> float:
    """Geometric midpoint of the admissible interval (sqrt(a2/a1) for gamma != 0)."""
    lo, hi = gamma0_interval(c)
    if math.isinf(hi):
        return 1.0
    return math.sqrt(lo * hi)
