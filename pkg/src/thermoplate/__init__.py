"""Finite element solver for coupled thermoelastic-diffusion and
thermo-poroelastic Kirchhoff-Love plates.

Spatial discretization: C0 interior penalty (P2) for the deflection,
conforming P1 for temperature and chemical potential / pore pressure.
Time discretization: Newmark averaging for the hyperbolic equation,
Crank-Nicolson for the parabolic ones.
"""

__version__ = "0.1.0"
