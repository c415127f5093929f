"""Time marching of the fully discrete coupled scheme.

The three fields advance together through one 3x3-block linear system per
step over the free DOFs of (P2, P1, P1).  Writing M, K for the P2 mass
and stiffness, A for the interior-penalty form, Mw, Kw for their P1
counterparts and B for the cross gradient pairing, the step matrices are

first step (special elliptic system producing level 1):
    [ (2/dt^2)(M + a0 K) + (d0/2) A   -(alpha/2) B      -(beta/2) B     ]
    [ (alpha/dt) B^T                  (a1/dt + b1/2) Mw + (c1/2) Kw
                                                         -(gamma/dt) Mw ]
    [ (beta/dt) B^T                   -(gamma/dt) Mw     (a2/dt) Mw + (kappa/2) Kw ]

main loop (Newmark average for the plate row, Crank-Nicolson rows below):
    [ (1/dt^2)(M + a0 K) + (d0/4) A   -(alpha/4) B      -(beta/4) B     ]
    [ same theta row                                                    ]
    [ same p row                                                        ]

Both matrices are constant in time and factored once per run.  The load
averages follow the time-level notation: midpoint averages for the
parabolic rows, quarter-weighted three-level averages for the plate row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from . import assembly
from .fem import FeSpace, build_space
from .linsolve import Factorization, factor
from .mesh import TriMesh
from .model import ModelCoefficients, default_gamma0, gamma0_interval
from .mms import ManufacturedCase

__all__ = [
    "TimeGrid",
    "DiscreteSystem",
    "InitialState",
    "project_initial",
    "Stepper",
    "EnergyTracker",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform partition of [0, T] into N steps."""

    T: float
    N: int

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("need at least two time steps")
        if self.T <= 0.0:
            raise ValueError("final time must be positive")

    @property
    def dt(self) -> float:
        return self.T / self.N

    def time(self, n: int) -> float:
        return n * self.dt


class DiscreteSystem:
    """Free-DOF operators of one mesh / coefficient / penalty combination."""

    def __init__(self, mesh: TriMesh, coeffs: ModelCoefficients, sigma_ip: float = 10.0):
        self.mesh = mesh
        self.coeffs = coeffs
        self.sigma_ip = sigma_ip
        self.V = build_space(mesh, "P2")
        self.W = build_space(mesh, "P1")
        fv = self.V.free_dofs
        fw = self.W.free_dofs
        self.nV = fv.size
        self.nW = fw.size

        ixvv = np.ix_(fv, fv)
        ixww = np.ix_(fw, fw)
        self.M = assembly.mass_matrix(self.V)[ixvv].tocsr()
        self.K = assembly.h1_matrix(self.V)[ixvv].tocsr()
        A, H, P = assembly.c0ip_matrix(self.V, sigma_ip, parts=True)
        self.A = A[ixvv].tocsr()
        self.hnorm_mat = (H + P)[ixvv].tocsr()
        self.Mw = assembly.mass_matrix(self.W)[ixww].tocsr()
        self.Kw = assembly.h1_matrix(self.W)[ixww].tocsr()
        self.B = assembly.coupling_matrix(self.V, self.W)[np.ix_(fv, fw)].tocsr()

    def full_u(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.V.n_dofs)
        out[self.V.free_dofs] = vec
        return out

    def full_w(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.W.n_dofs)
        out[self.W.free_dofs] = vec
        return out

    def load_u(self, fn, t: float) -> np.ndarray:
        return assembly.load_vector(self.V, fn, t)[self.V.free_dofs]

    def load_w(self, fn, t: float) -> np.ndarray:
        return assembly.load_vector(self.W, fn, t)[self.W.free_dofs]

    def first_step_matrix(self, dt: float) -> sp.csr_matrix:
        c = self.coeffs
        MU = (2.0 / dt**2) * (self.M + c.a0 * self.K) + (c.d0 / 2.0) * self.A
        return sp.bmat(
            [
                [MU, -(c.alpha / 2.0) * self.B, -(c.beta / 2.0) * self.B],
                [
                    (c.alpha / dt) * self.B.T,
                    (c.a1 / dt + c.b1 / 2.0) * self.Mw + (c.c1 / 2.0) * self.Kw,
                    -(c.gamma / dt) * self.Mw,
                ],
                [
                    (c.beta / dt) * self.B.T,
                    -(c.gamma / dt) * self.Mw,
                    (c.a2 / dt) * self.Mw + (c.kappa / 2.0) * self.Kw,
                ],
            ],
            format="csr",
        )

    def main_step_matrix(self, dt: float) -> sp.csr_matrix:
        c = self.coeffs
        MU = (1.0 / dt**2) * (self.M + c.a0 * self.K) + (c.d0 / 4.0) * self.A
        return sp.bmat(
            [
                [MU, -(c.alpha / 4.0) * self.B, -(c.beta / 4.0) * self.B],
                [
                    (c.alpha / dt) * self.B.T,
                    (c.a1 / dt + c.b1 / 2.0) * self.Mw + (c.c1 / 2.0) * self.Kw,
                    -(c.gamma / dt) * self.Mw,
                ],
                [
                    (c.beta / dt) * self.B.T,
                    -(c.gamma / dt) * self.Mw,
                    (c.a2 / dt) * self.Mw + (c.kappa / 2.0) * self.Kw,
                ],
            ],
            format="csr",
        )


@dataclass
class InitialState:
    """Initial free-DOF vectors; the velocity is either a vector in the P2
    space or a pair of callables driving quadrature of the data terms."""

    u0: np.ndarray
    th0: np.ndarray
    p0: np.ndarray
    v0: Optional[np.ndarray] = None
    ustar0_fn: Optional[Callable] = None
    grad_ustar0_fn: Optional[Callable] = None


def project_initial(case: ManufacturedCase, system: DiscreteSystem) -> InitialState:
    """Approximate the initial triple.

    The deflection uses P2 nodal interpolation of u0; temperature and
    potential/pressure use the H1-conforming elliptic projection (their
    gradients are matched against all free P1 test functions).
    """
    V, W = system.V, system.W
    u0 = V.interpolate(lambda x, y: case.u0(x, y))[V.free_dofs]

    proj = factor(system.Kw)

    def h1_project(grad_fn) -> np.ndarray:
        rhs = assembly.grad_load_vector(W, grad_fn)[W.free_dofs]
        return proj.solve(rhs)

    th0 = h1_project(case.grad_theta0)
    p0 = h1_project(case.grad_p0)
    return InitialState(
        u0=u0,
        th0=th0,
        p0=p0,
        ustar0_fn=case.ustar0,
        grad_ustar0_fn=case.grad_ustar0,
    )


class EnergyTracker:
    """Discrete energy of the scheme, accumulated over the time loop.

    The energy at the pair (m, m+1), m >= 1, combines the discrete
    velocity norms, the broken norm of the level average, weighted L2
    norms of the parabolic fields, and the running dissipation sum
    (whose weights require gamma0 inside the admissible interval).
    """

    def __init__(
        self,
        system: DiscreteSystem,
        dt: float,
        gamma0: Optional[float] = None,
        c_coer: float = 1.0,
    ):
        c = system.coeffs
        if gamma0 is None:
            gamma0 = default_gamma0(c)
        lo, hi = gamma0_interval(c)
        if not (lo < gamma0 < hi):
            raise ValueError(f"gamma0 = {gamma0:g} outside the admissible interval ({lo:g}, {hi:g})")
        self.system = system
        self.dt = dt
        self.gamma0 = gamma0
        self.c_coer = c_coer
        self.w_theta = c.a1 - abs(c.gamma) / gamma0
        self.w_p = c.a2 - abs(c.gamma) * gamma0
        self.h_accum = 0.0
        self._prev: Optional[tuple[np.ndarray, np.ndarray, np.ndarray]] = None
        self._levels = 0
        self.values: list[float] = []

    def push(self, u: np.ndarray, th: np.ndarray, p: np.ndarray) -> Optional[float]:
        """Feed level vectors in order 0, 1, 2, ...; returns E_h from level 2 on."""
        sysm = self.system
        c = sysm.coeffs
        value = None
        if self._prev is not None and self._levels >= 2:
            u_prev, th_prev, p_prev = self._prev
            du = (u - u_prev) / self.dt
            u_half = 0.5 * (u + u_prev)
            th_half = 0.5 * (th + th_prev)
            p_half = 0.5 * (p + p_prev)
            self.h_accum += self.dt * (
                c.b1 * float(th_half @ (sysm.Mw @ th_half))
                + c.c1 * float(th_half @ (sysm.Kw @ th_half))
                + c.kappa * float(p_half @ (sysm.Kw @ p_half))
            )
            value = (
                float(du @ (sysm.M @ du))
                + c.a0 * float(du @ (sysm.K @ du))
                + c.d0 * self.c_coer * float(u_half @ (sysm.hnorm_mat @ u_half))
                + self.w_theta * float(th @ (sysm.Mw @ th))
                + self.w_p * float(p @ (sysm.Mw @ p))
                + self.h_accum
            )
            self.values.append(value)
        self._prev = (u.copy(), th.copy(), p.copy())
        self._levels += 1
        return value


class Stepper:
    """Drive the fully discrete scheme from level 0 to level N."""

    def __init__(self, system: DiscreteSystem, grid: TimeGrid, solver: str = "direct"):
        self.system = system
        self.grid = grid
        self.solver = solver
        self._first: Optional[Factorization] = None
        self._main: Optional[Factorization] = None

    def _factor_first(self) -> Factorization:
        if self._first is None:
            self._first = factor(self.system.first_step_matrix(self.grid.dt), method=self.solver)
        return self._first

    def _factor_main(self) -> Factorization:
        if self._main is None:
            self._main = factor(self.system.main_step_matrix(self.grid.dt), method=self.solver)
        return self._main

    def _split(self, x: np.ndarray):
        nV, nW = self.system.nV, self.system.nW
        return x[:nV], x[nV:nV + nW], x[nV + nW:]

    @staticmethod
    def _check_finite(n: int, *vecs: np.ndarray) -> None:
        for v in vecs:
            if not np.all(np.isfinite(v)):
                raise FloatingPointError(f"non-finite state after step {n}")

    def first_step(self, init: InitialState, loads=None):
        """Solve the special elliptic system for the level-1 triple."""
        sysm = self.system
        c = sysm.coeffs
        dt = self.grid.dt
        u0, th0, p0 = init.u0, init.th0, init.p0

        if loads is not None:
            f, phi, g = loads
            fh = 0.5 * (sysm.load_u(f, dt) + sysm.load_u(f, 0.0))
            ph = 0.5 * (sysm.load_w(phi, dt) + sysm.load_w(phi, 0.0))
            gh = 0.5 * (sysm.load_w(g, dt) + sysm.load_w(g, 0.0))
        else:
            fh = np.zeros(sysm.nV)
            ph = np.zeros(sysm.nW)
            gh = np.zeros(sysm.nW)

        if init.v0 is not None:
            vel_m = sysm.M @ init.v0
            vel_k = sysm.K @ init.v0
        elif init.ustar0_fn is not None:
            vel_m = assembly.load_vector(sysm.V, lambda t, x, y: init.ustar0_fn(x, y), 0.0)[sysm.V.free_dofs]
            vel_k = assembly.grad_load_vector(sysm.V, init.grad_ustar0_fn)[sysm.V.free_dofs]
        else:
            vel_m = np.zeros(sysm.nV)
            vel_k = np.zeros(sysm.nV)

        MK = sysm.M + c.a0 * sysm.K
        rhs_u = (
            fh
            + (2.0 / dt) * (vel_m + c.a0 * vel_k)
            + (2.0 / dt**2) * (MK @ u0)
            - (c.d0 / 2.0) * (sysm.A @ u0)
            + (c.alpha / 2.0) * (sysm.B @ th0)
            + (c.beta / 2.0) * (sysm.B @ p0)
        )
        rhs_th = (
            ph
            + (c.a1 / dt) * (sysm.Mw @ th0)
            - (c.gamma / dt) * (sysm.Mw @ p0)
            - (c.b1 / 2.0) * (sysm.Mw @ th0)
            - (c.c1 / 2.0) * (sysm.Kw @ th0)
            + (c.alpha / dt) * (sysm.B.T @ u0)
        )
        rhs_p = (
            gh
            + (c.a2 / dt) * (sysm.Mw @ p0)
            - (c.gamma / dt) * (sysm.Mw @ th0)
            - (c.kappa / 2.0) * (sysm.Kw @ p0)
            + (c.beta / dt) * (sysm.B.T @ u0)
        )
        x = self._factor_first().solve(np.concatenate([rhs_u, rhs_th, rhs_p]))
        u1, th1, p1 = self._split(x)
        self._check_finite(1, u1, th1, p1)
        return u1, th1, p1

    def main_step(self, u_prev, u, th_prev, th, p_prev, p, f_prev, f_cur, f_next, ph_half, gh_half):
        """One Newmark/Crank-Nicolson step from levels (n-1, n) to n+1."""
        sysm = self.system
        c = sysm.coeffs
        dt = self.grid.dt
        MK = sysm.M + c.a0 * sysm.K

        f_quarter = 0.25 * (f_next + 2.0 * f_cur + f_prev)
        rhs_u = (
            f_quarter
            + (1.0 / dt**2) * (MK @ (2.0 * u - u_prev))
            - (c.d0 / 4.0) * (sysm.A @ (2.0 * u + u_prev))
            + (c.alpha / 4.0) * (sysm.B @ (2.0 * th + th_prev))
            + (c.beta / 4.0) * (sysm.B @ (2.0 * p + p_prev))
        )
        rhs_th = (
            ph_half
            + (c.a1 / dt) * (sysm.Mw @ th)
            - (c.gamma / dt) * (sysm.Mw @ p)
            - (c.b1 / 2.0) * (sysm.Mw @ th)
            - (c.c1 / 2.0) * (sysm.Kw @ th)
            + (c.alpha / dt) * (sysm.B.T @ u)
        )
        rhs_p = (
            gh_half
            + (c.a2 / dt) * (sysm.Mw @ p)
            - (c.gamma / dt) * (sysm.Mw @ th)
            - (c.kappa / 2.0) * (sysm.Kw @ p)
            + (c.beta / dt) * (sysm.B.T @ u)
        )
        x = self._factor_main().solve(np.concatenate([rhs_u, rhs_th, rhs_p]))
        return self._split(x)

    def run(self, init: InitialState, loads=None, on_state=None, energy: Optional[EnergyTracker] = None):
        """March from level 0 to N; ``on_state(n, t, U, TH, P)`` sees free vectors."""
        sysm = self.system
        grid = self.grid
        dt = grid.dt

        def notify(n, u, th, p):
            if energy is not None:
                energy.push(u, th, p)
            if on_state is not None:
                on_state(n, grid.time(n), u, th, p)

        u_prev, th_prev, p_prev = init.u0, init.th0, init.p0
        notify(0, u_prev, th_prev, p_prev)
        u, th, p = self.first_step(init, loads)
        notify(1, u, th, p)

        if loads is not None:
            f, phi, g = loads
            f_prev = sysm.load_u(f, 0.0)
            f_cur = sysm.load_u(f, dt)
        else:
            f_prev = np.zeros(sysm.nV)
            f_cur = np.zeros(sysm.nV)

        for n in range(1, grid.N):
            t_next = grid.time(n + 1)
            if loads is not None:
                f_next = sysm.load_u(f, t_next)
                ph_half = 0.5 * (sysm.load_w(phi, t_next) + sysm.load_w(phi, grid.time(n)))
                gh_half = 0.5 * (sysm.load_w(g, t_next) + sysm.load_w(g, grid.time(n)))
            else:
                f_next = np.zeros(sysm.nV)
                ph_half = np.zeros(sysm.nW)
                gh_half = np.zeros(sysm.nW)
            u_next, th_next, p_next = self.main_step(
                u_prev, u, th_prev, th, p_prev, p, f_prev, f_cur, f_next, ph_half, gh_half
            )
            self._check_finite(n + 1, u_next, th_next, p_next)
            u_prev, u = u, u_next
            th_prev, th = th, th_next
            p_prev, p = p, p_next
            f_prev, f_cur = f_cur, f_next
            notify(n + 1, u, th, p)
        return u, th, p
