"""Error norms against exact solutions, their accumulation, and EOC rates.

Seven norms are tracked per run: L2 and H1-seminorm errors of the
deflection and the broken-norm error of its level averages, L2 errors of
temperature and potential/pressure, and time-integrated gradient errors
of their level averages:

    max_n ||u^n - U^n||,  max_n ||grad(u^n - U^n)||,
    max_n ||u^{n+1/2} - U^{n+1/2}||_h,
    max_n ||th^n - TH^n||,  (dt sum_n ||grad(th - TH)^{n+1/2}||^2)^(1/2),
    and the same two for p.

Exact half-level values are averages of the exact solution at the two
neighbouring time levels, matching the discrete level averages.  Error
integrals use degree-8 triangle quadrature and 4-point edge Gauss.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .fem import FeSpace, TriGeometry, edge_quadrature, eval_p1_basis, eval_p2_basis, tri_quadrature
from .mms import ManufacturedCase
from .stepper import DiscreteSystem, TimeGrid

__all__ = [
    "accumulate",
    "eoc",
    "ErrorIntegrator",
    "ErrorAccumulator",
    "ErrorReport",
    "ERROR_COLUMNS",
]

ERROR_COLUMNS = (
    "e_u_linf",
    "grad_e_u_linf",
    "e_u_hnorm",
    "e_theta_linf",
    "grad_e_theta_l2",
    "e_p_linf",
    "grad_e_p_l2",
)


def accumulate(mode: str, series, dt: float = None) -> float:
    """Collapse a per-step series of norm values into one number.

    Modes: ``linf-at-levels`` and ``linf-at-half-levels`` take the max;
    ``l2-of-half-levels`` returns sqrt(dt * sum of squares).
    """
    values = np.asarray(list(series), dtype=float)
    if values.size == 0:
        raise ValueError("empty norm series")
    if mode in ("linf-at-levels", "linf-at-half-levels"):
        return float(values.max())
    if mode == "l2-of-half-levels":
        if dt is None:
            raise ValueError("l2 accumulation requires dt")
        return float(math.sqrt(dt * float((values**2).sum())))
    raise ValueError(f"unknown accumulation mode {mode!r}")


def eoc(h_coarse: float, e_coarse: float, h_fine: float, e_fine: float) -> float:
    """Experimental order of convergence log(e2/e1)/log(h2/h1)."""
    if e_coarse <= 0.0 or e_fine <= 0.0:
        return float("nan")
    if not h_fine < h_coarse:
        raise ValueError("rates need h_fine < h_coarse")
    return math.log(e_fine / e_coarse) / math.log(h_fine / h_coarse)


class ErrorIntegrator:
    """Precomputed quadrature data for repeated error evaluation on one mesh."""

    def __init__(
        self,
        V: FeSpace,
        W: FeSpace,
        sigma_ip: float,
        degree: int = 8,
        edge_points: int = 4,
        exclude_radius: float = 0.0,
    ):
        self.V = V
        self.W = W
        self.sigma_ip = sigma_ip
        mesh = V.mesh
        geo = TriGeometry(mesh)
        self.geo = geo
        rule = tri_quadrature(degree)
        self.wq = rule.weights
        pq = geo.physical_points(rule.points)  # (T, nq, 2)
        self.xq = pq[..., 0]
        self.yq = pq[..., 1]
        self.scale = 2.0 * geo.area  # multiplies the reference weights

        v2, g2, h2 = eval_p2_basis(rule.points)
        self.p2_vals = v2  # (nq, 6)
        self.p2_grads = geo.map_gradients(g2)  # (T, nq, 6, 2)
        self.p2_hess = geo.map_hessians(h2)  # (T, 6, 2, 2), constant
        v1, g1 = eval_p1_basis(rule.points)
        self.p1_vals = v1  # (nq, 3)
        self.p1_grads = geo.map_gradients(g1)  # (T, nq, 3, 2)

        if exclude_radius > 0.0:
            self.mask = (np.hypot(self.xq, self.yq) >= exclude_radius).astype(float)
        else:
            self.mask = None

        # Edge data for the broken norm of the deflection error.
        erule = edge_quadrature(edge_points)
        self.ew = erule.weights
        va = mesh.vertices[mesh.edge_vertices[:, 0]]
        vb = mesh.vertices[mesh.edge_vertices[:, 1]]
        self.edge_pts = va[:, None, :] + erule.points[:, None] * (vb - va)[:, None, :]
        self.edge_normal = mesh.edge_normal
        self.interior = np.flatnonzero(~mesh.edge_boundary)
        self.boundary = np.flatnonzero(mesh.edge_boundary)
        _, gc_ref, _ = eval_p2_basis(np.array([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]))
        self.grad_c = geo.map_gradients(gc_ref)  # (T, 6, 2)
        self.centroid = geo.centroid
        self.edge_tris = mesh.edge_tris
        self.cell_dofs_V = V.cell_dofs
        self.cell_dofs_W = W.cell_dofs

    # -- discrete field evaluations -------------------------------------

    def p2_at_quad(self, coeffs_full: np.ndarray) -> np.ndarray:
        return np.einsum("ti,qi->tq", coeffs_full[self.cell_dofs_V], self.p2_vals)

    def p2_grad_at_quad(self, coeffs_full: np.ndarray) -> np.ndarray:
        return np.einsum("ti,tqia->tqa", coeffs_full[self.cell_dofs_V], self.p2_grads)

    def p2_hess_const(self, coeffs_full: np.ndarray) -> np.ndarray:
        return np.einsum("ti,tiab->tab", coeffs_full[self.cell_dofs_V], self.p2_hess)

    def p1_at_quad(self, coeffs_full: np.ndarray) -> np.ndarray:
        return np.einsum("ti,qi->tq", coeffs_full[self.cell_dofs_W], self.p1_vals)

    def p1_grad_at_quad(self, coeffs_full: np.ndarray) -> np.ndarray:
        return np.einsum("ti,tqia->tqa", coeffs_full[self.cell_dofs_W], self.p1_grads)

    def _volume_l2(self, diff: np.ndarray) -> float:
        if self.mask is not None:
            diff = diff * self.mask
        return float(np.einsum("q,tq,tq,t->", self.wq, diff, diff, self.scale))

    def _volume_l2_vec(self, dx: np.ndarray, dy: np.ndarray) -> float:
        return self._volume_l2(dx) + self._volume_l2(dy)

    def l2_error(self, space: str, coeffs_full: np.ndarray, exact_vals: np.ndarray) -> float:
        """L2 norm of (exact - discrete); exact values sampled at the quad grid."""
        disc = self.p2_at_quad(coeffs_full) if space == "P2" else self.p1_at_quad(coeffs_full)
        return math.sqrt(self._volume_l2(exact_vals - disc))

    def h1_semi_error(self, space: str, coeffs_full: np.ndarray, exact_gx, exact_gy) -> float:
        g = self.p2_grad_at_quad(coeffs_full) if space == "P2" else self.p1_grad_at_quad(coeffs_full)
        return math.sqrt(self._volume_l2_vec(exact_gx - g[..., 0], exact_gy - g[..., 1]))

    # -- broken norm of the deflection error -----------------------------

    def _edge_dn(self, coeffs_full: np.ndarray, edges: np.ndarray, side: int) -> np.ndarray:
        t = self.edge_tris[edges, side]
        d = self.edge_pts[edges] - self.centroid[t][:, None, :]
        grads = self.grad_c[t][:, None, :, :] + np.einsum(
            "eiab,eqb->eqia", self.p2_hess[t], d
        )
        gu = np.einsum("ei,eqia->eqa", coeffs_full[self.cell_dofs_V[t]], grads)
        return np.einsum("eqa,ea->eq", gu, self.edge_normal[edges])

    def h_norm_error(
        self,
        coeffs_full: np.ndarray,
        exact_hess: tuple[np.ndarray, np.ndarray, np.ndarray] | None,
        exact_bnd_dn: np.ndarray | None,
    ) -> float:
        """Broken-norm error; exact Hessian sampled at the volume quad grid,
        exact normal derivative at the boundary-edge quad points (None for
        a pure discrete field)."""
        hd = self.p2_hess_const(coeffs_full)  # (T, 2, 2)
        if exact_hess is None:
            vol = float(np.einsum("tab,tab,t->", hd, hd, 0.5 * self.scale))
        else:
            exx, exy, eyy = exact_hess
            dxx = exx - hd[:, None, 0, 0]
            dxy = exy - hd[:, None, 0, 1]
            dyy = eyy - hd[:, None, 1, 1]
            if self.mask is not None:
                dxx = dxx * self.mask
                dxy = dxy * self.mask
                dyy = dyy * self.mask
            sq = dxx**2 + 2.0 * dxy**2 + dyy**2
            vol = float(np.einsum("q,tq,t->", self.wq, sq, self.scale))

        edge = 0.0
        if self.interior.size:
            jump = self._edge_dn(coeffs_full, self.interior, 0) - self._edge_dn(
                coeffs_full, self.interior, 1
            )
            edge += self.sigma_ip * float(np.einsum("q,eq,eq->", self.ew, jump, jump))
        if self.boundary.size:
            jump = -self._edge_dn(coeffs_full, self.boundary, 0)
            if exact_bnd_dn is not None:
                jump = jump + exact_bnd_dn
            edge += self.sigma_ip * float(np.einsum("q,eq,eq->", self.ew, jump, jump))
        return math.sqrt(vol + edge)

    def boundary_edge_points(self) -> tuple[np.ndarray, np.ndarray]:
        p = self.edge_pts[self.boundary]
        return p[..., 0], p[..., 1]


@dataclass
class _LevelCache:
    u: np.ndarray = None
    ugx: np.ndarray = None
    ugy: np.ndarray = None
    hxx: np.ndarray = None
    hxy: np.ndarray = None
    hyy: np.ndarray = None
    th: np.ndarray = None
    tgx: np.ndarray = None
    tgy: np.ndarray = None
    p: np.ndarray = None
    pgx: np.ndarray = None
    pgy: np.ndarray = None
    bnd_dn: np.ndarray = None
    U: np.ndarray = None
    TH: np.ndarray = None
    P: np.ndarray = None


class ErrorAccumulator:
    """Observe a transient run and accumulate the seven error norms."""

    def __init__(self, system: DiscreteSystem, case: ManufacturedCase, grid: TimeGrid):
        self.case = case
        self.grid = grid
        self.system = system
        self.integ = ErrorIntegrator(
            system.V, system.W, system.sigma_ip, exclude_radius=case.exclude_radius
        )
        self.e_u: list[float] = []
        self.ge_u: list[float] = []
        self.e_u_h: list[float] = []
        self.e_th: list[float] = []
        self.ge_th: list[float] = []
        self.e_p: list[float] = []
        self.ge_p: list[float] = []
        self._prev: _LevelCache | None = None

    def _sample_exact(self, t: float) -> _LevelCache:
        integ = self.integ
        case = self.case
        x, y = integ.xq, integ.yq
        lev = _LevelCache()
        lev.u = case.u(t, x, y)
        lev.ugx, lev.ugy = case.grad_u(t, x, y)
        lev.hxx, lev.hxy, lev.hyy = case.hess_u(t, x, y)
        lev.th = case.theta(t, x, y)
        lev.tgx, lev.tgy = case.grad_theta(t, x, y)
        lev.p = case.p(t, x, y)
        lev.pgx, lev.pgy = case.grad_p(t, x, y)
        bx, by = integ.boundary_edge_points()
        gx, gy = case.grad_u(t, bx.ravel(), by.ravel())
        nrm = integ.edge_normal[integ.boundary]
        lev.bnd_dn = (gx.reshape(bx.shape) * nrm[:, None, 0] + gy.reshape(bx.shape) * nrm[:, None, 1])
        return lev

    def observe(self, n: int, t: float, U: np.ndarray, TH: np.ndarray, P: np.ndarray) -> None:
        integ = self.integ
        sysm = self.system
        Uf = sysm.full_u(U)
        THf = sysm.full_w(TH)
        Pf = sysm.full_w(P)
        lev = self._sample_exact(t)
        lev.U, lev.TH, lev.P = Uf, THf, Pf

        self.e_u.append(integ.l2_error("P2", Uf, lev.u))
        self.ge_u.append(integ.h1_semi_error("P2", Uf, lev.ugx, lev.ugy))
        self.e_th.append(integ.l2_error("P1", THf, lev.th))
        self.e_p.append(integ.l2_error("P1", Pf, lev.p))

        prev = self._prev
        if prev is not None:
            U_half = 0.5 * (prev.U + Uf)
            self.e_u_h.append(
                integ.h_norm_error(
                    U_half,
                    (
                        0.5 * (prev.hxx + lev.hxx),
                        0.5 * (prev.hxy + lev.hxy),
                        0.5 * (prev.hyy + lev.hyy),
                    ),
                    0.5 * (prev.bnd_dn + lev.bnd_dn),
                )
            )
            TH_half = 0.5 * (prev.TH + THf)
            P_half = 0.5 * (prev.P + Pf)
            self.ge_th.append(
                integ.h1_semi_error(
                    "P1", TH_half, 0.5 * (prev.tgx + lev.tgx), 0.5 * (prev.tgy + lev.tgy)
                )
            )
            self.ge_p.append(
                integ.h1_semi_error(
                    "P1", P_half, 0.5 * (prev.pgx + lev.pgx), 0.5 * (prev.pgy + lev.pgy)
                )
            )
        self._prev = lev

    def totals(self) -> dict[str, float]:
        dt = self.grid.dt
        return {
            "e_u_linf": accumulate("linf-at-levels", self.e_u),
            "grad_e_u_linf": accumulate("linf-at-levels", self.ge_u),
            "e_u_hnorm": accumulate("linf-at-half-levels", self.e_u_h),
            "e_theta_linf": accumulate("linf-at-levels", self.e_th),
            "grad_e_theta_l2": accumulate("l2-of-half-levels", self.ge_th, dt),
            "e_p_linf": accumulate("linf-at-levels", self.e_p),
            "grad_e_p_l2": accumulate("l2-of-half-levels", self.ge_p, dt),
        }


@dataclass
class ErrorReport:
    """Per-refinement errors plus EOC rates, serializable to CSV."""

    rows: list[dict] = field(default_factory=list)

    def add_level(self, h: float, dt: float, errors: dict[str, float]) -> None:
        row = {"h": h, "dt": dt}
        row.update({k: errors[k] for k in ERROR_COLUMNS})
        self.rows.append(row)

    def rates(self) -> list[dict]:
        """Rates between adjacent levels; index i holds the pair (i-1, i)."""
        out = [dict.fromkeys(ERROR_COLUMNS) for _ in self.rows]
        for i in range(1, len(self.rows)):
            prev, cur = self.rows[i - 1], self.rows[i]
            for key in ERROR_COLUMNS:
                out[i][key] = eoc(prev["h"], prev[key], cur["h"], cur[key])
        return out

    def write_csv(self, path) -> None:
        rates = self.rates()
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["h", "dt"]
            for key in ERROR_COLUMNS:
                header += [key, "rate"]
            writer.writerow(header)
            for i, row in enumerate(self.rows):
                out = [f"{row['h']:.6e}", f"{row['dt']:.6e}"]
                for key in ERROR_COLUMNS:
                    out.append(f"{row[key]:.6e}")
                    r = rates[i][key]
                    out.append("" if r is None or math.isnan(r) else f"{r:.4f}")
                writer.writerow(out)

    def format_table(self) -> str:
        rates = self.rates()
        lines = []
        header = f"{'h':>10} {'dt':>10}"
        for key in ERROR_COLUMNS:
            header += f" {key:>15} {'rate':>7}"
        lines.append(header)
        for i, row in enumerate(self.rows):
            line = f"{row['h']:10.4e} {row['dt']:10.4e}"
            for key in ERROR_COLUMNS:
                r = rates[i][key]
                rate = "   --- " if r is None or math.isnan(r) else f"{r:7.4f}"
                line += f" {row[key]:15.6e} {rate}"
            lines.append(line)
        return "\n".join(lines)
