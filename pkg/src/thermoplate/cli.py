"""Experiment drivers, configuration, and CSV emission.

Three subcommands reproduce the studies end to end:

* ``convergence`` -- manufactured-solution sweeps on the unit square
  (smooth fields, refined time step dt = 2^(-3/2) h) or the L-shaped
  domain (singular fields, fixed dt = 1/4), writing the error/rate table.
* ``example1`` -- physical plate runs (copper TED or Berea-sandstone TPE)
  from zero initial data under the thickness-moment loads, writing the
  cell-averaged time series.
* ``energy-check`` -- zero-load stability run plus the decoupled-Newmark
  conservation check.

Configuration is a strict INI file (unknown sections or keys are
rejected); every run writes a manifest of the resolved values next to
its outputs so results are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import configparser
import sys
import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .fem import eval_p1_basis, eval_p2_basis, tri_quadrature
from .mesh import TriMesh, build_lshape, build_unit_square
from .model import (
    BEREA_SANDSTONE,
    COPPER,
    Material3D,
    ModelCoefficients,
    default_gamma0,
    ted_coefficients,
    tpe_coefficients,
    unit_coefficients,
)
from .mms import example1_loads, lshape_case, smooth_case, validate_case
from .norms import ErrorAccumulator, ErrorReport
from .stepper import DiscreteSystem, EnergyTracker, InitialState, Stepper, TimeGrid, project_initial

__all__ = ["RunConfig", "load_config", "run_convergence", "run_example1", "run_energy_check", "main"]

EXPERIMENTS = ("smooth", "lshape", "example1-ted", "example1-tpe", "custom")


class ConfigError(ValueError):
    """Malformed or unknown configuration content."""


@dataclass(frozen=True)
class RunConfig:
    experiment: str = "smooth"
    gamma: float = -1.0
    levels: tuple[int, ...] = (4, 8, 16, 32)
    extended_levels: tuple[int, ...] = (64, 128)
    T: float = 1.0
    dt_policy: str = "refined"  # "refined": dt = 2^(-3/2) h; "fixed": dt from `dt`
    dt: float = 0.25
    sigma_ip: float = 10.0
    solver: str = "direct"
    out_dir: str = "out"
    snapshots: int = 0
    extended: bool = False
    # example1 settings
    material: str = "copper"  # "copper", "berea", or "custom"
    thickness: float = 0.5
    mesh_n: int = 32
    cell: tuple[float, float, float, float] = (5.0 / 64.0, 6.0 / 64.0, 5.0 / 64.0, 6.0 / 64.0)
    material_values: dict = field(default_factory=dict)
    coefficient_values: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.gamma not in (-1.0, 1.0) and self.experiment in ("smooth", "lshape"):
            raise ConfigError("gamma must be +1 or -1 for the manufactured studies")
        if not self.levels or any(n <= 0 for n in self.levels):
            raise ConfigError("levels must be positive integers")
        if list(self.levels) != sorted(set(self.levels)):
            raise ConfigError(f"levels must be strictly increasing, got {self.levels}")
        if self.T <= 0.0:
            raise ConfigError("final time T must be positive")
        if self.dt_policy not in ("refined", "fixed"):
            raise ConfigError(f"unknown dt policy {self.dt_policy!r}")
        if self.dt <= 0.0:
            raise ConfigError("dt must be positive")
        if self.sigma_ip <= 0.0:
            raise ConfigError("sigma_ip must be positive")
        if self.solver not in ("direct", "iterative"):
            raise ConfigError(f"unknown solver {self.solver!r}")
        if self.snapshots < 0:
            raise ConfigError("snapshot cadence must be >= 0")
        if self.material not in ("copper", "berea", "custom"):
            raise ConfigError(f"unknown material {self.material!r}")
        if self.thickness <= 0.0:
            raise ConfigError("thickness must be positive")
        if self.mesh_n < 1:
            raise ConfigError("mesh_n must be >= 1")
        x0, x1, y0, y1 = self.cell
        if not (0.0 <= x0 < x1 <= 1.0 and 0.0 <= y0 < y1 <= 1.0):
            raise ConfigError("observation cell must be a nonempty rectangle inside the domain")
        return self


_SCHEMA = {
    "run": {
        "experiment": str,
        "gamma": float,
        "levels": "ints",
        "extended_levels": "ints",
        "T": float,
        "dt_policy": str,
        "dt": float,
        "sigma_ip": float,
        "solver": str,
        "out_dir": str,
        "snapshots": int,
    },
    "example1": {
        "material": str,
        "thickness": float,
        "mesh_n": int,
        "cell": "floats4",
        "T": float,
        "dt": float,
    },
    "material": "free-floats",
    "coefficients": "free-floats",
}

_MATERIAL_KEYS = {f.name for f in fields(Material3D)}
_COEFF_KEYS = {f.name for f in fields(ModelCoefficients)}


def load_config(path) -> RunConfig:
    """Parse and validate a strict INI config; unknown keys are errors."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    cfg = RunConfig()
    values = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        schema = _SCHEMA[section]
        for key, raw in parser.items(section):
            if schema == "free-floats":
                allowed = _MATERIAL_KEYS if section == "material" else _COEFF_KEYS
                if key not in allowed:
                    raise ConfigError(f"unknown key {key!r} in section [{section}]")
                target = "material_values" if section == "material" else "coefficient_values"
                values.setdefault(target, dict(getattr(cfg, target)))[key] = float(raw)
                continue
            if key not in schema:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            kind = schema[key]
            try:
                if kind is str:
                    values[key] = raw.strip()
                elif kind is float:
                    values[key] = float(raw)
                elif kind is int:
                    values[key] = int(raw)
                elif kind == "ints":
                    values[key] = tuple(int(v) for v in raw.split())
                elif kind == "floats4":
                    parts = tuple(float(v) for v in raw.split())
                    if len(parts) != 4:
                        raise ValueError("need 4 numbers (x0 x1 y0 y1)")
                    values[key] = parts
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r} in [{section}]: {exc}") from exc
    return replace(cfg, **values).validate()


def _coeffs_for(config: RunConfig) -> ModelCoefficients:
    if config.experiment == "smooth" or config.experiment == "lshape":
        return unit_coefficients(gamma=config.gamma)
    if config.experiment == "example1-ted":
        mat = COPPER if config.material != "custom" else Material3D(**config.material_values)
        return ted_coefficients(mat, config.thickness)
    if config.experiment == "example1-tpe":
        mat = BEREA_SANDSTONE if config.material != "custom" else Material3D(**config.material_values)
        return tpe_coefficients(mat, config.thickness)
    if not config.coefficient_values:
        raise ConfigError("custom experiment requires a [coefficients] section")
    return ModelCoefficients(**config.coefficient_values).validate()


def _write_manifest(config: RunConfig, out_dir: Path, extra: dict) -> None:
    lines = [f"thermoplate {__version__}"]
    for f in fields(config):
        lines.append(f"{f.name} = {getattr(config, f.name)!r}")
    for k, v in extra.items():
        lines.append(f"{k} = {v!r}")
    (out_dir / "run-manifest.txt").write_text("\n".join(lines) + "\n")


def _snapshot(space, vec_full: np.ndarray, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("x,y,value\n")
        for (x, y), v in zip(space.dof_coords, vec_full):
            fh.write(f"{x:.10e},{y:.10e},{v:.10e}\n")


def run_convergence(config: RunConfig, log=print) -> ErrorReport:
    """Execute one manufactured-solution sweep and write the norms CSV."""
    if config.experiment not in ("smooth", "lshape"):
        raise ConfigError("convergence runs need the smooth or lshape experiment")
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    case = smooth_case(config.gamma) if config.experiment == "smooth" else lshape_case(config.gamma)
    resid = validate_case(case)
    log(f"manufactured-case residual check: {resid:.2e}")

    levels = list(config.levels)
    if config.extended:
        levels += [n for n in config.extended_levels if n > levels[-1]]
    report = ErrorReport()
    for n in levels:
        t0 = time.time()
        mesh = build_unit_square(n) if config.experiment == "smooth" else build_lshape(n)
        if config.dt_policy == "refined":
            dt = 2.0 ** (-1.5) * mesh.h
            N = max(2, round(config.T / dt))
        else:
            N = max(2, round(config.T / config.dt))
        grid = TimeGrid(T=config.T, N=N)
        system = DiscreteSystem(mesh, case.coeffs, sigma_ip=config.sigma_ip)
        stepper = Stepper(system, grid, solver=config.solver)
        init = project_initial(case, system)
        acc = ErrorAccumulator(system, case, grid)

        observers = [acc.observe]
        if config.snapshots > 0:
            snap_dir = out_dir / f"snapshots-n{n}"
            snap_dir.mkdir(exist_ok=True)

            def snap(step, t, U, TH, P, system=system, snap_dir=snap_dir):
                if step % config.snapshots == 0:
                    _snapshot(system.V, system.full_u(U), snap_dir / f"u-{step:05d}.csv")
                    _snapshot(system.W, system.full_w(TH), snap_dir / f"theta-{step:05d}.csv")
                    _snapshot(system.W, system.full_w(P), snap_dir / f"p-{step:05d}.csv")

            observers.append(snap)

        def on_state(step, t, U, TH, P):
            for obs in observers:
                obs(step, t, U, TH, P)

        stepper.run(init, loads=(case.f, case.phi, case.g), on_state=on_state)
        report.add_level(mesh.h, grid.dt, acc.totals())
        log(f"level n={n}: h={mesh.h:.4f} dt={grid.dt:.6f} N={N} ({time.time() - t0:.1f}s)")

    csv_path = out_dir / f"convergence-{config.experiment}-gamma{config.gamma:+.0f}.csv"
    report.write_csv(csv_path)
    _write_manifest(config, out_dir, {"levels_run": levels, "csv": str(csv_path)})
    log(report.format_table())
    log(f"wrote {csv_path}")
    return report


class CellAverager:
    """Exact integration of discrete fields over an axis-aligned cell.

    The cell rectangle is clipped against every triangle; each clipped
    polygon is fan-triangulated and integrated with a degree-2 rule
    (exact for the P2 fields).
    """

    def __init__(self, mesh: TriMesh, cell: tuple[float, float, float, float]):
        self.mesh = mesh
        x0, x1, y0, y1 = cell
        self.area = (x1 - x0) * (y1 - y0)
        rule = tri_quadrature(2)
        self.bary = rule.points
        self.weights = rule.weights
        pieces = []  # (triangle index, sub-vertices (k,3,2))
        for t in range(mesh.n_triangles):
            tri = mesh.vertices[mesh.triangles[t]]
            poly = _clip_to_rect(tri, x0, x1, y0, y1)
            if len(poly) < 3:
                continue
            for k in range(1, len(poly) - 1):
                pieces.append((t, np.array([poly[0], poly[k], poly[k + 1]])))
        if not pieces:
            raise ValueError("observation cell does not intersect the mesh")
        self.tri_idx = np.array([p[0] for p in pieces])
        subs = np.stack([p[1] for p in pieces])  # (k, 3, 2)
        a = subs[:, 1] - subs[:, 0]
        b = subs[:, 2] - subs[:, 0]
        self.sub_area = 0.5 * np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
        # quadrature points of each sub-triangle in physical coords
        pts = np.einsum("qi,kia->kqa", self.bary, subs)
        # barycentric coordinates w.r.t. the parent mesh triangle
        v = mesh.vertices[mesh.triangles[self.tri_idx]]  # (k, 3, 2)
        J = np.stack([v[:, 1] - v[:, 0], v[:, 2] - v[:, 0]], axis=-1)
        det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
        inv = np.empty_like(J)
        inv[:, 0, 0] = J[:, 1, 1]
        inv[:, 0, 1] = -J[:, 0, 1]
        inv[:, 1, 0] = -J[:, 1, 0]
        inv[:, 1, 1] = J[:, 0, 0]
        inv = inv / det[:, None, None]
        ref = np.einsum("kab,kqb->kqa", inv, pts - v[:, None, 0, :])
        lam = np.empty(ref.shape[:2] + (3,))
        lam[..., 1] = ref[..., 0]
        lam[..., 2] = ref[..., 1]
        lam[..., 0] = 1.0 - ref[..., 0] - ref[..., 1]
        self.p2_vals, _, _ = eval_p2_basis(lam)  # (k, q, 6)
        self.p1_vals, _ = eval_p1_basis(lam)

    def average(self, space_kind: str, cell_dofs: np.ndarray, coeffs_full: np.ndarray) -> float:
        vals = self.p2_vals if space_kind == "P2" else self.p1_vals
        local = coeffs_full[cell_dofs[self.tri_idx]]  # (k, nb)
        fq = np.einsum("ki,kqi->kq", local, vals)
        integral = float(np.einsum("q,kq,k->", 2.0 * self.weights, fq, self.sub_area))
        return integral / self.area


def _clip_to_rect(poly: np.ndarray, x0: float, x1: float, y0: float, y1: float) -> list:
    """Sutherland-Hodgman clipping of a polygon against an axis rectangle."""
    def clip(points, inside, intersect):
        out = []
        m = len(points)
        for i in range(m):
            cur, nxt = points[i], points[(i + 1) % m]
            cin, nin = inside(cur), inside(nxt)
            if cin:
                out.append(cur)
                if not nin:
                    out.append(intersect(cur, nxt))
            elif nin:
                out.append(intersect(cur, nxt))
        return out

    def x_cut(c, n, x):
        s = (x - c[0]) / (n[0] - c[0])
        return np.array([x, c[1] + s * (n[1] - c[1])])

    def y_cut(c, n, y):
        s = (y - c[1]) / (n[1] - c[1])
        return np.array([c[0] + s * (n[0] - c[0]), y])

    pts = [np.asarray(p, dtype=float) for p in poly]
    pts = clip(pts, lambda p: p[0] >= x0, lambda c, n: x_cut(c, n, x0))
    if pts:
        pts = clip(pts, lambda p: p[0] <= x1, lambda c, n: x_cut(c, n, x1))
    if pts:
        pts = clip(pts, lambda p: p[1] >= y0, lambda c, n: y_cut(c, n, y0))
    if pts:
        pts = clip(pts, lambda p: p[1] <= y1, lambda c, n: y_cut(c, n, y1))
    return pts


def run_example1(config: RunConfig, log=print):
    """Physical plate run; returns (times, U_avg, TH_avg, P_avg) and writes CSV."""
    if config.experiment not in ("example1-ted", "example1-tpe"):
        raise ConfigError("example1 runs need the example1-ted or example1-tpe experiment")
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    kind = "TED" if config.experiment.endswith("ted") else "TPE"
    coeffs = _coeffs_for(config)
    log(f"{kind} coefficients: {coeffs}")
    # paper setup: TED T=10, dt=1/8; TPE T=100, dt=10/8
    T = config.T
    dt = config.dt
    N = max(2, round(T / dt))
    grid = TimeGrid(T=T, N=N)
    mesh = build_unit_square(config.mesh_n)
    system = DiscreteSystem(mesh, coeffs, sigma_ip=config.sigma_ip)
    stepper = Stepper(system, grid, solver=config.solver)
    f, phi, g = example1_loads(kind, config.thickness)
    init = InitialState(
        u0=np.zeros(system.nV), th0=np.zeros(system.nW), p0=np.zeros(system.nW),
        v0=np.zeros(system.nV),
    )
    averager = CellAverager(mesh, config.cell)
    times, ua, tha, pa = [], [], [], []

    def observe(n, t, U, TH, P):
        times.append(t)
        ua.append(averager.average("P2", system.V.cell_dofs, system.full_u(U)))
        tha.append(averager.average("P1", system.W.cell_dofs, system.full_w(TH)))
        pa.append(averager.average("P1", system.W.cell_dofs, system.full_w(P)))

    t0 = time.time()
    stepper.run(init, loads=(f, phi, g), on_state=observe)
    log(f"{kind} run: N={N} steps, {time.time() - t0:.1f}s")

    csv_path = out_dir / f"example1-{kind.lower()}-series.csv"
    with open(csv_path, "w", newline="") as fh:
        fh.write("t,U_2D,Theta_2D,P_2D\n")
        for row in zip(times, ua, tha, pa):
            fh.write(",".join(f"{v:.10e}" for v in row) + "\n")
    _write_manifest(config, out_dir, {"kind": kind, "N": N, "csv": str(csv_path)})
    log(f"wrote {csv_path}")
    return np.array(times), np.array(ua), np.array(tha), np.array(pa)


def run_energy_check(config: RunConfig, log=print) -> dict:
    """Zero-load stability run and decoupled-conservation check."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(12345)

    mesh = build_unit_square(16)
    coeffs = unit_coefficients(gamma=config.gamma if config.gamma in (-1.0, 1.0) else -1.0)
    system = DiscreteSystem(mesh, coeffs, sigma_ip=config.sigma_ip)
    grid = TimeGrid(T=2.0, N=200)
    stepper = Stepper(system, grid, solver=config.solver)
    init = InitialState(
        u0=rng.uniform(-1.0, 1.0, system.nV),
        th0=rng.uniform(-1.0, 1.0, system.nW),
        p0=rng.uniform(-1.0, 1.0, system.nW),
        v0=rng.uniform(-1.0, 1.0, system.nV),
    )
    tracker = EnergyTracker(system, grid.dt, gamma0=default_gamma0(coeffs))
    stepper.run(init, loads=None, energy=tracker)
    values = np.array(tracker.values)
    ratio = float(values.max() / values[0])
    log(f"zero-load energy: E(m=1)={values[0]:.6e} max={values.max():.6e} ratio={ratio:.3f}")

    # decoupled Newmark core: alpha = beta = 0, no loads -> conserved energy
    dec = replace(coeffs, alpha=0.0, beta=0.0)
    sys2 = DiscreteSystem(mesh, dec, sigma_ip=config.sigma_ip)
    grid2 = TimeGrid(T=1.0, N=100)
    stepper2 = Stepper(sys2, grid2, solver=config.solver)
    u0 = rng.uniform(-1.0, 1.0, sys2.nV)
    v0 = rng.uniform(-1.0, 1.0, sys2.nV)
    init2 = InitialState(u0=u0, th0=np.zeros(sys2.nW), p0=np.zeros(sys2.nW), v0=v0)
    energies = []
    prev = {}

    def observe(n, t, U, TH, P):
        if "u" in prev:
            du = (U - prev["u"]) / grid2.dt
            uh = 0.5 * (U + prev["u"])
            e = (
                float(du @ (sys2.M @ du))
                + dec.a0 * float(du @ (sys2.K @ du))
                + dec.d0 * float(uh @ (sys2.A @ uh))
            )
            energies.append(e)
        prev["u"] = U.copy()

    stepper2.run(init2, loads=None, on_state=observe)
    energies = np.array(energies)
    drift = float(np.abs(energies - energies[0]).max() / energies[0])
    log(f"decoupled Newmark energy drift over {energies.size} half-levels: {drift:.3e}")
    _write_manifest(config, out_dir, {"energy_ratio": ratio, "newmark_drift": drift})
    return {"energy_ratio": ratio, "newmark_drift": drift, "energies": values}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="thermoplate",
        description="Coupled plate thermoelasticity solver and verification harness",
    )
    parser.add_argument("--version", action="version", version=f"thermoplate {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=str, default=None, help="INI config file")
        p.add_argument("--gamma", type=str, choices=("+1", "-1"), default=None)
        p.add_argument("--extended", action="store_true", help="include the finest levels")
        p.add_argument("--snapshots", type=int, default=None, metavar="K", help="write fields every K steps")
        p.add_argument("--out", type=str, default=None, metavar="DIR")

    p_conv = sub.add_parser("convergence", help="manufactured-solution convergence study")
    common(p_conv)
    p_ex1 = sub.add_parser("example1", help="physical TED/TPE plate run with cell averages")
    common(p_ex1)
    p_en = sub.add_parser("energy-check", help="stability and conservation checks")
    common(p_en)

    args = parser.parse_args(argv)
    config = load_config(args.config) if args.config else RunConfig()
    if args.command == "example1" and config.experiment not in ("example1-ted", "example1-tpe"):
        config = replace(config, experiment="example1-ted", T=10.0, dt=0.125)
    overrides = {}
    if args.gamma is not None:
        overrides["gamma"] = float(args.gamma)
    if args.extended:
        overrides["extended"] = True
    if args.snapshots is not None:
        overrides["snapshots"] = args.snapshots
    if args.out is not None:
        overrides["out_dir"] = args.out
    if overrides:
        config = replace(config, **overrides).validate()

    if args.command == "convergence":
        run_convergence(config)
    elif args.command == "example1":
        run_example1(config)
    else:
        run_energy_check(config)
    return 0


if __name__ == "__main__":
    sys.exit(main())
