"""Reference elements, quadrature, and degree-of-freedom layouts.

Two Lagrange spaces are supported: P2 (deflection) and P1 (temperature and
chemical potential / pore pressure), both with homogeneous Dirichlet values
imposed strongly through a boundary mask.  P2 degrees of freedom sit at
vertices and edge midpoints; the midpoint of global edge ``e`` gets index
``n_vertices + e``, so DOF numbering is shared consistently between
neighbouring triangles.

Reference triangle: vertices (0,0), (1,0), (0,1); barycentric coordinates
``lam0 = 1-x-y, lam1 = x, lam2 = y``.  Local P2 node order is the three
vertices followed by the midpoints opposite them (node 3 = midpoint of
edge (1,2), etc.), matching the edge order of ``TriMesh.tri_edges``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .mesh import TriMesh

__all__ = [
    "FeSpace",
    "QuadRule",
    "eval_p1_basis",
    "eval_p2_basis",
    "tri_quadrature",
    "edge_quadrature",
    "build_space",
    "TriGeometry",
]


@dataclass(frozen=True)
class QuadRule:
    """Quadrature points and weights.

    Triangle rules store barycentric coordinates of shape (nq, 3) and
    weights summing to the reference-triangle measure 1/2.  Edge rules
    store 1D points on [0, 1] of shape (nq,) and weights summing to 1.
    """

    points: np.ndarray
    weights: np.ndarray
    degree: int

    @property
    def n_points(self) -> int:
        return self.weights.shape[0]


def _perm3(a: float) -> np.ndarray:
    b = 1.0 - 2.0 * a
    return np.array([[b, a, a], [a, b, a], [a, a, b]])


def _perm6(a: float, b: float) -> np.ndarray:
    c = 1.0 - a - b
    return np.array(
        [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
    )


def _dunavant(degree: int):
    if degree <= 2:
        return _perm3(1.0 / 6.0), np.full(3, 1.0 / 3.0)
    if degree <= 4:
        pts = np.vstack([_perm3(0.445948490915965), _perm3(0.091576213509771)])
        wts = np.concatenate([np.full(3, 0.223381589678011), np.full(3, 0.109951743655322)])
        return pts, wts
    if degree <= 5:
        pts = np.vstack(
            [
                np.array([[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]]),
                _perm3(0.470142064105115),
                _perm3(0.101286507323456),
            ]
        )
        wts = np.concatenate(
            [
                np.array([0.225]),
                np.full(3, 0.132394152788506),
                np.full(3, 0.125939180544827),
            ]
        )
        return pts, wts
    return None


def _conical(degree: int):
    """Conical-product Gauss rule, exact for polynomials of total degree."""
    k = degree // 2 + 1
    xg, wg = roots_legendre(k)  # on (-1, 1)
    xg = 0.5 * (xg + 1.0)
    wg = 0.5 * wg
    yj, wj = roots_jacobi(k, 1.0, 0.0)  # weight (1 - y) on (-1, 1)
    yj = 0.5 * (yj + 1.0)
    wj = 0.25 * wj  # jacobian of the map plus the (1-y) substitution scale
    pts = []
    wts = []
    for x, wx in zip(xg, wg):
        for y, wy in zip(yj, wj):
            xx = x * (1.0 - y)
            pts.append([1.0 - xx - y, xx, y])
            wts.append(wx * wy)
    pts = np.asarray(pts)
    wts = np.asarray(wts)
    return pts, wts / wts.sum()


def tri_quadrature(degree: int) -> QuadRule:
    """Triangle rule exact for polynomials of the given total degree.

    Low degrees use compact symmetric rules; degrees 6..20 fall back to a
    conical-product construction (Gauss-Legendre x Gauss-Jacobi).
    """
    if not 1 <= degree <= 20:
        raise ValueError(f"unsupported triangle quadrature degree {degree}")
    got = _dunavant(degree)
    if got is None:
        got = _conical(degree)
    pts, wts = got
    return QuadRule(points=pts, weights=0.5 * wts, degree=degree)


def edge_quadrature(points: int) -> QuadRule:
    """Gauss-Legendre rule on [0, 1], exact for degree <= 2*points - 1."""
    if points not in (2, 3, 4):
        raise ValueError(f"unsupported edge quadrature point count {points}")
    x, w = roots_legendre(points)
    return QuadRule(points=0.5 * (x + 1.0), weights=0.5 * w, degree=2 * points - 1)


_GRAD_LAM = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])  # d(lam_i)/d(x,y) on the reference triangle
_P2_EDGE_PAIRS = ((1, 2), (2, 0), (0, 1))


def eval_p2_basis(bary: np.ndarray):
    """P2 basis values, reference gradients, and reference Hessians.

    ``bary`` has shape (..., 3); returns arrays of shapes (..., 6),
    (..., 6, 2) and (6, 2, 2) -- the Hessians are constant.
    """
    lam = np.asarray(bary, dtype=float)
    vals = np.empty(lam.shape[:-1] + (6,))
    grads = np.empty(lam.shape[:-1] + (6, 2))
    for i in range(3):
        vals[..., i] = lam[..., i] * (2.0 * lam[..., i] - 1.0)
        grads[..., i, :] = (4.0 * lam[..., i] - 1.0)[..., None] * _GRAD_LAM[i]
    for k, (i, j) in enumerate(_P2_EDGE_PAIRS):
        vals[..., 3 + k] = 4.0 * lam[..., i] * lam[..., j]
        grads[..., 3 + k, :] = 4.0 * (
            lam[..., i][..., None] * _GRAD_LAM[j] + lam[..., j][..., None] * _GRAD_LAM[i]
        )
    hess = np.empty((6, 2, 2))
    for i in range(3):
        hess[i] = 4.0 * np.outer(_GRAD_LAM[i], _GRAD_LAM[i])
    for k, (i, j) in enumerate(_P2_EDGE_PAIRS):
        hess[3 + k] = 4.0 * (
            np.outer(_GRAD_LAM[i], _GRAD_LAM[j]) + np.outer(_GRAD_LAM[j], _GRAD_LAM[i])
        )
    return vals, grads, hess


def eval_p1_basis(bary: np.ndarray):
    """P1 basis values and (constant) reference gradients."""
    lam = np.asarray(bary, dtype=float)
    vals = lam.copy()
    grads = np.broadcast_to(_GRAD_LAM, lam.shape[:-1] + (3, 2)).copy()
    return vals, grads


@dataclass(frozen=True)
class FeSpace:
    """Global DOF layout of a Lagrange space on a triangle mesh."""

    kind: str  # "P1" or "P2"
    mesh: TriMesh
    dof_coords: np.ndarray
    cell_dofs: np.ndarray
    dirichlet_mask: np.ndarray

    @property
    def n_dofs(self) -> int:
        return self.dof_coords.shape[0]

    @property
    def n_free(self) -> int:
        return int((~self.dirichlet_mask).sum())

    @property
    def free_dofs(self) -> np.ndarray:
        return np.flatnonzero(~self.dirichlet_mask)

    @property
    def local_size(self) -> int:
        return 6 if self.kind == "P2" else 3

    def interpolate(self, func) -> np.ndarray:
        """Nodal interpolation of ``func(x, y)`` (vectorized callable)."""
        return np.asarray(func(self.dof_coords[:, 0], self.dof_coords[:, 1]), dtype=float)


def build_space(mesh: TriMesh, kind: str) -> FeSpace:
    """Construct the P1 or P2 space with its Dirichlet mask."""
    if kind == "P1":
        dof_coords = mesh.vertices.copy()
        cell_dofs = mesh.triangles.copy()
        mask = mesh.boundary_vertex_mask()
    elif kind == "P2":
        mid = 0.5 * (mesh.vertices[mesh.edge_vertices[:, 0]] + mesh.vertices[mesh.edge_vertices[:, 1]])
        dof_coords = np.vstack([mesh.vertices, mid])
        cell_dofs = np.hstack([mesh.triangles, mesh.n_vertices + mesh.tri_edges])
        mask = np.concatenate([mesh.boundary_vertex_mask(), mesh.edge_boundary])
    else:
        raise ValueError(f"unknown space kind {kind!r}")
    return FeSpace(kind=kind, mesh=mesh, dof_coords=dof_coords, cell_dofs=cell_dofs, dirichlet_mask=mask)


class TriGeometry:
    """Per-triangle affine maps and mapped basis data, precomputed in bulk.

    For each triangle K with vertices v0, v1, v2 the affine map is
    x = v0 + J (xi, eta).  Physical gradients are J^{-T} grad_ref and
    physical Hessians J^{-T} H_ref J^{-1}; for Lagrange bases on straight
    triangles, P2 Hessians are constant per triangle.
    """

    def __init__(self, mesh: TriMesh):
        v = mesh.vertices[mesh.triangles]  # (T, 3, 2)
        self.v0 = v[:, 0, :]
        J = np.stack([v[:, 1, :] - v[:, 0, :], v[:, 2, :] - v[:, 0, :]], axis=-1)  # (T, 2, 2)
        self.J = J
        det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
        self.det = det
        self.area = 0.5 * np.abs(det)
        inv = np.empty_like(J)
        inv[:, 0, 0] = J[:, 1, 1]
        inv[:, 0, 1] = -J[:, 0, 1]
        inv[:, 1, 0] = -J[:, 1, 0]
        inv[:, 1, 1] = J[:, 0, 0]
        self.Jinv = inv / det[:, None, None]
        self.centroid = v.mean(axis=1)

    def physical_points(self, bary: np.ndarray) -> np.ndarray:
        """Map reference points (nq, 3) to physical, result (T, nq, 2)."""
        ref = np.asarray(bary)[:, 1:]  # (nq, 2) = (xi, eta)
        return self.v0[:, None, :] + np.einsum("tij,qj->tqi", self.J, ref)

    def map_gradients(self, ref_grads: np.ndarray) -> np.ndarray:
        """Map reference gradients (..., nb, 2) to physical: (T, ..., nb, 2)."""
        return np.einsum("tji,...bj->t...bi", self.Jinv, ref_grads)

    def map_hessians(self, ref_hess: np.ndarray) -> np.ndarray:
        """Map constant reference Hessians (nb, 2, 2) to physical (T, nb, 2, 2)."""
        return np.einsum("tji,bjk,tkl->tbil", self.Jinv, ref_hess, self.Jinv)
