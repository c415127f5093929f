"""Global matrix and load-vector assembly.

All assemblers return ``scipy.sparse.csr_matrix`` in canonical form
(sorted indices, duplicates summed); entry convention is
``A[i, j] = form(basis_j, basis_i)`` (trial j, test i).

The fourth-order operator is discretized with the C0 interior penalty
form: per-triangle Hessian contraction, two symmetric consistency terms
coupling gradient jumps with Hessian averages across edges, and a
penalty on normal-derivative jumps scaled by ``sigma_ip / h_e``.  Edge
sums run over all edges including boundary ones, which imposes the
clamped condition (vanishing normal derivative) weakly; the Dirichlet
value itself is imposed strongly by eliminating masked DOFs.

P2 functions are quadratic, so Hessians are constant per triangle,
gradients affine, and every polynomial integral here is exact at the
quadrature degrees used (volume degree 2/4, edges 2-point Gauss).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .fem import FeSpace, TriGeometry, edge_quadrature, eval_p1_basis, eval_p2_basis, tri_quadrature

__all__ = [
    "mass_matrix",
    "h1_matrix",
    "coupling_matrix",
    "c0ip_matrix",
    "broken_h_norm",
    "load_vector",
    "grad_load_vector",
    "is_symmetric",
    "export_coo",
    "P2EdgeData",
]


def _basis(space: FeSpace, bary: np.ndarray):
    if space.kind == "P2":
        vals, grads, _ = eval_p2_basis(bary)
    else:
        vals, grads = eval_p1_basis(bary)
    return vals, grads


def _to_csr(rows, cols, data, shape) -> sp.csr_matrix:
    A = sp.coo_matrix((data.ravel(), (rows.ravel(), cols.ravel())), shape=shape).tocsr()
    A.sum_duplicates()
    A.sort_indices()
    return A


def _symmetrize(A: sp.csr_matrix) -> sp.csr_matrix:
    # (a_ij + a_ji)/2 is computed identically for both triangles, so the
    # result is bitwise symmetric even when duplicate-summation order
    # introduced ulp-level asymmetry.
    A = (0.5 * (A + A.T)).tocsr()
    A.sum_duplicates()
    A.sort_indices()
    return A


def _scatter_square(space: FeSpace, local: np.ndarray) -> sp.csr_matrix:
    dofs = space.cell_dofs
    rows = np.repeat(dofs, dofs.shape[1], axis=1)
    cols = np.tile(dofs, (1, dofs.shape[1]))
    return _symmetrize(_to_csr(rows, cols, local, (space.n_dofs, space.n_dofs)))


def mass_matrix(space: FeSpace, quad_degree: int = None) -> sp.csr_matrix:
    """L2 mass matrix (phi_j, phi_i); the default quadrature is exact."""
    geo = TriGeometry(space.mesh)
    rule = tri_quadrature(quad_degree or (4 if space.kind == "P2" else 2))
    vals, _ = _basis(space, rule.points)
    base = np.einsum("q,qi,qj->ij", rule.weights, vals, vals)
    base = 0.5 * (base + base.T)
    local = np.abs(geo.det)[:, None, None] * base[None, :, :]
    return _scatter_square(space, local)


def h1_matrix(space: FeSpace, quad_degree: int = 2) -> sp.csr_matrix:
    """H1 stiffness matrix (grad phi_j, grad phi_i); degree 2 is exact."""
    geo = TriGeometry(space.mesh)
    rule = tri_quadrature(quad_degree)
    _, ref_grads = _basis(space, rule.points)
    grads = geo.map_gradients(ref_grads)  # (T, nq, nb, 2)
    local = np.einsum("q,tqia,tqja,t->tij", rule.weights, grads, grads, np.abs(geo.det))
    local = 0.5 * (local + local.transpose(0, 2, 1))
    return _scatter_square(space, local)


def coupling_matrix(v_space: FeSpace, w_space: FeSpace, quad_degree: int = 2) -> sp.csr_matrix:
    """Cross-space gradient pairing B[i, j] = (grad chi_j, grad v_i).

    Rows belong to the P2 space, columns to the P1 space on the same mesh.
    """
    if v_space.mesh is not w_space.mesh:
        raise ValueError("coupling spaces must share one mesh")
    if v_space.kind != "P2" or w_space.kind != "P1":
        raise ValueError("coupling expects (P2, P1) spaces")
    geo = TriGeometry(v_space.mesh)
    rule = tri_quadrature(quad_degree)
    _, gv_ref = _basis(v_space, rule.points)
    _, gw_ref = _basis(w_space, rule.points)
    gv = geo.map_gradients(gv_ref)
    gw = geo.map_gradients(gw_ref)
    local = np.einsum("q,tqia,tqja,t->tij", rule.weights, gv, gw, np.abs(geo.det))
    rows = np.repeat(v_space.cell_dofs, 3, axis=1)
    cols = np.tile(w_space.cell_dofs, (1, 6))
    return _to_csr(rows, cols, local, (v_space.n_dofs, w_space.n_dofs))


class P2EdgeData:
    """Edge-wise P2 data shared by the C0IP assembler and the broken norm.

    Per triangle: physical Hessians (constant) and gradients at the
    centroid; a P2 gradient at any point x is then
    ``grad_c + hess @ (x - centroid)``.
    """

    def __init__(self, space: FeSpace, n_edge_points: int = 2):
        if space.kind != "P2":
            raise ValueError("edge data requires the P2 space")
        self.space = space
        mesh = space.mesh
        self.geo = TriGeometry(mesh)
        _, gc_ref, hess_ref = eval_p2_basis(np.array([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]))
        self.grad_c = self.geo.map_gradients(gc_ref)  # (T, 6, 2)
        self.hess = self.geo.map_hessians(hess_ref)  # (T, 6, 2, 2)
        self.edge_rule = edge_quadrature(n_edge_points)

    def grads_on_edge(self, tri_idx: np.ndarray, pts: np.ndarray) -> np.ndarray:
        """Gradients of the 6 local basis functions of given triangles.

        ``tri_idx``: (E,) triangle indices; ``pts``: (E, nq, 2) points.
        Returns (E, nq, 6, 2).
        """
        d = pts - self.geo.centroid[tri_idx][:, None, :]
        return self.grad_c[tri_idx][:, None, :, :] + np.einsum(
            "eiab,eqb->eqia", self.hess[tri_idx], d
        )


def _edge_points(space: FeSpace, rule) -> np.ndarray:
    mesh = space.mesh
    va = mesh.vertices[mesh.edge_vertices[:, 0]]
    vb = mesh.vertices[mesh.edge_vertices[:, 1]]
    return va[:, None, :] + rule.points[:, None] * (vb - va)[:, None, :]


def c0ip_matrix(
    space: FeSpace,
    sigma_ip: float,
    parts: bool = False,
    include_consistency: bool = True,
    edge_points: int = 2,
):
    """C0 interior penalty bilinear form for the biharmonic operator.

    With ``parts=True`` returns ``(A, H, P)`` where ``H`` is the volume
    Hessian-contraction part and ``P`` the normal-jump penalty part
    (so ``A - H - P`` is the consistency contribution).  The
    ``include_consistency`` switch exists for assembly verification
    only: it drops the two consistency terms.
    """
    if space.kind != "P2":
        raise ValueError("the interior-penalty form is defined on the P2 space")
    if sigma_ip <= 0.0:
        raise ValueError("penalty parameter must be positive")
    mesh = space.mesh
    data = P2EdgeData(space, n_edge_points=edge_points)
    geo = data.geo

    # Volume term: constant Hessians contracted over each triangle.
    vol_local = np.einsum("tiab,tjab,t->tij", data.hess, data.hess, geo.area)
    vol_local = 0.5 * (vol_local + vol_local.transpose(0, 2, 1))
    H = _scatter_square(space, vol_local)

    rule = data.edge_rule
    pts = _edge_points(space, rule)  # (E, nq, 2)
    normals = mesh.edge_normal
    lengths = mesh.edge_length
    interior = ~mesh.edge_boundary

    rows_all, cols_all, pen_data, con_data = [], [], [], []

    def edge_blocks(mask: np.ndarray, two_sided: bool):
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            return
        n = normals[idx]  # (E, 2)
        he = lengths[idx]
        p = pts[idx]  # (E, nq, 2)
        tp = mesh.edge_tris[idx, 0]
        gp = data.grads_on_edge(tp, p)  # (E, nq, 6, 2)
        dofs_p = space.cell_dofs[tp]  # (E, 6)
        if two_sided:
            tm = mesh.edge_tris[idx, 1]
            gm = data.grads_on_edge(tm, p)
            dofs_m = space.cell_dofs[tm]
            jump_grad = np.concatenate([gp, -gm], axis=2)  # (E, nq, 12, 2)
            hn = 0.5 * np.concatenate(
                [
                    np.einsum("eiab,eb->eia", data.hess[tp], n),
                    np.einsum("eiab,eb->eia", data.hess[tm], n),
                ],
                axis=1,
            )  # (E, 12, 2) -- averages, no sign
            dofs = np.concatenate([dofs_p, dofs_m], axis=1)
        else:
            jump_grad = gp
            hn = np.einsum("eiab,eb->eia", data.hess[tp], n)
            dofs = dofs_p
        dn = np.einsum("eqia,ea->eqi", jump_grad, n)  # normal-derivative jumps

        w = rule.weights
        # penalty: sigma/h_e * int_e [dn_i][dn_j]  (the h_e from ds cancels one power)
        pen = sigma_ip * np.einsum("q,eqi,eqj->eij", w, dn, dn)
        pen = 0.5 * (pen + pen.transpose(0, 2, 1))
        # consistency: -int_e [grad w_j].({Hess v_i} n); plus its transpose
        c1 = -np.einsum("q,eia,eqja,e->eij", w, hn, jump_grad, he)
        con = c1 + c1.transpose(0, 2, 1)

        nb = dofs.shape[1]
        r = np.repeat(dofs, nb, axis=1)
        c = np.tile(dofs, (1, nb))
        rows_all.append(r.ravel())
        cols_all.append(c.ravel())
        pen_data.append(pen.ravel())
        con_data.append(con.ravel())

    edge_blocks(interior, two_sided=True)
    edge_blocks(mesh.edge_boundary, two_sided=False)

    rows = np.concatenate(rows_all)
    cols = np.concatenate(cols_all)
    shape = (space.n_dofs, space.n_dofs)
    P = _symmetrize(_to_csr(rows, cols, np.concatenate(pen_data), shape))
    A = H + P
    if include_consistency:
        A = A + _symmetrize(_to_csr(rows, cols, np.concatenate(con_data), shape))
    A.sum_duplicates()
    A.sort_indices()
    if parts:
        return A, H, P
    return A


def broken_h_norm(
    space: FeSpace,
    sigma_ip: float,
    coeffs: np.ndarray,
    exact_hess=None,
    exact_grad=None,
    volume_degree: int = 8,
    edge_points: int = 4,
    exclude_radius: float = 0.0,
) -> float:
    """Mesh-dependent norm ||v||_h of a discrete field or an error field.

    With ``exact_hess``/``exact_grad`` callables (signature ``f(x, y)``
    returning Hessian components ``(vxx, vxy, vyy)`` resp. gradient
    ``(vx, vy)``) the norm of ``exact - discrete`` is computed: the
    volume term integrates the Hessian difference, interior edges see
    only the discrete normal-derivative jump (the exact field is smooth),
    and boundary edges the difference of normal derivatives.

    ``exclude_radius`` drops quadrature points closer than that to the
    origin (corner singularities on the L-shape).
    """
    if space.kind != "P2":
        raise ValueError("the broken norm is defined on the P2 space")
    mesh = space.mesh
    data = P2EdgeData(space, n_edge_points=edge_points)
    geo = data.geo
    c_loc = coeffs[space.cell_dofs]  # (T, 6)

    disc_hess = np.einsum("ti,tiab->tab", c_loc, data.hess)  # constant per triangle
    if exact_hess is None:
        vol = float(np.einsum("tab,tab,t->", disc_hess, disc_hess, geo.area))
    else:
        rule = tri_quadrature(volume_degree)
        pq = geo.physical_points(rule.points)  # (T, nq, 2)
        x = pq[..., 0].ravel()
        y = pq[..., 1].ravel()
        mask = np.ones(x.shape, dtype=bool)
        if exclude_radius > 0.0:
            mask = np.hypot(x, y) >= exclude_radius
        vxx, vxy, vyy = exact_hess(x, y)
        shape = pq.shape[:2]
        diff = np.empty(shape + (2, 2))
        diff[..., 0, 0] = vxx.reshape(shape) - disc_hess[:, None, 0, 0]
        diff[..., 0, 1] = vxy.reshape(shape) - disc_hess[:, None, 0, 1]
        diff[..., 1, 0] = diff[..., 0, 1]
        diff[..., 1, 1] = vyy.reshape(shape) - disc_hess[:, None, 1, 1]
        diff *= mask.reshape(shape)[..., None, None]
        vol = float(
            np.einsum("q,tqab,tqab,t->", rule.weights, diff, diff, 2.0 * geo.area)
        )

    rule = data.edge_rule
    pts = _edge_points(space, rule)
    normals = mesh.edge_normal
    interior = ~mesh.edge_boundary

    def disc_dn(idx, side):
        t = mesh.edge_tris[idx, side]
        g = data.grads_on_edge(t, pts[idx])  # (E, nq, 6, 2)
        gu = np.einsum("ei,eqia->eqa", coeffs[space.cell_dofs[t]], g)
        return np.einsum("eqa,ea->eq", gu, normals[idx])

    # sigma/h_e * int ds = sigma/h_e * h_e * sum(w ...) -- the edge lengths cancel
    total_edge = 0.0
    idx = np.flatnonzero(interior)
    if idx.size:
        jump = disc_dn(idx, 0) - disc_dn(idx, 1)  # exact field has no interior jump
        total_edge += sigma_ip * float(np.einsum("q,eq,eq->", rule.weights, jump, jump))
    idx = np.flatnonzero(mesh.edge_boundary)
    if idx.size:
        jump = -disc_dn(idx, 0)
        if exact_grad is not None:
            p = pts[idx]
            gx, gy = exact_grad(p[..., 0].ravel(), p[..., 1].ravel())
            gex = np.stack([gx, gy], axis=-1).reshape(p.shape)
            jump = jump + np.einsum("eqa,ea->eq", gex, normals[idx])
        total_edge += sigma_ip * float(np.einsum("q,eq,eq->", rule.weights, jump, jump))
    return float(np.sqrt(vol + total_edge))


def load_vector(space: FeSpace, data, t: float, quad_degree: int = 8) -> np.ndarray:
    """Entries (f(t, .), phi_i) for a space-time callable f(t, x, y)."""
    geo = TriGeometry(space.mesh)
    rule = tri_quadrature(quad_degree)
    vals, _ = _basis(space, rule.points)
    pq = geo.physical_points(rule.points)
    f = np.asarray(data(t, pq[..., 0], pq[..., 1]), dtype=float)
    if f.shape != pq.shape[:2]:
        f = np.broadcast_to(f, pq.shape[:2])
    local = np.einsum("q,tq,qi,t->ti", rule.weights, f, vals, 2.0 * geo.area)
    vec = np.zeros(space.n_dofs)
    np.add.at(vec, space.cell_dofs.ravel(), local.ravel())
    return vec


def grad_load_vector(space: FeSpace, grad_data, quad_degree: int = 8) -> np.ndarray:
    """Entries (grad g, grad phi_i) for a time-independent gradient callable.

    ``grad_data(x, y)`` returns the pair ``(gx, gy)`` of arrays.
    """
    geo = TriGeometry(space.mesh)
    rule = tri_quadrature(quad_degree)
    _, ref_grads = _basis(space, rule.points)
    grads = geo.map_gradients(ref_grads)
    pq = geo.physical_points(rule.points)
    gx, gy = grad_data(pq[..., 0].ravel(), pq[..., 1].ravel())
    g = np.stack([gx, gy], axis=-1).reshape(pq.shape)
    local = np.einsum("q,tqa,tqia,t->ti", rule.weights, g, grads, 2.0 * geo.area)
    vec = np.zeros(space.n_dofs)
    np.add.at(vec, space.cell_dofs.ravel(), local.ravel())
    return vec


def is_symmetric(A: sp.spmatrix, tol: float = 1e-12) -> bool:
    d = (A - A.T).tocoo()
    return d.nnz == 0 or float(np.abs(d.data).max()) < tol


def export_coo(A: sp.spmatrix, path) -> None:
    """Write a matrix as 'row col value' lines (debug aid)."""
    coo = A.tocoo()
    with open(path, "w") as fh:
        for r, c, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r} {c} {v:.17g}\n")
