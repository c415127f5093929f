"""Structured triangulations of the unit square and the L-shaped domain.

Meshes are stored as flat numpy arrays (struct-of-arrays) together with a
full edge table: every edge knows its endpoints, its one or two adjacent
triangles, its length and a consistently oriented unit normal.  The edge
table is what the interior-penalty assembly loops over, so its orientation
convention is fixed here once and relied upon everywhere else:

* interior edge: the normal points from the lower-indexed adjacent
  triangle ("plus" side) toward the higher-indexed one ("minus" side);
* boundary edge: the normal points out of the single adjacent triangle.

All squares of the structured grids are split along the bottom-left to
top-right diagonal, which keeps refinements nested and assembly
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TriMesh",
    "TopologyError",
    "from_arrays",
    "build_unit_square",
    "build_lshape",
    "edge_topology",
    "write_mesh",
]


class TopologyError(ValueError):
    """Raised for non-manifold or inconsistent triangle connectivity."""


@dataclass(frozen=True)
class TriMesh:
    """Conforming triangle mesh with precomputed edge topology.

    Attributes
    ----------
    vertices : (V, 2) float array of vertex coordinates.
    triangles : (T, 3) int array, counterclockwise vertex indices.
    edge_vertices : (E, 2) int array, each row sorted ascending.
    edge_tris : (E, 2) int array of adjacent triangle indices; the second
        entry is -1 for boundary edges.  For interior edges the first
        entry is the lower triangle index (the "plus" side).
    edge_boundary : (E,) bool array.
    edge_length : (E,) float array.
    edge_normal : (E, 2) float array of unit normals (plus -> minus, or
        outward on the boundary).
    tri_edges : (T, 3) int array; entry [t, k] is the global index of the
        edge opposite local vertex k of triangle t.
    h : float, maximum edge length over all triangles.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    edge_vertices: np.ndarray = field(repr=False, default=None)
    edge_tris: np.ndarray = field(repr=False, default=None)
    edge_boundary: np.ndarray = field(repr=False, default=None)
    edge_length: np.ndarray = field(repr=False, default=None)
    edge_normal: np.ndarray = field(repr=False, default=None)
    tri_edges: np.ndarray = field(repr=False, default=None)
    h: float = 0.0

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    @property
    def n_edges(self) -> int:
        return self.edge_vertices.shape[0]

    def signed_areas(self) -> np.ndarray:
        v = self.vertices
        t = self.triangles
        a = v[t[:, 1]] - v[t[:, 0]]
        b = v[t[:, 2]] - v[t[:, 0]]
        return 0.5 * (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])

    def boundary_vertex_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_vertices, dtype=bool)
        mask[self.edge_vertices[self.edge_boundary].ravel()] = True
        return mask


def _finish_mesh(vertices: np.ndarray, triangles: np.ndarray) -> TriMesh:
    """Attach edge topology and mesh size to a raw vertex/triangle pair."""
    vertices = np.ascontiguousarray(vertices, dtype=float)
    triangles = np.ascontiguousarray(triangles, dtype=np.int64)
    mesh = TriMesh(vertices=vertices, triangles=triangles)
    ev, et, ebnd, elen, enrm, te = edge_topology(mesh)
    hmax = float(elen.max()) if elen.size else 0.0
    return TriMesh(
        vertices=vertices,
        triangles=triangles,
        edge_vertices=ev,
        edge_tris=et,
        edge_boundary=ebnd,
        edge_length=elen,
        edge_normal=enrm,
        tri_edges=te,
        h=hmax,
    )


def from_arrays(vertices, triangles) -> TriMesh:
    """Mesh from raw vertex coordinates and CCW triangle indices."""
    return _finish_mesh(np.asarray(vertices, dtype=float), np.asarray(triangles))


def edge_topology(mesh: TriMesh):
    """Build the edge table of a triangle mesh.

    Edges are ordered lexicographically by their sorted vertex pair, which
    makes matrix sparsity patterns reproducible across runs.  Raises
    :class:`TopologyError` if an edge is shared by more than two triangles
    or if a triangle has non-positive signed area.
    """
    tris = mesh.triangles
    areas = mesh.signed_areas()
    if np.any(areas <= 0.0):
        bad = int(np.argmax(areas <= 0.0))
        raise TopologyError(f"triangle {bad} is not counterclockwise (signed area {areas[bad]:g})")

    # Three directed half-edges per triangle; edge k is opposite vertex k.
    local = [(1, 2), (2, 0), (0, 1)]
    pairs = np.concatenate([np.sort(tris[:, loc], axis=1) for loc in local], axis=0)
    owner_tri = np.tile(np.arange(tris.shape[0]), 3)

    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    pairs_sorted = pairs[order]
    owners_sorted = owner_tri[order]

    uniq, first, counts = np.unique(pairs_sorted, axis=0, return_index=True, return_counts=True)
    if np.any(counts > 2):
        bad = uniq[counts > 2][0]
        raise TopologyError(f"edge {tuple(bad)} is shared by more than two triangles")

    n_edges = uniq.shape[0]
    edge_tris = np.full((n_edges, 2), -1, dtype=np.int64)
    for k in range(n_edges):
        adj = owners_sorted[first[k]:first[k] + counts[k]]
        adj = np.sort(adj)
        edge_tris[k, : adj.size] = adj
    edge_boundary = counts == 1

    v = mesh.vertices
    va = v[uniq[:, 0]]
    vb = v[uniq[:, 1]]
    tangent = vb - va
    length = np.hypot(tangent[:, 0], tangent[:, 1])
    normal = np.column_stack([tangent[:, 1], -tangent[:, 0]]) / length[:, None]

    # Orient: away from the plus triangle (lower index, or the only one).
    plus_centroid = v[tris[edge_tris[:, 0]]].mean(axis=1)
    midpoint = 0.5 * (va + vb)
    flip = np.einsum("ij,ij->i", normal, midpoint - plus_centroid) < 0.0
    normal[flip] *= -1.0

    # Map each triangle to its three edges (edge k opposite local vertex k).
    lut = {(int(a), int(b)): k for k, (a, b) in enumerate(uniq)}
    tri_edges = np.empty((tris.shape[0], 3), dtype=np.int64)
    for k, loc in enumerate(local):
        for t in range(tris.shape[0]):
            a, b = sorted((int(tris[t, loc[0]]), int(tris[t, loc[1]])))
            tri_edges[t, k] = lut[(a, b)]

    return uniq, edge_tris, edge_boundary, length, normal, tri_edges


def _grid_triangles(nx: int, ny: int, vid) -> np.ndarray:
    """CCW triangles for an nx-by-ny cell grid, diagonal bottom-left -> top-right.

    ``vid(ix, iy)`` maps grid coordinates to global vertex indices; cells for
    which ``vid`` returns -1 at any corner are skipped.
    """
    tris = []
    for iy in range(ny):
        for ix in range(nx):
            v00 = vid(ix, iy)
            v10 = vid(ix + 1, iy)
            v01 = vid(ix, iy + 1)
            v11 = vid(ix + 1, iy + 1)
            if min(v00, v10, v01, v11) < 0:
                continue
            tris.append((v00, v10, v11))
            tris.append((v00, v11, v01))
    return np.asarray(tris, dtype=np.int64)


def build_unit_square(n: int) -> TriMesh:
    """Uniform criss mesh of (0,1)^2 with n x n squares, 2 n^2 triangles."""
    if n < 1:
        raise ValueError(f"subdivision count must be >= 1, got {n}")
    coords = np.linspace(0.0, 1.0, n + 1)
    xs, ys = np.meshgrid(coords, coords, indexing="xy")
    vertices = np.column_stack([xs.ravel(), ys.ravel()])

    def vid(ix, iy):
        return iy * (n + 1) + ix

    triangles = _grid_triangles(n, n, vid)
    return _finish_mesh(vertices, triangles)


def build_lshape(n: int) -> TriMesh:
    """Criss mesh of [-1,1]^2 minus the third-quadrant square [-1,0]^2.

    ``n`` cells per unit length, 6 n^2 triangles total.  The reentrant
    corner at the origin is a mesh vertex at every refinement level.
    """
    if n < 1:
        raise ValueError(f"subdivision count must be >= 1, got {n}")
    m = 2 * n
    coords = np.linspace(-1.0, 1.0, m + 1)

    keep = np.zeros((m + 1, m + 1), dtype=bool)  # [iy, ix] vertex usage
    for iy in range(m):
        for ix in range(m):
            if ix < n and iy < n:  # cell inside the removed quadrant
                continue
            keep[iy:iy + 2, ix:ix + 2] = True

    index = np.full((m + 1, m + 1), -1, dtype=np.int64)
    index[keep] = np.arange(int(keep.sum()))
    xs, ys = np.meshgrid(coords, coords, indexing="xy")
    vertices = np.column_stack([xs[keep], ys[keep]])

    tris = []
    for iy in range(m):
        for ix in range(m):
            if ix < n and iy < n:
                continue
            v00 = index[iy, ix]
            v10 = index[iy, ix + 1]
            v01 = index[iy + 1, ix]
            v11 = index[iy + 1, ix + 1]
            tris.append((v00, v10, v11))
            tris.append((v00, v11, v01))
    triangles = np.asarray(tris, dtype=np.int64)
    return _finish_mesh(vertices, triangles)


def write_mesh(mesh: TriMesh, path) -> None:
    """Dump a mesh in a plain-text two-section format (debug aid)."""
    with open(path, "w") as fh:
        fh.write(f"#vertices {mesh.n_vertices}\n")
        for x, y in mesh.vertices:
            fh.write(f"{x:.17g} {y:.17g}\n")
        fh.write(f"#triangles {mesh.n_triangles}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"{a} {b} {c}\n")
