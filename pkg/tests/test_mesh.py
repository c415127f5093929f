import numpy as np
import pytest

from thermoplate.mesh import (
    TopologyError,
    build_lshape,
    build_unit_square,
    edge_topology,
    from_arrays,
    write_mesh,
)


def brute_force_edges(triangles):
    """Independent edge enumeration straight from the triangle list."""
    count = {}
    for tri in triangles:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(a, b), max(a, b))
            count[key] = count.get(key, 0) + 1
    return count


def test_unit_square_smallest_case():
    mesh = build_unit_square(1)
    assert mesh.n_triangles == 2
    assert mesh.n_vertices == 4
    assert mesh.n_edges == 5
    assert mesh.h == pytest.approx(np.sqrt(2.0), abs=1e-15)


def test_unit_square_matches_table_mesh_size():
    # coarsest row of the smooth study
    assert build_unit_square(4).h == pytest.approx(0.3536, abs=5e-5)


def test_unit_square_n2_area_and_edge_counts():
    mesh = build_unit_square(2)
    assert mesh.signed_areas().sum() == pytest.approx(1.0, abs=1e-12)
    counts = brute_force_edges(mesh.triangles)
    assert len(counts) == mesh.n_edges
    n_interior = sum(1 for c in counts.values() if c == 2)
    n_boundary = sum(1 for c in counts.values() if c == 1)
    assert n_interior == int((~mesh.edge_boundary).sum()) == 8
    assert n_boundary == int(mesh.edge_boundary.sum()) == 8


def test_lshape_coarsest_mesh_size():
    assert build_lshape(2).h == pytest.approx(0.7071, abs=5e-5)


def test_lshape_area_and_origin_vertex():
    mesh = build_lshape(1)
    assert mesh.signed_areas().sum() == pytest.approx(3.0, abs=1e-12)
    assert np.any(np.all(mesh.vertices == 0.0, axis=1))


def test_lshape_origin_edge_classification():
    mesh = build_lshape(4)
    origin = int(np.flatnonzero(np.all(mesh.vertices == 0.0, axis=1))[0])
    touching = np.any(mesh.edge_vertices == origin, axis=1)
    for e in np.flatnonzero(touching):
        other = mesh.edge_vertices[e, 0] if mesh.edge_vertices[e, 1] == origin else mesh.edge_vertices[e, 1]
        x, y = mesh.vertices[other]
        on_reentrant_leg = (x == 0.0 and y < 0.0) or (y == 0.0 and x < 0.0)
        assert mesh.edge_boundary[e] == on_reentrant_leg


def test_shared_diagonal_is_unique_interior_edge():
    mesh = build_unit_square(1)
    interior = np.flatnonzero(~mesh.edge_boundary)
    assert interior.size == 1
    a, b = mesh.edge_vertices[interior[0]]
    assert {tuple(mesh.vertices[a]), tuple(mesh.vertices[b])} == {(0.0, 0.0), (1.0, 1.0)}


def test_euler_formula_simply_connected():
    for mesh in (build_unit_square(4), build_lshape(2)):
        assert mesh.n_edges == mesh.n_vertices + mesh.n_triangles - 1


def test_refinement_quadruples_triangles():
    for n in (1, 3, 5):
        assert build_unit_square(2 * n).n_triangles == 4 * build_unit_square(n).n_triangles


def test_boundary_edges_lie_on_geometric_boundary():
    mesh = build_unit_square(5)
    for e in np.flatnonzero(mesh.edge_boundary):
        for v in mesh.edge_vertices[e]:
            x, y = mesh.vertices[v]
            assert min(abs(x), abs(1 - x), abs(y), abs(1 - y)) < 1e-14
    lmesh = build_lshape(3)
    for e in np.flatnonzero(lmesh.edge_boundary):
        for v in lmesh.edge_vertices[e]:
            x, y = lmesh.vertices[v]
            dists = [abs(x + 1), abs(x - 1), abs(y + 1), abs(y - 1)]
            if x <= 0 and y <= 0:
                dists += [abs(x), abs(y)]
            assert min(dists) < 1e-14


def test_triangles_counterclockwise_and_h():
    for mesh in (build_unit_square(3), build_lshape(2)):
        assert np.all(mesh.signed_areas() > 0)
        lengths = []
        for tri in mesh.triangles:
            v = mesh.vertices[tri]
            for a, b in ((0, 1), (1, 2), (2, 0)):
                lengths.append(np.hypot(*(v[a] - v[b])))
        assert mesh.h == pytest.approx(max(lengths), abs=1e-15)


def test_interior_normal_orientation():
    mesh = build_unit_square(3)
    for e in np.flatnonzero(~mesh.edge_boundary):
        tp, tm = mesh.edge_tris[e]
        assert tp < tm
        cp = mesh.vertices[mesh.triangles[tp]].mean(axis=0)
        cm = mesh.vertices[mesh.triangles[tm]].mean(axis=0)
        assert np.dot(mesh.edge_normal[e], cm - cp) > 0


def test_invalid_subdivisions_rejected():
    with pytest.raises(ValueError):
        build_unit_square(0)
    with pytest.raises(ValueError):
        build_lshape(0)


def test_non_manifold_rejected():
    # three triangles sharing the edge (0, 1)
    vertices = [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0), (0.5, -1.0), (1.5, 1.0)]
    triangles = [(0, 1, 2), (0, 3, 1), (0, 1, 4)]
    with pytest.raises(TopologyError):
        from_arrays(vertices, triangles)


def test_clockwise_triangle_rejected():
    with pytest.raises(TopologyError):
        from_arrays([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], [(0, 2, 1)])


def test_edge_topology_deterministic_lexicographic():
    mesh = build_unit_square(3)
    ev = mesh.edge_vertices
    order = np.lexsort((ev[:, 1], ev[:, 0]))
    assert np.array_equal(order, np.arange(mesh.n_edges))
    ev2, *_ = edge_topology(mesh)
    assert np.array_equal(ev, ev2)


def test_mesh_dump_format(tmp_path):
    mesh = build_unit_square(1)
    path = tmp_path / "mesh.txt"
    write_mesh(mesh, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "#vertices 4"
    assert lines[5] == "#triangles 2"
    assert len(lines) == 8
