import numpy as np
import pytest

from isingzeros.canonical import CanonicalSpec, build_canonical
from isingzeros.errors import DegenerateTriangle, MeshError, NonManifoldEdge, OrientationError
from isingzeros.mesh import EmbeddedMesh, load_mesh, read_off, save_mesh, write_off

TET_V = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
TET_F = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]


def test_valid_tetrahedron():
    mesh = EmbeddedMesh(TET_V, TET_F, 0).validate()
    assert (mesh.n_vertices, mesh.n_edges, mesh.n_faces) == (4, 6, 4)
    assert mesh.euler_characteristic() == 2


def test_first_face_convention():
    mesh = EmbeddedMesh(TET_V, TET_F, 0)
    f1, f2 = mesh.edge_faces(0, 1)
    assert (0, 1) in [(mesh.faces[f1][k], mesh.faces[f1][(k + 1) % 3]) for k in range(3)]
    assert mesh.edge_faces(1, 0) == (f2, f1)


def test_invariant_violations():
    with pytest.raises(NonManifoldEdge):
        EmbeddedMesh(TET_V, TET_F[:3], 0).validate()
    with pytest.raises(OrientationError):
        EmbeddedMesh(TET_V, [TET_F[0][::-1]] + TET_F[1:], 0).validate()
    with pytest.raises(MeshError):
        EmbeddedMesh(TET_V, TET_F, 1).validate()  # Euler characteristic
    flat = [[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 0, 1]]
    with pytest.raises(DegenerateTriangle):
        EmbeddedMesh(flat, TET_F, 0).validate()
    with pytest.raises(MeshError):
        EmbeddedMesh([[0, 0, np.nan]], [], 0)


def test_torus_genus():
    torus = build_canonical(CanonicalSpec.torus(1, 2, 1))
    assert torus.genus == 1 and torus.euler_characteristic() == 0
    assert (torus.n_vertices, torus.n_edges, torus.n_faces) == (12, 24, 12)


def test_json_roundtrip(tmp_path):
    for spec in (CanonicalSpec.pancake(), CanonicalSpec.torus(1, 2, 1)):
        mesh = build_canonical(spec)
        save_mesh(mesh, tmp_path / "m.json")
        back = load_mesh(tmp_path / "m.json")
        assert np.array_equal(back.vertices, mesh.vertices)
        assert back.faces == mesh.faces and back.genus == mesh.genus
        assert back.pinned_dihedrals == mesh.pinned_dihedrals


def test_off_import_repairs_orientation(tmp_path):
    mesh = build_canonical(CanonicalSpec.cube())
    scrambled = mesh.with_faces([f if k % 2 else f[::-1] for k, f in enumerate(mesh.faces)])
    (tmp_path / "cube.off").write_text(write_off(scrambled))
    back = load_mesh(tmp_path / "cube.off").validate()
    assert back.faces == mesh.faces
    assert read_off(write_off(mesh)).faces == mesh.faces
