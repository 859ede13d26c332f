import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isingzeros.canonical import CanonicalSpec, build_canonical, double_pyramid_lengths
from isingzeros.errors import (
    DegenerateTriangle,
    NonPlanarFace,
    NotConcyclic,
    OrientationAmbiguous,
)
from isingzeros.geometry import (
    circumcircle_center_angle,
    dihedral_from_planes,
    edge_records,
    face_normal,
    half_tangent,
    opposite_angles,
    orient_outward,
    regge_action,
    signed_dihedral,
    triangle_angles,
)
from isingzeros.mesh import EmbeddedMesh
from isingzeros.meshgen import RescaleConfig, SamplerConfig, random_mesh, validate_closed

from oracles import acos_angle

coord = st.floats(-10, 10, allow_nan=False)
point = st.tuples(coord, coord, coord)


def unit_normal(mesh, f):
    n = face_normal(mesh, f)
    return n / np.linalg.norm(n)


def hexagonal_prism():
    ang = np.arange(6) * np.pi / 3
    ring = np.column_stack([np.cos(ang), np.sin(ang)])
    verts = [[x, y, 0.0] for x, y in ring] + [[x, y, 1.0] for x, y in ring]
    faces = [tuple(range(5, -1, -1)), tuple(range(6, 12))]
    faces += [(k, (k + 1) % 6, 6 + (k + 1) % 6, 6 + k) for k in range(6)]
    return EmbeddedMesh(verts, faces, 0, "hexprism").validate()


def square_pyramid_split_base():
    verts = [[1, 1, 0], [-1, 1, 0], [-1, -1, 0], [1, -1, 0], [0, 0, 1]]
    faces = [(0, 2, 1), (0, 3, 2), (0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)]
    return EmbeddedMesh(verts, faces, 0).validate()


# --- triangle angles ---------------------------------------------------------


def test_equilateral_angles():
    a = triangle_angles([0, 0, 0], [1, 0, 0], [0.5, math.sqrt(3) / 2, 0])
    assert np.allclose(a, [math.pi / 3] * 3, atol=1e-12)


def test_right_isosceles_angles():
    a = triangle_angles([0, 0, 0], [1, 0, 0], [0, 1, 0])
    assert np.allclose(a, [math.pi / 2, math.pi / 4, math.pi / 4], atol=1e-12)


def test_pyramid_face_summit_angle_equilateral():
    h = math.sqrt(2)
    l = math.sqrt(h * h + 2)
    assert half_tangent(l, l, 2.0) == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    summit = triangle_angles([0, 0, h], [1, 1, 0], [-1, 1, 0])[0]
    assert summit == pytest.approx(math.pi / 3, abs=1e-12)


def test_collinear_triangle_raises():
    with pytest.raises(DegenerateTriangle):
        triangle_angles([0, 0, 0], [1, 1, 1], [2, 2, 2])


@given(point, point, point)
def test_angle_sum_and_half_tangent_law(a, b, c):
    a, b, c = (np.array(p) for p in (a, b, c))
    lens = [np.linalg.norm(b - a), np.linalg.norm(c - b), np.linalg.norm(a - c)]
    area = 0.5 * np.linalg.norm(np.cross(b - a, c - a))
    # stay clear of the degeneracy threshold so angles are well conditioned
    if min(lens) < 1e-3 or area < 1e-3 * max(lens) ** 2:
        return
    angles = triangle_angles(a, b, c)
    assert all(0 < x < math.pi for x in angles)
    assert sum(angles) == pytest.approx(math.pi, abs=1e-12)
    t = [math.tan(x / 2) for x in angles]
    assert t[0] * t[1] + t[1] * t[2] + t[2] * t[0] == pytest.approx(1.0, abs=1e-12)
    assert angles[0] == pytest.approx(acos_angle(b - a, c - a), abs=1e-7)


# --- normals -----------------------------------------------------------------


def test_face_normal_axis_triangle_and_reversal():
    mesh = EmbeddedMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [(0, 1, 2)], 0)
    assert np.allclose(face_normal(mesh, 0), [0, 0, 0.5])
    flipped = mesh.with_faces([(2, 1, 0)])
    assert np.allclose(face_normal(flipped, 0), [0, 0, -0.5])


def test_cube_top_face_normal_matches_cross_product():
    cube = build_canonical(CanonicalSpec.cube(1.0))
    for f, face in enumerate(cube.faces):
        pts = cube.vertices[list(face)]
        if np.allclose(pts[:, 2], 1.0):
            oracle = np.cross(pts[1] - pts[0], pts[2] - pts[0])
            n = face_normal(cube, f)
            assert np.allclose(n / np.linalg.norm(n), oracle / np.linalg.norm(oracle))
            assert np.allclose(n / np.linalg.norm(n), [0, 0, 1])
            assert np.linalg.norm(n) == pytest.approx(1.0)


def test_nonplanar_face_raises():
    mesh = EmbeddedMesh([[0, 0, 0], [1, 0, 0], [1, 1, 0.1], [0, 1, 0]], [(0, 1, 2, 3)], 0)
    with pytest.raises(NonPlanarFace):
        face_normal(mesh, 0)


# --- dihedral angles ---------------------------------------------------------


def test_cube_dihedrals():
    cube = build_canonical(CanonicalSpec.cube())
    for a, b in cube.edges:
        theta, sign = signed_dihedral(cube, a, b)
        assert theta == pytest.approx(math.pi / 2, abs=1e-12)
        assert sign == 1


def test_pancake_dihedrals_are_pi():
    pancake = build_canonical(CanonicalSpec.pancake())
    for a, b in pancake.edges:
        assert signed_dihedral(pancake, a, b)[0] == math.pi


def test_regular_tetrahedron_dihedrals():
    tet = build_canonical(CanonicalSpec.tetrahedron())
    for a, b in tet.edges:
        theta, sign = signed_dihedral(tet, a, b)
        assert math.cos(theta) == pytest.approx(-1 / 3, abs=1e-12)
        assert sign == 1


def test_torus_inner_vertical_edge_is_concave():
    torus = build_canonical(CanonicalSpec.torus(1, 2, 1))
    for a, b in [(0, 3), (1, 4), (2, 5)]:
        theta, sign = signed_dihedral(torus, a, b)
        assert theta == pytest.approx(2 * math.pi / 3, abs=1e-12)
        assert sign == -1


def test_double_pyramid_upper_edge_concave_above_two():
    # edge BC = vertices (1, 2)
    for z, expected in [(1.0, 1), (1.9, 1), (2.5, -1), (3.0, -1)]:
        mesh = build_canonical(CanonicalSpec.double_pyramid(1.0, z))
        assert signed_dihedral(mesh, 1, 2)[1] == expected


def test_double_pyramid_lower_edge_angle_rule():
    # sin(theta_AD / 2) = z / sqrt(l^2 - 1) on edge AD = vertices (0, 3)
    for z in (0.5, 1.0, 3.0):
        mesh = build_canonical(CanonicalSpec.double_pyramid(1.0, z))
        l, _ = double_pyramid_lengths(1.0, z)
        theta, sign = signed_dihedral(mesh, 0, 3)
        assert math.sin(theta / 2) == pytest.approx(z / math.sqrt(l * l - 1), abs=1e-12)
        assert sign == 1


def test_cos_theta_matches_normals_and_planes_on_random_meshes():
    for seed in range(5):
        mesh = random_mesh(SamplerConfig(10, seed=seed), RescaleConfig((1, 4), seed))
        for r in edge_records(mesh):
            n1, n2 = (unit_normal(mesh, f) for f in r.face_pair)
            assert math.cos(r.dihedral_angle) == pytest.approx(float(n1 @ n2), abs=1e-12)
            assert r.dihedral_angle == pytest.approx(dihedral_from_planes(mesh, *r.vertex_pair), abs=1e-12)


def test_sign_independent_of_edge_direction():
    mesh = random_mesh(SamplerConfig(12, seed=3), RescaleConfig((1, 4), 4))
    for a, b in mesh.edges:
        assert signed_dihedral(mesh, a, b) == signed_dihedral(mesh, b, a)


def test_convex_meshes_have_all_positive_signs():
    for seed in range(5):
        mesh = random_mesh(SamplerConfig(14, seed=seed))
        assert all(r.convexity_sign == 1 for r in edge_records(mesh))


@given(st.integers(0, 2**32), st.integers(5, 12))
def test_global_flip_negates_signs(seed, n):
    mesh = random_mesh(SamplerConfig(n, seed=seed), RescaleConfig((1, 4), seed))
    before = edge_records(mesh)
    after = {r.vertex_pair: r for r in edge_records(mesh.reversed())}
    for r in before:
        flipped = after[r.vertex_pair]
        assert flipped.convexity_sign == -r.convexity_sign
        assert flipped.dihedral_angle == pytest.approx(r.dihedral_angle, abs=1e-14)


def test_flat_fold_has_zero_angle_and_no_regge_contribution():
    mesh = square_pyramid_split_base()
    theta, sign = signed_dihedral(mesh, 0, 2)
    assert theta == pytest.approx(0.0, abs=1e-15) and sign == 1
    recs = {r.vertex_pair: r for r in edge_records(mesh)}
    assert recs[(0, 2)].dihedral_angle * recs[(0, 2)].length == pytest.approx(0.0, abs=1e-14)


# --- opposite and inscribed angles ----------------------------------------------


def test_opposite_angles_tetrahedron_and_cube():
    tet = build_canonical(CanonicalSpec.tetrahedron())
    cube = build_canonical(CanonicalSpec.cube(2.5))
    for a, b in tet.edges:
        assert np.allclose(opposite_angles(tet, a, b), [math.pi / 3] * 2, atol=1e-12)
    for a, b in cube.edges:
        assert np.allclose(opposite_angles(cube, a, b), [math.pi / 4] * 2, atol=1e-12)


def test_double_pyramid_bc_opposite_angle():
    h, z = 1.3, 0.8
    mesh = build_canonical(CanonicalSpec.double_pyramid(h, z))
    _, L = double_pyramid_lengths(h, z)
    for beta in opposite_angles(mesh, 1, 2):
        assert math.tan(beta / 2) ** 2 == pytest.approx(1 / (L * L - 1), abs=1e-12)


def test_center_angles_square_and_hexagon():
    cube = build_canonical(CanonicalSpec.cube())
    for f, face in enumerate(cube.faces):
        assert circumcircle_center_angle(cube, f, face[0], face[1]) == pytest.approx(math.pi / 2, abs=1e-12)
    prism = hexagonal_prism()
    for f in (0, 1):
        face = prism.faces[f]
        for k in range(6):
            psi = circumcircle_center_angle(prism, f, face[k], face[(k + 1) % 6])
            assert psi == pytest.approx(math.pi / 3, abs=1e-12)


def test_torus_outer_vertical_center_angle_matches_coupling():
    r, R, h = 1.0, 2.0, 1.0
    torus = build_canonical(CanonicalSpec.torus(r, R, h))
    a, b = 6, 9  # outer bottom / top of the first radial line
    f1, f2 = torus.edge_faces(a, b)
    psi1 = circumcircle_center_angle(torus, f1, a, b)
    psi2 = circumcircle_center_angle(torus, f2, a, b)
    expected = (math.sqrt(h * h + 3 * R * R) - math.sqrt(3) * R) / h
    assert math.sqrt(math.tan(psi1 / 4) * math.tan(psi2 / 4)) == pytest.approx(expected, abs=1e-12)


def test_non_concyclic_quad_raises():
    verts = [[1, 0, 0], [0, 2, 0], [-1, 0, 0], [0, -1, 0], [0, 0, 1]]
    faces = [(3, 2, 1, 0), (0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)]
    mesh = EmbeddedMesh(verts, faces, 0).validate()
    with pytest.raises(NotConcyclic):
        opposite_angles(mesh, 0, 1)


def test_inscribed_angles_agree_for_every_third_vertex():
    prism = hexagonal_prism()
    face = prism.faces[0]
    pa, pb = prism.vertices[face[0]], prism.vertices[face[1]]
    angles = [triangle_angles(prism.vertices[c], pa, pb)[0] for c in face[2:]]
    assert max(angles) - min(angles) < 1e-9


# --- Regge action --------------------------------------------------------------


def test_regge_pancake_and_tetrahedron():
    assert regge_action(build_canonical(CanonicalSpec.pancake())) == pytest.approx(3 * math.pi, abs=1e-12)
    tet = build_canonical(CanonicalSpec.tetrahedron())
    assert regge_action(tet) == pytest.approx(6 * math.acos(-1 / 3), abs=1e-12)
    assert regge_action(tet) == pytest.approx(11.46, abs=5e-3)


def test_regge_uses_signed_angles():
    mesh = random_mesh(SamplerConfig(11, seed=2), RescaleConfig((1, 4), 3))
    recs = edge_records(mesh)
    direct = sum(r.convexity_sign * r.dihedral_angle * r.length for r in recs)
    assert regge_action(mesh) == pytest.approx(direct, abs=1e-12)


# --- orientation -----------------------------------------------------------------


def test_orient_outward_tetrahedron_from_arbitrary_cycles():
    verts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float)
    faces = [(0, 1, 2), (1, 0, 3), (0, 2, 3), (3, 2, 1)]
    mesh = orient_outward(EmbeddedMesh(verts, faces, 0))
    for f in range(4):
        centroid = mesh.vertices[list(mesh.faces[f])].mean(axis=0)
        assert face_normal(mesh, f) @ centroid > 0


def test_orient_outward_repairs_one_reversed_face():
    good = random_mesh(SamplerConfig(9, seed=1))
    faces = list(good.faces)
    faces[3] = tuple(reversed(faces[3]))
    assert orient_outward(good.with_faces(faces)).faces == good.faces


def test_orientation_inherited_after_rescale():
    # seed 8: the hull contains the origin, so the reference is star-shaped
    sphere = random_mesh(SamplerConfig(12, seed=8))
    assert validate_closed(sphere).accepted
    rescaled = random_mesh(SamplerConfig(12, seed=8), RescaleConfig((1, 4), 9))
    assert orient_outward(rescaled, reference=sphere).faces == sphere.faces == rescaled.faces


def test_orient_outward_ambiguous_face():
    # a face whose plane contains the origin
    verts = [[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, 0, 1]]
    mesh = EmbeddedMesh(verts, [(0, 1, 2), (0, 3, 1), (1, 3, 2), (2, 3, 0)], 0)
    with pytest.raises(OrientationAmbiguous):
        orient_outward(mesh)
