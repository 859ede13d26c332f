"""Angles, normals and signed dihedral angles of embedded polyhedra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateTriangle,
    NonPlanarFace,
    NotConcyclic,
    OrientationAmbiguous,
    ZeroAreaFace,
)
from .mesh import DEGENERACY_TOL, EmbeddedMesh, edge_key

# relative tolerance for planarity and concyclicity of polygonal faces
POLYGON_TOL = 1e-9
# |cross| / (|n1||n2|) below this treats the fold as flat or fully folded
SIGN_TOL = 1e-14


def half_tangent(l1: float, l2: float, l3: float) -> float:
    """tan(phi/2) for the angle phi between sides l1 and l2, opposite l3."""
    num = (l3 - l1 + l2) * (l3 + l1 - l2)
    den = (l1 + l2 - l3) * (l1 + l2 + l3)
    if num <= 0.0 or den <= 0.0:
        raise DegenerateTriangle(f"side lengths {l1}, {l2}, {l3} violate the triangle inequality")
    return math.sqrt(num / den)


def triangle_angles(a, b, c) -> tuple[float, float, float]:
    """Interior angles at a, b, c (radians) from the half-tangent length formula."""
    a, b, c = (np.asarray(p, dtype=np.float64) for p in (a, b, c))
    la = float(np.linalg.norm(c - b))  # opposite a
    lb = float(np.linalg.norm(a - c))
    lc = float(np.linalg.norm(b - a))
    area = 0.5 * float(np.linalg.norm(np.cross(b - a, c - a)))
    if area < DEGENERACY_TOL * max(la, lb, lc) ** 2:
        raise DegenerateTriangle("collinear triangle")
    return (
        2.0 * math.atan(half_tangent(lb, lc, la)),
        2.0 * math.atan(half_tangent(lc, la, lb)),
        2.0 * math.atan(half_tangent(la, lb, lc)),
    )


def polygon_area_vector(points: np.ndarray) -> np.ndarray:
    """Newell's formula: half the sum of p_k x p_{k+1}; equals 1/2 AB x AC for triangles."""
    if len(points) == 3:
        return 0.5 * np.cross(points[1] - points[0], points[2] - points[0])
    nxt = np.roll(points, -1, axis=0)
    return 0.5 * np.cross(points, nxt).sum(axis=0)


def face_normal(mesh: EmbeddedMesh, face: int, check_planar: bool = True) -> np.ndarray:
    """Outward, non-unit normal; its norm is the face area."""
    pts = mesh.vertices[list(mesh.faces[face])]
    n = polygon_area_vector(pts)
    if check_planar and len(pts) > 3:
        norm = np.linalg.norm(n)
        if norm == 0.0:
            raise ZeroAreaFace(f"face {face} has zero area")
        centroid = pts.mean(axis=0)
        dev = np.abs((pts - centroid) @ (n / norm)).max()
        scale = np.linalg.norm(pts - np.roll(pts, 1, axis=0), axis=1).max()
        if dev > POLYGON_TOL * scale:
            raise NonPlanarFace(f"face {face} deviates from its plane by {dev:.3g}")
    return n


def signed_dihedral(mesh: EmbeddedMesh, a: int, b: int) -> tuple[float, int]:
    """Dihedral angle theta in [0, pi] at edge (a, b) and its convexity sign.

    The first face is the one whose cycle runs a -> b. The sign is +1 when
    (N_first x N_second) . (b - a) > 0 (outward fold), -1 otherwise. Flat
    folds and pinned (fully folded) edges report +1.
    """
    key = edge_key(a, b)
    if key in mesh.pinned_dihedrals:
        return mesh.pinned_dihedrals[key], 1
    f1, f2 = mesh.edge_faces(a, b)
    n1 = face_normal(mesh, f1)
    n2 = face_normal(mesh, f2)
    m1, m2 = np.linalg.norm(n1), np.linalg.norm(n2)
    if m1 == 0.0 or m2 == 0.0:
        raise ZeroAreaFace(f"zero-area face at edge {key}")
    cross = np.cross(n1, n2)
    theta = math.atan2(float(np.linalg.norm(cross)), float(np.dot(n1, n2)))
    ab = mesh.vertices[b] - mesh.vertices[a]
    triple = float(np.dot(cross, ab))
    if abs(triple) <= SIGN_TOL * m1 * m2 * float(np.linalg.norm(ab)):
        return theta, 1
    return theta, 1 if triple > 0 else -1


def dihedral_from_planes(mesh: EmbeddedMesh, a: int, b: int) -> float:
    """Dihedral angle via the in-plane perpendiculars to the edge.

    Independent of the normal-vector route: theta = pi - (interior angle
    between the two half-planes). Only meaningful for triangle-like folds
    where each face has a vertex off the edge line.
    """
    f1, f2 = mesh.edge_faces(a, b)
    pa, pb = mesh.vertices[a], mesh.vertices[b]
    e = (pb - pa) / np.linalg.norm(pb - pa)

    def perpendicular(face):
        verts = mesh.vertices[list(mesh.faces[face])]
        cen = verts.mean(axis=0) - pa
        return cen - np.dot(cen, e) * e

    u, w = perpendicular(f1), perpendicular(f2)
    cos_int = np.dot(u, w) / (np.linalg.norm(u) * np.linalg.norm(w))
    return math.pi - math.acos(float(np.clip(cos_int, -1.0, 1.0)))


def _third_vertices(face: Sequence[int], a: int, b: int) -> list[int]:
    return [v for v in face if v != a and v != b]


def inscribed_angle(mesh: EmbeddedMesh, face: int, a: int, b: int) -> float:
    """Angle subtended by edge (a, b) at the other vertices of a face.

    For a triangle this is the opposite angle. For a polygon it must be
    concyclic, and the value is half the center angle of the edge.
    """
    cycle = mesh.faces[face]
    others = _third_vertices(cycle, a, b)
    if len(others) != len(cycle) - 2:
        raise ValueError(f"({a}, {b}) is not an edge of face {face}")
    pa, pb = mesh.vertices[a], mesh.vertices[b]
    angles = [triangle_angles(mesh.vertices[c], pa, pb)[0] for c in others]
    if len(cycle) > 3:
        face_normal(mesh, face)  # planarity
        _check_concyclic(mesh, face)
        if max(angles) - min(angles) > POLYGON_TOL:
            raise NotConcyclic(
                f"face {face}: inscribed angles spread {max(angles) - min(angles):.3g}"
            )
    return angles[0]


def _check_concyclic(mesh: EmbeddedMesh, face: int) -> None:
    pts = mesh.vertices[list(mesh.faces[face])]
    center = circumcenter(pts[0], pts[1], pts[2])
    radii = np.linalg.norm(pts - center, axis=1)
    if radii.max() - radii.min() > POLYGON_TOL * radii.max():
        raise NotConcyclic(f"face {face} vertices are not on a common circle")


def circumcenter(a, b, c) -> np.ndarray:
    ab, ac = b - a, c - a
    n = np.cross(ab, ac)
    nn = np.dot(n, n)
    if nn == 0.0:
        raise DegenerateTriangle("collinear points have no circumcircle")
    return a + (np.dot(ac, ac) * np.cross(n, ab) + np.dot(ab, ab) * np.cross(ac, n)) / (2.0 * nn)


def circumcircle_center_angle(mesh: EmbeddedMesh, face: int, a: int, b: int) -> float:
    """Center angle psi in (0, 2 pi) of edge (a, b) in the face's circumcircle."""
    return 2.0 * inscribed_angle(mesh, face, a, b)


def opposite_angles(mesh: EmbeddedMesh, a: int, b: int) -> tuple[float, float]:
    """Opposite angles (first face, second face) for the directed edge a -> b."""
    f1, f2 = mesh.edge_faces(a, b)
    return inscribed_angle(mesh, f1, a, b), inscribed_angle(mesh, f2, a, b)


@dataclass(frozen=True)
class EdgeRecord:
    """Geometry of one edge, as seen along the directed edge a -> b with a < b."""

    vertex_pair: tuple[int, int]
    face_pair: tuple[int, int]
    length: float
    opposite_angles: tuple[float, float]
    dihedral_angle: float
    convexity_sign: int

    @property
    def signed_dihedral(self) -> float:
        return self.convexity_sign * self.dihedral_angle


def edge_record(mesh: EmbeddedMesh, a: int, b: int) -> EdgeRecord:
    a, b = edge_key(a, b)
    theta, sign = signed_dihedral(mesh, a, b)
    return EdgeRecord(
        vertex_pair=(a, b),
        face_pair=mesh.edge_faces(a, b),
        length=mesh.edge_length(a, b),
        opposite_angles=opposite_angles(mesh, a, b),
        dihedral_angle=theta,
        convexity_sign=sign,
    )


def edge_records(mesh: EmbeddedMesh) -> list[EdgeRecord]:
    """One record per edge, in ``mesh.edges`` order."""
    return [edge_record(mesh, a, b) for a, b in mesh.edges]


def regge_action(mesh: EmbeddedMesh, records: Sequence[EdgeRecord] | None = None) -> float:
    """Sum over edges of signed dihedral angle times edge length."""
    if records is None:
        records = edge_records(mesh)
    return float(sum(r.convexity_sign * r.dihedral_angle * r.length for r in records))


def orient_outward(
    mesh: EmbeddedMesh, reference: EmbeddedMesh | np.ndarray | None = None, tol: float = 1e-9
) -> EmbeddedMesh:
    """Reorder each face so its normal points away from the origin.

    The test is made on ``reference`` vertex positions (a convex or
    star-shaped version of the same mesh, e.g. the sphere triangulation
    before radial rescaling); the resulting cycles are then used for ``mesh``.
    """
    if reference is None:
        ref = mesh.vertices
    elif isinstance(reference, EmbeddedMesh):
        ref = reference.vertices
    else:
        ref = np.asarray(reference, dtype=np.float64)
    faces = []
    for fi, face in enumerate(mesh.faces):
        pts = ref[list(face)]
        n = polygon_area_vector(pts)
        c = pts.mean(axis=0)
        proj = float(np.dot(n, c))
        if abs(proj) <= tol * np.linalg.norm(n) * np.linalg.norm(c):
            raise OrientationAmbiguous(f"face {fi} normal is orthogonal to its centroid")
        faces.append(face if proj > 0 else tuple(reversed(face)))
    out = mesh.with_faces(faces)
    for a, b in out.edges:
        out.edge_faces(a, b)  # raises if the cycles disagree
    return out

