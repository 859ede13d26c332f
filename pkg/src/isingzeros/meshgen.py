"""Random spherical triangulations and their radial deformations.

Points are drawn on the unit sphere, triangulated by their convex hull
(which for cospherical points is the spherical Delaunay triangulation) and
then pushed in or out along their position rays. All randomness comes from
numpy's PCG64 generator seeded with explicit 64-bit integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, InvalidParameters, MeshError
from .geometry import polygon_area_vector
from .mesh import DEGENERACY_TOL, EmbeddedMesh

# orientation determinants below this (relative to extent^3) count as ties
HULL_TIE_TOL = 1e-15
# relative jitter used to break ties; the jittered copy only decides combinatorics
HULL_JITTER = 1e-12
_MAX_JITTER_TRIES = 4


@dataclass(frozen=True)
class SamplerConfig:
    n_points: int
    distribution: str = "uniform"
    seed: int = 0

    def __post_init__(self):
        if self.n_points < 4:
            raise InvalidParameters("need at least 4 points")
        if self.distribution not in ("uniform", "pole-weighted"):
            raise InvalidParameters(f"unknown distribution {self.distribution!r}")


@dataclass(frozen=True)
class RescaleConfig:
    factor_range: tuple[float, float] = (1.0, 4.0)
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.factor_range
        if not 0 < lo <= hi:
            raise InvalidParameters("rescale range needs 0 < lo <= hi")
        object.__setattr__(self, "factor_range", (float(lo), float(hi)))


def sample_sphere(config: SamplerConfig) -> np.ndarray:
    """Unit vectors, shape (n, 3).

    ``uniform`` normalizes standard Gaussian triples. ``pole-weighted``
    draws z = sign(u) sqrt(|u|) with u uniform, so the density of z grows
    linearly toward the poles, and a uniform azimuth.
    """
    rng = np.random.default_rng(config.seed)
    n = config.n_points
    if config.distribution == "uniform":
        pts = rng.standard_normal((n, 3))
        return pts / np.linalg.norm(pts, axis=1, keepdims=True)
    u = rng.uniform(-1.0, 1.0, n)
    z = np.sign(u) * np.sqrt(np.abs(u))
    phi = rng.uniform(0.0, 2 * np.pi, n)
    rho = np.sqrt(1.0 - z * z)
    pts = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


# --- convex hull -------------------------------------------------------------


class _Tie(Exception):
    pass


def _orient(p, a, b, c):
    return float(np.dot(np.cross(b - a, c - a), p - a))


def _initial_simplex(pts, tol):
    i0 = 0
    d = np.linalg.norm(pts - pts[i0], axis=1)
    i1 = int(np.argmax(d))
    if d[i1] <= tol:
        raise DegenerateInput("all points coincide")
    u = (pts[i1] - pts[i0]) / d[i1]
    rel = pts - pts[i0]
    off = np.linalg.norm(rel - np.outer(rel @ u, u), axis=1)
    i2 = int(np.argmax(off))
    if off[i2] <= tol:
        raise DegenerateInput("all points are collinear")
    n = np.cross(pts[i1] - pts[i0], pts[i2] - pts[i0])
    vol = rel @ n
    i3 = int(np.argmax(np.abs(vol)))
    return i0, i1, i2, i3, vol[i3]


def _hull_faces(pts: np.ndarray) -> list[tuple[int, int, int]]:
    extent = float(np.ptp(pts, axis=0).max())
    tie = HULL_TIE_TOL * extent**3
    i0, i1, i2, i3, vol = _initial_simplex(pts, DEGENERACY_TOL * extent)
    if abs(vol) <= tie:
        raise DegenerateInput("all points are coplanar")
    if vol > 0:  # i3 above (i0, i1, i2): flip the base
        i1, i2 = i2, i1
    faces = {0: (i0, i1, i2), 1: (i0, i3, i1), 2: (i1, i3, i2), 3: (i2, i3, i0)}
    next_id = 4
    seed_set = {i0, i1, i2, i3}
    for p in range(len(pts)):
        if p in seed_set:
            continue
        visible = []
        for fid, (a, b, c) in faces.items():
            o = _orient(pts[p], pts[a], pts[b], pts[c])
            if abs(o) <= tie:
                raise _Tie
            if o > 0:
                visible.append(fid)
        if not visible:
            raise DegenerateInput(f"point {p} is not in convex position")
        directed = set()
        for fid in visible:
            a, b, c = faces[fid]
            directed.update(((a, b), (b, c), (c, a)))
        horizon = [(a, b) for a, b in directed if (b, a) not in directed]
        for fid in visible:
            del faces[fid]
        for a, b in sorted(horizon):
            faces[next_id] = (a, b, p)
            next_id += 1
    return [faces[k] for k in sorted(faces)]


def convex_hull(points, jitter_seed: int = 0) -> tuple[list[tuple[int, int, int]], int]:
    """Outward-oriented hull triangles of points in convex position.

    Returns (faces, jitter_attempts). Ties (four coplanar points on a face)
    are broken by rebuilding on a copy perturbed by HULL_JITTER * extent,
    drawn from ``jitter_seed``; the count of such retries is returned so it
    can be recorded.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 4:
        raise DegenerateInput("need an (n >= 4, 3) point array")
    if not np.all(np.isfinite(pts)):
        raise DegenerateInput("non-finite coordinates")
    extent = float(np.ptp(pts, axis=0).max())
    diff = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    np.fill_diagonal(diff, np.inf)
    if diff.min() <= DEGENERACY_TOL * extent:
        raise DegenerateInput("duplicate points")
    rng = np.random.default_rng(jitter_seed)
    work = pts
    for attempt in range(_MAX_JITTER_TRIES + 1):
        try:
            return _hull_faces(work), attempt
        except _Tie:
            work = pts + rng.uniform(-1.0, 1.0, pts.shape) * HULL_JITTER * extent
    raise DegenerateInput("hull ties persist after jitter")


def delaunay_sphere(points, jitter_seed: int = 0, name: str = "") -> EmbeddedMesh:
    """Triangulated sphere from the convex hull of the given points."""
    faces, _ = convex_hull(points, jitter_seed)
    return EmbeddedMesh(np.asarray(points, dtype=np.float64), faces, 0, name).validate()


def radial_rescale(mesh: EmbeddedMesh, config: RescaleConfig) -> EmbeddedMesh:
    """Multiply each vertex by an independent factor from ``factor_range``.

    Faces (and therefore orientation) are carried over unchanged.
    """
    rng = np.random.default_rng(config.seed)
    lo, hi = config.factor_range
    factors = rng.uniform(lo, hi, mesh.n_vertices) if hi > lo else np.full(mesh.n_vertices, lo)
    return mesh.with_vertices(mesh.vertices * factors[:, None])


def random_mesh(sampler: SamplerConfig, rescale: RescaleConfig | None = None, name: str = "") -> EmbeddedMesh:
    mesh = delaunay_sphere(sample_sphere(sampler), jitter_seed=sampler.seed, name=name)
    return radial_rescale(mesh, rescale) if rescale is not None else mesh


# --- validation --------------------------------------------------------------


@dataclass
class ValidationReport:
    manifold: bool = True
    oriented: bool = True
    euler_ok: bool = True
    degenerate_faces: list[int] = field(default_factory=list)
    star_shaped: bool = True
    reasons: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.reasons


def validate_closed(mesh: EmbeddedMesh) -> ValidationReport:
    """Report-only closed-polyhedron checks; never raises on bad geometry.

    Star-shapedness is tested face by face: the plane of every face must
    have the origin strictly on its inner side.
    """
    rep = ValidationReport()
    counts: dict[tuple[int, int], int] = {}
    for face in mesh.faces:
        for k in range(len(face)):
            d = (face[k], face[(k + 1) % len(face)])
            counts[d] = counts.get(d, 0) + 1
    undirected: dict[tuple[int, int], int] = {}
    for (a, b), c in counts.items():
        key = (min(a, b), max(a, b))
        undirected[key] = undirected.get(key, 0) + c
        if c > 1:
            rep.oriented = False
    if any(c != 2 for c in undirected.values()):
        rep.manifold = False
        rep.reasons.append("NonManifoldEdge")
    if rep.manifold and any((b, a) not in counts for a, b in counts):
        rep.oriented = False
    if not rep.oriented:
        rep.reasons.append("OrientationError")
    chi = mesh.n_vertices - len(undirected) + mesh.n_faces
    if chi != 2 - 2 * mesh.genus:
        rep.euler_ok = False
        rep.reasons.append("EulerCharacteristic")

    verts = mesh.vertices
    for fi, face in enumerate(mesh.faces):
        pts = verts[list(face)]
        n = polygon_area_vector(pts)
        longest = np.linalg.norm(pts - np.roll(pts, 1, axis=0), axis=1).max()
        area = float(np.linalg.norm(n))
        if longest == 0.0 or area < DEGENERACY_TOL * longest**2:
            rep.degenerate_faces.append(fi)
            continue
        if float(np.dot(n, pts.mean(axis=0))) <= 0.0:
            rep.star_shaped = False
    if rep.degenerate_faces:
        rep.reasons.append("DegenerateFace")
    if not rep.star_shaped:
        rep.reasons.append("NotStarShaped")
    return rep


def check_closed(mesh: EmbeddedMesh) -> EmbeddedMesh:
    """Raise MeshError with the report's reasons if the mesh is rejected."""
    rep = validate_closed(mesh)
    if not rep.accepted:
        raise MeshError(", ".join(rep.reasons))
    return mesh
