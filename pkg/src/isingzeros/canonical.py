"""Parametric polyhedra with closed-form couplings and loop polynomials.

Each constructor also labels every mesh edge with a symmetry class, so the
closed-form expressions (written per class) can be compared link by link
with the generic geometry and enumeration code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidParameters, ShapeMismatch
from .geometry import orient_outward
from .mesh import EmbeddedMesh, edge_key, repair_orientation

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)

KINDS = (
    "pancake",
    "tetrahedron_regular",
    "tetrahedron_points",
    "pyramid",
    "double_pyramid",
    "cube",
    "prismatic_torus",
)


@dataclass(frozen=True)
class CanonicalSpec:
    kind: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameters(f"unknown canonical kind {self.kind!r}")
        object.__setattr__(self, "params", dict(self.params))
        p = self.params
        if self.kind == "pyramid" and not p.get("h", 0) > 0:
            raise InvalidParameters("pyramid needs h > 0")
        if self.kind == "double_pyramid":
            if not p.get("h", 0) > 0 or p.get("z", -1) < 0:
                raise InvalidParameters("double pyramid needs h > 0 and z >= 0")
        if self.kind == "cube" and not p.get("a", 1.0) > 0:
            raise InvalidParameters("cube needs a > 0")
        if self.kind == "prismatic_torus":
            r, R, h = p.get("r", 0), p.get("R", 0), p.get("h", 0)
            if not (0 < r < R and h > 0):
                raise InvalidParameters("prismatic torus needs 0 < r < R and h > 0")

    def __getitem__(self, key):
        return self.params[key]

    @property
    def label(self) -> str:
        if not self.params:
            return self.kind
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items() if not isinstance(v, (list, tuple)))
        return f"{self.kind}({args})"

    # convenience constructors
    @classmethod
    def pancake(cls, angles=(math.pi / 3, math.pi / 3, math.pi / 3)):
        return cls("pancake", {"angles": tuple(angles)})

    @classmethod
    def tetrahedron(cls):
        return cls("tetrahedron_regular")

    @classmethod
    def pyramid(cls, h):
        return cls("pyramid", {"h": h})

    @classmethod
    def double_pyramid(cls, h, z):
        return cls("double_pyramid", {"h": h, "z": z})

    @classmethod
    def cube(cls, a=1.0):
        return cls("cube", {"a": a})

    @classmethod
    def torus(cls, r, R, h):
        return cls("prismatic_torus", {"r": r, "R": R, "h": h})


def _orient_about_centroid(verts, faces, name) -> EmbeddedMesh:
    mesh = EmbeddedMesh(verts, faces, 0, name)
    return orient_outward(mesh, mesh.vertices - mesh.vertices.mean(axis=0)).validate()


def _pancake(spec):
    angles = spec.params.get("angles", (math.pi / 3,) * 3)
    if len(angles) != 3 or abs(sum(angles) - math.pi) > 1e-12 or min(angles) <= 0:
        raise InvalidParameters("pancake angles must be positive and sum to pi")
    a0, a1, _ = angles
    # unit base from vertex 0 to vertex 1; law of sines for the other sides
    side02 = math.sin(a1) / math.sin(angles[2])
    verts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [side02 * math.cos(a0), side02 * math.sin(a0), 0.0]]
    faces = [(0, 1, 2), (0, 2, 1)]
    pinned = {(0, 1): math.pi, (1, 2): math.pi, (0, 2): math.pi}
    return EmbeddedMesh(verts, faces, 0, spec.label, pinned).validate()


def _tetra_regular(spec):
    verts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float) / (2 * SQ2)
    faces = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    return _orient_about_centroid(verts, faces, spec.label)


def _tetra_points(spec):
    verts = np.asarray(spec.params["points"], dtype=float).reshape(4, 3)
    faces = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    return _orient_about_centroid(verts, faces, spec.label)


def _pyramid(spec):
    h = spec["h"]
    verts = [[1, 1, 0], [-1, 1, 0], [-1, -1, 0], [1, -1, 0], [0, 0, h]]
    faces = [(0, 1, 2, 3), (0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)]
    return _orient_about_centroid(verts, faces, spec.label)


def _double_pyramid_vertices(h, z):
    # A, B, C, D, E, F
    return np.array(
        [[0, 0, 0], [0, 0, 2], [2, 0, 2], [2, 0, 0], [1, h, z], [1, -h, z]], dtype=float
    )


def _double_pyramid(spec):
    h, z = spec["h"], spec["z"]
    faces = [(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4), (0, 1, 5), (1, 2, 5), (2, 3, 5), (3, 0, 5)]
    # orientation is fixed on the convex z = 1 shape and kept for any z
    reference = _double_pyramid_vertices(h, 1.0)
    mesh = EmbeddedMesh(_double_pyramid_vertices(h, z), faces, 0, spec.label)
    return orient_outward(mesh, reference - reference.mean(axis=0)).validate()


def _cube(spec):
    a = spec.params.get("a", 1.0)
    verts = a * np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=float)
    faces = [(0, 1, 3, 2), (4, 5, 7, 6), (0, 1, 5, 4), (2, 3, 7, 6), (0, 2, 6, 4), (1, 3, 7, 5)]
    return _orient_about_centroid(verts, faces, spec.label)


def _torus(spec):
    r, R, h = spec["r"], spec["R"], spec["h"]
    ang = [math.pi / 2 + 2 * math.pi * k / 3 for k in range(3)]
    verts = []
    for rad in (r, R):
        for z in (0.0, h):
            verts += [[rad * math.cos(t), rad * math.sin(t), z] for t in ang]
    # 0-2 inner bottom, 3-5 inner top, 6-8 outer bottom, 9-11 outer top
    ib, it, ob, ot = (lambda k: k % 3), (lambda k: 3 + k % 3), (lambda k: 6 + k % 3), (lambda k: 9 + k % 3)
    faces = []
    for k in range(3):
        faces.append((ib(k), ib(k + 1), ob(k + 1), ob(k)))
        faces.append((it(k), ot(k), ot(k + 1), it(k + 1)))
        faces.append((ib(k), it(k), it(k + 1), ib(k + 1)))
        faces.append((ob(k), ob(k + 1), ot(k + 1), ot(k)))
    mesh = EmbeddedMesh(verts, faces, 1, spec.label)
    return repair_orientation(mesh).validate()


_BUILDERS = {
    "pancake": _pancake,
    "tetrahedron_regular": _tetra_regular,
    "tetrahedron_points": _tetra_points,
    "pyramid": _pyramid,
    "double_pyramid": _double_pyramid,
    "cube": _cube,
    "prismatic_torus": _torus,
}


def build_canonical(spec: CanonicalSpec) -> EmbeddedMesh:
    return _BUILDERS[spec.kind](spec)


# --- symmetry classes of edges ----------------------------------------------

_TETRA_LABELS = {(0, 1): "1", (0, 2): "2", (1, 2): "3", (2, 3): "4", (1, 3): "5", (0, 3): "6"}


def edge_classes(spec: CanonicalSpec, mesh: EmbeddedMesh) -> list[str]:
    """Symmetry-class label of every edge, in ``mesh.edges`` order."""
    out = []
    for a, b in mesh.edges:
        key = edge_key(a, b)
        kind = spec.kind
        if kind == "pancake":
            # class k is the edge opposite vertex k
            out.append(str(3 - a - b))
        elif kind in ("tetrahedron_regular", "tetrahedron_points"):
            out.append(_TETRA_LABELS[key])
        elif kind == "pyramid":
            out.append("summit" if 4 in key else "base")
        elif kind == "double_pyramid":
            if key == (1, 2):
                out.append("u")
            elif key == (0, 3):
                out.append("d")
            elif key in ((0, 1), (2, 3)):
                out.append("s")
            elif key[0] in (1, 2):
                out.append("su")
            else:
                out.append("sd")
        elif kind == "cube":
            out.append("c")
        elif kind == "prismatic_torus":
            ra, rb = a // 6, b // 6  # 0 inner, 1 outer
            za, zb = (a % 6) // 3, (b % 6) // 3
            if ra != rb:
                out.append("Y")
            elif za != zb:
                out.append("vi" if ra == 0 else "ve")
            else:
                out.append("hi" if ra == 0 else "he")
        else:
            raise InvalidParameters(kind)
    return out


def expand_classes(classes: list[str], values: Mapping[str, complex]) -> np.ndarray:
    """Per-link coupling vector from per-class values."""
    missing = set(classes) - set(values)
    if missing:
        raise ShapeMismatch(f"no value for classes {sorted(missing)}")
    return np.array([values[c] for c in classes], dtype=np.complex128)


# --- closed-form couplings --------------------------------------------------


def double_pyramid_lengths(h: float, z: float) -> tuple[float, float]:
    """(l, L): lengths of the lower (to A, D) and upper (to B, C) summit edges."""
    return math.sqrt(1 + h * h + z * z), math.sqrt(1 + h * h + (2 - z) ** 2)


def reference_couplings(spec: CanonicalSpec) -> dict[str, complex]:
    """Closed-form geometric couplings per symmetry class."""
    p = spec.params
    if spec.kind == "pancake":
        angles = p.get("angles", (math.pi / 3,) * 3)
        return {str(k): 1j * math.tan(angles[k] / 2) for k in range(3)}
    if spec.kind == "tetrahedron_regular":
        y = (1 + 1j * SQ2) / 3
        return {str(k): y for k in range(1, 7)}
    if spec.kind == "pyramid":
        h = p["h"]
        base_sq = (-1 + 1j * h) * (SQ2 - 1) / (h * h + 1)
        s = math.sqrt(h * h + 2)
        summit = (s + 1j * h) * (s - 1) / ((h * h + 1) * SQ2)
        return {"base": complex(np.sqrt(base_sq)), "summit": summit}
    if spec.kind == "double_pyramid":
        h, z = p["h"], p["z"]
        l, L = double_pyramid_lengths(h, z)
        su_sq = 4 * (2 - z + 1j * h * L) / ((L + 1) * (l + L + 2) * (l - L + 2))
        sd_sq = 4 * (z + 1j * h * l) / ((l + 1) * (L + l + 2) * (L - l + 2))
        return {
            "u": (h + 1j * (2 - z)) / (L * L - 1),
            "d": (h + 1j * z) / (l * l - 1),
            "s": 4 * (h + 1j) / ((L + l + 2) * (L + l - 2)),
            "su": complex(np.sqrt(su_sq)),
            "sd": complex(np.sqrt(sd_sq)),
        }
    if spec.kind == "cube":
        return {"c": np.exp(1j * math.pi / 4) * math.tan(math.pi / 8)}
    if spec.kind == "prismatic_torus":
        return torus_couplings(p["r"], p["R"], p["h"])
    raise InvalidParameters(f"no closed-form couplings for {spec.kind}")


def torus_couplings(r: float, R: float, h: float) -> dict[str, complex]:
    m = math.sqrt(r * r + r * R + R * R)
    si, se = math.sqrt(h * h + 3 * r * r), math.sqrt(h * h + 3 * R * R)
    return {
        "Y": (2 * m - SQ3 * (R + r)) / (R - r),
        "vi": np.exp(-1j * math.pi / 3) * (si - SQ3 * r) / h,
        "hi": np.exp(1j * math.pi / 4) * math.sqrt((si - h) * (2 * m - r - 2 * R)) / (SQ3 * r),
        "ve": np.exp(1j * math.pi / 3) * (se - SQ3 * R) / h,
        "he": np.exp(1j * math.pi / 4) * math.sqrt((se - h) * (2 * r + R + 2 * m)) / (SQ3 * R),
    }


# --- closed-form loop polynomials --------------------------------------------


def p_theta(y1, y2, y3):
    return 1 + y1 * y2 + y2 * y3 + y3 * y1


def p_tetrahedral(y1, y2, y3, y4, y5, y6):
    return (
        1
        + y1 * y2 * y6
        + y1 * y5 * y3
        + y4 * y2 * y3
        + y4 * y5 * y6
        + y1 * y2 * y4 * y5
        + y2 * y3 * y5 * y6
        + y1 * y3 * y4 * y6
    )


def p_tetrahedral_homogeneous(y):
    return 1 + 4 * y**3 + 3 * y**4


def p_pyramid(y, yt):
    """Square-base pyramid graph; ``y`` on base links, ``yt`` between triangles."""
    return 1 + yt**4 + 4 * yt * y**2 * (1 + yt**2) + 2 * yt**2 * y**2 * (2 + y**2)


def p_double_pyramid_homogeneous(y):
    """Octahedral graph (dual of the cube), equal couplings on all 12 links."""
    return (1 + y) ** 4 * (1 + y**2) ** 2 * (1 - 4 * y + 8 * y**2 - 4 * y**3 + y**4)


def p_cube_homogeneous(y):
    return 1 + 6 * y**4 + 16 * y**6 + 9 * y**8


def p_cube(yu, yd, ys, ysu, ysd):
    """Cube graph (dual of the double pyramid) with its five coupling classes."""
    su2, sd2 = ysu**2, ysd**2
    return (
        ys**2 * (sd2 + su2) ** 2
        + (1 + sd2 * su2) ** 2
        + 2 * ys * yu * su2 * (1 + sd2) ** 2
        + 2 * ys * yd * sd2 * (1 + su2) ** 2
        + 4 * yu * yd * su2 * sd2
        + 4 * yu * yd * ys**2 * su2 * sd2
    )


def p_torus(y, yhi, yhe, yvi, yve):
    """Prismatic-torus graph; constant term 1 (no 2^faces factor)."""
    q = (y - 1) * y + 1
    pp = y * y + y + 1
    A = y * (y * ((y - 2) * y + 5) - 2) + 1
    B = ((y - 5) * y + 1) * q
    qv = (yvi - 1) * yvi + 1
    qe = (yve - 1) * yve + 1
    pv = yvi * yvi + yvi + 1
    pe = yve * yve + yve + 1
    mix = yve * (yvi * (yve + yvi + 2) + 1) + yvi
    quad = yve**2 * (yvi * (A * yvi - B) + A) + yve * (yvi * (-B * yvi + 5 * A) - B) + yvi * (A * yvi - B) + A
    inner = (
        yhe**6 * yhi**2 * qe * (q**2 * yhi**4 * qv + 6 * y * q * yhi**2 * yvi + 3 * y**2 * pv)
        + 3 * yhe**4 * (2 * y * pp * yhi**2 * mix + 2 * y * q * yhi**6 * yve * qv + yhi**4 * quad + y**2 * pe * qv)
        + 3 * yhe**2 * (y**2 * yhi**6 * pe * qv + 2 * y * pp * yhi**4 * mix + yhi**2 * quad + 2 * y * q * yve * qv)
        + qe * (3 * y**2 * yhi**4 * pv + 6 * y * q * yhi**2 * yvi + q**2 * qv)
    )
    return (y + 1) ** 2 * (yve + 1) * (yvi + 1) * inner


def reference_polynomial(spec: CanonicalSpec, values: Mapping[str, complex]) -> complex:
    """Closed-form loop polynomial of the dual graph at per-class couplings."""
    try:
        if spec.kind == "pancake":
            return p_theta(values["0"], values["1"], values["2"])
        if spec.kind in ("tetrahedron_regular", "tetrahedron_points"):
            return p_tetrahedral(*(values[str(k)] for k in range(1, 7)))
        if spec.kind == "pyramid":
            return p_pyramid(values["base"], values["summit"])
        if spec.kind == "double_pyramid":
            return p_cube(values["u"], values["d"], values["s"], values["su"], values["sd"])
        if spec.kind == "cube":
            return p_double_pyramid_homogeneous(values["c"])
        if spec.kind == "prismatic_torus":
            return p_torus(values["Y"], values["hi"], values["he"], values["vi"], values["ve"])
    except KeyError as exc:
        raise ShapeMismatch(f"missing coupling class {exc}") from None
    raise InvalidParameters(spec.kind)
