"""Embedded polyhedral surfaces: storage, validation and file formats.

Faces are vertex-index cycles stored anti-clockwise when seen from outside,
so that adjacent faces traverse their shared edge in opposite directions.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateTriangle,
    MeshError,
    NonManifoldEdge,
    OrientationError,
)

Edge = tuple[int, int]

# area < DEGENERACY_TOL * (longest edge)^2 counts as a degenerate triangle
DEGENERACY_TOL = 1e-12


def edge_key(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def face_edges(face: Sequence[int]) -> Iterable[tuple[int, int]]:
    """Directed edges (a, b) of a face cycle, in cycle order."""
    n = len(face)
    for k in range(n):
        yield face[k], face[(k + 1) % n]


@dataclass(frozen=True, eq=False)
class EmbeddedMesh:
    """Vertices in R^3 with outward-ordered polygonal faces.

    ``pinned_dihedrals`` maps an undirected edge key to a fixed dihedral angle;
    it is used for degenerate embeddings (the triangular pancake) where the
    normal-based computation is indeterminate.
    """

    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]
    genus: int = 0
    name: str = ""
    pinned_dihedrals: Mapping[Edge, float] = field(default_factory=dict)

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=np.float64, copy=True)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise MeshError(f"vertices must have shape (V, 3), got {verts.shape}")
        if not np.all(np.isfinite(verts)):
            raise MeshError("vertex coordinates must be finite")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(
            self, "faces", tuple(tuple(int(i) for i in f) for f in self.faces)
        )
        object.__setattr__(
            self,
            "pinned_dihedrals",
            {edge_key(*k): float(v) for k, v in dict(self.pinned_dihedrals).items()},
        )

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def _incidence(self) -> dict[Edge, list[tuple[int, bool]]]:
        # edge key -> [(face index, traverses key[0] -> key[1])]
        inc: dict[Edge, list[tuple[int, bool]]] = {}
        for fi, face in enumerate(self.faces):
            for a, b in face_edges(face):
                key = edge_key(a, b)
                inc.setdefault(key, []).append((fi, a == key[0]))
        return inc

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        """Undirected edges in order of first appearance in the face list."""
        return tuple(self._incidence)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    def edge_faces(self, a: int, b: int) -> tuple[int, int]:
        """Faces (first, second) on the directed edge a -> b.

        The first face is the one whose cycle contains a -> b.
        """
        key = edge_key(a, b)
        inc = self._incidence.get(key)
        if inc is None:
            raise NonManifoldEdge(f"edge {key} is not in the mesh")
        if len(inc) != 2:
            raise NonManifoldEdge(f"edge {key} has {len(inc)} incident faces")
        (f0, fwd0), (f1, fwd1) = inc
        if fwd0 == fwd1:
            raise OrientationError(f"faces {f0} and {f1} traverse edge {key} the same way")
        forward = f0 if fwd0 else f1
        backward = f1 if fwd0 else f0
        return (forward, backward) if a == key[0] else (backward, forward)

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def edge_length(self, a: int, b: int) -> float:
        return float(np.linalg.norm(self.vertices[b] - self.vertices[a]))

    def validate(self) -> "EmbeddedMesh":
        """Check every structural invariant; raise on the first violation."""
        nv = self.n_vertices
        for fi, face in enumerate(self.faces):
            if len(face) < 3:
                raise MeshError(f"face {fi} has fewer than 3 vertices")
            if len(set(face)) != len(face):
                raise MeshError(f"face {fi} repeats a vertex")
            if min(face) < 0 or max(face) >= nv:
                raise MeshError(f"face {fi} references a missing vertex")
        for key, inc in self._incidence.items():
            if len(inc) != 2:
                raise NonManifoldEdge(f"edge {key} has {len(inc)} incident faces")
            if inc[0][1] == inc[1][1]:
                raise OrientationError(f"edge {key} is traversed twice in the same direction")
            if self.edge_length(*key) == 0.0:
                raise MeshError(f"edge {key} has zero length")
        chi = self.euler_characteristic()
        if chi != 2 - 2 * self.genus:
            raise MeshError(
                f"Euler characteristic {chi} does not match genus {self.genus}"
            )
        for fi, face in enumerate(self.faces):
            if len(face) == 3 and triangle_is_degenerate(*self.vertices[list(face)]):
                raise DegenerateTriangle(f"face {fi} is degenerate")
        return self

    def with_vertices(self, vertices: np.ndarray) -> "EmbeddedMesh":
        return EmbeddedMesh(vertices, self.faces, self.genus, self.name, self.pinned_dihedrals)

    def with_faces(self, faces: Sequence[Sequence[int]]) -> "EmbeddedMesh":
        return EmbeddedMesh(self.vertices, faces, self.genus, self.name, self.pinned_dihedrals)

    def reversed(self) -> "EmbeddedMesh":
        """Same surface with every face cycle reversed (inside out)."""
        return self.with_faces([tuple(reversed(f)) for f in self.faces])

    # --- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "vertices": self.vertices.tolist(),
            "faces": [list(f) for f in self.faces],
            "genus": self.genus,
        }
        if self.name:
            out["name"] = self.name
        if self.pinned_dihedrals:
            out["pinned_dihedrals"] = [[a, b, t] for (a, b), t in self.pinned_dihedrals.items()]
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "EmbeddedMesh":
        pinned = {(int(a), int(b)): float(t) for a, b, t in data.get("pinned_dihedrals", [])}
        return cls(
            np.asarray(data["vertices"], dtype=np.float64),
            data["faces"],
            int(data.get("genus", 0)),
            str(data.get("name", "")),
            pinned,
        )


def triangle_is_degenerate(a, b, c) -> bool:
    ab, ac, bc = b - a, c - a, c - b
    area = 0.5 * np.linalg.norm(np.cross(ab, ac))
    longest = max(np.dot(ab, ab), np.dot(ac, ac), np.dot(bc, bc))
    return bool(area < DEGENERACY_TOL * longest)


def signed_volume(vertices: np.ndarray, faces: Sequence[Sequence[int]]) -> float:
    """Enclosed volume; positive when faces are ordered outward."""
    vol = 0.0
    for face in faces:
        p0 = vertices[face[0]]
        for k in range(1, len(face) - 1):
            vol += np.dot(p0, np.cross(vertices[face[k]], vertices[face[k + 1]]))
    return vol / 6.0


def repair_orientation(mesh: EmbeddedMesh) -> EmbeddedMesh:
    """Make face cycles mutually consistent, then outward by signed volume.

    Works on any closed orientable manifold mesh without reference geometry.
    """
    faces = [list(f) for f in mesh.faces]
    incidence: dict[Edge, list[int]] = {}
    for fi, face in enumerate(faces):
        for a, b in face_edges(face):
            incidence.setdefault(edge_key(a, b), []).append(fi)
    for key, fs in incidence.items():
        if len(fs) != 2:
            raise NonManifoldEdge(f"edge {key} has {len(fs)} incident faces")

    def directed(fi):
        return set(face_edges(faces[fi]))

    seen = [False] * len(faces)
    for root in range(len(faces)):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            fi = queue.popleft()
            for a, b in face_edges(faces[fi]):
                f0, f1 = incidence[edge_key(a, b)]
                other = f1 if f0 == fi else f0
                if other == fi:
                    continue
                if seen[other]:
                    if (a, b) in directed(other):
                        raise OrientationError("surface is not orientable")
                    continue
                if (a, b) in directed(other):
                    faces[other].reverse()
                seen[other] = True
                queue.append(other)
    if signed_volume(mesh.vertices, faces) < 0:
        faces = [f[::-1] for f in faces]
    return mesh.with_faces([tuple(f) for f in faces])


# --- file formats ---------------------------------------------------------


def save_mesh(mesh: EmbeddedMesh, path: str | Path) -> None:
    Path(path).write_text(json.dumps(mesh.to_dict(), indent=1) + "\n")


def load_mesh(path: str | Path) -> EmbeddedMesh:
    """Load a canonical JSON mesh, or an OFF file (orientation repaired)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".off" or text.lstrip().startswith("OFF"):
        return read_off(text, name=path.stem)
    mesh = EmbeddedMesh.from_dict(json.loads(text))
    if not mesh.name:
        mesh = EmbeddedMesh(mesh.vertices, mesh.faces, mesh.genus, path.stem, mesh.pinned_dihedrals)
    return mesh


def read_off(text: str, name: str = "", genus: int = 0) -> EmbeddedMesh:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    tokens = [ln for ln in lines if ln]
    if not tokens or not tokens[0].startswith("OFF"):
        raise MeshError("missing OFF header")
    header = tokens[0][3:].split()
    rest = tokens[1:]
    if not header:
        header, rest = rest[0].split(), rest[1:]
    nv, nf = int(header[0]), int(header[1])
    verts = np.array([[float(x) for x in rest[k].split()[:3]] for k in range(nv)])
    faces = []
    for k in range(nv, nv + nf):
        vals = [int(x) for x in rest[k].split()]
        faces.append(tuple(vals[1 : 1 + vals[0]]))
    return repair_orientation(EmbeddedMesh(verts, faces, genus, name))


def write_off(mesh: EmbeddedMesh) -> str:
    out = ["OFF", f"{mesh.n_vertices} {mesh.n_faces} {mesh.n_edges}"]
    out += [" ".join(repr(float(x)) for x in v) for v in mesh.vertices]
    out += [" ".join(str(i) for i in (len(f), *f)) for f in mesh.faces]
    return "\n".join(out) + "\n"
