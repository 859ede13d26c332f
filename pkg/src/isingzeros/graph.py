"""Ising graphs: the dual of a mesh, or any finite multigraph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import IsingZerosError
from .geometry import EdgeRecord, edge_records
from .mesh import Edge, EmbeddedMesh


@dataclass(frozen=True)
class IsingGraph:
    """Nodes 0..node_count-1 and undirected links; link id = position in ``links``.

    ``mesh_edges`` optionally maps each link id back to the mesh edge it is
    dual to.
    """

    node_count: int
    links: tuple[tuple[int, int], ...]
    mesh_edges: tuple[Edge, ...] | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "links", tuple((int(a), int(b)) for a, b in self.links))
        for a, b in self.links:
            if not (0 <= a < self.node_count and 0 <= b < self.node_count):
                raise IsingZerosError(f"link ({a}, {b}) references a missing node")

    @property
    def link_count(self) -> int:
        return len(self.links)

    def degrees(self) -> list[int]:
        deg = [0] * self.node_count
        for a, b in self.links:
            deg[a] += 1
            deg[b] += 1
        return deg

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per node, the (neighbor, link id) pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.node_count)]
        for lid, (a, b) in enumerate(self.links):
            adj[a].append((b, lid))
            if b != a:
                adj[b].append((a, lid))
        return adj

    def is_connected(self) -> bool:
        if self.node_count == 0:
            return True
        adj = self.adjacency()
        seen = {0}
        queue = deque([0])
        while queue:
            n = queue.popleft()
            for m, _ in adj[n]:
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
        return len(seen) == self.node_count

    @property
    def cycle_dimension(self) -> int:
        return self.link_count - self.node_count + 1

    def to_text(self) -> str:
        lines = [f"# ising graph {self.name}".rstrip(), f"nodes {self.node_count}", f"links {self.link_count}"]
        lines += [f"{lid} {a} {b}" for lid, (a, b) in enumerate(self.links)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IsingGraph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        header = {r[0]: int(r[1]) for r in rows[:2]}
        links = [(int(r[1]), int(r[2])) for r in sorted(rows[2:], key=lambda r: int(r[0]))]
        if len(links) != header["links"]:
            raise IsingZerosError("link count does not match header")
        return cls(header["nodes"], tuple(links))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())


def build_dual(mesh: EmbeddedMesh) -> tuple[IsingGraph, list[EdgeRecord]]:
    """One node per face, one link per edge; records are indexed by link id."""
    mesh.validate()
    records = edge_records(mesh)
    links = tuple(r.face_pair for r in records)
    graph = IsingGraph(mesh.n_faces, links, tuple(r.vertex_pair for r in records), mesh.name)
    return graph, records


def theta_graph() -> IsingGraph:
    return IsingGraph(2, ((0, 1), (0, 1), (0, 1)), name="theta")


def cycle_space_basis(graph: IsingGraph) -> list[frozenset[int]]:
    """Fundamental cycles of a BFS spanning tree, as sets of link ids.

    Each element is an even subgraph; together they span the binary cycle
    space, of dimension L - N + 1 for a connected graph.
    """
    if not graph.is_connected():
        raise IsingZerosError("cycle space basis needs a connected graph")
    adj = graph.adjacency()
    parent_link = [-1] * graph.node_count
    parent = [-1] * graph.node_count
    depth = [0] * graph.node_count
    tree: set[int] = set()
    seen = [False] * graph.node_count
    seen[0] = True
    queue = deque([0])
    while queue:
        n = queue.popleft()
        for m, lid in adj[n]:
            if not seen[m]:
                seen[m] = True
                parent[m], parent_link[m], depth[m] = n, lid, depth[n] + 1
                tree.add(lid)
                queue.append(m)

    basis = []
    for lid, (a, b) in enumerate(graph.links):
        if lid in tree:
            continue
        cycle = {lid}
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            cycle ^= {parent_link[a]}
            a = parent[a]
        basis.append(frozenset(cycle))
    return basis


def basis_masks(basis: Sequence[frozenset[int]]) -> list[int]:
    return [sum(1 << lid for lid in cyc) for cyc in basis]


def even_subgraphs(graph: IsingGraph) -> list[frozenset[int]]:
    """Every even subgraph (as link-id sets), enumerated in Gray-code order.

    Intended for small graphs: the list has 2^(L - N + 1) entries.
    """
    masks = basis_masks(cycle_space_basis(graph))
    current = 0
    out = [frozenset()]
    for k in range(1, 1 << len(masks)):
        current ^= masks[(k & -k).bit_length() - 1]
        out.append(frozenset(i for i in range(graph.link_count) if current >> i & 1))
    return out
