"""Weighted 2-dimensional triangulations.

A triangulation stores one canonical representative per geometric edge
(``(u, v)`` with ``u < v``) and per geometric face (the rotation of the
input cycle that starts at its smallest vertex).  Reversed edges and
opposite faces are synthesized on demand; all weights are even, so a single
stored weight serves both orientations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

Edge = tuple[int, int]
Face = tuple[int, int, int]


class TriangulationError(ValueError):
    """Base class for invalid complexes and invalid queries on them."""


class LoopEdge(TriangulationError):
    pass


class MissingBoundaryEdge(TriangulationError):
    pass


class DuplicateFace(TriangulationError):
    pass


class DuplicateEdge(TriangulationError):
    pass


class Disconnected(TriangulationError):
    pass


class NonpositiveWeight(TriangulationError):
    pass


class UnknownEdge(TriangulationError, KeyError):
    pass


class UnknownVertex(TriangulationError, KeyError):
    pass


def canonical_edge(u: int, v: int) -> tuple[Edge, int]:
    """Return ``((min, max), sign)``; sign is -1 when ``(u, v)`` is the reversed edge."""
    if u == v:
        raise LoopEdge(f"loop at vertex {u}")
    return ((u, v), 1) if u < v else ((v, u), -1)


def canonical_face(a: int, b: int, c: int) -> Face:
    """Rotate a 3-cycle so that it starts at its smallest vertex.

    Rotations are direct permutations, so orientation is preserved.
    """
    if len({a, b, c}) != 3:
        raise TriangulationError(f"degenerate face {(a, b, c)}")
    m = min(a, b, c)
    if m == a:
        return (a, b, c)
    if m == b:
        return (b, c, a)
    return (c, a, b)


def face_key(face: Sequence[int]) -> tuple[tuple[int, int, int], int]:
    """Return the positively-ordered vertex triple and the face's sign relative to it."""
    a, b, c = canonical_face(*face)
    return ((a, b, c), 1) if b < c else ((a, c, b), -1)


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on an explicit vertex set."""

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], vertices: Iterable[int] | None = None) -> "Graph":
        canon = sorted({canonical_edge(int(u), int(v))[0] for u, v in edges})
        verts = set(vertices) if vertices is not None else set()
        verts.update(x for e in canon for x in e)
        return cls(tuple(sorted(verts)), tuple(canon))

    def degree(self, y: int) -> int:
        return sum(1 for e in self.edges if y in e)

    def is_connected(self) -> bool:
        if len(self.vertices) <= 1:
            return True
        return len(_component(self.vertices[0], self.edges)) == len(self.vertices)


@dataclass(frozen=True)
class LinkGraph(Graph):
    """Link of a vertex: edges ``e`` whose face-neighbour set contains ``center``."""

    center: int = -1


def _component(start: int, edges: Iterable[Edge]) -> set[int]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Validated weighted triangulation; build instances with :func:`build`."""

    n_vertices: int
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...]
    vertex_weights: np.ndarray = field(repr=False)
    edge_weights: np.ndarray = field(repr=False)
    face_weights: np.ndarray = field(repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Triangulation):
            return NotImplemented
        return (
            self.n_vertices == other.n_vertices
            and self.edges == other.edges
            and self.faces == other.faces
            and np.array_equal(self.vertex_weights, other.vertex_weights)
            and np.array_equal(self.edge_weights, other.edge_weights)
            and np.array_equal(self.face_weights, other.face_weights)
        )

    __hash__ = object.__hash__

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def face_index(self) -> dict[tuple[int, int, int], tuple[int, int]]:
        """Sorted vertex triple -> (face index, orientation of the stored face)."""
        out = {}
        for i, f in enumerate(self.faces):
            key, sign = face_key(f)
            out[key] = (i, sign)
        return out

    @cached_property
    def _neighbors(self) -> dict[Edge, tuple[int, ...]]:
        nb: dict[Edge, list[int]] = {e: [] for e in self.edges}
        for a, b, c in self.faces:
            for (u, v), w in (((a, b), c), ((b, c), a), ((c, a), b)):
                nb[canonical_edge(u, v)[0]].append(w)
        return {e: tuple(sorted(xs)) for e, xs in nb.items()}

    def locate_edge(self, u: int, v: int) -> tuple[int, int]:
        """Index of the stored representative of ``(u, v)`` and the orientation sign."""
        try:
            key, sign = canonical_edge(u, v)
        except LoopEdge:
            raise UnknownEdge(f"({u}, {v}) is not an edge") from None
        idx = self.edge_index.get(key)
        if idx is None:
            raise UnknownEdge(f"({u}, {v}) is not an edge")
        return idx, sign

    def locate_face(self, a: int, b: int, c: int) -> tuple[int, int] | None:
        """Index and orientation sign of the face on triangle ``(a, b, c)``, if it is a face."""
        key, sign = face_key((a, b, c))
        hit = self.face_index.get(key)
        if hit is None:
            return None
        idx, stored = hit
        return idx, sign * stored

    @property
    def is_homogeneous(self) -> bool:
        return bool(
            np.all(self.vertex_weights == 1.0)
            and np.all(self.edge_weights == 1.0)
            and np.all(self.face_weights == 1.0)
        )

    @property
    def graph(self) -> Graph:
        return Graph(tuple(range(self.n_vertices)), self.edges)

    def relabel(self, perm: Sequence[int]) -> "Triangulation":
        """Return the isomorphic complex with vertex ``x`` renamed ``perm[x]``."""
        perm = [int(p) for p in perm]
        if sorted(perm) != list(range(self.n_vertices)):
            raise TriangulationError("relabeling must be a permutation of the vertex ids")
        vw = np.empty_like(self.vertex_weights)
        vw[perm] = self.vertex_weights
        return build(
            self.n_vertices,
            [(perm[u], perm[v]) for u, v in self.edges],
            [tuple(perm[x] for x in f) for f in self.faces],
            vertex_weights=vw,
            edge_weights=self.edge_weights,
            face_weights=self.face_weights,
        )


def _weights(values, count: int, what: str) -> np.ndarray:
    if values is None:
        return np.ones(count)
    arr = np.asarray(values, dtype=float)
    if arr.shape != (count,):
        raise TriangulationError(f"expected {count} {what} weights, got shape {arr.shape}")
    bad = np.flatnonzero(~(arr > 0))
    if bad.size:
        raise NonpositiveWeight(f"{what} weight at position {bad[0]} is {arr[bad[0]]}")
    return arr


def build(
    n_vertices: int,
    edge_list: Iterable[Sequence[int]],
    face_list: Iterable[Sequence[int]] = (),
    vertex_weights: Sequence[float] | None = None,
    edge_weights: Sequence[float] | Mapping[Edge, float] | None = None,
    face_weights: Sequence[float] | None = None,
) -> Triangulation:
    """Validate and canonicalize a weighted triangulation.

    ``edge_weights`` and ``face_weights`` align with the order of
    ``edge_list`` / ``face_list`` as given; omitted weights are 1.
    Faces keep the orientation of their listed cyclic order.
    """
    n_vertices = int(n_vertices)
    if n_vertices < 1:
        raise TriangulationError("a triangulation needs at least one vertex")

    edge_list = [tuple(int(x) for x in e) for e in edge_list]
    face_list = [tuple(int(x) for x in f) for f in face_list]

    def check_vertex(x: int, where: str) -> None:
        if not 0 <= x < n_vertices:
            raise UnknownVertex(f"{where}: vertex {x} outside 0..{n_vertices - 1}")

    if isinstance(edge_weights, Mapping):
        edge_weights = [edge_weights.get(e, edge_weights.get(e[::-1], 1.0)) for e in edge_list]
    ew_in = _weights(edge_weights, len(edge_list), "edge")
    fw_in = _weights(face_weights, len(face_list), "face")
    vw = _weights(vertex_weights, n_vertices, "vertex")

    seen_edges: dict[Edge, float] = {}
    for i, e in enumerate(edge_list):
        if len(e) != 2:
            raise TriangulationError(f"edges[{i}]: expected 2 vertices, got {len(e)}")
        for x in e:
            check_vertex(x, f"edges[{i}]")
        if e[0] == e[1]:
            raise LoopEdge(f"edges[{i}]: loop at vertex {e[0]}")
        key = canonical_edge(*e)[0]
        if key in seen_edges:
            raise DuplicateEdge(f"edges[{i}]: edge {e} listed twice")
        seen_edges[key] = ew_in[i]

    seen_faces: dict[tuple[int, int, int], tuple[Face, float]] = {}
    for i, f in enumerate(face_list):
        if len(f) != 3:
            raise TriangulationError(f"faces[{i}]: expected 3 vertices, got {len(f)}")
        for x in f:
            check_vertex(x, f"faces[{i}]")
        if len(set(f)) != 3:
            raise TriangulationError(f"faces[{i}]: repeated vertex in {f}")
        for u, v in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
            if canonical_edge(u, v)[0] not in seen_edges:
                raise MissingBoundaryEdge(f"faces[{i}]: boundary edge ({u}, {v}) of {f} is not an edge")
        key = tuple(sorted(f))
        if key in seen_faces:
            raise DuplicateFace(f"faces[{i}]: triangle {key} already carries a face")
        seen_faces[key] = (canonical_face(*f), fw_in[i])

    edges = tuple(sorted(seen_edges))
    faces_sorted = sorted(seen_faces.values())
    faces = tuple(f for f, _ in faces_sorted)

    if n_vertices > 1 and len(_component(0, edges)) != n_vertices:
        missing = sorted(set(range(n_vertices)) - _component(0, edges))
        raise Disconnected(f"graph is not connected; vertex {missing[0]} unreachable from 0")

    return Triangulation(
        n_vertices=n_vertices,
        edges=edges,
        faces=faces,
        vertex_weights=vw,
        edge_weights=np.array([seen_edges[e] for e in edges], dtype=float),
        face_weights=np.array([w for _, w in faces_sorted], dtype=float),
    )


def complete_triangulation(n: int) -> Triangulation:
    """K_n with every triangle (i, j, k), i < j < k, as a face; homogeneous."""
    if n < 3:
        raise TriangulationError(f"a complete triangulation needs n >= 3, got {n}")
    return build(n, combinations(range(n), 2), combinations(range(n), 3))


def complete_graph_triangulation(n: int, faces: Iterable[Sequence[int]], indexing: str = "zero") -> Triangulation:
    """Homogeneous triangulation of K_n carrying the given faces."""
    shift = 1 if indexing == "one" else 0
    return build(n, combinations(range(n), 2), [tuple(x - shift for x in f) for f in faces])


def face_neighbors(t: Triangulation, e: Sequence[int]) -> frozenset[int]:
    """Vertices ``x`` such that ``(e-, e+, x)`` is a face (either orientation)."""
    idx, _ = t.locate_edge(*e)
    return frozenset(t._neighbors[t.edges[idx]])


def edge_face_degree(t: Triangulation, e: Sequence[int]) -> float:
    """``(1/r(e)) * sum of s over faces containing e``; equals |F_e| when homogeneous."""
    idx, _ = t.locate_edge(*e)
    u, v = t.edges[idx]
    total = 0.0
    for x in t._neighbors[(u, v)]:
        fidx, _ = t.locate_face(u, v, x)
        total += t.face_weights[fidx]
    return total / t.edge_weights[idx]


def link_graph(t: Triangulation, x: int) -> LinkGraph:
    if not 0 <= x < t.n_vertices:
        raise UnknownVertex(f"vertex {x} outside 0..{t.n_vertices - 1}")
    link_edges = sorted(tuple(y for y in f if y != x) for f in (sorted(f) for f in t.faces) if x in f)
    verts = sorted({y for e in link_edges for y in e})
    return LinkGraph(tuple(verts), tuple(link_edges), center=x)


def counts(t: Triangulation) -> tuple[int, int, int]:
    return t.n_vertices, len(t.edges), len(t.faces)


def is_complete_graph(t: Triangulation) -> bool:
    n = t.n_vertices
    return len(t.edges) == n * (n - 1) // 2


def is_complete_triangulation(t: Triangulation) -> bool:
    """Every triangle of the underlying graph carries a face."""
    edges = set(t.edges)
    adj: dict[int, set[int]] = {x: set() for x in range(t.n_vertices)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    n_triangles = sum(1 for u, v in edges for w in adj[u] & adj[v] if w > v)
    return n_triangles == len(t.faces)
