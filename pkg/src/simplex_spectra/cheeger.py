"""Tripartite Cheeger constant, graph Cheeger constants and spectral-gap bounds.

Every bound is returned as a :class:`BoundCertificate` that carries the
bound value, the item attaining it, the per-item table it was minimized
over, the spectral quantity it constrains, and which hypotheses held.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cochains import rayleigh_quotient
from .complex import (
    Graph,
    Triangulation,
    TriangulationError,
    canonical_edge,
    edge_face_degree,
    face_neighbors,
    is_complete_graph,
    link_graph,
)
from .spectral import algebraic_connectivity, eigen, spectral_gap

CHEEGER_N_CAP = 14
SUBSET_CAP = 24
BOUND_TOL = 1e-9
_CHUNK = 20_000


class NotCompleteGraph(TriangulationError):
    pass


class TooLarge(TriangulationError):
    pass


class InvalidPartition(TriangulationError):
    pass


class NotHomogeneous(TriangulationError):
    pass


class EmptyFaceNeighbor(TriangulationError):
    pass


class NotOneEdgeExtension(TriangulationError):
    pass


# -- tripartitions ----------------------------------------------------------------


@dataclass(frozen=True)
class Tripartition:
    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    face_count: int

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(len(p) for p in self.parts)

    @property
    def exact_ratio(self) -> Fraction:
        a, b, c = self.sizes
        return Fraction(self.n * self.face_count, a * b * c)

    @property
    def ratio(self) -> float:
        a, b, c = self.sizes
        return self.n * self.face_count / (a * b * c)

    def labels(self) -> np.ndarray:
        lab = np.empty(self.n, dtype=int)
        for i, p in enumerate(self.parts):
            lab[list(p)] = i
        return lab


def tripartite_face_count(t: Triangulation, labels: Sequence[int]) -> int:
    """Geometric faces with one vertex in each of the three blocks."""
    return sum(1 for f in t.faces if len({labels[x] for x in f}) == 3)


def tripartition(t: Triangulation, parts: Iterable[Iterable[int]]) -> Tripartition:
    """Validate three blocks as a partition of the vertex set and count its tripartite faces."""
    parts = [tuple(sorted(int(x) for x in p)) for p in parts]
    if len(parts) != 3:
        raise InvalidPartition(f"expected 3 blocks, got {len(parts)}")
    if any(not p for p in parts):
        raise InvalidPartition("blocks must be nonempty")
    flat = sorted(x for p in parts for x in p)
    if flat != list(range(t.n_vertices)):
        raise InvalidPartition("blocks must partition the vertex set exactly")
    labels = np.empty(t.n_vertices, dtype=int)
    for i, p in enumerate(parts):
        labels[list(p)] = i
    return Tripartition(tuple(parts), tripartite_face_count(t, labels))


def _from_labels(labels: np.ndarray, face_count: int) -> Tripartition:
    parts = tuple(tuple(int(x) for x in np.flatnonzero(labels == k)) for k in range(3))
    return Tripartition(parts, int(face_count))


def stirling3(n: int) -> int:
    """Number of partitions of n labelled items into 3 nonempty blocks."""
    return (3**n - 3 * 2**n + 3) // 6 if n >= 3 else 0


def restricted_growth_labels(n: int) -> np.ndarray:
    """One label vector per unordered 3-block partition of ``range(n)``.

    Blocks are numbered by first appearance (vertex 0 is in block 0, the
    first vertex outside block 0 is in block 1); rows come out in
    lexicographic order.
    """
    if n < 3:
        return np.zeros((0, n), dtype=np.uint8)
    m = n - 1
    codes = np.arange(3**m, dtype=np.int64)
    tail = np.empty((codes.size, m), dtype=np.uint8)
    for j in range(m):
        tail[:, j] = (codes // 3 ** (m - 1 - j)) % 3
    del codes
    has1, has2 = (tail == 1).any(axis=1), (tail == 2).any(axis=1)
    first1, first2 = np.argmax(tail == 1, axis=1), np.argmax(tail == 2, axis=1)
    keep = has1 & has2 & (first1 < first2)
    labels = np.zeros((int(keep.sum()), n), dtype=np.uint8)
    labels[:, 1:] = tail[keep]
    return labels


def _scan(labels: np.ndarray, faces: np.ndarray, n: int) -> tuple[float, int, int]:
    """Best (ratio, row, face count) within one chunk; first row wins ties."""
    if faces.size:
        fl = labels[:, faces]
        tri = (fl[:, :, 0] != fl[:, :, 1]) & (fl[:, :, 1] != fl[:, :, 2]) & (fl[:, :, 0] != fl[:, :, 2])
        fc = tri.sum(axis=1)
    else:
        fc = np.zeros(labels.shape[0], dtype=np.int64)
    sizes = np.stack([(labels == k).sum(axis=1) for k in range(3)], axis=1).astype(np.int64)
    ratio = n * fc / sizes.prod(axis=1)
    row = int(np.argmin(ratio))
    return float(ratio[row]), row, int(fc[row])


@dataclass(frozen=True)
class CheegerResult:
    h: float
    argmin: Tripartition
    exact: bool = True
    evaluated: int = 0

    @property
    def exact_h(self) -> Fraction:
        return self.argmin.exact_ratio


def _require_complete_graph(t: Triangulation) -> None:
    if not is_complete_graph(t):
        raise NotCompleteGraph("the tripartite Cheeger constant is defined on triangulations of a complete graph")


def _fold(labels: np.ndarray, t: Triangulation, threads: int) -> tuple[float, np.ndarray, int]:
    faces = np.array(t.faces, dtype=np.intp).reshape(-1, 3)
    starts = range(0, labels.shape[0], _CHUNK)
    work = lambda s: _scan(labels[s:s + _CHUNK], faces, t.n_vertices)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, starts))
    else:
        results = [work(s) for s in starts]
    best = None
    for s, (ratio, row, fc) in zip(starts, results):
        # strict comparison keeps the earliest witness among equal minima
        if best is None or ratio < best[0]:
            best = (ratio, labels[s + row], fc)
    return best


def cheeger_tripartite(t: Triangulation, cap: int = CHEEGER_N_CAP, threads: int = 1) -> CheegerResult:
    """Exact minimum of ``n |F(A0, A1, A2)| / (|A0| |A1| |A2|)`` over unordered tripartitions.

    Faces are counted geometrically (once per triangle).  Ties resolve to
    the partition whose first-appearance label vector is lexicographically
    smallest.
    """
    _require_complete_graph(t)
    n = t.n_vertices
    if n < 3:
        raise InvalidPartition("need at least 3 vertices for a tripartition")
    if n > cap:
        raise TooLarge(
            f"n = {n} exceeds the enumeration cap {cap} ({stirling3(n)} partitions); "
            "raise the cap or use cheeger_tripartite_sampled for an upper estimate"
        )
    labels = restricted_growth_labels(n)
    ratio, lab, fc = _fold(labels, t, max(1, threads))
    return CheegerResult(ratio, _from_labels(lab, fc), exact=True, evaluated=labels.shape[0])


def cheeger_tripartite_sampled(t: Triangulation, samples: int = 100_000, seed: int = 0, threads: int = 1) -> CheegerResult:
    """Upper estimate of the tripartite Cheeger constant from random labelings (not exact)."""
    _require_complete_graph(t)
    n = t.n_vertices
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 3, size=(samples, n), dtype=np.uint8)
    labels = labels[np.all([(labels == k).any(axis=1) for k in range(3)], axis=0)]
    if labels.shape[0] == 0:
        raise InvalidPartition("no sampled labeling used all three blocks")
    ratio, lab, fc = _fold(labels, t, max(1, threads))
    return CheegerResult(ratio, _from_labels(lab, fc), exact=False, evaluated=labels.shape[0])


def cheeger_test_form(t: Triangulation, p: Tripartition | Iterable[Iterable[int]]) -> np.ndarray:
    """The 1-form equal to ``|A_i|`` on edges from ``A_{i+1}`` to ``A_{i+2}`` (indices mod 3).

    Edges inside one block get 0.  On a homogeneous complete graph it lies
    in ker(delta0) and its L1plus Rayleigh quotient is the partition's
    Cheeger ratio.
    """
    if not isinstance(p, Tripartition):
        p = tripartition(t, p)
    elif p.n != t.n_vertices:
        raise InvalidPartition("partition does not match the complex")
    labels = p.labels()
    sizes = p.sizes
    psi = np.zeros(len(t.edges))
    for i, (u, v) in enumerate(t.edges):
        lu, lv = labels[u], labels[v]
        if lu == lv:
            continue
        k = 3 - lu - lv  # the block missing from this edge
        psi[i] = sizes[k] if (lu - k) % 3 == 1 else -sizes[k]
    return psi


# -- certificates -------------------------------------------------------------------


@dataclass
class BoundCertificate:
    """A bound value with its witness and the inequality it asserts.

    ``relation`` is ``"upper"`` when ``reference <= value`` is claimed and
    ``"lower"`` when ``reference >= value`` is claimed.
    """

    kind: str
    value: float
    witness: object
    relation: str
    reference: float | None
    reference_name: str
    details: list[dict] = field(default_factory=list)
    hypothesis_checks: dict[str, bool] = field(default_factory=dict)
    tol: float = BOUND_TOL

    @property
    def applicable(self) -> bool:
        return all(self.hypothesis_checks.values())

    @property
    def holds(self) -> bool | None:
        if self.reference is None or np.isnan(self.reference):
            return None
        if self.relation == "upper":
            return self.reference <= self.value + self.tol
        return self.reference >= self.value - self.tol

    @property
    def violated(self) -> bool:
        """True only when every hypothesis held and the inequality still failed."""
        return self.applicable and self.holds is False

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "witness": self.witness,
            "relation": self.relation,
            "reference": {"name": self.reference_name, "value": self.reference},
            "holds": self.holds,
            "hypothesis_checks": dict(self.hypothesis_checks),
            "per_item_table": self.details,
        }


def _safe_gap(t: Triangulation) -> float:
    try:
        return spectral_gap(t).value
    except TriangulationError:
        return float("nan")


def upper_bound_edge_L1(t: Triangulation) -> BoundCertificate:
    """``min sigma(L1) <= min_e [(1/c(e-) + 1/c(e+)) r(e) + deg_E(e)]``."""
    rows = []
    for i, (u, v) in enumerate(t.edges):
        r = t.edge_weights[i]
        vertex_term = (1 / t.vertex_weights[u] + 1 / t.vertex_weights[v]) * r
        deg = edge_face_degree(t, (u, v))
        rows.append({"edge": [u, v], "vertex_term": vertex_term, "face_degree": deg, "term": vertex_term + deg})
    best = min(rows, key=lambda row: row["term"])
    return BoundCertificate(
        "edge_L1",
        float(best["term"]),
        best["edge"],
        "upper",
        eigen(t, "L1").min(),
        "min sigma(L1)",
        rows,
        {"finite": True},
    )


def upper_bound_L2(t: Triangulation) -> BoundCertificate:
    """``min sigma(L2) <= 8 + 2 min_e |F_e|`` on homogeneous complexes."""
    if not t.is_homogeneous:
        raise NotHomogeneous("the L2 bound is stated for homogeneous triangulations")
    rows = [{"edge": list(e), "face_neighbors": len(face_neighbors(t, e))} for e in t.edges]
    best = min(rows, key=lambda row: row["face_neighbors"])
    spec = eigen(t, "L2")
    return BoundCertificate(
        "L2_bound",
        8.0 + 2 * best["face_neighbors"],
        best["edge"],
        "upper",
        spec.min() if len(spec.eigenvalues) else None,
        "min sigma(L2)",
        rows,
        {"homogeneous": True, "has_faces": bool(t.faces)},
    )


def cheeger_upper(t: Triangulation, cap: int = CHEEGER_N_CAP, threads: int = 1) -> BoundCertificate:
    """Spectral gap <= tripartite Cheeger constant."""
    res = cheeger_tripartite(t, cap=cap, threads=threads)
    return BoundCertificate(
        "cheeger_upper",
        res.h,
        [list(p) for p in res.argmin.parts],
        "upper",
        _safe_gap(t),
        "spectral gap",
        [{"parts": [list(p) for p in res.argmin.parts], "face_count": res.argmin.face_count, "ratio": res.h}],
        {"complete_graph": True, "homogeneous": t.is_homogeneous, "h_nonzero": res.h > 0},
    )


def graph_cheeger(g: Graph, cap: int = SUBSET_CAP) -> float:
    """``min |boundary(S)| / |S|`` over nonempty vertex sets with ``|S| <= |V|/2``."""
    nv = len(g.vertices)
    if nv > cap:
        raise TooLarge(f"{nv} vertices exceeds the subset-enumeration cap {cap}")
    if nv < 2:
        return 0.0
    idx = {v: i for i, v in enumerate(g.vertices)}
    eu = np.array([idx[u] for u, _ in g.edges], dtype=np.int64)
    ev = np.array([idx[v] for _, v in g.edges], dtype=np.int64)
    best = np.inf
    total = 1 << nv
    step = 1 << 18
    for start in range(1, total, step):
        masks = np.arange(start, min(start + step, total), dtype=np.int64)
        size = np.zeros(masks.size, dtype=np.int64)
        for i in range(nv):
            size += (masks >> i) & 1
        ok = size <= nv // 2
        if not ok.any():
            continue
        masks, size = masks[ok], size[ok]
        cut = ((masks[:, None] >> eu) & 1) != ((masks[:, None] >> ev) & 1) if eu.size else np.zeros((masks.size, 0), bool)
        best = min(best, float(np.min(cut.sum(axis=1) / size)))
    return float(best)


def _oriented_edges(t: Triangulation):
    for u, v in t.edges:
        yield u, v
        yield v, u


def _face_neighbor_hypothesis(t: Triangulation, strict: bool) -> bool:
    empty = [e for e in t.edges if not face_neighbors(t, e)]
    if empty and strict:
        raise EmptyFaceNeighbor(f"edge {empty[0]} lies in no face")
    return not empty


def lower_bound_link(t: Triangulation, strict: bool = False) -> BoundCertificate:
    """``gap >= min over oriented e of 2 lambda1(K(e-)) - |F_e|``.

    ``lambda1`` is the second-smallest eigenvalue of the combinatorial
    Laplacian of the link graph.  With ``strict`` an edge lying in no face
    raises :class:`EmptyFaceNeighbor`; otherwise the value is still reported
    and the failed hypothesis is recorded in the certificate.
    """
    _require_complete_graph(t)
    all_nonempty = _face_neighbor_hypothesis(t, strict)
    lam = {x: algebraic_connectivity(link_graph(t, x)) for x in range(t.n_vertices)}
    rows = []
    for u, v in _oriented_edges(t):
        k = len(face_neighbors(t, (u, v)))
        rows.append({"edge": [u, v], "link_lambda1": lam[u], "face_neighbors": k, "term": 2 * lam[u] - k})
    best = min(rows, key=lambda row: row["term"])
    return BoundCertificate(
        "link_lower",
        float(best["term"]),
        best["edge"],
        "lower",
        _safe_gap(t),
        "spectral gap",
        rows,
        {"complete_graph": True, "homogeneous": t.is_homogeneous, "all_face_neighbors_nonempty": all_nonempty},
    )


def lower_bound_cheeger_link(t: Triangulation, degree: str = "link", strict: bool = False) -> BoundCertificate:
    """``gap >= min over oriented e of h(K(e-))^2 / d_{e-} - |F_e|``.

    ``d_x`` is the largest degree among the link's vertices, measured in the
    link graph (``degree="link"``) or in the whole graph (``"ambient"``).
    """
    if degree not in ("link", "ambient"):
        raise ValueError("degree must be 'link' or 'ambient'")
    _require_complete_graph(t)
    all_nonempty = _face_neighbor_hypothesis(t, strict)
    ambient = t.graph
    per_vertex = {}
    for x in range(t.n_vertices):
        link = link_graph(t, x)
        h = graph_cheeger(link)
        source = link if degree == "link" else ambient
        d = max((source.degree(y) for y in link.vertices), default=0)
        per_vertex[x] = (h, d, h * h / d if h > 0 else 0.0)
    rows = []
    for u, v in _oriented_edges(t):
        h, d, q = per_vertex[u]
        k = len(face_neighbors(t, (u, v)))
        rows.append({"edge": [u, v], "link_cheeger": h, "max_degree": d, "face_neighbors": k, "term": q - k})
    best = min(rows, key=lambda row: row["term"])
    return BoundCertificate(
        "cheeger_link_lower",
        float(best["term"]),
        best["edge"],
        "lower",
        _safe_gap(t),
        "spectral gap",
        rows,
        {"complete_graph": True, "homogeneous": t.is_homogeneous, "all_face_neighbors_nonempty": all_nonempty},
    )


def zero_gap_certificate(t: Triangulation) -> BoundCertificate:
    """Face-count criterion: fewer faces than independent cycles forces a zero gap."""
    cycle_rank = len(t.edges) - t.n_vertices + 1
    return BoundCertificate(
        "face_count_zero",
        0.0,
        {"faces": len(t.faces), "cycle_rank": cycle_rank},
        "upper",
        _safe_gap(t),
        "spectral gap",
        [{"faces": len(t.faces), "cycle_rank": cycle_rank}],
        {"face_count_below_cycle_rank": len(t.faces) < cycle_rank},
    )


def nonzero_cheeger_witness(t: Triangulation) -> int | None:
    """Smallest vertex lying in F_e for every edge e not incident to it, if any.

    Such a vertex puts a tripartite face in every tripartition, so h > 0.
    """
    for x in range(t.n_vertices):
        if all(x in face_neighbors(t, e) for e in t.edges if x not in e):
            return x
    return None


def edge_monotonicity_check(g: Graph, g_plus_edge: Graph, tol: float = 1e-10) -> bool:
    """Adding one edge on the same vertex set never lowers the algebraic connectivity."""
    old, new = set(g.edges), set(g_plus_edge.edges)
    if set(g.vertices) != set(g_plus_edge.vertices) or not old <= new or len(new - old) != 1:
        raise NotOneEdgeExtension("second graph must add exactly one edge on the same vertex set")
    return algebraic_connectivity(g) <= algebraic_connectivity(g_plus_edge) + tol


def add_edge(g: Graph, u: int, v: int) -> Graph:
    key = canonical_edge(u, v)[0]
    if key in g.edges:
        raise NotOneEdgeExtension(f"{key} is already an edge")
    return Graph(g.vertices, tuple(sorted(g.edges + (key,))))



def partition_quotient(t: Triangulation, p: Tripartition) -> float:
    """L1plus Rayleigh quotient of the partition's test form."""
    return rayleigh_quotient(t, cheeger_test_form(t, p), "L1plus")
