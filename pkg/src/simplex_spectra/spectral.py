"""Spectra of the weighted Laplacians, the spectral gap and the Hodge decomposition on 1-forms."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cochains import edge_face_incidence, laplacian, operator, vertex_edge_incidence
from .complex import Graph, Triangulation, TriangulationError, build

GAP_AGREEMENT_RTOL = 1e-8


class EigensolveFailure(RuntimeError):
    pass


class NotNormalized(TriangulationError):
    pass


class EmptyGapSpace(TriangulationError):
    """The graph is a tree, so there is no 1-form orthogonal to the exact forms."""


def default_zero_tol(eigenvalues) -> float:
    lam_max = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    return 1e-9 * max(1.0, lam_max)


def same_value(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def cluster(values, tol: float) -> list[tuple[float, int]]:
    """Group ascending values into ``(representative, count)``.

    A value joins the current cluster only if it is within tolerance of the
    cluster's first member, so long runs of small steps cannot chain.
    """
    out: list[tuple[float, int]] = []
    anchor = None
    members: list[float] = []
    for v in sorted(values):
        if anchor is not None and same_value(anchor, v, tol):
            members.append(v)
            continue
        if members:
            out.append((float(np.mean(members)), len(members)))
        anchor, members = v, [v]
    if members:
        out.append((float(np.mean(members)), len(members)))
    return out


def _eigvalsh(mat: np.ndarray) -> np.ndarray:
    if mat.shape[0] == 0:
        return np.zeros(0)
    try:
        return scipy.linalg.eigvalsh(mat, driver="evd")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise EigensolveFailure(str(exc)) from exc


@dataclass(frozen=True)
class SpectrumReport:
    which: str
    eigenvalues: np.ndarray
    zero_tol: float
    multiplicities: list[tuple[float, int]] = field(default_factory=list)

    @property
    def nonzero(self) -> np.ndarray:
        return self.eigenvalues[np.abs(self.eigenvalues) > self.zero_tol]

    @property
    def kernel_dim(self) -> int:
        return int(np.sum(np.abs(self.eigenvalues) <= self.zero_tol))

    def min(self) -> float:
        return float(self.eigenvalues[0]) if len(self.eigenvalues) else float("nan")


def eigen(t: Triangulation, which: str, zero_tol: float | None = None, match_tol: float = 1e-8) -> SpectrumReport:
    """Ascending spectrum of one of the five Laplacians.

    The weighted operator ``A`` is self-adjoint for its inner product, so
    ``W^{1/2} A W^{-1/2}`` is a symmetric matrix with the same spectrum.
    """
    sym = laplacian(t, which, sparse=False).symmetrized()
    vals = _eigvalsh(sym)
    tol = default_zero_tol(vals) if zero_tol is None else zero_tol
    # cluster with values inside zero_tol snapped to 0 so the kernel forms one group
    snapped = np.where(np.abs(vals) <= tol, 0.0, vals)
    return SpectrumReport(which, vals, tol, cluster(snapped, match_tol))


def graph_laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian ``D - A`` of an unweighted graph, rows ordered as ``g.vertices``."""
    idx = {v: i for i, v in enumerate(g.vertices)}
    L = np.zeros((len(idx), len(idx)))
    for u, v in g.edges:
        i, j = idx[u], idx[v]
        L[i, i] += 1
        L[j, j] += 1
        L[i, j] -= 1
        L[j, i] -= 1
    return L


def algebraic_connectivity(g: Graph) -> float:
    """Second-smallest eigenvalue of the combinatorial Laplacian; 0 for graphs with < 2 vertices."""
    if len(g.vertices) < 2:
        return 0.0
    vals = _eigvalsh(graph_laplacian(g))
    return float(max(vals[1], 0.0))


@dataclass(frozen=True)
class SpectralGap:
    value: float
    index: int
    constrained_min: float
    zero_tol: float

    @property
    def is_zero(self) -> bool:
        return abs(self.value) <= self.zero_tol


def _sym_coords(t: Triangulation):
    """Square roots of the edge weights and the integer incidence matrices."""
    root_r = np.sqrt(t.edge_weights)
    D0 = vertex_edge_incidence(t).astype(float)
    D1 = edge_face_incidence(t).astype(float)
    # y = R^{1/2} phi; ker delta0 <=> D0^T R^{1/2} y = 0; ker d1 <=> D1 R^{-1/2} y = 0
    return root_r, D0, D1


def coclosed_basis(t: Triangulation) -> np.ndarray:
    """Columns: an ip_E-orthonormal basis of ker(delta0), in cochain coordinates."""
    root_r, D0, _ = _sym_coords(t)
    Q = scipy.linalg.null_space((D0 * root_r[:, None]).T)
    return Q / root_r[:, None]


def spectral_gap(t: Triangulation, zero_tol: float | None = None) -> SpectralGap:
    """Smallest eigenvalue of L1plus on ker(delta0), read off as the ``|V|-1``-th eigenvalue.

    The same number is also computed as the minimum of the Rayleigh quotient
    of L1plus restricted to an orthonormal basis of ker(delta0); the two
    must agree.
    """
    n_exact = t.n_vertices - 1
    if len(t.edges) <= n_exact:
        raise EmptyGapSpace("graph has no cycles; ker(delta0) is trivial")
    spec = eigen(t, "L1plus", zero_tol)
    value = float(spec.eigenvalues[n_exact])

    Q = coclosed_basis(t) * np.sqrt(t.edge_weights)[:, None]
    restricted = Q.T @ laplacian(t, "L1plus", sparse=False).symmetrized() @ Q
    cmin = float(_eigvalsh(0.5 * (restricted + restricted.T))[0])
    if abs(value - cmin) > GAP_AGREEMENT_RTOL * max(1.0, abs(value)):
        raise EigensolveFailure(f"eigen-index gap {value} disagrees with constrained minimum {cmin}")
    return SpectralGap(value, n_exact, cmin, spec.zero_tol)


def zero_gap_criterion(t: Triangulation) -> bool:
    """``|F| < |E| - |V| + 1``, which forces a harmonic 1-form and hence a zero gap."""
    return len(t.faces) < len(t.edges) - t.n_vertices + 1


@dataclass(frozen=True)
class HodgeDecomposition:
    """Orthogonal splitting of 1-forms into exact, coexact and harmonic parts.

    Bases are columns in cochain coordinates, orthonormal for ``ip_E``.
    """

    exact_basis: np.ndarray
    coexact_basis: np.ndarray
    harmonic_basis: np.ndarray
    edge_weights: np.ndarray = field(repr=False)

    @property
    def exact_dim(self) -> int:
        return self.exact_basis.shape[1]

    @property
    def coexact_dim(self) -> int:
        return self.coexact_basis.shape[1]

    @property
    def harmonic_dim(self) -> int:
        return self.harmonic_basis.shape[1]

    def gram_residual(self) -> float:
        """Max deviation of the joint Gram matrix from the identity."""
        B = np.hstack([self.exact_basis, self.coexact_basis, self.harmonic_basis])
        G = B.T @ (self.edge_weights[:, None] * B)
        return float(np.max(np.abs(G - np.eye(B.shape[1])))) if B.size else 0.0

    def project(self, phi) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Components of ``phi`` in (exact, coexact, harmonic) order."""
        phi = np.asarray(phi, dtype=float)
        parts = []
        for B in (self.exact_basis, self.coexact_basis, self.harmonic_basis):
            parts.append(B @ (B.T @ (self.edge_weights * phi)))
        return tuple(parts)


def _orth(mat: np.ndarray, rows: int) -> np.ndarray:
    if mat.size == 0:
        return np.zeros((rows, 0))
    return scipy.linalg.orth(mat)


def hodge(t: Triangulation) -> HodgeDecomposition:
    root_r, D0, D1 = _sym_coords(t)
    m = len(t.edges)
    exact = _orth(root_r[:, None] * D0, m)
    # Im delta1 = R^{-1} D1^T S, i.e. R^{-1/2} D1^T S in symmetric coordinates
    coexact = _orth(D1.T * t.face_weights[None, :] / root_r[:, None], m)
    constraints = np.vstack([(D0 * root_r[:, None]).T, D1 / root_r[None, :]])
    harmonic = scipy.linalg.null_space(constraints) if m else np.zeros((0, 0))
    to_cochain = 1.0 / root_r[:, None]
    return HodgeDecomposition(exact * to_cochain, coexact * to_cochain, harmonic * to_cochain, t.edge_weights)


def _rank(mat: np.ndarray) -> int:
    return int(np.linalg.matrix_rank(mat)) if mat.size else 0


def harmonic_dims(t: Triangulation, zero_tol: float | None = None) -> dict[str, int]:
    """Dimension of the harmonic 1-forms computed three ways.

    ``kernel``: zero eigenvalues of L1; ``cohomology``: dim ker d1 - rank d0;
    ``homology``: dim ker delta0 - rank delta1.
    """
    m = len(t.edges)
    D0 = operator(t, "d0", sparse=False).matrix
    D1 = operator(t, "d1", sparse=False).matrix
    dl0 = operator(t, "delta0", sparse=False).matrix
    dl1 = operator(t, "delta1", sparse=False).matrix
    return {
        "kernel": eigen(t, "L1", zero_tol).kernel_dim,
        "cohomology": (m - _rank(D1)) - _rank(D0),
        "homology": (m - _rank(dl0)) - _rank(dl1),
    }


@dataclass(frozen=True)
class RelationReport:
    left: str
    right: str
    left_nonzero: list[tuple[float, int]]
    right_nonzero: list[tuple[float, int]]
    tol: float
    homogeneous: bool
    agree: bool


def compare_nonzero_spectra(a, b, tol: float) -> bool:
    """Multiset equality of two nonzero spectra under the relative tolerance."""
    a, b = np.sort(np.asarray(a)), np.sort(np.asarray(b))
    if a.shape != b.shape:
        return False
    return all(same_value(x, y, tol) for x, y in zip(a, b))


def _relation(t, left, right, tol, zero_tol):
    sl, sr = eigen(t, left, zero_tol), eigen(t, right, zero_tol)
    nl, nr = sl.nonzero, sr.nonzero
    return RelationReport(
        left,
        right,
        cluster(nl, tol),
        cluster(nr, tol),
        tol,
        t.is_homogeneous,
        compare_nonzero_spectra(nl, nr, tol),
    )


def spectrum_relation_check(t: Triangulation, tol: float = 1e-8, zero_tol: float | None = None) -> RelationReport:
    """Compare the nonzero spectra of L1plus and L2, with multiplicities."""
    return _relation(t, "L1plus", "L2", tol, zero_tol)


def incident_edge_weight(t: Triangulation) -> np.ndarray:
    total = np.zeros(t.n_vertices)
    for (u, v), r in zip(t.edges, t.edge_weights):
        total[u] += r
        total[v] += r
    return total


def is_normalized(t: Triangulation, tol: float = 1e-9) -> bool:
    return bool(np.allclose(t.vertex_weights, incident_edge_weight(t), rtol=tol, atol=0.0))


def normalized_check_L0_L1minus(t: Triangulation, tol: float = 1e-8, zero_tol: float | None = None) -> RelationReport:
    """Compare the nonzero spectra of L0 and L1minus on a normalized graph."""
    if not is_normalized(t):
        raise NotNormalized("vertex weights differ from the summed incident edge weights")
    return _relation(t, "L0", "L1minus", tol, zero_tol)


def normalize_vertex_weights(t: Triangulation) -> Triangulation:
    """Copy of ``t`` with ``c(x)`` replaced by the sum of incident edge weights."""
    return build(t.n_vertices, t.edges, t.faces, incident_edge_weight(t), t.edge_weights, t.face_weights)

