"""Cochain spaces, coboundary operators and Laplacians of a weighted triangulation.

Cochains are plain numpy vectors indexed by the canonical bases of the
complex: vertices, stored edge representatives, stored face
representatives.  Because every weight is even and only one representative
per geometric simplex is kept, the inner products below are
``sum(w * f * g)`` over the stored simplices, which agrees with the
half-sum over all oriented simplices.

Two routes are provided for each coboundary: direct evaluation of the
pointwise formula (``d0``, ``delta0``, ``d1``, ``delta1``) and matrix
assembly from the integer incidence matrices (``operator``,
``laplacian``, ``gauss_bonnet``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .complex import Triangulation, TriangulationError

SPARSE_EDGE_THRESHOLD = 2000

Space = Literal["V", "E", "F"]
LAPLACIANS = ("L0", "L1minus", "L1plus", "L1", "L2")
COBOUNDARIES = ("d0", "delta0", "d1", "delta1")


class DimensionMismatch(TriangulationError):
    pass


def _dims(t: Triangulation) -> dict[str, int]:
    return {"V": t.n_vertices, "E": len(t.edges), "F": len(t.faces)}


def space_weights(t: Triangulation, space: Space) -> np.ndarray:
    return {"V": t.vertex_weights, "E": t.edge_weights, "F": t.face_weights}[space]


def _as_cochain(v) -> np.ndarray:
    v = np.asarray(v)
    return v if v.dtype.kind in "fc" else v.astype(float)


def _check(t: Triangulation, space: Space, *vectors) -> None:
    n = _dims(t)[space]
    for v in vectors:
        if np.shape(v) != (n,):
            raise DimensionMismatch(f"expected a {space}-cochain of length {n}, got shape {np.shape(v)}")


def _ip(t, space, f, g):
    _check(t, space, f, g)
    return np.sum(space_weights(t, space) * np.asarray(f) * np.conj(np.asarray(g)))


def ip_V(t: Triangulation, f, g) -> float:
    return _ip(t, "V", f, g)


def ip_E(t: Triangulation, phi, psi) -> float:
    return _ip(t, "E", phi, psi)


def ip_F(t: Triangulation, phi, theta) -> float:
    return _ip(t, "F", phi, theta)


def edge_indicator(t: Triangulation, u: int, v: int) -> np.ndarray:
    """The antisymmetric 1-form equal to 1 on ``(u, v)`` and -1 on ``(v, u)``."""
    idx, sign = t.locate_edge(u, v)
    chi = np.zeros(len(t.edges))
    chi[idx] = sign
    return chi


def evaluate_edge(t: Triangulation, phi: np.ndarray, u: int, v: int) -> float:
    """Value of a 1-form on the oriented edge ``(u, v)``."""
    idx, sign = t.locate_edge(u, v)
    return sign * phi[idx]


def evaluate_face(t: Triangulation, phi: np.ndarray, a: int, b: int, c: int) -> float:
    """Value of a 2-form on the oriented face ``(a, b, c)``."""
    hit = t.locate_face(a, b, c)
    if hit is None:
        raise TriangulationError(f"{(a, b, c)} is not a face")
    idx, sign = hit
    return sign * phi[idx]


# -- direct pointwise evaluation ------------------------------------------------


def d0(t: Triangulation, f) -> np.ndarray:
    _check(t, "V", f)
    f = _as_cochain(f)
    return np.array([f[v] - f[u] for u, v in t.edges], dtype=f.dtype)


def delta0(t: Triangulation, phi) -> np.ndarray:
    # sum over every oriented edge ending at x, both orientations of each representative
    _check(t, "E", phi)
    phi = _as_cochain(phi)
    out = np.zeros(t.n_vertices, dtype=phi.dtype)
    for (u, v), r, val in zip(t.edges, t.edge_weights, phi):
        out[v] += r * val
        out[u] -= r * val
    return out / t.vertex_weights


def d1(t: Triangulation, phi) -> np.ndarray:
    _check(t, "E", phi)
    phi = _as_cochain(phi)
    return np.array(
        [
            evaluate_edge(t, phi, a, b) + evaluate_edge(t, phi, b, c) + evaluate_edge(t, phi, c, a)
            for a, b, c in t.faces
        ],
        dtype=phi.dtype,
    )


def delta1(t: Triangulation, theta) -> np.ndarray:
    _check(t, "F", theta)
    theta = _as_cochain(theta)
    out = np.zeros(len(t.edges), dtype=theta.dtype)
    for i, (u, v) in enumerate(t.edges):
        acc = 0.0
        for x in t._neighbors[(u, v)]:
            fidx, _ = t.locate_face(u, v, x)
            acc += t.face_weights[fidx] * evaluate_face(t, theta, u, v, x)
        out[i] = acc / t.edge_weights[i]
    return out


# -- incidence matrices and assembled operators ---------------------------------


def _want_sparse(t: Triangulation, sparse: bool | None) -> bool:
    return len(t.edges) > SPARSE_EDGE_THRESHOLD if sparse is None else sparse


def vertex_edge_incidence(t: Triangulation, sparse: bool | None = False):
    """Integer matrix of ``d0``: row per edge ``(u, v)``, -1 at ``u`` and +1 at ``v``."""
    m = len(t.edges)
    rows = np.repeat(np.arange(m), 2)
    cols = np.array(t.edges, dtype=int).reshape(-1) if m else np.zeros(0, dtype=int)
    vals = np.tile([-1, 1], m)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(m, t.n_vertices), dtype=np.int64)
    return mat if _want_sparse(t, sparse) else mat.toarray()


def edge_face_incidence(t: Triangulation, sparse: bool | None = False):
    """Integer matrix of ``d1``: entry +-1 when the edge occurs in the face with/against its orientation."""
    rows, cols, vals = [], [], []
    for j, (a, b, c) in enumerate(t.faces):
        for u, v in ((a, b), (b, c), (c, a)):
            idx, sign = t.locate_edge(u, v)
            rows.append(j)
            cols.append(idx)
            vals.append(sign)
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(len(t.faces), len(t.edges)), dtype=np.int64)
    return mat if _want_sparse(t, sparse) else mat.toarray()


@dataclass(frozen=True)
class OperatorMatrix:
    """A linear map between cochain spaces with the weights of both inner products."""

    name: str
    domain: Space
    codomain: Space
    matrix: object  # ndarray or scipy sparse
    domain_weights: np.ndarray
    codomain_weights: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else np.asarray(self.matrix)

    def __matmul__(self, vec):
        return self.matrix @ vec

    def adjoint(self) -> "OperatorMatrix":
        """``W_dom^-1 A^T W_cod``: the adjoint for the two weighted inner products."""
        mat = _diag(1.0 / self.domain_weights, self.is_sparse) @ self.matrix.T @ _diag(self.codomain_weights, self.is_sparse)
        return OperatorMatrix(
            f"{self.name}*", self.codomain, self.domain, mat, self.codomain_weights, self.domain_weights
        )

    def symmetrized(self) -> np.ndarray:
        """``W^{1/2} A W^{-1/2}`` as a dense symmetric array (endomorphisms only)."""
        if self.domain != self.codomain:
            raise DimensionMismatch(f"{self.name} maps {self.domain} -> {self.codomain}; not an endomorphism")
        root = np.sqrt(self.domain_weights)
        mat = root[:, None] * self.dense() / root[None, :]
        return 0.5 * (mat + mat.T)


def _diag(w, sparse):
    return sp.diags(w) if sparse else np.diag(w)


def operator(t: Triangulation, which: str, sparse: bool | None = None) -> OperatorMatrix:
    """Assembled matrix of ``d0``, ``delta0``, ``d1`` or ``delta1``."""
    sparse = _want_sparse(t, sparse)
    c, r, s = t.vertex_weights, t.edge_weights, t.face_weights
    if which == "d0":
        return OperatorMatrix("d0", "V", "E", vertex_edge_incidence(t, sparse).astype(float), c, r)
    if which == "d1":
        return OperatorMatrix("d1", "E", "F", edge_face_incidence(t, sparse).astype(float), r, s)
    if which == "delta0":
        return OperatorMatrix("delta0", "E", "V", operator(t, "d0", sparse).adjoint().matrix, r, c)
    if which == "delta1":
        return OperatorMatrix("delta1", "F", "E", operator(t, "d1", sparse).adjoint().matrix, s, r)
    raise ValueError(f"unknown operator {which!r}; expected one of {COBOUNDARIES}")


def laplacian(t: Triangulation, which: str, sparse: bool | None = None) -> OperatorMatrix:
    """``L0 = delta0 d0``, ``L1minus = d0 delta0``, ``L1plus = delta1 d1``, ``L1``, ``L2 = d1 delta1``."""
    sparse = _want_sparse(t, sparse)
    if which == "L1":
        lo, up = laplacian(t, "L1minus", sparse), laplacian(t, "L1plus", sparse)
        return OperatorMatrix("L1", "E", "E", lo.matrix + up.matrix, t.edge_weights, t.edge_weights)
    pairs = {
        "L0": ("delta0", "d0", "V"),
        "L1minus": ("d0", "delta0", "E"),
        "L1plus": ("delta1", "d1", "E"),
        "L2": ("d1", "delta1", "F"),
    }
    if which not in pairs:
        raise ValueError(f"unknown Laplacian {which!r}; expected one of {LAPLACIANS}")
    outer, inner, space = pairs[which]
    mat = operator(t, outer, sparse).matrix @ operator(t, inner, sparse).matrix
    w = space_weights(t, space)
    return OperatorMatrix(which, space, space, mat, w, w)


def gauss_bonnet(t: Triangulation) -> OperatorMatrix:
    """``T = d + delta`` on V + E + F, block tridiagonal ``[[0, delta0, 0], [d0, 0, delta1], [0, d1, 0]]``."""
    nv, ne, nf = _dims(t).values()
    D0 = operator(t, "d0", sparse=False).matrix
    D1 = operator(t, "d1", sparse=False).matrix
    T = np.zeros((nv + ne + nf,) * 2)
    T[nv:nv + ne, :nv] = D0
    T[:nv, nv:nv + ne] = operator(t, "delta0", sparse=False).matrix
    T[nv + ne:, nv:nv + ne] = D1
    T[nv:nv + ne, nv + ne:] = operator(t, "delta1", sparse=False).matrix
    w = np.concatenate([t.vertex_weights, t.edge_weights, t.face_weights])
    return OperatorMatrix("T", "H", "H", T, w, w)


def hodge_laplacian_blocks(t: Triangulation) -> np.ndarray:
    """Block-diagonal ``L0 + L1 + L2`` on the direct sum, for comparison with ``T @ T``."""
    blocks = [laplacian(t, k, sparse=False).dense() for k in ("L0", "L1", "L2")]
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b
        at += k
    return out


def rayleigh_quotient(t: Triangulation, phi, which: str = "L1plus") -> float:
    """``<L phi, phi> / <phi, phi>`` in the weighted inner product of the operator's space."""
    lap = laplacian(t, which, sparse=False)
    phi = np.asarray(phi, dtype=float)
    _check(t, lap.domain, phi)
    w = lap.domain_weights
    denom = np.sum(w * phi * phi)
    if denom == 0:
        raise ValueError("Rayleigh quotient of the zero cochain")
    return float(np.sum(w * (lap.matrix @ phi) * phi) / denom)

