from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import triangulations
from oracles import column_matrix
from simplex_spectra import build, complete_triangulation
from simplex_spectra.cochains import (
    DimensionMismatch,
    d0,
    d1,
    delta0,
    delta1,
    edge_indicator,
    evaluate_edge,
    gauss_bonnet,
    hodge_laplacian_blocks,
    ip_E,
    ip_F,
    ip_V,
    laplacian,
    operator,
    rayleigh_quotient,
)


def tri():
    return build(3, [(0, 1), (1, 2), (2, 0)], [(0, 1, 2)])


def vec(*xs):
    return np.array(xs, dtype=float)


class TestInnerProducts:
    def test_single_edge_indicator(self):
        t = tri()
        phi = edge_indicator(t, 0, 1)
        assert ip_E(t, phi, phi) == 1.0

    def test_reverse_indicator(self):
        t = tri()
        assert np.array_equal(edge_indicator(t, 1, 0), -edge_indicator(t, 0, 1))

    def test_weighted(self):
        t = build(3, [(0, 1), (1, 2), (2, 0)], [(0, 1, 2)], vertex_weights=[2, 3, 4], face_weights=[5])
        assert ip_V(t, [1, 1, 1], [1, 2, 3]) == 2 + 6 + 12
        assert ip_F(t, [2], [3]) == 30

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            ip_E(tri(), [1, 2], [1, 2])

    def test_integer_input(self):
        assert ip_V(tri(), [1, 0, 0], [1, 0, 0]) == 1.0


class TestD0:
    def test_vertex_indicator(self):
        t = tri()
        phi = d0(t, [1, 0, 0])
        assert evaluate_edge(t, phi, 0, 1) == -1
        assert evaluate_edge(t, phi, 2, 0) == 1
        assert evaluate_edge(t, phi, 1, 2) == 0

    def test_constant(self):
        t = complete_triangulation(5)
        assert np.all(d0(t, np.ones(5)) == 0)

    def test_k4_linear(self):
        t = complete_triangulation(4)
        phi = d0(t, [0, 1, 2, 3])
        for u, v in t.edges:
            assert evaluate_edge(t, phi, u, v) == v - u


class TestDelta0:
    def test_gradient_of_indicator(self):
        t = tri()
        assert np.allclose(delta0(t, d0(t, [1, 0, 0])), [2, -1, -1])

    def test_indicator(self):
        t = build(3, [(0, 1), (1, 2), (2, 0)], vertex_weights=[2, 4, 8], edge_weights=[3, 5, 7])
        # chi of the edge 0 -> 1, whose weight is 3
        out = delta0(t, edge_indicator(t, 0, 1))
        assert np.allclose(out, [-3 / 2, 3 / 4, 0])

    def test_zero(self):
        assert np.all(delta0(tri(), np.zeros(3)) == 0)


class TestD1:
    def test_exact_forms_are_closed(self):
        t = complete_triangulation(5)
        f = np.random.default_rng(0).standard_normal(5)
        assert np.allclose(d1(t, d0(t, f)), 0)

    def test_single_edge(self):
        t = tri()
        assert d1(t, edge_indicator(t, 0, 1)).tolist() == [1.0]


class TestDelta1:
    def test_single_face(self):
        t = tri()
        phi = delta1(t, [1.0])
        assert [evaluate_edge(t, phi, *e) for e in [(0, 1), (1, 2), (2, 0)]] == [1, 1, 1]

    def test_zero(self):
        assert np.all(delta1(tri(), [0.0]) == 0)


class TestMatrices:
    @given(triangulations())
    def test_assembled_matrices_match_direct_routes(self, t):
        for name, fn, dim in [
            ("d0", d0, t.n_vertices),
            ("delta0", delta0, len(t.edges)),
            ("d1", d1, len(t.edges)),
            ("delta1", delta1, len(t.faces)),
        ]:
            if dim == 0 or (name in ("d1",) and not t.faces):
                continue
            assert np.allclose(operator(t, name).dense(), column_matrix(lambda x: fn(t, x), dim), atol=1e-12)

    def test_sparse_and_dense_agree(self):
        t = complete_triangulation(6)
        for name in ("L0", "L1minus", "L1plus", "L1", "L2"):
            dense = laplacian(t, name, sparse=False).dense()
            assert np.allclose(laplacian(t, name, sparse=True).dense(), dense)

    def test_l0_of_k4(self):
        L0 = laplacian(complete_triangulation(4), "L0").dense()
        assert np.array_equal(L0, 4 * np.eye(4) - np.ones((4, 4)))

    def test_l2_single_triangle(self):
        assert laplacian(tri(), "L2").dense().tolist() == [[3.0]]

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_complete_lower_on_exact_forms(self, n):
        t = complete_triangulation(n)
        phi = d0(t, np.random.default_rng(n).standard_normal(n))
        assert np.allclose(laplacian(t, "L1minus").dense() @ phi, n * phi)

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_complete_upper_on_coclosed(self, n):
        from simplex_spectra.spectral import coclosed_basis

        t = complete_triangulation(n)
        Q = coclosed_basis(t)
        assert np.allclose(laplacian(t, "L1plus").dense() @ Q, n * Q)

    def test_unknown_names(self):
        with pytest.raises(ValueError):
            operator(tri(), "d2")
        with pytest.raises(ValueError):
            laplacian(tri(), "L3")

    def test_symmetrize_requires_endomorphism(self):
        with pytest.raises(DimensionMismatch):
            operator(tri(), "d0").symmetrized()


class TestGaussBonnet:
    def test_square_is_hodge_laplacian(self, t5_upper):
        T = gauss_bonnet(t5_upper).dense()
        assert np.max(np.abs(T @ T - hodge_laplacian_blocks(t5_upper))) < 1e-12

    def test_spectrum_symmetric_single_triangle(self):
        ev = np.sort(np.linalg.eigvals(gauss_bonnet(tri()).dense()).real)
        assert np.allclose(ev, -ev[::-1], atol=1e-10)
        assert np.any(np.abs(ev) < 1e-10)

    @given(triangulations(), st.integers(0, 2**32 - 1))
    def test_self_adjoint(self, t, seed):
        op = gauss_bonnet(t)
        rng = np.random.default_rng(seed)
        x, y = rng.standard_normal((2, op.shape[0]))
        w = op.domain_weights
        lhs, rhs = np.sum(w * (op @ x) * y), np.sum(w * x * (op @ y))
        assert abs(lhs - rhs) <= 1e-12 * np.linalg.norm(x) * np.linalg.norm(y) * np.max(w) ** 2


@given(triangulations(), st.integers(0, 2**32 - 1))
def test_adjointness(t, seed):
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(t.n_vertices)
    phi = rng.standard_normal(len(t.edges))
    theta = rng.standard_normal(len(t.faces))
    scale = np.linalg.norm(f) * np.linalg.norm(phi) * max(1.0, np.max(t.edge_weights)) * max(1.0, np.max(t.vertex_weights))
    assert abs(ip_E(t, d0(t, f), phi) - ip_V(t, f, delta0(t, phi))) <= 1e-12 * scale
    if t.faces:
        scale = np.linalg.norm(phi) * np.linalg.norm(theta) * max(1.0, np.max(t.face_weights)) * max(1.0, np.max(t.edge_weights))
        assert abs(ip_F(t, d1(t, phi), theta) - ip_E(t, phi, delta1(t, theta))) <= 1e-12 * scale


@given(triangulations())
def test_chain_complex_exact(t):
    if t.faces:
        D0 = operator(t, "d0").dense()
        D1 = operator(t, "d1").dense()
        assert not np.any(D1 @ D0)


@given(triangulations())
def test_laplacians_self_adjoint_psd(t):
    for name in ("L0", "L1minus", "L1plus", "L1", "L2"):
        lap = laplacian(t, name)
        if lap.shape[0] == 0:
            continue
        A = lap.dense()
        W = np.diag(lap.domain_weights)
        assert np.allclose(W @ A, (W @ A).T, atol=1e-10 * max(1.0, np.abs(W @ A).max()))
        ev = np.linalg.eigvalsh(lap.symmetrized())
        assert ev[0] >= -1e-9 * max(1.0, ev[-1])
    assert np.array_equal(
        laplacian(t, "L1").dense(), laplacian(t, "L1minus").dense() + laplacian(t, "L1plus").dense()
    )


@given(triangulations(weighted=False))
def test_kernel_dimensions(t):
    def nullity(mat):
        return mat.shape[1] - (np.linalg.matrix_rank(mat) if mat.size else 0)

    dl0 = operator(t, "delta0").dense()
    d1m = operator(t, "d1").dense() if t.faces else np.zeros((0, len(t.edges)))
    lo = laplacian(t, "L1minus").dense()
    up = laplacian(t, "L1plus").dense()
    assert nullity(lo) == nullity(dl0)
    assert nullity(up) == nullity(d1m)
    if t.faces:
        assert nullity(laplacian(t, "L2").dense()) == nullity(operator(t, "delta1").dense())


def test_rayleigh_quotient_zero_cochain():
    with pytest.raises(ValueError):
        rayleigh_quotient(tri(), np.zeros(3))


def test_rayleigh_quotient_of_exact_form_vanishes():
    t = complete_triangulation(4)
    assert abs(rayleigh_quotient(t, d0(t, [0, 1, 5, 2]))) < 1e-12


def test_face_edge_incidence_on_k4_faces():
    t = build(4, list(combinations(range(4), 2)), [(0, 1, 2), (0, 3, 1)])
    D1 = operator(t, "d1").dense()
    assert D1.shape == (2, 6)
    assert np.all(np.abs(D1).sum(axis=1) == 3)
