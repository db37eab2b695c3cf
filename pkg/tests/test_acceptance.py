"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import time
from itertools import combinations
from math import cos, pi

import numpy as np
import pytest

from oracles import (
    all_face_subsets,
    brute_force_gap,
    naive_cheeger,
    naive_fiedler,
    random_complete_complex,
    random_connected_graph,
)
from simplex_spectra import build, catalog
from simplex_spectra.cheeger import (
    add_edge,
    cheeger_tripartite,
    edge_monotonicity_check,
    lower_bound_link,
    stirling3,
    upper_bound_edge_L1,
    upper_bound_L2,
)
from simplex_spectra.cochains import gauss_bonnet, hodge_laplacian_blocks, ip_E, ip_F, ip_V, laplacian, operator
from simplex_spectra.complex import Graph, face_neighbors, link_graph
from simplex_spectra.spectral import (
    algebraic_connectivity,
    eigen,
    harmonic_dims,
    hodge,
    spectral_gap,
    spectrum_relation_check,
)

SEED = 20240611
LAMBDA1_C5 = 2 - 2 * cos(2 * pi / 5)


class Criterion:
    """Collects named checks and reports them in one line."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.failures: list[str] = []
        self.checked = 0

    def check(self, ok, message: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(message)

    def finish(self) -> None:
        status = "PASS" if not self.failures else "FAIL"
        print(f"\n{status}  criterion {self.number}: {self.title} ({self.checked} checks)")
        for msg in self.failures[:20]:
            print(f"      {msg}")
        assert not self.failures, f"{len(self.failures)} failed checks, first: {self.failures[0]}"


def corpus(size: int = 220):
    rng = np.random.default_rng(SEED)
    return [random_complete_complex(rng, int(rng.integers(4, 10))) for _ in range(size)]


@pytest.mark.acceptance(1, title="worked-example regressions")
def test_criterion_1_worked_examples():
    c = Criterion(1, "worked-example regressions")
    start = time.perf_counter()

    c.check(cheeger_tripartite(catalog.example("T4")).exact_h == 2, "h(T4) != 2")
    c.check(abs(cheeger_tripartite(catalog.example("T5_upper")).h - 5 / 3) <= 1e-6, "h(T5 upper) != 5/3")

    c.check(abs(lower_bound_link(catalog.example("T5_lower")).value - 2) <= 1e-6, "link bound T5 lower != 2")
    t6_bound = lower_bound_link(catalog.example("T6")).value
    c.check(abs(t6_bound - 0.7639) <= 1e-4, f"link bound T6 = {t6_bound}")
    c.check(abs(t6_bound - (2 * LAMBDA1_C5 - 2)) <= 1e-6, f"link bound T6 = {t6_bound}")
    c.check(abs(lower_bound_link(catalog.example("T5_prime")).value - 1) <= 1e-6, "link bound T5' != 1")

    for n in (3, 4, 5, 6):
        t = catalog.example(f"complete{n}")
        spec = eigen(t, "L1").eigenvalues
        c.check(np.all(np.abs(spec - n) <= 1e-8 * n), f"sigma(L1) of complete {n}: {spec}")
        c.check(abs(spectral_gap(t).value - n) <= 1e-8 * n, f"gap of complete {n}")

    c.check(abs(algebraic_connectivity(link_graph(catalog.example("T5_lower"), 0)) - 2) <= 1e-10, "lambda1(C4)")
    c.check(abs(algebraic_connectivity(link_graph(catalog.example("T6"), 0)) - LAMBDA1_C5) <= 1e-10, "lambda1(C5)")

    elapsed = time.perf_counter() - start
    c.check(elapsed < 10.0, f"runtime {elapsed:.2f}s")
    c.finish()


@pytest.mark.acceptance(2, title="bound assertions on a seeded random corpus")
def test_criterion_2_random_corpus():
    c = Criterion(2, "bound assertions on a seeded random corpus")
    complexes = corpus()
    c.check(len(complexes) >= 200, "corpus too small")
    applied = {"cheeger": 0, "link": 0, "zero": 0}
    for k, t in enumerate(complexes):
        tag = f"#{k} n={t.n_vertices} |F|={len(t.faces)}"
        gap = spectral_gap(t)

        h = cheeger_tripartite(t).h
        if h > 0:
            applied["cheeger"] += 1
            c.check(h - gap.value >= -1e-9, f"{tag}: gap {gap.value} > h {h}")

        if all(face_neighbors(t, e) for e in t.edges):
            applied["link"] += 1
            bound = lower_bound_link(t).value
            c.check(gap.value - bound >= -1e-9, f"{tag}: gap {gap.value} < link bound {bound}")

        if len(t.faces) < len(t.edges) - t.n_vertices + 1:
            applied["zero"] += 1
            c.check(abs(gap.value) < gap.zero_tol, f"{tag}: face-count criterion but gap {gap.value}")

        cert = upper_bound_edge_L1(t)
        c.check(cert.reference <= cert.value + 1e-9, f"{tag}: min sigma(L1) {cert.reference} > {cert.value}")
        if t.faces:
            cert = upper_bound_L2(t)
            c.check(cert.reference <= cert.value + 1e-9, f"{tag}: min sigma(L2) {cert.reference} > {cert.value}")

        c.check(spectrum_relation_check(t, tol=1e-8).agree, f"{tag}: nonzero sigma(L1plus) != sigma(L2)")

    # every assertion must actually fire on part of the corpus
    for name, count in applied.items():
        c.check(count > 0, f"assertion {name} never applied")
    c.finish()


def structural_corpus():
    rng = np.random.default_rng(SEED + 1)
    out = [catalog.example(name) for name in catalog.FACES]
    out.extend(catalog.example(f"complete{n}") for n in (3, 4, 5, 6))
    for _ in range(60):
        n = int(rng.integers(3, 9))
        edges = random_connected_graph(rng, n, rng.uniform(0.2, 0.9))
        eset = set(edges)
        tris = [f for f in combinations(range(n), 3) if all(p in eset for p in combinations(f, 2))]
        faces = [f for f in tris if rng.random() < 0.6]
        out.append(build(
            n, edges, faces,
            vertex_weights=rng.uniform(0.2, 5, n),
            edge_weights=rng.uniform(0.2, 5, len(edges)),
            face_weights=rng.uniform(0.2, 5, len(faces)),
        ))
    return out


@pytest.mark.acceptance(3, title="structural identities")
def test_criterion_3_structure():
    c = Criterion(3, "structural identities")
    rng = np.random.default_rng(SEED + 2)
    for k, t in enumerate(structural_corpus()):
        tag = f"#{k}"
        D0 = operator(t, "d0", sparse=False).dense()
        D1 = operator(t, "d1", sparse=False).dense()
        if t.faces:
            c.check(np.array_equal(D1 @ D0, np.zeros((len(t.faces), t.n_vertices))), f"{tag}: d1 d0 != 0")

        f = rng.standard_normal(t.n_vertices)
        phi = rng.standard_normal(len(t.edges))
        theta = rng.standard_normal(len(t.faces))
        dl0 = operator(t, "delta0", sparse=False).dense()
        dl1 = operator(t, "delta1", sparse=False).dense()
        r0 = abs(ip_E(t, D0 @ f, phi) - ip_V(t, f, dl0 @ phi))
        c.check(r0 < 1e-12 * max(1.0, abs(ip_E(t, D0 @ f, phi))), f"{tag}: d0 adjoint residual {r0}")
        if t.faces:
            r1 = abs(ip_F(t, D1 @ phi, theta) - ip_E(t, phi, dl1 @ theta))
            c.check(r1 < 1e-12 * max(1.0, abs(ip_F(t, D1 @ phi, theta))), f"{tag}: d1 adjoint residual {r1}")

        h = hodge(t)
        c.check(h.gram_residual() < 1e-10, f"{tag}: Gram residual {h.gram_residual()}")
        dims = harmonic_dims(t)
        c.check(len(set(dims.values()) | {h.harmonic_dim}) == 1, f"{tag}: harmonic dims {dims}, {h.harmonic_dim}")

        T = gauss_bonnet(t).dense()
        err = np.max(np.abs(T @ T - hodge_laplacian_blocks(t)))
        c.check(err < 1e-12, f"{tag}: T^2 residual {err}")

        L1 = laplacian(t, "L1", sparse=False).dense()
        lo = laplacian(t, "L1minus", sparse=False).dense()
        up = laplacian(t, "L1plus", sparse=False).dense()
        c.check(np.array_equal(L1, lo + up), f"{tag}: L1 != L1minus + L1plus")
    c.finish()


def oracle_corpus():
    for n in (4, 5):
        for faces in all_face_subsets(n):
            yield build(n, combinations(range(n), 2), faces)
    # K6 has exactly 15 edges; 2^20 face sets is too many, so sample them
    rng = np.random.default_rng(SEED + 3)
    for _ in range(150):
        yield random_complete_complex(rng, 6)
    # non-complete graphs up to 15 edges, gap only
    for _ in range(100):
        n = int(rng.integers(4, 8))
        edges = random_connected_graph(rng, n, rng.uniform(0.2, 0.8))[:15]
        if len(edges) < n or not Graph.from_edges(edges, range(n)).is_connected():
            continue
        eset = set(edges)
        tris = [f for f in combinations(range(n), 3) if all(p in eset for p in combinations(f, 2))]
        yield build(n, edges, [f for f in tris if rng.random() < 0.5], edge_weights=rng.uniform(0.3, 3, len(edges)))


@pytest.mark.acceptance(4, title="oracle equivalence")
def test_criterion_4_oracles():
    c = Criterion(4, "oracle equivalence")
    cheeger_done = 0
    for k, t in enumerate(oracle_corpus()):
        if len(t.edges) > 15 or len(t.edges) < t.n_vertices:
            continue
        tag = f"#{k} n={t.n_vertices} F={list(t.faces)}"
        gap = spectral_gap(t).value
        ref = brute_force_gap(t)
        c.check(abs(gap - ref) <= 1e-8 * max(1.0, abs(ref)), f"{tag}: gap {gap} vs oracle {ref}")
        if len(t.edges) == t.n_vertices * (t.n_vertices - 1) // 2 and t.is_homogeneous:
            res = cheeger_tripartite(t)
            naive, scored = naive_cheeger(t)
            c.check(scored == 6 * stirling3(t.n_vertices), f"{tag}: ordered count {scored}")
            c.check(res.exact_h == naive, f"{tag}: h {res.exact_h} vs naive {naive}")
            cheeger_done += 1
    c.check(cheeger_done >= 16 + 1024, f"only {cheeger_done} Cheeger comparisons")
    c.finish()


@pytest.mark.acceptance(5, title="edge monotonicity of lambda1")
def test_criterion_5_monotonicity():
    c = Criterion(5, "edge monotonicity of lambda1")
    rng = np.random.default_rng(SEED + 4)
    pairs = 0
    while pairs < 100:
        n = int(rng.integers(3, 12))
        edges = random_connected_graph(rng, n, rng.uniform(0.0, 0.7))
        missing = [e for e in combinations(range(n), 2) if e not in set(edges)]
        if not missing:
            continue
        g = Graph.from_edges(edges, range(n))
        u, v = missing[int(rng.integers(len(missing)))]
        g2 = add_edge(g, u, v)
        before, after = algebraic_connectivity(g), algebraic_connectivity(g2)
        c.check(abs(before - naive_fiedler(n, edges)) <= 1e-10, f"lambda1 oracle mismatch n={n}")
        c.check(edge_monotonicity_check(g, g2, tol=1e-10), f"n={n} +{(u, v)}: {before} -> {after}")
        pairs += 1
    c.finish()
