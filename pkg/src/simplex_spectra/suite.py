"""Built-in worked examples with their expected values.

Each row compares one computed quantity against either a published value
(``source="published"``) or a constant pinned from an independent computation
(``source="derived"``).  Pinned spectral gaps are regression constants.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from math import cos, pi

import numpy as np

from . import catalog
from .cheeger import cheeger_tripartite, lower_bound_link, nonzero_cheeger_witness, upper_bound_edge_L1
from .complex import counts, link_graph
from .spectral import algebraic_connectivity, eigen, spectral_gap, zero_gap_criterion

LAMBDA1_C5 = 2 - 2 * cos(2 * pi / 5)


@dataclass
class SuiteRow:
    example: str
    quantity: str
    computed: object
    expected: object
    tol: float | None
    source: str
    passed: bool = False

    def check(self) -> "SuiteRow":
        if self.tol is None:
            self.passed = self.computed == self.expected
        else:
            self.passed = abs(float(self.computed) - float(self.expected)) <= self.tol
        return self


def _rows_for(name: str, faces=None) -> list[SuiteRow]:
    t = catalog.example(name, faces)
    gap = spectral_gap(t).value
    rows: list[SuiteRow] = []

    def add(quantity, computed, expected, tol, source):
        rows.append(SuiteRow(name, quantity, computed, expected, tol, source).check())

    def link_lambdas():
        return [algebraic_connectivity(link_graph(t, x)) for x in range(t.n_vertices)]

    if name == "T4":
        add("counts (V, E, F)", list(counts(t)), [4, 6, 3], None, "published")
        add("h", cheeger_tripartite(t).h, 2.0, 1e-6, "published")
        add("gap <= h", bool(gap <= cheeger_tripartite(t).h + 1e-9), True, None, "published")
        add("gap", gap, 1.0, 1e-9, "derived")
        add("edge bound on min sigma(L1)", upper_bound_edge_L1(t).value, 3.0, 1e-12, "derived")
        witness = nonzero_cheeger_witness(t)
        add("nonzero-h witness (1-indexed)", None if witness is None else witness + 1, 1, None, "published")
    elif name == "T5_upper":
        h = cheeger_tripartite(t).h
        add("h", h, 5 / 3, 1e-6, "published")
        add("gap <= h", bool(gap <= h + 1e-9), True, None, "published")
        add("gap", gap, 1.0, 1e-9, "derived")
        witness = nonzero_cheeger_witness(t)
        add("nonzero-h witness (1-indexed)", None if witness is None else witness + 1, 1, None, "published")
    elif name == "T5_lower":
        cert = lower_bound_link(t)
        add("link lower bound", cert.value, 2.0, 1e-6, "published")
        add("lambda1(K(1)) = lambda1(C4)", link_lambdas()[0], 2.0, 1e-10, "published")
        # edge {3,5} lies in no face: the bound's hypothesis fails and the gap is in fact 0
        add("all F_e nonempty", cert.hypothesis_checks["all_face_neighbors_nonempty"], False, None, "derived")
        add("gap", gap, 0.0, 1e-9, "derived")
    elif name == "T6":
        cert = lower_bound_link(t)
        add("link lower bound (rounded)", cert.value, 0.7639, 1e-4, "published")
        add("link lower bound", cert.value, 2 * LAMBDA1_C5 - 2, 1e-10, "derived")
        add("max |lambda1(K(x)) - lambda1(C5)|", max(abs(v - LAMBDA1_C5) for v in link_lambdas()), 0.0, 1e-10, "published")
        add("gap >= link bound", bool(gap >= cert.value - 1e-9), True, None, "published")
        add("gap", gap, 2 * LAMBDA1_C5 - 2, 1e-9, "derived")
    elif name == "T5_prime":
        cert = lower_bound_link(t)
        add("link lower bound", cert.value, 1.0, 1e-6, "published")
        add("min lambda1(K(x))", min(link_lambdas()), 2.0, 1e-10, "published")
        add("gap >= link bound", bool(gap >= cert.value - 1e-9), True, None, "published")
        add("gap", gap, 2.0, 1e-9, "derived")
    elif name.startswith("complete"):
        n = t.n_vertices
        spec = eigen(t, "L1").eigenvalues
        add("max |sigma(L1)/n - 1|", float(np.max(np.abs(spec / n - 1))), 0.0, 1e-8, "published")
        add("gap", gap, float(n), 1e-8 * n, "published")
        add("h", cheeger_tripartite(t).h, float(n), 1e-9, "derived")
        add("zero-gap face criterion", zero_gap_criterion(t), False, None, "published")
    return rows


EXAMPLES = ("T4", "T5_upper", "T5_lower", "T6", "T5_prime", "complete3", "complete4", "complete5", "complete6")


def paper_suite(overrides: dict | None = None) -> list[SuiteRow]:
    """Run every built-in example; ``overrides`` maps example names to replacement 1-indexed face lists."""
    overrides = overrides or {}
    rows = []
    for name in EXAMPLES:
        rows.extend(_rows_for(name, overrides.get(name)))
    return rows


def rows_as_dicts(rows: list[SuiteRow]) -> list[dict]:
    return [asdict(r) for r in rows]


def format_table(rows: list[SuiteRow]) -> str:
    lines = [f"{'example':<10} {'quantity':<34} {'computed':>22} {'expected':>22}  {'source':<9} result"]
    for r in rows:
        comp = f"{r.computed:.12g}" if isinstance(r.computed, float) else str(r.computed)
        exp = f"{r.expected:.12g}" if isinstance(r.expected, float) else str(r.expected)
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.example:<10} {r.quantity:<34} {comp:>22} {exp:>22}  {r.source:<9} {status}")
        if not r.passed and r.tol is not None:
            lines.append(f"{'':<10} diff = {float(r.computed) - float(r.expected):.3e} (tol {r.tol:g})")
        elif not r.passed:
            lines.append(f"{'':<10} diff: got {comp}, expected {exp}")
    return "\n".join(lines)
