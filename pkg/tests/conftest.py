from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from simplex_spectra import build, catalog

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: dict[int, dict] = {}


@st.composite
def triangulations(draw, min_n=3, max_n=7, weighted=True, complete=False):
    """Connected triangulations with random faces, orientations and (optionally) weights."""
    n = draw(st.integers(min_n, max_n))
    if complete:
        edges = list(combinations(range(n), 2))
    else:
        perm = draw(st.permutations(range(n)))
        tree = set()
        for i in range(1, n):
            j = draw(st.integers(0, i - 1))
            tree.add(tuple(sorted((perm[i], perm[j]))))
        others = [e for e in combinations(range(n), 2) if e not in tree]
        extra = draw(st.lists(st.sampled_from(others), unique=True)) if others else []
        edges = sorted(tree | set(extra))
    eset = set(edges)
    candidates = [
        tri for tri in combinations(range(n), 3)
        if all(tuple(sorted(p)) in eset for p in combinations(tri, 2))
    ]
    chosen = draw(st.lists(st.sampled_from(candidates), unique=True)) if candidates else []
    faces = [f if draw(st.booleans()) else (f[1], f[0], f[2]) for f in chosen]
    if not weighted:
        return build(n, edges, faces)
    w = st.floats(0.2, 5.0)
    return build(
        n,
        edges,
        faces,
        vertex_weights=draw(st.lists(w, min_size=n, max_size=n)),
        edge_weights=draw(st.lists(w, min_size=len(edges), max_size=len(edges))),
        face_weights=draw(st.lists(w, min_size=len(faces), max_size=len(faces))),
    )


@pytest.fixture
def t4():
    return catalog.example("T4")


@pytest.fixture
def t5_upper():
    return catalog.example("T5_upper")


@pytest.fixture
def t5_lower():
    return catalog.example("T5_lower")


@pytest.fixture
def t6():
    return catalog.example("T6")


@pytest.fixture
def t5_prime():
    return catalog.example("T5_prime")


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None or report.when != "call" and not report.failed:
        return
    entry = _ACCEPTANCE.setdefault(marker[0], {"title": marker[1], "ok": True})
    entry["ok"] = entry["ok"] and not report.failed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report.acceptance = (mark.args[0], mark.kwargs.get("title", ""))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        entry = _ACCEPTANCE[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number}: {entry['title']}")
