"""JSON complex format and operator export.

A complex file looks like::

    {"vertices": 5, "indexing": "one", "complete_graph": true,
     "faces": [[1, 2, 3], {"v": [1, 2, 5], "weight": 2.0}]}

``vertices`` is a count or a list of ``{"id", "weight"}``; ``edges`` holds
``[u, v]`` pairs or ``{"u", "v", "weight"}`` objects and may be omitted when
``complete_graph`` is true.  Omitted weights are 1.
"""

from __future__ import annotations

import json
import sys
from itertools import combinations
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse as sp

from .cochains import COBOUNDARIES, LAPLACIANS, gauss_bonnet, laplacian, operator
from .complex import Triangulation, TriangulationError, build, complete_triangulation


class ComplexFormatError(TriangulationError):
    pass


def _shift(doc: dict) -> int:
    indexing = doc.get("indexing", "zero")
    if indexing not in ("zero", "one"):
        raise ComplexFormatError(f"indexing: expected 'zero' or 'one', got {indexing!r}")
    return 1 if indexing == "one" else 0


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ComplexFormatError(f"{where}: expected an integer vertex id, got {value!r}")
    return int(value)


def complex_from_dict(doc: dict) -> Triangulation:
    if not isinstance(doc, dict):
        raise ComplexFormatError("complex document must be a JSON object")
    shift = _shift(doc)

    raw_vertices = doc.get("vertices")
    vertex_weights = None
    if isinstance(raw_vertices, list):
        n = len(raw_vertices)
        vertex_weights = [1.0] * n
        for i, item in enumerate(raw_vertices):
            if not isinstance(item, dict) or "id" not in item:
                raise ComplexFormatError(f"vertices[{i}]: expected an object with an 'id'")
            vid = _int(item["id"], f"vertices[{i}].id") - shift
            if not 0 <= vid < n:
                raise ComplexFormatError(f"vertices[{i}]: id {item['id']} outside the vertex range")
            vertex_weights[vid] = float(item.get("weight", 1.0))
    elif raw_vertices is not None and not isinstance(raw_vertices, bool) and isinstance(raw_vertices, int):
        n = raw_vertices
    else:
        raise ComplexFormatError("vertices: expected a count or a list of {id, weight} objects")

    edges, edge_weights = [], []
    if doc.get("complete_graph", False):
        if doc.get("edges"):
            raise ComplexFormatError("edges: must be omitted when complete_graph is true")
        edges = list(combinations(range(n), 2))
        edge_weights = [1.0] * len(edges)
    else:
        for i, item in enumerate(doc.get("edges", [])):
            if isinstance(item, dict):
                pair, w = (item.get("u"), item.get("v")), item.get("weight", 1.0)
            elif isinstance(item, list) and len(item) == 2:
                pair, w = item, 1.0
            else:
                raise ComplexFormatError(f"edges[{i}]: expected [u, v] or {{u, v, weight}}")
            edges.append(tuple(_int(x, f"edges[{i}]") - shift for x in pair))
            edge_weights.append(float(w))

    faces, face_weights = [], []
    for i, item in enumerate(doc.get("faces", [])):
        if isinstance(item, dict):
            verts, w = item.get("v"), item.get("weight", 1.0)
        else:
            verts, w = item, 1.0
        if not isinstance(verts, list) or len(verts) != 3:
            raise ComplexFormatError(f"faces[{i}]: expected three vertex ids")
        faces.append(tuple(_int(x, f"faces[{i}]") - shift for x in verts))
        face_weights.append(float(w))

    return build(n, edges, faces, vertex_weights, edge_weights, face_weights)


def load_complex(path: str | Path) -> Triangulation:
    text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return complex_from_dict(doc)


def complex_to_dict(t: Triangulation, indexing: str = "zero") -> dict:
    """Serialize with canonical edge and face order; weights appear only when not all 1."""
    shift = 1 if indexing == "one" else 0
    doc: dict = {"indexing": indexing}
    if np.all(t.vertex_weights == 1.0):
        doc["vertices"] = t.n_vertices
    else:
        doc["vertices"] = [{"id": i + shift, "weight": float(w)} for i, w in enumerate(t.vertex_weights)]
    if np.all(t.edge_weights == 1.0):
        doc["edges"] = [[u + shift, v + shift] for u, v in t.edges]
    else:
        doc["edges"] = [{"u": u + shift, "v": v + shift, "weight": float(w)} for (u, v), w in zip(t.edges, t.edge_weights)]
    if np.all(t.face_weights == 1.0):
        doc["faces"] = [[x + shift for x in f] for f in t.faces]
    else:
        doc["faces"] = [{"v": [x + shift for x in f], "weight": float(w)} for f, w in zip(t.faces, t.face_weights)]
    return doc


def parse_faces(text: str) -> list[tuple[int, int, int]]:
    """Parse ``"1,2,3;1,2,5"`` into vertex triples."""
    faces = []
    for i, chunk in enumerate(filter(None, (c.strip() for c in text.split(";")))):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 3:
            raise ComplexFormatError(f"face {i + 1} ({chunk!r}): expected three comma-separated ids")
        try:
            faces.append(tuple(int(p) for p in parts))
        except ValueError:
            raise ComplexFormatError(f"face {i + 1} ({chunk!r}): ids must be integers") from None
    return faces


def generate(kind: str, n: int, faces: str | None = None, indexing: str = "zero") -> Triangulation:
    if kind == "complete":
        return complete_triangulation(n)
    if kind == "from-faces":
        if n < 3:
            raise ComplexFormatError(f"--n must be at least 3, got {n}")
        shift = 1 if indexing == "one" else 0
        tri = [tuple(x - shift for x in f) for f in parse_faces(faces or "")]
        return build(n, combinations(range(n), 2), tri)
    raise ComplexFormatError(f"unknown generator {kind!r}")


def dump_operators(t: Triangulation, directory: str | Path) -> dict:
    """Write every operator as a MatrixMarket coordinate file plus ``manifest.json``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    mats = {name: operator(t, name, sparse=False) for name in COBOUNDARIES}
    mats.update({name: laplacian(t, name, sparse=False) for name in LAPLACIANS})
    mats["T"] = gauss_bonnet(t)
    manifest = {"operators": {}, "bases": {
        "V": list(range(t.n_vertices)),
        "E": [list(e) for e in t.edges],
        "F": [list(f) for f in t.faces],
        "H": "V followed by E followed by F",
    }, "weights": {
        "V": t.vertex_weights.tolist(),
        "E": t.edge_weights.tolist(),
        "F": t.face_weights.tolist(),
    }}
    for name, op in mats.items():
        fname = f"{name}.mtx"
        scipy.io.mmwrite(out / fname, sp.coo_matrix(op.dense()), field="real", symmetry="general")
        manifest["operators"][name] = {
            "file": fname,
            "domain": op.domain,
            "codomain": op.codomain,
            "shape": list(op.shape),
        }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
