"""Named example complexes, all homogeneous triangulations of complete graphs.

Face lists are written 1-indexed, as they are usually quoted; the built
complexes are 0-indexed.
"""

from __future__ import annotations

from .complex import Triangulation, complete_graph_triangulation, complete_triangulation

FACES: dict[str, tuple[int, list[tuple[int, int, int]]]] = {
    # every face contains vertex 1; tripartite Cheeger constant 2
    "T4": (4, [(1, 2, 3), (1, 2, 4), (1, 3, 4)]),
    # the cone over K4 from vertex 1; tripartite Cheeger constant 5/3
    "T5_upper": (5, [(1, 2, 3), (1, 2, 4), (1, 3, 4), (1, 2, 5), (1, 3, 5), (1, 4, 5)]),
    # links of 1, 2 and 4 are 4-cycles; edge {3, 5} lies in no face
    "T5_lower": (5, [(1, 2, 3), (1, 2, 5), (1, 3, 4), (1, 4, 5), (2, 3, 4), (2, 4, 5)]),
    # every link is a 5-cycle
    "T6": (
        6,
        [
            (1, 2, 3), (1, 2, 6), (1, 3, 4), (1, 4, 5), (1, 5, 6),
            (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6),
        ],
    ),
    "T5_prime": (5, [(1, 2, 3), (1, 2, 5), (1, 3, 4), (1, 3, 5), (1, 4, 5), (2, 3, 4), (2, 4, 5), (3, 4, 5)]),
}


def example(name: str, faces: list[tuple[int, int, int]] | None = None) -> Triangulation:
    """Build a named example; ``faces`` (1-indexed) replaces its face list."""
    if name.startswith("complete"):
        return complete_triangulation(int(name.removeprefix("complete")))
    try:
        n, default = FACES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {sorted(FACES)} or completeN") from None
    return complete_graph_triangulation(n, default if faces is None else faces, indexing="one")


def single_triangle() -> Triangulation:
    return complete_triangulation(3)
