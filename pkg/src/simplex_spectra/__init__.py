"""Discrete Hodge theory on weighted 2-dimensional triangulations."""

from .catalog import example
from .cheeger import (
    BoundCertificate,
    CheegerResult,
    Tripartition,
    cheeger_test_form,
    cheeger_tripartite,
    cheeger_tripartite_sampled,
    cheeger_upper,
    graph_cheeger,
    lower_bound_cheeger_link,
    lower_bound_link,
    tripartition,
    upper_bound_edge_L1,
    upper_bound_L2,
    zero_gap_certificate,
)
from .cochains import OperatorMatrix, gauss_bonnet, laplacian, operator
from .complex import (
    Graph,
    LinkGraph,
    Triangulation,
    TriangulationError,
    build,
    complete_graph_triangulation,
    complete_triangulation,
    link_graph,
)
from .io import complex_from_dict, complex_to_dict, load_complex
from .spectral import (
    SpectralGap,
    algebraic_connectivity,
    eigen,
    harmonic_dims,
    hodge,
    spectral_gap,
    spectrum_relation_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
