"""Hopf bifurcation analysis and simulation of multi-topic belief dynamics on signed networks."""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    ComparisonReport,
    OscillationMeasurement,
    Tolerances,
    compare,
    discard_transient,
    measure_oscillation,
)
from .bifurcation import (  # noqa: E402
    Criticality,
    GraphClassification,
    HopfReport,
    Verdict,
    check_assumption1,
    classify_graphs,
    compute_K,
    critical_attention,
    hopf_coefficient_b,
    hopf_vectors,
    normalize_hopf_eigenvectors,
    oscillation_threshold,
    predict_oscillation,
)
from .dynamics import IntegrationSettings, Trajectory, integrate, random_initial, rhs  # noqa: E402
from .params import ModelParams, SaturationSpec  # noqa: E402
from .signed_graph import (  # noqa: E402
    SignedGraph,
    SwitchingSigns,
    complete_graph,
    find_switching_to_eventually_positive,
    graph_from_spec,
    is_undirected,
    signed_cycle,
    switch_graph,
)
from .spectral import (  # noqa: E402
    compose_jacobian_spectrum,
    eig,
    form_jacobian,
    has_strong_perron_frobenius,
    is_eventually_positive,
    leading_eigenvalues,
)
