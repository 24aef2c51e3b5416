"""Independent random-graph ensembles with a fixed joint degree distribution.

An edge-swap Markov chain rewires a simple undirected graph without
changing how many edges join each pair of degree classes. Two stopping
rules decide how long to run it: an analytic run length derived from a
two-state model of each edge, and a data-driven thinning factor found by
comparing independence against first-order Markov fits on edge
occurrence series.
"""

from .chain import (
    ChainConfig,
    EdgeSeries,
    EdgeSwapChain,
    RunResult,
    StepOutcome,
    StepTag,
    SwapProposal,
    apply_swap,
    propose,
    run,
)
from .graph import (
    DegreeHistogram,
    Graph,
    GraphParseError,
    JointDegreeMatrix,
    ValidationReport,
    degree_histogram,
    joint_degree_matrix,
    load_edge_list,
    loads_edge_list,
    save_edge_list,
    validate,
)
from .method_a import (
    TwoStateEdgeModel,
    edge_model,
    generate_ensemble,
    per_edge_run_length,
    run_length,
    stationary_distribution,
)
from .method_b import (
    ContingencyTable,
    DiagnosticError,
    OneLongRunResult,
    ThinningResult,
    autocorrelation,
    contingency,
    delta_bic,
    discover_realized_pairs,
    find_thinning_factor,
    global_thinning,
    one_long_run,
    sample_tracked_edges,
    thin,
)
from .metrics import (
    LaplacianEigenResult,
    MetricSample,
    diameter,
    evaluate_graph,
    global_clustering,
    ks_distance,
    lambda_max,
    triangles,
    wedges,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # graph core
    "Graph", "DegreeHistogram", "JointDegreeMatrix", "GraphParseError",
    "ValidationReport", "load_edge_list", "loads_edge_list", "save_edge_list",
    "degree_histogram", "joint_degree_matrix", "validate",
    # chain
    "ChainConfig", "SwapProposal", "StepOutcome", "StepTag", "EdgeSeries",
    "EdgeSwapChain", "RunResult", "propose", "apply_swap", "run",
    # analytic stopping rule
    "TwoStateEdgeModel", "edge_model", "stationary_distribution",
    "run_length", "per_edge_run_length", "generate_ensemble",
    # thinning diagnostic
    "ContingencyTable", "ThinningResult", "OneLongRunResult", "DiagnosticError",
    "thin", "contingency", "delta_bic", "find_thinning_factor",
    "global_thinning", "sample_tracked_edges", "autocorrelation",
    "discover_realized_pairs", "one_long_run",
    # metrics
    "MetricSample", "LaplacianEigenResult", "triangles", "wedges",
    "global_clustering", "diameter", "lambda_max", "ks_distance",
    "evaluate_graph",
]
