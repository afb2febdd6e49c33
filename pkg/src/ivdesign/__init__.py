"""Budget-limited single-vertex intervention design for causal
structure learning: essential graphs, Markov equivalence class
counting and sampling, objective estimation, and greedy designers.
"""

__version__ = "0.1.0"

from .errors import (
    CapExceededError,
    ContradictionError,
    CycleError,
    InputValidationError,
    IvDesignError,
    ParseError,
)
from .graph import PDAG, check_intervention_set, incident_orientations
from .meek import apply_background, discovered_count, meek_close, resolved_set
from .essential import essential_of, validate_essential
from .mec import (
    class_size,
    counting_session,
    enumerate_members,
    flowed,
    rand_edge,
    sample_member,
    w_count,
)
from .estimators import (
    Estimate,
    EstimatorConfig,
    chernoff_sample_size,
    default_estimator_kind,
    estimate,
    estimate_fast,
    estimate_unbiased,
    exact_objective,
    greedy_accuracy_params,
    sample_fast_member,
)
from .designer import (
    DesignResult,
    baseline_maxdeg,
    baseline_random,
    brute_force_design,
    greedy_design,
    lazy_greedy_design,
)
from .generate import GeneratorConfig, discovered_edge_ratio, random_chordal_dag
from .fileio import dumps_graph, ingest_dream3, loads_graph, parse_graph, write_graph
from .bench import BenchSpec, EvalReport, run_benchmark

__all__ = [
    "PDAG",
    "IvDesignError",
    "InputValidationError",
    "ContradictionError",
    "CycleError",
    "ParseError",
    "CapExceededError",
    "check_intervention_set",
    "incident_orientations",
    "meek_close",
    "apply_background",
    "resolved_set",
    "discovered_count",
    "essential_of",
    "validate_essential",
    "enumerate_members",
    "class_size",
    "flowed",
    "w_count",
    "rand_edge",
    "sample_member",
    "counting_session",
    "Estimate",
    "EstimatorConfig",
    "chernoff_sample_size",
    "greedy_accuracy_params",
    "default_estimator_kind",
    "exact_objective",
    "estimate",
    "estimate_unbiased",
    "estimate_fast",
    "sample_fast_member",
    "DesignResult",
    "greedy_design",
    "lazy_greedy_design",
    "baseline_random",
    "baseline_maxdeg",
    "brute_force_design",
    "GeneratorConfig",
    "random_chordal_dag",
    "discovered_edge_ratio",
    "dumps_graph",
    "loads_graph",
    "write_graph",
    "parse_graph",
    "ingest_dream3",
    "BenchSpec",
    "EvalReport",
    "run_benchmark",
]
