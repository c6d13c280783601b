"""Monochromatic cycles and connected-matchings in three-multicoloured graphs."""

from .certifier import Inconclusive, ScaledParams, StabilityOutcome, certify_stability, verify_outcome
from .decomposition import (
    CaseEDecomposition,
    ParityDecomposition,
    XYWDecomposition,
    case_e_decomposition,
    green_parity_decomposition,
    green_XYW,
    purify_inside,
    purify_pair,
)
from .errors import BudgetExceeded, CounterexampleFound, GraphError, PreconditionError
from .exact import Surd
from .graph import (
    Colour,
    ColouredGraph,
    GraphBuilder,
    build_graph,
    completeness_report,
    load_graph,
    mono_components,
    ramsey_formula_A,
    ramsey_formula_C,
    threshold_c,
)
from .matching import (
    ConnectedMatchingCertificate,
    Matching,
    greedy_almost_complete_matching,
    largest_connected_matching,
    largest_odd_connected_matching,
    max_matching,
)
from .search import CycleQuery, SearchReport, construct_lower_bound, find_mono_cycle, ramsey_search
from .structures import (
    HStructure,
    KStarStructure,
    KStructure,
    build_H,
    build_K,
    build_K_star,
    find_structure,
    validate_H,
    validate_K,
    validate_K_star,
)

__all__ = [
    "Inconclusive",
    "ScaledParams",
    "StabilityOutcome",
    "certify_stability",
    "verify_outcome",
    "CaseEDecomposition",
    "ParityDecomposition",
    "XYWDecomposition",
    "case_e_decomposition",
    "green_parity_decomposition",
    "green_XYW",
    "purify_inside",
    "purify_pair",
    "BudgetExceeded",
    "CounterexampleFound",
    "GraphError",
    "PreconditionError",
    "Surd",
    "Colour",
    "ColouredGraph",
    "GraphBuilder",
    "build_graph",
    "completeness_report",
    "load_graph",
    "mono_components",
    "ramsey_formula_A",
    "ramsey_formula_C",
    "threshold_c",
    "ConnectedMatchingCertificate",
    "Matching",
    "greedy_almost_complete_matching",
    "largest_connected_matching",
    "largest_odd_connected_matching",
    "max_matching",
    "CycleQuery",
    "SearchReport",
    "construct_lower_bound",
    "find_mono_cycle",
    "ramsey_search",
    "HStructure",
    "KStarStructure",
    "KStructure",
    "build_H",
    "build_K",
    "build_K_star",
    "find_structure",
    "validate_H",
    "validate_K",
    "validate_K_star",
]

__version__ = "0.1.0"
