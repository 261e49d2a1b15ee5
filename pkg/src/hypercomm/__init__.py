"""Community detection in hypergraphs with a low-rank embedding model."""
from .errors import EmptyNetworkError, HypercommError, NumericalFailure, ParseError
from .hypergraph import (
    Hypergraph,
    clique_expand,
    degree,
    enumerate_index_sets,
    estimate_sparsity,
    load_hyperedge_list,
    parse_hyperedge_list,
    phi,
)
from .model import ModelParams, gradient, link_prob, objective, objective_and_gradient, theta
from .optimizer import FitConfig, FitResult, fit
from .hosvd import hosvd_init
from .kmeans import kmeans
from .synth import SyntheticTruth, generate, generate_scenario1, generate_scenario2
from .baselines import shp_detect, wptg_detect
from .metrics import hamming_error, hellinger
from .bench import EvalReport, benchmark

__version__ = "0.1.0"

__all__ = [
    "EmptyNetworkError",
    "EvalReport",
    "FitConfig",
    "FitResult",
    "Hypergraph",
    "HypercommError",
    "ModelParams",
    "NumericalFailure",
    "ParseError",
    "SyntheticTruth",
    "benchmark",
    "clique_expand",
    "degree",
    "enumerate_index_sets",
    "estimate_sparsity",
    "fit",
    "generate",
    "generate_scenario1",
    "generate_scenario2",
    "gradient",
    "hamming_error",
    "hellinger",
    "hosvd_init",
    "kmeans",
    "link_prob",
    "load_hyperedge_list",
    "objective",
    "objective_and_gradient",
    "parse_hyperedge_list",
    "phi",
    "shp_detect",
    "theta",
    "wptg_detect",
]
