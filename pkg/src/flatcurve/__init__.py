"""Infection-curve flattening on Watts-Strogatz small-world networks.

Generate WS graphs, isolate the most central nodes, spread an infection one
hop per iteration from a single seed, and summarize the resulting distance
distributions with Gamma fits and peak counts.
"""

from .centrality import CentralityScores, Measure, Ranking, compute_scores, rank_top_fraction
from .distfit import GammaParams, curve_points, fit_gamma, gamma_pdf
from .epidemic import DistanceHistogram, aggregate, isolate, normalize, peak, run_trial, spread_from
from .experiment import ExperimentConfig, ExperimentResult, compare_flattening, run_experiment
from .generators import WsParams, erdos_renyi, ring_lattice, watts_strogatz
from .graph import UNREACHABLE, DistanceVector, Graph, bfs_distances, connected_components, new_graph
from .metrics import (
    characteristic_path_length,
    global_clustering,
    reference_values,
    small_worldness,
)

__version__ = "0.1.0"

__all__ = [
    "CentralityScores",
    "DistanceHistogram",
    "DistanceVector",
    "ExperimentConfig",
    "ExperimentResult",
    "GammaParams",
    "Graph",
    "Measure",
    "Ranking",
    "UNREACHABLE",
    "WsParams",
    "aggregate",
    "bfs_distances",
    "characteristic_path_length",
    "compare_flattening",
    "compute_scores",
    "connected_components",
    "curve_points",
    "erdos_renyi",
    "fit_gamma",
    "gamma_pdf",
    "global_clustering",
    "isolate",
    "new_graph",
    "normalize",
    "peak",
    "rank_top_fraction",
    "reference_values",
    "ring_lattice",
    "run_experiment",
    "run_trial",
    "small_worldness",
    "spread_from",
    "watts_strogatz",
]
