"""Sampling and recovery of approximately bandlimited graph signals.

Uniform random sampling and score-weighted (experimentally designed)
sampling, their unbiased low-frequency estimators, the error bounds they
satisfy and a Monte Carlo harness that compares them.
"""

from .graph_core import (
    EdgeListError,
    GraphShift,
    build_erdos_renyi,
    build_ring_knn,
    build_star,
    load_edge_list,
    normalize_shift,
    save_edge_list,
)
from .harness import ExperimentConfig, GraphSpec, MseCurve, compare_strategies, run_experiment
from .recovery import (
    Method,
    RecoveryResult,
    linear_approx,
    mse,
    recover_designed,
    recover_least_squares,
    recover_random,
)
from .sampler import SampleSet, sample_scored, sample_uniform, sampling_operator
from .signal_model import BltParams, blt_residual, generate_blt_signal, global_smoothness, theorem1_thresholds
from .spectral import SamplingScores, SpectralBasis, decompose, gft, igft, sampling_scores
from .theory_bounds import BoundInputs, bound_designed, bound_random, fit_rate, optimal_kappa

__version__ = "0.1.0"

__all__ = [
    "EdgeListError", "GraphShift", "build_erdos_renyi", "build_ring_knn", "build_star",
    "load_edge_list", "normalize_shift", "save_edge_list",
    "ExperimentConfig", "GraphSpec", "MseCurve", "compare_strategies", "run_experiment",
    "Method", "RecoveryResult", "linear_approx", "mse", "recover_designed",
    "recover_least_squares", "recover_random",
    "SampleSet", "sample_scored", "sample_uniform", "sampling_operator",
    "BltParams", "blt_residual", "generate_blt_signal", "global_smoothness", "theorem1_thresholds",
    "SamplingScores", "SpectralBasis", "decompose", "gft", "igft", "sampling_scores",
    "BoundInputs", "bound_designed", "bound_random", "fit_rate", "optimal_kappa",
]
