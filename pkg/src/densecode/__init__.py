"""Dense-coding capacity of multi-qubit states under correlated and uncorrelated noise."""

from .capacity import CapacityResult, noiseless_capacity, noisy_capacity
from .channels import FullyCorrelatedPauli, SinglePauli, UncorrelatedDepolarizing
from .correlations import concurrence, discord_score, ggm, quantum_discord, tangle_score
from .experiments import ExperimentConfig, run
from .states import SystemLayout, gghz, haar_pure, haar_rank2_mixed, make_rng

__version__ = "0.1.0"

__all__ = [
    "CapacityResult",
    "ExperimentConfig",
    "FullyCorrelatedPauli",
    "SinglePauli",
    "SystemLayout",
    "UncorrelatedDepolarizing",
    "concurrence",
    "discord_score",
    "gghz",
    "ggm",
    "haar_pure",
    "haar_rank2_mixed",
    "make_rng",
    "noiseless_capacity",
    "noisy_capacity",
    "quantum_discord",
    "run",
    "tangle_score",
]
