"""Independent brute-force engines used to certify the closed forms."""
from .fock import (FockDimensionError, FockState, coherent_vector, fock_evolve, husimi_from_state,
                   partial_trace, truncation_tail)
from .linear import (IntegrationError, ModeODEState, StepConfig, linear_mode_oracle,
                     linear_mode_trajectory, mode_matrix, occupations)

__all__ = [
    "FockDimensionError", "FockState", "coherent_vector", "fock_evolve", "husimi_from_state",
    "partial_trace", "truncation_tail",
    "IntegrationError", "ModeODEState", "StepConfig", "linear_mode_oracle",
    "linear_mode_trajectory", "mode_matrix", "occupations",
]
