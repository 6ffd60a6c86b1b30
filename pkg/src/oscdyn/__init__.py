"""Driven, damped, coupled quantum harmonic oscillators in closed form."""
from .chain import (ChainEvolution, ChainSpectrum, chain_amplitudes, chain_amplitudes_series, chain_excitations,
                    chain_excitations_series, chain_mode_evolution, chain_spectrum, coupling_matrix,
                    scaled_excitations)
from .core import (NO_DAMPING, ConstantG, DampingEnvelope, DomainError, DriveSpec, ExplicitSchedule, Markovian,
                   SystemParams, bose_einstein, effective_occupation, envelope_eval)
from .pair import (DriveResponse, ModeCoefficients, PairEnergies, drive_response, drive_response_series,
                   mode_coefficients, pair_energies, pair_energies_series)
from .phase_space import (CoherentInit, DensityMatrix, PhasePoint, husimi_coherent, husimi_coherent_single,
                          husimi_number, husimi_number_generating, husimi_number_reduced, laguerre,
                          maxima_trajectory, maxima_trajectory_series, number_state_reduced_density_matrix,
                          populations, reduced_density_matrix, reduced_generating_function, scaled_laguerre)
from .quadrature import QuadratureConfig, QuadratureError, cumulative_integral, oscillatory_integral

__version__ = "0.1.0"
