"""Exact reduced dynamics of one or two qubits coupled to a finite spin bath.

The bath Hamiltonian and the coupling commute, so the full evolution splits
over bath spin configurations. Each configuration contributes a known
single- or two-qubit rotation with a thermal weight; summing those closed
forms gives numerically exact trajectories for both product and thermally
correlated initial states, at a cost set by the number of configuration
classes rather than the full Hilbert space.
"""

__version__ = "0.1.0"

from .configspace import (Backend, ConfigClass, ReductionPlan, collapse_classes,
                          enumerate_configs, reduce_weighted)
from .errors import (CapacityError, NumericError, ParameterError, ReductionError,
                     SpinbathError, UsageError)
from .experiments import (ExperimentConfig, OracleReport, ResultTable, TimeGrid,
                          list_presets, oracle_check, parse_config_file, preset, run)
from .model import (BathParams, Boundary, ConfigQuantities, SystemParams, Thermal,
                    bath_sums, bloch_components, class_quantities, config_quantities,
                    correlation_factor, log_correlation_factor, pure_state)
from .numerics import (RandomSpec, gaussian_draw, herm_exp, hermitian_eig,
                       pairwise_sum)
from .oracle import build_hamiltonian, evolve_and_reduce, initial_state
from .single_qubit import (BlochPropagator, BlochVector, bloch_trajectory,
                           conditional_unitary, propagator_correlated,
                           propagator_uncorrelated)
from .two_qubit import (TwoQubitParams, bell_state, concurrence,
                        concurrence_trajectory, density_trajectory, product_state,
                        propagate_interacting, propagate_product, validate_density)

__all__ = [
    "__version__",
    "Backend", "ConfigClass", "ReductionPlan", "collapse_classes",
    "enumerate_configs", "reduce_weighted",
    "CapacityError", "NumericError", "ParameterError", "ReductionError",
    "SpinbathError", "UsageError",
    "ExperimentConfig", "OracleReport", "ResultTable", "TimeGrid",
    "list_presets", "oracle_check", "parse_config_file", "preset", "run",
    "BathParams", "Boundary", "ConfigQuantities", "SystemParams", "Thermal",
    "bath_sums", "bloch_components", "class_quantities", "config_quantities",
    "correlation_factor", "log_correlation_factor", "pure_state",
    "RandomSpec", "gaussian_draw", "herm_exp", "hermitian_eig", "pairwise_sum",
    "build_hamiltonian", "evolve_and_reduce", "initial_state",
    "BlochPropagator", "BlochVector", "bloch_trajectory", "conditional_unitary",
    "propagator_correlated", "propagator_uncorrelated",
    "TwoQubitParams", "bell_state", "concurrence", "concurrence_trajectory",
    "density_trajectory", "product_state", "propagate_interacting",
    "propagate_product", "validate_density",
]
