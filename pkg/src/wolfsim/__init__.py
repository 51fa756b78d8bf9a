"""Simulation and analysis of weak low-frequency driving of singlet-triplet
transitions in three-spin-1/2 systems at microtesla fields.

The package splits into exact machinery (spincore, hamiltonian, propagator,
engine) and the closed-form layer built on top of it (analytic,
experiments).  The cli module wires both behind a config-file front end.
"""

from .analytic import (
    AnalyticModel,
    AverageHamiltonianReport,
    ValidityMetrics,
    analytic_model,
    analytic_populations,
    average_hamiltonian_check,
    bessel_j,
    jolting_phase,
    nutation_frequency,
    pi_pulse_duration,
    validity_metrics,
)
from .engine import available_engines, get_engine
from .experiments import (
    ComparisonReport,
    ScanResult,
    amplitude_scan,
    analytic_vs_numeric_report,
    duration_scan,
    frequency_scan,
)
from .hamiltonian import (
    BLOCK_LABELS,
    FieldSchedule,
    HamiltonianTerms,
    PauliModel,
    SpinSystem,
    block_restrict,
    build_terms,
    build_wolf,
    fumarate,
    maleate,
    mixing_angles,
    omega_st,
    omega_tt,
    rotated_block,
    total_hamiltonian,
    two_level_model,
)
from .propagator import (
    Trajectory,
    evolve,
    phip_initial_state,
    population,
    s_polarization,
    step_propagator,
)
from .spincore import (
    COUPLED_LABELS,
    POPULATION_KEYS,
    BasisState,
    coupled_basis,
    expectation,
    rotated_basis,
    spin_operator,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticModel",
    "AverageHamiltonianReport",
    "BLOCK_LABELS",
    "BasisState",
    "COUPLED_LABELS",
    "ComparisonReport",
    "FieldSchedule",
    "HamiltonianTerms",
    "POPULATION_KEYS",
    "PauliModel",
    "ScanResult",
    "SpinSystem",
    "Trajectory",
    "ValidityMetrics",
    "amplitude_scan",
    "analytic_model",
    "analytic_populations",
    "analytic_vs_numeric_report",
    "available_engines",
    "average_hamiltonian_check",
    "bessel_j",
    "block_restrict",
    "build_terms",
    "build_wolf",
    "coupled_basis",
    "duration_scan",
    "evolve",
    "expectation",
    "frequency_scan",
    "fumarate",
    "get_engine",
    "jolting_phase",
    "maleate",
    "mixing_angles",
    "nutation_frequency",
    "omega_st",
    "omega_tt",
    "phip_initial_state",
    "pi_pulse_duration",
    "population",
    "rotated_basis",
    "rotated_block",
    "s_polarization",
    "spin_operator",
    "step_propagator",
    "total_hamiltonian",
    "two_level_model",
    "validity_metrics",
]
