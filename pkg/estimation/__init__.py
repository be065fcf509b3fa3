# estimation/__init__.py
"""
Phase estimation core: angles, spectra, the Hadamard-test oracle,
robust phase estimation and the textbook QPE baseline
"""

from .angle import (
    Angle,
    CandidateSet,
    angular_distance,
    candidate_set,
    nearest_candidate,
    reference_angle,
    wrap,
    wrapped_abs
)
from .spectrum import (
    ResidualPolicy,
    SpectralDecomposition,
    SpectralModel,
    build_tfim,
    eigendecompose,
    exact_expectation,
    make_initial_state,
    phase_to_energy,
    spectral_phases,
    tfim_spectral_model
)
from .oracle import CostLedger, ExactAccounting, OracleMode, Part, PhaseOracle, ShotOracle
from .rpe import (
    RpeConfig,
    RpeResult,
    alpha,
    audit_trace,
    beta,
    level_count,
    run_rpe,
    shots_per_level,
    theorem_hypotheses,
    xi_lower_bound
)
from .qpe_baseline import QpeConfig, QpeResult, outcome_distribution, sample_qpe, sample_qpe_outcomes

__all__ = [
    # Angles
    'Angle',
    'CandidateSet',
    'angular_distance',
    'candidate_set',
    'nearest_candidate',
    'reference_angle',
    'wrap',
    'wrapped_abs',

    # Spectra
    'ResidualPolicy',
    'SpectralDecomposition',
    'SpectralModel',
    'build_tfim',
    'eigendecompose',
    'exact_expectation',
    'make_initial_state',
    'phase_to_energy',
    'spectral_phases',
    'tfim_spectral_model',

    # Oracle
    'CostLedger',
    'ExactAccounting',
    'OracleMode',
    'Part',
    'PhaseOracle',
    'ShotOracle',

    # Robust phase estimation
    'RpeConfig',
    'RpeResult',
    'alpha',
    'audit_trace',
    'beta',
    'level_count',
    'run_rpe',
    'shots_per_level',
    'theorem_hypotheses',
    'xi_lower_bound',

    # QPE baseline
    'QpeConfig',
    'QpeResult',
    'outcome_distribution',
    'sample_qpe',
    'sample_qpe_outcomes'
]
