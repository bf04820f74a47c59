//! Pointwise stress equation: prescribed energy profiles, the normalized
//! stress tensor, the Newton solve for the wave coefficients, and the
//! assembled microlocal-Beltrami amplitudes.

pub mod amplitudes;
pub mod energy;
pub mod gamma;

pub use amplitudes::{
    amplitude_diagnostics_csv, build_amplitudes, normalized_stress, verify_stress_equation,
    AmplitudeSet, EpsilonTensor, PhaseBundle, PointContext, WaveSample, CHARTS, PROJECTION_FLOOR,
};
pub use energy::{build_energy_profile, build_energy_profile_with_k, EnergyProfile};
pub use gamma::{
    deviation, gamma_tilde, ideal_matrix, ideal_rhs, measure_newton_basin,
    measure_phase_stability_basin, solve_gamma, Vec6, CONTAINMENT, DEFAULT_K, GAMMA_TILDE_SQ,
    NEWTON_BASIN_RADIUS, PHASE_STABILITY_RADIUS,
};
