//! Transport of phases, cutoffs, and stresses along the coarse flow: sparse
//! flow evaluation, backward characteristics (foot maps), smooth partitions
//! of unity, flow-adapted stress mollification, and the coarse force with its
//! mollification commutator.

pub mod cutoffs;
pub mod diagnostics;
pub mod flow;
pub mod force;
pub mod footmap;
pub mod lagrange;
pub mod mollify_flow;
pub mod phases;

pub use cutoffs::{bump, chart_1d, chart_3d, plateau, ramp, time_partition, PlateauProfile};
pub use flow::{
    circulating_velocity_modes, constant_profile, CoarseFlow, Profile, SparseModes, SparseTerm,
    SparseTimeField,
};
pub use footmap::{
    displacement_gradient, foot_displacement, transport_affine, transport_field, TransportedAffine,
};
pub use diagnostics::{energy_row, phase_diagnostics_csv, phase_energy_sups, EnergyScales, PhaseJetSups};
pub use force::{coarse_force, CoarseForce};
pub use lagrange::lagrange_weights;
pub use mollify_flow::{build_time_quadrature, mollify_along_flow, mollify_sparse, TimeBumpQuadrature};
pub use phases::{
    generation_rep_indices, CombinedFoot, FootNode, FootSample, Generation, WaveIndex, NODES,
};
