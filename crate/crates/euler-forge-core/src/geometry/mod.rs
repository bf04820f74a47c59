//! Dodecahedral direction geometry: the face frame and its quadratic-form
//! identity, the sixteen-member separated rotation family, and the 6×6
//! coefficient matrix of the pointwise quadratic system.

pub mod frame;
pub mod rotations;
pub mod stress;

pub use frame::{build_frame, metric_defect, rotation_about, verify_metric_identity, IcosaFrame, PHI};
pub use rotations::{
    build_rotations, exhaustive_separation, identity_separation, RotationFamily, FAMILY,
};
pub use stress::{condition_2norm, stress_matrix, Mat6, StressMatrix};
