//! Periodic tensor fields on the 3-torus with spectral calculus,
//! vanishing-moment mollifiers, and the order-(−1) inverse-divergence
//! operator.

pub mod efld;
pub mod fft;
pub mod field;
pub mod grid;
pub mod mollify;
pub mod spectral;

pub use field::{sym_index, PeriodicField, Rank, Repr, SYM_SLOTS};
pub use grid::GridSpec;
pub use mollify::{build_moment_kernel, double_mollify, mollify, MomentKernel};
pub use spectral::{
    curl, derivative, div, dot, for_each_mode, grad, identity_times, inverse_divergence,
    laplace_inv, leray_project, mul_scalars, normalized_mode, outer_self, scale_by_scalar,
    sym_pair, trace, translate, truncate_band,
};
