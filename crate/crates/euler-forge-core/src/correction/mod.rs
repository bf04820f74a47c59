//! The divergence-free velocity correction, its pressure, and the
//! prescribed-energy bookkeeping.
//!
//! Given one generation's amplitude set, [`assemble_correction`] builds the
//! vector potential `W = sum_I (1/lambda) e^{i lambda xi_I} w_I` pointwise
//! (conjugate pairs summed analytically, so the field is real), band-limits
//! it, and takes its spectral curl — producing a correction `V` that is
//! divergence-free and mean-free to machine precision and agrees with the
//! leading-order wave sum `sum_I e^{i lambda xi_I} v_I` up to `O(1/lambda)`.
//! [`assemble_pressure`] adds the matching pressure, and
//! [`energy_increment`] measures how closely `integral |V|^2` tracks the
//! prescribed energy profile over a lifespan.

mod assemble;
mod increment;

pub use assemble::{
    assemble_correction, assemble_correction_waves, assemble_pressure, leading_wave_sum,
    squared_amplitude_sum, Correction,
};
pub use increment::{
    dump_correction, energy_increment, energy_increment_csv, kinetic_integral,
};
