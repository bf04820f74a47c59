//! Numerical laboratory for one stage of a convex-integration construction of
//! weak incompressible Euler flows on the periodic 3-torus.
//!
//! The crate has two halves:
//!
//! * a **desk-scale stage executor**: given a velocity/pressure/stress triple
//!   satisfying the relaxed (stress-augmented) Euler equations together with
//!   measured frequency/energy levels, build the high-frequency Beltrami-type
//!   correction, solve the oscillatory divergence equations for the five error
//!   families, and produce the corrected triple with a strictly smaller stress —
//!   verifying every exact identity the construction relies on along the way;
//!
//! * a **parameter-evolution calculus** (`schedule`): the 3×3 log-space recursion
//!   that drives the level triple from stage to stage, its dominant eigenvector,
//!   and the resulting optimal Hölder exponents for velocity and pressure.
//!
//! Modules mirror the pipeline: [`fields`] (grids, spectral calculus, mollifiers,
//! field I/O), [`geometry`] (dodecahedral wave frame), [`transport`] (coarse flow,
//! phase/cutoff advection), [`microstress`] (amplitude solve), [`correction`]
//! (wave assembly), [`divsolve`] (oscillatory inverse divergence), [`iterate`]
//! (full stage), [`schedule`] (exponent calculus).

pub mod error;
pub mod fields;
#[cfg(test)]
pub(crate) mod testkit;
pub mod geometry;
pub mod transport;
pub mod microstress;
pub mod correction;
pub mod divsolve;
pub mod iterate;
pub mod schedule;

pub use error::{Error, Result};
