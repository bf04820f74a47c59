//! Prescribed energy profile for one stage.
//!
//! The square root of the profile is the smooth object: it equals
//! `(20 K e_R)^{1/2}` on the stress support enlarged by the wave lifespan
//! margin `theta`, rolls off smoothly over a ramp of width `2 tau_smooth`,
//! and vanishes beyond.  With `theta = 1 / (coarse frequency * sqrt(velocity
//! scale))` the admissibility bounds read
//!
//! ```text
//!   || d^r/dt^r e^{1/2} ||_inf  <=  1000 * theta^{-r} * (K e_R)^{1/2}        r = 0, 1, 2
//! ```
//!
//! and are verified by sampling at build time.  The level `20 K e_R` keeps
//! the normalized stress small (`|R_eps| / e <= 1/(20K)`) wherever waves are
//! active, which is what the pointwise coefficient solve requires.

use crate::error::{Error, Result};
use crate::transport::PlateauProfile;

use super::gamma::DEFAULT_K;

/// Number of sample points used to verify the derivative bounds.
const BOUND_SAMPLES: usize = 1601;

/// Smooth non-negative energy level prescribed over a stage.
#[derive(Debug, Clone)]
pub struct EnergyProfile {
    big_k: f64,
    e_r: f64,
    theta: f64,
    tau_smooth: f64,
    profile: PlateauProfile,
}

impl EnergyProfile {
    /// The dimensionless energy constant `K`.
    pub fn big_k(&self) -> f64 {
        self.big_k
    }

    /// The stress size `e_R` the profile dominates.
    pub fn e_r(&self) -> f64 {
        self.e_r
    }

    /// The margin by which the plateau extends past the stress support.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The rolloff half-width (the ramp spans `2 tau_smooth`).
    pub fn tau_smooth(&self) -> f64 {
        self.tau_smooth
    }

    /// The constant value on the plateau: `20 K e_R`.
    pub fn level(&self) -> f64 {
        self.profile.level
    }

    /// Interval on which the profile equals its level exactly.
    pub fn plateau_interval(&self) -> (f64, f64) {
        (self.profile.lo, self.profile.hi)
    }

    /// Closure of the support; the profile is exactly zero outside.
    pub fn support(&self) -> (f64, f64) {
        self.profile.support()
    }

    /// Energy value `e(t)`.
    pub fn value(&self, t: f64) -> f64 {
        self.profile.value_dt(t).0
    }

    /// Energy value and its time derivative.
    pub fn value_dt(&self, t: f64) -> (f64, f64) {
        self.profile.value_dt(t)
    }

    /// `e^{1/2}(t)` and its time derivative.
    pub fn sqrt_value_dt(&self, t: f64) -> (f64, f64) {
        self.profile.sqrt_value_dt(t)
    }

    /// Admissibility bound on the r-th derivative of `e^{1/2}`.
    pub fn derivative_bound(&self, r: u32) -> f64 {
        1000.0 * self.theta.powi(-(r as i32)) * (self.big_k * self.e_r).sqrt()
    }
}

/// Build the stage energy profile with the default energy constant.
///
/// `support` is the time interval carrying the stress; the plateau extends
/// `theta` beyond it on both sides and rolls off over `2 tau_smooth`.
pub fn build_energy_profile(
    support: (f64, f64),
    e_r: f64,
    theta: f64,
    tau_smooth: f64,
) -> Result<EnergyProfile> {
    build_energy_profile_with_k(support, e_r, theta, tau_smooth, DEFAULT_K)
}

/// Build the stage energy profile with an explicit energy constant.
pub fn build_energy_profile_with_k(
    support: (f64, f64),
    e_r: f64,
    theta: f64,
    tau_smooth: f64,
    big_k: f64,
) -> Result<EnergyProfile> {
    if !(e_r >= 0.0) || !e_r.is_finite() {
        return Err(Error::config("stress size e_R must be finite and nonnegative"));
    }
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::config("plateau margin theta must be positive"));
    }
    if !(tau_smooth > 0.0) || !tau_smooth.is_finite() {
        return Err(Error::config("smoothing width tau_smooth must be positive"));
    }
    if !(big_k > 0.0) || !big_k.is_finite() {
        return Err(Error::config("energy constant K must be positive"));
    }
    if !(support.1 >= support.0) {
        return Err(Error::config("stress support interval is empty"));
    }
    let level = 20.0 * big_k * e_r;
    let profile = PlateauProfile::new(
        level,
        support.0 - theta,
        support.1 + theta,
        2.0 * tau_smooth,
    )?;
    let out = EnergyProfile {
        big_k,
        e_r,
        theta,
        tau_smooth,
        profile,
    };
    verify_derivative_bounds(&out)?;
    Ok(out)
}

/// Sample `e^{1/2}` across the support and check the admissibility bounds for
/// r = 0, 1, 2.  The second derivative is formed by central differences of
/// the analytic first derivative.
fn verify_derivative_bounds(p: &EnergyProfile) -> Result<()> {
    if p.e_r == 0.0 {
        return Ok(()); // identically zero profile
    }
    let (lo, hi) = p.support();
    let width = 2.0 * p.tau_smooth;
    let mut sup = [0.0f64; 3];
    // The profile is constant on the plateau and outside the support, so the
    // derivative sups live on the two rolloff ramps; sample those densely
    // (plus the plateau once for the zeroth-order bound).
    sup[0] = p.level().sqrt();
    let h = p.tau_smooth * 1e-4;
    let ramps = [(lo, lo + width), (hi - width, hi)];
    for (a, b) in ramps {
        for i in 0..BOUND_SAMPLES {
            let t = a + (b - a) * (i as f64) / ((BOUND_SAMPLES - 1) as f64);
            let (s, ds) = p.sqrt_value_dt(t);
            sup[0] = sup[0].max(s.abs());
            sup[1] = sup[1].max(ds.abs());
            let dplus = p.sqrt_value_dt(t + h).1;
            let dminus = p.sqrt_value_dt(t - h).1;
            sup[2] = sup[2].max(((dplus - dminus) / (2.0 * h)).abs());
        }
    }
    for r in 0..3u32 {
        let bound = p.derivative_bound(r);
        if sup[r as usize] > bound {
            return Err(Error::config(format!(
                "energy profile admissibility violated at derivative order {r}: \
                 measured {:.3e} exceeds {:.3e}; increase the smoothing width \
                 tau_smooth relative to theta",
                sup[r as usize], bound
            )));
        }
    }
    Ok(())
}
