//! Oscillatory assembly of the velocity and pressure corrections.
//!
//! Each wave contributes `(1/lambda) e^{i lambda xi_I} w_I` to the vector
//! potential `W`; the correction is its curl, taken spectrally, so it is
//! divergence-free and mean-free by construction.  Conjugate pairs are summed
//! analytically (a representative and its partner give twice the real part),
//! hence every assembled field is real.  The leading-order part of the
//! correction is `e^{i lambda xi_I} v_I`; the curl differs from it by the
//! envelope curl at relative size `1/lambda`, which is the λ-refinement
//! mechanism the whole construction rests on.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{curl, truncate_band, PeriodicField, Rank, Repr};
use crate::microstress::AmplitudeSet;
use crate::transport::WaveIndex;

/// The assembled divergence-free correction of one wave family at one time.
pub struct Correction {
    /// Oscillation frequency (radians per unit phase).
    pub lambda: f64,
    /// Evaluation time.
    pub t: f64,
    /// Vector potential `W` (real, physical representation).
    pub w: PeriodicField,
    /// The correction `V = curl W` (real, physical, band-limited).
    pub v: PeriodicField,
    /// Measured supremum of the transported phase gradients.
    pub sup_grad_xi: f64,
}

/// Largest admissible product of `lambda` and the phase-gradient supremum,
/// as a fraction of the grid band: oscillations must stay within a quarter
/// of the dealiased band so that quadratic products remain alias-free.
fn lambda_limit(grid: &crate::fields::GridSpec) -> f64 {
    TAU * grid.band() as f64 / 4.0
}

/// Check the resolvability rule and produce a grid-size suggestion when the
/// requested frequency does not fit.
fn check_resolvable(amps: &AmplitudeSet, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::config("oscillation frequency lambda must be positive"));
    }
    let sup_grad_xi = 1.0 + amps.foot.grad_delta.max_frobenius();
    let limit = lambda_limit(&amps.grid);
    if lambda * sup_grad_xi > limit {
        // Smallest power-of-two grid whose quarter-band clears the product.
        let need_band = (4.0 * lambda * sup_grad_xi / TAU).ceil() as usize;
        let mut n = amps.grid.n;
        while ((amps.grid.dealias_fraction * n as f64 / 2.0).floor() as usize) < need_band {
            n *= 2;
            if n > 1 << 20 {
                break;
            }
        }
        return Err(Error::config(format!(
            "frequency lambda = {lambda:.3} with phase gradients up to {sup_grad_xi:.3} \
             is unresolvable on the {0}^3 grid (limit {limit:.3}); \
             use a grid of at least {n}^3",
            amps.grid.n
        )));
    }
    Ok(sup_grad_xi)
}

/// Assemble the correction from an explicit subset of representative waves
/// (each representative stands for itself and its conjugate).
pub fn assemble_correction_waves(
    amps: &AmplitudeSet,
    lambda: f64,
    reps: &[WaveIndex],
) -> Result<Correction> {
    let sup_grad_xi = check_resolvable(amps, lambda)?;
    let grid = amps.grid;
    let mut w = PeriodicField::zeros(grid, Rank::Vector);
    w.time_tag = amps.t;
    for (ix, iy, iz, idx) in grid.points() {
        let pc = amps.point(ix, iy, iz);
        let mut acc = [0.0f64; 3];
        for wi in reps {
            let s = pc.wave(wi);
            let gn = s.grad_xi.norm();
            let (sin, cos) = (lambda * s.xi).sin_cos();
            // I and its conjugate together: 2 Re[e^{i lambda xi} (a + i b)] / |grad xi|.
            let scale = 2.0 / (lambda * gn);
            for c in 0..3 {
                acc[c] += scale * (cos * s.a[c] - sin * s.b[c]);
            }
        }
        for c in 0..3 {
            w.comp_mut(c)[idx] = Complex64::new(acc[c], 0.0);
        }
    }
    // Band-limit the potential, then curl spectrally: the correction is
    // divergence-free and mean-free exactly.
    let w_band = truncate_band(&w.spectral());
    let v = curl(&w_band).physical();
    let w = w_band.physical();
    Ok(Correction { lambda, t: amps.t, w, v, sup_grad_xi })
}

/// Assemble the full correction of one generation at the amplitude set's
/// evaluation time: all 48 representatives plus conjugates.
pub fn assemble_correction(amps: &AmplitudeSet, lambda: f64) -> Result<Correction> {
    assemble_correction_waves(amps, lambda, &amps.rep_indices())
}

/// The leading-order wave sum `sum_I e^{i lambda xi_I} v_I` (real because the
/// family is conjugate-closed), against which the curl-form correction is
/// compared and from which the oscillatory pressure is built.
pub fn leading_wave_sum(amps: &AmplitudeSet, lambda: f64) -> PeriodicField {
    let grid = amps.grid;
    let mut u = PeriodicField::zeros(grid, Rank::Vector);
    u.time_tag = amps.t;
    let reps = amps.rep_indices();
    for (ix, iy, iz, idx) in grid.points() {
        let pc = amps.point(ix, iy, iz);
        let mut acc = [0.0f64; 3];
        for wi in &reps {
            let s = pc.wave(wi);
            let (sin, cos) = (lambda * s.xi).sin_cos();
            for c in 0..3 {
                acc[c] += 2.0 * (cos * s.a[c] - sin * s.b[c]);
            }
        }
        for c in 0..3 {
            u.comp_mut(c)[idx] = Complex64::new(acc[c], 0.0);
        }
    }
    u
}

/// Pointwise total squared amplitude `sum_I |v_I|^2` of a generation
/// (scalar, physical).
pub fn squared_amplitude_sum(amps: &AmplitudeSet) -> PeriodicField {
    let grid = amps.grid;
    let mut out = PeriodicField::zeros(grid, Rank::Scalar);
    out.time_tag = amps.t;
    let reps = amps.rep_indices();
    for (ix, iy, iz, idx) in grid.points() {
        let pc = amps.point(ix, iy, iz);
        let mut acc = 0.0f64;
        for wi in &reps {
            let s = pc.wave(wi);
            acc += 2.0 * (s.a.norm_squared() + s.b.norm_squared());
        }
        out.comp_mut(0)[idx] = Complex64::new(acc, 0.0);
    }
    out
}

/// Assemble the pressure correction at one time:
///
/// ```text
///   P = -e/3 - tr(R_eps)/3 - (1/2) ( |U|^2 - sum_I |v_I|^2 ),
///       U = sum_I e^{i lambda xi_I} v_I  over every active generation,
/// ```
///
/// i.e. the base part plus every leading-order interaction `-V_I . V_J / 2`
/// with `J != conj(I)` (the self-conjugate products are exactly the
/// subtracted squared amplitudes).  The interactions use the leading-order
/// waves; the `1/lambda` remainder of the curl form belongs to the
/// high-frequency error family downstream.
pub fn assemble_pressure(
    sets: &[&AmplitudeSet],
    r_eps: &PeriodicField,
    e_value: f64,
    lambda: f64,
) -> Result<PeriodicField> {
    if r_eps.rank != Rank::SymTensor {
        return Err(Error::config("pressure assembly expects a symmetric stress tensor"));
    }
    if r_eps.repr != Repr::Physical {
        return Err(Error::config("stress must be in physical representation"));
    }
    let grid = r_eps.grid;
    for s in sets {
        if s.grid != grid {
            return Err(Error::config("amplitude sets live on a different grid than the stress"));
        }
    }
    let mut p = PeriodicField::zeros(grid, Rank::Scalar);
    // Base part: -e/3 - tr(R_eps)/3.
    for idx in 0..grid.len() {
        let tr = r_eps.comp(0)[idx].re + r_eps.comp(3)[idx].re + r_eps.comp(5)[idx].re;
        p.comp_mut(0)[idx] = Complex64::new(-e_value / 3.0 - tr / 3.0, 0.0);
    }
    if sets.is_empty() {
        return Ok(p);
    }
    // Oscillatory interactions: -1/2 (|U|^2 - sum |v_I|^2).
    let mut u_total = PeriodicField::zeros(grid, Rank::Vector);
    let mut sq_total = PeriodicField::zeros(grid, Rank::Scalar);
    for s in sets {
        u_total.add_scaled(&leading_wave_sum(s, lambda), 1.0);
        sq_total.add_scaled(&squared_amplitude_sum(s), 1.0);
    }
    for idx in 0..grid.len() {
        let u2: f64 = (0..3).map(|c| u_total.comp(c)[idx].re.powi(2)).sum();
        let osc = -0.5 * (u2 - sq_total.comp(0)[idx].re);
        let cur = p.comp(0)[idx].re;
        p.comp_mut(0)[idx] = Complex64::new(cur + osc, 0.0);
    }
    Ok(p)
}
