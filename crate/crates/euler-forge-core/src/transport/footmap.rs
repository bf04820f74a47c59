//! Backward characteristics of the coarse flow: for an anchor time `t_a` and
//! an evaluation time `t`, the foot map sends a point `x` to the position at
//! time `t_a` of the trajectory passing through `(t, x)`.
//!
//! The foot map is stored as a periodic displacement field `delta` with
//! `foot(x) = x + delta(x)`; the displacement is smooth and small (the flow
//! moves points by at most a few wave lifespans), so all spectral machinery
//! applies to `delta` even though the foot map itself is not periodic.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{derivative, PeriodicField, Rank, Repr};
use crate::transport::flow::{CoarseFlow, SparseModes};

/// Compute the foot displacement `delta(x) = Phi(t -> t_anchor)(x) - x` on
/// every grid point, integrating trajectories backward (or forward) with RK4
/// at fixed step `h`.
pub fn foot_displacement(
    flow: &CoarseFlow,
    t_eval: f64,
    t_anchor: f64,
    h: f64,
) -> Result<PeriodicField> {
    if !(h > 0.0) {
        return Err(Error::config("trajectory step must be positive"));
    }
    let grid = flow.grid;
    let mut delta = PeriodicField::zeros(grid, Rank::Vector);
    delta.time_tag = t_eval;
    let n = grid.n;
    let inv = 1.0 / n as f64;
    let s = t_anchor - t_eval;
    for (ix, iy, iz, idx) in grid.points() {
        let x = [ix as f64 * inv, iy as f64 * inv, iz as f64 * inv];
        let y = flow.advect_point(t_eval, x, s, h);
        for c in 0..3 {
            delta.comp_mut(c)[idx] = Complex64::new(y[c] - x[c], 0.0);
        }
    }
    delta.repr = Repr::Physical;
    Ok(delta)
}

/// Spectral gradient of a displacement field: returns the full 3x3 tensor
/// `grad[j][l] = d delta_l / d x_j` as a rank-2 field (physical repr).
pub fn displacement_gradient(delta: &PeriodicField) -> Result<PeriodicField> {
    if delta.rank != Rank::Vector {
        return Err(Error::precondition("displacement must be a vector field"));
    }
    let spec = delta.spectral();
    let grid = delta.grid;
    let mut out = PeriodicField::zeros(grid, Rank::Tensor);
    out.time_tag = delta.time_tag;
    for l in 0..3 {
        let mut comp = PeriodicField::zeros_spectral(grid, Rank::Scalar);
        comp.comp_mut(0).copy_from_slice(spec.comp(l));
        for j in 0..3 {
            let mut d = derivative(&comp, j);
            d.to_physical();
            out.comp_mut(3 * j + l).copy_from_slice(d.comp(0));
        }
    }
    out.repr = Repr::Physical;
    Ok(out)
}

/// Transport a scalar field along the coarse flow: the result at `(t, x)`
/// equals `init` evaluated at the foot of the trajectory, using exact
/// evaluation of the initial data's Fourier series at the foot points.
///
/// `init` must be sparse enough to evaluate pointwise (`max_modes` cap);
/// constants transport exactly.
pub fn transport_field(
    init: &PeriodicField,
    flow: &CoarseFlow,
    t_init: f64,
    t_eval: f64,
    h: f64,
    max_modes: usize,
) -> Result<PeriodicField> {
    if init.rank != Rank::Scalar {
        return Err(Error::precondition("transport_field expects a scalar field"));
    }
    let sparse: SparseModes<1> = SparseModes::from_field(init, 1e-13, max_modes)?;
    let delta = foot_displacement(flow, t_eval, t_init, h)?;
    let grid = flow.grid;
    let mut out = PeriodicField::zeros(grid, Rank::Scalar);
    out.time_tag = t_eval;
    let n = grid.n;
    let inv = 1.0 / n as f64;
    for (ix, iy, iz, idx) in grid.points() {
        let foot = [
            ix as f64 * inv + delta.comp(0)[idx].re,
            iy as f64 * inv + delta.comp(1)[idx].re,
            iz as f64 * inv + delta.comp(2)[idx].re,
        ];
        out.comp_mut(0)[idx] = Complex64::new(sparse.eval(foot)[0], 0.0);
    }
    out.repr = Repr::Physical;
    Ok(out)
}

/// Transport affine data `g·x + c` (defined on the universal cover) along the
/// flow, returning the periodic part and the unchanged linear coefficients:
/// the transported function is `g·x + c + g·delta(x)`.
///
/// Under a constant velocity `u`, the result is `g·x + c - g·u (t - t_init)`:
/// the gradient is preserved exactly.
pub struct TransportedAffine {
    /// Linear coefficient (unchanged by transport).
    pub gradient: [f64; 3],
    /// Constant part at the evaluation time.
    pub constant: f64,
    /// Periodic remainder `g·(delta(x) - mean delta)` as a grid field.
    pub periodic: PeriodicField,
    /// Mean displacement contribution folded into the constant.
    pub mean_shift: f64,
}

pub fn transport_affine(
    gradient: [f64; 3],
    constant: f64,
    flow: &CoarseFlow,
    t_init: f64,
    t_eval: f64,
    h: f64,
) -> Result<TransportedAffine> {
    let delta = foot_displacement(flow, t_eval, t_init, h)?;
    let grid = flow.grid;
    let mut periodic = PeriodicField::zeros(grid, Rank::Scalar);
    periodic.time_tag = t_eval;
    let npts = grid.n * grid.n * grid.n;
    let mut mean = 0.0f64;
    for idx in 0..npts {
        let v = gradient[0] * delta.comp(0)[idx].re
            + gradient[1] * delta.comp(1)[idx].re
            + gradient[2] * delta.comp(2)[idx].re;
        periodic.comp_mut(0)[idx] = Complex64::new(v, 0.0);
        mean += v;
    }
    mean /= npts as f64;
    for idx in 0..npts {
        periodic.comp_mut(0)[idx] -= Complex64::new(mean, 0.0);
    }
    periodic.repr = Repr::Physical;
    Ok(TransportedAffine { gradient, constant, periodic, mean_shift: mean })
}
