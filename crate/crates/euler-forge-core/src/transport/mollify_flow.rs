//! Smoothing of a time-dependent stress along a coarse flow.
//!
//! Spatial smoothing is a double convolution with a vanishing-moment kernel,
//! applied as a spectral multiplier to the sparse mode lists.  Temporal
//! smoothing averages the spatially smoothed stress along trajectories of
//! the coarse flow against an even, compactly supported C^inf weight,
//! realized by a Gauss-Legendre rule whose weights are normalized to unit
//! sum.  Constants are therefore preserved exactly, a still flow reduces the
//! construction to plain spatial smoothing, and a stress that is constant
//! along trajectories (uniform translation of a frozen pattern) is
//! reproduced up to integrator roundoff.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{MomentKernel, PeriodicField, Rank, Repr};

use super::cutoffs::bump;
use super::flow::{CoarseFlow, SparseTerm, SparseTimeField};

/// Legendre polynomial value and derivative at `x` by the three-term
/// recurrence (derivative from the standard identity; `x` strictly inside
/// `(-1, 1)`).
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending in the node.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n.div_ceil(2) {
        // Standard initial guess for the i-th positive-side root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
        if x > 1e-12 {
            out.push((-x, w));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Quadrature for averaging against the even bump weight supported on
/// `[-eps_t, eps_t]`.
#[derive(Debug, Clone)]
pub struct TimeBumpQuadrature {
    pub eps_t: f64,
    /// `(time offset, weight)`; the weights sum to exactly one.
    pub nodes: Vec<(f64, f64)>,
}

/// Build the time-averaging rule: Gauss-Legendre nodes reweighted by the
/// bump and normalized so the weights sum to one.
pub fn build_time_quadrature(eps_t: f64, n: usize) -> Result<TimeBumpQuadrature> {
    if !(eps_t.is_finite() && eps_t > 0.0) {
        return Err(Error::config(format!("time smoothing length must be positive, got {eps_t}")));
    }
    if !(2..=64).contains(&n) {
        return Err(Error::config(format!("time quadrature wants 2..=64 nodes, got {n}")));
    }
    let mut nodes: Vec<(f64, f64)> =
        gauss_legendre(n).into_iter().map(|(u, w)| (eps_t * u, w * bump(u).0)).collect();
    let sum: f64 = nodes.iter().map(|p| p.1).sum();
    for p in &mut nodes {
        p.1 /= sum;
    }
    Ok(TimeBumpQuadrature { eps_t, nodes })
}

/// Apply `power` passes of the spatial kernel to every term of a sparse
/// time field (a spectral multiplier raised to `power`).
pub fn mollify_sparse<const C: usize>(
    f: &SparseTimeField<C>,
    kernel: &MomentKernel,
    power: u32,
) -> SparseTimeField<C> {
    let g = |m: [f64; 3]| -> f64 {
        let one = kernel.multiplier_1d(std::f64::consts::TAU * m[0])
            * kernel.multiplier_1d(std::f64::consts::TAU * m[1])
            * kernel.multiplier_1d(std::f64::consts::TAU * m[2]);
        one.powi(power as i32)
    };
    SparseTimeField::new(
        f.terms
            .iter()
            .map(|t| SparseTerm::new(t.profile.clone(), t.modes.apply_multiplier(g)))
            .collect(),
    )
}

/// Smooth a symmetric-tensor stress in space (double convolution with
/// `space`) and in time along the trajectories of `flow` (average against
/// the bump weight realized by `quad`), evaluated at time `t` on the flow's
/// grid.  `h` is the step for the trajectory integrator; offsets never
/// exceed `quad.eps_t`, so `h = eps_t` gives a single fourth-order step per
/// quadrature node.
pub fn mollify_along_flow(
    stress: &SparseTimeField<6>,
    flow: &CoarseFlow,
    space: &MomentKernel,
    quad: &TimeBumpQuadrature,
    t: f64,
    h: f64,
) -> Result<PeriodicField> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::config(format!("trajectory step must be positive, got {h}")));
    }
    let smoothed = mollify_sparse(stress, space, 2);
    let grid = flow.grid;
    let n = grid.n;
    let inv = 1.0 / n as f64;
    let mut acc = vec![[0.0f64; 6]; grid.len()];
    for &(s, w) in &quad.nodes {
        for (ix, iy, iz, idx) in grid.points() {
            let x = [ix as f64 * inv, iy as f64 * inv, iz as f64 * inv];
            let y = flow.advect_point(t, x, s, h);
            let v = smoothed.eval(t + s, y);
            let a = &mut acc[idx];
            for c in 0..6 {
                a[c] += w * v[c];
            }
        }
    }
    let mut out = PeriodicField::zeros(grid, Rank::SymTensor);
    out.time_tag = t;
    out.repr = Repr::Physical;
    for c in 0..6 {
        let comp = out.comp_mut(c);
        for (idx, a) in acc.iter().enumerate() {
            comp[idx] = Complex64::new(a[c], 0.0);
        }
    }
    Ok(out)
}
