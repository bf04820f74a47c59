//! The pointwise symbol of the oscillatory inverse divergence.
//!
//! For a phase gradient `g` and a complex amplitude `u`, [`q_symbol`] returns
//! the symmetric tensor solving the linear equation `i q^{jl} g_j = u^l`:
//! a multiple of the identity carries the parallel part of `u` and a
//! symmetrized outer product carries the orthogonal part.  The solution is
//! linear in `u` and homogeneous of degree −1 in `g`.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{PeriodicField, Rank, Repr, SYM_SLOTS};

/// Smallest admissible phase-gradient norm for the symbol.
pub const GRAD_XI_FLOOR: f64 = 1e-6;

/// Solve `i q^{jl} g_j = u^l` for a symmetric `q`, as
///
/// ```text
///   q = -i [ (u.g / |g|^2) delta + (u_perp (x) g + g (x) u_perp) / |g|^2 ],
///   u_perp = u - (u.g / |g|^2) g.
/// ```
pub fn q_symbol(g: &Vector3<f64>, u: &[Complex64; 3]) -> Result<[Complex64; 6]> {
    let n2 = g.norm_squared();
    if !(n2.sqrt() >= GRAD_XI_FLOOR) {
        return Err(Error::precondition(format!(
            "phase gradient norm {:.3e} is below the symbol floor {GRAD_XI_FLOOR:.1e}",
            n2.sqrt()
        )));
    }
    let udotg = (0..3).map(|j| u[j] * g[j]).sum::<Complex64>();
    let par = udotg / n2;
    let mut uperp = [Complex64::default(); 3];
    for j in 0..3 {
        uperp[j] = u[j] - par * g[j];
    }
    let mi = Complex64::new(0.0, -1.0);
    let mut q = [Complex64::default(); 6];
    for (slot, (j, l)) in SYM_SLOTS.iter().enumerate() {
        let mut val = (uperp[*j] * g[*l] + uperp[*l] * g[*j]) / n2;
        if j == l {
            val += par;
        }
        q[slot] = mi * val;
    }
    Ok(q)
}

/// One piece of oscillatory divergence data `e^{i lambda xi} u`.
///
/// `xi` holds pointwise phase samples (it may wrap across the torus seam —
/// it is only ever used inside the support of `u`, where the products
/// `e^{i lambda xi} * envelope` are smooth and periodic), while `grad_xi`
/// is the smooth periodic phase gradient used by the symbol.
pub struct OscillatoryData {
    /// Scalar phase samples (real part of a scalar field).
    pub xi: PeriodicField,
    /// Phase gradient (vector field, real).
    pub grad_xi: PeriodicField,
    /// Oscillation frequency.
    pub lambda: f64,
    /// Complex amplitude envelope (vector field).
    pub u: PeriodicField,
    /// Evaluation time.
    pub t: f64,
    /// Lifespan of the carrying wave (metadata).
    pub lifespan: (f64, f64),
}

impl OscillatoryData {
    /// Validate shapes, the frequency, and phase-gradient nondegeneracy on
    /// the support of `u`.
    pub fn new(
        xi: PeriodicField,
        grad_xi: PeriodicField,
        lambda: f64,
        u: PeriodicField,
        t: f64,
        lifespan: (f64, f64),
    ) -> Result<Self> {
        if xi.rank != Rank::Scalar || grad_xi.rank != Rank::Vector || u.rank != Rank::Vector {
            return Err(Error::config(
                "oscillatory data needs a scalar phase, vector gradient, and vector amplitude",
            ));
        }
        if xi.repr != Repr::Physical || grad_xi.repr != Repr::Physical || u.repr != Repr::Physical
        {
            return Err(Error::config("oscillatory data fields must be physical"));
        }
        if xi.grid != grad_xi.grid || xi.grid != u.grid {
            return Err(Error::config("oscillatory data fields live on different grids"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::config("oscillation frequency must be positive"));
        }
        let data = Self { xi, grad_xi, lambda, u, t, lifespan };
        let (min_grad, _) = data.gradient_range_on_support();
        if min_grad < GRAD_XI_FLOOR {
            return Err(Error::precondition(format!(
                "phase gradient degenerates to {min_grad:.3e} on the amplitude support"
            )));
        }
        Ok(data)
    }

    /// `(inf, sup)` of `|grad xi|`; the infimum is restricted to the support
    /// of `u` (taken as points with `|u| > 1e-12 sup|u|`), the supremum is
    /// global.
    pub fn gradient_range_on_support(&self) -> (f64, f64) {
        let grid = self.xi.grid;
        let sup_u = self.u.max_abs();
        let thresh = 1e-12 * sup_u;
        let mut min_g = f64::INFINITY;
        let mut max_g = 0.0f64;
        for idx in 0..grid.len() {
            let g2: f64 = (0..3).map(|c| self.grad_xi.comp(c)[idx].norm_sqr()).sum();
            let g = g2.sqrt();
            max_g = max_g.max(g);
            let u2: f64 = (0..3).map(|c| self.u.comp(c)[idx].norm_sqr()).sum();
            if u2.sqrt() > thresh {
                min_g = min_g.min(g);
            }
        }
        if min_g.is_infinite() {
            min_g = max_g; // u vanishes identically; nothing to constrain
        }
        (min_g, max_g)
    }

    /// Pointwise modulation `e^{i lambda xi} f` (complex output field).
    pub fn modulated(&self, f: &PeriodicField) -> PeriodicField {
        assert_eq!(f.repr, Repr::Physical, "modulation acts on physical fields");
        assert_eq!(f.grid, self.xi.grid, "modulation grid mismatch");
        let mut out = PeriodicField::zeros(f.grid, f.rank);
        out.time_tag = f.time_tag;
        for c in 0..out.ncomp() {
            let src = f.comp(c);
            let xi = self.xi.comp(0);
            let dst = out.comp_mut(c);
            for idx in 0..src.len() {
                let phase = Complex64::new(0.0, self.lambda * xi[idx].re).exp();
                dst[idx] = phase * src[idx];
            }
        }
        out
    }

    /// The full oscillatory right-hand side `e^{i lambda xi} u`.
    pub fn data_field(&self) -> PeriodicField {
        self.modulated(&self.u)
    }
}

/// Apply the symbol pointwise over fields: a complex symmetric tensor with
/// `i q^{jl} d_j xi = u^l` wherever the amplitude is nonnegligible; points
/// where the amplitude vanishes (below `1e-13` of its sup) and the gradient
/// degenerates contribute zero.
pub fn q_symbol_field(grad_xi: &PeriodicField, u: &PeriodicField) -> Result<PeriodicField> {
    if grad_xi.rank != Rank::Vector || u.rank != Rank::Vector {
        return Err(Error::config("symbol fields must be vectors"));
    }
    if grad_xi.grid != u.grid {
        return Err(Error::config("symbol fields live on different grids"));
    }
    let grid = u.grid;
    let mut out = PeriodicField::zeros(grid, Rank::SymTensor);
    out.time_tag = u.time_tag;
    let sup_u = u.max_abs();
    let thresh = 1e-13 * sup_u;
    for idx in 0..grid.len() {
        let g = Vector3::new(
            grad_xi.comp(0)[idx].re,
            grad_xi.comp(1)[idx].re,
            grad_xi.comp(2)[idx].re,
        );
        let uv = [u.comp(0)[idx], u.comp(1)[idx], u.comp(2)[idx]];
        let u_size = uv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if u_size <= thresh && g.norm() < GRAD_XI_FLOOR {
            continue; // outside the chart: amplitude zero, leave q = 0
        }
        let q = q_symbol(&g, &uv)?;
        for (slot, val) in q.iter().enumerate() {
            out.comp_mut(slot)[idx] = *val;
        }
    }
    Ok(out)
}
