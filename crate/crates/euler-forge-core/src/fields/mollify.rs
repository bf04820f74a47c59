//! Mollification with vanishing-moment kernels, realized spectrally.
//!
//! The one-dimensional kernel of unit length is defined through its Fourier
//! multiplier
//!
//! ```text
//!   m(k) = exp(-k^2/2) * sum_{j=0}^{J} (k^2/2)^j / j!,   J = ceil((L-2)/2)
//! ```
//!
//! i.e. a Gaussian times the Taylor polynomial of its inverse, so that
//! `m(k) = 1 + O(k^L)`.  In physical space this is a Gaussian times an even
//! polynomial; all moments of orders `1..L-1` vanish identically and the
//! approximation error of mollifying a smooth field is `O(eps^L)`.  The
//! three-dimensional kernel is the product of one-dimensional kernels per
//! axis, which inherits the vanishing of every mixed moment with
//! `1 <= |alpha| <= L-1`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

use super::field::{PeriodicField, Repr};
use super::grid::GridSpec;
use super::spectral::for_each_mode;

/// A vanishing-moment mollifier of order `L` and length `eps`.
#[derive(Debug, Clone, Copy)]
pub struct MomentKernel {
    /// Order of the kernel: moments `1..order-1` vanish, error is
    /// `O(eps^order)`.
    pub order: usize,
    /// Mollification length.
    pub eps: f64,
}

/// Build a mollifier kernel, checking that the length is resolved by the
/// grid (`eps` at least two grid spacings) and `L >= 2`.
pub fn build_moment_kernel(order: usize, eps: f64, grid: &GridSpec) -> Result<MomentKernel> {
    if order < 2 {
        return Err(Error::config(format!("kernel order must be >= 2, got {order}")));
    }
    let spacing = 1.0 / grid.n as f64;
    if !(eps.is_finite() && eps >= 2.0 * spacing) {
        return Err(Error::config(format!(
            "mollifier length {eps} under-resolved: need at least two grid spacings ({})",
            2.0 * spacing
        )));
    }
    Ok(MomentKernel { order, eps })
}

impl MomentKernel {
    /// One-dimensional multiplier at angular wavenumber `k` (the `eps`
    /// scaling is applied internally).
    pub fn multiplier_1d(&self, k: f64) -> f64 {
        let x = (self.eps * k) * (self.eps * k) / 2.0;
        let terms = (self.order.max(2) - 2).div_ceil(2);
        let mut poly = 1.0;
        let mut term = 1.0;
        for j in 1..=terms {
            term *= x / j as f64;
            poly += term;
        }
        (-x).exp() * poly
    }

    /// Product multiplier for an integer mode triple.
    pub fn multiplier(&self, m: [i64; 3]) -> f64 {
        self.multiplier_1d(TAU * m[0] as f64)
            * self.multiplier_1d(TAU * m[1] as f64)
            * self.multiplier_1d(TAU * m[2] as f64)
    }
}

fn apply_multiplier(f: &PeriodicField, mult: impl Fn([i64; 3]) -> f64) -> PeriodicField {
    let want = f.repr;
    let mut s = f.spectral();
    let grid = s.grid;
    for c in 0..s.ncomp() {
        let comp = s.comp_mut(c);
        for_each_mode(&grid, |m, idx| {
            comp[idx] *= mult(m);
        });
    }
    match want {
        Repr::Physical => s.to_physical(),
        Repr::Spectral => {}
    }
    s
}

/// Convolve a field with the kernel (single mollification).
pub fn mollify(f: &PeriodicField, kernel: &MomentKernel) -> PeriodicField {
    apply_multiplier(f, |m| kernel.multiplier(m))
}

/// Convolve twice with the same kernel (spectral multiplier squared).
pub fn double_mollify(f: &PeriodicField, kernel: &MomentKernel) -> PeriodicField {
    apply_multiplier(f, |m| {
        let v = kernel.multiplier(m);
        v * v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::field::Rank;
    use num_complex::Complex64;

    fn grid() -> GridSpec {
        GridSpec::with_default_band(32).unwrap()
    }

    /// Physical kernel by inverse Fourier quadrature — an oracle independent
    /// of the multiplier algebra.
    fn kernel_physical(kernel: &MomentKernel, x: f64) -> f64 {
        // eta_eps(x) = (1/2*pi) Int m(eps*k) e^{i k x} dk; integrand is even.
        let kmax = 14.0 / kernel.eps;
        let steps = 4000;
        let dk = kmax / steps as f64;
        let mut sum = 0.0;
        for i in 0..=steps {
            let k = i as f64 * dk;
            let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
            sum += w * kernel.multiplier_1d(k) * (k * x).cos();
        }
        sum * dk / std::f64::consts::PI
    }

    #[test]
    fn moments_vanish_by_quadrature() {
        for order in [2usize, 4, 6] {
            let kernel = MomentKernel { order, eps: 0.25 };
            // integrate x^m eta(x) dx over the effective support
            let xmax = 9.0 * kernel.eps;
            let steps = 1800;
            let dx = 2.0 * xmax / steps as f64;
            let mut moments = vec![0.0f64; order];
            for i in 0..=steps {
                let x = -xmax + i as f64 * dx;
                let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
                let eta = kernel_physical(&kernel, x);
                for (m, mom) in moments.iter_mut().enumerate() {
                    *mom += w * x.powi(m as i32) * eta * dx;
                }
            }
            assert!(
                (moments[0] - 1.0).abs() < 1e-10,
                "order {order}: mass {}",
                moments[0]
            );
            for (m, mom) in moments.iter().enumerate().skip(1) {
                // normalize by eps^m so the tolerance is scale-free
                let scaled = mom / kernel.eps.powi(m as i32);
                assert!(
                    scaled.abs() < 1e-10,
                    "order {order}: moment {m} = {scaled}"
                );
            }
        }
    }

    #[test]
    fn constant_is_preserved_exactly() {
        let grid = grid();
        let kernel = build_moment_kernel(2, 0.1, &grid).unwrap();
        let mut f = PeriodicField::zeros(grid, Rank::Scalar);
        for z in f.comp_mut(0) {
            *z = Complex64::new(4.25, 0.0);
        }
        let g = mollify(&f, &kernel);
        let mut worst = 0.0f64;
        for (a, b) in g.raw().iter().zip(f.raw()) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst < 1e-13, "constant drifted by {worst}");
    }

    #[test]
    fn plane_wave_scales_by_multiplier() {
        let grid = grid();
        let kernel = build_moment_kernel(4, 0.08, &grid).unwrap();
        let f = PeriodicField::from_fn_scalar(grid, |x, _, _| (TAU * 3.0 * x).sin());
        let g = mollify(&f, &kernel);
        let expected = kernel.multiplier_1d(TAU * 3.0);
        let mut worst = 0.0f64;
        for (i, (a, b)) in g.raw().iter().zip(f.raw()).enumerate() {
            let want = b * expected;
            worst = worst.max((a - want).norm());
            let _ = i;
        }
        assert!(worst < 1e-12, "plane wave multiplier error {worst}");
        // near-identity behavior: |1 - m(k)| <= (eps k)^L for small eps k
        for mode in 1..=4 {
            let k = TAU * mode as f64;
            let defect = (1.0 - kernel.multiplier_1d(k)).abs();
            assert!(
                defect <= (kernel.eps * k).powi(4),
                "mode {mode}: defect {defect} vs bound {}",
                (kernel.eps * k).powi(4)
            );
        }
    }

    #[test]
    fn halving_eps_shows_order_l() {
        for order in [2usize, 4] {
            let eps = 0.02;
            let k = TAU * 3.0;
            let err = |eps: f64| {
                let kernel = MomentKernel { order, eps };
                (1.0 - kernel.multiplier_1d(k)).abs()
            };
            let ratio = err(eps) / err(eps / 2.0);
            let measured_order = ratio.log2();
            assert!(
                (measured_order - order as f64).abs() < 0.1,
                "order {order}: halving exponent {measured_order}"
            );
            // measured constant in |v - eta*v| <= C eps^L |grad^L v| stays O(1)
            let c = err(eps) / (eps * k).powi(order as i32);
            assert!(c > 0.01 && c < 1.0, "order {order}: constant {c}");
        }
    }

    #[test]
    fn double_mollify_squares_the_multiplier() {
        let grid = grid();
        let kernel = build_moment_kernel(2, 0.1, &grid).unwrap();
        let f = PeriodicField::from_fn_scalar(grid, |x, y, _| {
            (TAU * 2.0 * x).cos() + (TAU * y).sin()
        });
        let once = mollify(&mollify(&f, &kernel), &kernel);
        let twice = double_mollify(&f, &kernel);
        let mut worst = 0.0f64;
        for (a, b) in once.raw().iter().zip(twice.raw()) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst < 1e-13, "double mollify mismatch {worst}");
        // convergence order preserved on the halving test
        let k = TAU * 3.0;
        let err = |eps: f64| {
            let kern = MomentKernel { order: 2, eps };
            let m = kern.multiplier_1d(k);
            (1.0 - m * m).abs()
        };
        let ratio = (err(0.02) / err(0.01)).log2();
        assert!((ratio - 2.0).abs() < 0.1, "double mollify halving order {ratio}");
    }

    #[test]
    fn under_resolved_eps_is_rejected() {
        let grid = GridSpec::with_default_band(8).unwrap();
        assert!(build_moment_kernel(2, 0.1, &grid).is_err()); // 2/n = 0.25
        assert!(build_moment_kernel(1, 0.5, &grid).is_err());
        assert!(build_moment_kernel(2, 0.5, &grid).is_ok());
    }
}
