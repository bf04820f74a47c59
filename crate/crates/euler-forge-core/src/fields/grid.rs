//! Uniform periodic grid on the unit 3-torus.
//!
//! All fields in this crate live on `[0,1)^3` sampled at `n^3` points,
//! `x_i = i/n`.  Storage is structure-of-arrays, row-major with `z` fastest:
//! the flat index of `(ix, iy, iz)` is `(ix*n + iy)*n + iz`.  Spectral
//! coefficients use integer modes `m \in [-n/2, n/2)` per axis with angular
//! wavenumber `k = 2*pi*m`.

use crate::error::{Error, Result};

/// Description of a periodic grid together with its dealias band.
///
/// `band` is the largest retained integer mode per axis: after any pointwise
/// product the result is truncated to `max(|m1|,|m2|,|m3|) <= band`.  With the
/// default fraction 2/3 this is the classical dealias rule (products of
/// band-limited fields are alias-free in the retained band); larger fractions
/// are permitted for pipelines that keep their genuine spectral content well
/// below `band` and enforce that separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Points per axis (power of two, at least 8).
    pub n: usize,
    /// Fraction of the Nyquist mode retained by `truncate_band`.
    pub dealias_fraction: f64,
}

impl GridSpec {
    /// Default dealias fraction (classical 2/3 rule).
    pub const DEFAULT_FRACTION: f64 = 2.0 / 3.0;

    /// Create a grid spec, validating the constraints `n` a power of two,
    /// `n >= 8`, and a resulting band of at least 2 modes.
    pub fn new(n: usize, dealias_fraction: f64) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::config(format!(
                "grid size must be a power of two >= 8, got {n}"
            )));
        }
        if !(dealias_fraction.is_finite() && dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::config(format!(
                "dealias fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        let spec = GridSpec { n, dealias_fraction };
        if spec.band() < 2 {
            return Err(Error::config(format!(
                "dealias band {} too small (need >= 2); increase n or the fraction",
                spec.band()
            )));
        }
        Ok(spec)
    }

    /// Grid with the default 2/3 dealias rule.
    pub fn with_default_band(n: usize) -> Result<Self> {
        Self::new(n, Self::DEFAULT_FRACTION)
    }

    /// Total number of grid points.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    /// True if the grid has no points (never, for a valid spec).
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest retained integer mode per axis.
    #[inline]
    pub fn band(&self) -> usize {
        ((self.dealias_fraction * self.n as f64) / 2.0).floor() as usize
    }

    /// Flat index of the grid point `(ix, iy, iz)`.
    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.n + iy) * self.n + iz
    }

    /// Physical coordinate of a 1-d index.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    /// Signed integer mode of FFT bin `i` along one axis: `0..n/2` map to
    /// themselves, `n/2..n` map to `i - n`.
    #[inline]
    pub fn signed_mode(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 { i } else { i - n }
    }

    /// FFT bin of a signed integer mode (must satisfy `-n/2 <= m < n/2`).
    #[inline]
    pub fn bin_of_mode(&self, m: i64) -> usize {
        let n = self.n as i64;
        debug_assert!(m >= -n / 2 && m < n / 2);
        ((m + n) % n) as usize
    }

    /// Iterate over all grid points as `(ix, iy, iz, flat_index)`.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |ix| {
            (0..n).flat_map(move |iy| (0..n).map(move |iz| (ix, iy, iz, (ix * n + iy) * n + iz)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridSpec::new(7, 0.5).is_err());
        assert!(GridSpec::new(4, 0.5).is_err());
        assert!(GridSpec::new(0, 0.5).is_err());
        assert!(GridSpec::new(8, 0.0).is_err());
        assert!(GridSpec::new(8, 1.5).is_err());
        // band = floor(0.3*8/2) = 1 < 2
        assert!(GridSpec::new(8, 0.3).is_err());
        assert!(GridSpec::new(8, 2.0 / 3.0).is_ok());
    }

    #[test]
    fn band_matches_fraction() {
        let g = GridSpec::new(64, 2.0 / 3.0).unwrap();
        assert_eq!(g.band(), 21);
        let g = GridSpec::new(64, 0.875).unwrap();
        assert_eq!(g.band(), 28);
        let g = GridSpec::new(64, 1.0).unwrap();
        assert_eq!(g.band(), 32);
    }

    #[test]
    fn index_is_row_major_z_fastest() {
        let g = GridSpec::with_default_band(8).unwrap();
        assert_eq!(g.index(0, 0, 0), 0);
        assert_eq!(g.index(0, 0, 1), 1);
        assert_eq!(g.index(0, 1, 0), 8);
        assert_eq!(g.index(1, 0, 0), 64);
        assert_eq!(g.index(7, 7, 7), 511);
    }

    #[test]
    fn signed_modes_round_trip() {
        let g = GridSpec::with_default_band(8).unwrap();
        let modes: Vec<i64> = (0..8).map(|i| g.signed_mode(i)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for m in -4..4 {
            assert_eq!(g.signed_mode(g.bin_of_mode(m)), m);
        }
    }
}
