//! Smooth compactly supported cutoff functions used throughout the pipeline:
//! a time partition of unity indexed by integers, spatial chart cutoffs on the
//! half-integer lattice, and one-sided ramps for assembling plateau profiles.
//!
//! All functions are C-infinity with closed-form derivatives, so downstream
//! code can differentiate wave amplitudes analytically instead of resorting to
//! finite differences.

use crate::error::{Error, Result};

/// Standard bump `exp(-1/(1-u^2))` on (-1,1), zero outside, with derivative.
///
/// The function is C-infinity on all of R and vanishes to infinite order at
/// `u = ±1`.
pub fn bump(u: f64) -> (f64, f64) {
    if u.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let s = 1.0 - u * u;
    let v = (-1.0 / s).exp();
    // d/du exp(-1/s) = exp(-1/s) * (-2u / s^2)
    let d = v * (-2.0 * u) / (s * s);
    (v, d)
}

/// One-sided C-infinity transition: 0 for `u <= 0`, 1 for `u >= 1`,
/// strictly increasing in between. Returns `(value, derivative)`.
///
/// Built as `f(u) / (f(u) + f(1-u))` with `f(u) = exp(-1/u)` for positive `u`.
/// The plateau values 0 and 1 are attained *exactly*, with all derivatives
/// vanishing at the junctions.
pub fn ramp(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        return (0.0, 0.0);
    }
    if u >= 1.0 {
        return (1.0, 0.0);
    }
    let f = |x: f64| (-1.0 / x).exp();
    let df = |x: f64| (-1.0 / x).exp() / (x * x);
    let a = f(u);
    let b = f(1.0 - u);
    let da = df(u);
    let db = -df(1.0 - u);
    let denom = a + b;
    let v = a / denom;
    let d = (da * b - a * db) / (denom * denom);
    (v, d)
}

/// Smooth plateau profile: exactly 1 on `[lo, hi]`, exactly 0 outside
/// `[lo - width, hi + width]`, monotone on the two ramps.
///
/// Returns `(value, derivative)` at `t`.
pub fn plateau(t: f64, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    debug_assert!(width > 0.0 && hi >= lo);
    let (up, dup) = ramp((t - (lo - width)) / width);
    let (down, ddown) = ramp(((hi + width) - t) / width);
    (up * down, dup / width * down - up * ddown / width)
}

/// Time partition of unity: `eta(u - k)` over integers `k` satisfies
/// `sum_k eta^2(u - k) = 1` exactly, with `supp eta ⊆ (-1, 1)`.
///
/// Built by normalizing the standard bump against its integer translates. At
/// any `u` at most two translates are active, so at most two consecutive
/// generations overlap at any time.
///
/// Returns `(value, derivative)` of `eta` at `u`.
pub fn time_partition(u: f64) -> (f64, f64) {
    if u.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let (b0, db0) = bump(u);
    // Only the immediate neighbors can contribute on (-1,1).
    let (bm, dbm) = bump(u + 1.0);
    let (bp, dbp) = bump(u - 1.0);
    let q = b0 * b0 + bm * bm + bp * bp;
    let dq = 2.0 * (b0 * db0 + bm * dbm + bp * dbp);
    let s = q.sqrt();
    let v = b0 / s;
    let d = db0 / s - b0 * dq / (2.0 * s * s * s);
    (v, d)
}

/// 1-periodic chart function `chi` with `chi(u)^2 + chi(u - 1/2)^2 = 1`
/// exactly at every `u`. Within one period, `chi` is supported on
/// `(-1/2, 1/2)` (mod 1) and vanishes to infinite order at the endpoints.
///
/// Returns `(value, derivative)`.
pub fn chart_1d(u: f64) -> (f64, f64) {
    // Reduce to the fundamental cell [-1/2, 1/2).
    let w = u - u.round();
    let (b0, db0) = bump(2.0 * w);
    let db0 = 2.0 * db0;
    // The half-shifted translate, reduced the same way.
    let ws = (u - 0.5) - (u - 0.5).round();
    let (b1, db1) = bump(2.0 * ws);
    let db1 = 2.0 * db1;
    let q = b0 * b0 + b1 * b1;
    debug_assert!(q > 0.0);
    let dq = 2.0 * (b0 * db0 + b1 * db1);
    let s = q.sqrt();
    let v = b0 / s;
    let d = db0 / s - b0 * dq / (2.0 * s * s * s);
    (v, d)
}

/// Spatial chart cutoff on the unit torus, centered at the half-integer
/// lattice point `kappa/2` with `kappa ∈ {0,1}^3`:
/// `psi_kappa(y) = prod_axis chi(y_axis - kappa_axis/2)`.
///
/// The eight charts satisfy `sum_kappa psi_kappa^2 = 1` exactly.
///
/// Returns `(value, gradient)`.
pub fn chart_3d(y: [f64; 3], kappa: [u8; 3]) -> (f64, [f64; 3]) {
    let mut vals = [0.0f64; 3];
    let mut ders = [0.0f64; 3];
    for ax in 0..3 {
        let (v, d) = chart_1d(y[ax] - 0.5 * kappa[ax] as f64);
        vals[ax] = v;
        ders[ax] = d;
    }
    let value = vals[0] * vals[1] * vals[2];
    let grad = [
        ders[0] * vals[1] * vals[2],
        vals[0] * ders[1] * vals[2],
        vals[0] * vals[1] * ders[2],
    ];
    (value, grad)
}

/// A smooth compactly supported energy profile: `e(t) = level` exactly on
/// `[lo, hi]`, zero outside `[lo - width, hi + width]`.
///
/// `sqrt_value_dt` returns `(e^{1/2}, d/dt e^{1/2})`, the form the wave
/// amplitudes consume; `value_dt` returns `(e, de/dt)`.
#[derive(Debug, Clone)]
pub struct PlateauProfile {
    pub level: f64,
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
}

impl PlateauProfile {
    pub fn new(level: f64, lo: f64, hi: f64, width: f64) -> Result<Self> {
        if !(level >= 0.0) || !level.is_finite() {
            return Err(Error::config("plateau level must be finite and nonnegative"));
        }
        if !(hi >= lo) {
            return Err(Error::config("plateau interval is empty"));
        }
        if !(width > 0.0) {
            return Err(Error::config("plateau ramp width must be positive"));
        }
        Ok(Self { level, lo, hi, width })
    }

    /// Support interval of the profile (closure).
    pub fn support(&self) -> (f64, f64) {
        (self.lo - self.width, self.hi + self.width)
    }

    pub fn sqrt_value_dt(&self, t: f64) -> (f64, f64) {
        let (p, dp) = plateau(t, self.lo, self.hi, self.width);
        let r = self.level.sqrt();
        (r * p, r * dp)
    }

    pub fn value_dt(&self, t: f64) -> (f64, f64) {
        let (p, dp) = plateau(t, self.lo, self.hi, self.width);
        (self.level * p * p, self.level * 2.0 * p * dp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_derivative<F: Fn(f64) -> (f64, f64)>(f: F, u: f64, tol: f64) {
        let h = 1e-6;
        let (_, d) = f(u);
        let (vp, _) = f(u + h);
        let (vm, _) = f(u - h);
        let fd = (vp - vm) / (2.0 * h);
        assert!(
            (d - fd).abs() <= tol * (1.0 + d.abs()),
            "derivative mismatch at {u}: analytic {d}, fd {fd}"
        );
    }

    #[test]
    fn time_partition_sums_to_one_exactly() {
        for i in 0..=1000 {
            let u = -3.0 + 6.0 * (i as f64) / 1000.0;
            let mut s = 0.0;
            for k in -4..=4 {
                let (v, _) = time_partition(u - k as f64);
                s += v * v;
            }
            assert!((s - 1.0).abs() < 1e-14, "sum at {u} = {s}");
        }
    }

    #[test]
    fn time_partition_support_and_smoothness() {
        assert_eq!(time_partition(1.0), (0.0, 0.0));
        assert_eq!(time_partition(-1.0), (0.0, 0.0));
        assert_eq!(time_partition(1.7), (0.0, 0.0));
        // Flat vanishing near the endpoints: values and derivatives tiny.
        let (v, d) = time_partition(0.999);
        assert!(v < 1e-80 && d.abs() < 1e-70);
        // Center value 1 (sole active translate).
        let (v0, d0) = time_partition(0.0);
        assert!((v0 - 1.0).abs() < 1e-15);
        assert!(d0.abs() < 1e-15);
        for u in [-0.9, -0.5, -0.1, 0.2, 0.6, 0.85] {
            check_derivative(time_partition, u, 1e-6);
        }
    }

    #[test]
    fn chart_pair_sums_to_one_exactly() {
        for i in 0..=997 {
            let u = -1.5 + 3.0 * (i as f64) / 997.0;
            let (a, _) = chart_1d(u);
            let (b, _) = chart_1d(u - 0.5);
            assert!((a * a + b * b - 1.0).abs() < 1e-14, "at {u}");
        }
        // Periodicity.
        for u in [0.13, 0.41, -0.29] {
            let (a, da) = chart_1d(u);
            let (b, db) = chart_1d(u + 3.0);
            assert!((a - b).abs() < 1e-13 && (da - db).abs() < 1e-12);
        }
        for u in [-0.45, -0.2, 0.05, 0.3, 0.49, 0.75] {
            check_derivative(chart_1d, u, 1e-5);
        }
    }

    #[test]
    fn charts_3d_partition_of_unity() {
        let kappas: Vec<[u8; 3]> = (0..8u8)
            .map(|m| [m & 1, (m >> 1) & 1, (m >> 2) & 1])
            .collect();
        let mut rng = 987_654_321u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let y = [next() * 2.0 - 0.5, next() * 2.0 - 0.5, next() * 2.0 - 0.5];
            let mut s = 0.0;
            for k in &kappas {
                let (v, _) = chart_3d(y, *k);
                s += v * v;
            }
            assert!((s - 1.0).abs() < 1e-13, "sum at {y:?} = {s}");
        }
        // Gradient check against finite differences.
        let y = [0.17, 0.62, -0.23];
        let (_, g) = chart_3d(y, [1, 0, 1]);
        for ax in 0..3 {
            let h = 1e-6;
            let mut yp = y;
            yp[ax] += h;
            let mut ym = y;
            ym[ax] -= h;
            let (vp, _) = chart_3d(yp, [1, 0, 1]);
            let (vm, _) = chart_3d(ym, [1, 0, 1]);
            let fd = (vp - vm) / (2.0 * h);
            assert!((g[ax] - fd).abs() < 1e-5 * (1.0 + g[ax].abs()));
        }
    }

    #[test]
    fn ramp_is_exact_on_plateaus() {
        assert_eq!(ramp(-0.3), (0.0, 0.0));
        assert_eq!(ramp(0.0), (0.0, 0.0));
        assert_eq!(ramp(1.0), (1.0, 0.0));
        assert_eq!(ramp(1.7), (1.0, 0.0));
        let (v, _) = ramp(0.5);
        assert!((v - 0.5).abs() < 1e-15, "midpoint symmetry");
        // Monotone.
        let mut prev = 0.0;
        for i in 0..=100 {
            let (v, _) = ramp(i as f64 / 100.0);
            assert!(v >= prev);
            prev = v;
        }
        for u in [0.1, 0.35, 0.5, 0.8, 0.95] {
            check_derivative(ramp, u, 1e-5);
        }
    }

    #[test]
    fn plateau_profile_exact_level_and_support() {
        let p = PlateauProfile::new(0.125, -1.0, 2.0, 0.5).unwrap();
        // Exactly the level inside.
        for t in [-1.0, -0.5, 0.0, 1.3, 2.0] {
            let (e, de) = p.value_dt(t);
            assert_eq!(e, 0.125);
            assert_eq!(de, 0.0);
        }
        // Exactly zero outside.
        for t in [-1.5, -1.51, 2.5, 3.0] {
            let (e, de) = p.value_dt(t);
            assert_eq!(e, 0.0);
            assert_eq!(de, 0.0);
        }
        // sqrt profile consistent with value.
        let (s, ds) = p.sqrt_value_dt(-1.2);
        let (e, de) = p.value_dt(-1.2);
        assert!((s * s - e).abs() < 1e-15);
        assert!((2.0 * s * ds - de).abs() < 1e-13);
        // Derivative against finite differences on the ramp.
        check_derivative(|t| p.value_dt(t), -1.2, 1e-5);
        check_derivative(|t| p.value_dt(t), 2.3, 1e-5);
        // Invalid configs rejected.
        assert!(PlateauProfile::new(-1.0, 0.0, 1.0, 0.1).is_err());
        assert!(PlateauProfile::new(1.0, 1.0, 0.0, 0.1).is_err());
        assert!(PlateauProfile::new(1.0, 0.0, 1.0, 0.0).is_err());
    }
}
