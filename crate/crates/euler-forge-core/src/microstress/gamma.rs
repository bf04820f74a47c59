//! Newton solve of the pointwise quadratic system for the wave coefficients.
//!
//! At every point the six unknown coefficients `gamma_I` (one per projective
//! direction) satisfy
//!
//! ```text
//!   sum_I A[J][I] gamma_I^2 = y_J        J = 0..6
//! ```
//!
//! where `A` is the wedge-product matrix assembled from the phase gradients
//! and `y` contracts the normalized right side against the squared gradients.
//! At the reference configuration (`A = (16/25)(ones - id)`, `y = 1/6`) the
//! solution is the constant vector `gamma_tilde = sqrt(5/96)`, and the system
//! remains uniquely solvable in a fixed neighborhood.  Two admissible
//! neighborhood radii are measured numerically once and frozen:
//!
//! * [`NEWTON_BASIN_RADIUS`] — adversarial *entrywise* perturbations of `A`
//!   and `y` (see [`measure_newton_basin`]); it gates [`solve_gamma`] and
//!   the default energy constant [`DEFAULT_K`] follows from it.
//! * [`PHASE_STABILITY_RADIUS`] — *structured* perturbations that displace
//!   the six phase gradients themselves (see
//!   [`measure_phase_stability_basin`]); it is the bound the transported
//!   phase drift must satisfy and gates the pointwise amplitude assembly.
//!   Coherent gradient displacements are far more benign than entrywise
//!   noise, which is why this radius is an order of magnitude wider.

use nalgebra::SVector;

use crate::error::{Error, Result};
use crate::geometry::{Mat6, StressMatrix};

/// Six-component coefficient vector, one entry per projective direction.
pub type Vec6 = SVector<f64, 6>;

/// Square of the reference coefficient: `5 / (2^5 * 3)`.
pub const GAMMA_TILDE_SQ: f64 = 5.0 / 96.0;

/// Reference coefficient `sqrt(5/96) ~ 0.2282177` solving the unperturbed
/// system.
pub fn gamma_tilde() -> f64 {
    GAMMA_TILDE_SQ.sqrt()
}

/// Largest entrywise perturbation radius (both of the matrix and of the right
/// side, simultaneously) for which the Newton iteration converged from the
/// reference point with positive coefficients in every one of 10^4 random
/// trials.  Measured by [`measure_newton_basin`] over seeds 77, 1 and
/// 42424242 (0.0203 .. 0.0209) and rounded down below all of them; a
/// regression test re-runs the measurement and checks it still covers this
/// value.
pub const NEWTON_BASIN_RADIUS: f64 = 0.02;

/// Largest displacement radius of the six phase gradients (each moved by an
/// independent random vector of exactly this norm) for which the solve
/// succeeded in every one of 10^4 random trials.  Measured by
/// [`measure_phase_stability_basin`] over seeds 77, 1 and 42424242
/// (0.165 .. 0.175) and rounded down below all of them.  Transported phases
/// satisfy `|grad xi - d| <= drift`, so a generation whose gradient drift
/// stays below this radius keeps every pointwise system solvable.
pub const PHASE_STABILITY_RADIUS: f64 = 0.16;

/// Default energy constant: `7000 / c` with `c` the measured entrywise basin
/// radius.  Callers may override it; the profile builder and the
/// normalized-stress constructor take the constant explicitly.
pub const DEFAULT_K: f64 = 7000.0 / NEWTON_BASIN_RADIUS;

/// Containment factor `a < 1`: perturbed solutions are expected to stay
/// inside `|gamma - gamma_tilde| <= a * gamma_tilde`, and the amplitude
/// assembly reports the worst containment it observed.
pub const CONTAINMENT: f64 = 0.9;

/// The coefficient matrix at the reference configuration: zero diagonal,
/// constant off-diagonal `16/25`.
pub fn ideal_matrix() -> Mat6 {
    let mut a = Mat6::from_element(16.0 / 25.0);
    for i in 0..6 {
        a[(i, i)] = 0.0;
    }
    a
}

/// The right side at the reference configuration: the constant vector `1/6`.
pub fn ideal_rhs() -> Vec6 {
    Vec6::repeat(1.0 / 6.0)
}

/// Newton iteration from the reference point.  Declares convergence when the
/// residual drops below `1e-12` and then applies one more full step, so the
/// returned coefficients satisfy the system essentially to roundoff.
pub(crate) fn newton(a: &Mat6, y: &Vec6) -> Result<Vec6> {
    let mut g = Vec6::repeat(gamma_tilde());
    let mut converged = false;
    for _ in 0..50 {
        let f = a * g.map(|x| x * x) - y;
        if f.amax() <= 1e-12 {
            converged = true;
        }
        let mut jac = *a;
        for col in 0..6 {
            let s = 2.0 * g[col];
            for row in 0..6 {
                jac[(row, col)] *= s;
            }
        }
        let step = jac.lu().solve(&(-f)).ok_or_else(|| {
            Error::numerical("quadratic-system Jacobian is singular")
        })?;
        g += step;
        if converged {
            break;
        }
    }
    let f = a * g.map(|x| x * x) - y;
    if f.amax() > 1e-12 {
        return Err(Error::numerical(format!(
            "coefficient solve did not converge in 50 Newton steps (residual {:.3e})",
            f.amax()
        )));
    }
    if g.min() <= 0.0 {
        return Err(Error::numerical(
            "coefficient solve left the positive cone; the right side is too degenerate",
        ));
    }
    Ok(g)
}

/// Implicit-function time derivative of the coefficients: differentiate the
/// system to `J dgamma = dy - dA gamma^2` with `J = 2 A diag(gamma)` the
/// converged Jacobian.
pub(crate) fn newton_rate(a: &Mat6, a_dt: &Mat6, y_dt: &Vec6, g: &Vec6) -> Result<Vec6> {
    let rhs = y_dt - a_dt * g.map(|x| x * x);
    let mut jac = *a;
    for col in 0..6 {
        let s = 2.0 * g[col];
        for row in 0..6 {
            jac[(row, col)] *= s;
        }
    }
    jac.lu()
        .solve(&rhs)
        .ok_or_else(|| Error::numerical("quadratic-system Jacobian is singular"))
}

/// Entrywise deviation of a system from the reference configuration.
pub fn deviation(a: &Mat6, y: &Vec6) -> (f64, f64) {
    let da = (a - ideal_matrix()).amax();
    let dy = (y - ideal_rhs()).amax();
    (da, dy)
}

/// Solve the quadratic system for the coefficients.
///
/// Errors when the system lies outside the verified perturbation domain
/// (shrink the wave lifespan or raise the energy constant) or when the
/// iteration fails to converge in 50 steps.
pub fn solve_gamma(a: &StressMatrix, y: &Vec6) -> Result<Vec6> {
    let (da, dy) = deviation(&a.a, y);
    if da > NEWTON_BASIN_RADIUS || dy > NEWTON_BASIN_RADIUS {
        return Err(Error::precondition(format!(
            "coefficient system outside the verified perturbation domain \
             (matrix deviation {da:.3e}, right-side deviation {dy:.3e}, radius {NEWTON_BASIN_RADIUS}): \
             shrink the wave lifespan or raise the energy constant"
        )));
    }
    newton(&a.a, y)
}

/// Deterministic generator for the basin measurement (splitmix64).
struct SplitMix(u64);

impl SplitMix {
    fn uniform(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[-r, r]`.
    fn symmetric(&mut self, r: f64) -> f64 {
        (2.0 * self.uniform() - 1.0) * r
    }

    /// Uniformly random direction scaled to norm exactly `r`.
    fn on_sphere(&mut self, r: f64) -> nalgebra::Vector3<f64> {
        loop {
            let u = nalgebra::Vector3::new(
                self.symmetric(1.0),
                self.symmetric(1.0),
                self.symmetric(1.0),
            );
            let n = u.norm();
            if n <= 1.0 && n > 1e-9 {
                return u * (r / n);
            }
        }
    }
}

/// Shared bisection over a monotone pass/fail radius predicate.
fn bisect_radius(mut all_pass: impl FnMut(f64) -> bool, hi0: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, hi0);
    if all_pass(hi) {
        return hi;
    }
    for _ in 0..24 {
        let mid = 0.5 * (lo + hi);
        if all_pass(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Measure the Newton basin: the largest entrywise perturbation radius for
/// which every one of `trials` random systems converges from the reference
/// point with positive coefficients.  Bisection to three decimals;
/// deterministic in `seed`.
pub fn measure_newton_basin(trials: u32, seed: u64) -> f64 {
    bisect_radius(
        |r: f64| -> bool {
            let mut rng = SplitMix(seed ^ (r.to_bits().rotate_left(17)));
            for _ in 0..trials {
                let mut a = ideal_matrix();
                for col in 0..6 {
                    for row in 0..6 {
                        a[(row, col)] += rng.symmetric(r);
                    }
                }
                let mut y = ideal_rhs();
                for j in 0..6 {
                    y[j] += rng.symmetric(r);
                }
                if newton(&a, &y).is_err() {
                    return false;
                }
            }
            true
        },
        0.7,
    )
}

/// Measure the phase-stability basin: the largest radius `r` such that
/// displacing each of the six representative phase gradients by an
/// independent random vector of norm exactly `r` (the worst shell) leaves
/// the assembled system solvable in every one of `trials` random trials.
/// The right side uses the unperturbed normalization `|grad xi_J|^2 / 6`.
/// Bisection to three decimals; deterministic in `seed`.
pub fn measure_phase_stability_basin(trials: u32, seed: u64) -> f64 {
    use crate::geometry::{build_frame, stress_matrix};
    let frame = build_frame().expect("reference frame construction");
    let sigma: [usize; 6] = std::array::from_fn(|i| frame.sigma_bar(i));
    let base = frame.rep_faces();
    bisect_radius(
        |r: f64| -> bool {
            let mut rng = SplitMix(seed ^ (r.to_bits().rotate_left(23)));
            for _ in 0..trials {
                let grads: [nalgebra::Vector3<f64>; 6] =
                    std::array::from_fn(|i| base[i] + rng.on_sphere(r));
                let sm = match stress_matrix(&grads, &sigma) {
                    Ok(s) => s,
                    Err(_) => return false,
                };
                let mut y = Vec6::zeros();
                for j in 0..6 {
                    y[j] = grads[j].norm_squared() / 6.0;
                }
                if newton(&sm.a, &y).is_err() {
                    return false;
                }
            }
            true
        },
        1.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_frame, stress_matrix};

    fn reference_matrix() -> StressMatrix {
        let frame = build_frame().unwrap();
        let grads = frame.rep_faces();
        let sigma: [usize; 6] = std::array::from_fn(|i| frame.sigma_bar(i));
        stress_matrix(&grads, &sigma).unwrap()
    }

    #[test]
    fn reference_system_returns_the_reference_coefficient() {
        let sm = reference_matrix();
        let g = solve_gamma(&sm, &ideal_rhs()).unwrap();
        let gt = gamma_tilde();
        assert!((gt - 0.2282177).abs() < 1e-7, "reference value location");
        for i in 0..6 {
            assert!((g[i] - gt).abs() < 1e-14, "component {i}: {} vs {gt}", g[i]);
        }
    }

    #[test]
    fn scaling_the_right_side_scales_the_solution() {
        let sm = reference_matrix();
        // s close enough to 1 that the scaled right side stays inside the
        // verified perturbation domain of the public solve.
        let s = 0.95f64;
        let y = ideal_rhs() * (s * s);
        let g = solve_gamma(&sm, &y).unwrap();
        let gt = gamma_tilde();
        for i in 0..6 {
            assert!((g[i] - s * gt).abs() < 1e-13);
        }
    }

    #[test]
    fn perturbed_systems_solve_to_residual_zero_and_stay_near_the_reference() {
        let sm = reference_matrix();
        let mut rng = SplitMix(12345);
        let gt = gamma_tilde();
        for _ in 0..200 {
            let mut a = sm.clone();
            for col in 0..6 {
                for row in 0..6 {
                    a.a[(row, col)] += rng.symmetric(0.01);
                }
            }
            let mut y = ideal_rhs();
            for j in 0..6 {
                y[j] += rng.symmetric(0.01);
            }
            let g = solve_gamma(&a, &y).unwrap();
            let res = a.a * g.map(|x| x * x) - y;
            assert!(res.amax() < 1e-12, "residual {}", res.amax());
            for i in 0..6 {
                assert!((g[i] - gt).abs() <= CONTAINMENT * gt);
            }
        }
    }

    #[test]
    fn out_of_domain_systems_are_refused_with_guidance() {
        let sm = reference_matrix();
        let mut y = ideal_rhs();
        y[3] += 2.0 * NEWTON_BASIN_RADIUS;
        let msg = match solve_gamma(&sm, &y) {
            Ok(_) => panic!("expected a domain refusal"),
            Err(e) => format!("{e}"),
        };
        assert!(msg.contains("perturbation domain"), "message: {msg}");
        assert!(msg.contains("energy constant"), "message: {msg}");
    }

    #[test]
    fn measured_basin_covers_the_frozen_radius() {
        let measured = measure_newton_basin(10_000, 77);
        assert!(
            measured >= NEWTON_BASIN_RADIUS,
            "measured basin {measured} fell below the frozen radius {NEWTON_BASIN_RADIUS}"
        );
        // The frozen radius is not vacuously small either: it is within a
        // factor 2 of the measured basin.
        assert!(measured <= 2.0 * NEWTON_BASIN_RADIUS, "measured {measured}");
        // The default energy constant follows the documented formula.
        assert!((DEFAULT_K - 7000.0 / NEWTON_BASIN_RADIUS).abs() < 1e-9);
    }

    #[test]
    fn measured_phase_stability_covers_the_frozen_radius() {
        let measured = measure_phase_stability_basin(10_000, 77);
        assert!(
            measured >= PHASE_STABILITY_RADIUS,
            "measured phase-stability basin {measured} fell below the frozen radius \
             {PHASE_STABILITY_RADIUS}"
        );
        assert!(
            measured <= 2.0 * PHASE_STABILITY_RADIUS,
            "measured {measured}"
        );
    }

    #[test]
    fn rate_matches_finite_differences_of_the_solution() {
        let sm = reference_matrix();
        let mut rng = SplitMix(999);
        // A smooth one-parameter family A(t), y(t).
        let mut da = Mat6::zeros();
        for col in 0..6 {
            for row in 0..6 {
                da[(row, col)] = rng.symmetric(0.02);
            }
        }
        let mut dy = Vec6::zeros();
        for j in 0..6 {
            dy[j] = rng.symmetric(0.02);
        }
        let at = |t: f64| sm.a + da * t;
        let yt = |t: f64| ideal_rhs() + dy * t;
        let t0 = 0.3;
        let g = newton(&at(t0), &yt(t0)).unwrap();
        let rate = newton_rate(&at(t0), &da, &dy, &g).unwrap();
        let h = 1e-6;
        let gp = newton(&at(t0 + h), &yt(t0 + h)).unwrap();
        let gm = newton(&at(t0 - h), &yt(t0 - h)).unwrap();
        let fd = (gp - gm) / (2.0 * h);
        assert!((rate - fd).amax() < 1e-7, "rate {} vs fd {}", rate, fd);
    }
}
