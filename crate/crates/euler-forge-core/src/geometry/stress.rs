//! The 6×6 coefficient matrix of the pointwise quadratic system for the wave
//! coefficients.
//!
//! For six phase gradients `g_I` (one per projective representative) with
//! `sigma`-partners `g_{sI}`, the matrix entry in equation `J`, unknown `I`
//! is
//!
//! ```text
//!   A[J][I] = (|g_I ^ g_{sI}|^2 / |g_I|^2) * (|g_I ^ g_J|^2 / |g_I|^2)
//! ```
//!
//! At the initial linear phases the matrix equals `(16/25)(ones - id)`:
//! zero diagonal, constant off-diagonal, eigenvalues `16/5` (once) and
//! `-16/25` (five times).

use nalgebra::{SMatrix, Vector3};

use crate::error::{Error, Result};

/// 6×6 matrix type used by the quadratic system.
pub type Mat6 = SMatrix<f64, 6, 6>;

/// The assembled coefficient matrix.
#[derive(Debug, Clone)]
pub struct StressMatrix {
    /// `a[(J, I)]` multiplies `gamma_I^2` in equation `J`.
    pub a: Mat6,
    /// The gradients the matrix was built from.
    pub gradients: [Vector3<f64>; 6],
    /// 2-norm condition number.
    pub condition: f64,
}

fn wedge_sq(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm_squared()
}

/// 2-norm condition number of a 6×6 matrix via the symmetric eigenvalues of
/// `A^T A`.
pub fn condition_2norm(a: &Mat6) -> f64 {
    let ata = a.transpose() * a;
    let eig = ata.symmetric_eigenvalues();
    let max = eig.iter().cloned().fold(f64::MIN, f64::max).max(0.0);
    let min = eig.iter().cloned().fold(f64::MAX, f64::min).max(0.0);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        (max / min).sqrt()
    }
}

/// Assemble the stress matrix from the six phase gradients and the
/// `sigma`-pairing (a permutation of `0..6`).
pub fn stress_matrix(gradients: &[Vector3<f64>; 6], sigma_bar: &[usize; 6]) -> Result<StressMatrix> {
    for (i, g) in gradients.iter().enumerate() {
        if !(g.norm() > 1e-12) {
            return Err(Error::precondition(format!(
                "phase gradient {i} vanishes; the quadratic system is degenerate"
            )));
        }
    }
    let mut a = Mat6::zeros();
    for i in 0..6 {
        let gi = &gradients[i];
        let gsi = &gradients[sigma_bar[i]];
        let ni = gi.norm_squared();
        let prefactor = wedge_sq(gi, gsi) / ni;
        for j in 0..6 {
            a[(j, i)] = prefactor * wedge_sq(gi, &gradients[j]) / ni;
        }
    }
    let condition = condition_2norm(&a);
    Ok(StressMatrix { a, gradients: *gradients, condition })
}
