//! A sixteen-member family of rotations keeping all rotated face directions
//! pairwise separated.
//!
//! The family lies on the one-parameter rotation group about a fixed axis
//! `u`.  Sixteen angles are selected by a greedy uniform scan so that
//! `|O_m^T f + O_{m'}^T f'| >= c` for every pair of faces and members except
//! the exact cancellation `f' = -f, m' = m`.  The achieved separation is
//! re-measured exhaustively over all `12^2 * 16^2` combinations and reported.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

use super::frame::{rotation_about, IcosaFrame};

/// Number of family members (indexed by four bits).
pub const FAMILY: usize = 16;

/// The rotation family.
#[derive(Debug, Clone)]
pub struct RotationFamily {
    /// Member rotations; `mats[0]` is the identity.  The member of index
    /// `m in (Z/2Z)^4` is `mats[m0 + 2*m1 + 4*m2 + 8*m3]`.
    pub mats: [Matrix3<f64>; FAMILY],
    /// Angles along the one-parameter group.
    pub angles: [f64; FAMILY],
    /// Rotation axis.
    pub axis: Vector3<f64>,
    /// Exhaustively measured separation constant.
    pub c_sep: f64,
}

impl RotationFamily {
    /// Rotated direction `f ∘ O_m = O_m^T f` for face index `i`.
    #[inline]
    pub fn direction(&self, frame: &IcosaFrame, m: usize, face: usize) -> Vector3<f64> {
        self.mats[m].transpose() * frame.faces[face]
    }
}

/// Smallest `|f + f'|` over faces with `f' != -f` — the separation of the
/// one-member family `{Id}`.
pub fn identity_separation(frame: &IcosaFrame) -> f64 {
    let mut best = f64::INFINITY;
    for (i, f) in frame.faces.iter().enumerate() {
        for (j, g) in frame.faces.iter().enumerate() {
            if j == frame.antipode(i) {
                continue;
            }
            best = best.min((f + g).norm());
        }
    }
    best
}

/// Separation of a candidate relative angle: `min |f + O(delta) f'|` over all
/// face pairs (no exclusions — `delta != 0` here).
fn relative_separation(frame: &IcosaFrame, axis: &Vector3<f64>, delta: f64, bail_below: f64) -> f64 {
    let rot = rotation_about(axis, delta);
    let rotated: Vec<Vector3<f64>> = frame.faces.iter().map(|f| rot * f).collect();
    let mut best = f64::INFINITY;
    for f in frame.faces.iter() {
        for g in rotated.iter() {
            let d = (f + g).norm();
            if d < best {
                best = d;
                if best < bail_below {
                    return best;
                }
            }
        }
    }
    best
}

/// Exhaustive pairwise separation over all faces and members, excluding only
/// the exact-cancellation pairs `(f' = -f, m' = m)`.
pub fn exhaustive_separation(frame: &IcosaFrame, family: &RotationFamily) -> f64 {
    let dirs: Vec<[Vector3<f64>; 12]> = (0..FAMILY)
        .map(|m| std::array::from_fn(|i| family.direction(frame, m, i)))
        .collect();
    let mut best = f64::INFINITY;
    for m in 0..FAMILY {
        for mp in 0..FAMILY {
            for i in 0..12 {
                for j in 0..12 {
                    if m == mp && j == frame.antipode(i) {
                        continue;
                    }
                    best = best.min((dirs[m][i] + dirs[mp][j]).norm());
                }
            }
        }
    }
    best
}

/// Greedy construction of the family.  `scan_step` is the angle resolution;
/// `c_min` the acceptance threshold for the greedy scan.  Deterministic for
/// fixed inputs.
pub fn build_rotations(
    frame: &IcosaFrame,
    axis: Vector3<f64>,
    scan_step: f64,
    c_min: f64,
) -> Result<RotationFamily> {
    if !(scan_step.is_finite() && scan_step > 0.0 && c_min > 0.0) {
        return Err(Error::config("scan step and separation threshold must be positive"));
    }
    let axis = {
        let n = axis.norm();
        if n < 1e-12 {
            return Err(Error::config("rotation axis must be nonzero"));
        }
        axis / n
    };
    for f in frame.faces.iter() {
        if axis.cross(f).norm() < 1e-9 {
            return Err(Error::config(
                "rotation axis is parallel to a face direction; choose a generic axis",
            ));
        }
    }
    // Same-angle separation is the identity-family constant; it must already
    // clear the threshold, otherwise no scan can succeed.
    let same_angle = identity_separation(frame);
    if same_angle < c_min {
        return Err(Error::config(format!(
            "threshold {c_min} exceeds the same-angle separation {same_angle}"
        )));
    }

    let period = 2.0 * std::f64::consts::PI;
    let mut angles = vec![0.0f64];
    let steps = (period / scan_step).floor() as usize;
    'scan: for k in 1..steps {
        let theta = k as f64 * scan_step;
        for &prev in &angles {
            // all pairwise conditions depend only on the relative angle
            if relative_separation(frame, &axis, theta - prev, c_min) < c_min {
                continue 'scan;
            }
        }
        angles.push(theta);
        if angles.len() == FAMILY {
            break;
        }
    }
    if angles.len() < FAMILY {
        return Err(Error::numerical(format!(
            "greedy scan found only {} of {FAMILY} admissible angles; retry with a finer \
             scan step or a smaller threshold",
            angles.len()
        )));
    }
    let angles: [f64; FAMILY] = angles.try_into().unwrap();
    let mats: [Matrix3<f64>; FAMILY] = std::array::from_fn(|i| {
        if i == 0 {
            Matrix3::identity()
        } else {
            rotation_about(&axis, angles[i])
        }
    });
    let mut family = RotationFamily { mats, angles, axis, c_sep: 0.0 };
    family.c_sep = exhaustive_separation(frame, &family);
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::frame::build_frame;

    fn family() -> (IcosaFrame, RotationFamily) {
        let frame = build_frame().unwrap();
        let axis = Vector3::new(1.0, 2.0, 3.0) / 14.0f64.sqrt();
        let fam = build_rotations(&frame, axis, 1e-4, 0.1).unwrap();
        (frame, fam)
    }

    #[test]
    fn identity_family_base_case() {
        let frame = build_frame().unwrap();
        let c = identity_separation(&frame);
        // |f + f'|^2 = 2 +- 2/sqrt(5) for projectively distinct faces
        let expect = (2.0 - 2.0 / 5.0f64.sqrt()).sqrt();
        assert!((c - expect).abs() < 1e-12, "identity separation {c} vs {expect}");
        assert!(c > 0.0);
    }

    #[test]
    fn sixteen_members_orthogonal_with_identity_first() {
        let (_, fam) = family();
        assert_eq!(fam.mats.len(), 16);
        assert_eq!(fam.angles[0], 0.0);
        assert!((fam.mats[0] - Matrix3::identity()).norm() == 0.0);
        for m in fam.mats.iter() {
            let defect = (m.transpose() * m - Matrix3::identity())
                .iter()
                .map(|x| x.abs())
                .fold(0.0, f64::max);
            assert!(defect < 1e-12, "orthogonality defect {defect}");
            assert!((m.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn separation_reported_from_exhaustive_check() {
        let (frame, fam) = family();
        assert!(fam.c_sep >= 0.05, "c_sep = {}", fam.c_sep);
        // the reported value is exactly the exhaustive minimum
        assert_eq!(fam.c_sep, exhaustive_separation(&frame, &fam));
        // excluded pairs really cancel: f' = -f, m' = m
        for m in 0..FAMILY {
            for i in 0..12 {
                let a = fam.direction(&frame, m, i);
                let b = fam.direction(&frame, m, frame.antipode(i));
                assert!((a + b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn degenerate_axes_are_rejected() {
        let frame = build_frame().unwrap();
        assert!(build_rotations(&frame, Vector3::zeros(), 1e-3, 0.1).is_err());
        assert!(build_rotations(&frame, frame.faces[3], 1e-3, 0.1).is_err());
        // threshold above the same-angle bound can never be met
        let axis = Vector3::new(1.0, 2.0, 3.0) / 14.0f64.sqrt();
        assert!(build_rotations(&frame, axis, 1e-3, 1.2).is_err());
    }
}
