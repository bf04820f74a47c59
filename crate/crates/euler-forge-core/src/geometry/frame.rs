//! The dodecahedral direction frame: twelve face normals, the projective
//! representative set, and the order-3 rotation pairing each face with a
//! neighbor.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Golden ratio.
pub const PHI: f64 = 1.618033988749894848204586834365638118;

/// The twelve face directions of a regular dodecahedron together with the
/// six projective representatives and an order-3 rotation `sigma` acting on
/// the faces.
#[derive(Debug, Clone)]
pub struct IcosaFrame {
    /// Unit face normals; `faces[i + 6] = -faces[i]` for `i < 6`.
    pub faces: [Vector3<f64>; 12],
    /// Indices of the projective representatives (the first six faces).
    pub reps: [usize; 6],
    /// Face permutation induced by the rotation `sigma_matrix`.
    pub sigma: [usize; 12],
    /// The rotation by `2*pi/3` realizing `sigma`.
    pub sigma_matrix: Matrix3<f64>,
    /// Unit vertex axis of `sigma_matrix` (parallel to `f + sf + s^2 f`).
    pub sigma_axis: Vector3<f64>,
}

impl IcosaFrame {
    /// Index of the antipodal face `-f`.
    #[inline]
    pub fn antipode(&self, i: usize) -> usize {
        (i + 6) % 12
    }

    /// Project a face index to `(representative index in 0..6, sign)`.
    #[inline]
    pub fn rep_of(&self, i: usize) -> (usize, f64) {
        if i < 6 { (i, 1.0) } else { (i - 6, -1.0) }
    }

    /// The `sigma` action on projective representatives: the representative
    /// index of `sigma(f)` for a representative `f`.
    #[inline]
    pub fn sigma_bar(&self, ibar: usize) -> usize {
        debug_assert!(ibar < 6);
        self.sigma[ibar] % 6
    }

    /// Representative face vectors in order.
    pub fn rep_faces(&self) -> [Vector3<f64>; 6] {
        std::array::from_fn(|i| self.faces[self.reps[i]])
    }
}

fn dodecahedron_vertices() -> Vec<Vector3<f64>> {
    let mut v = Vec::with_capacity(20);
    // cube vertices first, (1,1,1) leading, then the golden rectangles
    for &sx in &[1.0, -1.0] {
        for &sy in &[1.0, -1.0] {
            for &sz in &[1.0, -1.0] {
                v.push(Vector3::new(sx, sy, sz));
            }
        }
    }
    for &s1 in &[1.0, -1.0] {
        for &s2 in &[1.0, -1.0] {
            v.push(Vector3::new(0.0, s1 / PHI, s2 * PHI));
            v.push(Vector3::new(s1 / PHI, s2 * PHI, 0.0));
            v.push(Vector3::new(s1 * PHI, 0.0, s2 / PHI));
        }
    }
    v
}

/// Rotation by `angle` about the unit axis `u` (Rodrigues form).
pub fn rotation_about(u: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    let cross = Matrix3::new(0.0, -u.z, u.y, u.z, 0.0, -u.x, -u.y, u.x, 0.0);
    Matrix3::identity() * c + cross * s + (u * u.transpose()) * (1.0 - c)
}

/// Match a rotated frame back onto the face list as a permutation, if the
/// rotation maps faces to faces within `tol`.
fn permutation_under(faces: &[Vector3<f64>; 12], m: &Matrix3<f64>, tol: f64) -> Option<[usize; 12]> {
    let mut perm = [usize::MAX; 12];
    let mut hit = [false; 12];
    for (i, f) in faces.iter().enumerate() {
        let g = m * f;
        let mut found = None;
        for (j, h) in faces.iter().enumerate() {
            if (g - h).norm() < tol {
                found = Some(j);
                break;
            }
        }
        let j = found?;
        if hit[j] {
            return None;
        }
        hit[j] = true;
        perm[i] = j;
    }
    Some(perm)
}

/// Construct the frame.  The order-3 rotation is found by scanning the
/// vertex axes of the dodecahedron for a `2*pi/3` rotation that permutes the
/// face set; the first admissible axis (deterministic order) is kept.
pub fn build_frame() -> Result<IcosaFrame> {
    let norm = (1.0 + PHI * PHI).sqrt();
    let reps_raw = [
        Vector3::new(0.0, 1.0, PHI),
        Vector3::new(0.0, 1.0, -PHI),
        Vector3::new(1.0, PHI, 0.0),
        Vector3::new(1.0, -PHI, 0.0),
        Vector3::new(PHI, 0.0, 1.0),
        Vector3::new(PHI, 0.0, -1.0),
    ];
    let mut faces = [Vector3::zeros(); 12];
    for (i, r) in reps_raw.iter().enumerate() {
        faces[i] = r / norm;
        faces[i + 6] = -r / norm;
    }

    for vertex in dodecahedron_vertices() {
        let axis = vertex.normalize();
        let m = rotation_about(&axis, 2.0 * std::f64::consts::PI / 3.0);
        if let Some(perm) = permutation_under(&faces, &m, 1e-9) {
            // order 3 and fixed-point-free projectively
            let order3 = (0..12).all(|i| perm[perm[perm[i]]] == i);
            let free = (0..12).all(|i| perm[i] != i && perm[i] != (i + 6) % 12);
            if order3 && free {
                let frame = IcosaFrame {
                    faces,
                    reps: [0, 1, 2, 3, 4, 5],
                    sigma: perm,
                    sigma_matrix: m,
                    sigma_axis: axis,
                };
                // the axis must be parallel to f + sf + s^2 f for each face triple
                let f = faces[0];
                let triple = f + faces[perm[0]] + faces[perm[perm[0]]];
                if triple.cross(&axis).norm() > 1e-9 {
                    continue;
                }
                return Ok(frame);
            }
        }
    }
    Err(Error::numerical(
        "no order-3 vertex rotation permuting the face set was found",
    ))
}

/// Largest entry of `delta^{jl} - (1/4) sum_f f^j f^l` — the quadratic-form
/// identity satisfied by the twelve faces.
pub fn verify_metric_identity(frame: &IcosaFrame) -> f64 {
    metric_defect(&frame.faces)
}

/// Same defect for an arbitrary direction list (used to show the identity
/// fails when a face is dropped).
pub fn metric_defect(faces: &[Vector3<f64>]) -> f64 {
    let mut sum = Matrix3::zeros();
    for f in faces {
        sum += f * f.transpose();
    }
    let defect = Matrix3::identity() - sum * 0.25;
    defect.iter().map(|x| x.abs()).fold(0.0, f64::max)
}
