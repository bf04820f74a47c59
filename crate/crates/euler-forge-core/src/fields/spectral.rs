//! Spectral calculus on periodic fields: exact derivatives, projections, the
//! order-(−1) inverse divergence, band truncation, translations, and
//! dealiased pointwise products.
//!
//! Conventions:
//! - wavenumber of integer mode `m` is `k = 2*pi*m` per axis;
//! - differential operators return a field in the same representation as
//!   their input and always drop the unmatched Nyquist planes, so real
//!   inputs give real outputs to round-off;
//! - every pointwise product is followed by truncation to the grid's dealias
//!   band before further use.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::field::{sym_index, PeriodicField, Rank, Repr};
use super::grid::GridSpec;

/// Visit every FFT bin with its signed integer modes.
pub fn for_each_mode(grid: &GridSpec, mut f: impl FnMut([i64; 3], usize)) {
    let n = grid.n;
    let mut idx = 0usize;
    for bx in 0..n {
        let mx = grid.signed_mode(bx);
        for by in 0..n {
            let my = grid.signed_mode(by);
            for bz in 0..n {
                let mz = grid.signed_mode(bz);
                f([mx, my, mz], idx);
                idx += 1;
            }
        }
    }
}

/// Normalized spectral coefficient of one component at signed mode `m`, i.e.
/// the amplitude multiplying `exp(2*pi*i m.x)` in the Fourier series.
pub fn normalized_mode(f: &PeriodicField, c: usize, m: [i64; 3]) -> Complex64 {
    assert_eq!(f.repr, Repr::Spectral, "normalized_mode expects spectral repr");
    let g = f.grid;
    let idx = g.index(g.bin_of_mode(m[0]), g.bin_of_mode(m[1]), g.bin_of_mode(m[2]));
    f.comp(c)[idx] / g.len() as f64
}

/// True when a mode touches an unmatched Nyquist plane (`m = -n/2`).
#[inline]
fn on_nyquist(grid: &GridSpec, m: [i64; 3]) -> bool {
    let edge = -(grid.n as i64) / 2;
    m[0] == edge || m[1] == edge || m[2] == edge
}

fn with_spectral_input<T>(f: &PeriodicField, body: impl FnOnce(&PeriodicField) -> T) -> T {
    if f.repr == Repr::Spectral {
        body(f)
    } else {
        body(&f.spectral())
    }
}

fn restore_repr(mut out: PeriodicField, want: Repr) -> PeriodicField {
    match want {
        Repr::Physical => out.to_physical(),
        Repr::Spectral => out.to_spectral(),
    }
    out
}

/// Partial derivative along one axis (0, 1, 2) of every component.
pub fn derivative(f: &PeriodicField, axis: usize) -> PeriodicField {
    let want = f.repr;
    let out = with_spectral_input(f, |s| {
        let mut out = s.clone();
        for c in 0..out.ncomp() {
            let comp = out.comp_mut(c);
            for_each_mode(&s.grid, |m, idx| {
                if on_nyquist(&s.grid, m) {
                    comp[idx] = Complex64::default();
                } else {
                    comp[idx] *= Complex64::new(0.0, TAU * m[axis] as f64);
                }
            });
        }
        out
    });
    restore_repr(out, want)
}

/// Gradient of a scalar field.
pub fn grad(f: &PeriodicField) -> PeriodicField {
    assert_eq!(f.rank, Rank::Scalar, "grad expects a scalar field");
    let want = f.repr;
    let out = with_spectral_input(f, |s| {
        let mut out = PeriodicField::zeros_spectral(s.grid, Rank::Vector);
        out.time_tag = s.time_tag;
        let src = s.comp(0).to_vec();
        for axis in 0..3 {
            let comp = out.comp_mut(axis);
            for_each_mode(&s.grid, |m, idx| {
                if !on_nyquist(&s.grid, m) {
                    comp[idx] = src[idx] * Complex64::new(0.0, TAU * m[axis] as f64);
                }
            });
        }
        out
    });
    restore_repr(out, want)
}

/// Curl of a vector field.
pub fn curl(v: &PeriodicField) -> PeriodicField {
    assert_eq!(v.rank, Rank::Vector, "curl expects a vector field");
    let want = v.repr;
    let out = with_spectral_input(v, |s| {
        let mut out = PeriodicField::zeros_spectral(s.grid, Rank::Vector);
        out.time_tag = s.time_tag;
        for (c, (a, b)) in [(1usize, 2usize), (2, 0), (0, 1)].iter().enumerate() {
            // (curl v)^c = d_a v^b - d_b v^a with (c,a,b) cyclic.
            let va = s.comp(*a).to_vec();
            let vb = s.comp(*b).to_vec();
            let comp = out.comp_mut(c);
            for_each_mode(&s.grid, |m, idx| {
                if !on_nyquist(&s.grid, m) {
                    let ka = Complex64::new(0.0, TAU * m[*a] as f64);
                    let kb = Complex64::new(0.0, TAU * m[*b] as f64);
                    comp[idx] = ka * vb[idx] - kb * va[idx];
                }
            });
        }
        out
    });
    restore_repr(out, want)
}

/// Divergence. Vectors contract to a scalar; rank-2 fields contract the
/// first slot: `(div T)^l = d_j T^{jl}`.
pub fn div(f: &PeriodicField) -> PeriodicField {
    let want = f.repr;
    let out = with_spectral_input(f, |s| match s.rank {
        Rank::Vector => {
            let mut out = PeriodicField::zeros_spectral(s.grid, Rank::Scalar);
            out.time_tag = s.time_tag;
            let comp = out.comp_mut(0);
            for axis in 0..3 {
                let src = s.comp(axis);
                for_each_mode(&s.grid, |m, idx| {
                    if !on_nyquist(&s.grid, m) {
                        comp[idx] += src[idx] * Complex64::new(0.0, TAU * m[axis] as f64);
                    }
                });
            }
            out
        }
        Rank::SymTensor | Rank::Tensor => {
            let mut out = PeriodicField::zeros_spectral(s.grid, Rank::Vector);
            out.time_tag = s.time_tag;
            for l in 0..3 {
                let comp_idx: Vec<usize> = (0..3)
                    .map(|j| match s.rank {
                        Rank::SymTensor => sym_index(j, l),
                        _ => 3 * j + l,
                    })
                    .collect();
                let srcs: Vec<Vec<Complex64>> =
                    comp_idx.iter().map(|&c| s.comp(c).to_vec()).collect();
                let comp = out.comp_mut(l);
                for_each_mode(&s.grid, |m, idx| {
                    if !on_nyquist(&s.grid, m) {
                        let mut acc = Complex64::default();
                        for j in 0..3 {
                            acc += srcs[j][idx] * Complex64::new(0.0, TAU * m[j] as f64);
                        }
                        comp[idx] = acc;
                    }
                });
            }
            out
        }
        Rank::Scalar => panic!("div of a scalar field"),
    });
    restore_repr(out, want)
}

/// Inverse Laplacian with zero mean: modes divide by `-|k|^2`, the mean maps
/// to zero.
pub fn laplace_inv(f: &PeriodicField) -> PeriodicField {
    let want = f.repr;
    let out = with_spectral_input(f, |s| {
        let mut out = s.clone();
        for c in 0..out.ncomp() {
            let comp = out.comp_mut(c);
            for_each_mode(&s.grid, |m, idx| {
                let k2 = TAU * TAU * (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64;
                if k2 == 0.0 || on_nyquist(&s.grid, m) {
                    comp[idx] = Complex64::default();
                } else {
                    comp[idx] /= -k2;
                }
            });
        }
        out
    });
    restore_repr(out, want)
}

/// Leray projection onto divergence-free vector fields (the mean, which is
/// divergence-free, is kept).
pub fn leray_project(v: &PeriodicField) -> PeriodicField {
    assert_eq!(v.rank, Rank::Vector, "leray_project expects a vector field");
    let want = v.repr;
    let out = with_spectral_input(v, |s| {
        let mut out = s.clone();
        let grid = s.grid;
        let len = grid.len();
        let mut hats = vec![[Complex64::default(); 3]; len];
        for c in 0..3 {
            let src = s.comp(c);
            for (h, z) in hats.iter_mut().zip(src.iter()) {
                h[c] = *z;
            }
        }
        for c in 0..3 {
            let comp = out.comp_mut(c);
            for_each_mode(&grid, |m, idx| {
                let m2 = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64;
                if m2 == 0.0 {
                    return; // keep the mean
                }
                if on_nyquist(&grid, m) {
                    comp[idx] = Complex64::default();
                    return;
                }
                let h = &hats[idx];
                let kdot = m[0] as f64 * h[0] + m[1] as f64 * h[1] + m[2] as f64 * h[2];
                comp[idx] = h[c] - kdot * m[c] as f64 / m2;
            });
        }
        out
    });
    restore_repr(out, want)
}

/// Order-(−1) inverse divergence: a symmetric tensor `R[U]` with
/// `d_j R[U]^{jl} = (P U)^l`, where `P` removes the mean, so `div R[U] = U`
/// exactly for mean-zero `U`.  `R` annihilates constants and has zero mean.
pub fn inverse_divergence(u: &PeriodicField) -> PeriodicField {
    assert_eq!(u.rank, Rank::Vector, "inverse_divergence expects a vector field");
    let want = u.repr;
    let out = with_spectral_input(u, |s| {
        let grid = s.grid;
        let mut out = PeriodicField::zeros_spectral(grid, Rank::SymTensor);
        out.time_tag = s.time_tag;
        let len = grid.len();
        let mut hats = vec![[Complex64::default(); 3]; len];
        for c in 0..3 {
            let src = s.comp(c);
            for (h, z) in hats.iter_mut().zip(src.iter()) {
                h[c] = *z;
            }
        }
        // Fill per-mode: R = f d^{jl} + R2 with
        //   f = -i (k.u) / |k|^2                  (inverse Laplacian of div u)
        //   R2^{jl} = -i [k_j w_l + k_l w_j] / |k|^2,  w = u - k (k.u)/|k|^2.
        let mut vals = vec![[Complex64::default(); 6]; len];
        for_each_mode(&grid, |m, idx| {
            let m2 = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64;
            if m2 == 0.0 || on_nyquist(&grid, m) {
                return;
            }
            let k = [TAU * m[0] as f64, TAU * m[1] as f64, TAU * m[2] as f64];
            let k2 = TAU * TAU * m2;
            let h = &hats[idx];
            let kdot = k[0] * h[0] + k[1] * h[1] + k[2] * h[2];
            let f = Complex64::new(0.0, -1.0) * kdot / k2;
            let mut w = [Complex64::default(); 3];
            for c in 0..3 {
                w[c] = h[c] - kdot * k[c] / k2;
            }
            let v = &mut vals[idx];
            let mi = Complex64::new(0.0, -1.0);
            for (slot, (j, l)) in super::field::SYM_SLOTS.iter().enumerate() {
                let mut r = mi * (k[*j] * w[*l] + k[*l] * w[*j]) / k2;
                if j == l {
                    r += f;
                }
                v[slot] = r;
            }
        });
        for slot in 0..6 {
            let comp = out.comp_mut(slot);
            for (dst, v) in comp.iter_mut().zip(vals.iter()) {
                *dst = v[slot];
            }
        }
        out
    });
    restore_repr(out, want)
}

/// Zero every mode outside the grid's dealias band (and the Nyquist planes).
pub fn truncate_band(f: &PeriodicField) -> PeriodicField {
    let want = f.repr;
    let out = with_spectral_input(f, |s| {
        let mut out = s.clone();
        let band = s.grid.band() as i64;
        for c in 0..out.ncomp() {
            let comp = out.comp_mut(c);
            for_each_mode(&s.grid, |m, idx| {
                let keep = m[0].abs() <= band
                    && m[1].abs() <= band
                    && m[2].abs() <= band
                    && !on_nyquist(&s.grid, m);
                if !keep {
                    comp[idx] = Complex64::default();
                }
            });
        }
        out
    });
    restore_repr(out, want)
}

/// Translate a field by the displacement `d`: the result satisfies
/// `out(x) = f(x - d)`.
pub fn translate(f: &PeriodicField, d: [f64; 3]) -> PeriodicField {
    let want = f.repr;
    let out = with_spectral_input(f, |s| {
        let mut out = s.clone();
        for c in 0..out.ncomp() {
            let comp = out.comp_mut(c);
            for_each_mode(&s.grid, |m, idx| {
                let phase = -TAU * (m[0] as f64 * d[0] + m[1] as f64 * d[1] + m[2] as f64 * d[2]);
                comp[idx] *= Complex64::from_polar(1.0, phase);
            });
        }
        out
    });
    restore_repr(out, want)
}

fn physical_clone(f: &PeriodicField) -> PeriodicField {
    f.physical()
}

fn dealias(mut f: PeriodicField) -> PeriodicField {
    f = truncate_band(&f);
    f
}

/// Pointwise product of two scalar fields, dealiased.
pub fn mul_scalars(a: &PeriodicField, b: &PeriodicField) -> PeriodicField {
    assert_eq!(a.rank, Rank::Scalar);
    assert_eq!(b.rank, Rank::Scalar);
    let (a, b) = (physical_clone(a), physical_clone(b));
    let mut out = a.clone();
    for (x, y) in out.raw_mut().iter_mut().zip(b.raw().iter()) {
        *x *= y;
    }
    dealias(out)
}

/// Pointwise scalar·tensor product (any rank), dealiased.
pub fn scale_by_scalar(s: &PeriodicField, f: &PeriodicField) -> PeriodicField {
    assert_eq!(s.rank, Rank::Scalar);
    let (s, f) = (physical_clone(s), physical_clone(f));
    let mut out = f.clone();
    let len = out.grid.len();
    for c in 0..out.ncomp() {
        let comp = out.comp_mut(c);
        for i in 0..len {
            comp[i] *= s.comp(0)[i];
        }
    }
    dealias(out)
}

/// Symmetric outer square `v ⊗ v`, dealiased.
pub fn outer_self(v: &PeriodicField) -> PeriodicField {
    assert_eq!(v.rank, Rank::Vector);
    let v = physical_clone(v);
    let mut out = PeriodicField::zeros(v.grid, Rank::SymTensor);
    out.time_tag = v.time_tag;
    let len = v.grid.len();
    for (slot, (j, l)) in super::field::SYM_SLOTS.iter().enumerate() {
        let comp = out.comp_mut(slot);
        for i in 0..len {
            comp[i] = v.comp(*j)[i] * v.comp(*l)[i];
        }
    }
    dealias(out)
}

/// Symmetrized outer product `a ⊗ b + b ⊗ a`, dealiased.
pub fn sym_pair(a: &PeriodicField, b: &PeriodicField) -> PeriodicField {
    assert_eq!(a.rank, Rank::Vector);
    assert_eq!(b.rank, Rank::Vector);
    let (a, b) = (physical_clone(a), physical_clone(b));
    let mut out = PeriodicField::zeros(a.grid, Rank::SymTensor);
    out.time_tag = a.time_tag;
    let len = a.grid.len();
    for (slot, (j, l)) in super::field::SYM_SLOTS.iter().enumerate() {
        let comp = out.comp_mut(slot);
        for i in 0..len {
            comp[i] = a.comp(*j)[i] * b.comp(*l)[i] + b.comp(*j)[i] * a.comp(*l)[i];
        }
    }
    dealias(out)
}

/// Pointwise dot product of two vector fields, dealiased.
pub fn dot(a: &PeriodicField, b: &PeriodicField) -> PeriodicField {
    assert_eq!(a.rank, Rank::Vector);
    assert_eq!(b.rank, Rank::Vector);
    let (a, b) = (physical_clone(a), physical_clone(b));
    let mut out = PeriodicField::zeros(a.grid, Rank::Scalar);
    out.time_tag = a.time_tag;
    let len = a.grid.len();
    let comp = out.comp_mut(0);
    for c in 0..3 {
        for i in 0..len {
            comp[i] += a.comp(c)[i] * b.comp(c)[i];
        }
    }
    dealias(out)
}

/// Trace of a rank-2 field (no product involved, no truncation).
pub fn trace(t: &PeriodicField) -> PeriodicField {
    let t = physical_clone(t);
    let mut out = PeriodicField::zeros(t.grid, Rank::Scalar);
    out.time_tag = t.time_tag;
    let len = t.grid.len();
    let comp = out.comp_mut(0);
    for j in 0..3 {
        let src = t.tensor_comp(j, j);
        for i in 0..len {
            comp[i] += src[i];
        }
    }
    out
}

/// `s * identity` as a symmetric tensor field.
pub fn identity_times(s: &PeriodicField) -> PeriodicField {
    assert_eq!(s.rank, Rank::Scalar);
    let s = physical_clone(s);
    let mut out = PeriodicField::zeros(s.grid, Rank::SymTensor);
    out.time_tag = s.time_tag;
    for j in 0..3 {
        let slot = sym_index(j, j);
        out.comp_mut(slot).copy_from_slice(s.comp(0));
    }
    out
}
