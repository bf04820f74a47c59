//! Periodic tensor fields of rank 0, 1, 2 on the unit 3-torus.
//!
//! A field owns complex samples for each component, either in physical space
//! (values at grid points) or in spectral space (FFT bins, unnormalized
//! forward convention).  Components are stored structure-of-arrays: component
//! `c` occupies `data[c*len .. (c+1)*len]` with the grid's `z`-fastest layout.
//!
//! Symmetric rank-2 fields store the six independent components in the order
//! `xx, xy, xz, yy, yz, zz`; general rank-2 fields store nine components with
//! the first slot major (`T^{jl}` at component `3j + l`).

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::fft::{fft3, ifft3};
use super::grid::GridSpec;

/// Which space the samples currently live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repr {
    Physical,
    Spectral,
}

/// Tensor rank together with the symmetric-storage flag for rank 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Scalar,
    Vector,
    SymTensor,
    Tensor,
}

impl Rank {
    /// Number of stored components.
    pub fn ncomp(self) -> usize {
        match self {
            Rank::Scalar => 1,
            Rank::Vector => 3,
            Rank::SymTensor => 6,
            Rank::Tensor => 9,
        }
    }

    /// Tensor rank as an integer (0, 1 or 2).
    pub fn order(self) -> u8 {
        match self {
            Rank::Scalar => 0,
            Rank::Vector => 1,
            Rank::SymTensor | Rank::Tensor => 2,
        }
    }
}

/// Index of the stored component holding `T^{jl}` of a symmetric tensor.
#[inline]
pub fn sym_index(j: usize, l: usize) -> usize {
    const MAP: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    MAP[j][l]
}

/// The `(j, l)` slot pairs of the six symmetric components, in storage order.
pub const SYM_SLOTS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// A periodic tensor field on the torus.
#[derive(Debug, Clone)]
pub struct PeriodicField {
    pub grid: GridSpec,
    pub rank: Rank,
    pub repr: Repr,
    /// Time slice this field represents, in seconds.
    pub time_tag: f64,
    data: Vec<Complex64>,
}

impl PeriodicField {
    /// Zero field of the given rank in physical space.
    pub fn zeros(grid: GridSpec, rank: Rank) -> Self {
        PeriodicField {
            grid,
            rank,
            repr: Repr::Physical,
            time_tag: 0.0,
            data: vec![Complex64::default(); rank.ncomp() * grid.len()],
        }
    }

    /// Zero field in spectral space.
    pub fn zeros_spectral(grid: GridSpec, rank: Rank) -> Self {
        let mut f = Self::zeros(grid, rank);
        f.repr = Repr::Spectral;
        f
    }

    /// Build a physical scalar field from a function of the point coordinates.
    pub fn from_fn_scalar(grid: GridSpec, mut f: impl FnMut(f64, f64, f64) -> f64) -> Self {
        let mut out = Self::zeros(grid, Rank::Scalar);
        for (ix, iy, iz, idx) in grid.points() {
            out.data[idx] = Complex64::new(f(grid.coord(ix), grid.coord(iy), grid.coord(iz)), 0.0);
        }
        out
    }

    /// Build a physical vector field from a function of the point coordinates.
    pub fn from_fn_vector(grid: GridSpec, mut f: impl FnMut(f64, f64, f64) -> [f64; 3]) -> Self {
        let mut out = Self::zeros(grid, Rank::Vector);
        let len = grid.len();
        for (ix, iy, iz, idx) in grid.points() {
            let v = f(grid.coord(ix), grid.coord(iy), grid.coord(iz));
            for c in 0..3 {
                out.data[c * len + idx] = Complex64::new(v[c], 0.0);
            }
        }
        out
    }

    /// Number of stored components.
    #[inline]
    pub fn ncomp(&self) -> usize {
        self.rank.ncomp()
    }

    /// Samples of one component.
    #[inline]
    pub fn comp(&self, c: usize) -> &[Complex64] {
        let len = self.grid.len();
        &self.data[c * len..(c + 1) * len]
    }

    /// Mutable samples of one component.
    #[inline]
    pub fn comp_mut(&mut self, c: usize) -> &mut [Complex64] {
        let len = self.grid.len();
        &mut self.data[c * len..(c + 1) * len]
    }

    /// All samples, component-major.
    #[inline]
    pub fn raw(&self) -> &[Complex64] {
        &self.data
    }

    /// All samples, mutable.
    #[inline]
    pub fn raw_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Rank-2 component accessor honoring symmetric storage.
    #[inline]
    pub fn tensor_comp(&self, j: usize, l: usize) -> &[Complex64] {
        match self.rank {
            Rank::SymTensor => self.comp(sym_index(j, l)),
            Rank::Tensor => self.comp(3 * j + l),
            _ => panic!("tensor_comp on rank {:?}", self.rank),
        }
    }

    /// Convert to spectral representation in place (no-op if already there).
    pub fn to_spectral(&mut self) {
        if self.repr == Repr::Spectral {
            return;
        }
        let grid = self.grid;
        for c in 0..self.ncomp() {
            fft3(&grid, self.comp_mut(c));
        }
        self.repr = Repr::Spectral;
    }

    /// Convert to physical representation in place (no-op if already there).
    pub fn to_physical(&mut self) {
        if self.repr == Repr::Physical {
            return;
        }
        let grid = self.grid;
        for c in 0..self.ncomp() {
            ifft3(&grid, self.comp_mut(c));
        }
        self.repr = Repr::Physical;
    }

    /// Clone converted to spectral representation.
    pub fn spectral(&self) -> Self {
        let mut f = self.clone();
        f.to_spectral();
        f
    }

    /// Clone converted to physical representation.
    pub fn physical(&self) -> Self {
        let mut f = self.clone();
        f.to_physical();
        f
    }

    /// `self += factor * other`; ranks, grids and representations must agree.
    pub fn add_scaled(&mut self, other: &PeriodicField, factor: f64) {
        self.check_compatible(other).expect("add_scaled on incompatible fields");
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += factor * b;
        }
    }

    /// Multiply all samples by a real factor.
    pub fn scale(&mut self, factor: f64) {
        for a in self.data.iter_mut() {
            *a *= factor;
        }
    }

    /// Largest component magnitude over all points (in the current repr).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary part in magnitude; a realness diagnostic for
    /// physical-space fields.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Drop imaginary parts (use after verifying `max_imag` is at round-off).
    pub fn clear_imag(&mut self) {
        for z in self.data.iter_mut() {
            z.im = 0.0;
        }
    }

    /// Mean of one component (physical repr: arithmetic mean over points).
    pub fn mean(&self, c: usize) -> Complex64 {
        let len = self.grid.len() as f64;
        self.comp(c).iter().sum::<Complex64>() / len
    }

    /// `L^2` norm: sqrt of the mean of the squared pointwise Frobenius norm.
    pub fn l2_norm(&self) -> f64 {
        assert_eq!(self.repr, Repr::Physical, "l2_norm expects physical repr");
        let len = self.grid.len() as f64;
        let mut sum = 0.0;
        match self.rank {
            Rank::SymTensor => {
                // Off-diagonal components appear twice in the Frobenius norm.
                for (c, (j, l)) in SYM_SLOTS.iter().enumerate() {
                    let w = if j == l { 1.0 } else { 2.0 };
                    sum += w * self.comp(c).iter().map(|z| z.norm_sqr()).sum::<f64>();
                }
            }
            _ => {
                sum = self.data.iter().map(|z| z.norm_sqr()).sum();
            }
        }
        (sum / len).sqrt()
    }

    /// Largest pointwise Frobenius norm (physical repr).
    pub fn max_frobenius(&self) -> f64 {
        assert_eq!(self.repr, Repr::Physical, "max_frobenius expects physical repr");
        let len = self.grid.len();
        let mut best = 0.0f64;
        for idx in 0..len {
            let mut s = 0.0;
            match self.rank {
                Rank::SymTensor => {
                    for (c, (j, l)) in SYM_SLOTS.iter().enumerate() {
                        let w = if j == l { 1.0 } else { 2.0 };
                        s += w * self.comp(c)[idx].norm_sqr();
                    }
                }
                _ => {
                    for c in 0..self.ncomp() {
                        s += self.comp(c)[idx].norm_sqr();
                    }
                }
            }
            best = best.max(s);
        }
        best.sqrt()
    }

    /// Verify two fields can be combined linearly.
    pub fn check_compatible(&self, other: &PeriodicField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::config("fields live on different grids"));
        }
        if self.rank != other.rank {
            return Err(Error::config(format!(
                "rank mismatch: {:?} vs {:?}",
                self.rank, other.rank
            )));
        }
        if self.repr != other.repr {
            return Err(Error::config("fields are in different representations"));
        }
        Ok(())
    }
}
