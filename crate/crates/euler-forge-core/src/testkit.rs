//! Shared scaffolding for tests that need a full wave stage: a small
//! circulating coarse flow, the reference frame and rotation family, one
//! transported generation, and a matching energy profile.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::fields::{GridSpec, PeriodicField, Rank};
use crate::geometry::{build_frame, build_rotations, IcosaFrame, RotationFamily};
use crate::microstress::{
    build_amplitudes, build_energy_profile_with_k, AmplitudeSet, EnergyProfile, EpsilonTensor,
    PhaseBundle,
};
use crate::transport::flow::{
    circulating_velocity_modes, constant_profile, SparseTerm, SparseTimeField,
};
use crate::transport::{CoarseFlow, Generation};

pub const K_TEST: f64 = 100.0;
pub const E_R: f64 = 1e-3;

/// Small deterministic RNG (splitmix64) for test data.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[-scale, scale)`.
    pub fn symmetric(&mut self, scale: f64) -> f64 {
        scale * (2.0 * self.uniform() - 1.0)
    }

    /// Complex with independent symmetric parts.
    pub fn complex(&mut self, scale: f64) -> Complex64 {
        Complex64::new(self.symmetric(scale), self.symmetric(scale))
    }
}

/// Divergence-free circulating coarse flow of amplitude `amp` on an `n^3`
/// grid, constant in time over a wide window.
pub fn flow_with(amp: f64, n: usize) -> CoarseFlow {
    let g = GridSpec::new(n, 0.875).unwrap();
    let vt = SparseTimeField::new(vec![SparseTerm::new(
        constant_profile(),
        circulating_velocity_modes(amp),
    )]);
    CoarseFlow::new(g, vt, (-10.0, 10.0)).unwrap()
}

/// One ready-to-use wave stage: geometry, transported generation, energy.
pub struct Stage {
    pub frame: IcosaFrame,
    pub rotations: RotationFamily,
    pub generation: Generation,
    pub profile: EnergyProfile,
}

/// Build a stage on an `n^3` grid: flow amplitude `amp`, wave lifespan
/// `tau`, energy plateau covering `[-2 tau, 2 tau]` at the test constant.
pub fn stage(amp: f64, tau: f64, n: usize) -> Stage {
    let frame = build_frame().unwrap();
    let axis = Vector3::new(1.0, 2.0, 3.0) / 14.0f64.sqrt();
    let rotations = build_rotations(&frame, axis, 1e-3, 0.1).unwrap();
    let flow = flow_with(amp, n);
    let generation = Generation::build(&flow, 0, tau, tau / 64.0, 0.45).unwrap();
    let profile =
        build_energy_profile_with_k((-2.0 * tau, 2.0 * tau), E_R, tau, 0.2 * tau, K_TEST).unwrap();
    Stage { frame, rotations, generation, profile }
}

impl Stage {
    pub fn bundle(&self) -> PhaseBundle<'_> {
        PhaseBundle {
            generation: &self.generation,
            frame: &self.frame,
            rotations: &self.rotations,
        }
    }

    /// Amplitudes for a given normalized stress at time `t`.
    pub fn amplitudes(&self, eps: &EpsilonTensor, t: f64) -> AmplitudeSet {
        build_amplitudes(&self.bundle(), eps, &self.profile, t).unwrap()
    }

    /// Amplitudes with zero stress at time `t`.
    pub fn ideal_amplitudes(&self, n: usize, t: f64) -> AmplitudeSet {
        let grid = GridSpec::new(n, 0.875).unwrap();
        let eps = EpsilonTensor::zero(grid, self.profile.value(t), K_TEST);
        self.amplitudes(&eps, t)
    }
}

/// Deterministic smooth symmetric tensor field rescaled to sup Frobenius
/// norm `size`.
pub fn smooth_stress(grid: GridSpec, size: f64) -> PeriodicField {
    use std::f64::consts::TAU;
    let mut f = PeriodicField::zeros(grid, Rank::SymTensor);
    for (ix, iy, iz, idx) in grid.points() {
        let (x, y, z) = (grid.coord(ix) * TAU, grid.coord(iy) * TAU, grid.coord(iz) * TAU);
        let vals = [
            (x.sin() * y.cos() + 0.3 * z.sin()) * 0.5,
            (y.sin() * z.cos()) * 0.25,
            (x.cos() * z.sin()) * 0.25,
            ((x + y).cos()) * 0.5,
            (y.cos() * x.sin()) * 0.25,
            ((z - x).sin()) * 0.5,
        ];
        for (c, v) in vals.iter().enumerate() {
            f.comp_mut(c)[idx] = Complex64::new(*v, 0.0);
        }
    }
    let sup = f.max_frobenius();
    let mut g = PeriodicField::zeros(grid, Rank::SymTensor);
    g.add_scaled(&f, size / sup);
    g
}
