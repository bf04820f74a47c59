//! Wave indexing and per-generation phase data.
//!
//! A wave is indexed by a spatial chart on the half-integer lattice, a
//! generation number (time slot), and a face of the direction frame. All
//! waves of one generation share a single family of backward foot maps,
//! stored at five node times across the generation's lifespan and
//! interpolated in time with quartic Lagrange weights. Phases, their
//! gradients, and their exact time derivatives all derive from the
//! interpolated foot data, so every consumer differentiates the *same*
//! interpolant.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::fields::{PeriodicField, Rank};
use crate::geometry::{IcosaFrame, RotationFamily};
use crate::transport::cutoffs::chart_3d;
use crate::transport::flow::CoarseFlow;
use crate::transport::footmap::{displacement_gradient, foot_displacement};
use crate::transport::lagrange::lagrange_weights;

/// Number of foot-map nodes per generation.
pub const NODES: usize = 5;

/// Index of a single wave: spatial chart, generation, and frame face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WaveIndex {
    pub kappa: [u8; 3],
    pub k4: i64,
    pub face: usize,
}

impl WaveIndex {
    /// Anchor time of the generation.
    pub fn t_anchor(&self, tau: f64) -> f64 {
        tau * self.k4 as f64
    }

    /// Rotation-family slot: the four parities (three chart bits and the
    /// generation parity) select one of 16 rotations.
    pub fn rotation_slot(&self) -> usize {
        (self.kappa[0] & 1) as usize
            + 2 * (self.kappa[1] & 1) as usize
            + 4 * (self.kappa[2] & 1) as usize
            + 8 * (self.k4.rem_euclid(2)) as usize
    }

    /// The conjugate partner carries the antipodal face.
    pub fn conjugate(&self, frame: &IcosaFrame) -> WaveIndex {
        WaveIndex { face: frame.antipode(self.face), ..*self }
    }

    /// The cyclically shifted partner within the same chart and generation.
    pub fn shifted(&self, frame: &IcosaFrame) -> WaveIndex {
        WaveIndex { face: frame.sigma[self.face], ..*self }
    }

    /// Unrotated phase direction for this wave.
    pub fn direction(&self, frame: &IcosaFrame, rotations: &RotationFamily) -> Vector3<f64> {
        rotations.direction(frame, self.rotation_slot(), self.face)
    }

    /// Spatial anchor: chart center advected with the mean drift.
    pub fn x_anchor(&self, tau: f64, mean_drift: [f64; 3]) -> [f64; 3] {
        let t = self.t_anchor(tau);
        [
            0.5 * self.kappa[0] as f64 + mean_drift[0] * t,
            0.5 * self.kappa[1] as f64 + mean_drift[1] * t,
            0.5 * self.kappa[2] as f64 + mean_drift[2] * t,
        ]
    }

    /// All indices whose waves can interact with this one: every chart and
    /// face in the same or an adjacent generation (lifespans of generations
    /// further apart never overlap). 8 charts x 3 generations x 12 faces.
    pub fn neighbors(&self) -> Vec<WaveIndex> {
        let mut out = Vec::with_capacity(288);
        for k4 in [self.k4 - 1, self.k4, self.k4 + 1] {
            for bits in 0..8u8 {
                let kappa = [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
                for face in 0..12 {
                    out.push(WaveIndex { kappa, k4, face });
                }
            }
        }
        out
    }
}

/// All wave indices of one generation: 8 charts × 6 representative faces,
/// with conjugates implied (them plus their antipodal partners form the 96
/// waves of the generation).
pub fn generation_rep_indices(k4: i64) -> Vec<WaveIndex> {
    let mut out = Vec::with_capacity(48);
    for bits in 0..8u8 {
        let kappa = [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
        for face in 0..6 {
            out.push(WaveIndex { kappa, k4, face });
        }
    }
    out
}

/// Foot-map data of one generation at one node time.
pub struct FootNode {
    pub t: f64,
    /// Displacement `delta` with `foot = x + delta` (vector, physical repr).
    pub delta: PeriodicField,
    /// Spectral gradient of the displacement (rank-2 tensor, physical repr),
    /// component `(j,l)` holding `d delta_l / d x_j`.
    pub grad_delta: PeriodicField,
}

/// Foot maps and anchors shared by all waves of one generation.
pub struct Generation {
    pub k4: i64,
    pub tau: f64,
    pub t_anchor: f64,
    /// Mean drift velocity used for the spatial anchors.
    pub mean_drift: [f64; 3],
    pub node_times: [f64; NODES],
    pub nodes: Vec<FootNode>,
    /// Largest pointwise Frobenius norm of `grad delta` over all nodes: the
    /// measured deviation of phase gradients from their initial directions.
    pub gradient_drift: f64,
}

/// Foot data interpolated to a single evaluation time (grid fields).
pub struct CombinedFoot {
    pub t: f64,
    pub delta: PeriodicField,
    pub grad_delta: PeriodicField,
    pub delta_dt: PeriodicField,
    pub grad_delta_dt: PeriodicField,
}

/// Pointwise foot sample with exact interpolant derivatives.
#[derive(Debug, Clone, Copy)]
pub struct FootSample {
    pub foot: [f64; 3],
    pub dfoot_dt: [f64; 3],
    /// `grad_foot[j][l] = d foot_l / d x_j` (includes the identity).
    pub grad_foot: [[f64; 3]; 3],
    pub dgrad_dt: [[f64; 3]; 3],
}

/// Wrap to the fundamental cell [-1/2, 1/2).
#[inline]
fn wrap_half(u: f64) -> f64 {
    u - u.round()
}

impl FootSample {
    /// Phase value for direction `d` anchored at `anchor`: the linear phase
    /// of the transported plane wave, evaluated on the branch whose seam
    /// lies where the chart cutoff vanishes.
    pub fn xi(&self, d: Vector3<f64>, anchor: [f64; 3]) -> f64 {
        d.x * wrap_half(self.foot[0] - anchor[0])
            + d.y * wrap_half(self.foot[1] - anchor[1])
            + d.z * wrap_half(self.foot[2] - anchor[2])
    }

    /// Phase gradient `(grad foot)^T d`.
    pub fn grad_xi(&self, d: Vector3<f64>) -> Vector3<f64> {
        Vector3::new(
            self.grad_foot[0][0] * d.x + self.grad_foot[0][1] * d.y + self.grad_foot[0][2] * d.z,
            self.grad_foot[1][0] * d.x + self.grad_foot[1][1] * d.y + self.grad_foot[1][2] * d.z,
            self.grad_foot[2][0] * d.x + self.grad_foot[2][1] * d.y + self.grad_foot[2][2] * d.z,
        )
    }

    /// Exact time derivative of the interpolated phase.
    pub fn dxi_dt(&self, d: Vector3<f64>) -> f64 {
        d.x * self.dfoot_dt[0] + d.y * self.dfoot_dt[1] + d.z * self.dfoot_dt[2]
    }

    /// Exact time derivative of the interpolated phase gradient.
    pub fn dgrad_xi_dt(&self, d: Vector3<f64>) -> Vector3<f64> {
        Vector3::new(
            self.dgrad_dt[0][0] * d.x + self.dgrad_dt[0][1] * d.y + self.dgrad_dt[0][2] * d.z,
            self.dgrad_dt[1][0] * d.x + self.dgrad_dt[1][1] * d.y + self.dgrad_dt[1][2] * d.z,
            self.dgrad_dt[2][0] * d.x + self.dgrad_dt[2][1] * d.y + self.dgrad_dt[2][2] * d.z,
        )
    }

    /// Transported chart cutoff (value and exact time derivative) for chart
    /// `kappa` with the generation's anchor drift already removed.
    pub fn psi(&self, kappa: [u8; 3], drift_shift: [f64; 3]) -> (f64, f64) {
        let y = [
            self.foot[0] - drift_shift[0],
            self.foot[1] - drift_shift[1],
            self.foot[2] - drift_shift[2],
        ];
        let (v, g) = chart_3d(y, kappa);
        let dv = g[0] * self.dfoot_dt[0] + g[1] * self.dfoot_dt[1] + g[2] * self.dfoot_dt[2];
        (v, dv)
    }
}

impl Generation {
    /// Build the foot maps of generation `k4` under the given flow, at node
    /// times `t_anchor + tau * {-1, -1/2, 0, 1/2, 1}`, integrating
    /// trajectories with step `h`.  `drift_cap` bounds the admissible
    /// phase-gradient drift: beyond it the perturbed directions can leave
    /// the cones the amplitude solver needs.
    pub fn build(flow: &CoarseFlow, k4: i64, tau: f64, h: f64, drift_cap: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::config("wave lifespan must be positive"));
        }
        let t_anchor = tau * k4 as f64;
        let offsets = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let mut node_times = [0.0f64; NODES];
        let mut nodes = Vec::with_capacity(NODES);
        let mut drift = 0.0f64;
        for (i, off) in offsets.iter().enumerate() {
            let t = t_anchor + tau * off;
            node_times[i] = t;
            let delta = foot_displacement(flow, t, t_anchor, h)?;
            let grad_delta = displacement_gradient(&delta)?;
            drift = drift.max(grad_delta.max_frobenius());
            nodes.push(FootNode { t, delta, grad_delta });
        }
        if drift > drift_cap {
            return Err(Error::precondition(format!(
                "phase-gradient drift {drift:.3} exceeds the cap {drift_cap:.3}: \
                 shorten the wave lifespan (reduce the lifespan fraction b)"
            )));
        }
        Ok(Generation {
            k4,
            tau,
            t_anchor,
            mean_drift: flow.mean_velocity(t_anchor),
            node_times,
            nodes,
            gradient_drift: drift,
        })
    }

    /// Whether waves of this generation are alive at time `t` (the time
    /// cutoff vanishes to infinite order outside this window).
    pub fn active(&self, t: f64) -> bool {
        (t - self.t_anchor).abs() < self.tau
    }

    /// Drift shift entering the chart cutoff argument.
    pub fn drift_shift(&self) -> [f64; 3] {
        [
            self.mean_drift[0] * self.t_anchor,
            self.mean_drift[1] * self.t_anchor,
            self.mean_drift[2] * self.t_anchor,
        ]
    }

    /// Interpolate the node data to time `t`, producing grid fields for the
    /// displacement, its gradient, and their exact interpolant time
    /// derivatives.
    pub fn combined(&self, t: f64) -> CombinedFoot {
        let (w, dw) = lagrange_weights(&self.node_times, t);
        let grid = self.nodes[0].delta.grid;
        let mut delta = PeriodicField::zeros(grid, Rank::Vector);
        let mut grad_delta = PeriodicField::zeros(grid, Rank::Tensor);
        let mut delta_dt = PeriodicField::zeros(grid, Rank::Vector);
        let mut grad_delta_dt = PeriodicField::zeros(grid, Rank::Tensor);
        delta.time_tag = t;
        grad_delta.time_tag = t;
        delta_dt.time_tag = t;
        grad_delta_dt.time_tag = t;
        for n in 0..NODES {
            delta.add_scaled(&self.nodes[n].delta, w[n]);
            grad_delta.add_scaled(&self.nodes[n].grad_delta, w[n]);
            delta_dt.add_scaled(&self.nodes[n].delta, dw[n]);
            grad_delta_dt.add_scaled(&self.nodes[n].grad_delta, dw[n]);
        }
        CombinedFoot { t, delta, grad_delta, delta_dt, grad_delta_dt }
    }
}

impl CombinedFoot {
    /// Pointwise sample at grid index `idx`, whose physical coordinates are
    /// `x` (unit-period units).
    pub fn sample(&self, idx: usize, x: [f64; 3]) -> FootSample {
        let mut foot = x;
        let mut dfoot = [0.0f64; 3];
        for c in 0..3 {
            foot[c] += self.delta.comp(c)[idx].re;
            dfoot[c] = self.delta_dt.comp(c)[idx].re;
        }
        let mut grad = [[0.0f64; 3]; 3];
        let mut dgrad = [[0.0f64; 3]; 3];
        for j in 0..3 {
            for l in 0..3 {
                grad[j][l] = self.grad_delta.comp(3 * j + l)[idx].re
                    + if j == l { 1.0 } else { 0.0 };
                dgrad[j][l] = self.grad_delta_dt.comp(3 * j + l)[idx].re;
            }
        }
        FootSample { foot, dfoot_dt: dfoot, grad_foot: grad, dgrad_dt: dgrad }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::GridSpec;
    use crate::geometry::{build_frame, build_rotations};
    use crate::transport::flow::{
        circulating_velocity_modes, constant_profile, SparseTerm, SparseTimeField,
    };

    fn small_flow(amp: f64) -> CoarseFlow {
        let g = GridSpec::new(16, 0.875).unwrap();
        let vt = SparseTimeField::new(vec![SparseTerm::new(
            constant_profile(),
            circulating_velocity_modes(amp),
        )]);
        CoarseFlow::new(g, vt, (-10.0, 10.0)).unwrap()
    }

    #[test]
    fn rotation_slots_cover_all_16_parities() {
        let mut seen = [false; 16];
        for k4 in [0i64, 1] {
            for w in generation_rep_indices(k4) {
                seen[w.rotation_slot()] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "all 16 rotation slots used");
        // Conjugates share the slot; shifted partners share the slot.
        let frame = build_frame().unwrap();
        let w = WaveIndex { kappa: [1, 0, 1], k4: 3, face: 2 };
        assert_eq!(w.rotation_slot(), w.conjugate(&frame).rotation_slot());
        assert_eq!(w.rotation_slot(), w.shifted(&frame).rotation_slot());
        // Negative generations reduce mod 2 to valid slots.
        let wneg = WaveIndex { kappa: [0, 0, 0], k4: -3, face: 0 };
        assert_eq!(wneg.rotation_slot(), 8);
    }

    #[test]
    fn anchors_follow_mean_drift() {
        let w = WaveIndex { kappa: [1, 1, 0], k4: 2, face: 0 };
        let tau = 0.25;
        let drift = [0.1, -0.2, 0.4];
        let a = w.x_anchor(tau, drift);
        assert_eq!(a, [0.5 + 0.05, 0.5 - 0.1, 0.2]);
        assert_eq!(w.t_anchor(tau), 0.5);
    }

    #[test]
    fn directions_are_rotated_frame_faces() {
        let frame = build_frame().unwrap();
        let axis = Vector3::new(1.0, 2.0, 3.0) / 14.0f64.sqrt();
        let rots = build_rotations(&frame, axis, 1e-3, 0.1).unwrap();
        let w = WaveIndex { kappa: [0, 1, 0], k4: 0, face: 4 };
        let d = w.direction(&frame, &rots);
        assert!((d.norm() - 1.0).abs() < 1e-12);
        // Conjugate direction is the negation.
        let dc = w.conjugate(&frame).direction(&frame, &rots);
        assert!((d + dc).norm() < 1e-12);
    }

    #[test]
    fn generation_nodes_and_anchor_identity() {
        let flow = small_flow(0.4);
        let tau = 0.3;
        let gen = Generation::build(&flow, 2, tau, tau / 4.0, 10.0).unwrap();
        assert_eq!(gen.t_anchor, 0.6);
        assert_eq!(gen.nodes.len(), NODES);
        // Center node is the anchor: displacement identically zero.
        assert!(gen.nodes[2].delta.max_abs() < 1e-15);
        // Active window.
        assert!(gen.active(0.6) && gen.active(0.35) && !gen.active(0.9000001));
        // Gradient drift is finite and shrinks with the flow amplitude.
        assert!(gen.gradient_drift > 0.0 && gen.gradient_drift < 2.0);
        let weak = Generation::build(&small_flow(0.1), 2, tau, tau / 4.0, 10.0).unwrap();
        assert!(weak.gradient_drift < 0.5 * gen.gradient_drift);
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_consistent_between() {
        let flow = small_flow(0.5);
        let tau = 0.2;
        let gen = Generation::build(&flow, 0, tau, tau / 8.0, 10.0).unwrap();
        // At a node, combined data reproduces the node fields.
        let cf = gen.combined(gen.node_times[3]);
        let mut diff = cf.delta.clone();
        diff.add_scaled(&gen.nodes[3].delta, -1.0);
        assert!(diff.max_abs() < 1e-12);
        // Between nodes, the interpolant tracks the directly computed foot
        // map with error scaling like (node spacing × velocity gradient)^5:
        // halving the lifespan should shrink the relative error by well over
        // an order of magnitude.
        let rel_err = |tau: f64| {
            let gen = Generation::build(&flow, 0, tau, tau / 16.0, 10.0).unwrap();
            let t = gen.t_anchor + 0.33 * tau;
            let cf = gen.combined(t);
            let direct = foot_displacement(&flow, t, gen.t_anchor, tau / 64.0).unwrap();
            let mut diff = cf.delta.clone();
            diff.add_scaled(&direct, -1.0);
            diff.max_abs() / direct.max_abs().max(1e-30)
        };
        let e_coarse = rel_err(tau);
        let e_fine = rel_err(tau / 2.0);
        assert!(e_coarse < 5e-3, "interp error at working scale: {e_coarse}");
        assert!(
            e_fine < e_coarse / 10.0,
            "expected steep convergence, got {e_coarse} -> {e_fine}"
        );
        // Interpolant time derivative matches finite differences of itself.
        let t = gen.t_anchor + 0.33 * tau;
        let cf = gen.combined(t);
        let h = 1e-5;
        let cfp = gen.combined(t + h);
        let cfm = gen.combined(t - h);
        let idx = 7 + 16 * (3 + 16 * 5);
        for c in 0..3 {
            let fd = (cfp.delta.comp(c)[idx].re - cfm.delta.comp(c)[idx].re) / (2.0 * h);
            let an = cf.delta_dt.comp(c)[idx].re;
            assert!((fd - an).abs() < 1e-7, "comp {c}: fd {fd} vs {an}");
        }
    }

    #[test]
    fn samples_expose_exact_phase_chain() {
        let flow = small_flow(0.45);
        let tau = 0.25;
        let gen = Generation::build(&flow, 1, tau, tau / 8.0, 10.0).unwrap();
        let frame = build_frame().unwrap();
        let axis = Vector3::new(1.0, 2.0, 3.0) / 14.0f64.sqrt();
        let rots = build_rotations(&frame, axis, 1e-3, 0.1).unwrap();
        let w = WaveIndex { kappa: [0, 1, 1], k4: 1, face: 3 };
        let d = w.direction(&frame, &rots);
        let anchor = w.x_anchor(tau, gen.mean_drift);
        let t = gen.t_anchor + 0.4 * tau;
        let cf = gen.combined(t);
        let g = flow.grid;
        let idx = g.index(3, 11, 6);
        let x = [3.0 / 16.0, 11.0 / 16.0, 6.0 / 16.0];
        let s = cf.sample(idx, x);
        // Phase time derivative against finite differences of the xi chain.
        let h = 1e-5;
        let sp = gen.combined(t + h).sample(idx, x);
        let sm = gen.combined(t - h).sample(idx, x);
        let fd = (sp.xi(d, anchor) - sm.xi(d, anchor)) / (2.0 * h);
        assert!((fd - s.dxi_dt(d)).abs() < 1e-7);
        // Gradient time derivative likewise.
        let fdg = (sp.grad_xi(d) - sm.grad_xi(d)) / (2.0 * h);
        assert!((fdg - s.dgrad_xi_dt(d)).norm() < 1e-6);
        // Chart cutoff time derivative.
        let shift = gen.drift_shift();
        let (pv, pdt) = s.psi(w.kappa, shift);
        let (pp, _) = sp.psi(w.kappa, shift);
        let (pm, _) = sm.psi(w.kappa, shift);
        let fd = (pp - pm) / (2.0 * h);
        assert!((fd - pdt).abs() < 1e-6, "psi value {pv}");
        // At the anchor time the phase reduces to the bare linear form.
        let cf0 = gen.combined(gen.t_anchor);
        let s0 = cf0.sample(idx, x);
        let want = d.x * wrap_half(x[0] - anchor[0])
            + d.y * wrap_half(x[1] - anchor[1])
            + d.z * wrap_half(x[2] - anchor[2]);
        assert!((s0.xi(d, anchor) - want).abs() < 1e-12);
        assert!((s0.grad_xi(d) - d).norm() < 1e-12);
    }

    #[test]
    fn neighbor_set_has_the_expected_size_and_members() {
        let w = WaveIndex { kappa: [1, 0, 1], k4: 3, face: 2 };
        let n = w.neighbors();
        assert_eq!(n.len(), 288);
        assert!(n.contains(&w));
        let frame = build_frame().unwrap();
        assert!(n.contains(&w.conjugate(&frame)));
        // No duplicates.
        let mut seen = std::collections::HashSet::new();
        for j in &n {
            assert!(seen.insert((j.kappa, j.k4, j.face)));
        }
        // Nothing further than one generation away.
        assert!(n.iter().all(|j| (j.k4 - w.k4).abs() <= 1));
    }

    #[test]
    fn excessive_drift_is_rejected_with_guidance() {
        let flow = small_flow(0.6);
        let msg = match Generation::build(&flow, 0, 0.4, 0.05, 0.05) {
            Ok(_) => panic!("expected the drift cap to reject this flow"),
            Err(e) => format!("{e}"),
        };
        assert!(msg.contains("lifespan"), "unexpected message: {msg}");
    }

    #[test]
    fn transported_chart_partition_stays_exact() {
        // All charts of a generation ride the same foot map, so the squared
        // chart sum equals one wherever the feet land, at any time.
        let flow = small_flow(0.5);
        let tau = 0.22;
        let gen = Generation::build(&flow, 1, tau, tau / 8.0, 10.0).unwrap();
        let shift = gen.drift_shift();
        for &frac in &[-0.5, 0.25, 0.5] {
            let cf = gen.combined(gen.t_anchor + frac * tau);
            let g = flow.grid;
            for &(i, j, k) in &[(0usize, 0usize, 0usize), (3, 7, 11), (15, 1, 8), (5, 5, 5)] {
                let idx = g.index(i, j, k);
                let x = [i as f64 / 16.0, j as f64 / 16.0, k as f64 / 16.0];
                let s = cf.sample(idx, x);
                let mut sum = 0.0;
                for bits in 0..8u8 {
                    let kappa = [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
                    let (v, _) = s.psi(kappa, shift);
                    sum += v * v;
                }
                assert!((sum - 1.0).abs() < 1e-12, "partition sum {sum}");
            }
        }
    }

    #[test]
    fn phases_are_flow_invariants_and_drift_is_tamed() {
        // D_t xi = dxi/dt + v.grad xi vanishes for the exact foot map; the
        // interpolated one reproduces this to interpolation accuracy.  The
        // gradient deviation from the anchor direction stays within a small
        // multiple of lifespan x velocity gradient.
        let flow = small_flow(0.3);
        let tau = 0.15;
        let gen = Generation::build(&flow, 0, tau, tau / 8.0, 10.0).unwrap();
        let frame = build_frame().unwrap();
        let axis = Vector3::new(1.0, 2.0, 3.0) / 14.0f64.sqrt();
        let rots = build_rotations(&frame, axis, 1e-3, 0.1).unwrap();
        let w = WaveIndex { kappa: [0, 0, 0], k4: 0, face: 1 };
        let d = w.direction(&frame, &rots);
        let g = flow.grid;
        let t = gen.t_anchor + 0.37 * tau;
        let cf = gen.combined(t);
        let mut worst = 0.0f64;
        for &(i, j, k) in &[(2usize, 9usize, 4usize), (8, 8, 8), (13, 3, 10)] {
            let idx = g.index(i, j, k);
            let x = [i as f64 / 16.0, j as f64 / 16.0, k as f64 / 16.0];
            let s = cf.sample(idx, x);
            let v = flow.velocity_at(t, x);
            let grad = s.grad_xi(d);
            let mat_deriv =
                s.dxi_dt(d) + v[0] * grad.x + v[1] * grad.y + v[2] * grad.z;
            worst = worst.max(mat_deriv.abs());
        }
        assert!(worst < 5e-5, "material derivative of phase: {worst}");
        // Velocity-gradient supremum of the flow (Frobenius, sampled).
        let mut gsup = 0.0f64;
        for &(i, j, k) in &[(0usize, 0, 0), (4, 9, 2), (11, 6, 13), (7, 15, 3)] {
            let x = [i as f64 / 16.0, j as f64 / 16.0, k as f64 / 16.0];
            let (_, dg) = flow.velocity_gradient_at(0.0, x);
            let mut fr = 0.0;
            for row in &dg {
                for e in row {
                    fr += e * e;
                }
            }
            gsup = gsup.max(fr.sqrt());
        }
        assert!(
            gen.gradient_drift <= 3.0 * tau * gsup,
            "drift {} vs 3*tau*|grad v| = {}",
            gen.gradient_drift,
            3.0 * tau * gsup
        );
    }
}
