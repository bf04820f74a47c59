//! Microlocal-Beltrami wave amplitudes.
//!
//! For one generation of waves at one evaluation time this module solves the
//! pointwise quadratic system per chart and assembles the per-wave vector
//! amplitudes
//!
//! ```text
//!   b_I = eta((t - t_I)/tau) * psi_kappa * e^{1/2} * gamma_I * P_I(grad xi_{sigma I})
//!   a_I = -(grad xi_I / |grad xi_I|) x b_I,          v_I = a_I + i b_I,
//! ```
//!
//! where `P_I` projects orthogonally to `grad xi_I`.  The combination is an
//! exact eigenfunction of the curl symbol, `(i grad xi_I) x v_I =
//! |grad xi_I| v_I`, and summing `v_I (conj v_I)` over the 96 waves of the
//! generation reproduces `eta^2 (e delta/3 - deviatoric stress)` wherever
//! every local system is solved — verified by [`verify_stress_equation`].
//!
//! Exact interpolant time derivatives of every factor are carried along so
//! that downstream stress families can form advective derivatives without
//! re-differencing.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::fields::{GridSpec, PeriodicField, Rank, Repr, SYM_SLOTS};
use crate::geometry::{IcosaFrame, Mat6, RotationFamily};
use crate::transport::{time_partition, CombinedFoot, FootSample, Generation, WaveIndex};

use super::energy::EnergyProfile;
use super::gamma::{self, gamma_tilde, Vec6, PHASE_STABILITY_RADIUS};

/// Charts per generation (the corner parities of the period cell).
pub const CHARTS: usize = 8;

/// Lower bound demanded of `|P_I(grad xi_{sigma I})|` at every point.  The
/// unperturbed value is `2/sqrt(5) ~ 0.894`, and phase drifts inside
/// [`PHASE_STABILITY_RADIUS`] cannot pull it below ~0.56.
pub const PROJECTION_FLOOR: f64 = 0.5;

/// Symmetric-storage diagonal slots (the `(0,0)`, `(1,1)`, `(2,2)` entries).
const DIAG_SLOTS: [usize; 3] = [0, 3, 5];

// ---------------------------------------------------------------------------
// Normalized stress
// ---------------------------------------------------------------------------

/// The trace-free normalized stress `epsilon = -(deviatoric R) / e` that
/// perturbs the right side of the pointwise system, with an optional exact
/// time derivative carried alongside.
#[derive(Debug, Clone)]
pub struct EpsilonTensor {
    /// Symmetric tensor field in physical representation, trace-free.
    pub field: PeriodicField,
    /// Time derivative of `field` (same normalization), if available.
    pub rate: Option<PeriodicField>,
    /// Energy constant used for the admissibility bound.
    pub big_k: f64,
    /// Energy value the stress was normalized by.
    pub e_value: f64,
    /// Largest pointwise Frobenius norm of the normalized stress.
    pub sup_norm: f64,
}

impl EpsilonTensor {
    /// The zero normalized stress on a grid (no perturbation).
    pub fn zero(grid: GridSpec, e_value: f64, big_k: f64) -> EpsilonTensor {
        EpsilonTensor {
            field: PeriodicField::zeros(grid, Rank::SymTensor),
            rate: None,
            big_k,
            e_value,
            sup_norm: 0.0,
        }
    }

    /// Symmetric entries at a grid point, in storage order.
    #[inline]
    pub fn sym_at(&self, idx: usize) -> [f64; 6] {
        std::array::from_fn(|c| self.field.comp(c)[idx].re)
    }

    /// Entries of the time derivative at a grid point (zero when absent).
    #[inline]
    pub fn rate_at(&self, idx: usize) -> [f64; 6] {
        match &self.rate {
            Some(r) => std::array::from_fn(|c| r.comp(c)[idx].re),
            None => [0.0; 6],
        }
    }
}

/// Build the normalized stress from a mollified stress field: remove the
/// trace, divide by `-e_value`, and verify the smallness the pointwise solve
/// requires.  `r_eps_dt`, when given, is the time derivative of the stress
/// field and is normalized the same way (valid while the energy level is
/// constant in time, which holds on the plateau where waves live).
pub fn normalized_stress(
    r_eps: &PeriodicField,
    r_eps_dt: Option<&PeriodicField>,
    e_value: f64,
    big_k: f64,
) -> Result<EpsilonTensor> {
    if r_eps.rank != Rank::SymTensor {
        return Err(Error::config("normalized stress expects a symmetric tensor field"));
    }
    if !(e_value > 0.0) || !e_value.is_finite() {
        return Err(Error::config("energy value must be positive to normalize the stress"));
    }
    if !(big_k > 0.0) {
        return Err(Error::config("energy constant K must be positive"));
    }
    let normalize = |f: &PeriodicField| -> PeriodicField {
        let mut out = f.physical();
        let npts = out.grid.len();
        for idx in 0..npts {
            let tr: f64 = DIAG_SLOTS.iter().map(|&c| out.comp(c)[idx].re).sum();
            for &c in DIAG_SLOTS.iter() {
                let v = out.comp(c)[idx].re - tr / 3.0;
                out.comp_mut(c)[idx] = num_complex::Complex64::new(-v / e_value, 0.0);
            }
            for c in [1usize, 2, 4] {
                let v = out.comp(c)[idx].re;
                out.comp_mut(c)[idx] = num_complex::Complex64::new(-v / e_value, 0.0);
            }
        }
        out
    };
    let field = normalize(r_eps);
    let sup_norm = field.max_frobenius();
    let bound = 100.0 / big_k;
    if sup_norm > bound {
        return Err(Error::precondition(format!(
            "normalized stress {sup_norm:.3e} exceeds the admissible size {bound:.3e}: \
             the energy level is too small for this stress (raise K e_R or mollify further)"
        )));
    }
    // Trace removal is exact up to roundoff; keep the guarantee explicit.
    let npts = field.grid.len();
    let mut max_tr = 0.0f64;
    for idx in 0..npts {
        let tr: f64 = DIAG_SLOTS.iter().map(|&c| field.comp(c)[idx].re).sum();
        max_tr = max_tr.max(tr.abs());
    }
    if max_tr > 1e-10 * (1.0 + sup_norm) {
        return Err(Error::numerical("normalized stress failed the trace-free check"));
    }
    let rate = match r_eps_dt {
        Some(r) => {
            if r.rank != Rank::SymTensor || r.grid != r_eps.grid {
                return Err(Error::config(
                    "stress rate must be a symmetric tensor on the same grid",
                ));
            }
            Some(normalize(r))
        }
        None => None,
    };
    Ok(EpsilonTensor { field, rate, big_k, e_value, sup_norm })
}

// ---------------------------------------------------------------------------
// Phase bundle and amplitude set
// ---------------------------------------------------------------------------

/// The transported phase data one generation of waves is built on.
pub struct PhaseBundle<'a> {
    pub generation: &'a Generation,
    pub frame: &'a IcosaFrame,
    pub rotations: &'a RotationFamily,
}

/// All wave amplitudes of one generation at one evaluation time.
///
/// Per-wave vector fields are produced on demand through [`AmplitudeSet::point`]
/// (materializing all 96 waves on the grid would be needlessly large); the
/// pointwise coefficient solves are done once at build time and cached.
pub struct AmplitudeSet {
    pub t: f64,
    pub k4: i64,
    pub tau: f64,
    pub t_anchor: f64,
    /// Time cutoff of the generation at `t` and its time derivative.
    pub eta: f64,
    pub eta_dt: f64,
    /// Square root of the energy level at `t` and its time derivative.
    pub sqrt_e: f64,
    pub sqrt_e_dt: f64,
    pub e_value: f64,
    pub e_value_dt: f64,
    pub drift_shift: [f64; 3],
    pub grid: GridSpec,
    /// Foot data interpolated to `t`.
    pub foot: CombinedFoot,
    sigma: [usize; 12],
    /// Rotated face directions per chart: `directions[chart_bits][face]`.
    directions: [[Vector3<f64>; 12]; CHARTS],
    /// Advected chart anchors per chart bits.
    anchors: [[f64; 3]; CHARTS],
    /// Cached coefficients, `gammas[idx * 48 + bits * 6 + rep]`.
    gammas: Vec<f64>,
    gamma_rates: Vec<f64>,
    /// Smallest coefficient over all points and charts.
    pub min_gamma: f64,
    /// Smallest projected amplitude direction norm observed.
    pub min_proj: f64,
    /// Largest entrywise deviation of any pointwise matrix from the reference.
    pub max_matrix_dev: f64,
    /// Largest entrywise deviation of any pointwise right side from `1/6`.
    pub max_rhs_dev: f64,
    /// Largest relative excursion `|gamma - gamma_tilde| / gamma_tilde`.
    pub max_containment: f64,
}

/// One wave evaluated at one grid point: phase, gradient, cutoffs,
/// coefficient, amplitudes, and the exact time derivative of each.
#[derive(Debug, Clone, Copy)]
pub struct WaveSample {
    pub xi: f64,
    pub xi_dt: f64,
    pub grad_xi: Vector3<f64>,
    pub grad_xi_dt: Vector3<f64>,
    pub psi: f64,
    pub psi_dt: f64,
    pub gamma: f64,
    pub gamma_dt: f64,
    pub b: Vector3<f64>,
    pub b_dt: Vector3<f64>,
    pub a: Vector3<f64>,
    pub a_dt: Vector3<f64>,
}

/// Amplitude data of all waves at a single grid point, with the foot sample
/// computed once and shared.
pub struct PointContext<'a> {
    set: &'a AmplitudeSet,
    idx: usize,
    pub foot: FootSample,
}

impl AmplitudeSet {
    /// Point context at grid indices `(ix, iy, iz)`.
    pub fn point(&self, ix: usize, iy: usize, iz: usize) -> PointContext<'_> {
        let idx = self.grid.index(ix, iy, iz);
        let x = [self.grid.coord(ix), self.grid.coord(iy), self.grid.coord(iz)];
        PointContext { set: self, idx, foot: self.foot.sample(idx, x) }
    }

    /// Point context at a flat index with explicit coordinates.
    pub fn point_at(&self, idx: usize, x: [f64; 3]) -> PointContext<'_> {
        PointContext { set: self, idx, foot: self.foot.sample(idx, x) }
    }

    /// Cached coefficient for chart `bits` and representative face `rep`.
    #[inline]
    pub fn gamma(&self, idx: usize, bits: usize, rep: usize) -> f64 {
        self.gammas[idx * 48 + bits * 6 + rep]
    }

    /// Cached coefficient rate for chart `bits` and representative face `rep`.
    #[inline]
    pub fn gamma_rate(&self, idx: usize, bits: usize, rep: usize) -> f64 {
        self.gamma_rates[idx * 48 + bits * 6 + rep]
    }

    /// The 48 representative wave indices of this generation (each stands for
    /// itself and its conjugate).
    pub fn rep_indices(&self) -> Vec<WaveIndex> {
        crate::transport::generation_rep_indices(self.k4)
    }
}

impl PointContext<'_> {
    /// Chart cutoff `psi_kappa` and its exact time derivative at this point.
    pub fn chart(&self, kappa: [u8; 3]) -> (f64, f64) {
        self.foot.psi(kappa, self.set.drift_shift)
    }

    /// Evaluate one wave of the generation at this point.
    pub fn wave(&self, w: &WaveIndex) -> WaveSample {
        let set = self.set;
        debug_assert_eq!(w.k4, set.k4, "wave belongs to a different generation");
        let bits = w.kappa[0] as usize + 2 * w.kappa[1] as usize + 4 * w.kappa[2] as usize;
        let rep = w.face % 6;
        let d = set.directions[bits][w.face];
        let d_sigma = set.directions[bits][set.sigma[w.face]];
        let g = self.foot.grad_xi(d);
        let g_dt = self.foot.dgrad_xi_dt(d);
        let gs = self.foot.grad_xi(d_sigma);
        let gs_dt = self.foot.dgrad_xi_dt(d_sigma);
        let xi = self.foot.xi(d, set.anchors[bits]);
        let xi_dt = self.foot.dxi_dt(d);
        let (psi, psi_dt) = self.foot.psi(w.kappa, set.drift_shift);
        let gamma = set.gamma(self.idx, bits, rep);
        let gamma_dt = set.gamma_rate(self.idx, bits, rep);

        // Projection of the shifted gradient orthogonal to the own gradient,
        // with its exact time derivative.
        let n2 = g.norm_squared();
        let c = gs.dot(&g) / n2;
        let p = gs - g * c;
        let gdot_g = g.dot(&g_dt);
        let c_dt = (gs_dt.dot(&g) + gs.dot(&g_dt)) / n2 - 2.0 * c * gdot_g / n2;
        let p_dt = gs_dt - g * c_dt - g_dt * c;

        let amp = set.eta * psi * set.sqrt_e * gamma;
        let amp_dt = set.eta_dt * psi * set.sqrt_e * gamma
            + set.eta * psi_dt * set.sqrt_e * gamma
            + set.eta * psi * set.sqrt_e_dt * gamma
            + set.eta * psi * set.sqrt_e * gamma_dt;
        let b = p * amp;
        let b_dt = p * amp_dt + p_dt * amp;

        let gn = n2.sqrt();
        let ghat = g / gn;
        let ghat_dt = g_dt / gn - g * (gdot_g / (gn * n2));
        let a = -ghat.cross(&b);
        let a_dt = -(ghat_dt.cross(&b) + ghat.cross(&b_dt));

        WaveSample {
            xi,
            xi_dt,
            grad_xi: g,
            grad_xi_dt: g_dt,
            psi,
            psi_dt,
            gamma,
            gamma_dt,
            b,
            b_dt,
            a,
            a_dt,
        }
    }
}

// ---------------------------------------------------------------------------
// Pointwise system assembly and the build
// ---------------------------------------------------------------------------

/// `sum_{j,l} s^{jl} u_j v_l` for a symmetric tensor in storage order.
#[inline]
fn sym_quad(s: &[f64; 6], u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    s[0] * u.x * v.x
        + s[3] * u.y * v.y
        + s[5] * u.z * v.z
        + s[1] * (u.x * v.y + u.y * v.x)
        + s[2] * (u.x * v.z + u.z * v.x)
        + s[4] * (u.y * v.z + u.z * v.y)
}

/// Assemble the pointwise system and its time derivative from the six
/// representative phase gradients `g`, their shifted partners `gs` (signs
/// irrelevant: only wedge norms enter), the gradient rates, and the
/// normalized stress with its rate.
#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble_point_system(
    g: &[Vector3<f64>; 6],
    g_dt: &[Vector3<f64>; 6],
    gs: &[Vector3<f64>; 6],
    gs_dt: &[Vector3<f64>; 6],
    eps: &[f64; 6],
    eps_dt: &[f64; 6],
) -> (Mat6, Mat6, Vec6, Vec6) {
    let mut a = Mat6::zeros();
    let mut a_dt = Mat6::zeros();
    let mut y = Vec6::zeros();
    let mut y_dt = Vec6::zeros();
    for i in 0..6 {
        let n2 = g[i].norm_squared();
        let n2_dt = 2.0 * g[i].dot(&g_dt[i]);
        let w1 = g[i].cross(&gs[i]);
        let w1_dt = g_dt[i].cross(&gs[i]) + g[i].cross(&gs_dt[i]);
        let w1n = w1.norm_squared();
        let w1n_dt = 2.0 * w1.dot(&w1_dt);
        for j in 0..6 {
            let w2 = g[i].cross(&g[j]);
            let w2_dt = g_dt[i].cross(&g[j]) + g[i].cross(&g_dt[j]);
            let w2n = w2.norm_squared();
            let w2n_dt = 2.0 * w2.dot(&w2_dt);
            let denom = n2 * n2;
            a[(j, i)] = w1n * w2n / denom;
            a_dt[(j, i)] = (w1n_dt * w2n + w1n * w2n_dt) / denom
                - 2.0 * w1n * w2n * n2_dt / (denom * n2);
        }
        y[i] = g[i].norm_squared() / 6.0 + 0.5 * sym_quad(eps, &g[i], &g[i]);
        y_dt[i] = g[i].dot(&g_dt[i]) / 3.0
            + 0.5 * sym_quad(eps_dt, &g[i], &g[i])
            + sym_quad(eps, &g_dt[i], &g[i]);
    }
    (a, a_dt, y, y_dt)
}

/// Build the wave amplitudes of one generation at evaluation time `t`.
///
/// Solves the local quadratic system at every grid point for each of the
/// eight charts (each chart carries its own rotated frame) and caches the
/// coefficients and their implicit-function time rates.  Fails when the
/// generation's measured phase-gradient drift exceeds the verified
/// phase-stability radius, when the normalized stress was built against a
/// different energy value, or when the projected amplitude direction drops
/// below [`PROJECTION_FLOOR`] anywhere.
pub fn build_amplitudes(
    bundle: &PhaseBundle<'_>,
    eps: &EpsilonTensor,
    e: &EnergyProfile,
    t: f64,
) -> Result<AmplitudeSet> {
    let gen = bundle.generation;
    let frame = bundle.frame;
    if gen.gradient_drift > PHASE_STABILITY_RADIUS {
        return Err(Error::precondition(format!(
            "phase stability violated: gradient drift {:.3} exceeds the verified radius {:.3}; \
             shrink the wave lifespan (reduce the lifespan fraction b)",
            gen.gradient_drift, PHASE_STABILITY_RADIUS
        )));
    }
    let grid = gen.nodes[0].delta.grid;
    if eps.field.grid != grid {
        return Err(Error::config("normalized stress lives on a different grid"));
    }
    if eps.field.repr != Repr::Physical {
        return Err(Error::config("normalized stress must be in physical representation"));
    }
    let (sqrt_e, sqrt_e_dt) = e.sqrt_value_dt(t);
    let e_value = sqrt_e * sqrt_e;
    let e_value_dt = 2.0 * sqrt_e * sqrt_e_dt;
    let scale = e_value.max(eps.e_value).max(f64::MIN_POSITIVE);
    if (eps.e_value - e_value).abs() > 1e-10 * scale {
        return Err(Error::precondition(format!(
            "normalization mismatch: stress normalized by {:.6e} but the energy level at \
             t = {t} is {:.6e}",
            eps.e_value, e_value
        )));
    }
    let u = (t - gen.t_anchor) / gen.tau;
    let (eta, eta_du) = time_partition(u);
    let eta_dt = eta_du / gen.tau;

    // Rotated directions and advected anchors per chart.
    let mut directions = [[Vector3::zeros(); 12]; CHARTS];
    let mut anchors = [[0.0f64; 3]; CHARTS];
    for bits in 0..CHARTS {
        let kappa = [bits as u8 & 1, (bits as u8 >> 1) & 1, (bits as u8 >> 2) & 1];
        let probe = WaveIndex { kappa, k4: gen.k4, face: 0 };
        anchors[bits] = probe.x_anchor(gen.tau, gen.mean_drift);
        for face in 0..12 {
            let w = WaveIndex { kappa, k4: gen.k4, face };
            directions[bits][face] = w.direction(frame, bundle.rotations);
        }
    }
    let sigma = frame.sigma;

    let foot = gen.combined(t);
    let npts = grid.len();
    let mut gammas = vec![0.0f64; npts * 48];
    let mut gamma_rates = vec![0.0f64; npts * 48];
    let mut min_gamma = f64::INFINITY;
    let mut min_proj = f64::INFINITY;
    let mut max_matrix_dev = 0.0f64;
    let mut max_rhs_dev = 0.0f64;
    let mut max_containment = 0.0f64;
    let gt = gamma_tilde();

    for (ix, iy, iz, idx) in grid.points() {
        let x = [grid.coord(ix), grid.coord(iy), grid.coord(iz)];
        let fs = foot.sample(idx, x);
        let eps_sym = eps.sym_at(idx);
        let eps_rate = eps.rate_at(idx);
        for bits in 0..CHARTS {
            let mut g = [Vector3::zeros(); 6];
            let mut g_dt = [Vector3::zeros(); 6];
            let mut gs = [Vector3::zeros(); 6];
            let mut gs_dt = [Vector3::zeros(); 6];
            for rep in 0..6 {
                let d = directions[bits][rep];
                g[rep] = fs.grad_xi(d);
                g_dt[rep] = fs.dgrad_xi_dt(d);
                let ds = directions[bits][sigma[rep]];
                gs[rep] = fs.grad_xi(ds);
                gs_dt[rep] = fs.dgrad_xi_dt(ds);
                // Projection floor check on the representative (the conjugate
                // shares the same projector up to sign).
                let n2 = g[rep].norm_squared();
                let p = gs[rep] - g[rep] * (gs[rep].dot(&g[rep]) / n2);
                let pn = p.norm();
                min_proj = min_proj.min(pn);
                if pn < PROJECTION_FLOOR {
                    return Err(Error::precondition(format!(
                        "projection lower bound violated at grid point ({ix},{iy},{iz}), \
                         chart {bits}, face {rep}: |P| = {pn:.3} < {PROJECTION_FLOOR}"
                    )));
                }
            }
            let (a, a_dt, y, y_dt) =
                assemble_point_system(&g, &g_dt, &gs, &gs_dt, &eps_sym, &eps_rate);
            let (da, dy) = gamma::deviation(&a, &y);
            max_matrix_dev = max_matrix_dev.max(da);
            max_rhs_dev = max_rhs_dev.max(dy);
            let sol = gamma::newton(&a, &y).map_err(|err| {
                Error::numerical(format!(
                    "pointwise coefficient solve failed at grid point ({ix},{iy},{iz}), \
                     chart {bits}: {err}"
                ))
            })?;
            let rate = gamma::newton_rate(&a, &a_dt, &y_dt, &sol)?;
            for rep in 0..6 {
                gammas[idx * 48 + bits * 6 + rep] = sol[rep];
                gamma_rates[idx * 48 + bits * 6 + rep] = rate[rep];
                min_gamma = min_gamma.min(sol[rep]);
                max_containment = max_containment.max((sol[rep] - gt).abs() / gt);
            }
        }
    }

    Ok(AmplitudeSet {
        t,
        k4: gen.k4,
        tau: gen.tau,
        t_anchor: gen.t_anchor,
        eta,
        eta_dt,
        sqrt_e,
        sqrt_e_dt,
        e_value,
        e_value_dt,
        drift_shift: gen.drift_shift(),
        grid,
        foot,
        sigma,
        directions,
        anchors,
        gammas,
        gamma_rates,
        min_gamma,
        min_proj,
        max_matrix_dev,
        max_rhs_dev,
        max_containment,
    })
}

// ---------------------------------------------------------------------------
// Verification and diagnostics
// ---------------------------------------------------------------------------

/// Evaluate the pointwise stress equation residual over the grid:
///
/// ```text
///   sum_{I in generation} v_I (conj v_I)  -  eta^2 (e delta/3 + e epsilon)
/// ```
///
/// as a symmetric tensor field (the sum over a representative and its
/// conjugate contributes `2(a a^T + b b^T)`).  The supremum of its Frobenius
/// norm is the verification figure; with every local system solved it sits at
/// the roundoff floor of the energy level.
pub fn verify_stress_equation(
    amps: &AmplitudeSet,
    eps: &EpsilonTensor,
    _e: &EnergyProfile,
) -> Result<PeriodicField> {
    let grid = amps.grid;
    let mut residual = PeriodicField::zeros(grid, Rank::SymTensor);
    residual.time_tag = amps.t;
    let reps = amps.rep_indices();
    let eta2 = amps.eta * amps.eta;
    let ev = amps.e_value;
    for (ix, iy, iz, idx) in grid.points() {
        let pc = amps.point(ix, iy, iz);
        let mut sum = [0.0f64; 6];
        for w in &reps {
            let s = pc.wave(w);
            for (c, (j, l)) in SYM_SLOTS.iter().enumerate() {
                sum[c] += 2.0 * (s.a[*j] * s.a[*l] + s.b[*j] * s.b[*l]);
            }
        }
        let eps_sym = eps.sym_at(idx);
        for (c, (j, l)) in SYM_SLOTS.iter().enumerate() {
            let diag = if j == l { 1.0 } else { 0.0 };
            let target = eta2 * ev * (diag / 3.0 + eps_sym[c]);
            residual.comp_mut(c)[idx] = num_complex::Complex64::new(sum[c] - target, 0.0);
        }
    }
    Ok(residual)
}

/// Summary diagnostics of an amplitude build (and optionally of a stress
/// equation residual) as a small CSV table.
pub fn amplitude_diagnostics_csv(amps: &AmplitudeSet, residual: Option<&PeriodicField>) -> String {
    let mut out = String::from("metric,value\n");
    let mut push = |k: &str, v: f64| out.push_str(&format!("{k},{v:.6e}\n"));
    push("time", amps.t);
    push("eta", amps.eta);
    push("energy_level", amps.e_value);
    push("min_gamma", amps.min_gamma);
    push("min_projection", amps.min_proj);
    push("max_matrix_deviation", amps.max_matrix_dev);
    push("max_rhs_deviation", amps.max_rhs_dev);
    push("max_containment", amps.max_containment);
    if let Some(r) = residual {
        push("max_stress_residual", r.max_frobenius());
    }
    out
}
