//! Transport-elliptic residual solver.
//!
//! To solve `d_j Q^{jl} = U^l` with material-derivative control, the solution
//! is evolved along the coarse flow from central data `Q(t_c) = R[U(t_c)]`
//! under
//!
//! ```text
//!   (d_t + v.grad) Q^{jl} = R^{jl}[ d_i v^b d_b Q^{ik} + (d_t + v.grad) U^k ],
//! ```
//!
//! whose divergence reproduces the constraint at every later time.  The march
//! substitutes `Q = R[U(t)] + Y`: the homogeneous part `Y` then satisfies
//!
//! ```text
//!   d_t Y = -v.grad Q + R[ d_i v^b d_b Q^{ik} + v.grad U ],
//! ```
//!
//! whose right side has exactly zero divergence and zero mean whenever
//! `div Y = 0` — so the constraint `div Q = U` propagates through every RK4
//! stage by linearity instead of accumulating time-integration error.  The
//! returned slices are multiplied by a smooth time cutoff equal to one on
//! `[t_c - tau, t_c + tau]` and supported in `[t_c - 3 tau/2, t_c + 3 tau/2]`.
//!
//! All pointwise products keep their factors band-limited, and the right side
//! is re-truncated each evaluation, so products are alias-free and the
//! mean/divergence bookkeeping above is exact in grid arithmetic.

use crate::error::{Error, Result};
use crate::fields::{
    derivative, inverse_divergence, sym_index, truncate_band, GridSpec, PeriodicField, Rank, Repr,
};
use crate::transport::{CoarseFlow, PlateauProfile};

/// Time-sampled vector data: `eval(t)` returns the field and its partial
/// time derivative at fixed position, both physical vector fields.
pub trait TimeField {
    fn eval(&self, t: f64) -> Result<(PeriodicField, PeriodicField)>;
}

impl<F> TimeField for F
where
    F: Fn(f64) -> Result<(PeriodicField, PeriodicField)>,
{
    fn eval(&self, t: f64) -> Result<(PeriodicField, PeriodicField)> {
        self(t)
    }
}

/// March controls.
pub struct TransportEllipticConfig {
    /// Nominal RK4 step (legs subdivide intervals between outputs evenly
    /// with steps no larger than this).
    pub dt: f64,
    /// Times at which cutoff-multiplied slices are returned; all must lie
    /// within `[t_c - 3 tau/2, t_c + 3 tau/2]`.
    pub outputs: Vec<f64>,
}

/// Per-march measurements.
#[derive(Debug, Clone, Default)]
pub struct MarchDiagnostics {
    /// Sup over checked times of `|div Q - U|` (inside the data lifespan).
    pub max_div_residual: f64,
    /// Largest data sup `|U|` seen.
    pub data_sup: f64,
    /// Sup of the material derivative `|(d_t + v.grad) Q|` over the march.
    pub max_material_rate: f64,
    /// Sup of `|Q|` over the march.
    pub max_q_sup: f64,
    /// Accepted RK4 steps.
    pub steps: usize,
}

/// The marched solution: cutoff-multiplied symmetric slices at the requested
/// times, sorted by time, plus diagnostics.
pub struct TransportEllipticSolution {
    pub t_center: f64,
    pub tau: f64,
    pub slices: Vec<(f64, PeriodicField)>,
    pub diagnostics: MarchDiagnostics,
}

/// Direct spectral solve slice by slice: `Q(t) = R[U(t)]` — the oracle path
/// (no material-derivative control).
pub fn direct_solve_slices(
    u: &dyn TimeField,
    times: &[f64],
) -> Result<Vec<(f64, PeriodicField)>> {
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let (ut, _) = u.eval(t)?;
        check_mean_free(&ut)?;
        out.push((t, inverse_divergence(&ut)));
    }
    Ok(out)
}

fn check_mean_free(u: &PeriodicField) -> Result<()> {
    let sup = u.max_abs();
    for c in 0..u.ncomp() {
        let m = u.mean(c).norm();
        if m > 1e-10 * (sup + 1e-300) {
            return Err(Error::precondition(format!(
                "divergence data must have zero spatial mean (component {c} mean {m:.3e} \
                 vs sup {sup:.3e})"
            )));
        }
    }
    Ok(())
}

/// Sampled inputs at one stage time.
struct StageData {
    t: f64,
    /// Velocity on the grid (vector, physical, real, exactly band-limited).
    v: PeriodicField,
    /// `gv[3a + c] = d_a v_c` (tensor, physical).
    gv: PeriodicField,
    /// Band-limited data and its partial time derivative.
    u: PeriodicField,
    u_t: PeriodicField,
    /// `R[U]`.
    ru: PeriodicField,
    /// `v.grad U` (pointwise product, band-limited).
    v_grad_u: PeriodicField,
}

struct Marcher<'a> {
    source: &'a dyn TimeField,
    flow: &'a CoarseFlow,
    grid: GridSpec,
    tau: f64,
    t_center: f64,
    diags: MarchDiagnostics,
}

impl<'a> Marcher<'a> {
    fn sample(&mut self, t: f64) -> Result<StageData> {
        let (u_raw, ut_raw) = self.source.eval(t)?;
        if u_raw.rank != Rank::Vector || ut_raw.rank != Rank::Vector {
            return Err(Error::config("divergence data must be a vector field"));
        }
        if u_raw.grid != self.grid || ut_raw.grid != self.grid {
            return Err(Error::config("divergence data grid does not match the flow grid"));
        }
        check_mean_free(&u_raw)?;
        let sup_u = u_raw.max_abs();
        if (t - self.t_center).abs() > self.tau * (1.0 + 1e-9)
            && sup_u > 1e-9 * (self.diags.data_sup + 1e-300)
        {
            return Err(Error::precondition(format!(
                "data has sup {sup_u:.3e} at t = {t:.6}, outside its stated lifespan \
                 of half-width tau = {:.6}",
                self.tau
            )));
        }
        self.diags.data_sup = self.diags.data_sup.max(sup_u);
        let u = truncate_band(&u_raw.spectral()).physical();
        let u_t = truncate_band(&ut_raw.spectral()).physical();
        let ru = inverse_divergence(&u);

        let mut v = PeriodicField::zeros(self.grid, Rank::Vector);
        let mut gv = PeriodicField::zeros(self.grid, Rank::Tensor);
        for (ix, iy, iz, idx) in self.grid.points() {
            let x = [self.grid.coord(ix), self.grid.coord(iy), self.grid.coord(iz)];
            let (vv, gg) = self.flow.velocity_gradient_at(t, x);
            for c in 0..3 {
                v.comp_mut(c)[idx] = vv[c].into();
                for a in 0..3 {
                    gv.comp_mut(3 * a + c)[idx] = gg[a][c].into();
                }
            }
        }
        let v_grad_u = advect(&v, &u);
        Ok(StageData { t, v, gv, u, u_t, ru, v_grad_u })
    }

    /// `d_t Y = -v.grad Q + R[w(Q) + v.grad U]`, `Q = R[U] + Y`,
    /// `w(Q)^k = d_i v^b d_b Q^{ik}`.
    fn rhs(&self, stage: &StageData, y: &PeriodicField) -> PeriodicField {
        let mut q = stage.ru.clone();
        q.add_scaled(y, 1.0);
        let dq: Vec<PeriodicField> = {
            let qs = q.spectral();
            (0..3).map(|axis| derivative(&qs, axis).physical()).collect()
        };
        // Advection v.grad Q and the gradient-coupling w in one sweep.
        let mut adv = PeriodicField::zeros(self.grid, Rank::SymTensor);
        let mut w = PeriodicField::zeros(self.grid, Rank::Vector);
        for idx in 0..self.grid.len() {
            let vv = [
                stage.v.comp(0)[idx],
                stage.v.comp(1)[idx],
                stage.v.comp(2)[idx],
            ];
            for slot in 0..6 {
                let mut acc = num_complex::Complex64::default();
                for (axis, d) in dq.iter().enumerate() {
                    acc += vv[axis] * d.comp(slot)[idx];
                }
                adv.comp_mut(slot)[idx] = acc;
            }
            for k in 0..3 {
                let mut acc = num_complex::Complex64::default();
                for i in 0..3 {
                    for b in 0..3 {
                        acc += stage.gv.comp(3 * i + b)[idx] * dq[b].comp(sym_index(i, k))[idx];
                    }
                }
                w.comp_mut(k)[idx] = acc;
            }
        }
        w.add_scaled(&stage.v_grad_u, 1.0);
        let mut rhs = inverse_divergence(&truncate_band(&w.spectral()).physical());
        rhs.add_scaled(&adv, -1.0);
        truncate_band(&rhs.spectral()).physical()
    }

    /// One RK4 step from `(stage0, y)` to `t + h`; returns the end stage
    /// (reusable) and the new `y`.
    fn step(
        &mut self,
        stage0: &StageData,
        y: &PeriodicField,
        h: f64,
    ) -> Result<(StageData, PeriodicField)> {
        let t = stage0.t;
        let mid = self.sample(t + 0.5 * h)?;
        let end = self.sample(t + h)?;

        let k1 = self.rhs(stage0, y);
        let mut y1 = y.clone();
        y1.add_scaled(&k1, 0.5 * h);
        let k2 = self.rhs(&mid, &y1);
        let mut y2 = y.clone();
        y2.add_scaled(&k2, 0.5 * h);
        let k3 = self.rhs(&mid, &y2);
        let mut y3 = y.clone();
        y3.add_scaled(&k3, h);
        let k4 = self.rhs(&end, &y3);

        let mut out = y.clone();
        out.add_scaled(&k1, h / 6.0);
        out.add_scaled(&k2, h / 3.0);
        out.add_scaled(&k3, h / 3.0);
        out.add_scaled(&k4, h / 6.0);

        // Instability guard: the homogeneous part must stay commensurate
        // with the data scale.
        let ref_scale = self.diags.max_q_sup.max(self.diags.data_sup) + 1e-300;
        let sup = out.max_abs();
        if !sup.is_finite() || sup > 1e3 * ref_scale {
            return Err(Error::numerical(format!(
                "transport-elliptic march unstable at t = {:.6} (|Y| = {sup:.3e}); \
                 reduce the march step dt",
                t + h
            )));
        }
        self.diags.steps += 1;
        self.record(&end, &out)?;
        Ok((end, out))
    }

    /// Record diagnostics at a stage: `|Q|`, the material rate, and (inside
    /// the lifespan) the divergence residual `|div Q - U| = |div Y - mean U|`.
    fn record(&mut self, stage: &StageData, y: &PeriodicField) -> Result<()> {
        let mut q = stage.ru.clone();
        q.add_scaled(y, 1.0);
        self.diags.max_q_sup = self.diags.max_q_sup.max(q.max_abs());
        let mut rate = self.rhs(stage, y);
        rate.add_scaled(&inverse_divergence(&stage.u_t), 1.0);
        self.diags.max_material_rate = self.diags.max_material_rate.max(rate.max_abs());
        if (stage.t - self.t_center).abs() <= self.tau {
            let div_y = crate::fields::div(&y.spectral()).physical();
            self.diags.max_div_residual = self.diags.max_div_residual.max(div_y.max_abs());
        }
        Ok(())
    }
}

/// Pointwise `v.grad f` with band-limited output.
fn advect(v: &PeriodicField, f: &PeriodicField) -> PeriodicField {
    let fs = f.spectral();
    let df: Vec<PeriodicField> = (0..3).map(|axis| derivative(&fs, axis).physical()).collect();
    let mut out = PeriodicField::zeros(f.grid, f.rank);
    out.time_tag = f.time_tag;
    for c in 0..out.ncomp() {
        let dst = out.comp_mut(c);
        for idx in 0..dst.len() {
            let mut acc = num_complex::Complex64::default();
            for (axis, d) in df.iter().enumerate() {
                acc += v.comp(axis)[idx] * d.comp(c)[idx];
            }
            dst[idx] = acc;
        }
    }
    truncate_band(&out.spectral()).physical()
}

/// Solve `div Q = U` over the window `[t_c - 3 tau/2, t_c + 3 tau/2]` by the
/// transport-elliptic march.  `u` must be mean-free at every time and
/// supported in `[t_c - tau, t_c + tau]`.
pub fn transport_elliptic_solve(
    u: &dyn TimeField,
    flow: &CoarseFlow,
    tau: f64,
    t_center: f64,
    cfg: &TransportEllipticConfig,
) -> Result<TransportEllipticSolution> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::config("lifespan tau must be positive"));
    }
    if !(cfg.dt > 0.0) || !cfg.dt.is_finite() {
        return Err(Error::config("march step dt must be positive"));
    }
    let half_window = 1.5 * tau;
    for &t in &cfg.outputs {
        if (t - t_center).abs() > half_window * (1.0 + 1e-12) {
            return Err(Error::config(format!(
                "requested output at t = {t:.6} lies outside the solution window \
                 [t_c - 3 tau/2, t_c + 3 tau/2]"
            )));
        }
    }
    let cutoff = PlateauProfile::new(1.0, t_center - tau, t_center + tau, 0.5 * tau)?;
    let mut marcher = Marcher {
        source: u,
        flow,
        grid: flow.grid,
        tau,
        t_center,
        diags: MarchDiagnostics::default(),
    };

    let mut slices: Vec<(f64, PeriodicField)> = Vec::with_capacity(cfg.outputs.len());
    let mut emit = |t: f64, stage: &StageData, y: &PeriodicField| {
        let mut q = stage.ru.clone();
        q.add_scaled(y, 1.0);
        q.scale(cutoff.value_dt(t).0);
        q.time_tag = t;
        slices.push((t, q));
    };

    // Initial data at the center; emit if requested there.
    let stage0 = marcher.sample(t_center)?;
    let y0 = PeriodicField::zeros(flow.grid, Rank::SymTensor);
    marcher.record(&stage0, &y0)?;
    let at_center = |t: f64| (t - t_center).abs() <= 1e-12 * tau;
    for &t in cfg.outputs.iter().filter(|&&t| at_center(t)) {
        emit(t, &stage0, &y0);
    }

    for forward in [true, false] {
        let mut targets: Vec<f64> = cfg
            .outputs
            .iter()
            .copied()
            .filter(|&t| !at_center(t) && ((t > t_center) == forward))
            .collect();
        targets.sort_by(|a, b| {
            let (da, db) = ((a - t_center).abs(), (b - t_center).abs());
            da.partial_cmp(&db).unwrap()
        });
        if targets.is_empty() {
            continue;
        }
        let mut t_cur = t_center;
        // Clone the center stage per leg (cheap relative to the march).
        let mut stage = marcher.sample(t_center)?;
        let mut y = y0.clone();
        for target in targets {
            let span = target - t_cur;
            let n = (span.abs() / cfg.dt).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for _ in 0..n {
                let (next_stage, next_y) = marcher.step(&stage, &y, h)?;
                stage = next_stage;
                y = next_y;
            }
            t_cur = target;
            emit(target, &stage, &y);
        }
    }

    slices.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(TransportEllipticSolution {
        t_center,
        tau,
        slices,
        diagnostics: marcher.diags,
    })
}
