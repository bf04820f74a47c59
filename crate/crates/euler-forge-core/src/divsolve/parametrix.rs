//! Higher-order oscillatory parametrix for the divergence equation.
//!
//! Given data `e^{i lambda xi} u`, the expansion builds envelopes by the
//! recursion
//!
//! ```text
//!   i d_j xi q_(k)^{jl} = u_(k)^l,      u_(k+1) = -d_j q_(k)^{jl},
//! ```
//!
//! so that `Q_D = sum_k e^{i lambda xi} q_(k) / lambda^k` satisfies the exact
//! telescoping identity
//!
//! ```text
//!   div Q_D + e^{i lambda xi} u_(D+1) / lambda^D = e^{i lambda xi} u.
//! ```
//!
//! Each extra order trades one envelope derivative for a factor `1/lambda`,
//! which is the size gain the expansion exists to deliver; the leftover
//! residual is handed to the transport-elliptic solver (or the direct
//! spectral inverse used as an oracle).

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::fields::{div, PeriodicField};

use super::symbol::{q_symbol_field, OscillatoryData};

/// Expansion of the oscillatory inverse divergence to a fixed order.
pub struct ParametrixExpansion {
    /// Number of envelope terms.
    pub order: usize,
    /// Envelope terms `q_(k)`, `k = 1..=order` (complex symmetric tensors,
    /// without the modulation or the `1/lambda^k` weights).
    pub terms: Vec<PeriodicField>,
    /// Residual amplitude `u_(order+1) / lambda^order` (complex vector).
    pub residual: PeriodicField,
    /// Frequency the weights refer to.
    pub lambda: f64,
}

impl ParametrixExpansion {
    /// Sup norms of the weighted envelope terms `|q_(k)| / lambda^k`.
    pub fn term_sups(&self) -> Vec<f64> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, q)| q.max_abs() / self.lambda.powi(i as i32 + 1))
            .collect()
    }

    /// Sup norm of the residual amplitude.
    pub fn residual_sup(&self) -> f64 {
        self.residual.max_abs()
    }

    /// Assemble the modulated solution `sum_k e^{i lambda xi} q_(k)/lambda^k`
    /// (complex symmetric tensor, physical representation).
    pub fn assemble(&self, data: &OscillatoryData) -> Result<PeriodicField> {
        check_resolvable(data)?;
        let grid = data.xi.grid;
        let mut out = PeriodicField::zeros(grid, crate::fields::Rank::SymTensor);
        out.time_tag = data.t;
        for (i, q) in self.terms.iter().enumerate() {
            let weight = self.lambda.powi(-(i as i32 + 1));
            let modulated = data.modulated(q);
            out.add_scaled(&modulated, weight);
        }
        Ok(out)
    }

    /// Assemble the modulated residual `e^{i lambda xi} u_(order+1) / lambda^order`.
    pub fn assemble_residual(&self, data: &OscillatoryData) -> Result<PeriodicField> {
        check_resolvable(data)?;
        Ok(data.modulated(&self.residual))
    }
}

/// The modulation must stay within half the dealiased band for spectral
/// derivatives of modulated fields to be trustworthy.
fn check_resolvable(data: &OscillatoryData) -> Result<()> {
    let (_, sup_grad) = data.gradient_range_on_support();
    let limit = TAU * data.xi.grid.band() as f64 / 2.0;
    if data.lambda * sup_grad > limit {
        return Err(Error::config(format!(
            "frequency lambda = {:.3} with phase gradients up to {sup_grad:.3} exceeds half \
             the dealiased band ({limit:.3}) of the {}^3 grid",
            data.lambda,
            data.xi.grid.n
        )));
    }
    Ok(())
}

/// Run the envelope recursion to the requested order (`order >= 1`).
pub fn parametrix_expand(data: &OscillatoryData, order: usize) -> Result<ParametrixExpansion> {
    if order == 0 {
        return Err(Error::config("parametrix order must be at least 1"));
    }
    let mut terms = Vec::with_capacity(order);
    let mut u_k = data.u.clone();
    for _ in 0..order {
        let q_k = q_symbol_field(&data.grad_xi, &u_k)?;
        let mut next = div(&q_k.spectral()).physical();
        next.scale(-1.0);
        terms.push(q_k);
        u_k = next;
    }
    let mut residual = u_k;
    residual.scale(data.lambda.powi(-(order as i32)));
    Ok(ParametrixExpansion { order, terms, residual, lambda: data.lambda })
}

/// Expand until the weighted residual sup is at or below
/// `target_rel * sup|u|`, up to `order_cap`; error if the cap is reached
/// without meeting the target.
pub fn expand_to_target(
    data: &OscillatoryData,
    target_rel: f64,
    order_cap: usize,
) -> Result<ParametrixExpansion> {
    let sup_u = data.u.max_abs();
    for order in 1..=order_cap {
        let exp = parametrix_expand(data, order)?;
        if exp.residual_sup() <= target_rel * sup_u {
            return Ok(exp);
        }
    }
    Err(Error::numerical(format!(
        "parametrix residual did not reach {target_rel:.1e} of the data within order \
         {order_cap}; raise the frequency or the order cap"
    )))
}

/// Sup norm of the telescoping defect
/// `div(assembled) + e^{i lambda xi} residual - e^{i lambda xi} u`,
/// which vanishes identically in exact arithmetic.
pub fn telescoping_residual(
    data: &OscillatoryData,
    exp: &ParametrixExpansion,
) -> Result<f64> {
    let assembled = exp.assemble(data)?;
    let mut lhs = div(&assembled.spectral()).physical();
    lhs.add_scaled(&exp.assemble_residual(data)?, 1.0);
    lhs.add_scaled(&data.data_field(), -1.0);
    Ok(lhs.max_abs())
}
