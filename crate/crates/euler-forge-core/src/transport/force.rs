//! The force felt by the smoothed velocity, and the commutator measuring
//! how far smoothing fails to commute with the quadratic nonlinearity.
//!
//! For a triple `(v, p, R)` satisfying the balance law
//! `d_t v + div(v x v) + grad p = div R`, the doubly smoothed velocity obeys
//!
//! ```text
//!   (d_t + v_eps . grad) v_eps = S[-grad p + div R] + Q,
//!   Q = v_eps . grad v_eps - S[v . grad v],
//! ```
//!
//! where `S` is the double spatial smoothing.  `Q` is computed exactly on
//! the grid; it vanishes for constant velocities and shrinks at least
//! linearly in the smoothing length on smooth data.

use crate::error::{Error, Result};
use crate::fields::{
    derivative, div, double_mollify, grad, MomentKernel, PeriodicField, Rank, Repr,
};

/// Output of [`coarse_force`].
pub struct CoarseForce {
    /// Doubly smoothed velocity.
    pub velocity: PeriodicField,
    /// Total force on the smoothed velocity: smoothed stress/pressure
    /// gradients plus the commutator.
    pub force: PeriodicField,
    /// The smoothing commutator `Q`.
    pub commutator: PeriodicField,
}

/// Advective derivative `(v . grad) v`, computed pointwise on the grid with
/// spectral gradients.
fn advective(v: &PeriodicField) -> PeriodicField {
    let vp = v.physical();
    let dv: Vec<PeriodicField> = (0..3).map(|j| derivative(v, j).physical()).collect();
    let mut out = PeriodicField::zeros(v.grid, Rank::Vector);
    out.repr = Repr::Physical;
    out.time_tag = v.time_tag;
    for l in 0..3 {
        let o = out.comp_mut(l);
        for j in 0..3 {
            let vj = vp.comp(j);
            let dl = dv[j].comp(l);
            for i in 0..o.len() {
                o[i] += vj[i] * dl[i];
            }
        }
    }
    out
}

/// Assemble the smoothed-velocity force and the smoothing commutator for
/// one time slice of a balance-law triple.
pub fn coarse_force(
    v: &PeriodicField,
    p: &PeriodicField,
    r: &PeriodicField,
    kernel: &MomentKernel,
) -> Result<CoarseForce> {
    if v.rank != Rank::Vector || p.rank != Rank::Scalar || r.rank != Rank::SymTensor {
        return Err(Error::precondition(
            "coarse force expects (vector velocity, scalar pressure, symmetric stress)",
        ));
    }
    if v.grid != p.grid || v.grid != r.grid {
        return Err(Error::precondition("coarse force inputs live on different grids"));
    }
    let v_eps = double_mollify(v, kernel);
    let q = {
        let mut q = advective(&v_eps);
        q.add_scaled(&double_mollify(&advective(v), kernel), -1.0);
        q
    };
    let mut bulk = div(r);
    bulk.add_scaled(&grad(p), -1.0);
    let mut force = double_mollify(&bulk, kernel);
    force.add_scaled(&q, 1.0);
    force.time_tag = v.time_tag;
    Ok(CoarseForce { velocity: v_eps, force, commutator: q })
}
