//! Prescribed-energy bookkeeping: how closely the correction's kinetic
//! energy tracks the target profile over a wave lifespan.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fields::efld::write_field;
use crate::fields::{PeriodicField, Rank, Repr};
use crate::microstress::EnergyProfile;

use super::Correction;

/// Mean of `|V|^2` over the unit-volume torus (the kinetic energy carried by
/// the correction, up to the factor 1/2 which both sides of the comparison
/// omit).
pub fn kinetic_integral(v: &PeriodicField) -> Result<f64> {
    if v.rank != Rank::Vector || v.repr != Repr::Physical {
        return Err(Error::config("kinetic integral expects a physical vector field"));
    }
    let n = v.grid.len() as f64;
    let mut acc = 0.0;
    for c in 0..3 {
        for z in v.comp(c) {
            acc += z.re * z.re;
        }
    }
    Ok(acc / n)
}

/// Compare the correction energy against the prescribed profile on a set of
/// time slices.  Returns `(gap, gap_rate)`:
///
/// * `gap` — supremum over slices of `| integral |V|^2 dx - e(t) |`
///   (the profile is spatially constant, so its integral over the unit
///   torus is its value),
/// * `gap_rate` — supremum of the centred finite-difference time derivative
///   of the gap (zero when fewer than three slices are given).
pub fn energy_increment(
    slices: &[(f64, &PeriodicField)],
    profile: &EnergyProfile,
) -> Result<(f64, f64)> {
    if slices.is_empty() {
        return Err(Error::config("energy comparison needs at least one time slice"));
    }
    let mut gaps = Vec::with_capacity(slices.len());
    for (t, v) in slices {
        gaps.push((*t, kinetic_integral(v)? - profile.value(*t)));
    }
    let gap = gaps.iter().map(|(_, g)| g.abs()).fold(0.0, f64::max);
    let mut gap_rate = 0.0f64;
    for i in 1..gaps.len().saturating_sub(1) {
        let (t0, g0) = gaps[i - 1];
        let (t1, g1) = gaps[i + 1];
        let dt = t1 - t0;
        if dt.abs() > 0.0 {
            gap_rate = gap_rate.max(((g1 - g0) / dt).abs());
        }
    }
    Ok((gap, gap_rate))
}

/// Render the slice-by-slice energy comparison as CSV
/// (`t,kinetic,target,gap` per row).
pub fn energy_increment_csv(
    slices: &[(f64, &PeriodicField)],
    profile: &EnergyProfile,
) -> Result<String> {
    let mut out = String::from("t,kinetic,target,gap\n");
    for (t, v) in slices {
        let k = kinetic_integral(v)?;
        let e = profile.value(*t);
        writeln!(out, "{t:.12e},{k:.12e},{e:.12e},{:.12e}", k - e)
            .expect("formatting into a string cannot fail");
    }
    Ok(out)
}

/// Write the assembled fields of one correction (and optionally its
/// pressure) to `<dir>/<stem>_{v,w,p}.efld`.
pub fn dump_correction(
    c: &Correction,
    pressure: Option<&PeriodicField>,
    dir: &Path,
    stem: &str,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let write = |name: &str, f: &PeriodicField| -> Result<()> {
        let path = dir.join(format!("{stem}_{name}.efld"));
        let file = std::fs::File::create(&path)?;
        write_field(f, &mut std::io::BufWriter::new(file), false)
    };
    write("v", &c.v)?;
    write("w", &c.w)?;
    if let Some(p) = pressure {
        write("p", p)?;
    }
    Ok(())
}
