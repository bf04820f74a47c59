//! Three-dimensional complex FFT on the flat `z`-fastest layout.
//!
//! Plans are cached per grid size.  The forward transform is unnormalized;
//! the inverse applies the `1/n^3` factor, so `ifft3(fft3(u)) == u`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::grid::GridSpec;

struct AxisPlans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

static PLAN_CACHE: Lazy<Mutex<HashMap<usize, Arc<AxisPlans>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn plans_for(n: usize) -> Arc<AxisPlans> {
    let mut cache = PLAN_CACHE.lock().expect("fft plan cache poisoned");
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(AxisPlans {
                forward: planner.plan_fft(n, FftDirection::Forward),
                inverse: planner.plan_fft(n, FftDirection::Inverse),
            })
        })
        .clone()
}

fn transform_axes(grid: &GridSpec, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
    let n = grid.n;
    assert_eq!(data.len(), grid.len(), "field length does not match grid");
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // z axis: the whole cube is n^2 contiguous lines of length n.
    fft.process_with_scratch(data, &mut scratch);

    // y axis: stride-n lines, gathered into a contiguous buffer.
    let mut line = vec![Complex64::default(); n];
    for ix in 0..n {
        for iz in 0..n {
            let base = ix * n * n + iz;
            for iy in 0..n {
                line[iy] = data[base + iy * n];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for iy in 0..n {
                data[base + iy * n] = line[iy];
            }
        }
    }

    // x axis: stride-n^2 lines.
    for iy in 0..n {
        for iz in 0..n {
            let base = iy * n + iz;
            for ix in 0..n {
                line[ix] = data[base + ix * n * n];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for ix in 0..n {
                data[base + ix * n * n] = line[ix];
            }
        }
    }
}

/// In-place forward 3-d FFT (unnormalized).
pub fn fft3(grid: &GridSpec, data: &mut [Complex64]) {
    let plans = plans_for(grid.n);
    transform_axes(grid, data, &plans.forward);
}

/// In-place inverse 3-d FFT, normalized by `1/n^3`.
pub fn ifft3(grid: &GridSpec, data: &mut [Complex64]) {
    let plans = plans_for(grid.n);
    transform_axes(grid, data, &plans.inverse);
    let scale = 1.0 / grid.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}
