//! Small Lagrange interpolation helper: value and derivative weights for a
//! fixed set of distinct nodes.

/// Compute Lagrange basis values `L_n(t)` and derivatives `L_n'(t)` at `t`
/// for the given nodes. `N` is small (the pipeline uses 5).
pub fn lagrange_weights<const N: usize>(nodes: &[f64; N], t: f64) -> ([f64; N], [f64; N]) {
    let mut vals = [0.0f64; N];
    let mut ders = [0.0f64; N];
    for n in 0..N {
        // L_n(t) = prod_{m != n} (t - t_m) / (t_n - t_m)
        let mut v = 1.0;
        for m in 0..N {
            if m != n {
                v *= (t - nodes[m]) / (nodes[n] - nodes[m]);
            }
        }
        vals[n] = v;
        // L_n'(t) = sum_{k != n} (1/(t_n - t_k)) prod_{m != n,k} (t - t_m)/(t_n - t_m)
        let mut d = 0.0;
        for k in 0..N {
            if k == n {
                continue;
            }
            let mut p = 1.0 / (nodes[n] - nodes[k]);
            for m in 0..N {
                if m != n && m != k {
                    p *= (t - nodes[m]) / (nodes[n] - nodes[m]);
                }
            }
            d += p;
        }
        ders[n] = d;
    }
    (vals, ders)
}
