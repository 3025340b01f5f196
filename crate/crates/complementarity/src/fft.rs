//! Cached FFT planners shared across the crate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Cache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut map = cache().lock().unwrap();
    map.entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

pub fn forward(buf: &mut [Complex64]) {
    plan(buf.len(), false).process(buf);
}

/// Inverse FFT including the 1/N normalization, so `inverse(forward(x)) = x`.
pub fn inverse(buf: &mut [Complex64]) {
    plan(buf.len(), true).process(buf);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Momentum-space frequencies in FFT ordering for a grid of spacing `dx`:
/// `p_j = 2π j / (N dx)` with `j ∈ {0, 1, …, N/2−1, −N/2, …, −1}`.
pub fn momenta(n: usize, dx: f64) -> Vec<f64> {
    let dp = 2.0 * std::f64::consts::PI / (n as f64 * dx);
    (0..n)
        .map(|j| {
            let j = if j <= n / 2 - 1 { j as i64 } else { j as i64 - n as i64 };
            j as f64 * dp
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_identity() {
        let n = 256;
        let orig: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.1).sin(), (i as f64 * 0.07).cos()))
            .collect();
        let mut buf = orig.clone();
        forward(&mut buf);
        inverse(&mut buf);
        for (a, b) in orig.iter().zip(&buf) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn momenta_ordering() {
        let p = momenta(8, 1.0);
        let dp = 2.0 * std::f64::consts::PI / 8.0;
        assert!((p[0] - 0.0).abs() < 1e-15);
        assert!((p[3] - 3.0 * dp).abs() < 1e-12);
        assert!((p[4] + 4.0 * dp).abs() < 1e-12);
        assert!((p[7] + dp).abs() < 1e-12);
    }
}
