//! Composite trapezoid rules and FFT-backed discrete convolution.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Below this length product the direct O(n·m) sum is used.
const DIRECT_CONVOLUTION_LIMIT: usize = 1 << 14;

/// Full linear convolution `c[k] = Σ_i a[i] b[k - i]`, length `a.len() + b.len() - 1`.
pub fn linear_convolution(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 32 || a.len() * b.len() <= DIRECT_CONVOLUTION_LIMIT {
        let mut out = vec![0.0; out_len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (k, &y) in b.iter().enumerate() {
                out[i + k] += x * y;
            }
        }
        return out;
    }

    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    // Pack a and b into the real and imaginary parts of one transform.
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    for (i, &x) in a.iter().enumerate() {
        buf[i].re = x;
    }
    for (i, &y) in b.iter().enumerate() {
        buf[i].im = y;
    }
    fwd.process(&mut buf);
    let mut prod = vec![Complex64::new(0.0, 0.0); size];
    for k in 0..size {
        let z = buf[k];
        let zc = buf[(size - k) % size].conj();
        let fa = (z + zc) * 0.5;
        let fb = (z - zc) * Complex64::new(0.0, -0.5);
        prod[k] = fa * fb;
    }
    inv.process(&mut prod);
    let scale = 1.0 / size as f64;
    prod.iter().take(out_len).map(|z| z.re * scale).collect()
}

/// Composite trapezoid approximation of `∫_0^{mh} a(mh - x) b(x) dx` for
/// every `m = 0..len`, where `a[k] = a(kh)` and `b[k] = b(kh)`.
pub fn causal_trapezoid_convolution(a: &[f64], b: &[f64], h: f64) -> Vec<f64> {
    let len = a.len().min(b.len());
    if len == 0 {
        return Vec::new();
    }
    let full = linear_convolution(&a[..len], &b[..len]);
    (0..len)
        .map(|m| {
            if m == 0 {
                0.0
            } else {
                h * (full[m] - 0.5 * (a[m] * b[0] + a[0] * b[m]))
            }
        })
        .collect()
}

/// Trapezoid rule over equally spaced samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (k, y) in b.iter().enumerate() {
                out[i + k] += x * y;
            }
        }
        out
    }

    #[test]
    fn fft_path_matches_direct_sum() {
        let a: Vec<f64> = (0..700)
            .map(|i| ((i * 37 % 101) as f64 - 50.0) / 17.0)
            .collect();
        let b: Vec<f64> = (0..500)
            .map(|i| ((i * 53 % 89) as f64 - 44.0) / 13.0)
            .collect();
        let fast = linear_convolution(&a, &b);
        let slow = direct(&a, &b);
        assert_eq!(fast.len(), slow.len());
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn trapezoid_convolution_of_exponential_with_one() {
        // ∫_0^t e^{-(t-x)} dx = 1 - e^{-t}
        let h = 1e-3;
        let a: Vec<f64> = (0..=2000).map(|k| (-(k as f64) * h).exp()).collect();
        let b = vec![1.0; 2001];
        let c = causal_trapezoid_convolution(&a, &b, h);
        assert_eq!(c[0], 0.0);
        let expected = 1.0 - (-2.0f64).exp();
        assert!((c[2000] - expected).abs() < 1e-6);
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let h = 0.25;
        let vals: Vec<f64> = (0..=8).map(|k| k as f64 * h).collect();
        assert!((trapezoid(&vals, h) - 2.0).abs() < 1e-15);
    }
}
