//! Trigonometric interpolation of periodic samples on a uniform grid.

use num_complex::Complex64;
use rustfft::FftPlanner;

fn forward(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let inv_n = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= inv_n);
    buf
}

fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    FftPlanner::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    buf
}

/// Signed wavenumber of FFT bin `k` for an `n`-point transform.
fn wavenumber(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Derivative with respect to the parameter `θ ∈ [0, 2π)` of uniformly
/// sampled periodic data. The Nyquist mode is dropped for even `n`.
pub fn derivative(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut c = forward(samples);
    for (k, ck) in c.iter_mut().enumerate() {
        if n % 2 == 0 && k == n / 2 {
            *ck = Complex64::new(0.0, 0.0);
        } else {
            *ck *= Complex64::new(0.0, wavenumber(k, n) as f64);
        }
    }
    inverse(&c)
}

/// Band-limited interpolation of `samples` onto a grid `factor` times finer.
/// The coarse nodes are reproduced at indices `0, factor, 2·factor, ...`.
pub fn upsample(samples: &[Complex64], factor: usize) -> Vec<Complex64> {
    let n = samples.len();
    if factor <= 1 {
        return samples.to_vec();
    }
    let m = n * factor;
    let c = forward(samples);
    let mut fine = vec![Complex64::new(0.0, 0.0); m];
    for (k, &ck) in c.iter().enumerate() {
        if n % 2 == 0 && k == n / 2 {
            // split the Nyquist coefficient symmetrically
            fine[k] += ck * 0.5;
            fine[m - k] += ck * 0.5;
            continue;
        }
        let w = wavenumber(k, n);
        let idx = if w >= 0 {
            w as usize
        } else {
            (m as i64 + w) as usize
        };
        fine[idx] = ck;
    }
    inverse(&fine)
}

/// Magnitude of the highest resolved Fourier modes relative to the largest,
/// a cheap resolution diagnostic.
pub fn tail_ratio(samples: &[Complex64]) -> f64 {
    let n = samples.len();
    let c = forward(samples);
    let max = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    let tail = c
        .iter()
        .enumerate()
        .filter(|(k, _)| wavenumber(*k, n).unsigned_abs() as usize >= n / 4)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    tail / max
}
