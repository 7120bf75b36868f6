use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward transform, `X_k = Σ x_n e^{-2πikn/K}`.
pub(crate) fn forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

fn inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Below this many terms in the shorter operand the schoolbook product wins.
const DIRECT_LIMIT: usize = 48;

/// First `out_len` coefficients of the product of `a` and `b`.
pub(crate) fn convolve(a: &[Complex64], b: &[Complex64], out_len: usize) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() || out_len == 0 {
        return vec![Complex64::new(0.0, 0.0); out_len];
    }
    if a.len().min(b.len()) <= DIRECT_LIMIT {
        return convolve_direct(a, b, out_len);
    }
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    let full = a.len() + b.len() - 1;
    let size = full.next_power_of_two();
    let mut fa = vec![Complex64::new(0.0, 0.0); size];
    let mut fb = vec![Complex64::new(0.0, 0.0); size];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    forward(&mut fa);
    forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inverse(&mut fa);
    let scale = 1.0 / size as f64;
    let mut out: Vec<Complex64> = fa
        .into_iter()
        .take(full.min(out_len))
        .map(|c| c * scale)
        .collect();
    out.resize(out_len, Complex64::new(0.0, 0.0));
    out
}

pub(crate) fn convolve_direct(a: &[Complex64], b: &[Complex64], out_len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); out_len];
    for (i, &x) in a.iter().enumerate().take(out_len) {
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(out_len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_product_matches_direct() {
        let a: Vec<Complex64> = (0..300)
            .map(|k| Complex64::new((k as f64).sin(), 0.3 * k as f64 / 300.0))
            .collect();
        let b: Vec<Complex64> = (0..200)
            .map(|k| Complex64::new(1.0 / (1.0 + k as f64), (k as f64).cos()))
            .collect();
        let fast = convolve(&a, &b, 450);
        let slow = convolve_direct(&a, &b, 450);
        let err = fast
            .iter()
            .zip(&slow)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }
}
