//! Fourier collocation on the unit circle with an odd number of nodes.

use std::f64::consts::PI;

/// Entry (j, k) of the spectral differentiation matrix on `n` (odd) uniform
/// nodes of [0, 1). Antisymmetric with zero diagonal.
pub fn diff_entry(n: usize, j: usize, k: usize) -> f64 {
    if j == k {
        return 0.0;
    }
    let d = j as i64 - k as i64;
    let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * PI / (PI * d as f64 / n as f64).sin()
}

/// Trigonometric interpolant of uniformly sampled scalar data (odd sample
/// count), evaluated through its real Fourier coefficients.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    a0: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigInterpolant {
    pub fn new(samples: &[f64]) -> Self {
        let n = samples.len();
        let m = (n - 1) / 2;
        let a0 = samples.iter().sum::<f64>() / n as f64;
        let mut cos = Vec::with_capacity(m);
        let mut sin = Vec::with_capacity(m);
        for mode in 1..=m {
            let (mut c, mut s) = (0.0, 0.0);
            for (j, f) in samples.iter().enumerate() {
                let arg = 2.0 * PI * (mode * j) as f64 / n as f64;
                c += f * arg.cos();
                s += f * arg.sin();
            }
            cos.push(2.0 * c / n as f64);
            sin.push(2.0 * s / n as f64);
        }
        TrigInterpolant { a0, cos, sin }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut v = self.a0;
        for (i, (c, s)) in self.cos.iter().zip(&self.sin).enumerate() {
            let arg = 2.0 * PI * (i + 1) as f64 * t;
            v += c * arg.cos() + s * arg.sin();
        }
        v
    }

    /// Derivative-free bound on |f| used for spectral window margins.
    pub fn sup_bound(&self) -> f64 {
        self.a0.abs() + self.cos.iter().zip(&self.sin).map(|(c, s)| c.hypot(*s)).sum::<f64>()
    }
}
