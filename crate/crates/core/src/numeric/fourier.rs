use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::SampledSymbol;
use crate::error::{Error, Result};

/// Centered discrete Fourier transforms of length `n` (a multiple of 4):
/// `F[m] = Σ_k e^{∓2πi(m−n/2)(k−n/2)/n} f[k]`, unnormalized in both directions.
///
/// Equals `(−1)^m · FFT((−1)^k f)[m]`; the global factor `(−1)^{n/2}` is 1.
pub struct CenteredFft {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn alternate(buf: &mut [Complex64]) {
    for v in buf.iter_mut().skip(1).step_by(2) {
        *v = -*v;
    }
}

impl CenteredFft {
    pub fn new(n: usize) -> Self {
        assert!(n.is_multiple_of(4), "centered transform needs n divisible by 4");
        let mut planner = FftPlanner::new();
        CenteredFft { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In place, kernel `e^{−2πi(m−h)(k−h)/n}`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        alternate(buf);
        self.forward.process(buf);
        alternate(buf);
    }

    /// In place, kernel `e^{+2πi(m−h)(k−h)/n}`; no `1/n`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        alternate(buf);
        self.inverse.process(buf);
        alternate(buf);
    }

    /// Applies the momentum multiplier `A(p_m)` to `f`: `IDFT(A·DFT f)/n`.
    pub fn multiplier(&self, f: &[Complex64], symbol: impl Fn(usize) -> Complex64) -> Vec<Complex64> {
        let mut buf = f.to_vec();
        self.forward(&mut buf);
        for (m, v) in buf.iter_mut().enumerate() {
            *v *= symbol(m);
        }
        self.inverse(&mut buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|v| *v *= s);
        buf
    }
}

/// Discrete symplectic Fourier transform with `σ(z, z′) = p x′ − x p′`:
/// `a_σ[j][m] = (1/N) Σ_{k,l} e^{−2πi(m−h)(k−h)/N} e^{+2πi(j−h)(l−h)/N} a[k][l]`.
///
/// An exact involution on the grid.
pub fn symplectic_ft(a: &SampledSymbol) -> Result<SampledSymbol> {
    let n = a.grid.len();
    if a.values.len() != n * n {
        return Err(Error::Grid("symplectic transform needs a square grid".into()));
    }
    let fft = CenteredFft::new(n);
    // rows: inverse over the momentum index l -> j; stored as b[k][j]
    let mut b = a.values.clone();
    for row in b.chunks_mut(n) {
        fft.inverse(row);
    }
    // columns: forward over k -> m, written transposed into out[j][m]
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    let s = 1.0 / n as f64;
    for j in 0..n {
        for k in 0..n {
            col[k] = b[k * n + j];
        }
        fft.forward(&mut col);
        for m in 0..n {
            out[j * n + m] = col[m] * s;
        }
    }
    Ok(a.with_values(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::grid::UniformGrid;
    use std::f64::consts::PI;

    fn direct(f: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = f.len();
        let h = (n / 2) as f64;
        (0..n)
            .map(|m| {
                (0..n)
                    .map(|k| {
                        let ph = sign * 2.0 * PI * (m as f64 - h) * (k as f64 - h) / n as f64;
                        f[k] * Complex64::from_polar(1.0, ph)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let n = 32;
        let f: Vec<Complex64> = (0..n).map(|k| Complex64::new((k as f64).sin(), (k * k) as f64 * 0.01)).collect();
        let fft = CenteredFft::new(n);
        let mut a = f.clone();
        fft.forward(&mut a);
        let mut b = f.clone();
        fft.inverse(&mut b);
        for (x, y) in a.iter().zip(direct(&f, -1.0)) {
            assert!((x - y).norm() < 1e-11);
        }
        for (x, y) in b.iter().zip(direct(&f, 1.0)) {
            assert!((x - y).norm() < 1e-11);
        }
    }

    #[test]
    fn dense_symplectic_transform_agrees() {
        let g = UniformGrid::new(16, 4.0).unwrap();
        let a = SampledSymbol::from_fn(g, 1.0, |x, p| Complex64::new(x * x - p, x * p)).unwrap();
        let fast = symplectic_ft(&a).unwrap();
        let n = 16usize;
        let h = 8.0;
        for j in 0..n {
            for m in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    for l in 0..n {
                        let ph = 2.0 * PI / n as f64
                            * (-(m as f64 - h) * (k as f64 - h) + (j as f64 - h) * (l as f64 - h));
                        acc += a.get(k, l) * Complex64::from_polar(1.0, ph);
                    }
                }
                assert!((fast.get(j, m) - acc / n as f64).norm() < 1e-10);
            }
        }
    }
}
