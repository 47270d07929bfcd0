use num_complex::Complex64;
use num_traits::Zero;

use super::fourier::CenteredFft;
use super::grid::{SampledSymbol, SampledWavefunction};
use crate::error::{Error, Result};

fn check_shift(psi: &SampledWavefunction, x0: f64, p0: f64) -> Result<()> {
    if !(x0.is_finite() && p0.is_finite()) {
        return Err(Error::NonFinite("phase-space shift".into()));
    }
    let half = psi.grid.length() / 2.0;
    if x0.abs() >= half {
        return Err(Error::Parameter(format!("shift |x0| = {} reaches half the box {half}", x0.abs())));
    }
    Ok(())
}

/// `ψ(x − s)` by the band-limited (spectral) shift on the periodic grid.
fn translate(psi: &SampledWavefunction, s: f64) -> Vec<Complex64> {
    let fft = CenteredFft::new(psi.grid.len());
    let ps = psi.grid.ps(psi.hbar);
    fft.multiplier(&psi.values, |m| Complex64::from_polar(1.0, -ps[m] * s / psi.hbar))
}

/// `T(z₀)ψ(x) = e^{(i/ħ)(p₀x − p₀x₀/2)} ψ(x − x₀)`.
pub fn heisenberg_shift(psi: &SampledWavefunction, x0: f64, p0: f64) -> Result<SampledWavefunction> {
    check_shift(psi, x0, p0)?;
    let shifted = translate(psi, x0);
    let hbar = psi.hbar;
    let xs = psi.grid.xs();
    Ok(psi.with_values(
        shifted
            .iter()
            .zip(&xs)
            .map(|(v, &x)| v * Complex64::from_polar(1.0, (p0 * x - 0.5 * p0 * x0) / hbar))
            .collect(),
    ))
}

/// Parity `ψ(x) ↦ ψ(−x)`; grid index `k ↦ (N − k) mod N`.
pub fn reflect(psi: &SampledWavefunction) -> SampledWavefunction {
    let n = psi.grid.len();
    psi.with_values((0..n).map(|k| psi.values[(n - k) % n]).collect())
}

/// `T(z₀) Π T(z₀)⁻¹ ψ`, equal to `e^{2ip₀(x − x₀)/ħ} ψ(2x₀ − x)`.
pub fn grossmann_royer_apply(psi: &SampledWavefunction, x0: f64, p0: f64) -> Result<SampledWavefunction> {
    let back = heisenberg_shift(psi, -x0, -p0)?;
    heisenberg_shift(&reflect(&back), x0, p0)
}

/// Weyl operator as the superposition `(1/πħ) ∫ a(z₀) Π̂(z₀) dz₀` on the grid.
///
/// Only reflection centres with `2x₀ − x` inside the box contribute, so the
/// samples of `ψ` used have stride two: `a` and `ψ` must be band-limited to
/// half the momentum window.
pub fn weyl_via_reflections(a: &SampledSymbol, psi: &SampledWavefunction) -> Result<SampledWavefunction> {
    a.compatible(psi)?;
    let n = psi.grid.len();
    let h = n / 2;
    let fft = CenteredFft::new(n);
    // kernels[j][l] = Σ_m a(x_j, p_m) e^{2πi(m−h)(l−h)/N}
    let mut kernels = a.values.clone();
    for row in kernels.chunks_mut(n) {
        fft.inverse(row);
    }
    let scale = 2.0 / n as f64;
    let mut out = vec![Complex64::zero(); n];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::zero();
        // 0 ≤ 2j − k < N
        for j in k.div_ceil(2)..(k + n).div_ceil(2) {
            let d = (2 * (k as isize - j as isize)).rem_euclid(n as isize) as usize;
            acc += kernels[j * n + (d + h) % n] * psi.values[2 * j - k];
        }
        *slot = acc * scale;
    }
    Ok(psi.with_values(out))
}
