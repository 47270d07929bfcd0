use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use super::fourier::CenteredFft;
use super::grid::{SampledSymbol, SampledWavefunction, UniformGrid};
use crate::error::{Error, Result};

fn require_unit_hbar(hbar: f64) -> Result<()> {
    if hbar != 1.0 {
        return Err(Error::Unsupported(format!("coherent-state operators are defined for hbar = 1, got {hbar}")));
    }
    Ok(())
}

/// `e^{−d²/2}` with `d` the periodic minimum-image distance from `x` to each grid point.
fn window(grid: &UniformGrid, x: f64) -> Vec<f64> {
    let l = grid.length();
    (0..grid.len())
        .map(|k| {
            let d = grid.x(k) - x;
            let d = d - l * (d / l).round();
            (-0.5 * d * d).exp()
        })
        .collect()
}

/// `∫ a(z) ⟨ψ, Φ_z⟩ Φ_z dz` with `Φ_z(t) = π^{−1/4} e^{itp} e^{−(t−x)²/2}`.
///
/// The constant symbol gives `2π·ψ`.
pub fn antiwick_apply(a: &SampledSymbol, psi: &SampledWavefunction) -> Result<SampledWavefunction> {
    require_unit_hbar(psi.hbar)?;
    a.compatible(psi)?;
    let grid = psi.grid;
    let n = grid.len();
    let fft = CenteredFft::new(n);
    let (dx, dp) = (grid.dx(), grid.dp(1.0));
    let norm = PI.powf(-0.25);
    let mut out = vec![Complex64::zero(); n];
    let mut buf = vec![Complex64::zero(); n];
    for j in 0..n {
        let row = a.row(j);
        if row.iter().all(|v| v.is_zero()) {
            continue;
        }
        let w = window(&grid, grid.x(j));
        for k in 0..n {
            buf[k] = psi.values[k] * w[k];
        }
        // buf[m] = ⟨ψ, Φ_{(x_j, p_m)}⟩ / (dx·π^{−1/4})
        fft.forward(&mut buf);
        for (v, s) in buf.iter_mut().zip(row) {
            *v *= s;
        }
        fft.inverse(&mut buf);
        for k in 0..n {
            out[k] += buf[k] * w[k];
        }
    }
    let scale = dx * dp * norm * norm * dx;
    Ok(psi.with_values(out.into_iter().map(|v| v * scale).collect()))
}

/// Direct O(N⁴) quadrature of the anti-Wick operator without periodic images.
pub fn antiwick_dense(a: &SampledSymbol, psi: &SampledWavefunction) -> Result<SampledWavefunction> {
    require_unit_hbar(psi.hbar)?;
    a.compatible(psi)?;
    let grid = psi.grid;
    let n = grid.len();
    let xs = grid.xs();
    let ps = grid.ps(1.0);
    let (dx, dp) = (grid.dx(), grid.dp(1.0));
    let norm = PI.powf(-0.25);
    let phi = |x: f64, p: f64, t: f64| Complex64::from_polar(norm * (-0.5 * (t - x) * (t - x)).exp(), t * p);
    let mut out = vec![Complex64::zero(); n];
    for (j, &x) in xs.iter().enumerate() {
        for (m, &p) in ps.iter().enumerate() {
            let weight = a.get(j, m);
            if weight.is_zero() {
                continue;
            }
            let coeff: Complex64 = xs.iter().zip(&psi.values).map(|(&t, v)| v * phi(x, p, t).conj()).sum::<Complex64>() * dx;
            for (k, &t) in xs.iter().enumerate() {
                out[k] += weight * coeff * phi(x, p, t) * dx * dp;
            }
        }
    }
    Ok(psi.with_values(out))
}

/// `‖Op_AW(⟨z⟩^s) ψ‖` with `⟨z⟩ = (1 + x² + p²)^{1/2}`.
pub fn q_norm_estimate(psi: &SampledWavefunction, s: f64) -> Result<f64> {
    require_unit_hbar(psi.hbar)?;
    if !s.is_finite() {
        return Err(Error::NonFinite("Sobolev exponent".into()));
    }
    let weight = SampledSymbol::from_fn(psi.grid, 1.0, |x, p| Complex64::new((1.0 + x * x + p * p).powf(0.5 * s), 0.0))?;
    Ok(antiwick_apply(&weight, psi)?.norm())
}
