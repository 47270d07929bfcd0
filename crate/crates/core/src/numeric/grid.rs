use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::SymbolPoly;

/// Periodic grid of `n` points on `[-L/2, L/2)`, with `x_k = (k − n/2)·L/n`.
///
/// The dual momentum grid has spacing `2πħ/L` and the same number of points,
/// `p_m = (m − n/2)·2πħ/L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformGrid {
    n: usize,
    length: f64,
}

impl UniformGrid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < Self::MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::Grid(format!("N = {n} must be a power of two and at least {}", Self::MIN_POINTS)));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Grid(format!("box length {length} must be positive and finite")));
        }
        Ok(UniformGrid { n, length })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        (k as f64 - self.half() as f64) * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.x(k)).collect()
    }

    pub fn dp(&self, hbar: f64) -> f64 {
        2.0 * PI * hbar / self.length
    }

    pub fn p(&self, m: usize, hbar: f64) -> f64 {
        (m as f64 - self.half() as f64) * self.dp(hbar)
    }

    pub fn ps(&self, hbar: f64) -> Vec<f64> {
        (0..self.n).map(|m| self.p(m, hbar)).collect()
    }

    /// Largest representable momentum `πħN/L`.
    pub fn p_max(&self, hbar: f64) -> f64 {
        self.half() as f64 * self.dp(hbar)
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("hbar = {hbar} must be positive")))
    }
}

fn check_finite(values: &[Complex64], what: &str) -> Result<()> {
    match values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        Some(k) => Err(Error::NonFinite(format!("{what} sample {k}"))),
        None => Ok(()),
    }
}

/// Wave function sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledWavefunction {
    pub grid: UniformGrid,
    pub hbar: f64,
    pub values: Vec<Complex64>,
}

impl SampledWavefunction {
    pub fn new(grid: UniformGrid, hbar: f64, values: Vec<Complex64>) -> Result<Self> {
        check_hbar(hbar)?;
        if values.len() != grid.len() {
            return Err(Error::Grid(format!("{} samples for a grid of {}", values.len(), grid.len())));
        }
        check_finite(&values, "wave function")?;
        Ok(SampledWavefunction { grid, hbar, values })
    }

    pub fn from_fn(grid: UniformGrid, hbar: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, hbar, grid.xs().into_iter().map(f).collect())
    }

    /// Ground state `(πħ)^{-1/4} e^{−x²/2ħ}`.
    pub fn gaussian(grid: UniformGrid, hbar: f64) -> Result<Self> {
        Self::hermite(grid, hbar, 0)
    }

    /// Normalized Hermite function of order `k`, via the three-term recurrence.
    pub fn hermite(grid: UniformGrid, hbar: f64, k: usize) -> Result<Self> {
        check_hbar(hbar)?;
        let scale = hbar.powf(-0.25);
        Self::from_fn(grid, hbar, |x| {
            let u = x / hbar.sqrt();
            let mut prev = 0.0;
            let mut cur = PI.powf(-0.25) * (-0.5 * u * u).exp();
            for j in 0..k {
                let next = (2.0 / (j + 1) as f64).sqrt() * u * cur - (j as f64 / (j + 1) as f64).sqrt() * prev;
                prev = cur;
                cur = next;
            }
            Complex64::new(scale * cur, 0.0)
        })
    }

    pub fn zeros_like(&self) -> Self {
        SampledWavefunction { grid: self.grid, hbar: self.hbar, values: vec![Complex64::zero(); self.values.len()] }
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Self {
        SampledWavefunction { grid: self.grid, hbar: self.hbar, values }
    }

    /// `⟨self, other⟩ = Δ Σ conj(selfₖ) otherₖ`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.grid.dx()
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.with_values(self.values.iter().map(|v| v * c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect())
    }

    /// `‖self − reference‖ / ‖reference‖`.
    pub fn relative_error(&self, reference: &Self) -> f64 {
        self.sub(reference).norm() / reference.norm()
    }

    /// Largest magnitude among the outermost 1/32 of samples on each side.
    pub fn boundary_magnitude(&self) -> f64 {
        let edge = (self.values.len() / 32).max(1);
        let n = self.values.len();
        self.values[..edge].iter().chain(&self.values[n - edge..]).map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn warn_if_not_decaying(&self, tolerance: f64) {
        let b = self.boundary_magnitude();
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if b > tolerance * peak.max(f64::MIN_POSITIVE) {
            log::warn!("wave function reaches {b:.3e} at the box boundary; periodic wrap-around may distort results");
        }
    }

    pub fn compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.hbar != other.hbar {
            return Err(Error::Incompatible("wave functions live on different grids".into()));
        }
        Ok(())
    }
}

/// Flat-top window `w(x)·w(p)`: 1 for `|t| ≤ flat`, 0 for `|t| ≥ zero`, joined
/// by an erfc ramp whose ends are below double precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taper {
    pub x_flat: f64,
    pub x_zero: f64,
    pub p_flat: f64,
    pub p_zero: f64,
}

/// Ramp width in units of the erfc scale; `erfc(5.9) < 1e−16`.
const RAMP_SCALES: f64 = 11.8;

fn ramp(t: f64, flat: f64, zero: f64) -> f64 {
    let t = t.abs();
    if t <= flat {
        1.0
    } else if t >= zero {
        0.0
    } else {
        let mid = 0.5 * (flat + zero);
        let s = (zero - flat) / RAMP_SCALES;
        0.5 * libm::erfc((t - mid) / s)
    }
}

impl Taper {
    /// Flat over 70% of the position half-box and half the momentum range.
    pub fn for_grid(grid: &UniformGrid, hbar: f64) -> Self {
        let xh = 0.5 * grid.length();
        let ph = grid.p_max(hbar);
        Taper { x_flat: 0.7 * xh, x_zero: 0.98 * xh, p_flat: 0.5 * ph, p_zero: 0.95 * ph }
    }

    /// Narrow momentum support for routes that alias beyond half the momentum
    /// range.
    pub fn half_band(grid: &UniformGrid, hbar: f64) -> Self {
        let ph = grid.p_max(hbar);
        Taper { p_flat: 0.2 * ph, p_zero: 0.45 * ph, ..Self::for_grid(grid, hbar) }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 <= self.x_flat && self.x_flat < self.x_zero && 0.0 <= self.p_flat && self.p_flat < self.p_zero;
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("invalid taper {self:?}")))
        }
    }

    pub fn weight(&self, x: f64, p: f64) -> f64 {
        ramp(x, self.x_flat, self.x_zero) * ramp(p, self.p_flat, self.p_zero)
    }
}

/// Symbol sampled on the square phase-space grid; `values[j·N + m] = a(x_j, p_m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSymbol {
    pub grid: UniformGrid,
    pub hbar: f64,
    pub values: Vec<Complex64>,
}

impl SampledSymbol {
    pub fn new(grid: UniformGrid, hbar: f64, values: Vec<Complex64>) -> Result<Self> {
        check_hbar(hbar)?;
        if values.len() != grid.len() * grid.len() {
            return Err(Error::Grid(format!(
                "{} samples for a {}x{} phase-space grid",
                values.len(),
                grid.len(),
                grid.len()
            )));
        }
        check_finite(&values, "symbol")?;
        Ok(SampledSymbol { grid, hbar, values })
    }

    pub fn from_fn(grid: UniformGrid, hbar: f64, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let xs = grid.xs();
        let ps = grid.ps(hbar);
        let mut values = Vec::with_capacity(xs.len() * ps.len());
        for &x in &xs {
            for &p in &ps {
                values.push(f(x, p));
            }
        }
        Self::new(grid, hbar, values)
    }

    /// Samples a one-dimensional, τ-free polynomial symbol times the window.
    pub fn from_poly(a: &SymbolPoly, grid: UniformGrid, hbar: f64, taper: &Taper) -> Result<Self> {
        if a.dim() != 1 {
            return Err(Error::Unsupported("numeric symbols are one-dimensional".into()));
        }
        if !a.is_tau_free() {
            return Err(Error::FormalTau("sampling a symbol carrying tau"));
        }
        taper.validate()?;
        // monomial evaluation by powers keeps this O(N² · terms)
        let terms: Vec<(i32, i32, Complex64)> = a
            .terms()
            .map(|(e, c)| (e.0[0] as i32, e.0[1] as i32, c.to_complex(hbar).expect("tau-free")))
            .collect();
        Self::from_fn(grid, hbar, |x, p| {
            let w = taper.weight(x, p);
            if w == 0.0 {
                return Complex64::zero();
            }
            terms.iter().map(|&(r, s, c)| c * x.powi(r) * p.powi(s)).sum::<Complex64>() * w
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, j: usize, m: usize) -> Complex64 {
        self.values[j * self.grid.len() + m]
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.values[j * n..(j + 1) * n]
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Self {
        SampledSymbol { grid: self.grid, hbar: self.hbar, values }
    }

    pub fn map(&self, f: impl Fn(f64, f64, Complex64) -> Complex64) -> Self {
        let n = self.grid.len();
        let mut values = Vec::with_capacity(n * n);
        for j in 0..n {
            let x = self.grid.x(j);
            for m in 0..n {
                values.push(f(x, self.grid.p(m, self.hbar), self.get(j, m)));
            }
        }
        self.with_values(values)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx() * self.grid.dp(self.hbar)).sqrt()
    }

    pub fn compatible(&self, psi: &SampledWavefunction) -> Result<()> {
        if self.grid != psi.grid || self.hbar != psi.hbar {
            return Err(Error::Incompatible(format!(
                "symbol on N={}, L={}, hbar={} vs wave function on N={}, L={}, hbar={}",
                self.grid.len(),
                self.grid.length(),
                self.hbar,
                psi.grid.len(),
                psi.grid.length(),
                psi.hbar
            )));
        }
        Ok(())
    }
}

/// Numeric parameters shared by the grid routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericParams {
    pub hbar: f64,
    pub quadrature: usize,
    pub tolerance: f64,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams { hbar: 1.0, quadrature: 16, tolerance: 1e-8 }
    }
}

impl NumericParams {
    pub fn validate(&self) -> Result<()> {
        check_hbar(self.hbar)?;
        if self.quadrature < 2 {
            return Err(Error::Parameter(format!("quadrature order {} is below 2", self.quadrature)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::Parameter(format!("tolerance {} must be positive", self.tolerance)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(UniformGrid::new(512, 20.0).is_ok());
        assert!(UniformGrid::new(8, 20.0).is_err());
        assert!(UniformGrid::new(100, 20.0).is_err());
        assert!(UniformGrid::new(64, 0.0).is_err());
    }

    #[test]
    fn self_dual_spacing() {
        let g = UniformGrid::new(64, 10.0).unwrap();
        let hbar = 0.7;
        assert!((g.dx() * g.dp(hbar) - 2.0 * PI * hbar / 64.0).abs() < 1e-15);
        assert_eq!(g.x(g.half()), 0.0);
        assert_eq!(g.p(g.half(), hbar), 0.0);
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let g = UniformGrid::new(256, 20.0).unwrap();
        let hs: Vec<_> = (0..6).map(|k| SampledWavefunction::hermite(g, 0.8, k).unwrap()).collect();
        for (a, ha) in hs.iter().enumerate() {
            for (b, hb) in hs.iter().enumerate() {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ha.inner(hb).re - expect).abs() < 1e-12, "{a} {b}");
            }
        }
    }

    #[test]
    fn taper_profile() {
        let t = Taper { x_flat: 1.0, x_zero: 2.0, p_flat: 1.0, p_zero: 2.0 };
        assert_eq!(t.weight(0.5, -0.9), 1.0);
        assert_eq!(t.weight(2.5, 0.0), 0.0);
        assert!((t.weight(1.5, 0.0) - 0.5).abs() < 1e-15);
        assert!(t.weight(1.0001, 0.0) > 1.0 - 1e-15);
        assert!(t.weight(1.9999, 0.0) < 1e-15);
    }

    #[test]
    fn non_finite_samples_rejected() {
        let g = UniformGrid::new(16, 1.0).unwrap();
        let mut v = vec![Complex64::zero(); 16];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(SampledWavefunction::new(g, 1.0, v), Err(Error::NonFinite(_))));
    }
}
