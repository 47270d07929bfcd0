use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fourier::{symplectic_ft, CenteredFft};
use super::grid::{NumericParams, SampledSymbol, SampledWavefunction, Taper, UniformGrid};
use super::quadrature::gauss_legendre_unit;
use crate::error::{Error, Result};
use crate::ordering::OpPoly;

/// Numeric quantization route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NumericScheme {
    Weyl,
    Tau(f64),
    /// Gauss–Legendre average of τ-operators with the given number of nodes.
    BjQuadrature(usize),
    /// Weyl application of the sinc-filtered symbol.
    BjSinc,
}

impl fmt::Display for NumericScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericScheme::Weyl => write!(f, "weyl"),
            NumericScheme::Tau(t) => write!(f, "tau:{t}"),
            NumericScheme::BjQuadrature(k) => write!(f, "bj-quadrature:{k}"),
            NumericScheme::BjSinc => write!(f, "bj-sinc"),
        }
    }
}

impl FromStr for NumericScheme {
    type Err = Error;

    /// `weyl`, `tau:<real>`, `bj-quadrature[:K]` (K defaults to 16), `bj-sinc`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("unknown numeric scheme '{s}'"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("weyl", None) => Ok(NumericScheme::Weyl),
            ("bj-sinc", None) => Ok(NumericScheme::BjSinc),
            ("bj-quadrature", None) => Ok(NumericScheme::BjQuadrature(16)),
            ("bj-quadrature", Some(k)) => k.parse().map(NumericScheme::BjQuadrature).map_err(|_| bad()),
            ("tau", Some(t)) => match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(NumericScheme::Tau(v)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

/// `sin(u)/u` with the series `1 − u²/6` near zero.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// `Op_τ(a)ψ` from the position-Fourier modes of the symbol:
/// with `a(u, p) = (1/N) Σ_q A_q(p) e^{iξ_q u}`,
/// `Op_τ(a)ψ = (1/N) Σ_q e^{iξ_q(1−τ)x} A_q(p̂) [e^{iξ_q τ y} ψ]`.
pub fn apply_tau(a: &SampledSymbol, psi: &SampledWavefunction, tau: f64) -> Result<SampledWavefunction> {
    a.compatible(psi)?;
    if !tau.is_finite() {
        return Err(Error::Parameter(format!("tau = {tau} is not finite")));
    }
    let grid = psi.grid;
    let n = grid.len();
    let h = grid.half() as f64;
    let fft = CenteredFft::new(n);
    // modes[q·N + m] = A_q(p_m)
    let mut modes = vec![Complex64::zero(); n * n];
    let mut col = vec![Complex64::zero(); n];
    for m in 0..n {
        for (k, c) in col.iter_mut().enumerate() {
            *c = a.get(k, m);
        }
        fft.forward(&mut col);
        for q in 0..n {
            modes[q * n + m] = col[q];
        }
    }
    let xs = grid.xs();
    let mut out = vec![Complex64::zero(); n];
    for q in 0..n {
        let row = &modes[q * n..(q + 1) * n];
        if row.iter().all(|v| v.is_zero()) {
            continue;
        }
        let xi0 = 2.0 * PI * (q as f64 - h) / grid.length();
        // the Nyquist mode is shared equally between ±ξ
        let branches: &[(f64, f64)] = if q == 0 { &[(xi0, 0.5), (-xi0, 0.5)] } else { &[(xi0, 1.0)] };
        for &(xi, weight) in branches {
            let modulated: Vec<Complex64> = xs
                .iter()
                .zip(&psi.values)
                .map(|(&x, v)| v * Complex64::from_polar(1.0, xi * tau * x))
                .collect();
            let filtered = fft.multiplier(&modulated, |m| row[m]);
            let s = weight / n as f64;
            for (k, v) in filtered.iter().enumerate() {
                out[k] += v * Complex64::from_polar(s, xi * (1.0 - tau) * xs[k]);
            }
        }
    }
    Ok(psi.with_values(out))
}

/// Weyl symbol of the Born–Jordan operator of `a`: the symplectic transform
/// is multiplied by `sinc(p x / 2ħ)` and transformed back.
pub fn bj_weyl_symbol_numeric(a: &SampledSymbol) -> Result<SampledSymbol> {
    let hbar = a.hbar;
    let spectrum = symplectic_ft(a)?;
    let filtered = spectrum.map(|x, p, v| v * sinc(p * x / (2.0 * hbar)));
    symplectic_ft(&filtered)
}

/// Applies the quantization of `a` to `ψ` under `scheme`.
pub fn apply_operator(
    a: &SampledSymbol,
    psi: &SampledWavefunction,
    scheme: NumericScheme,
    params: &NumericParams,
) -> Result<SampledWavefunction> {
    params.validate()?;
    a.compatible(psi)?;
    if psi.hbar != params.hbar {
        return Err(Error::Incompatible(format!("hbar {} vs configured {}", psi.hbar, params.hbar)));
    }
    psi.warn_if_not_decaying(params.tolerance);
    match scheme {
        NumericScheme::Weyl => apply_tau(a, psi, 0.5),
        NumericScheme::Tau(t) => apply_tau(a, psi, t),
        NumericScheme::BjQuadrature(k) => {
            let rule = gauss_legendre_unit(k)?;
            let mut acc = vec![Complex64::zero(); psi.values.len()];
            for (t, w) in rule {
                let part = apply_tau(a, psi, t)?;
                for (s, v) in acc.iter_mut().zip(&part.values) {
                    *s += v * w;
                }
            }
            Ok(psi.with_values(acc))
        }
        NumericScheme::BjSinc => apply_tau(&bj_weyl_symbol_numeric(a)?, psi, 0.5),
    }
}

/// Exact normal-ordered operator applied spectrally: `p̂` is the momentum
/// multiplier and `x̂` pointwise multiplication.
pub fn apply_op_poly(op: &OpPoly, psi: &SampledWavefunction) -> Result<SampledWavefunction> {
    if op.dim() != 1 {
        return Err(Error::Unsupported("numeric operators are one-dimensional".into()));
    }
    let grid = psi.grid;
    let fft = CenteredFft::new(grid.len());
    let ps = grid.ps(psi.hbar);
    let xs = grid.xs();
    let mut out = vec![Complex64::zero(); grid.len()];
    for (e, c) in op.terms() {
        let c = c.to_complex(psi.hbar).ok_or(Error::FormalTau("numeric operator carrying tau"))?;
        let (r, s) = (e.0[0] as i32, e.0[1] as i32);
        let d = fft.multiplier(&psi.values, |m| Complex64::new(ps[m].powi(s), 0.0));
        for (k, v) in d.iter().enumerate() {
            out[k] += c * xs[k].powi(r) * v;
        }
    }
    Ok(psi.with_values(out))
}

/// Largest `‖Aψ‖/‖ψ‖` over random normalized combinations of the first
/// `basis` Hermite functions.
pub fn operator_norm_probe(
    apply: impl Fn(&SampledWavefunction) -> Result<SampledWavefunction>,
    grid: UniformGrid,
    hbar: f64,
    trials: usize,
    basis: usize,
    seed: u64,
) -> Result<f64> {
    let hermite: Vec<SampledWavefunction> =
        (0..basis.max(1)).map(|k| SampledWavefunction::hermite(grid, hbar, k)).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let mut v = vec![Complex64::zero(); grid.len()];
        for h in &hermite {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for (a, b) in v.iter_mut().zip(&h.values) {
                *a += c * b;
            }
        }
        let psi = SampledWavefunction::new(grid, hbar, v)?;
        let psi = psi.scale(Complex64::new(1.0 / psi.norm(), 0.0));
        worst = worst.max(apply(&psi)?.norm());
    }
    Ok(worst)
}

/// Windowed plane wave `e^{−i(p x₀ − x p₀)/ħ}·w(x, p)`.
pub fn windowed_plane_wave(grid: UniformGrid, hbar: f64, x0: f64, p0: f64, taper: &Taper) -> Result<SampledSymbol> {
    taper.validate()?;
    if !(x0.is_finite() && p0.is_finite()) {
        return Err(Error::NonFinite("plane-wave shift".into()));
    }
    SampledSymbol::from_fn(grid, hbar, |x, p| Complex64::from_polar(taper.weight(x, p), (x * p0 - p * x0) / hbar))
}

/// Grid-aligned shift `(x₀, p₀)` with `p₀x₀ = 2πħ·k`: `x₀ = j₀Δ`, `p₀ = m₀·2πħ/L`, `j₀m₀ = N·k`.
pub fn null_point(grid: &UniformGrid, hbar: f64, k: u32) -> Result<(f64, f64)> {
    let n = grid.len();
    let j0 = 1usize << (n.trailing_zeros() / 2);
    let m0 = n / j0 * k as usize;
    if k == 0 || m0 > n / 4 {
        return Err(Error::Parameter(format!("no in-window null point of order {k} on N = {n}")));
    }
    Ok((j0 as f64 * grid.dx(), m0 as f64 * grid.dp(hbar)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: usize, l: f64) -> (UniformGrid, SampledWavefunction) {
        let g = UniformGrid::new(n, l).unwrap();
        (g, SampledWavefunction::gaussian(g, 1.0).unwrap())
    }

    #[test]
    fn constant_symbol_is_identity() {
        let (g, psi) = setup(128, 20.0);
        let one = SampledSymbol::from_fn(g, 1.0, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        for scheme in [NumericScheme::Weyl, NumericScheme::Tau(0.3), NumericScheme::BjQuadrature(4), NumericScheme::BjSinc] {
            let out = apply_operator(&one, &psi, scheme, &NumericParams::default()).unwrap();
            assert!(out.relative_error(&psi) < 1e-12, "{scheme}");
        }
    }

    #[test]
    fn position_symbol_multiplies() {
        let (g, psi) = setup(128, 20.0);
        let x = SampledSymbol::from_fn(g, 1.0, |x, _| Complex64::new((x / 3.0).sin(), 0.0)).unwrap();
        let out = apply_tau(&x, &psi, 0.7).unwrap();
        let expect = psi.with_values(g.xs().iter().zip(&psi.values).map(|(x, v)| v * (x / 3.0).sin()).collect());
        assert!(out.relative_error(&expect) < 1e-10);
    }

    #[test]
    fn momentum_symbol_differentiates() {
        let (g, psi) = setup(128, 20.0);
        let p = SampledSymbol::from_fn(g, 1.0, |_, p| Complex64::new(p, 0.0)).unwrap();
        let out = apply_tau(&p, &psi, 0.2).unwrap();
        // p̂ e^{−x²/2} = i x e^{−x²/2}
        let expect = psi.with_values(g.xs().iter().zip(&psi.values).map(|(x, v)| Complex64::new(0.0, *x) * v).collect());
        assert!(out.relative_error(&expect) < 1e-10);
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in ["weyl", "tau:0.3", "bj-quadrature:8", "bj-sinc"] {
            assert_eq!(s.parse::<NumericScheme>().unwrap().to_string(), s);
        }
        assert_eq!("bj-quadrature".parse::<NumericScheme>().unwrap(), NumericScheme::BjQuadrature(16));
        assert!("tau".parse::<NumericScheme>().is_err());
        assert!("tau:nan".parse::<NumericScheme>().is_err());
    }

    #[test]
    fn sinc_guard() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(1e-5) - 1.0).abs() < 1e-10);
        assert!((sinc(PI)).abs() < 1e-16);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let (g, _) = setup(64, 20.0);
        let (_, psi) = setup(128, 20.0);
        let one = SampledSymbol::from_fn(g, 1.0, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(apply_tau(&one, &psi, 0.5), Err(Error::Incompatible(_))));
        let params = NumericParams { quadrature: 1, ..NumericParams::default() };
        let (g2, psi2) = setup(64, 20.0);
        let one2 = SampledSymbol::from_fn(g2, 1.0, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        assert!(apply_operator(&one2, &psi2, NumericScheme::Weyl, &params).is_err());
    }
}
