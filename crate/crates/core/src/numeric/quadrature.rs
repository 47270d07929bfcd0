use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[0, 1]`; exact for polynomials of
/// degree `< 2k`.
pub fn gauss_legendre_unit(k: usize) -> Result<Vec<(f64, f64)>> {
    if k < 2 {
        return Err(Error::Parameter(format!("quadrature order {k} is below 2")));
    }
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        // Chebyshev-like initial guess, then Newton on P_k
        let mut t = (PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(k, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(k, t);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        out.push((0.5 * (1.0 - t), 0.5 * w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// `(P_k(t), P_k'(t))` by the three-term recurrence.
fn legendre(k: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for j in 2..=k {
        let p2 = ((2 * j - 1) as f64 * t * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for k in [2usize, 5, 16] {
            let rule = gauss_legendre_unit(k).unwrap();
            for deg in 0..(2 * k) as i32 {
                let got: f64 = rule.iter().map(|(t, w)| w * t.powi(deg)).sum();
                assert!((got - 1.0 / (deg + 1) as f64).abs() < 1e-14, "k={k} deg={deg}");
            }
        }
    }

    #[test]
    fn nodes_inside_unit_interval() {
        let rule = gauss_legendre_unit(16).unwrap();
        assert!(rule.iter().all(|(t, w)| *t > 0.0 && *t < 1.0 && *w > 0.0));
        assert!((rule.iter().map(|(_, w)| w).sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_below_two_rejected() {
        assert!(gauss_legendre_unit(1).is_err());
    }
}
