use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Fitted growth order `m` and derivative gain `ρ` of a symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShubinOrderEstimate {
    pub m_est: f64,
    pub rho_est: Option<f64>,
    /// Root-mean-square residual of the log-log fit; `≥ 0`.
    pub residual: f64,
}

const ANGLES: usize = 128;

/// `(slope, rms residual)` of the least-squares line through `(t, y)`.
fn fit(t: &[f64], y: &[f64]) -> (f64, f64) {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let sxy: f64 = t.iter().zip(y).map(|(a, b)| (a - tm) * (b - ym)).sum();
    let sxx: f64 = t.iter().map(|a| (a - tm) * (a - tm)).sum();
    let slope = sxy / sxx;
    let rss: f64 = t.iter().zip(y).map(|(a, b)| (b - ym - slope * (a - tm)).powi(2)).sum();
    (slope, (rss / n).sqrt())
}

/// Growth of `max_{|z|=r} |a(z)|` against `⟨r⟩` over the given radii, and of
/// the gradient maximum for `ρ`.
pub fn estimate_shubin_order(a: impl Fn(f64, f64) -> f64, radii: &[f64]) -> Result<ShubinOrderEstimate> {
    if radii.len() < 3 {
        return Err(Error::Parameter(format!("{} radii given, at least 3 needed", radii.len())));
    }
    if radii.iter().any(|r| !r.is_finite() || *r < 0.0) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter("radii must be finite, non-negative and increasing".into()));
    }
    let mut logs = Vec::with_capacity(radii.len());
    let mut values = Vec::with_capacity(radii.len());
    let mut grads = Vec::with_capacity(radii.len());
    for &r in radii {
        let bracket = (1.0 + r * r).sqrt();
        let step = 1e-4 * bracket;
        let (mut vmax, mut gmax) = (0.0f64, 0.0f64);
        for i in 0..ANGLES {
            let th = 2.0 * PI * i as f64 / ANGLES as f64;
            let (x, p) = (r * th.cos(), r * th.sin());
            let v = a(x, p);
            let gx = (a(x + step, p) - a(x - step, p)) / (2.0 * step);
            let gp = (a(x, p + step) - a(x, p - step)) / (2.0 * step);
            if !(v.is_finite() && gx.is_finite() && gp.is_finite()) {
                return Err(Error::NonFinite(format!("symbol value at ({x}, {p})")));
            }
            vmax = vmax.max(v.abs());
            gmax = gmax.max(gx.hypot(gp));
        }
        if vmax == 0.0 {
            return Err(Error::Parameter(format!("symbol vanishes on the circle of radius {r}")));
        }
        logs.push(bracket.ln());
        values.push(vmax.ln());
        grads.push((gmax, vmax));
    }
    let (m_est, residual) = fit(&logs, &values);
    // ρ only when the gradient is resolved above finite-difference noise
    let rho_est = if grads.iter().all(|(g, v)| *g > 1e-8 * v) {
        let lg: Vec<f64> = grads.iter().map(|(g, _)| g.ln()).collect();
        Some(m_est - fit(&logs, &lg).0)
    } else {
        None
    };
    Ok(ShubinOrderEstimate { m_est, rho_est, residual })
}
