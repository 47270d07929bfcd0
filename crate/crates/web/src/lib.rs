//! WebAssembly bindings for the browser demo: exact quantization and symbol
//! conversion, the coefficient table, and a grid application whose samples
//! the page plots.
//!
//! Each export wraps a plain function returning `Result<String, String>` so the
//! logic is testable off the browser; JSON payloads are built with `serde_json`.

use bjcalc::numeric::{
    apply_operator, null_point, windowed_plane_wave, NumericParams, NumericScheme, SampledSymbol, SampledWavefunction,
    Taper, UniformGrid,
};
use bjcalc::quantize::quantize_symbol;
use bjcalc::symlang::{format, format_op, parse};
use bjcalc::transform::{bernoulli, c_coeff_1d, convert_symbol};
use bjcalc::{Rational, Scheme, TauParam};
use num_complex::Complex64;
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_DIM: usize = 4;
const MAX_GRID: usize = 2048;

fn rule(text: &str) -> Result<Scheme, String> {
    match text.trim() {
        "weyl" => Ok(Scheme::Weyl),
        "bj" => Ok(Scheme::BornJordan),
        "tau" => Ok(Scheme::Tau(TauParam::Formal)),
        other => match other.strip_prefix("tau:") {
            Some(v) => v
                .parse::<Rational>()
                .map(|t| Scheme::Tau(TauParam::Value(t)))
                .map_err(|_| format!("invalid tau value '{v}' (use a fraction such as 1/3)")),
            None => Err(format!("unknown rule '{other}' (weyl, bj, tau, tau:<fraction>)")),
        },
    }
}

fn check_dim(dim: usize) -> Result<(), String> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(format!("dimension must be between 1 and {MAX_DIM}"))
    }
}

pub fn quantize_text(symbol: &str, rule_name: &str, dim: usize) -> Result<String, String> {
    check_dim(dim)?;
    let scheme = rule(rule_name)?;
    let a = parse(symbol, dim).map_err(|e| e.to_string())?;
    quantize_symbol(&scheme, &a).map(|op| format_op(&op)).map_err(|e| e.to_string())
}

pub fn convert_text(symbol: &str, from: &str, to: &str, dim: usize) -> Result<String, String> {
    check_dim(dim)?;
    let (from, to) = (rule(from)?, rule(to)?);
    let a = parse(symbol, dim).map_err(|e| e.to_string())?;
    convert_symbol(&a, &from, &to).map(|b| format(&b)).map_err(|e| e.to_string())
}

/// `[{k, c, bernoulli}]` for even `k ≤ max`, rationals as strings.
pub fn coefficient_json(max: u32) -> Result<String, String> {
    if max > 60 {
        return Err("order is limited to 60 in the browser".into());
    }
    let rows: Vec<_> = (0..=max)
        .step_by(2)
        .map(|k| json!({ "k": k, "c": c_coeff_1d(k).to_string(), "bernoulli": bernoulli(k).to_string() }))
        .collect();
    Ok(json!(rows).to_string())
}

fn state(name: &str, grid: UniformGrid) -> Result<SampledWavefunction, String> {
    let psi = match name.split_once(':') {
        None if name == "gaussian" => SampledWavefunction::gaussian(grid, 1.0),
        Some(("hermite", k)) => {
            let k: usize = k.parse().map_err(|_| format!("invalid hermite index '{k}'"))?;
            SampledWavefunction::hermite(grid, 1.0, k)
        }
        _ => return Err(format!("unknown state '{name}' (gaussian, hermite:k)")),
    };
    psi.map_err(|e| e.to_string())
}

/// `null` selects the grid-aligned plane wave with `x₀p₀ = 2πħ`; anything else is a
/// one-dimensional polynomial, windowed by the grid taper.
fn symbol(text: &str, grid: UniformGrid) -> Result<SampledSymbol, String> {
    let taper = Taper::for_grid(&grid, 1.0);
    if text.trim() == "null" {
        let (x0, p0) = null_point(&grid, 1.0, 1).map_err(|e| e.to_string())?;
        return windowed_plane_wave(grid, 1.0, x0, p0, &taper).map_err(|e| e.to_string());
    }
    let a = parse(text, 1).map_err(|e| e.to_string())?;
    SampledSymbol::from_poly(&a, grid, 1.0, &taper).map_err(|e| e.to_string())
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|v| [v.re, v.im]).collect()
}

/// Applies a symbol to a state on an `n`-point grid of length `box_length` with `ħ = 1`.
/// Returns `{x, input, output, norm, expectation}` with complex samples as `[re, im]`.
pub fn apply_json(symbol_text: &str, state_name: &str, scheme: &str, n: usize, box_length: f64) -> Result<String, String> {
    if n > MAX_GRID {
        return Err(format!("grid size is limited to {MAX_GRID} in the browser"));
    }
    let scheme: NumericScheme = scheme.parse().map_err(|e: bjcalc::Error| e.to_string())?;
    let grid = UniformGrid::new(n, box_length).map_err(|e| e.to_string())?;
    let psi = state(state_name, grid)?;
    let a = symbol(symbol_text, grid)?;
    let out = apply_operator(&a, &psi, scheme, &NumericParams::default()).map_err(|e| e.to_string())?;
    let expectation = psi.inner(&out) / psi.inner(&psi).re;
    Ok(json!({
        "x": grid.xs(),
        "input": pairs(&psi.values),
        "output": pairs(&out.values),
        "norm": out.norm(),
        "expectation": [expectation.re, expectation.im],
    })
    .to_string())
}

#[wasm_bindgen]
pub fn quantize(symbol: &str, rule: &str, dim: usize) -> Result<String, JsError> {
    quantize_text(symbol, rule, dim).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn convert(symbol: &str, from: &str, to: &str, dim: usize) -> Result<String, JsError> {
    convert_text(symbol, from, to, dim).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn coefficients(max: u32) -> Result<String, JsError> {
    coefficient_json(max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn apply(symbol: &str, state: &str, scheme: &str, n: usize, box_length: f64) -> Result<String, JsError> {
    apply_json(symbol, state, scheme, n, box_length).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_operations() {
        assert_eq!(quantize_text("x*p", "bj", 1).unwrap(), "xhat*phat - (1/2)*i*hbar");
        assert_eq!(convert_text("x^2*p^2", "weyl", "bj", 1).unwrap(), "x^2*p^2 + (1/6)*hbar^2");
        assert_eq!(convert_text("x*p", "bj", "tau:0", 1).unwrap(), "x*p - (1/2)*i*hbar");
        assert!(quantize_text("x^-1", "bj", 1).unwrap_err().contains("column 2"));
        assert!(quantize_text("x", "bj", 0).is_err());
        assert!(convert_text("x", "tau:abc", "weyl", 1).is_err());
    }

    #[test]
    fn coefficient_rows() {
        let rows: serde_json::Value = serde_json::from_str(&coefficient_json(6).unwrap()).unwrap();
        let c: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["c"].as_str().unwrap()).collect();
        assert_eq!(c, ["1", "-1/3", "7/15", "-31/21"]);
        assert!(coefficient_json(61).is_err());
    }

    #[test]
    fn apply_payload() {
        let v: serde_json::Value =
            serde_json::from_str(&apply_json("(1/2)*(x^2 + p^2)", "gaussian", "bj-sinc", 256, 20.0).unwrap()).unwrap();
        assert_eq!(v["x"].as_array().unwrap().len(), 256);
        assert!((v["expectation"][0].as_f64().unwrap() - 0.5).abs() < 1e-10);
        let null: serde_json::Value =
            serde_json::from_str(&apply_json("null", "gaussian", "bj-sinc", 512, 20.0).unwrap()).unwrap();
        assert!(null["norm"].as_f64().unwrap() < 1e-8);
        assert!(apply_json("x", "gaussian", "weyl", 4096, 20.0).is_err());
        assert!(apply_json("x", "squeezed", "weyl", 64, 20.0).is_err());
    }
}
