use std::fmt::Write as _;

use bjcalc::exact::{Exponents, Scalar};
use bjcalc::MultiIndex;
use bjcalc::numeric::SampledWavefunction;
use bjcalc::{OpPoly, Rational, SymbolPoly};
use serde_json::{json, Value};

fn rational(r: &Rational) -> String {
    r.to_string()
}

/// One JSON term per `(monomial, ħ-power, τ-power)`; `tau_pow` only when nonzero.
fn terms<'a>(dim: usize, items: impl Iterator<Item = (&'a Exponents, &'a Scalar)>) -> Vec<Value> {
    let mut out = Vec::new();
    for (e, c) in items {
        for (power, g) in c.terms() {
            let mut coeff = json!({ "re": rational(&g.re), "im": rational(&g.im), "hbar_pow": power.hbar });
            if power.tau > 0 {
                coeff["tau_pow"] = json!(power.tau);
            }
            out.push(json!({ "x": &e.0[..dim], "p": &e.0[dim..], "coeff": coeff }));
        }
    }
    out
}

pub fn op_json(a: &OpPoly) -> Value {
    json!({ "kind": "oppoly", "dimension": a.dim(), "terms": terms(a.dim(), a.terms()) })
}

pub fn symbol_json(a: &SymbolPoly) -> Value {
    json!({ "kind": "symbol", "dimension": a.dim(), "terms": terms(a.dim(), a.terms()) })
}

/// Coefficient table row; the Bernoulli column exists only in one dimension.
pub struct TableRow {
    pub alpha: MultiIndex,
    pub c: Rational,
    pub bernoulli: Option<Rational>,
}

fn index_label(alpha: &MultiIndex) -> String {
    match alpha.0.as_slice() {
        [k] => k.to_string(),
        _ => alpha.to_string(),
    }
}

pub fn table_json(dim: usize, rows: &[TableRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = json!({ "alpha": r.alpha.0, "c": rational(&r.c) });
            if let Some(b) = &r.bernoulli {
                v["bernoulli"] = json!(rational(b));
            }
            v
        })
        .collect();
    json!({ "kind": "table", "dimension": dim, "rows": rows })
}

pub fn table_text(rows: &[TableRow]) -> String {
    let one_dim = rows.iter().all(|r| r.bernoulli.is_some());
    let mut s = if one_dim {
        format!("{:>5}  {:>16}  {:>16}\n", "k", "c_k", "B_k")
    } else {
        format!("{:>12}  {:>16}\n", "alpha", "c_alpha")
    };
    for r in rows {
        let _ = match &r.bernoulli {
            Some(b) if one_dim => writeln!(s, "{:>5}  {:>16}  {:>16}", index_label(&r.alpha), rational(&r.c), rational(b)),
            _ => writeln!(s, "{:>12}  {:>16}", index_label(&r.alpha), rational(&r.c)),
        };
    }
    s
}

pub fn table_csv(rows: &[TableRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["alpha", "c", "bernoulli"])?;
    for r in rows {
        let b = r.bernoulli.as_ref().map(rational).unwrap_or_default();
        let alpha: Vec<String> = r.alpha.0.iter().map(u32::to_string).collect();
        w.write_record([alpha.join(" "), rational(&r.c), b])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv writes utf-8"))
}

pub fn grid_json(psi: &SampledWavefunction) -> Value {
    let values: Vec<[f64; 2]> = psi.values.iter().map(|v| [v.re, v.im]).collect();
    json!({ "kind": "grid", "N": psi.grid.len(), "L": psi.grid.length(), "hbar": psi.hbar, "values": values })
}

pub fn grid_csv(psi: &SampledWavefunction) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "re", "im"])?;
    for (x, v) in psi.grid.xs().iter().zip(&psi.values) {
        w.write_record([format!("{x:.17e}"), format!("{:.17e}", v.re), format!("{:.17e}", v.im)])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv writes utf-8"))
}
