use num_traits::{One, Signed, Zero};

use crate::exact::{Exponents, GaussRational, Layout, Poly, Power, Rational, Scalar};
use crate::ordering::OpPoly;

/// Plain rational without parentheses: `3`, `-1/6`.
fn plain(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational usable as a factor: integers bare, fractions parenthesised.
fn factor(r: &Rational) -> String {
    if r.is_integer() {
        plain(r)
    } else {
        format!("({})", plain(r))
    }
}

/// Splits `g` into a sign and a magnitude string; the magnitude is empty when
/// it is `1` and other factors follow.
fn coefficient(g: &GaussRational, has_factors: bool) -> (bool, String) {
    if g.im.is_zero() {
        let neg = g.re.is_negative();
        let m = g.re.abs();
        if m.is_one() && has_factors {
            return (neg, String::new());
        }
        return (neg, factor(&m));
    }
    if g.re.is_zero() {
        let neg = g.im.is_negative();
        let m = g.im.abs();
        let s = if m.is_one() { "i".to_string() } else { format!("{}*i", factor(&m)) };
        return (neg, s);
    }
    let neg = g.re.is_negative();
    let (re, im) = if neg { (-g.re.clone(), -g.im.clone()) } else { (g.re.clone(), g.im.clone()) };
    let sep = if im.is_negative() { "-" } else { "+" };
    let im_abs = im.abs();
    let im_s = if im_abs.is_one() { "i".to_string() } else { format!("{}*i", plain(&im_abs)) };
    (neg, format!("({}{}{})", plain(&re), sep, im_s))
}

fn power_factors(p: &Power) -> Vec<String> {
    let mut out = Vec::new();
    for (name, k) in [("hbar", p.hbar), ("tau", p.tau)] {
        match k {
            0 => {}
            1 => out.push(name.to_string()),
            k => out.push(format!("{name}^{k}")),
        }
    }
    out
}

fn var_factor(name: &str, k: u32) -> Option<String> {
    match k {
        0 => None,
        1 => Some(name.to_string()),
        k => Some(format!("{name}^{k}")),
    }
}

/// Joins signed pieces into `a + b - c`, or `0` when empty.
fn join(pieces: Vec<(bool, String)>) -> String {
    if pieces.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, body)) in pieces.into_iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// One piece per (monomial, ħ power, τ power), highest monomials first.
fn render<'a>(
    terms: impl DoubleEndedIterator<Item = (&'a Exponents, &'a Scalar)>,
    vars: impl Fn(&Exponents) -> Vec<String>,
) -> String {
    let mut pieces = Vec::new();
    for (e, c) in terms.rev() {
        let v = vars(e);
        for (p, g) in c.terms() {
            let mut factors = power_factors(p);
            factors.extend(v.iter().cloned());
            let (neg, mag) = coefficient(g, !factors.is_empty());
            let mut body: Vec<String> = Vec::new();
            if !mag.is_empty() {
                body.push(mag);
            }
            body.extend(factors);
            pieces.push((neg, body.join("*")));
        }
    }
    join(pieces)
}

fn poly_vars<L: Layout>(a: &Poly<L>) -> impl Fn(&Exponents) -> Vec<String> + '_ {
    move |e| {
        let n = a.dim();
        e.0.iter()
            .enumerate()
            .filter_map(|(slot, &k)| {
                let v = a.var_at(slot);
                let name = if n == 1 {
                    v.to_string().trim_end_matches('1').to_string()
                } else {
                    v.to_string()
                };
                var_factor(&name, k)
            })
            .collect()
    }
}

/// Canonical text of a symbol, e.g. `x^2*p^2 + (1/6)*hbar^2`.
pub fn format<L: Layout>(a: &Poly<L>) -> String {
    render(a.terms(), poly_vars(a))
}

/// Canonical text of an amplitude; same conventions as [`format`].
pub fn format_amplitude(a: &crate::exact::AmplitudePoly) -> String {
    format(a)
}

/// Canonical text of a normal-ordered operator, e.g. `xhat*phat - (1/2)*i*hbar`.
pub fn format_op(a: &OpPoly) -> String {
    let n = a.dim();
    render(a.terms(), |e| {
        let mut out = Vec::new();
        for (base, offset) in [("xhat", 0), ("phat", n)] {
            for j in 0..n {
                let name = if n == 1 { base.to_string() } else { format!("{base}{}", j + 1) };
                out.extend(var_factor(&name, e.0[offset + j]));
            }
        }
        out
    })
}

/// Canonical text of a scalar, e.g. `1 - (1/2)*i*hbar`.
pub fn format_scalar(s: &Scalar) -> String {
    let e = Exponents(Vec::new());
    render(std::iter::once((&e, s)), |_| Vec::new())
}
