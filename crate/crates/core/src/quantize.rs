//! Born–Jordan, Weyl and Shubin τ-quantization of polynomial symbols, exact
//! τ-averaging, and the amplitude calculus linking them.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    binomial, rational, Affine, AmplitudePoly, MultiIndex, Rational, Scalar, SymbolPoly, Var,
};
use crate::ordering::OpPoly;

/// Ordering parameter of the τ-rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauParam {
    Value(Rational),
    /// Kept as an indeterminate in coefficients, to be averaged or evaluated later.
    Formal,
}

impl TauParam {
    pub fn value(num: i64, den: i64) -> Self {
        TauParam::Value(rational(num, den))
    }

    pub fn scalar(&self) -> Scalar {
        match self {
            TauParam::Value(r) => Scalar::from_rational(r.clone()),
            TauParam::Formal => Scalar::tau(),
        }
    }
}

impl fmt::Display for TauParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauParam::Value(r) => write!(f, "{r}"),
            TauParam::Formal => write!(f, "tau"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scheme {
    Weyl,
    BornJordan,
    Tau(TauParam),
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Weyl => write!(f, "weyl"),
            Scheme::BornJordan => write!(f, "bj"),
            Scheme::Tau(t) => write!(f, "tau:{t}"),
        }
    }
}

/// `Σ_ℓ w(ℓ) p̂^{s−ℓ} x̂^r p̂^ℓ` in normal order.
fn ordered_sum(r: u32, s: u32, weight: impl Fn(u32) -> Scalar) -> Result<OpPoly> {
    let xr = OpPoly::monomial(&[r], &[0], Scalar::one())?;
    let mut out = OpPoly::zero(1);
    for l in 0..=s {
        let w = weight(l);
        if w.is_zero() {
            continue;
        }
        let left = OpPoly::monomial(&[0], &[s - l], w)?;
        let right = OpPoly::monomial(&[0], &[l], Scalar::one())?;
        out = &out + &left.multiply(&xr)?.multiply(&right)?;
    }
    Ok(out)
}

/// One-dimensional image of `p^s x^r`.
pub fn quantize_monomial(scheme: &Scheme, r: u32, s: u32) -> Result<OpPoly> {
    match scheme {
        Scheme::BornJordan => {
            let w = Scalar::ratio(1, s as i64 + 1);
            ordered_sum(r, s, |_| w.clone())
        }
        Scheme::Weyl => {
            let two_s = Rational::from_integer(num_bigint::BigInt::one() << s);
            ordered_sum(r, s, |l| Scalar::from_rational(Rational::from_integer(binomial(s, l)) / &two_s))
        }
        Scheme::Tau(t) => {
            let tau = t.scalar();
            let one_minus = &Scalar::one() - &tau;
            ordered_sum(r, s, |l| {
                let c = Scalar::from_rational(Rational::from_integer(binomial(s, l)));
                &(&c * &one_minus.pow(l)) * &tau.pow(s - l)
            })
        }
    }
}

/// Exact `∫₀¹ · dτ` of every coefficient.
pub fn tau_average(a: &OpPoly) -> OpPoly {
    a.integrate_tau()
}

/// Quantizes a polynomial symbol by linearity. Monomials quantize axis by
/// axis and the commuting factors are multiplied; Born–Jordan is the
/// τ-average of the formal τ-rule.
pub fn quantize_symbol(scheme: &Scheme, a: &SymbolPoly) -> Result<OpPoly> {
    if *scheme == Scheme::BornJordan {
        if !a.is_tau_free() {
            return Err(Error::FormalTau("Born-Jordan quantization of a symbol carrying tau"));
        }
        return Ok(tau_average(&quantize_symbol(&Scheme::Tau(TauParam::Formal), a)?));
    }
    let n = a.dim();
    let mut cache: HashMap<(u32, u32), OpPoly> = HashMap::new();
    let mut out = OpPoly::zero(n);
    for (e, c) in a.terms() {
        let mut term = OpPoly::constant(n, c.clone());
        for j in 0..n {
            let (r, s) = (e.0[j], e.0[n + j]);
            if r == 0 && s == 0 {
                continue;
            }
            let q = match cache.get(&(r, s)) {
                Some(q) => q.clone(),
                None => {
                    let q = quantize_monomial(scheme, r, s)?;
                    cache.insert((r, s), q.clone());
                    q
                }
            };
            term = term.multiply(&q.embed(n, j)?)?;
        }
        out = &out + &term;
    }
    Ok(out)
}

/// Born–Jordan amplitude `∫₀¹ a((1−τ)x + τy, p) dτ`.
pub fn amplitude_average(a: &SymbolPoly) -> Result<AmplitudePoly> {
    if !a.is_tau_free() {
        return Err(Error::FormalTau("amplitude average of a symbol carrying tau"));
    }
    let tau = Scalar::tau();
    let one_minus = &Scalar::one() - &tau;
    let b = a.map_vars(a.dim(), |v| match v.block {
        crate::exact::Block::X => Affine::new(
            Scalar::zero(),
            vec![(Var::x(v.index), one_minus.clone()), (Var::y(v.index), tau.clone())],
        ),
        _ => Affine::var(v),
    })?;
    Ok(b.integrate_tau())
}

/// τ-symbol of the operator with amplitude `b`:
/// `Σ_{β,γ} τ^|β| (1−τ)^|γ| (iħ)^|β| (−iħ)^|γ| / (β!γ!) ∂_p^{β+γ} ∂_x^β ∂_y^γ b` on `y = x`.
pub fn amplitude_to_tau_symbol(b: &AmplitudePoly, tau: &TauParam) -> Result<SymbolPoly> {
    if !b.is_tau_free() {
        return Err(Error::FormalTau("amplitude carrying tau"));
    }
    let n = b.dim();
    let t = tau.scalar();
    let one_minus = &Scalar::one() - &t;
    let i_hbar = Scalar::i_hbar();
    let x_bound: Vec<u32> = (0..n).map(|j| b.degree_in(Var::x(j))).collect::<Result<_>>()?;
    let y_bound: Vec<u32> = (0..n).map(|j| b.degree_in(Var::y(j))).collect::<Result<_>>()?;
    let mut out = AmplitudePoly::zero(n);
    for beta in MultiIndex::box_below(&x_bound) {
        let mut db = b.clone();
        for (j, &k) in beta.0.iter().enumerate() {
            db = db.differentiate(Var::x(j), k)?;
        }
        if db.is_zero() {
            continue;
        }
        let wb = (&t.pow(beta.order()) * &i_hbar.pow(beta.order()))
            .scale(&Rational::new(1.into(), beta.factorial()));
        for gamma in MultiIndex::box_below(&y_bound) {
            let mut d = db.clone();
            for (j, &k) in gamma.0.iter().enumerate() {
                d = d.differentiate(Var::y(j), k)?;
                d = d.differentiate(Var::p(j), k + beta.0[j])?;
            }
            if d.is_zero() {
                continue;
            }
            let wg = (&one_minus.pow(gamma.order()) * &(-i_hbar.clone()).pow(gamma.order()))
                .scale(&Rational::new(1.into(), gamma.factorial()));
            out = &out + &d.scale(&(&wb * &wg));
        }
    }
    Ok(out.restrict_diagonal())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(terms: &[((u32, u32), Scalar)]) -> OpPoly {
        terms.iter().fold(OpPoly::zero(1), |acc, ((r, s), c)| {
            &acc + &OpPoly::monomial(&[*r], &[*s], c.clone()).unwrap()
        })
    }

    fn sym(text: &str) -> SymbolPoly {
        crate::symlang::parse(text, 1).unwrap()
    }

    #[test]
    fn bj_xp() {
        let got = quantize_monomial(&Scheme::BornJordan, 1, 1).unwrap();
        let expect = op(&[((1, 1), Scalar::one()), ((0, 0), -(&Scalar::i_hbar() * &Scalar::ratio(1, 2)))]);
        assert_eq!(got, expect);
    }

    #[test]
    fn bj_x2p2() {
        let got = quantize_monomial(&Scheme::BornJordan, 2, 2).unwrap();
        let expect = op(&[
            ((2, 2), Scalar::one()),
            ((1, 1), -(&Scalar::i_hbar() * &Scalar::from_int(2))),
            ((0, 0), -(&Scalar::hbar().pow(2) * &Scalar::ratio(2, 3))),
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn formal_tau_xp() {
        let got = quantize_monomial(&Scheme::Tau(TauParam::Formal), 1, 1).unwrap();
        let expect = op(&[((1, 1), Scalar::one()), ((0, 0), -(&Scalar::i_hbar() * &Scalar::tau()))]);
        assert_eq!(got, expect);
    }

    #[test]
    fn weyl_x2p2() {
        let got = quantize_monomial(&Scheme::Weyl, 2, 2).unwrap();
        let expect = op(&[
            ((2, 2), Scalar::one()),
            ((1, 1), -(&Scalar::i_hbar() * &Scalar::from_int(2))),
            ((0, 0), -(&Scalar::hbar().pow(2) * &Scalar::ratio(1, 2))),
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn tau_average_examples() {
        let a = op(&[((1, 1), Scalar::one()), ((0, 0), -(&Scalar::i_hbar() * &Scalar::tau()))]);
        let expect = op(&[((1, 1), Scalar::one()), ((0, 0), -(&Scalar::i_hbar() * &Scalar::ratio(1, 2)))]);
        assert_eq!(tau_average(&a), expect);
        assert_eq!(tau_average(&expect), expect);
        let t2 = op(&[((0, 0), Scalar::tau().pow(2))]);
        assert_eq!(tau_average(&t2), op(&[((0, 0), Scalar::ratio(1, 3))]));
    }

    #[test]
    fn symbol_examples() {
        let bj = Scheme::BornJordan;
        let h = quantize_symbol(&bj, &sym("(1/2)*(x^2+p^2)")).unwrap();
        let half = Scalar::ratio(1, 2);
        assert_eq!(h, op(&[((2, 0), half.clone()), ((0, 2), half.clone())]));
        let got = quantize_symbol(&bj, &sym("x*p + 1")).unwrap();
        let expect = op(&[
            ((1, 1), Scalar::one()),
            ((0, 0), &Scalar::one() - &(&Scalar::i_hbar() * &half)),
        ]);
        assert_eq!(got, expect);
        assert_eq!(
            quantize_symbol(&bj, &sym("x^2*p^2")).unwrap(),
            quantize_monomial(&bj, 2, 2).unwrap()
        );
    }

    #[test]
    fn amplitude_examples() {
        let b = amplitude_average(&sym("x^2*p^2")).unwrap();
        let expect = crate::symlang::parse_amplitude("(1/3)*(x^2 + x*y + y^2)*p^2", 1).unwrap();
        assert_eq!(b, expect);
        assert_eq!(amplitude_average(&sym("p^2")).unwrap(), sym("p^2").to_amplitude_in_x());
        let expect = crate::symlang::parse_amplitude("(1/2)*(x + y)", 1).unwrap();
        assert_eq!(amplitude_average(&sym("x")).unwrap(), expect);
    }

    #[test]
    fn amplitude_to_symbol_examples() {
        let b = crate::symlang::parse_amplitude("(1/3)*(x^2 + x*y + y^2)*p^2", 1).unwrap();
        let got = amplitude_to_tau_symbol(&b, &TauParam::value(1, 2)).unwrap();
        assert_eq!(got, sym("x^2*p^2 - (1/6)*hbar^2"));

        let a = sym("x^3*p^2 + 2*x*p");
        let left = amplitude_to_tau_symbol(&a.to_amplitude_in_x(), &TauParam::value(0, 1)).unwrap();
        assert_eq!(left, a);
        let right = amplitude_to_tau_symbol(&a.to_amplitude_in_y(), &TauParam::value(1, 1)).unwrap();
        assert_eq!(right, a);
    }

    #[test]
    fn two_dimensional_product() {
        let a = crate::symlang::parse("x1*p1*x2", 2).unwrap();
        let got = quantize_symbol(&Scheme::Weyl, &a).unwrap();
        let xp = quantize_monomial(&Scheme::Weyl, 1, 1).unwrap().embed(2, 0).unwrap();
        assert_eq!(got, xp.multiply(&OpPoly::x(2, 1)).unwrap());
    }

    #[test]
    fn bj_rejects_tau_symbols() {
        let a = SymbolPoly::constant(1, Scalar::tau());
        assert!(matches!(quantize_symbol(&Scheme::BornJordan, &a), Err(Error::FormalTau(_))));
    }
}
