//! Normal-ordered polynomials in `x̂ⱼ, p̂ⱼ` under `[x̂ⱼ, p̂ₖ] = iħ δⱼₖ`.
//!
//! Every stored term is `c · x̂^α p̂^β` with all position operators to the left
//! of all momentum operators. Products are reduced back into that form, so
//! structural equality of two [`OpPoly`] values is operator equality.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, Exponents, Rational, Scalar, SymbolPoly, Var};

/// Largest total degree a product may reach.
pub const MAX_DEGREE: u32 = 64;

/// Normal-ordered operator polynomial. Exponent vectors are `[α₁..αₙ, β₁..βₙ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpPoly {
    dim: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

/// Coefficient of `x̂^{c-k} p̂^{b-k}` in the normal form of `p̂^b x̂^c`:
/// `k! C(b,k) C(c,k) (-iħ)^k`.
pub fn swap_coefficient(b: u32, c: u32, k: u32) -> Scalar {
    let n: BigInt = factorial(k) * binomial(b, k) * binomial(c, k);
    &Scalar::from_rational(Rational::from_integer(n)) * &(-Scalar::i_hbar()).pow(k)
}

impl OpPoly {
    pub fn zero(dim: usize) -> Self {
        OpPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut out = Self::zero(dim);
        out.add_term(Exponents(vec![0; 2 * dim]), c);
        out
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Scalar::one())
    }

    /// `coeff · x̂^x_exp p̂^p_exp`.
    pub fn monomial(x_exp: &[u32], p_exp: &[u32], coeff: Scalar) -> Result<Self> {
        if x_exp.len() != p_exp.len() {
            return Err(Error::DimensionMismatch { left: x_exp.len(), right: p_exp.len() });
        }
        let mut out = Self::zero(x_exp.len());
        out.add_term(Exponents([x_exp, p_exp].concat()), coeff);
        Ok(out)
    }

    /// `x̂ⱼ` (zero-based axis).
    pub fn x(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; 2 * dim];
        e[axis] = 1;
        let mut out = Self::zero(dim);
        out.add_term(Exponents(e), Scalar::one());
        out
    }

    /// `p̂ⱼ` (zero-based axis).
    pub fn p(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; 2 * dim];
        e[dim + axis] = 1;
        let mut out = Self::zero(dim);
        out.add_term(Exponents(e), Scalar::one());
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Exponents::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, x_exp: &[u32], p_exp: &[u32]) -> Scalar {
        self.terms
            .get(&Exponents([x_exp, p_exp].concat()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn tau_degree(&self) -> u32 {
        self.terms.values().map(Scalar::tau_degree).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map_coefficients(|a| a * c)
    }

    pub fn eval_tau(&self, tau: &Rational) -> Self {
        self.map_coefficients(|c| c.eval_tau(tau))
    }

    /// Coefficientwise `∫₀¹ · dτ`.
    pub fn integrate_tau(&self) -> Self {
        self.map_coefficients(Scalar::integrate_tau)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    /// Normal-ordered product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let degree = self.degree() + other.degree();
        if degree > MAX_DEGREE && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeLimit { degree, limit: MAX_DEGREE });
        }
        let n = self.dim;
        let mut out = Self::zero(n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let coeff = ca * cb;
                // expand dimension by dimension; each axis contributes an independent sum
                let mut partial: Vec<(Vec<u32>, Scalar)> = vec![(vec![0; 2 * n], coeff)];
                for j in 0..n {
                    let (a, b) = (ea.0[j], ea.0[n + j]);
                    let (c, d) = (eb.0[j], eb.0[n + j]);
                    let mut next = Vec::with_capacity(partial.len() * (b.min(c) as usize + 1));
                    for k in 0..=b.min(c) {
                        let w = swap_coefficient(b, c, k);
                        for (e, s) in &partial {
                            let mut e = e.clone();
                            e[j] = a + c - k;
                            e[n + j] = b + d - k;
                            next.push((e, s * &w));
                        }
                    }
                    partial = next;
                }
                for (e, s) in partial {
                    out.add_term(Exponents(e), s);
                }
            }
        }
        Ok(out)
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.multiply(other)? - &other.multiply(self)?)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::one(self.dim);
        for _ in 0..k {
            out = out.multiply(self)?;
        }
        Ok(out)
    }

    /// Formal adjoint: conjugates coefficients and reverses factor order.
    pub fn adjoint(&self) -> Result<Self> {
        let n = self.dim;
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let p_part = Self::monomial(&vec![0; n], &e.0[n..], c.conj())?;
            let x_part = Self::monomial(&e.0[..n], &vec![0; n], Scalar::one())?;
            out = &out + &p_part.multiply(&x_part)?;
        }
        Ok(out)
    }

    /// Places a one-dimensional operator on `axis` of a `dim`-dimensional space.
    pub fn embed(&self, dim: usize, axis: usize) -> Result<Self> {
        if self.dim != 1 || axis >= dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: dim });
        }
        let mut out = Self::zero(dim);
        for (e, c) in &self.terms {
            let mut ne = vec![0; 2 * dim];
            ne[axis] = e.0[0];
            ne[dim + axis] = e.0[1];
            out.add_term(Exponents(ne), c.clone());
        }
        Ok(out)
    }

    /// Action on a polynomial wave function `f(x)` with `p̂ⱼ = −iħ ∂/∂xⱼ`.
    /// `f` must not contain momentum variables.
    pub fn act_on(&self, f: &SymbolPoly) -> Result<SymbolPoly> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: f.dim() });
        }
        let n = self.dim;
        if (0..n).any(|j| f.degree_in(Var::p(j)).unwrap_or(0) > 0) {
            return Err(Error::Incompatible("wave function depends on momentum".into()));
        }
        let minus_i_hbar = -Scalar::i_hbar();
        let mut out = SymbolPoly::zero(n);
        for (e, c) in &self.terms {
            let mut g = f.clone();
            for j in 0..n {
                let b = e.0[n + j];
                if b > 0 {
                    g = g.differentiate(Var::x(j), b)?.scale(&minus_i_hbar.pow(b));
                }
            }
            let factors: Vec<(Var, u32)> = (0..n).map(|j| (Var::x(j), e.0[j])).collect();
            let mono = SymbolPoly::monomial(n, &factors, c.clone())?;
            out = &out + &(&mono * &g);
        }
        Ok(out)
    }
}

impl<'a> Add<&'a OpPoly> for &'a OpPoly {
    type Output = OpPoly;
    fn add(self, rhs: &OpPoly) -> OpPoly {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a OpPoly> for &'a OpPoly {
    type Output = OpPoly;
    fn sub(self, rhs: &OpPoly) -> OpPoly {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Add for OpPoly {
    type Output = OpPoly;
    fn add(self, rhs: OpPoly) -> OpPoly {
        &self + &rhs
    }
}

impl Sub for OpPoly {
    type Output = OpPoly;
    fn sub(self, rhs: OpPoly) -> OpPoly {
        &self - &rhs
    }
}

impl Neg for OpPoly {
    type Output = OpPoly;
    fn neg(self) -> OpPoly {
        self.map_coefficients(|c| -c)
    }
}

impl fmt::Display for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::symlang::format_op(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> OpPoly {
        OpPoly::x(1, 0)
    }
    fn p() -> OpPoly {
        OpPoly::p(1, 0)
    }
    fn c(s: Scalar) -> OpPoly {
        OpPoly::constant(1, s)
    }
    fn mul(a: &OpPoly, b: &OpPoly) -> OpPoly {
        a.multiply(b).unwrap()
    }

    #[test]
    fn single_swap() {
        assert_eq!(mul(&p(), &x()), &mul(&x(), &p()) - &c(Scalar::i_hbar()));
    }

    #[test]
    fn already_ordered() {
        assert_eq!(mul(&x(), &p()), OpPoly::monomial(&[1], &[1], Scalar::one()).unwrap());
    }

    #[test]
    fn squares_reorder() {
        let lhs = mul(&p().pow(2).unwrap(), &x().pow(2).unwrap());
        let x2p2 = OpPoly::monomial(&[2], &[2], Scalar::one()).unwrap();
        let xp = OpPoly::monomial(&[1], &[1], Scalar::one()).unwrap();
        let four_i_hbar = Scalar::i_hbar().scale(&Rational::from_integer(4.into()));
        let two_hbar2 = Scalar::hbar().pow(2).scale(&Rational::from_integer(2.into()));
        let rhs = &(&x2p2 - &xp.scale(&four_i_hbar)) - &c(two_hbar2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn closed_form_swap_matches_commutator_recursion() {
        // p x^k = x^k p − iħ k x^{k−1}, iterated b times, against the closed form
        for b in 0..6u32 {
            for cexp in 0..6u32 {
                let mut acc = OpPoly::monomial(&[cexp], &[0], Scalar::one()).unwrap();
                for _ in 0..b {
                    let mut next = OpPoly::zero(1);
                    for (e, s) in acc.terms() {
                        let (xk, pk) = (e.0[0], e.0[1]);
                        next.add_term(Exponents(vec![xk, pk + 1]), s.clone());
                        if xk > 0 {
                            let w = &(-Scalar::i_hbar()) * &Scalar::from_int(xk as i64);
                            next.add_term(Exponents(vec![xk - 1, pk]), s * &w);
                        }
                    }
                    acc = next;
                }
                let mut expect = OpPoly::zero(1);
                for k in 0..=b.min(cexp) {
                    expect.add_term(Exponents(vec![cexp - k, b - k]), swap_coefficient(b, cexp, k));
                }
                assert_eq!(acc, expect, "b={b} c={cexp}");
            }
        }
    }

    #[test]
    fn canonical_commutator() {
        assert_eq!(x().commutator(&p()).unwrap(), c(Scalar::i_hbar()));
        assert!(x().commutator(&x()).unwrap().is_zero());
        let x2 = x().pow(2).unwrap();
        let two_i_hbar_x = x().scale(&Scalar::i_hbar().scale(&Rational::from_integer(2.into())));
        assert_eq!(x2.commutator(&p()).unwrap(), two_i_hbar_x);
    }

    #[test]
    fn equality_of_normalized_forms() {
        let xp = mul(&x(), &p());
        let a = &xp - &c(Scalar::i_hbar());
        assert_eq!(a, mul(&p(), &x()));
        assert_ne!(xp, mul(&p(), &x()));
        let half = Scalar::ratio(1, 2);
        let sym = (&mul(&p(), &x()) + &xp).scale(&half);
        assert_eq!(sym, &xp - &c(&Scalar::i_hbar() * &half));
    }

    #[test]
    fn distinct_axes_commute() {
        let x1 = OpPoly::x(2, 0);
        let p2 = OpPoly::p(2, 1);
        assert!(x1.commutator(&p2).unwrap().is_zero());
        let p1 = OpPoly::p(2, 0);
        assert_eq!(x1.commutator(&p1).unwrap(), OpPoly::constant(2, Scalar::i_hbar()));
    }

    #[test]
    fn degree_guardrail() {
        let big = x().pow(40).unwrap();
        let other = p().pow(30).unwrap();
        assert!(matches!(big.multiply(&other), Err(Error::DegreeLimit { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            OpPoly::x(1, 0).multiply(&OpPoly::x(2, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn adjoint_of_xp() {
        // (x̂p̂)† = p̂x̂ = x̂p̂ − iħ
        let xp = mul(&x(), &p());
        assert_eq!(xp.adjoint().unwrap(), mul(&p(), &x()));
        let sym = &(&xp + &mul(&p(), &x())) + &OpPoly::zero(1);
        assert_eq!(sym.adjoint().unwrap(), sym);
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = OpPoly> {
        // a product of x̂, p̂ letters scaled by a small rational
        (prop::collection::vec(any::<bool>(), 0..=max_len), -5i64..=5, 1i64..=4).prop_map(
            |(letters, n, d)| {
                let mut acc = OpPoly::constant(1, Scalar::ratio(n, d));
                for is_x in letters {
                    let f = if is_x { OpPoly::x(1, 0) } else { OpPoly::p(1, 0) };
                    acc = acc.multiply(&f).unwrap();
                }
                acc
            },
        )
    }

    fn arb_op() -> impl Strategy<Value = OpPoly> {
        prop::collection::vec(arb_word(3), 1..=3)
            .prop_map(|ws| ws.iter().fold(OpPoly::zero(1), |a, w| &a + w))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associative(a in arb_op(), b in arb_op(), c in arb_op()) {
            let l = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let r = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn antisymmetric_commutator(a in arb_op(), b in arb_op()) {
            prop_assert_eq!(a.commutator(&b).unwrap(), -b.commutator(&a).unwrap());
        }

        #[test]
        fn jacobi(a in arb_op(), b in arb_op(), c in arb_op()) {
            let t1 = a.commutator(&b.commutator(&c).unwrap()).unwrap();
            let t2 = b.commutator(&c.commutator(&a).unwrap()).unwrap();
            let t3 = c.commutator(&a.commutator(&b).unwrap()).unwrap();
            prop_assert!((&(&t1 + &t2) + &t3).is_zero());
        }

        #[test]
        fn product_matches_differential_action(a in arb_word(4), b in arb_word(4), k in 0u32..=12) {
            // (AB) f = A (B f) with p̂ = −iħ d/dx acting on f = x^k
            let f = SymbolPoly::monomial(1, &[(Var::x(0), k)], Scalar::one()).unwrap();
            let lhs = a.multiply(&b).unwrap().act_on(&f).unwrap();
            let rhs = a.act_on(&b.act_on(&f).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
