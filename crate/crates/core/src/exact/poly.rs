use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::multi_index::Exponents;
use super::scalar::{falling, Rational, Scalar};
use crate::error::{Error, Result};

/// A block of `n` variables: positions `x`, secondary positions `y` (amplitudes
/// only), or momenta `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    X,
    Y,
    P,
}

/// Variable layout of a commutative polynomial type.
pub trait Layout: Clone + fmt::Debug + PartialEq + Eq + Default + 'static {
    const BLOCKS: &'static [Block];
}

/// Phase space `z = (x, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PhaseSpace;

/// Amplitude space `(x, y, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Amplitude;

impl Layout for PhaseSpace {
    const BLOCKS: &'static [Block] = &[Block::X, Block::P];
}

impl Layout for Amplitude {
    const BLOCKS: &'static [Block] = &[Block::X, Block::Y, Block::P];
}

/// A single variable; `index` is zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub block: Block,
    pub index: usize,
}

impl Var {
    pub fn x(index: usize) -> Self {
        Var { block: Block::X, index }
    }
    pub fn y(index: usize) -> Self {
        Var { block: Block::Y, index }
    }
    pub fn p(index: usize) -> Self {
        Var { block: Block::P, index }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.block {
            Block::X => "x",
            Block::Y => "y",
            Block::P => "p",
        };
        write!(f, "{}{}", name, self.index + 1)
    }
}

/// Sparse commutative polynomial over [`Scalar`] in the variables of layout `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<L: Layout> {
    dim: usize,
    terms: BTreeMap<Exponents, Scalar>,
    layout: PhantomData<L>,
}

/// Classical observable `a(x, p)`.
pub type SymbolPoly = Poly<PhaseSpace>;
/// Amplitude `b(x, y, p)`.
pub type AmplitudePoly = Poly<Amplitude>;

/// `constant + Σ coeff·var`, used as the right-hand side of a substitution.
#[derive(Clone, Debug)]
pub struct Affine<L: Layout> {
    pub constant: Scalar,
    pub linear: Vec<(Var, Scalar)>,
    layout: PhantomData<L>,
}

impl<L: Layout> Affine<L> {
    pub fn new(constant: Scalar, linear: Vec<(Var, Scalar)>) -> Self {
        Affine { constant, linear, layout: PhantomData }
    }

    pub fn var(v: Var) -> Self {
        Self::new(Scalar::zero(), vec![(v, Scalar::one())])
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(c, Vec::new())
    }

    pub fn to_poly(&self, dim: usize) -> Result<Poly<L>> {
        let mut out = Poly::constant(dim, self.constant.clone());
        for (v, c) in &self.linear {
            out = &out + &Poly::var(dim, *v)?.scale(c);
        }
        Ok(out)
    }
}

impl<L: Layout> Poly<L> {
    pub fn zero(dim: usize) -> Self {
        Poly { dim, terms: BTreeMap::new(), layout: PhantomData }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut out = Self::zero(dim);
        out.add_term(Exponents(vec![0; Self::nvars_for(dim)]), c);
        out
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Scalar::one())
    }

    pub fn var(dim: usize, v: Var) -> Result<Self> {
        Self::monomial(dim, &[(v, 1)], Scalar::one())
    }

    /// `coeff · Π vᵉ` from a list of `(variable, exponent)` pairs.
    pub fn monomial(dim: usize, factors: &[(Var, u32)], coeff: Scalar) -> Result<Self> {
        let mut e = vec![0; Self::nvars_for(dim)];
        for (v, k) in factors {
            e[Self::slot_for(dim, *v)?] += k;
        }
        let mut out = Self::zero(dim);
        out.add_term(Exponents(e), coeff);
        Ok(out)
    }

    /// Builds a polynomial from raw exponent vectors laid out block by block.
    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Result<Self> {
        let mut out = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != out.nvars() {
                return Err(Error::DimensionMismatch { left: out.nvars(), right: e.len() });
            }
            out.add_term(Exponents(e), c);
        }
        Ok(out)
    }

    fn nvars_for(dim: usize) -> usize {
        L::BLOCKS.len() * dim
    }

    fn slot_for(dim: usize, v: Var) -> Result<usize> {
        let block = L::BLOCKS
            .iter()
            .position(|b| *b == v.block)
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))?;
        if v.index >= dim {
            return Err(Error::UnknownVariable(v.to_string()));
        }
        Ok(block * dim + v.index)
    }

    pub fn slot(&self, v: Var) -> Result<usize> {
        Self::slot_for(self.dim, v)
    }

    pub fn var_at(&self, slot: usize) -> Var {
        Var { block: L::BLOCKS[slot / self.dim], index: slot % self.dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        Self::nvars_for(self.dim)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> Scalar {
        self.terms.get(&Exponents(e.to_vec())).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Exponents::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> Result<u32> {
        let s = self.slot(v)?;
        Ok(self.terms.keys().map(|e| e.0[s]).max().unwrap_or(0))
    }

    pub fn tau_degree(&self) -> u32 {
        self.terms.values().map(Scalar::tau_degree).max().unwrap_or(0)
    }

    pub fn is_tau_free(&self) -> bool {
        self.tau_degree() == 0
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

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "polynomial dimension mismatch");
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.map_coefficients(|c| c.scale(r))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), f(a));
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.map_coefficients(Scalar::conj)
    }

    pub fn eval_tau(&self, tau: &Rational) -> Self {
        self.map_coefficients(|c| c.eval_tau(tau))
    }

    /// Coefficientwise `∫₀¹ · dτ` over the formal ordering parameter.
    pub fn integrate_tau(&self) -> Self {
        self.map_coefficients(Scalar::integrate_tau)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.dim);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact partial derivative `∂ᵛ^order`.
    pub fn differentiate(&self, v: Var, order: u32) -> Result<Self> {
        let s = self.slot(v)?;
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e.0[s] < order {
                continue;
            }
            let mut ne = e.0.clone();
            ne[s] -= order;
            let k = falling(e.0[s], order);
            out.add_term(Exponents(ne), c.scale(&Rational::from_integer(k)));
        }
        Ok(out)
    }

    /// Composes with one affine replacement per variable, possibly into a
    /// different layout (e.g. `x ↦ (1-τ)x + τy` from symbols to amplitudes).
    pub fn map_vars<M: Layout>(
        &self,
        target_dim: usize,
        replace: impl Fn(Var) -> Affine<M>,
    ) -> Result<Poly<M>> {
        let n = self.nvars();
        let images = (0..n)
            .map(|s| replace(self.var_at(s)).to_poly(target_dim))
            .collect::<Result<Vec<_>>>()?;
        // power caches, grown lazily
        let mut powers: Vec<Vec<Poly<M>>> = vec![vec![Poly::one(target_dim)]; n];
        let mut out = Poly::zero(target_dim);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target_dim, c.clone());
            for (s, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[s].len() <= k as usize {
                    let next = powers[s].last().unwrap() * &images[s];
                    powers[s].push(next);
                }
                term = &term * &powers[s][k as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Replaces `v` by an affine combination of variables of the same layout.
    pub fn substitute_affine(&self, v: Var, replacement: &Affine<L>) -> Result<Self> {
        self.slot(v)?;
        for (w, _) in &replacement.linear {
            self.slot(*w)?;
        }
        self.map_vars(self.dim, |w| {
            if w == v {
                replacement.clone()
            } else {
                Affine::var(w)
            }
        })
    }

    /// Numeric value at `point` (one entry per variable, block order); `None`
    /// if a coefficient still carries a formal `τ`.
    pub fn evaluate(&self, hbar: f64, point: &[f64]) -> Option<Complex64> {
        debug_assert_eq!(point.len(), self.nvars());
        let mut z = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mono: f64 = e
                .0
                .iter()
                .zip(point)
                .map(|(&k, &v)| v.powi(k as i32))
                .product();
            z += c.to_complex(hbar)? * mono;
        }
        Some(z)
    }
}

impl SymbolPoly {
    /// `a(x, p)` viewed as an amplitude independent of `y`.
    pub fn to_amplitude_in_x(&self) -> AmplitudePoly {
        self.map_vars(self.dim, Affine::var).expect("layout embedding")
    }

    /// `a(y, p)` viewed as an amplitude independent of `x`.
    pub fn to_amplitude_in_y(&self) -> AmplitudePoly {
        self.map_vars(self.dim, |v| match v.block {
            Block::X => Affine::var(Var::y(v.index)),
            _ => Affine::var(v),
        })
        .expect("layout embedding")
    }
}

impl AmplitudePoly {
    /// Restriction to the diagonal `y = x`.
    pub fn restrict_diagonal(&self) -> SymbolPoly {
        self.map_vars(self.dim, |v| match v.block {
            Block::Y => Affine::var(Var::x(v.index)),
            _ => Affine::var(v),
        })
        .expect("layout restriction")
    }
}

impl<'a, L: Layout> Add<&'a Poly<L>> for &'a Poly<L> {
    type Output = Poly<L>;
    fn add(self, rhs: &Poly<L>) -> Poly<L> {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a, L: Layout> Sub<&'a Poly<L>> for &'a Poly<L> {
    type Output = Poly<L>;
    fn sub(self, rhs: &Poly<L>) -> Poly<L> {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a, L: Layout> Mul<&'a Poly<L>> for &'a Poly<L> {
    type Output = Poly<L>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly<L>) -> Poly<L> {
        self.check_dim(rhs);
        let mut out = Poly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect();
                out.add_term(Exponents(e), ca * cb);
            }
        }
        out
    }
}

impl<L: Layout> Add for Poly<L> {
    type Output = Poly<L>;
    fn add(self, rhs: Poly<L>) -> Poly<L> {
        &self + &rhs
    }
}

impl<L: Layout> Sub for Poly<L> {
    type Output = Poly<L>;
    fn sub(self, rhs: Poly<L>) -> Poly<L> {
        &self - &rhs
    }
}

impl<L: Layout> Mul for Poly<L> {
    type Output = Poly<L>;
    fn mul(self, rhs: Poly<L>) -> Poly<L> {
        &self * &rhs
    }
}

impl<L: Layout> Neg for Poly<L> {
    type Output = Poly<L>;
    fn neg(self) -> Poly<L> {
        self.map_coefficients(|c| -c)
    }
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::symlang::format(self))
    }
}

impl fmt::Display for AmplitudePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::symlang::format_amplitude(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rational;

    fn x() -> SymbolPoly {
        SymbolPoly::var(1, Var::x(0)).unwrap()
    }
    fn p() -> SymbolPoly {
        SymbolPoly::var(1, Var::p(0)).unwrap()
    }
    fn c(n: i64, d: i64) -> SymbolPoly {
        SymbolPoly::constant(1, Scalar::ratio(n, d))
    }

    #[test]
    fn power_rule() {
        let a = &(&x() * &x()) * &p();
        let da = a.differentiate(Var::x(0), 1).unwrap();
        assert_eq!(da, &c(2, 1) * &(&x() * &p()));
    }

    #[test]
    fn mixed_first_derivative() {
        let a = &x() * &p();
        let d = a.differentiate(Var::x(0), 1).unwrap().differentiate(Var::p(0), 1).unwrap();
        assert_eq!(d, SymbolPoly::one(1));
    }

    #[test]
    fn x_free_input_differentiates_to_zero() {
        let a = &p() * &p();
        assert!(a.differentiate(Var::x(0), 2).unwrap().is_zero());
    }

    #[test]
    fn unknown_variable_rejected() {
        let a = &x() * &p();
        assert!(matches!(a.differentiate(Var::y(0), 1), Err(Error::UnknownVariable(_))));
        assert!(matches!(a.differentiate(Var::x(3), 1), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn midpoint_substitution_expands_binomially() {
        // x -> (x + y)/2 on x^2
        let a = (&x() * &x()).to_amplitude_in_x();
        let half = Scalar::ratio(1, 2);
        let repl = Affine::new(
            Scalar::zero(),
            vec![(Var::x(0), half.clone()), (Var::y(0), half)],
        );
        let got = a.substitute_affine(Var::x(0), &repl).unwrap();
        let xa = AmplitudePoly::var(1, Var::x(0)).unwrap();
        let ya = AmplitudePoly::var(1, Var::y(0)).unwrap();
        let two = AmplitudePoly::constant(1, Scalar::from_int(2));
        let expect = (&(&(&xa * &xa) + &(&two * &(&xa * &ya))) + &(&ya * &ya))
            .scale_rational(&rational(1, 4));
        assert_eq!(got, expect);
    }

    #[test]
    fn evaluation_substitution() {
        let a = &(&x() * &x()) + &p();
        let got = a.substitute_affine(Var::x(0), &Affine::constant(Scalar::zero())).unwrap();
        assert_eq!(got, p());
    }

    #[test]
    fn formal_tau_substitution_on_degree_one() {
        let a = x().to_amplitude_in_x();
        let tau = Scalar::tau();
        let repl = Affine::new(
            Scalar::zero(),
            vec![(Var::x(0), &Scalar::one() - &tau), (Var::y(0), tau.clone())],
        );
        let got = a.substitute_affine(Var::x(0), &repl).unwrap();
        assert_eq!(got, repl.to_poly(1).unwrap());
        assert_eq!(got.tau_degree(), 1);
    }

    #[test]
    fn identity_substitution() {
        let a = &(&x() * &p()) + &c(3, 7);
        assert_eq!(a.substitute_affine(Var::x(0), &Affine::var(Var::x(0))).unwrap(), a);
    }

    #[test]
    fn evaluate_numeric() {
        let a = &(&x() * &x()) + &p().scale(&Scalar::hbar());
        let z = a.evaluate(0.5, &[2.0, 3.0]).unwrap();
        assert_eq!(z, Complex64::new(5.5, 0.0));
    }
}
