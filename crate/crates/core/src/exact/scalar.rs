use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // huge numerator/denominator: scale both down before dividing
        _ => {
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRational { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        GaussRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussRational { re: &self.re * r, im: &self.im * r }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        GaussRational::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        GaussRational::real(Rational::one())
    }
}

impl Add for GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: GaussRational) -> GaussRational {
        GaussRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: GaussRational) -> GaussRational {
        &self * &rhs
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: -self.re, im: -self.im }
    }
}

/// Exponents of the two formal indeterminates a coefficient may carry.
///
/// `hbar` is Planck's constant, kept formal in the exact layer. `tau` is the
/// ordering parameter of the Shubin rule when it is carried formally; plain
/// coefficients always have `tau == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Power {
    pub hbar: u32,
    pub tau: u32,
}

/// Polynomial in formal `ħ` (and optionally formal `τ`) over the Gaussian
/// rationals. This is the coefficient ring of every exact object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Power, GaussRational>,
}

impl Scalar {
    pub fn from_gauss(g: GaussRational) -> Self {
        Self::monomial(Power::default(), g)
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_gauss(GaussRational::real(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rational(num, den))
    }

    pub fn monomial(power: Power, g: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(power, g);
        }
        Scalar { terms }
    }

    pub fn i() -> Self {
        Self::from_gauss(GaussRational::i())
    }

    pub fn hbar() -> Self {
        Self::monomial(Power { hbar: 1, tau: 0 }, GaussRational::one())
    }

    /// The formal ordering parameter `τ`.
    pub fn tau() -> Self {
        Self::monomial(Power { hbar: 0, tau: 1 }, GaussRational::one())
    }

    /// `iħ`, the value of the commutator `[x̂, p̂]`.
    pub fn i_hbar() -> Self {
        Self::monomial(Power { hbar: 1, tau: 0 }, GaussRational::i())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Power, &GaussRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&Power::default()).is_some_and(|g| g.is_one())
    }

    /// The constant Gaussian rational if this scalar has no `ħ` or `τ` dependence.
    pub fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => self.terms.get(&Power::default()).cloned(),
            _ => None,
        }
    }

    pub fn tau_degree(&self) -> u32 {
        self.terms.keys().map(|p| p.tau).max().unwrap_or(0)
    }

    pub fn hbar_degree(&self) -> u32 {
        self.terms.keys().map(|p| p.hbar).max().unwrap_or(0)
    }

    pub fn is_tau_free(&self) -> bool {
        self.tau_degree() == 0
    }

    pub fn conj(&self) -> Self {
        Scalar { terms: self.terms.iter().map(|(p, g)| (*p, g.conj())).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(p, g)| (*p, g.scale(r))).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Scalar::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes a rational value for the formal `τ`.
    pub fn eval_tau(&self, tau: &Rational) -> Self {
        let mut out = Scalar::zero();
        for (p, g) in &self.terms {
            let factor = num_traits::pow::pow(tau.clone(), p.tau as usize);
            out.add_term(Power { hbar: p.hbar, tau: 0 }, g.scale(&factor));
        }
        out
    }

    /// Exact `∫₀¹ · dτ`; the result is `τ`-free.
    pub fn integrate_tau(&self) -> Self {
        let mut out = Scalar::zero();
        for (p, g) in &self.terms {
            let w = rational(1, p.tau as i64 + 1);
            out.add_term(Power { hbar: p.hbar, tau: 0 }, g.scale(&w));
        }
        out
    }

    /// Numeric value at the given `ħ`; requires a `τ`-free scalar.
    pub fn to_complex(&self, hbar: f64) -> Option<Complex64> {
        let mut z = Complex64::new(0.0, 0.0);
        for (p, g) in &self.terms {
            if p.tau != 0 {
                return None;
            }
            z += g.to_complex() * hbar.powi(p.hbar as i32);
        }
        Some(z)
    }

    pub(crate) fn add_term(&mut self, power: Power, g: GaussRational) {
        if g.is_zero() {
            return;
        }
        match self.terms.entry(power) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(g);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &g;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (p, g) in &rhs.terms {
            self.add_term(*p, g.clone());
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (p, g) in &rhs.terms {
            out.add_term(*p, -g.clone());
        }
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (pa, ga) in &self.terms {
            for (pb, gb) in &rhs.terms {
                let p = Power { hbar: pa.hbar + pb.hbar, tau: pa.tau + pb.tau };
                out.add_term(p, ga * gb);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.into_iter().map(|(p, g)| (p, -g)).collect() }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::symlang::format_scalar(self))
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Falling factorial `n (n-1) … (n-k+1)`, the coefficient of `∂^k x^n`.
pub fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = Scalar::i();
        assert_eq!(&i * &i, Scalar::from_int(-1));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let a = &Scalar::hbar() + &Scalar::one();
        let b = &a - &Scalar::hbar();
        assert_eq!(b, Scalar::one());
        assert_eq!(b.num_terms(), 1);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn tau_average_of_powers() {
        assert_eq!(Scalar::tau().integrate_tau(), Scalar::ratio(1, 2));
        assert_eq!(Scalar::tau().pow(2).integrate_tau(), Scalar::ratio(1, 3));
        assert_eq!(Scalar::one().integrate_tau(), Scalar::one());
    }

    #[test]
    fn eval_tau_substitutes() {
        let s = &(&Scalar::one() - &Scalar::tau()) * &Scalar::hbar();
        assert_eq!(s.eval_tau(&rational(1, 4)), &Scalar::ratio(3, 4) * &Scalar::hbar());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(falling(2, 3), BigInt::zero());
    }

    #[test]
    fn to_complex_rejects_formal_tau() {
        assert!(Scalar::tau().to_complex(1.0).is_none());
        let z = (&Scalar::i_hbar() * &Scalar::ratio(1, 2)).to_complex(2.0).unwrap();
        assert_eq!(z, Complex64::new(0.0, 1.0));
    }
}
