//! Closed-form conversions between Born–Jordan, Weyl and τ symbols of
//! polynomial observables, with the Bernoulli-type coefficients they need.
//!
//! Every conversion is a finite diagonal series `Σ_α w(α) ∂_x^α ∂_p^α a`,
//! which terminates on polynomials.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rational, MultiIndex, Rational, Scalar, SymbolPoly, Var};
use crate::quantize::{Scheme, TauParam};

/// Largest `|α|` accepted by [`c_coeff_multi`] unless a larger cap is passed.
pub const DEFAULT_ORDER_CAP: u32 = 12;

/// Bernoulli numbers `B_0..=B_k` (first kind, `B_1 = −1/2`), from
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli_table(k: u32) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(k as usize + 1);
    b.push(Rational::one());
    for m in 1..=k {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m + 1, j as u32)) * bj;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

pub fn bernoulli(k: u32) -> Rational {
    bernoulli_table(k).pop().expect("table is never empty")
}

/// `c_k = (2 − 2^k) B_k`; the `k`-th derivative at zero of `x / sinh x`.
pub fn c_coeff_1d(k: u32) -> Rational {
    if k % 2 == 1 {
        return Rational::zero();
    }
    let two_k = BigInt::one() << k;
    Rational::from_integer(BigInt::from(2) - two_k) * bernoulli(k)
}

fn multi_cache() -> &'static RwLock<HashMap<MultiIndex, Rational>> {
    static CACHE: OnceLock<RwLock<HashMap<MultiIndex, Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `h(β) = Σ_{ordered tuples of nonzero even-order parts summing to β} Π −1/(γ!(|γ|+1))`,
/// by the first-part recursion `h(β) = Σ_γ −h(β−γ)/(γ!(|γ|+1))`.
fn composition_sum(beta: &MultiIndex) -> Rational {
    if beta.is_zero() {
        return Rational::one();
    }
    if let Some(v) = multi_cache().read().expect("cache poisoned").get(beta) {
        return v.clone();
    }
    let mut acc = Rational::zero();
    for gamma in MultiIndex::box_below(&beta.0) {
        let k = gamma.order();
        if k == 0 || k % 2 == 1 {
            continue;
        }
        let rest = MultiIndex(beta.0.iter().zip(&gamma.0).map(|(b, g)| b - g).collect());
        let w = Rational::new(BigInt::from(-1), gamma.factorial() * BigInt::from(k + 1));
        acc += w * composition_sum(&rest);
    }
    multi_cache().write().expect("cache poisoned").insert(beta.clone(), acc.clone());
    acc
}

/// `c_α = α! Σ_j (−1)^j Σ_{α⁽¹⁾+…+α⁽ʲ⁾ = α} Π 1/(α⁽ⁱ⁾!(|α⁽ⁱ⁾|+1))` over ordered
/// tuples of nonzero even-order parts, with `|α| ≤ DEFAULT_ORDER_CAP`.
pub fn c_coeff_multi(alpha: &MultiIndex) -> Result<Rational> {
    c_coeff_multi_capped(alpha, DEFAULT_ORDER_CAP)
}

pub fn c_coeff_multi_capped(alpha: &MultiIndex, cap: u32) -> Result<Rational> {
    if alpha.order() > cap {
        return Err(Error::OrderCap { order: alpha.order(), cap });
    }
    Ok(Rational::from_integer(alpha.factorial()) * composition_sum(alpha))
}

/// Table of reciprocal coefficients `c_α` for all `|α| ≤ max_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    pub dim: usize,
    pub max_order: u32,
    pub values: BTreeMap<MultiIndex, Rational>,
}

impl CoeffTable {
    pub fn new(dim: usize, max_order: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("dimension must be positive".into()));
        }
        let mut values = BTreeMap::new();
        for alpha in MultiIndex::box_below(&vec![max_order; dim]) {
            if alpha.order() > max_order {
                continue;
            }
            let c = if dim == 1 {
                c_coeff_1d(alpha.order())
            } else {
                c_coeff_multi_capped(&alpha, max_order)?
            };
            values.insert(alpha, c);
        }
        Ok(CoeffTable { dim, max_order, values })
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<&Rational> {
        self.values.get(alpha)
    }
}

/// `Σ_α w(α) ∂_x^α ∂_p^α a`; `w` returns `None` for skipped orders.
pub fn diagonal_series(
    a: &SymbolPoly,
    weight: impl Fn(&MultiIndex) -> Result<Option<Scalar>>,
) -> Result<SymbolPoly> {
    let n = a.dim();
    let mut bound = Vec::with_capacity(n);
    for j in 0..n {
        bound.push(a.degree_in(Var::x(j))?.min(a.degree_in(Var::p(j))?));
    }
    let mut out = SymbolPoly::zero(n);
    for alpha in MultiIndex::box_below(&bound) {
        let Some(w) = weight(&alpha)? else { continue };
        if w.is_zero() {
            continue;
        }
        let mut d = a.clone();
        for (j, &k) in alpha.0.iter().enumerate() {
            d = d.differentiate(Var::x(j), k)?.differentiate(Var::p(j), k)?;
        }
        out = &out + &d.scale(&w);
    }
    Ok(out)
}

fn half_i_hbar_pow(k: u32) -> Scalar {
    (&Scalar::i_hbar() * &Scalar::ratio(1, 2)).pow(k)
}

/// Weyl symbol of the Born–Jordan quantization of `a`:
/// `Σ_{|α| even} (iħ/2)^|α| / (α!(|α|+1)) ∂_x^α ∂_p^α a`.
pub fn bj_to_weyl(a: &SymbolPoly) -> SymbolPoly {
    diagonal_series(a, |alpha| {
        let k = alpha.order();
        if k % 2 == 1 {
            return Ok(None);
        }
        let w = Rational::new(BigInt::one(), alpha.factorial() * BigInt::from(k + 1));
        Ok(Some(half_i_hbar_pow(k).scale(&w)))
    })
    .expect("variables come from the symbol itself")
}

/// Born–Jordan symbol with the same operator as the Weyl symbol `a`:
/// `Σ_{|α| even} (c_α/α!) (iħ/2)^|α| ∂_x^α ∂_p^α a`.
pub fn weyl_to_bj(a: &SymbolPoly) -> Result<SymbolPoly> {
    let one_dim = a.dim() == 1;
    diagonal_series(a, |alpha| {
        let k = alpha.order();
        if k % 2 == 1 {
            return Ok(None);
        }
        let c = if one_dim { c_coeff_1d(k) } else { c_coeff_multi(alpha)? };
        let w = c / Rational::from_integer(alpha.factorial());
        Ok(Some(half_i_hbar_pow(k).scale(&w)))
    })
}

/// τ-symbol of the Born–Jordan quantization of `a`:
/// `Σ_α (iħ)^|α| (τ^{|α|+1} − (τ−1)^{|α|+1}) / (α!(|α|+1)) ∂_x^α ∂_p^α a`.
pub fn bj_to_tau(a: &SymbolPoly, tau: &TauParam) -> SymbolPoly {
    let t = tau.scalar();
    let t_minus = &t - &Scalar::one();
    diagonal_series(a, |alpha| {
        let k = alpha.order();
        let diff = &t.pow(k + 1) - &t_minus.pow(k + 1);
        let w = Rational::new(BigInt::one(), alpha.factorial() * BigInt::from(k + 1));
        Ok(Some((&Scalar::i_hbar().pow(k) * &diff).scale(&w)))
    })
    .expect("variables come from the symbol itself")
}

/// Re-expresses a `from`-symbol as a `to`-symbol of the same operator:
/// `Σ_α (iħ(τ_to − τ_from))^|α| / α! ∂_x^α ∂_p^α a`.
pub fn tau_shift(a: &SymbolPoly, from: &TauParam, to: &TauParam) -> SymbolPoly {
    let step = &Scalar::i_hbar() * &(&to.scalar() - &from.scalar());
    diagonal_series(a, |alpha| {
        let w = Rational::new(BigInt::one(), alpha.factorial());
        Ok(Some(step.pow(alpha.order()).scale(&w)))
    })
    .expect("variables come from the symbol itself")
}

/// Symbol under `to` of the operator whose `from`-symbol is `a`; routes through Weyl
/// except for the direct Born–Jordan→τ and τ→τ series.
pub fn convert_symbol(a: &SymbolPoly, from: &Scheme, to: &Scheme) -> Result<SymbolPoly> {
    if !a.is_tau_free() {
        return Err(Error::FormalTau("converting a symbol that carries tau"));
    }
    let half = TauParam::value(1, 2);
    let weyl = match (from, to) {
        (Scheme::BornJordan, Scheme::Tau(t)) => return Ok(bj_to_tau(a, t)),
        (Scheme::Tau(s), Scheme::Tau(t)) => return Ok(tau_shift(a, s, t)),
        (Scheme::Weyl, _) => a.clone(),
        (Scheme::BornJordan, _) => bj_to_weyl(a),
        (Scheme::Tau(t), _) => tau_shift(a, t, &half),
    };
    match to {
        Scheme::Weyl => Ok(weyl),
        Scheme::BornJordan => weyl_to_bj(&weyl),
        Scheme::Tau(t) => Ok(tau_shift(&weyl, &half, t)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Weyl symbol of the Born–Jordan operator of `x^r p^s`.
    WeylOfBj,
    /// Born–Jordan symbol of the Weyl operator of `x^r p^s`.
    BjOfWeyl,
}

/// One-dimensional monomial conversions as explicit finite sums over even `k`.
pub fn monomial_closed_form(direction: Direction, r: u32, s: u32) -> SymbolPoly {
    let mut out = SymbolPoly::zero(1);
    for k in (0..=r.min(s)).step_by(2) {
        let cc = Rational::from_integer(binomial(r, k) * binomial(s, k));
        let kf = Rational::from_integer(factorial(k));
        let w = match direction {
            Direction::WeylOfBj => kf * cc / rational(k as i64 + 1, 1),
            Direction::BjOfWeyl => kf * cc * c_coeff_1d(k),
        };
        let mono = SymbolPoly::monomial(
            1,
            &[(Var::x(0), r - k), (Var::p(0), s - k)],
            half_i_hbar_pow(k).scale(&w),
        )
        .expect("one-dimensional variables");
        out = &out + &mono;
    }
    out
}
