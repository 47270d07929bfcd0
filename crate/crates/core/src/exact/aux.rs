use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::scalar::{rational, Scalar};

/// Univariate polynomial in an auxiliary integration variable `t`, with
/// [`Scalar`] coefficients (which may themselves carry a formal `τ`).
///
/// `coeffs[k]` multiplies `tᵏ`. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AuxPoly {
    coeffs: Vec<Scalar>,
}

impl AuxPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        AuxPoly { coeffs }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// The auxiliary variable `t` itself.
    pub fn variable() -> Self {
        Self::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Collapses to the base scalar when the auxiliary degree is zero.
    pub fn as_base(&self) -> Option<Scalar> {
        match self.coeffs.len() {
            0 => Some(Scalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Scalar::one()), |acc, _| &acc * self)
    }

    /// Exact `∫₀¹ · dt`, eliminating the auxiliary variable.
    pub fn integrate_unit_interval(&self) -> Scalar {
        self.coeffs.iter().enumerate().fold(Scalar::zero(), |acc, (k, c)| {
            &acc + &c.scale(&rational(1, k as i64 + 1))
        })
    }
}

impl<'a> Add<&'a AuxPoly> for &'a AuxPoly {
    type Output = AuxPoly;
    fn add(self, rhs: &AuxPoly) -> AuxPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Scalar::zero();
        AuxPoly::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).unwrap_or(&zero);
                    let b = rhs.coeffs.get(k).unwrap_or(&zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl<'a> Sub<&'a AuxPoly> for &'a AuxPoly {
    type Output = AuxPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: &AuxPoly) -> AuxPoly {
        let neg = AuxPoly::new(rhs.coeffs.iter().map(|c| -c).collect());
        self + &neg
    }
}

impl<'a> Mul<&'a AuxPoly> for &'a AuxPoly {
    type Output = AuxPoly;
    fn mul(self, rhs: &AuxPoly) -> AuxPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return AuxPoly::default();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        AuxPoly::new(out)
    }
}
