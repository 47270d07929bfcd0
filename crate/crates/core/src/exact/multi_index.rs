use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use super::scalar::factorial;

/// Multi-index `α ∈ ℕⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α|`
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// All `β` with `0 ≤ β ≤ bound` componentwise, in lexicographic order.
    pub fn box_below(bound: &[u32]) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(bound.len()))];
        for &b in bound {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=b).map(move |k| {
                        let mut v = m.0.clone();
                        v.push(k);
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, a) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Concatenated exponent vector of a polynomial term, ordered graded
/// lexicographically: first by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_factorial() {
        let a = MultiIndex(vec![2, 3]);
        assert_eq!(a.order(), 5);
        assert_eq!(a.factorial(), BigInt::from(12));
    }

    #[test]
    fn box_enumeration() {
        let all = MultiIndex::box_below(&[1, 2]);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], MultiIndex(vec![0, 0]));
        assert_eq!(all[5], MultiIndex(vec![1, 2]));
    }

    #[test]
    fn graded_lex() {
        let a = Exponents(vec![0, 2]);
        let b = Exponents(vec![1, 1]);
        let c = Exponents(vec![3, 0]);
        assert!(a < b);
        assert!(b < c);
        assert!(Exponents(vec![0, 0]) < a);
    }
}
