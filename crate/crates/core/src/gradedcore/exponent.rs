use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Exponent vector of a monomial `x_0^e_0 ⋯ x_{d-1}^e_{d-1}`.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(dim: usize) -> Self {
        Exponent(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Exponent(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self - other`, or `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// All exponent vectors `β ≤ self` componentwise.
    pub fn divisors(&self) -> Vec<Exponent> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=e).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Exponent).collect()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let one = Exponent(vec![0, 0]);
        let x0 = Exponent(vec![1, 0]);
        let x1 = Exponent(vec![0, 1]);
        let x0x1 = Exponent(vec![1, 1]);
        let mut v = vec![x0x1.clone(), x1.clone(), one.clone(), x0.clone()];
        v.sort();
        assert_eq!(v, vec![one, x0, x1, x0x1]);
    }

    #[test]
    fn divisors_count() {
        assert_eq!(Exponent(vec![2, 1]).divisors().len(), 6);
    }
}
