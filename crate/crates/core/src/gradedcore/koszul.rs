//! Koszul signs for permutations of graded factors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shifted degrees of an ordered word of graded factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulContext {
    pub degrees: Vec<i64>,
}

impl KoszulContext {
    pub fn new(degrees: Vec<i64>) -> Self {
        KoszulContext { degrees }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }
}

pub(crate) fn check_permutation(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &i in perm {
        if i >= perm.len() || seen[i] {
            return Err(Error::NotAPermutation(perm.to_vec()));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Sign picked up when `x_0 ⋯ x_{n−1}` is rearranged into `x_{σ(0)} ⋯ x_{σ(n−1)}`.
///
/// Each pair of factors that ends up in the opposite order contributes `(−1)^{deg·deg}`.
pub fn koszul_sign(perm: &[usize], ctx: &KoszulContext) -> Result<i8> {
    if perm.len() != ctx.len() {
        return Err(Error::SizeMismatch { perm: perm.len(), ctx: ctx.len() });
    }
    check_permutation(perm)?;
    let mut odd = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && (ctx.degrees[perm[a]] * ctx.degrees[perm[b]]).rem_euclid(2) == 1 {
                odd = !odd;
            }
        }
    }
    Ok(if odd { -1 } else { 1 })
}

/// Plain sign of a permutation.
pub fn permutation_sign(perm: &[usize]) -> Result<i8> {
    koszul_sign(perm, &KoszulContext::new(vec![1; perm.len()]))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let ctx = KoszulContext::new(vec![1, 1]);
        assert_eq!(koszul_sign(&[0, 1], &ctx).unwrap(), 1);
        assert_eq!(koszul_sign(&[1, 0], &ctx).unwrap(), -1);
        assert!(koszul_sign(&[0], &ctx).is_err());
        assert!(koszul_sign(&[0, 0], &ctx).is_err());
        let even = KoszulContext::new(vec![2, 1]);
        assert_eq!(koszul_sign(&[1, 0], &even).unwrap(), 1);
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[1, 2, 0]).unwrap(), 1);
        assert_eq!(permutation_sign(&[2, 1, 0]).unwrap(), -1);
    }
}
