//! Factorials and the cut/join moves on partitions.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{bail, Result};
use crate::partition::Partition;
use crate::rational::{ratio, Rational};

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `m!!` for `m ≥ -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> Result<BigInt> {
    if m < -1 {
        bail!(InvalidArgument, "double factorial of {m}");
    }
    let mut acc = BigInt::one();
    let mut k = m;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

/// `(2k+1)!!` for `k ≥ 0`; infallible shorthand.
pub fn odd_double_factorial(k: u32) -> BigInt {
    double_factorial(2 * k as i64 + 1).expect("argument is positive")
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    /// Merge the parts at sorted positions `i < j`.
    Join { i: usize, j: usize },
    /// Split the part at sorted position `i` into `p ≤ μ_i - p` and `μ_i - p`.
    Cut { i: usize, p: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutJoinMove {
    pub kind: MoveKind,
    pub source: Partition,
    pub result: Partition,
    pub weight: Rational,
}

impl CutJoinMove {
    /// How many parts of `result` could have been produced by this move:
    /// the multiplicity of the merged part for a join, and the number of
    /// ordered choices of the two new parts for a cut.
    pub fn result_multiplicity(&self) -> usize {
        match self.kind {
            MoveKind::Join { i, j } => {
                let v = self.source.parts()[i] + self.source.parts()[j];
                self.result.multiplicity(v)
            }
            MoveKind::Cut { i, p } => {
                let q = self.source.parts()[i] - p;
                let mp = self.result.multiplicity(p);
                if p == q {
                    mp * (mp - 1)
                } else {
                    mp * self.result.multiplicity(q)
                }
            }
        }
    }
}

/// Distinct joins and cuts of `mu`; equal parts give a single move.
pub fn cut_join_moves(mu: &Partition) -> Vec<CutJoinMove> {
    let parts = mu.parts();
    let mut out = Vec::new();
    let mut seen: Vec<(u32, u32)> = Vec::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let (a, b) = (parts[i], parts[j]);
            if seen.contains(&(a, b)) {
                continue;
            }
            seen.push((a, b));
            let delta = if a == b { 2 } else { 1 };
            out.push(CutJoinMove {
                kind: MoveKind::Join { i, j },
                source: mu.clone(),
                result: mu.join(i, j),
                weight: ratio((a + b) as i64, delta),
            });
        }
    }
    for i in 0..parts.len() {
        if i > 0 && parts[i] == parts[i - 1] {
            continue;
        }
        let v = parts[i];
        for p in 1..=v / 2 {
            let q = v - p;
            let delta = if p == q { 2 } else { 1 };
            out.push(CutJoinMove {
                kind: MoveKind::Cut { i, p },
                source: mu.clone(),
                result: mu.cut(i, p),
                weight: ratio((p * q) as i64, delta),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial(-1).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial(0).unwrap(), BigInt::from(1));
        assert_eq!(double_factorial(5).unwrap(), BigInt::from(15));
        assert_eq!(double_factorial(9).unwrap(), BigInt::from(9 * 7 * 5 * 3));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn moves_examples() {
        assert!(cut_join_moves(&p(&[1])).is_empty());

        let m = cut_join_moves(&p(&[2]));
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].result, p(&[1, 1]));
        assert_eq!(m[0].weight, ratio(1, 2));

        let m = cut_join_moves(&p(&[2, 1]));
        assert_eq!(m.len(), 2);
        assert_eq!((m[0].result.clone(), m[0].weight.clone()), (p(&[3]), int(3)));
        assert_eq!((m[1].result.clone(), m[1].weight.clone()), (p(&[1, 1, 1]), ratio(1, 2)));
    }

    #[test]
    fn repeated_parts_give_single_moves() {
        let m = cut_join_moves(&p(&[2, 2, 2]));
        // one join (2,2)->4, one cut 2->(1,1)
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].weight, int(2));
        assert_eq!(m[0].result_multiplicity(), 1);
        assert_eq!(m[1].result_multiplicity(), 2);
    }
}
