//! Integer partitions stored as weakly decreasing part sequences.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::combinatorics::factorial;
use crate::error::{bail, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts; rejects zero parts.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.contains(&0) {
            bail!(InvalidArgument, "partition parts must be positive: {parts:?}");
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(1, 1, ..., 1)` with `d` parts.
    pub fn ones(d: u32) -> Self {
        Partition(alloc::vec![1; d as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, v: u32) -> usize {
        self.0.iter().filter(|&&p| p == v).count()
    }

    /// Distinct values with multiplicities, largest value first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `|Aut μ|`: product of `m_v!` over distinct values.
    pub fn aut_order(&self) -> BigInt {
        self.multiplicities()
            .iter()
            .map(|&(_, m)| factorial(m as u32))
            .product()
    }

    /// Centralizer order `z_ν = ∏ v^{m_v} m_v!`.
    pub fn z_order(&self) -> BigInt {
        let mut z = self.aut_order();
        for &p in &self.0 {
            z *= p;
        }
        z
    }

    /// `∏ μ_i^{μ_i} / μ_i!` as an exact rational.
    pub fn hurwitz_weight(&self) -> crate::Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for &p in &self.0 {
            num *= num_traits::pow(BigInt::from(p), p as usize);
            den *= factorial(p);
        }
        crate::Rational::new(num, den)
    }

    pub fn with_part(&self, v: u32) -> Self {
        let mut parts = self.0.clone();
        let pos = parts.partition_point(|&p| p >= v);
        parts.insert(pos, v);
        Partition(parts)
    }

    pub fn without_part(&self, v: u32) -> Option<Self> {
        let pos = self.0.iter().position(|&p| p == v)?;
        let mut parts = self.0.clone();
        parts.remove(pos);
        Some(Partition(parts))
    }

    pub fn without_index(&self, i: usize) -> Self {
        let mut parts = self.0.clone();
        parts.remove(i);
        Partition(parts)
    }

    pub fn union(&self, other: &Partition) -> Self {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Merges the parts at positions `i != j`.
    pub fn join(&self, i: usize, j: usize) -> Self {
        let (a, b) = (self.0[i], self.0[j]);
        let mut parts: Vec<u32> = self
            .0
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != i && t != j)
            .map(|(_, &p)| p)
            .collect();
        let pos = parts.partition_point(|&p| p >= a + b);
        parts.insert(pos, a + b);
        Partition(parts)
    }

    /// Splits the part at position `i` into `p` and `μ_i - p`.
    pub fn cut(&self, i: usize, p: u32) -> Self {
        let v = self.0[i];
        assert!(p >= 1 && p < v, "cut {p} out of part {v}");
        self.without_index(i).with_part(p).with_part(v - p)
    }

    /// Every sub-multiset, each listed once.
    pub fn sub_multisets(&self) -> Vec<Partition> {
        let mult = self.multiplicities();
        let mut out = Vec::new();
        let mut counts = alloc::vec![0usize; mult.len()];
        loop {
            let mut parts = Vec::new();
            for (&(v, _), &c) in mult.iter().zip(&counts) {
                parts.extend(core::iter::repeat(v).take(c));
            }
            out.push(Partition(parts));
            let mut t = 0;
            loop {
                if t == mult.len() {
                    return out;
                }
                if counts[t] < mult[t].1 {
                    counts[t] += 1;
                    break;
                }
                counts[t] = 0;
                t += 1;
            }
        }
    }

    /// Multiset difference `self - other`; `None` unless `other ⊆ self`.
    pub fn difference(&self, other: &Partition) -> Option<Self> {
        let mut parts = self.0.clone();
        for &v in &other.0 {
            let pos = parts.iter().position(|&p| p == v)?;
            parts.remove(pos);
        }
        Some(Partition(parts))
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=max.min(rem)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        go(n, n, &mut cur, &mut out);
        out
    }

    /// Comma-separated parts; `-` for the empty partition.
    pub fn to_csv(&self) -> String {
        if self.0.is_empty() {
            return String::from("-");
        }
        let mut s = String::new();
        for (t, p) in self.0.iter().enumerate() {
            if t > 0 {
                s.push(',');
            }
            s.push_str(&alloc::format!("{p}"));
        }
        s
    }

    /// Inverse of [`Partition::to_csv`]; accepts any order.
    pub fn parse_csv(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in s.split(',') {
            match tok.trim().parse::<u32>() {
                Ok(v) => parts.push(v),
                Err(_) => bail!(Parse, "bad partition {s:?}"),
            }
        }
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (t, p) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn aut_examples() {
        assert_eq!(p(&[3, 2, 1]).aut_order(), BigInt::from(1));
        assert_eq!(p(&[2, 2, 2]).aut_order(), BigInt::from(6));
        assert_eq!(p(&[4, 4, 2, 1, 1, 1]).aut_order(), BigInt::from(12));
    }

    #[test]
    fn z_examples() {
        assert_eq!(p(&[1, 1]).z_order(), BigInt::from(2));
        assert_eq!(p(&[3]).z_order(), BigInt::from(3));
        assert_eq!(p(&[2, 2, 1]).z_order(), BigInt::from(8));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| Partition::all_of_size(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn sub_multisets_of_repeated() {
        let subs = p(&[2, 1, 1]).sub_multisets();
        assert_eq!(subs.len(), 6);
        assert!(subs.contains(&p(&[1, 1])));
        assert!(subs.contains(&Partition::empty()));
    }

    #[test]
    fn csv_roundtrip() {
        for q in [Partition::empty(), p(&[3, 1, 1])] {
            assert_eq!(Partition::parse_csv(&q.to_csv()).unwrap(), q);
        }
        assert!(Partition::new(alloc::vec![0, 1]).is_err());
    }

    #[test]
    fn join_and_cut() {
        assert_eq!(p(&[3, 2, 1]).join(0, 2), p(&[4, 2]));
        assert_eq!(p(&[4]).cut(0, 1), p(&[3, 1]));
    }
}
