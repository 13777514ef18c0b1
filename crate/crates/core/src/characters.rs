//! Irreducible characters of symmetric groups by the Murnaghan–Nakayama
//! rule, computed on beta-sets.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::partition::Partition;

#[derive(Clone, Debug)]
pub struct CharacterTable {
    degree: u32,
    partitions: Vec<Partition>,
    /// `values[irrep][class]`, both indexed like `partitions`.
    values: Vec<Vec<i64>>,
}

type Memo = BTreeMap<(Vec<u32>, Vec<u32>), i64>;

impl CharacterTable {
    pub fn new(degree: u32) -> Self {
        let partitions = Partition::all_of_size(degree);
        let mut memo = Memo::new();
        let values = partitions
            .iter()
            .map(|lambda| {
                partitions
                    .iter()
                    .map(|rho| murnaghan_nakayama(lambda.parts(), rho.parts(), &mut memo))
                    .collect()
            })
            .collect();
        CharacterTable { degree, partitions, values }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    fn index(&self, p: &Partition) -> Result<usize> {
        match self.partitions.iter().position(|q| q == p) {
            Some(i) => Ok(i),
            None => bail!(InvalidArgument, "{p} is not a partition of {}", self.degree),
        }
    }

    /// `χ_λ` evaluated on the class of cycle type `rho`.
    pub fn value(&self, lambda: &Partition, rho: &Partition) -> Result<i64> {
        Ok(self.values[self.index(lambda)?][self.index(rho)?])
    }

    pub fn row(&self, irrep: usize) -> &[i64] {
        &self.values[irrep]
    }

    /// `f_λ = χ_λ(1^d)`.
    pub fn dimension(&self, irrep: usize) -> i64 {
        let id = self.partitions.len() - 1;
        self.values[irrep][id]
    }

    /// Sum of contents of `λ`, i.e. `C(d,2) χ_λ(τ) / f_λ` for a transposition `τ`.
    pub fn content_sum(&self, irrep: usize) -> i64 {
        self.partitions[irrep]
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &len)| (0..len as i64).map(|j| j - i as i64).sum::<i64>())
            .sum()
    }
}

fn murnaghan_nakayama(lambda: &[u32], rho: &[u32], memo: &mut Memo) -> i64 {
    let Some((&h, rest)) = rho.split_first() else {
        return if lambda.is_empty() { 1 } else { 0 };
    };
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let len = lambda.len();
    let beta: Vec<u32> = lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| l + (len - 1 - i) as u32)
        .collect();
    let mut total = 0i64;
    for &b in &beta {
        if b < h || beta.contains(&(b - h)) {
            continue;
        }
        let target = b - h;
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb: Vec<u32> = beta.iter().map(|&x| if x == b { target } else { x }).collect();
        nb.sort_unstable_by(|x, y| y.cmp(x));
        let mut nl: Vec<u32> = nb
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i) as u32)
            .collect();
        while nl.last() == Some(&0) {
            nl.pop();
        }
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * murnaghan_nakayama(&nl, rest, memo);
    }
    memo.insert(key, total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn s3_table() {
        let t = CharacterTable::new(3);
        let p = |v: &[u32]| Partition::new(v.to_vec()).unwrap();
        assert_eq!(t.value(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(t.value(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        assert_eq!(t.value(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap(), -1);
        assert_eq!(t.value(&p(&[3]), &p(&[2, 1])).unwrap(), 1);
    }

    #[test]
    fn orthogonality_up_to_eight() {
        for d in 1..=8u32 {
            let t = CharacterTable::new(d);
            let fact: i64 = (1..=d as i64).product();
            let z: Vec<i64> = t
                .partitions()
                .iter()
                .map(|c| i64::try_from(c.z_order()).unwrap())
                .collect();
            let n = t.partitions().len();
            for a in 0..n {
                for b in 0..n {
                    let row: i64 = (0..n).map(|c| t.row(a)[c] * t.row(b)[c] * fact / z[c]).sum();
                    assert_eq!(row, if a == b { fact } else { 0 });
                    let col: i64 = (0..n).map(|l| t.row(l)[a] * t.row(l)[b]).sum();
                    assert_eq!(col, if a == b { z[a] } else { 0 });
                }
            }
        }
    }

    #[test]
    fn content_sum_matches_transposition_character() {
        let t = CharacterTable::new(6);
        let tau = Partition::new(alloc::vec![2, 1, 1, 1, 1]).unwrap();
        let ti = t.partitions().iter().position(|q| *q == tau).unwrap();
        for i in 0..t.partitions().len() {
            assert_eq!(BigInt::from(15 * t.row(i)[ti]), BigInt::from(t.content_sum(i) * t.dimension(i)));
        }
    }
}
