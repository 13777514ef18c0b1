//! Exact Gaussian elimination over the rationals.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub x: Vec<Rational>,
    pub rank: usize,
    /// `A x - b`, one entry per equation.
    pub residuals: Vec<Rational>,
}

/// Solves `A x = b` for a unique `x`; `A` may have more rows than columns.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Result<LinearSolution> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if b.len() != rows || a.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument(alloc::format!("ragged {rows}x{cols} system")));
    }
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        order.swap(rank, p);
        let inv = m[rank][c].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if let Some(r) = (rank..rows).find(|&r| !m[r][cols].is_zero()) {
        return Err(Error::Inconsistent(order[r]));
    }
    if rank < cols {
        return Err(Error::Underdetermined { rank, unknowns: cols });
    }
    let mut x = alloc::vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    let residuals = a
        .iter()
        .zip(b)
        .map(|(row, v)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<Rational>() - v)
        .collect();
    Ok(LinearSolution { x, rank, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn overdetermined_consistent() {
        let a = alloc::vec![
            alloc::vec![int(1), int(1)],
            alloc::vec![int(1), int(-1)],
            alloc::vec![int(2), int(0)],
        ];
        let b = alloc::vec![int(3), int(1), int(4)];
        let s = solve_exact(&a, &b).unwrap();
        assert_eq!(s.x, alloc::vec![int(2), int(1)]);
        assert!(s.residuals.iter().all(|r| r.is_zero()));
    }

    #[test]
    fn detects_inconsistency_and_rank_deficit() {
        let a = alloc::vec![alloc::vec![int(1), int(1)], alloc::vec![int(2), int(2)]];
        assert!(matches!(solve_exact(&a, &[int(1), int(3)]), Err(Error::Inconsistent(1))));
        assert!(matches!(
            solve_exact(&a, &[int(1), int(2)]),
            Err(Error::Underdetermined { rank: 1, unknowns: 2 })
        ));
        let s = solve_exact(&[alloc::vec![int(3)]], &[ratio(1, 2)]).unwrap();
        assert_eq!(s.x[0], ratio(1, 6));
    }
}
