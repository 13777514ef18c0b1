//! The cut-and-join balance `r·Γ_r(g, μ) = joins + cuts` for any source of
//! graph values `Γ_r(g, μ)`.
//!
//! Values are automorphism-normalized: `Γ_r(g, μ) = H_{g,μ} / r!`, so a
//! move that produces a partition with repeated parts is weighted by the
//! number of ways that part could have been produced.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::combinatorics::{cut_join_moves, CutJoinMove, MoveKind};
use crate::error::{bail, Result};
use crate::partition::Partition;
use crate::rational::{int, Rational};

/// Anything that can evaluate `Γ_r(g, μ)`; negative genus must give zero.
pub trait GammaSource {
    fn gamma(&mut self, genus: i64, mu: &Partition) -> Result<Rational>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaKind {
    /// `Γ_r(g, μ)` itself.
    Original,
    /// Graph obtained by joining the parts at positions `i < j`.
    Join { i: usize, j: usize },
    /// Genus-reducing graph from pinching part `i` into `(p, μ_i - p)`.
    Cut1 { i: usize, p: u32 },
    /// Sum over disconnected splittings of part `i` into `(p, μ_i - p)`,
    /// unstable vertices included.
    Cut2 { i: usize, p: u32 },
}

/// `r = 2g - 2 + |μ| + l(μ)`.
pub fn branch_points(genus: i64, mu: &Partition) -> i64 {
    2 * genus - 2 + mu.size() as i64 + mu.len() as i64
}

pub fn gamma_value<S: GammaSource + ?Sized>(
    src: &mut S,
    kind: GammaKind,
    genus: u32,
    mu: &Partition,
) -> Result<Rational> {
    let g = genus as i64;
    let parts = mu.parts();
    match kind {
        GammaKind::Original => src.gamma(g, mu),
        GammaKind::Join { i, j } => {
            if i >= j || j >= parts.len() {
                bail!(InvalidArgument, "join indices ({i}, {j}) invalid for {mu}");
            }
            src.gamma(g, &mu.join(i, j))
        }
        GammaKind::Cut1 { i, p } => {
            check_cut(mu, i, p)?;
            src.gamma(g - 1, &mu.cut(i, p))
        }
        GammaKind::Cut2 { i, p } => {
            check_cut(mu, i, p)?;
            split_sum(src, g, mu, i, p)
        }
    }
}

fn check_cut(mu: &Partition, i: usize, p: u32) -> Result<()> {
    match mu.parts().get(i) {
        Some(&v) if p >= 1 && p < v => Ok(()),
        _ => bail!(InvalidArgument, "cut ({i}, {p}) invalid for {mu}"),
    }
}

/// `Σ_{A ⊆ μ∖μ_i} Σ_{g_1+g_2=g} m_α(p) m_β(q) Γ(g_1, A+p) Γ(g_2, A^c+q)`.
fn split_sum<S: GammaSource + ?Sized>(src: &mut S, g: i64, mu: &Partition, i: usize, p: u32) -> Result<Rational> {
    let q = mu.parts()[i] - p;
    let rest = mu.without_index(i);
    let mut total = Rational::zero();
    for a in rest.sub_multisets() {
        let b = rest.difference(&a).expect("sub-multiset");
        let alpha = a.with_part(p);
        let beta = b.with_part(q);
        let mult = int((alpha.multiplicity(p) * beta.multiplicity(q)) as i64);
        for g1 in 0..=g {
            let left = src.gamma(g1, &alpha)?;
            if left.is_zero() {
                continue;
            }
            let right = src.gamma(g - g1, &beta)?;
            total += left * right * &mult;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct CutJoinTerm {
    pub mv: CutJoinMove,
    /// Move weight times result multiplicity times the graph value(s).
    pub value: Rational,
    /// For cuts: the genus-reducing part of `value`.
    pub genus_reducing: Rational,
}

#[derive(Clone, Debug)]
pub struct CutJoinBalance {
    pub genus: u32,
    pub mu: Partition,
    pub r: i64,
    pub lhs: Rational,
    pub terms: Vec<CutJoinTerm>,
}

impl CutJoinBalance {
    pub fn rhs(&self) -> Rational {
        self.terms.iter().map(|t| &t.value).sum()
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs()
    }
}

pub fn cut_join_balance<S: GammaSource + ?Sized>(src: &mut S, genus: u32, mu: &Partition) -> Result<CutJoinBalance> {
    if mu.is_empty() {
        bail!(InvalidArgument, "cut-and-join needs a non-empty partition");
    }
    let g = genus as i64;
    let r = branch_points(g, mu);
    let lhs = src.gamma(g, mu)? * int(r);
    let mut terms = Vec::new();
    for mv in cut_join_moves(mu) {
        let mult = int(mv.result_multiplicity() as i64);
        let (value, genus_reducing) = match mv.kind {
            MoveKind::Join { .. } => (src.gamma(g, &mv.result)? * &mult * &mv.weight, Rational::zero()),
            MoveKind::Cut { i, p } => {
                let c1 = src.gamma(g - 1, &mv.result)? * &mult * &mv.weight;
                let c2 = split_sum(src, g, mu, i, p)? * &mv.weight;
                (&c1 + c2, c1)
            }
        };
        terms.push(CutJoinTerm { mv, value, genus_reducing });
    }
    Ok(CutJoinBalance { genus, mu: mu.clone(), r, lhs, terms })
}
