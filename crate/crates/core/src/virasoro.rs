//! Virasoro operators `L_n`, `n ≥ -1`, acting on truncated series in the
//! rescaled times `t̃_k`, and the residual checks `L_n τ = 0`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{bail, Result};
use crate::partition::Partition;
use crate::psi::{exponent_multisets, CorrelatorCache, CorrelatorKey};
use crate::rational::{big, int, ratio, Rational};
use crate::series::{Monomial, SparseSeries};

/// Which `t̃` index the `-½ ∂` term of `L_n` differentiates for `n ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstTermConvention {
    /// `∂/∂t̃_{n+1}`, consistent with the `n = -1, 0` operators.
    Shifted,
    /// `∂/∂t̃_{n-1}`.
    Printed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirasoroOperator {
    pub index: i64,
    pub first_term_index: usize,
    /// `1/16` for `n = 0`, zero otherwise. The `¼ t̃_0²` term of `L_{-1}` is
    /// applied separately.
    pub constant: Rational,
}

impl VirasoroOperator {
    pub fn new(index: i64, convention: FirstTermConvention) -> Result<Self> {
        if index < -1 {
            bail!(InvalidArgument, "L_{index} is not defined, need n >= -1");
        }
        let first_term_index = match (index, convention) {
            (-1, _) => 0,
            (0, _) => 1,
            (n, FirstTermConvention::Shifted) => (n + 1) as usize,
            (n, FirstTermConvention::Printed) => (n - 1) as usize,
        };
        let constant = if index == 0 { ratio(1, 16) } else { Rational::zero() };
        Ok(VirasoroOperator { index, first_term_index, constant })
    }

    /// Window on which `L_n s` is fully determined by the coefficients of `s`.
    pub fn output_window(&self, s: &SparseSeries) -> Option<(usize, u32)> {
        let shift = self.index.max(0) as usize;
        if self.first_term_index > s.max_index() || shift > s.max_index() || s.max_degree() < 2 {
            return None;
        }
        Some((s.max_index() - shift, s.max_degree() - 2))
    }

    pub fn apply(&self, s: &SparseSeries) -> Result<SparseSeries> {
        let Some((k_out, d_out)) = self.output_window(s) else {
            bail!(
                InvalidArgument,
                "series window (K={}, D={}) too small for L_{}",
                s.max_index(),
                s.max_degree(),
                self.index
            );
        };
        let n = self.index;
        let f = self.first_term_index;
        let mut out = SparseSeries::new(k_out, d_out);
        let half = ratio(1, 2);
        let quarter = ratio(1, 4);
        for (m, c) in s.iter() {
            // -½ ∂_f
            if let Some(lo) = m.lower(f) {
                out.add_term(lo, -(c * &half) * int(m.exponent(f) as i64));
            }
            // Σ_k (k+½) t̃_k ∂_{k+n}
            for (j, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let k = j as i64 - n;
                if k < 0 || (n == -1 && k == 0) {
                    continue;
                }
                let moved = m.lower(j).expect("exponent positive").raise(k as usize);
                let w = Rational::new((2 * k + 1).into(), 2.into()) * int(e as i64);
                out.add_term(moved, c * w);
            }
            // ¼ Σ_{i=1}^{n} ∂_{i-1} ∂_{n-i}
            for i in 1..=n.max(0) {
                let (a, b) = ((i - 1) as usize, (n - i) as usize);
                let Some(m1) = m.lower(a) else { continue };
                let ea = m.exponent(a) as i64;
                let Some(m2) = m1.lower(b) else { continue };
                let mult = if a == b { ea * (ea - 1) } else { ea * m.exponent(b) as i64 };
                if mult != 0 {
                    out.add_term(m2, c * &quarter * int(mult));
                }
            }
            if n == -1 {
                out.add_term(m.raise(0).raise(0), c * &quarter);
            }
            if !self.constant.is_zero() {
                out.add_term(m.clone(), c * &self.constant);
            }
        }
        Ok(out)
    }
}

/// Genus forced by `3g - 3 + n = Σ k_i`, if it is a non-negative integer.
pub fn genus_of_monomial(m: &Monomial) -> Option<u32> {
    let n = m.degree() as i64;
    let sum: i64 = m.exponents().iter().enumerate().map(|(i, &e)| i as i64 * e as i64).sum();
    let three_g = sum + 3 - n;
    if three_g < 0 || three_g % 3 != 0 {
        return None;
    }
    Some((three_g / 3) as u32)
}

/// `F(t̃) = Σ ⟨∏ σ̃_{k_i}⟩_g ∏ t̃_{k_i} / ∏ m_v!` for degrees `1..=D`.
pub fn build_free_energy(cache: &mut CorrelatorCache, max_index: usize, max_degree: u32) -> SparseSeries {
    let mut f = SparseSeries::new(max_index, max_degree);
    for n in 1..=max_degree as usize {
        for idx in exponent_multisets(n, max_index as u32) {
            let m = Monomial::from_indices(&idx);
            let Some(g) = genus_of_monomial(&m) else { continue };
            let key = CorrelatorKey::new(g, idx.clone());
            let value = cache.tilde(&key);
            if value.is_zero() {
                continue;
            }
            let sym = Partition::new(idx.iter().map(|&k| k + 1).collect::<Vec<u32>>())
                .expect("parts are positive")
                .aut_order();
            f.add_term(m, value / big(sym));
        }
    }
    f
}

pub fn tau_function(cache: &mut CorrelatorCache, max_index: usize, max_degree: u32) -> Result<SparseSeries> {
    build_free_energy(cache, max_index, max_degree).exp()
}

/// `L_n τ` restricted to its reliable window; zero when the constraint holds.
pub fn virasoro_residual(
    cache: &mut CorrelatorCache,
    n: i64,
    max_index: usize,
    max_degree: u32,
    convention: FirstTermConvention,
) -> Result<SparseSeries> {
    let tau = tau_function(cache, max_index, max_degree)?;
    VirasoroOperator::new(n, convention)?.apply(&tau)
}

#[derive(Clone, Debug)]
pub struct ConventionReport {
    /// `(n, residual vanishes under Shifted, residual vanishes under Printed)`.
    pub rows: Vec<(i64, bool, bool)>,
}

impl ConventionReport {
    /// The convention under which every tested residual vanishes.
    pub fn selected(&self) -> Option<FirstTermConvention> {
        if self.rows.iter().all(|r| r.1) {
            Some(FirstTermConvention::Shifted)
        } else if self.rows.iter().all(|r| r.2) {
            Some(FirstTermConvention::Printed)
        } else {
            None
        }
    }
}

/// Tests both first-term conventions for every `n` in `ns`.
pub fn convention_report(
    cache: &mut CorrelatorCache,
    ns: &[i64],
    max_index: usize,
    max_degree: u32,
) -> Result<ConventionReport> {
    let tau = tau_function(cache, max_index, max_degree)?;
    let mut rows = Vec::new();
    for &n in ns {
        let a = VirasoroOperator::new(n, FirstTermConvention::Shifted)?.apply(&tau)?;
        let b = VirasoroOperator::new(n, FirstTermConvention::Printed)?.apply(&tau)?;
        rows.push((n, a.is_zero(), b.is_zero()));
    }
    Ok(ConventionReport { rows })
}

/// `(L_m L_n - L_n L_m) s = (m - n) L_{m+n} s` on the common window.
pub fn commutator_holds(m: i64, n: i64, s: &SparseSeries, convention: FirstTermConvention) -> Result<bool> {
    let lm = VirasoroOperator::new(m, convention)?;
    let ln = VirasoroOperator::new(n, convention)?;
    let lmn = VirasoroOperator::new(m + n, convention)?;
    let a = lm.apply(&ln.apply(s)?)?;
    let b = ln.apply(&lm.apply(s)?)?;
    let c = lmn.apply(s)?.scale(&int(m - n));
    let k = a.max_index().min(b.max_index()).min(c.max_index());
    let d = a.max_degree().min(b.max_degree()).min(c.max_degree());
    let lhs = a.restrict(k, d).sub(&b.restrict(k, d));
    Ok(lhs == c.restrict(k, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_energy_coefficients() {
        let mut cache = CorrelatorCache::new();
        let f = build_free_energy(&mut cache, 3, 3);
        assert_eq!(f.coefficient(&Monomial::from_indices(&[0, 0, 0])), ratio(1, 6));
        assert_eq!(f.coefficient(&Monomial::from_indices(&[1])), ratio(1, 8));
        assert_eq!(f.coefficient(&Monomial::from_indices(&[0, 2])), ratio(5, 8));
    }

    #[test]
    fn low_order_coefficients_of_residuals() {
        let mut cache = CorrelatorCache::new();
        let tau = tau_function(&mut cache, 4, 4).unwrap();
        let s = FirstTermConvention::Shifted;
        let l_minus = VirasoroOperator::new(-1, s).unwrap().apply(&tau).unwrap();
        assert_eq!(l_minus.coefficient(&Monomial::from_indices(&[0, 0])), int(0));
        let l0 = VirasoroOperator::new(0, s).unwrap().apply(&tau).unwrap();
        assert_eq!(l0.coefficient(&Monomial::one()), int(0));
        let l1 = VirasoroOperator::new(1, s).unwrap().apply(&tau).unwrap();
        assert_eq!(l1.coefficient(&Monomial::one()), int(0));
    }

    #[test]
    fn small_residuals_vanish() {
        let mut cache = CorrelatorCache::new();
        for n in -1..=2 {
            let r = virasoro_residual(&mut cache, n, 5, 5, FirstTermConvention::Shifted).unwrap();
            assert!(r.is_zero(), "L_{n}: {:?}", r.iter().next());
        }
    }

    #[test]
    fn printed_convention_fails() {
        let mut cache = CorrelatorCache::new();
        let report = convention_report(&mut cache, &[-1, 0, 1, 2], 5, 5).unwrap();
        assert_eq!(report.selected(), Some(FirstTermConvention::Shifted));
        assert!(!report.rows[3].2);
    }

    #[test]
    fn rejects_low_index() {
        assert!(VirasoroOperator::new(-2, FirstTermConvention::Shifted).is_err());
    }
}
