//! Truncated multivariate power series over `t̃_0 … t̃_K` with exact
//! coefficients.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{bail, Result};
use crate::rational::{int, Rational};

/// Exponent vector; entry `i` is the power of `t̃_i`. Trailing zeros are
/// never stored, so equal monomials compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(e: impl Into<Vec<u32>>) -> Self {
        let mut e = e.into();
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    /// `∏ t̃_{k}` over a list of indices (repeats allowed).
    pub fn from_indices(indices: &[u32]) -> Self {
        let mut e = Vec::new();
        for &k in indices {
            let k = k as usize;
            if e.len() <= k {
                e.resize(k + 1, 0);
            }
            e[k] += 1;
        }
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest index with a positive exponent, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Indices with multiplicity, smallest first.
    pub fn indices(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            out.extend(core::iter::repeat(i as u32).take(e as usize));
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let e: Vec<u32> = (0..n).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial(e)
    }

    /// Multiplies by `t̃_i^{+1}`.
    pub fn raise(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        if e.len() <= i {
            e.resize(i + 1, 0);
        }
        e[i] += 1;
        Monomial(e)
    }

    /// Divides by `t̃_i`; `None` if the exponent is zero.
    pub fn lower(&self, i: usize) -> Option<Monomial> {
        if self.exponent(i) == 0 {
            return None;
        }
        Some(Monomial::from_exponents({
            let mut e = self.0.clone();
            e[i] -= 1;
            e
        }))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "t{i}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Finitely supported series, truncated to degree `≤ max_degree` and
/// variables `t̃_0 … t̃_{max_index}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSeries {
    max_index: usize,
    max_degree: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparseSeries {
    pub fn new(max_index: usize, max_degree: u32) -> Self {
        SparseSeries { max_index, max_degree, terms: BTreeMap::new() }
    }

    pub fn constant(max_index: usize, max_degree: u32, c: Rational) -> Self {
        let mut s = Self::new(max_index, max_degree);
        s.add_term(Monomial::one(), c);
        s
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn in_window(&self, m: &Monomial) -> bool {
        m.degree() <= self.max_degree && m.max_index().map_or(true, |i| i <= self.max_index)
    }

    /// Adds `c·m`; monomials outside the window are dropped.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || !self.in_window(&m) {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Same coefficients on a smaller window.
    pub fn restrict(&self, max_index: usize, max_degree: u32) -> SparseSeries {
        let mut out = SparseSeries::new(max_index.min(self.max_index), max_degree.min(self.max_degree));
        for (m, c) in &self.terms {
            if out.in_window(m) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn add(&self, other: &SparseSeries) -> SparseSeries {
        let mut out = SparseSeries::new(
            self.max_index.min(other.max_index),
            self.max_degree.min(other.max_degree),
        );
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> SparseSeries {
        let mut out = SparseSeries::new(self.max_index, self.max_degree);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &SparseSeries) -> SparseSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &SparseSeries) -> SparseSeries {
        let mut out = SparseSeries::new(
            self.max_index.min(other.max_index),
            self.max_degree.min(other.max_degree),
        );
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.degree() + b.degree() <= out.max_degree {
                    out.add_term(a.mul(b), x * y);
                }
            }
        }
        out
    }

    /// Homogeneous components by degree, `0..=max_degree`.
    fn components(&self) -> Vec<Vec<(Monomial, Rational)>> {
        let mut out = alloc::vec![Vec::new(); self.max_degree as usize + 1];
        for (m, c) in &self.terms {
            out[m.degree() as usize].push((m.clone(), c.clone()));
        }
        out
    }

    /// `exp(self)` for a series without constant term.
    pub fn exp(&self) -> Result<SparseSeries> {
        if !self.coefficient(&Monomial::one()).is_zero() {
            bail!(InvalidArgument, "exp needs a series with zero constant term");
        }
        let f = self.components();
        let d = self.max_degree as usize;
        let mut g: Vec<BTreeMap<Monomial, Rational>> = alloc::vec![BTreeMap::new(); d + 1];
        g[0].insert(Monomial::one(), Rational::one());
        // n G_n = Σ_{j=1}^n j F_j G_{n-j}
        for n in 1..=d {
            let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
            for j in 1..=n {
                let jj = int(j as i64);
                for (a, x) in &f[j] {
                    let xj = x * &jj;
                    for (b, y) in &g[n - j] {
                        *acc.entry(a.mul(b)).or_insert_with(Rational::zero) += &xj * y;
                    }
                }
            }
            let inv = Rational::new(1.into(), (n as i64).into());
            acc.retain(|_, v| !v.is_zero());
            for v in acc.values_mut() {
                *v *= &inv;
            }
            g[n] = acc;
        }
        let mut out = SparseSeries::new(self.max_index, self.max_degree);
        for comp in g {
            for (m, c) in comp {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// `log(self)` for a series with constant term one.
    pub fn log(&self) -> Result<SparseSeries> {
        if self.coefficient(&Monomial::one()) != Rational::one() {
            bail!(InvalidArgument, "log needs a series with constant term 1");
        }
        let g = self.components();
        let d = self.max_degree as usize;
        let mut f: Vec<Vec<(Monomial, Rational)>> = alloc::vec![Vec::new(); d + 1];
        // n F_n = n G_n - Σ_{j=1}^{n-1} j F_j G_{n-j}
        for n in 1..=d {
            let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
            for (m, c) in &g[n] {
                *acc.entry(m.clone()).or_insert_with(Rational::zero) += c * int(n as i64);
            }
            for j in 1..n {
                let jj = int(j as i64);
                for (a, x) in &f[j] {
                    let xj = x * &jj;
                    for (b, y) in &g[n - j] {
                        *acc.entry(a.mul(b)).or_insert_with(Rational::zero) -= &xj * y;
                    }
                }
            }
            let inv = Rational::new(1.into(), (n as i64).into());
            f[n] = acc
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(m, v)| (m, v * &inv))
                .collect();
        }
        let mut out = SparseSeries::new(self.max_index, self.max_degree);
        for comp in f {
            for (m, c) in comp {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn monomial_normal_form() {
        assert_eq!(Monomial::from_exponents(alloc::vec![1, 0, 0]), Monomial::from_indices(&[0]));
        assert_eq!(Monomial::from_indices(&[2, 0, 2]).exponents(), &[1, 0, 2]);
        assert_eq!(Monomial::from_indices(&[1]).lower(1), Some(Monomial::one()));
    }

    #[test]
    fn exp_of_linear_term() {
        let mut s = SparseSeries::new(2, 4);
        s.add_term(Monomial::from_indices(&[1]), int(1));
        let e = s.exp().unwrap();
        assert_eq!(e.coefficient(&Monomial::from_indices(&[1, 1, 1])), ratio(1, 6));
        assert_eq!(e.len(), 5);
        assert_eq!(e.log().unwrap(), s);
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut s = SparseSeries::new(1, 2);
        s.add_term(Monomial::from_indices(&[0]), int(2));
        s.add_term(Monomial::from_indices(&[0]), int(-2));
        assert!(s.is_zero());
    }
}
