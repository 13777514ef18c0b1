//! Psi-class correlators `⟨τ_{k_1} … τ_{k_n}⟩_g` by the DVV recursion.
//!
//! The recursion runs in the tilde normalization `σ̃_k = (2k+1)!! σ_k`;
//! the cache stores plain values. The distinguished insertion is always
//! the largest exponent.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{binomial, double_factorial, factorial, odd_double_factorial};
use crate::error::{bail, Result};
use crate::rational::{big, ratio, BucketSum, Rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorrelatorKey {
    genus: u32,
    exponents: Vec<u32>,
}

impl CorrelatorKey {
    pub fn new(genus: u32, exponents: impl Into<Vec<u32>>) -> Self {
        let mut exponents = exponents.into();
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        CorrelatorKey { genus, exponents }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Exponents, largest first.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// `Σ k_i = 3g - 3 + n`.
    pub fn is_dimensional(&self) -> bool {
        let sum: i64 = self.exponents.iter().map(|&k| k as i64).sum();
        sum == 3 * self.genus as i64 - 3 + self.n() as i64
    }

    pub fn is_stable(&self) -> bool {
        2 * self.genus as i64 - 2 + self.n() as i64 > 0
    }

    /// `∏ (2k_i + 1)!!`, the plain-to-tilde factor.
    pub fn tilde_factor(&self) -> BigInt {
        self.exponents.iter().map(|&k| odd_double_factorial(k)).product()
    }
}

impl fmt::Display for CorrelatorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (t, k) in self.exponents.iter().enumerate() {
            if t > 0 {
                write!(f, " ")?;
            }
            write!(f, "tau_{k}")?;
        }
        write!(f, ">_{}", self.genus)
    }
}

/// Memoized correlators, keyed by canonical [`CorrelatorKey`].
#[derive(Clone, Debug, Default)]
pub struct CorrelatorCache {
    map: BTreeMap<CorrelatorKey, Rational>,
    tilde_map: BTreeMap<CorrelatorKey, Rational>,
}

impl CorrelatorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, key: &CorrelatorKey) -> Option<&Rational> {
        self.map.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CorrelatorKey, &Rational)> {
        self.map.iter()
    }

    /// Stores a value without checking it; see [`CorrelatorCache::verify`].
    pub fn insert_unchecked(&mut self, key: CorrelatorKey, value: Rational) {
        self.tilde_map.remove(&key);
        self.map.insert(key, value);
    }

    /// Recomputes every entry from scratch and returns the first key whose
    /// stored value differs.
    pub fn verify(&self) -> Option<CorrelatorKey> {
        let mut cold = CorrelatorCache::new();
        self.map
            .iter()
            .find(|(k, v)| cold.correlator(k) != **v)
            .map(|(k, _)| k.clone())
    }

    pub fn correlator_of(&mut self, genus: u32, exponents: &[u32]) -> Rational {
        self.correlator(&CorrelatorKey::new(genus, exponents.to_vec()))
    }

    /// Plain correlator.
    pub fn correlator(&mut self, key: &CorrelatorKey) -> Rational {
        if !key.is_dimensional() || !key.is_stable() {
            return Rational::zero();
        }
        if let Some(v) = self.map.get(key) {
            return v.clone();
        }
        let v = self.compute(key);
        self.map.insert(key.clone(), v.clone());
        v
    }

    /// Tilde-normalized correlator.
    pub fn tilde(&mut self, key: &CorrelatorKey) -> Rational {
        if let Some(v) = self.tilde_map.get(key) {
            return v.clone();
        }
        let v = self.correlator(key);
        if v.is_zero() {
            return v;
        }
        let v = v * big(key.tilde_factor());
        self.tilde_map.insert(key.clone(), v.clone());
        v
    }

    fn tilde_of(&mut self, genus: u32, base: &[u32], extra: &[u32]) -> Rational {
        let n = (base.len() + extra.len()) as i64;
        let sum: i64 = base.iter().chain(extra).map(|&k| k as i64).sum();
        if sum != 3 * genus as i64 - 3 + n || 2 * genus as i64 - 2 + n <= 0 {
            return Rational::zero();
        }
        let mut e = base.to_vec();
        e.extend_from_slice(extra);
        self.tilde(&CorrelatorKey::new(genus, e))
    }

    fn compute(&mut self, key: &CorrelatorKey) -> Rational {
        let g = key.genus;
        let e = &key.exponents;
        if g == 0 && e.as_slice() == [0, 0, 0] {
            return Rational::one();
        }
        if g == 1 && e.as_slice() == [1] {
            return ratio(1, 24);
        }
        let k = e[0];
        debug_assert!(k >= 1, "dimensional stable key {key} has a positive exponent");
        let rest = &e[1..];
        let terms = self.star_terms(g, k, rest);
        let total = terms.joins.iter().sum::<Rational>() + &terms.cut + &terms.split;
        total / big(key.tilde_factor())
    }

    /// The right-hand side pieces of the tilde recursion for
    /// `⟨σ̃_k ∏_{rest} σ̃⟩_g` (without the genus-one anomaly).
    fn star_terms(&mut self, g: u32, k: u32, rest: &[u32]) -> RelationTerms {
        let mut joins = Vec::with_capacity(rest.len());
        for (j, &kj) in rest.iter().enumerate() {
            let mut others = rest.to_vec();
            others.remove(j);
            let v = self.tilde_of(g, &others, &[k + kj - 1]);
            joins.push(v * big(BigInt::from(2 * kj + 1)));
        }
        let half = ratio(1, 2);
        let mut cut = BucketSum::new();
        let mut split = BucketSum::new();
        let one = BigInt::one();
        if k >= 2 {
            let splits = weighted_splits(rest);
            for a in 0..=k - 2 {
                let b = k - 2 - a;
                if g >= 1 {
                    cut.add_product(&one, &[&self.tilde_of(g - 1, rest, &[a, b])]);
                }
                for (x, y, w) in &splits {
                    let Some(g1) = split_genus(x, a, g) else { continue };
                    let left = self.tilde_of(g1, x, &[a]);
                    if left.is_zero() {
                        continue;
                    }
                    let right = self.tilde_of(g - g1, y, &[b]);
                    split.add_product(w, &[&left, &right]);
                }
            }
        }
        RelationTerms {
            lhs: Rational::zero(),
            joins,
            cut: cut.finish() * &half,
            split: split.finish() * half,
            anomaly: Rational::zero(),
        }
    }

    /// Plain-normalized counterparts of [`CorrelatorCache::star_terms`],
    /// each weighted by its odd double factorials.
    fn sharp_terms(&mut self, g: u32, k: u32, rest: &[u32]) -> RelationTerms {
        let df = |m: u32| big(double_factorial(m as i64).expect("m >= -1"));
        let lower = |ks: &[u32]| -> Rational {
            ks.iter()
                .map(|&kl| big(double_factorial(2 * kl as i64 - 1).expect("kl >= 0")))
                .product()
        };
        let mut joins = Vec::with_capacity(rest.len());
        for (j, &kj) in rest.iter().enumerate() {
            let mut others = rest.to_vec();
            others.remove(j);
            let w = k + kj - 1;
            let mut e = others.clone();
            e.push(w);
            let v = self.correlator(&CorrelatorKey::new(g, e));
            joins.push(v * df(2 * w + 1) * lower(&others));
        }
        let half = ratio(1, 2);
        let mut cut = Rational::zero();
        let mut split = Rational::zero();
        if k >= 2 {
            let splits = weighted_splits(rest);
            for a in 0..=k - 2 {
                let b = k - 2 - a;
                let ab = df(2 * a + 1) * df(2 * b + 1);
                if g >= 1 {
                    let mut e = rest.to_vec();
                    e.extend_from_slice(&[a, b]);
                    cut += self.correlator(&CorrelatorKey::new(g - 1, e)) * &ab;
                }
                for (x, y, w) in &splits {
                    let Some(g1) = split_genus(x, a, g) else { continue };
                    let mut ex = x.clone();
                    ex.push(a);
                    let mut ey = y.clone();
                    ey.push(b);
                    let left = self.correlator(&CorrelatorKey::new(g1, ex));
                    let right = self.correlator(&CorrelatorKey::new(g - g1, ey));
                    split += left * right * &ab * big(w.clone());
                }
            }
        }
        let lo = lower(rest);
        RelationTerms {
            lhs: Rational::zero(),
            joins,
            cut: cut * &half * &lo,
            split: split * half * lo,
            anomaly: Rational::zero(),
        }
    }

    /// Evaluates the recursion in both normalizations for `key`, with the
    /// largest exponent distinguished.
    pub fn sharp_vs_star(&mut self, key: &CorrelatorKey) -> Result<SharpStarReport> {
        if !key.is_dimensional() {
            bail!(Dimension, "{key} violates the dimension constraint");
        }
        let Some(&k) = key.exponents.first().filter(|&&k| k >= 1) else {
            bail!(InvalidArgument, "{key} has no exponent >= 1 to distinguish");
        };
        let g = key.genus;
        let rest = key.exponents[1..].to_vec();
        let anomaly = if g == 1 && key.exponents == [1] {
            ratio(1, 8)
        } else {
            Rational::zero()
        };

        let mut star = self.star_terms(g, k, &rest);
        star.lhs = self.tilde(key);
        star.anomaly = anomaly.clone();

        let mut sharp = self.sharp_terms(g, k, &rest);
        let lower: Rational = rest
            .iter()
            .map(|&kl| big(double_factorial(2 * kl as i64 - 1).expect("kl >= 0")))
            .product();
        sharp.lhs = self.correlator(key) * big(odd_double_factorial(k)) * lower;
        sharp.anomaly = anomaly;

        let factor: Rational = rest.iter().map(|&kl| big(BigInt::from(2 * kl + 1))).product();
        let scaled = |x: &Rational| x * &factor;
        let termwise = scaled(&sharp.lhs) == star.lhs
            && sharp.joins.iter().zip(&star.joins).all(|(s, t)| scaled(s) == *t)
            && scaled(&sharp.cut) == star.cut
            && scaled(&sharp.split) == star.split
            && scaled(&sharp.anomaly) == star.anomaly;

        Ok(SharpStarReport {
            key: key.clone(),
            distinguished: k,
            star_holds: star.holds(),
            sharp_holds: sharp.holds(),
            termwise_holds: termwise,
            star,
            sharp,
        })
    }
}

/// Genus of the left factor `⟨τ_a ∏_X⟩` forced by the dimension constraint.
fn split_genus(x: &[u32], a: u32, g: u32) -> Option<u32> {
    let three_g1 = x.iter().map(|&v| v as i64).sum::<i64>() + a as i64 - x.len() as i64 + 2;
    if three_g1 < 0 || three_g1 % 3 != 0 || three_g1 / 3 > g as i64 {
        return None;
    }
    Some((three_g1 / 3) as u32)
}

/// Ordered splits `S = X ⊔ Y` of a multiset, grouped by the value of `X`
/// with the number of positional subsets giving it.
fn weighted_splits(s: &[u32]) -> Vec<(Vec<u32>, Vec<u32>, BigInt)> {
    let mut mult: Vec<(u32, u32)> = Vec::new();
    for &v in s {
        match mult.iter_mut().find(|(w, _)| *w == v) {
            Some((_, m)) => *m += 1,
            None => mult.push((v, 1)),
        }
    }
    let mut out = Vec::new();
    let mut counts = alloc::vec![0u32; mult.len()];
    loop {
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut w = BigInt::one();
        for (&(v, m), &c) in mult.iter().zip(&counts) {
            x.extend(core::iter::repeat(v).take(c as usize));
            y.extend(core::iter::repeat(v).take((m - c) as usize));
            w *= binomial(m, c);
        }
        out.push((x, y, w));
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

/// The pieces of one instance of the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerms {
    pub lhs: Rational,
    /// One join term per non-distinguished insertion, in key order.
    pub joins: Vec<Rational>,
    pub cut: Rational,
    pub split: Rational,
    /// The constant contributed by the `L_0` operator at `⟨τ_1⟩_1`.
    pub anomaly: Rational,
}

impl RelationTerms {
    pub fn rhs(&self) -> Rational {
        self.joins.iter().sum::<Rational>() + &self.cut + &self.split + &self.anomaly
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs()
    }
}

#[derive(Clone, Debug)]
pub struct SharpStarReport {
    pub key: CorrelatorKey,
    pub distinguished: u32,
    pub star: RelationTerms,
    pub sharp: RelationTerms,
    pub star_holds: bool,
    pub sharp_holds: bool,
    pub termwise_holds: bool,
}

impl SharpStarReport {
    pub fn holds(&self) -> bool {
        self.star_holds && self.sharp_holds && self.termwise_holds
    }
}

/// `(n-3)! / ∏ k_i!` for genus-zero keys.
pub fn genus0_closed_form(exponents: &[u32]) -> Result<Rational> {
    let n = exponents.len() as i64;
    let sum: i64 = exponents.iter().map(|&k| k as i64).sum();
    if n < 3 || sum != n - 3 {
        bail!(Dimension, "genus 0 needs sum = n - 3, got sum {sum} with n = {n}");
    }
    let den: BigInt = exponents.iter().map(|&k| factorial(k)).product();
    Ok(Rational::new(factorial((n - 3) as u32), den))
}

/// `⟨τ_{3g-2}⟩_g = 1 / (24^g g!)`.
pub fn one_point_closed_form(g: u32) -> Result<Rational> {
    if g == 0 {
        bail!(InvalidArgument, "one-point closed form needs g >= 1");
    }
    let den = num_traits::pow(BigInt::from(24), g as usize) * factorial(g);
    Ok(Rational::new(BigInt::one(), den))
}

/// Every multiset of `n` exponents, largest first.
pub fn exponent_multisets(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in (0..=max).rev() {
            cur.push(v);
            go(n, v, cur, out);
            cur.pop();
        }
    }
    go(n, max, &mut cur, &mut out);
    out
}

/// All dimensional stable keys with `n ≤ n_max` and `g ≤ g_max`.
pub fn stable_keys(g_max: u32, n_max: usize) -> Vec<CorrelatorKey> {
    let mut out = Vec::new();
    for g in 0..=g_max {
        for n in 1..=n_max {
            let dim = 3 * g as i64 - 3 + n as i64;
            if dim < 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            for e in exponent_multisets(n, dim as u32) {
                if e.iter().map(|&k| k as i64).sum::<i64>() == dim {
                    out.push(CorrelatorKey::new(g, e));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn c(g: u32, e: &[u32]) -> Rational {
        CorrelatorCache::new().correlator_of(g, e)
    }

    #[test]
    fn spec_values() {
        assert_eq!(c(0, &[0, 0, 0]), int(1));
        assert_eq!(c(1, &[1]), ratio(1, 24));
        assert_eq!(c(2, &[4]), ratio(1, 1152));
        assert_eq!(c(0, &[1, 0, 0, 0]), int(1));
        assert_eq!(c(1, &[0, 0]), int(0));
        assert_eq!(c(3, &[7]), ratio(1, 82944));
    }

    #[test]
    fn known_values() {
        assert_eq!(c(1, &[1, 1]), ratio(1, 24));
        assert_eq!(c(2, &[3, 2]), ratio(29, 5760));
        assert_eq!(c(2, &[2, 2, 2]), ratio(7, 240));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(genus0_closed_form(&[0, 0, 0]).unwrap(), int(1));
        assert_eq!(genus0_closed_form(&[1, 1, 0, 0, 0]).unwrap(), int(2));
        assert_eq!(genus0_closed_form(&[2, 0, 0, 0, 0]).unwrap(), int(1));
        assert!(genus0_closed_form(&[1, 0, 0]).is_err());
        assert_eq!(one_point_closed_form(1).unwrap(), ratio(1, 24));
        assert_eq!(one_point_closed_form(2).unwrap(), ratio(1, 1152));
        assert_eq!(one_point_closed_form(3).unwrap(), ratio(1, 82944));
        assert!(one_point_closed_form(0).is_err());
    }

    #[test]
    fn sharp_star_examples() {
        let mut cache = CorrelatorCache::new();
        for (g, e) in [(1, alloc::vec![1]), (2, alloc::vec![4]), (1, alloc::vec![2, 0])] {
            let r = cache.sharp_vs_star(&CorrelatorKey::new(g, e)).unwrap();
            assert!(r.holds(), "{:?}", r);
        }
        let r = cache.sharp_vs_star(&CorrelatorKey::new(1, alloc::vec![2, 0])).unwrap();
        assert_eq!(r.star.lhs, ratio(5, 8));
        assert!(cache.sharp_vs_star(&CorrelatorKey::new(0, alloc::vec![0, 0, 0])).is_err());
    }

    #[test]
    fn weighted_splits_count_subsets() {
        let total: BigInt = weighted_splits(&[2, 1, 1, 0]).iter().map(|(_, _, w)| w.clone()).sum();
        assert_eq!(total, BigInt::from(16));
    }
}
