//! Double Hurwitz numbers by exhaustive factorization counting and by the
//! Frobenius character formula, with connected/disconnected transforms.
//!
//! Normalization: a fixed `σ₀` of cycle type `ν`, and
//! `H = #{(τ_1, …, τ_r) : τ_r ⋯ τ_1 σ₀ has type μ} · |C_ν| / d!`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::characters::CharacterTable;
use crate::combinatorics::{binomial, factorial};
use crate::cutjoin::{branch_points, cut_join_balance, CutJoinBalance, GammaSource};
use crate::error::{bail, Result};
use crate::partition::Partition;
use crate::perm::{transpositions, Perm};
use crate::rational::{big, Rational};

pub const BRUTE_MAX_DEGREE: u32 = 5;
pub const BRUTE_MAX_R: u32 = 8;
pub const FROBENIUS_MAX_DEGREE: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HurwitzKey {
    pub nu: Partition,
    pub mu: Partition,
    pub r: u32,
    pub connected: bool,
}

impl HurwitzKey {
    pub fn new(nu: Partition, mu: Partition, r: u32, connected: bool) -> Result<Self> {
        if nu.size() != mu.size() {
            bail!(InvalidArgument, "|nu| = {} differs from |mu| = {}", nu.size(), mu.size());
        }
        Ok(HurwitzKey { nu, mu, r, connected })
    }

    /// Connected single Hurwitz key: `ν = (1^d)` and `r = 2g - 2 + |μ| + l(μ)`.
    pub fn single(genus: u32, mu: &Partition) -> Result<Self> {
        let r = branch_points(genus as i64, mu);
        if r < 0 {
            bail!(InvalidArgument, "no covers of genus {genus} with profile {mu}");
        }
        HurwitzKey::new(Partition::ones(mu.size()), mu.clone(), r as u32, true)
    }

    pub fn degree(&self) -> u32 {
        self.nu.size()
    }

    /// `χ = l(ν) + l(μ) - r`.
    pub fn euler_characteristic(&self) -> i64 {
        self.nu.len() as i64 + self.mu.len() as i64 - self.r as i64
    }
}

impl fmt::Display for HurwitzKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "H[nu={}, mu={}, r={}, {}]",
            self.nu,
            self.mu,
            self.r,
            if self.connected { "connected" } else { "disconnected" }
        )
    }
}

/// Depth-first transposition counter with memoization on the partial
/// product, its orbit partition and the number of steps left.
pub struct BruteForce {
    key: HurwitzKey,
    start: Perm,
    moves: Vec<(usize, usize)>,
    memo: BTreeMap<(u32, u32, u32), u64>,
}

impl BruteForce {
    pub fn new(key: &HurwitzKey) -> Result<Self> {
        let d = key.degree();
        if d > BRUTE_MAX_DEGREE || key.r > BRUTE_MAX_R {
            bail!(
                BudgetExceeded,
                "brute force supports d <= {BRUTE_MAX_DEGREE}, r <= {BRUTE_MAX_R}; got d = {d}, r = {}",
                key.r
            );
        }
        if d == 0 {
            bail!(InvalidArgument, "degree must be positive");
        }
        Ok(BruteForce {
            key: key.clone(),
            start: Perm::of_cycle_type(&key.nu),
            moves: transpositions(d as usize),
            memo: BTreeMap::new(),
        })
    }

    /// Independent sub-counts, split on the first transposition.
    pub fn branch_count(&self) -> usize {
        if self.key.r == 0 {
            1
        } else {
            self.moves.len()
        }
    }

    pub fn count_branch(&mut self, branch: usize) -> u64 {
        let comps = self.initial_orbits();
        if self.key.r == 0 {
            return self.dfs(self.start, comps, 0);
        }
        let (a, b) = self.moves[branch];
        let (p, c) = self.step(self.start, comps, a, b);
        self.dfs(p, c, self.key.r - 1)
    }

    pub fn count(&mut self) -> u64 {
        (0..self.branch_count()).map(|b| self.count_branch(b)).sum()
    }

    /// `count · |C_ν| / d! = count / z_ν`.
    pub fn value_of_count(&self, count: u64) -> Rational {
        Rational::new(BigInt::from(count), self.key.nu.z_order())
    }

    fn initial_orbits(&self) -> [u8; 8] {
        let mut labels = [0u8; 8];
        if !self.key.connected {
            return labels;
        }
        let d = self.start.degree();
        for s in 0..d {
            let mut x = self.start.apply(s);
            let mut m = s;
            while x != s {
                m = m.min(x);
                x = self.start.apply(x);
            }
            labels[s] = m as u8;
        }
        labels
    }

    fn step(&self, p: Perm, mut comps: [u8; 8], a: usize, b: usize) -> (Perm, [u8; 8]) {
        if self.key.connected && comps[a] != comps[b] {
            let (lo, hi) = (comps[a].min(comps[b]), comps[a].max(comps[b]));
            for c in comps[..p.degree()].iter_mut() {
                if *c == hi {
                    *c = lo;
                }
            }
        }
        (p.left_transpose(a, b), comps)
    }

    fn dfs(&mut self, p: Perm, comps: [u8; 8], remaining: u32) -> u64 {
        let target = self.key.mu.len() as i64;
        let cycles = p.cycle_count() as i64;
        let gap = (cycles - target).abs();
        if gap > remaining as i64 || (cycles - target - remaining as i64) % 2 != 0 {
            return 0;
        }
        let d = p.degree();
        let orbit_count = if self.key.connected {
            (0..d).filter(|&s| comps[s] as usize == s).count() as i64
        } else {
            1
        };
        if orbit_count - 1 > remaining as i64 {
            return 0;
        }
        if remaining == 0 {
            let ok = orbit_count == 1 || !self.key.connected;
            return (ok && p.cycle_type() == self.key.mu) as u64;
        }
        let code = comps[..d].iter().enumerate().fold(0u32, |acc, (i, &c)| acc | (c as u32) << (3 * i));
        let memo_key = (p.code(), code, remaining);
        if let Some(&v) = self.memo.get(&memo_key) {
            return v;
        }
        let mut total = 0u64;
        for t in 0..self.moves.len() {
            let (a, b) = self.moves[t];
            let (np, nc) = self.step(p, comps, a, b);
            total += self.dfs(np, nc, remaining - 1);
        }
        self.memo.insert(memo_key, total);
        total
    }
}

pub fn factorization_count_bruteforce(key: &HurwitzKey) -> Result<Rational> {
    let mut bf = BruteForce::new(key)?;
    let count = bf.count();
    Ok(bf.value_of_count(count))
}

/// `Σ_λ χ_λ(ν) χ_λ(μ) c_λ^r / (z_ν z_μ)` with `c_λ` the content sum.
pub fn factorization_count_frobenius(table: &CharacterTable, key: &HurwitzKey) -> Result<Rational> {
    if key.connected {
        bail!(InvalidArgument, "the character formula counts disconnected covers only");
    }
    if key.degree() != table.degree() {
        bail!(InvalidArgument, "character table has degree {}, key has {}", table.degree(), key.degree());
    }
    let mut total = BigInt::zero();
    for (i, lambda) in table.partitions().iter().enumerate() {
        let a = table.value(lambda, &key.nu)?;
        let b = table.value(lambda, &key.mu)?;
        if a == 0 || b == 0 {
            continue;
        }
        let c = num_traits::pow(BigInt::from(table.content_sum(i)), key.r as usize);
        total += BigInt::from(a * b) * c;
    }
    Ok(Rational::new(total, key.nu.z_order() * key.mu.z_order()))
}

pub fn frobenius(key: &HurwitzKey) -> Result<Rational> {
    if key.degree() > FROBENIUS_MAX_DEGREE {
        bail!(BudgetExceeded, "character formula supports d <= {FROBENIUS_MAX_DEGREE}");
    }
    factorization_count_frobenius(&CharacterTable::new(key.degree()), key)
}

/// Connected single Hurwitz number `H_{g,μ}` by brute force.
pub fn single_hurwitz(genus: u32, mu: &Partition) -> Result<Rational> {
    factorization_count_bruteforce(&HurwitzKey::single(genus, mu)?)
}

pub type TableKey = (Partition, Partition, u32);

/// Hurwitz numbers indexed by `(ν, μ, r)`, complete for `1 ≤ d ≤ max_degree`
/// and `r ≤ max_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzTable {
    pub max_degree: u32,
    pub max_r: u32,
    pub connected: bool,
    entries: BTreeMap<TableKey, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformDirection {
    /// Connected to disconnected.
    Exp,
    /// Disconnected to connected.
    Log,
}

impl HurwitzTable {
    pub fn new(max_degree: u32, max_r: u32, connected: bool) -> Self {
        HurwitzTable { max_degree, max_r, connected, entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, nu: Partition, mu: Partition, r: u32, value: Rational) {
        self.entries.insert((nu, mu, r), value);
    }

    pub fn get(&self, nu: &Partition, mu: &Partition, r: u32) -> Option<&Rational> {
        self.entries.get(&(nu.clone(), mu.clone(), r))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TableKey, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All keys the table must hold to be closed.
    pub fn required_keys(max_degree: u32, max_r: u32) -> Vec<TableKey> {
        let mut out = Vec::new();
        for d in 1..=max_degree {
            let parts = Partition::all_of_size(d);
            for nu in &parts {
                for mu in &parts {
                    for r in 0..=max_r {
                        out.push((nu.clone(), mu.clone(), r));
                    }
                }
            }
        }
        out
    }

    pub fn check_closed(&self) -> Result<()> {
        for (nu, mu, r) in Self::required_keys(self.max_degree, self.max_r) {
            if !self.entries.contains_key(&(nu.clone(), mu.clone(), r)) {
                bail!(InsufficientClosure, "(nu={nu}, mu={mu}, r={r})");
            }
        }
        Ok(())
    }

    pub fn build_bruteforce(max_degree: u32, max_r: u32, connected: bool) -> Result<Self> {
        let mut t = HurwitzTable::new(max_degree, max_r, connected);
        for (nu, mu, r) in Self::required_keys(max_degree, max_r) {
            let key = HurwitzKey::new(nu.clone(), mu.clone(), r, connected)?;
            t.insert(nu, mu, r, factorization_count_bruteforce(&key)?);
        }
        Ok(t)
    }

    pub fn build_frobenius(max_degree: u32, max_r: u32) -> Result<Self> {
        let mut t = HurwitzTable::new(max_degree, max_r, false);
        for d in 1..=max_degree {
            let chars = CharacterTable::new(d);
            let parts = Partition::all_of_size(d);
            for nu in &parts {
                for mu in &parts {
                    for r in 0..=max_r {
                        let key = HurwitzKey::new(nu.clone(), mu.clone(), r, false)?;
                        t.insert(nu.clone(), mu.clone(), r, factorization_count_frobenius(&chars, &key)?);
                    }
                }
            }
        }
        Ok(t)
    }

    fn product(&self, a: &BTreeMap<TableKey, Rational>, b: &BTreeMap<TableKey, Rational>) -> BTreeMap<TableKey, Rational> {
        let mut out: BTreeMap<TableKey, Rational> = BTreeMap::new();
        for ((n1, m1, r1), x) in a {
            for ((n2, m2, r2), y) in b {
                if n1.size() + n2.size() > self.max_degree || r1 + r2 > self.max_r {
                    continue;
                }
                let w = big(binomial(r1 + r2, *r1));
                let k = (n1.union(n2), m1.union(m2), r1 + r2);
                *out.entry(k).or_insert_with(Rational::zero) += x * y * w;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Exponential or logarithmic transform, truncated to this table's bounds.
    pub fn transform(&self, direction: TransformDirection) -> Result<HurwitzTable> {
        let expected = direction == TransformDirection::Exp;
        if self.connected != expected {
            bail!(
                InvalidArgument,
                "{} transform needs a {} table",
                if expected { "exp" } else { "log" },
                if expected { "connected" } else { "disconnected" }
            );
        }
        self.check_closed()?;
        let base: BTreeMap<TableKey, Rational> =
            self.entries.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut acc: BTreeMap<TableKey, Rational> = BTreeMap::new();
        let mut power = base.clone();
        for m in 1..=self.max_degree {
            let coef = match direction {
                TransformDirection::Exp => Rational::new(BigInt::one(), factorial(m)),
                TransformDirection::Log => {
                    let s = if m % 2 == 1 { 1 } else { -1 };
                    Rational::new(BigInt::from(s), BigInt::from(m))
                }
            };
            for (k, v) in &power {
                *acc.entry(k.clone()).or_insert_with(Rational::zero) += v * &coef;
            }
            power = self.product(&power, &base);
            if power.is_empty() {
                break;
            }
        }
        let mut out = HurwitzTable::new(self.max_degree, self.max_r, !self.connected);
        for k in Self::required_keys(self.max_degree, self.max_r) {
            let v = acc.remove(&k).unwrap_or_else(Rational::zero);
            out.entries.insert(k, v);
        }
        Ok(out)
    }
}

pub fn connected_disconnected_transform(table: &HurwitzTable, direction: TransformDirection) -> Result<HurwitzTable> {
    table.transform(direction)
}

/// `Γ_r(g, μ) = H_{g,μ} / r!` from brute-force single Hurwitz numbers.
#[derive(Default)]
pub struct HurwitzGamma {
    memo: BTreeMap<(i64, Partition), Rational>,
}

impl HurwitzGamma {
    pub fn new() -> Self {
        Self::default()
    }
}

impl GammaSource for HurwitzGamma {
    fn gamma(&mut self, genus: i64, mu: &Partition) -> Result<Rational> {
        if genus < 0 || mu.is_empty() {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.memo.get(&(genus, mu.clone())) {
            return Ok(v.clone());
        }
        let r = branch_points(genus, mu);
        let v = single_hurwitz(genus as u32, mu)? / big(factorial(r as u32));
        self.memo.insert((genus, mu.clone()), v.clone());
        Ok(v)
    }
}

/// Cut-and-join balance with every term computed by brute force.
pub fn cutjoin_hurwitz_check(genus: u32, mu: &Partition) -> Result<CutJoinBalance> {
    if mu.size() > BRUTE_MAX_DEGREE {
        bail!(BudgetExceeded, "degree {} exceeds brute-force budget", mu.size());
    }
    cut_join_balance(&mut HurwitzGamma::new(), genus, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn key(nu: &[u32], mu: &[u32], r: u32, c: bool) -> HurwitzKey {
        HurwitzKey::new(p(nu), p(mu), r, c).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let bf = |k: HurwitzKey| factorization_count_bruteforce(&k).unwrap();
        assert_eq!(bf(key(&[1, 1, 1], &[1, 1, 1], 4, true)), int(4));
        assert_eq!(bf(key(&[1, 1], &[1, 1], 2, true)), ratio(1, 2));
        assert_eq!(bf(key(&[3], &[3], 0, true)), ratio(1, 3));
        assert_eq!(bf(key(&[1, 1, 1], &[3], 2, true)), int(1));
        assert_eq!(bf(key(&[1, 1, 1], &[1, 1, 1], 4, false)), ratio(9, 2));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius(&key(&[1, 1], &[1, 1], 2, false)).unwrap(), ratio(1, 2));
        assert_eq!(frobenius(&key(&[1, 1, 1], &[1, 1, 1], 4, false)).unwrap(), ratio(9, 2));
        assert_eq!(frobenius(&key(&[2, 1], &[2, 1], 0, false)).unwrap(), ratio(1, 2));
        assert!(frobenius(&key(&[1], &[1], 0, true)).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let k = key(&[1; 6], &[1; 6], 0, true);
        assert!(matches!(factorization_count_bruteforce(&k), Err(crate::Error::BudgetExceeded(_))));
        assert!(HurwitzKey::new(p(&[2]), p(&[1]), 0, true).is_err());
    }

    #[test]
    fn transform_examples() {
        let conn = HurwitzTable::build_bruteforce(3, 4, true).unwrap();
        let disc = conn.transform(TransformDirection::Exp).unwrap();
        assert_eq!(disc.get(&p(&[1, 1]), &p(&[1, 1]), 0), Some(&ratio(1, 2)));
        assert_eq!(disc.get(&p(&[1, 1, 1]), &p(&[1, 1, 1]), 4), Some(&ratio(9, 2)));
        let back = disc.transform(TransformDirection::Log).unwrap();
        assert_eq!(back, conn);
        assert_eq!(back.get(&p(&[3]), &p(&[3]), 0), conn.get(&p(&[3]), &p(&[3]), 0));
    }

    #[test]
    fn transform_rejects_open_tables() {
        let mut t = HurwitzTable::new(2, 1, true);
        t.insert(p(&[1]), p(&[1]), 0, int(1));
        assert!(matches!(t.transform(TransformDirection::Exp), Err(crate::Error::InsufficientClosure(_))));
    }

    #[test]
    fn cutjoin_examples() {
        for (g, mu) in [(0, p(&[2, 1])), (0, p(&[1, 1, 1])), (1, p(&[1])), (1, p(&[2]))] {
            let b = cutjoin_hurwitz_check(g, &mu).unwrap();
            assert!(b.holds(), "g={g} mu={mu}: {} vs {}", b.lhs, b.rhs());
        }
    }
}
