//! Linear Hodge integrals `∫ λ_j ∏ ψ_i^{k_i}` over `M̄_{g,n}`, the ELSV
//! right-hand side, and extraction of genus-one `λ_1` integrals from
//! Hurwitz numbers by exact linear algebra.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::factorial;
use crate::cutjoin::{branch_points, GammaSource};
use crate::error::{bail, Error, Result};
use crate::hurwitz::{single_hurwitz, BRUTE_MAX_DEGREE, BRUTE_MAX_R};
use crate::linalg::solve_exact;
use crate::partition::Partition;
use crate::psi::{exponent_multisets, CorrelatorCache, CorrelatorKey};
use crate::rational::{big, int, powi, sign_pow, Rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HodgeKey {
    pub genus: u32,
    exponents: Vec<u32>,
    pub lambda: u32,
}

impl HodgeKey {
    pub fn new(genus: u32, exponents: impl Into<Vec<u32>>, lambda: u32) -> Self {
        let mut exponents = exponents.into();
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        HodgeKey { genus, exponents, lambda }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_dimensional(&self) -> bool {
        let n = self.exponents.len() as i64;
        let sum: i64 = self.exponents.iter().map(|&k| k as i64).sum();
        sum + self.lambda as i64 == 3 * self.genus as i64 - 3 + n && self.lambda <= self.genus
    }
}

impl fmt::Display for HodgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<lambda_{}", self.lambda)?;
        for k in &self.exponents {
            write!(f, " tau_{k}")?;
        }
        write!(f, ">_{}", self.genus)
    }
}

/// Values of `⟨λ_j ∏ τ_{k_i}⟩_g` for `j ≥ 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HodgeTable {
    entries: BTreeMap<HodgeKey, Rational>,
}

impl HodgeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: HodgeKey, value: Rational) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, key: &HodgeKey) -> Option<&Rational> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HodgeKey, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Which total Chern class multiplies the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaSign {
    /// `Λ∨_g(1) = Σ (-1)^j λ_j`.
    Dual,
    /// `Λ_g(1) = Σ λ_j`.
    Plain,
}

impl LambdaSign {
    fn factor(self, j: u32) -> Rational {
        match self {
            LambdaSign::Dual => sign_pow(j as u64),
            LambdaSign::Plain => Rational::one(),
        }
    }
}

/// The class inserted at one marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    /// `1 / (1 - w ψ)`.
    Weight(Rational),
    /// `Σ_a c_a ψ^a`.
    Poly(Vec<Rational>),
}

impl Point {
    fn coefficient(&self, a: u32) -> Rational {
        match self {
            Point::Weight(w) => powi(w, a as i64),
            Point::Poly(c) => c.get(a as usize).cloned().unwrap_or_else(Rational::zero),
        }
    }

    /// `(1 - ψ)^e`.
    pub fn one_minus_psi(e: u32) -> Point {
        Point::Poly(
            (0..=e)
                .map(|a| big(crate::combinatorics::binomial(e, a)) * sign_pow(a as u64))
                .collect(),
        )
    }
}

#[derive(Clone)]
pub struct HodgeContext {
    pub psi: CorrelatorCache,
    pub table: HodgeTable,
    pub sign: LambdaSign,
}

impl HodgeContext {
    pub fn new(psi: CorrelatorCache, table: HodgeTable) -> Self {
        HodgeContext { psi, table, sign: LambdaSign::Dual }
    }

    /// `⟨λ_j ∏ τ_{k_i}⟩_g`; `j = 0` comes from the DVV recursion.
    pub fn lambda_psi(&mut self, genus: u32, j: u32, exponents: &[u32]) -> Result<Rational> {
        let key = HodgeKey::new(genus, exponents.to_vec(), j);
        if !key.is_dimensional() || 2 * genus as i64 - 2 + exponents.len() as i64 <= 0 {
            return Ok(Rational::zero());
        }
        if j == 0 {
            return Ok(self.psi.correlator(&CorrelatorKey::new(genus, exponents.to_vec())));
        }
        match self.table.get(&key) {
            Some(v) => Ok(v.clone()),
            None => Err(Error::MissingHodge(alloc::format!("{key}"))),
        }
    }

    /// `∫ Λ∨_g(1) ∏ point_i` over `M̄_{g,n}` (or `Λ_g(1)` under [`LambdaSign::Plain`]),
    /// with the unstable conventions `(0,1): 1/w²` and `(0,2): 1/(w₁+w₂)`.
    pub fn integrate(&mut self, genus: u32, points: &[Point]) -> Result<Rational> {
        let n = points.len();
        if 2 * genus as i64 - 2 + n as i64 <= 0 {
            return unstable(genus, points);
        }
        let dim = 3 * genus as i64 - 3 + n as i64;
        let mut total = Rational::zero();
        for j in 0..=genus {
            let s = dim - j as i64;
            if s < 0 {
                continue;
            }
            let sign = self.sign.factor(j);
            for b in compositions(s as u32, n) {
                let coef: Rational = points.iter().zip(&b).map(|(p, &a)| p.coefficient(a)).product();
                if coef.is_zero() {
                    continue;
                }
                total += coef * &sign * self.lambda_psi(genus, j, &b)?;
            }
        }
        Ok(total)
    }

    pub fn hodge_rational_integral(&mut self, genus: u32, weights: &[Rational]) -> Result<Rational> {
        let pts: Vec<Point> = weights.iter().map(|w| Point::Weight(w.clone())).collect();
        self.integrate(genus, &pts)
    }

    /// `Γ_r(g, μ) = ∏ μ_i^{μ_i}/μ_i! / |Aut μ| · ∫ Λ∨(1) / ∏ (1 - μ_i ψ_i)`.
    pub fn gamma_r(&mut self, genus: u32, mu: &Partition) -> Result<Rational> {
        let weights: Vec<Rational> = mu.parts().iter().map(|&m| int(m as i64)).collect();
        let integral = self.hodge_rational_integral(genus, &weights)?;
        Ok(integral * mu.hurwitz_weight() / big(mu.aut_order()))
    }

    /// `r! / |Aut μ| · ∏ μ_i^{μ_i}/μ_i! · ∫ Λ∨(1) / ∏ (1 - μ_i ψ_i)`.
    pub fn elsv_rhs(&mut self, genus: u32, mu: &Partition) -> Result<Rational> {
        let r = branch_points(genus as i64, mu);
        if r < 0 || mu.is_empty() {
            bail!(InvalidArgument, "ELSV needs r >= 0 and a non-empty profile");
        }
        Ok(self.gamma_r(genus, mu)? * big(factorial(r as u32)))
    }
}

impl GammaSource for HodgeContext {
    fn gamma(&mut self, genus: i64, mu: &Partition) -> Result<Rational> {
        if genus < 0 || mu.is_empty() {
            return Ok(Rational::zero());
        }
        self.gamma_r(genus as u32, mu)
    }
}

fn unstable(genus: u32, points: &[Point]) -> Result<Rational> {
    match (genus, points) {
        (0, [Point::Weight(w)]) => Ok(powi(w, -2)),
        (0, [Point::Weight(a), Point::Weight(b)]) => Ok((a + b).recip()),
        (0, [Point::Weight(w), p @ Point::Poly(_)]) | (0, [p @ Point::Poly(_), Point::Weight(w)]) => {
            // coefficient of ψ_2^a in 1/(w + w_2) is (-1)^a w^{-1-a}
            let Point::Poly(c) = p else { unreachable!() };
            Ok(c
                .iter()
                .enumerate()
                .map(|(a, ca)| ca * sign_pow(a as u64) * powi(w, -1 - a as i64))
                .sum())
        }
        _ => bail!(InvalidArgument, "no convention for unstable (g={genus}, n={})", points.len()),
    }
}

/// Ordered compositions of `s` into `n` non-negative parts.
pub fn compositions(s: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = alloc::vec![0u32; n];
    fn go(i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = rem;
            out.push(cur.clone());
            return;
        }
        for v in 0..=rem {
            cur[i] = v;
            go(i + 1, rem - v, cur, out);
        }
    }
    if n == 0 {
        if s == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(0, s, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct ExtractionReport {
    pub table: HodgeTable,
    pub unknowns: Vec<HodgeKey>,
    /// Profiles whose ELSV equation entered the system.
    pub profiles: Vec<Partition>,
    pub equations: usize,
    pub rank: usize,
    pub residuals: Vec<Rational>,
}

impl ExtractionReport {
    pub fn consistent(&self) -> bool {
        self.residuals.iter().all(|r| r.is_zero())
    }
}

/// Solves ELSV at genus one for every `⟨λ_1 ∏ τ_{k_i}⟩_1` with `n ≤ n_max`,
/// using all profiles `|μ| ≤ d_max` within the brute-force budget. With
/// `forgetful` the string and dilaton relations for `λ_1` are added.
pub fn extract_hodge_table(
    psi: &mut CorrelatorCache,
    genus: u32,
    n_max: usize,
    d_max: u32,
    forgetful: bool,
) -> Result<ExtractionReport> {
    if genus != 1 {
        bail!(InvalidArgument, "extraction is implemented for genus 1 only");
    }
    if d_max > BRUTE_MAX_DEGREE {
        bail!(BudgetExceeded, "d_max {d_max} exceeds brute-force degree {BRUTE_MAX_DEGREE}");
    }
    let mut unknowns = Vec::new();
    for n in 1..=n_max {
        for e in exponent_multisets(n, n as u32 - 1) {
            let key = HodgeKey::new(1, e, 1);
            if key.is_dimensional() {
                unknowns.push(key);
            }
        }
    }
    let index: BTreeMap<HodgeKey, usize> = unknowns.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let cols = unknowns.len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut profiles = Vec::new();

    for d in 1..=d_max {
        for mu in Partition::all_of_size(d) {
            let n = mu.len();
            let r = branch_points(1, &mu);
            if n > n_max || r > BRUTE_MAX_R as i64 {
                continue;
            }
            // H = P (A_0 - Σ_b ∏ μ^b x_b)
            let p = mu.hurwitz_weight() * big(factorial(r as u32)) / big(mu.aut_order());
            let mut row = alloc::vec![Rational::zero(); cols];
            let mut a0 = Rational::zero();
            for b in compositions(n as u32, n) {
                let mono: Rational = mu.parts().iter().zip(&b).map(|(&m, &k)| powi(&int(m as i64), k as i64)).product();
                a0 += &mono * psi.correlator(&CorrelatorKey::new(1, b.clone()));
            }
            for b in compositions(n as u32 - 1, n) {
                let mono: Rational = mu.parts().iter().zip(&b).map(|(&m, &k)| powi(&int(m as i64), k as i64)).product();
                let col = index[&HodgeKey::new(1, b, 1)];
                row[col] -= &p * mono;
            }
            rows.push(row);
            rhs.push(single_hurwitz(1, &mu)? - p * a0);
            profiles.push(mu);
        }
    }

    if forgetful {
        for (key, &i) in &index {
            let e = key.exponents();
            if e.len() < 2 {
                continue;
            }
            if let Some(pos) = e.iter().position(|&k| k == 0) {
                let mut rest = e.to_vec();
                rest.remove(pos);
                let mut row = alloc::vec![Rational::zero(); cols];
                row[i] += Rational::one();
                for j in 0..rest.len() {
                    if rest[j] == 0 {
                        continue;
                    }
                    let mut lowered = rest.clone();
                    lowered[j] -= 1;
                    row[index[&HodgeKey::new(1, lowered, 1)]] -= Rational::one();
                }
                rows.push(row);
                rhs.push(Rational::zero());
            }
            if let Some(pos) = e.iter().position(|&k| k == 1) {
                let mut rest = e.to_vec();
                rest.remove(pos);
                let mut row = alloc::vec![Rational::zero(); cols];
                row[i] += Rational::one();
                row[index[&HodgeKey::new(1, rest.clone(), 1)]] -= int(rest.len() as i64);
                rows.push(row);
                rhs.push(Rational::zero());
            }
        }
    }

    let sol = solve_exact(&rows, &rhs)?;
    let mut table = HodgeTable::new();
    for (k, v) in unknowns.iter().zip(&sol.x) {
        table.insert(k.clone(), v.clone());
    }
    Ok(ExtractionReport { table, unknowns, profiles, equations: rows.len(), rank: sol.rank, residuals: sol.residuals })
}

/// `⟨λ_1 ∏ τ_{b_i}⟩_1 = (n-1)! / (24 ∏ b_i!)`, a closed form used as a
/// test oracle.
pub fn lambda1_closed_form(exponents: &[u32]) -> Rational {
    let n = exponents.len() as u32;
    let den: BigInt = exponents.iter().map(|&b| factorial(b)).product::<BigInt>() * 24;
    Rational::new(factorial(n - 1), den)
}

/// Context with the genus-one table extracted up to `n_max` points.
pub fn genus_one_context(n_max: usize) -> Result<HodgeContext> {
    let mut psi = CorrelatorCache::new();
    let report = extract_hodge_table(&mut psi, 1, n_max, BRUTE_MAX_DEGREE, true)?;
    if !report.consistent() {
        return Err(Error::Inconsistent(0));
    }
    Ok(HodgeContext::new(psi, report.table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn integral_examples() {
        let mut ctx = genus_one_context(3).unwrap();
        assert_eq!(ctx.hodge_rational_integral(0, &[int(1), int(1), int(1)]).unwrap(), int(1));
        assert_eq!(ctx.hodge_rational_integral(0, &[ratio(3, 2)]).unwrap(), ratio(4, 9));
        assert_eq!(ctx.hodge_rational_integral(0, &[int(2), int(3)]).unwrap(), ratio(1, 5));
        assert_eq!(ctx.hodge_rational_integral(1, &[int(1)]).unwrap(), int(0));
    }

    #[test]
    fn missing_table_is_an_error() {
        let mut ctx = HodgeContext::new(CorrelatorCache::new(), HodgeTable::new());
        assert!(matches!(ctx.hodge_rational_integral(1, &[int(1)]), Err(Error::MissingHodge(_))));
        assert!(matches!(ctx.hodge_rational_integral(2, &[int(1)]), Err(Error::MissingHodge(_))));
        assert_eq!(ctx.hodge_rational_integral(0, &[int(1), int(2), int(3)]).unwrap(), int(1));
    }

    #[test]
    fn elsv_examples() {
        let mut ctx = genus_one_context(3).unwrap();
        assert_eq!(ctx.elsv_rhs(0, &p(&[1, 1, 1])).unwrap(), int(4));
        assert_eq!(ctx.elsv_rhs(0, &p(&[2, 1])).unwrap(), single_hurwitz(0, &p(&[2, 1])).unwrap());
        assert_eq!(ctx.elsv_rhs(1, &p(&[1])).unwrap(), single_hurwitz(1, &p(&[1])).unwrap());
    }

    #[test]
    fn extraction_matches_closed_form() {
        let mut psi = CorrelatorCache::new();
        let rep = extract_hodge_table(&mut psi, 1, 3, 5, false).unwrap();
        assert!(rep.consistent());
        assert!(rep.equations > rep.unknowns.len());
        assert_eq!(rep.table.get(&HodgeKey::new(1, alloc::vec![0], 1)), Some(&ratio(1, 24)));
        for (k, v) in rep.table.iter() {
            assert_eq!(*v, lambda1_closed_form(k.exponents()), "{k}");
        }
    }

    #[test]
    fn four_points_need_forgetful_relations() {
        let mut psi = CorrelatorCache::new();
        let plain = extract_hodge_table(&mut psi, 1, 4, 5, false);
        assert!(matches!(plain, Err(Error::Underdetermined { .. })));
        let rep = extract_hodge_table(&mut psi, 1, 4, 5, true).unwrap();
        for (k, v) in rep.table.iter() {
            assert_eq!(*v, lambda1_closed_form(k.exponents()), "{k}");
        }
    }

    #[test]
    fn plain_lambda_sign_gives_wrong_sign() {
        let mut ctx = genus_one_context(1).unwrap();
        ctx.sign = LambdaSign::Plain;
        // with Λ(1) the extracted value would have to be -1/24 to reproduce H_{1,(1)}
        let h = single_hurwitz(1, &p(&[1])).unwrap();
        assert_ne!(ctx.elsv_rhs(1, &p(&[1])).unwrap(), h);
    }

    #[test]
    fn gamma_examples() {
        let mut ctx = genus_one_context(3).unwrap();
        assert_eq!(ctx.gamma_r(0, &p(&[1, 1, 1])).unwrap(), ratio(1, 6));
        let j = crate::cutjoin::gamma_value(&mut ctx, crate::cutjoin::GammaKind::Join { i: 0, j: 1 }, 0, &p(&[1, 1, 1]))
            .unwrap();
        // η = (2,1): 2²/2! · ∫ 1/((1-2ψ)(1-ψ)) over M̄_{0,2} = 2 · 1/3
        assert_eq!(j, ratio(2, 3));
        let c2 = crate::cutjoin::gamma_value(&mut ctx, crate::cutjoin::GammaKind::Cut2 { i: 0, p: 1 }, 0, &p(&[2]))
            .unwrap();
        assert_eq!(c2, int(1));
    }
}
