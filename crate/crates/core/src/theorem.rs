//! Vanishing of the low-order coefficients of
//! `Σ_ν Φ•_{μ,ν}(-λ) z_ν D•_{ν,e}(λ)`, where `Φ•` collects disconnected
//! double Hurwitz numbers and `D•` is the exponential of the series of
//! linear Hodge integrals `D_{g,ν,e}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::factorial;
use crate::error::{bail, Result};
use crate::hodge::{HodgeContext, Point};
use crate::hurwitz::{HurwitzTable, TransformDirection};
use crate::partition::Partition;
use crate::rational::{big, int, sign_pow, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSeriesEntry {
    pub genus: u32,
    pub nu: Partition,
    pub e: Partition,
    pub value: Rational,
}

/// `D_{g,ν,e} = ∏ν_i^{ν_i}/ν_i! / (|Aut ν| l(e)!) ∫ Λ∨(1) ∏(1-ψ)^{e_j} / ∏(1-ν_iψ_i)`.
pub fn d_entry(ctx: &mut HodgeContext, genus: u32, nu: &Partition, e: &Partition) -> Result<DSeriesEntry> {
    if nu.is_empty() {
        bail!(InvalidArgument, "D needs a non-empty nu");
    }
    let mut points: Vec<Point> = nu.parts().iter().map(|&v| Point::Weight(int(v as i64))).collect();
    points.extend(e.parts().iter().map(|&ej| Point::one_minus_psi(ej)));
    let integral = ctx.integrate(genus, &points)?;
    let value = integral * nu.hurwitz_weight() / big(nu.aut_order() * factorial(e.len() as u32));
    Ok(DSeriesEntry { genus, nu: nu.clone(), e: e.clone(), value })
}

type Term = (Partition, Partition, i64);

#[derive(Clone, Debug)]
pub struct Theorem1Report {
    pub mu: Partition,
    pub e: Partition,
    /// `(χ, coefficient of λ^{l(μ)-χ})` over the checked range.
    pub rows: Vec<(i64, Rational)>,
    /// The first excluded `χ = |μ| + l(μ) - |e|` and its coefficient.
    pub boundary: (i64, Rational),
    pub entries: Vec<DSeriesEntry>,
}

impl Theorem1Report {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|(_, c)| c.is_zero())
    }
}

/// Checks that the coefficient vanishes for every `χ_min ≤ χ < |μ|+l(μ)-|e|`.
pub fn theorem1_check(ctx: &mut HodgeContext, mu: &Partition, e: &Partition, chi_min: i64) -> Result<Theorem1Report> {
    let d = mu.size();
    if d == 0 || d > 3 {
        bail!(BudgetExceeded, "theorem check supports 1 <= |mu| <= 3");
    }
    let l = mu.len() as i64;
    let chi_max = d as i64 + l - e.size() as i64 - 1;
    if chi_min > chi_max {
        bail!(InvalidArgument, "empty chi range [{chi_min}, {chi_max}]");
    }
    let e_max = l - chi_min;
    let e_min = l - (chi_max + 1);
    let bound = |nu_size: u32| e_max + (d - nu_size) as i64;

    // connected D
    let mut connected: BTreeMap<Term, Rational> = BTreeMap::new();
    let mut entries = Vec::new();
    for size in 1..=d {
        for nu in Partition::all_of_size(size) {
            for ec in e.sub_multisets() {
                let mut g = 0u32;
                loop {
                    let k = 2 * g as i64 - 2 + nu.len() as i64;
                    if k > bound(size) {
                        break;
                    }
                    let entry = d_entry(ctx, g, &nu, &ec)?;
                    if !entry.value.is_zero() {
                        connected.insert((nu.clone(), ec.clone(), k), entry.value.clone());
                    }
                    entries.push(entry);
                    g += 1;
                }
            }
        }
    }

    // D• = exp(D), truncated
    let mut disconnected: BTreeMap<Term, Rational> = BTreeMap::new();
    let mut power = connected.clone();
    for m in 1..=d {
        let inv = Rational::new(BigInt::from(1), factorial(m));
        for (k, v) in &power {
            *disconnected.entry(k.clone()).or_insert_with(Rational::zero) += v * &inv;
        }
        let mut next: BTreeMap<Term, Rational> = BTreeMap::new();
        for ((n1, e1, k1), x) in &power {
            for ((n2, e2, k2), y) in &connected {
                let size = n1.size() + n2.size();
                let ee = e1.union(e2);
                if size > d || k1 + k2 > bound(size) || e.difference(&ee).is_none() {
                    continue;
                }
                *next.entry((n1.union(n2), ee, k1 + k2)).or_insert_with(Rational::zero) += x * y;
            }
        }
        next.retain(|_, v| !v.is_zero());
        power = next;
    }

    // Φ• from connected brute-force numbers
    let r_max = (e_max + d as i64).max(0) as u32;
    let conn = HurwitzTable::build_bruteforce(d, r_max, true)?;
    let disc = conn.transform(TransformDirection::Exp)?;

    let coefficient = |exponent: i64| -> Rational {
        let mut total = Rational::zero();
        for nu in Partition::all_of_size(d) {
            let z = big(nu.z_order());
            for r in 0..=r_max {
                let Some(h) = disc.get(mu, &nu, r) else { continue };
                if h.is_zero() {
                    continue;
                }
                let Some(dv) = disconnected.get(&(nu.clone(), e.clone(), exponent - r as i64)) else { continue };
                total += h * sign_pow(r as u64) / big(factorial(r)) * &z * dv;
            }
        }
        total
    };

    let rows = (chi_min..=chi_max).map(|chi| (chi, coefficient(l - chi))).collect();
    let boundary = (chi_max + 1, coefficient(e_min));
    Ok(Theorem1Report { mu: mu.clone(), e: e.clone(), rows, boundary, entries })
}

/// Lowest `χ` whose coefficient only needs genus `≤ 1` Hodge data.
pub fn default_chi_min(mu: &Partition) -> i64 {
    mu.len() as i64 - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::genus_one_context;
    use crate::rational::ratio;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn spec_cases_vanish() {
        let mut ctx = genus_one_context(3).unwrap();
        for mu in [p(&[1]), p(&[2]), p(&[1, 1])] {
            for e in [Partition::empty(), p(&[1])] {
                let rep = theorem1_check(&mut ctx, &mu, &e, default_chi_min(&mu)).unwrap();
                assert!(rep.holds(), "mu={mu} e={e}: {:?}", rep.rows);
                // with e empty the full sum is λ^{-d}/d! when μ = 1^d and zero otherwise
                let all_ones = mu.parts().iter().all(|&v| v == 1);
                if e.is_empty() {
                    assert_eq!(rep.boundary.1.is_zero(), !all_ones, "mu={mu}");
                }
            }
        }
    }

    #[test]
    fn boundary_value_for_two_sheets() {
        let mut ctx = genus_one_context(3).unwrap();
        let rep = theorem1_check(&mut ctx, &p(&[1, 1]), &Partition::empty(), 1).unwrap();
        assert_eq!(rep.boundary, (4, ratio(1, 2)));
    }

    #[test]
    fn genus_two_data_is_reported_missing() {
        let mut ctx = genus_one_context(3).unwrap();
        let err = theorem1_check(&mut ctx, &p(&[1]), &Partition::empty(), -2).unwrap_err();
        assert!(matches!(err, crate::Error::MissingHodge(_)), "{err:?}");
    }
}
