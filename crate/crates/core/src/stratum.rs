//! The half-integer stratum of the large-degree cut-and-join expansion,
//! evaluated numerically.
//!
//! With `F_{g,n}(x) = Σ_b ⟨τ_b⟩ ∏ x_i^{b_i-1/2} / (2π)^{n/2}` and the
//! unstable pieces `F_{0,1}(x) = x^{-5/2}/√(2π)`,
//! `F_{0,2}(x, y) = 1/(2π √(xy) (x+y))`, the identity is
//!
//! ```text
//! 0 = Σ_{i<j} (x_i+x_j) F_{g,n-1}(x_i+x_j, x_rest)
//!   + ½ Σ_i FP ∫_0^{x_i} u v [ F_{g-1,n+1}(u, v, x_rest)
//!                              + Σ_{g_1+g_2=g, I⊔J} F_{g_1}(u, x_I) F_{g_2}(v, x_J) ] du,
//! ```
//!
//! `v = x_i - u`, where `FP` is the Hadamard finite part needed by the
//! `F_{0,1}` factor. Power-times-power pieces are integrated in closed form
//! through half-integer Beta values; pieces with a finite pole from
//! `F_{0,2}` go through tanh-sinh quadrature.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::factorial;
use crate::error::{bail, Result};
use crate::hodge::compositions;
use crate::psi::{CorrelatorCache, CorrelatorKey};
use crate::quadrature::{tanh_sinh, QuadratureOptions};
use crate::rational::{big, int, Rational};
use crate::real::{BigFloat, RealContext};
use crate::tolerances::STARSTAR_RELATIVE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermGroup {
    Join,
    /// `F_{g-1,n+1}`, stable or the cylinder at `g = 1, n = 1`.
    GenusReducing,
    /// Both factors stable.
    StableSplit,
    /// One factor is `F_{0,1}`.
    Disk,
    /// At least one factor is `F_{0,2}` with an external point.
    Cylinder,
}

pub const TERM_GROUPS: [TermGroup; 5] =
    [TermGroup::Join, TermGroup::GenusReducing, TermGroup::StableSplit, TermGroup::Disk, TermGroup::Cylinder];

#[derive(Clone, Debug)]
pub struct StarStarReport {
    pub key: CorrelatorKey,
    pub samples: Vec<Rational>,
    pub precision: usize,
    pub sums: Vec<(TermGroup, BigFloat)>,
    /// Sum of absolute values of every individual term.
    pub magnitude: BigFloat,
    pub terms: usize,
}

impl StarStarReport {
    fn relative(&self, skip: Option<TermGroup>) -> f64 {
        let mut total = BigFloat::from_u64(0, self.precision);
        for (g, v) in &self.sums {
            if Some(*g) != skip {
                total = total.add(v, self.precision, astro_float::RoundingMode::ToEven);
            }
        }
        if self.magnitude.is_zero() {
            return 0.0;
        }
        let r = total.div(&self.magnitude, self.precision, astro_float::RoundingMode::ToEven);
        let l = RealContext::log2_abs(&r);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            libm::exp2(l)
        }
    }

    /// `|Σ terms| / Σ |terms|`.
    pub fn relative_residual(&self) -> f64 {
        self.relative(None)
    }

    /// The residual with one group left out, as a control.
    pub fn residual_without(&self, group: TermGroup) -> f64 {
        self.relative(Some(group))
    }

    pub fn group_sum(&self, group: TermGroup) -> f64 {
        self.sums.iter().find(|(g, _)| *g == group).map_or(0.0, |(_, v)| RealContext::to_f64(v))
    }

    pub fn holds(&self) -> bool {
        self.relative_residual() <= STARSTAR_RELATIVE
    }
}

/// One side of a product, as a function of its distinguished variable `z`.
#[derive(Clone, Debug)]
enum Factor {
    /// `Σ c z^{h/2}` with `h` odd.
    Powers(Vec<(i64, BigFloat)>),
    /// `F_{0,2}(z, y)`.
    Cylinder(BigFloat),
}

impl Factor {
    fn eval(&self, ctx: &mut RealContext, z: &BigFloat) -> BigFloat {
        match self {
            Factor::Powers(list) => {
                let terms: Vec<BigFloat> = list.iter().map(|(h, c)| ctx.mul(c, &ctx.pow_half(z, *h))).collect();
                ctx.sum(&terms)
            }
            Factor::Cylinder(y) => {
                let pi = ctx.pi();
                let den = ctx.mul(&ctx.mul_int(&pi, 2), &ctx.sqrt(&ctx.mul(z, y)));
                ctx.div(&ctx.int(1), &ctx.mul(&den, &ctx.add(z, y)))
            }
        }
    }
}

/// `Γ(h/2) / √π` for odd `h`.
fn gamma_half_odd(h: i64) -> Rational {
    let mut r = int(1);
    let mut cur = 1i64;
    while cur < h {
        r *= Rational::new(BigInt::from(cur), BigInt::from(2));
        cur += 2;
    }
    while cur > h {
        cur -= 2;
        r /= Rational::new(BigInt::from(cur), BigInt::from(2));
    }
    r
}

/// `B(h_1/2, h_2/2) / π` for odd `h_1, h_2` with `h_1 + h_2 ≥ 2`.
fn beta_half(h1: i64, h2: i64) -> Rational {
    let m = (h1 + h2) / 2;
    gamma_half_odd(h1) * gamma_half_odd(h2) / big(factorial((m - 1) as u32))
}

struct Evaluator<'a> {
    cache: &'a mut CorrelatorCache,
    ctx: &'a mut RealContext,
    inv_sqrt_2pi: BigFloat,
}

impl Evaluator<'_> {
    /// `(2π)^{-n/2}`.
    fn norm(&mut self, n: usize) -> BigFloat {
        self.ctx.powi(&self.inv_sqrt_2pi, n as i64)
    }

    /// `∏ y^{b-1/2}` over fixed points.
    fn fixed_monomial(&mut self, fixed: &[BigFloat], b: &[u32]) -> BigFloat {
        let mut acc = self.ctx.int(1);
        for (y, &e) in fixed.iter().zip(b) {
            acc = self.ctx.mul(&acc, &self.ctx.pow_half(y, 2 * e as i64 - 1));
        }
        acc
    }

    /// `F_{g, 1+|fixed|}(z, fixed)` as a factor of `z`; `None` when it vanishes.
    fn factor(&mut self, genus: i64, fixed: &[BigFloat]) -> Option<Factor> {
        if genus < 0 {
            return None;
        }
        let n = fixed.len() + 1;
        if genus == 0 && n == 1 {
            let c = self.inv_sqrt_2pi.clone();
            return Some(Factor::Powers(alloc::vec![(-5, c)]));
        }
        if genus == 0 && n == 2 {
            return Some(Factor::Cylinder(fixed[0].clone()));
        }
        let dim = 3 * genus - 3 + n as i64;
        if dim < 0 {
            return None;
        }
        let norm = self.norm(n);
        let mut list = Vec::new();
        for b0 in 0..=dim as u32 {
            let mut acc = Vec::new();
            for rest in compositions(dim as u32 - b0, fixed.len()) {
                let mut exps = alloc::vec![b0];
                exps.extend_from_slice(&rest);
                let v = self.cache.correlator(&CorrelatorKey::new(genus as u32, exps));
                if v.is_zero() {
                    continue;
                }
                let mono = self.fixed_monomial(fixed, &rest);
                acc.push(self.ctx.mul(&self.ctx.rational(&v), &mono));
            }
            if !acc.is_empty() {
                let c = self.ctx.mul(&self.ctx.sum(&acc), &norm);
                list.push((2 * b0 as i64 - 1, c));
            }
        }
        if list.is_empty() {
            None
        } else {
            Some(Factor::Powers(list))
        }
    }

    /// `Σ c_{st} FP∫_0^X u^{1+s/2} v^{1+t/2} du`.
    fn beta_sum(&mut self, x: &BigFloat, pairs: &[(i64, i64, BigFloat)]) -> BigFloat {
        let pi = self.ctx.pi();
        let mut terms = Vec::with_capacity(pairs.len());
        for (s, t, c) in pairs {
            let (h1, h2) = (s + 4, t + 4);
            let b = self.ctx.rational(&beta_half(h1, h2));
            let xp = self.ctx.pow_half(x, h1 + h2 - 2);
            terms.push(self.ctx.mul(&self.ctx.mul(c, &b), &self.ctx.mul(&xp, &pi)));
        }
        self.ctx.sum(&terms)
    }

    /// `FP∫_0^X u v A(u) B(v) du`.
    fn product_integral(&mut self, x: &BigFloat, a: &Factor, b: &Factor) -> Result<BigFloat> {
        if let (Factor::Powers(pa), Factor::Powers(pb)) = (a, b) {
            let mut pairs = Vec::new();
            for (s, ca) in pa {
                for (t, cb) in pb {
                    pairs.push((*s, *t, self.ctx.mul(ca, cb)));
                }
            }
            return Ok(self.beta_sum(x, &pairs));
        }
        let zero = self.ctx.zero();
        let opts = QuadratureOptions::full(self.ctx);
        let r = tanh_sinh(self.ctx, &zero, x, opts, |ctx, node| {
            let u = &node.from_lower;
            let v = &node.to_upper;
            let fa = a.eval(ctx, u);
            let fb = b.eval(ctx, v);
            Ok(ctx.mul(&ctx.mul(&ctx.mul(u, v), &fa), &fb))
        })?;
        Ok(r.value)
    }
}

fn subset(values: &[BigFloat], mask: u32, keep: bool) -> Vec<BigFloat> {
    values
        .iter()
        .enumerate()
        .filter(|(i, _)| ((mask >> i) & 1 == 1) == keep)
        .map(|(_, v)| v.clone())
        .collect()
}

pub fn starstar_numeric_check(
    cache: &mut CorrelatorCache,
    key: &CorrelatorKey,
    samples: &[Rational],
    ctx: &mut RealContext,
) -> Result<StarStarReport> {
    if !key.is_stable() || !key.is_dimensional() {
        bail!(InvalidArgument, "key must be stable and dimensional");
    }
    let n = key.n();
    if samples.len() != n {
        bail!(InvalidArgument, "need {n} sample points, got {}", samples.len());
    }
    if samples.iter().any(|x| x <= &int(0)) {
        bail!(InvalidArgument, "sample points must be positive");
    }
    if n > 12 {
        bail!(BudgetExceeded, "at most 12 points");
    }
    let g = key.genus() as i64;
    let xs: Vec<BigFloat> = samples.iter().map(|q| ctx.rational(q)).collect();
    let sqrt_2pi = ctx.sqrt_2pi();
    let inv_sqrt_2pi = ctx.div(&ctx.int(1), &sqrt_2pi);
    let mut ev = Evaluator { cache, ctx, inv_sqrt_2pi };

    let mut pieces: Vec<(TermGroup, BigFloat)> = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            let s = ev.ctx.add(&xs[i], &xs[j]);
            let rest: Vec<BigFloat> = (0..n).filter(|&l| l != i && l != j).map(|l| xs[l].clone()).collect();
            if let Some(f) = ev.factor(g, &rest) {
                let v = f.eval(ev.ctx, &s);
                pieces.push((TermGroup::Join, ev.ctx.mul(&s, &v)));
            }
        }
    }

    let half = ev.ctx.div_int(&ev.ctx.int(1), 2);
    for i in 0..n {
        let x = xs[i].clone();
        let rest: Vec<BigFloat> = (0..n).filter(|&l| l != i).map(|l| xs[l].clone()).collect();

        // genus-reducing
        if g >= 1 {
            let m = rest.len() + 2;
            if g == 1 && m == 2 {
                // F_{0,2}(u, v) = (uv)^{-1/2} / (2π x)
                let pi = ev.ctx.pi();
                let c = ev.ctx.div(&ev.ctx.int(1), &ev.ctx.mul(&ev.ctx.mul_int(&pi, 2), &x));
                let v = ev.beta_sum(&x, &[(-1, -1, c)]);
                pieces.push((TermGroup::GenusReducing, ev.ctx.mul(&half, &v)));
            } else {
                let gg = (g - 1) as u32;
                let dim = 3 * (g - 1) - 3 + m as i64;
                let norm = ev.norm(m);
                let mut pairs = Vec::new();
                for a in 0..=dim as u32 {
                    for b in 0..=(dim as u32 - a) {
                        let mut acc = Vec::new();
                        for tail in compositions(dim as u32 - a - b, rest.len()) {
                            let mut exps = alloc::vec![a, b];
                            exps.extend_from_slice(&tail);
                            let v = ev.cache.correlator(&CorrelatorKey::new(gg, exps));
                            if v.is_zero() {
                                continue;
                            }
                            let mono = ev.fixed_monomial(&rest, &tail);
                            acc.push(ev.ctx.mul(&ev.ctx.rational(&v), &mono));
                        }
                        if !acc.is_empty() {
                            let c = ev.ctx.mul(&ev.ctx.sum(&acc), &norm);
                            pairs.push((2 * a as i64 - 1, 2 * b as i64 - 1, c));
                        }
                    }
                }
                if !pairs.is_empty() {
                    let v = ev.beta_sum(&x, &pairs);
                    pieces.push((TermGroup::GenusReducing, ev.ctx.mul(&half, &v)));
                }
            }
        }

        // splittings
        for g1 in 0..=g {
            for mask in 0..(1u32 << rest.len()) {
                let left = subset(&rest, mask, true);
                let right = subset(&rest, mask, false);
                let Some(fa) = ev.factor(g1, &left) else { continue };
                let Some(fb) = ev.factor(g - g1, &right) else { continue };
                let disk = |gs: i64, pts: &[BigFloat]| gs == 0 && pts.is_empty();
                if disk(g1, &left) && disk(g - g1, &right) {
                    continue;
                }
                let group = if matches!(fa, Factor::Cylinder(_)) || matches!(fb, Factor::Cylinder(_)) {
                    TermGroup::Cylinder
                } else if disk(g1, &left) || disk(g - g1, &right) {
                    TermGroup::Disk
                } else {
                    TermGroup::StableSplit
                };
                let v = ev.product_integral(&x, &fa, &fb)?;
                pieces.push((group, ev.ctx.mul(&half, &v)));
            }
        }
    }

    let ctx = ev.ctx;
    let mut sums = Vec::new();
    for group in TERM_GROUPS {
        let vals: Vec<BigFloat> = pieces.iter().filter(|(g, _)| *g == group).map(|(_, v)| v.clone()).collect();
        sums.push((group, ctx.sum(&vals)));
    }
    let mags: Vec<BigFloat> = pieces.iter().map(|(_, v)| v.abs()).collect();
    Ok(StarStarReport {
        key: key.clone(),
        samples: samples.to_vec(),
        precision: ctx.precision(),
        sums,
        magnitude: ctx.sum(&mags),
        terms: pieces.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn half_integer_gamma() {
        assert_eq!(gamma_half_odd(1), int(1));
        assert_eq!(gamma_half_odd(3), ratio(1, 2));
        assert_eq!(gamma_half_odd(-1), int(-2));
        assert_eq!(gamma_half_odd(5), ratio(3, 4));
        // B(3/2, 3/2) = π/8
        assert_eq!(beta_half(3, 3), ratio(1, 8));
        // B(5/2, -1/2) = -3π/2
        assert_eq!(beta_half(5, -1), ratio(-3, 2));
    }

    #[test]
    fn genus_one_single_point_balances_by_hand() {
        // the cylinder cut gives x/32, the two disk splits give -x/32
        let mut cache = CorrelatorCache::new();
        let mut ctx = RealContext::new(256).unwrap();
        let rep = starstar_numeric_check(&mut cache, &CorrelatorKey::new(1, [1]), &[int(1)], &mut ctx).unwrap();
        assert!((rep.group_sum(TermGroup::GenusReducing) - 1.0 / 32.0).abs() < 1e-15);
        assert!((rep.group_sum(TermGroup::Disk) + 1.0 / 32.0).abs() < 1e-15);
        assert!(rep.holds(), "{}", rep.relative_residual());
    }
}
