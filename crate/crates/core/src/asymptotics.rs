//! Large-`n` behaviour of the convolution sums
//!
//! ```text
//! e^{-n} Σ_{p+q=n} p^{p+k+1} q^{q+l+1} / (p! q!)      (first form)
//! e^{-n} Σ_{p+q=n} p^{p+k+1} q^{q-1}   / (p! q!)      (second form)
//! ```
//!
//! together with the Stirling ratio of a scaled partition, the Laplace
//! transforms of half-integer and integer powers, and the double integral
//! behind the join term.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::combinatorics::{double_factorial, factorial, odd_double_factorial};
use crate::error::{bail, Result};
use crate::quadrature::{exp_sinh, exp_sinh_2d, QuadratureOptions};
use crate::rational::{big, int, powi, Rational};
use crate::real::{BigFloat, RealContext};
use crate::tolerances::{
    FIRST_FORM_TOLERANCE, QUADRATURE_1D, QUADRATURE_2D, SECOND_FORM_LEADING_TOLERANCE, SECOND_FORM_TOLERANCE,
    STIRLING_RATE_TOLERANCE,
};

/// Bernoulli numbers `B_0..=B_m` with `B_1 = -1/2`.
pub fn bernoulli_numbers(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        if n == 0 {
            b.push(int(1));
            continue;
        }
        // Σ_{j=0}^{n} C(n+1, j) B_j = 0
        let mut acc = int(0);
        for (j, bj) in b.iter().enumerate() {
            acc += bj * big(crate::combinatorics::binomial(n as u32 + 1, j as u32));
        }
        b.push(-acc / int(n as i64 + 1));
    }
    b
}

/// `ln Γ(x)` for `x > 0` by Stirling's series after shifting `x` upward.
pub fn ln_gamma(ctx: &mut RealContext, x: &BigFloat, bernoulli: &[Rational]) -> Result<BigFloat> {
    if x.is_negative() || x.is_zero() {
        bail!(InvalidArgument, "ln_gamma needs a positive argument");
    }
    let threshold = ctx.int(stirling_threshold(ctx.precision()));
    let mut z = x.clone();
    let mut shift_product = ctx.int(1);
    let mut shifted = false;
    while RealContext::cmp(&z, &threshold) == core::cmp::Ordering::Less {
        shift_product = ctx.mul(&shift_product, &z);
        z = ctx.add(&z, &ctx.int(1));
        shifted = true;
    }
    let mut s = stirling_series(ctx, &z, bernoulli)?;
    if shifted {
        let lp = ctx.ln(&shift_product);
        s = ctx.sub(&s, &lp);
    }
    Ok(s)
}

fn stirling_threshold(bits: usize) -> i64 {
    (bits as i64 * 3) / 25 + 10
}

fn stirling_series(ctx: &mut RealContext, z: &BigFloat, bernoulli: &[Rational]) -> Result<BigFloat> {
    let lnz = ctx.ln(z);
    let half = ctx.div_int(&ctx.int(1), 2);
    let mut s = ctx.sub(&ctx.mul(&ctx.sub(z, &half), &lnz), z);
    let pi = ctx.pi();
    let ln2pi = ctx.ln(&ctx.mul_int(&pi, 2));
    s = ctx.add(&s, &ctx.div_int(&ln2pi, 2));
    let z2 = ctx.mul(z, z);
    let mut zpow = z.clone();
    let target = -(ctx.precision() as f64) - 4.0;
    let scale = RealContext::log2_abs(&s);
    let mut k = 1usize;
    loop {
        if 2 * k >= bernoulli.len() {
            bail!(PrecisionTooLow, "not enough Bernoulli numbers for {} bits", ctx.precision());
        }
        let c = &bernoulli[2 * k] / int((2 * k * (2 * k - 1)) as i64);
        let term = ctx.div(&ctx.rational(&c), &zpow);
        s = ctx.add(&s, &term);
        if RealContext::log2_abs(&term) < scale + target {
            return Ok(s);
        }
        zpow = ctx.mul(&zpow, &z2);
        k += 1;
    }
}

/// Precomputed `ln p` and `p ln p - ln p!` for `1 ≤ p ≤ n_max`.
#[derive(Clone)]
pub struct AsymptoticWorkspace {
    n_max: u64,
    ln: Vec<BigFloat>,
    /// `L(p) = p ln p - ln p!`
    l: Vec<BigFloat>,
    bases: BTreeMap<u64, Vec<BigFloat>>,
}

impl AsymptoticWorkspace {
    pub fn new(ctx: &mut RealContext, n_max: u64) -> Result<Self> {
        if n_max < 2 {
            bail!(InvalidArgument, "workspace needs n_max >= 2");
        }
        let bernoulli = bernoulli_numbers(bernoulli_count(ctx.precision()));
        let cutoff = stirling_threshold(ctx.precision()) as u64;
        let mut ln = Vec::with_capacity(n_max as usize + 1);
        let mut l = Vec::with_capacity(n_max as usize + 1);
        ln.push(ctx.zero());
        l.push(ctx.zero());
        let mut small_fact = ctx.zero();
        for p in 1..=n_max {
            let lp = ctx.ln(&ctx.int(p as i64));
            let lfact = if p < cutoff {
                small_fact = ctx.add(&small_fact, &lp);
                small_fact.clone()
            } else {
                let z = ctx.int(p as i64 + 1);
                stirling_series(ctx, &z, &bernoulli)?
            };
            l.push(ctx.sub(&ctx.mul_int(&lp, p as i64), &lfact));
            ln.push(lp);
        }
        Ok(AsymptoticWorkspace { n_max, ln, l, bases: BTreeMap::new() })
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// `ln p!` as stored.
    pub fn ln_factorial(&self, ctx: &RealContext, p: u64) -> BigFloat {
        ctx.sub(&ctx.mul_int(&self.ln[p as usize], p as i64), &self.l[p as usize])
    }

    /// `e^{L(p) + L(q) - n} p q` for `p = 1..n-1`, cached per `n`.
    fn bases(&mut self, ctx: &mut RealContext, n: u64) -> &[BigFloat] {
        if !self.bases.contains_key(&n) {
            let mut v = Vec::with_capacity(n as usize - 1);
            let minus_n = ctx.int(-(n as i64));
            for p in 1..n {
                let q = n - p;
                let arg = ctx.add(&ctx.add(&self.l[p as usize], &self.l[q as usize]), &minus_n);
                let e = ctx.exp(&arg);
                v.push(ctx.mul_int(&e, (p * q) as i64));
            }
            self.bases.insert(n, v);
        }
        &self.bases[&n]
    }
}

fn bernoulli_count(bits: usize) -> usize {
    // the series at the threshold needs roughly bits/5 terms
    (bits / 3).max(40) + 8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumForm {
    First { k: u32, l: u32 },
    Second { k: u32 },
}

/// Bits of accuracy a sum of size `n` leaves at the working precision.
fn remaining_bits(ctx: &RealContext, n: u64) -> f64 {
    let nf = n as f64;
    ctx.precision() as f64 - libm::log2(nf * libm::log(nf + 1.0) + nf) - libm::log2(nf) - 4.0
}

pub fn asym_sum(ws: &mut AsymptoticWorkspace, ctx: &mut RealContext, n: u64, form: SumForm) -> Result<BigFloat> {
    if n < 2 {
        bail!(InvalidArgument, "asym_sum needs n >= 2");
    }
    if remaining_bits(ctx, n) < 32.0 {
        bail!(PrecisionTooLow, "{} bits are too few for n = {n}", ctx.precision());
    }
    if n > ws.n_max {
        bail!(InvalidArgument, "n = {n} exceeds the workspace bound {}", ws.n_max);
    }
    let bases = ws.bases(ctx, n).to_vec();
    let mut terms = Vec::with_capacity(bases.len());
    for (idx, b) in bases.iter().enumerate() {
        let p = idx as i64 + 1;
        let q = n as i64 - p;
        let t = match form {
            SumForm::First { k, l } => {
                let pk = ctx.powi(&ctx.int(p), k as i64);
                let ql = ctx.powi(&ctx.int(q), l as i64);
                ctx.mul(&ctx.mul(b, &pk), &ql)
            }
            SumForm::Second { k } => {
                let pk = ctx.powi(&ctx.int(p), k as i64);
                ctx.div(&ctx.mul(b, &pk), &ctx.int(q * q))
            }
        };
        terms.push(t);
    }
    Ok(ctx.sum(&terms))
}

/// `(1/2)(2k+1)!!(2l+1)!! / (2^{k+l+2} (k+l+2)!)`.
pub fn first_form_coefficient(k: u32, l: u32) -> Rational {
    let num = odd_double_factorial(k) * odd_double_factorial(l);
    let den = BigInt::from(2) * BigInt::from(2).pow(k + l + 2) * factorial(k + l + 2);
    Rational::new(num, den)
}

/// `(2k+1)!! / (2^{k+1} k!)`, the magnitude of the second-form sub-leading term.
pub fn second_form_coefficient(k: u32) -> Rational {
    Rational::new(odd_double_factorial(k), BigInt::from(2).pow(k + 1) * factorial(k))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReportFormula {
    FirstForm { k: u32, l: u32 },
    SecondForm { k: u32 },
    Stirling { x: Vec<u32>, k: Vec<i64> },
}

#[derive(Clone, Debug)]
pub struct AsymptoticReport {
    pub formula: ReportFormula,
    pub sizes: Vec<u64>,
    /// The normalized quantity at each size.
    pub ratios: Vec<f64>,
    /// Relative distance of each ratio from its limit.
    pub errors: Vec<f64>,
    pub extrapolated: f64,
    pub target: f64,
    /// Empirical order `α` in `error ~ n^{-α}` from the last two sizes.
    pub rate: f64,
    /// Second form only: the sum over its leading term at the largest size.
    pub leading_ratio: Option<f64>,
    pub verdict: bool,
}

fn check_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.len() < 3 {
        bail!(InvalidArgument, "schedule needs at least three sizes");
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        bail!(InvalidArgument, "schedule must be strictly increasing");
    }
    Ok(())
}

fn rel_err(x: f64, target: f64) -> f64 {
    libm::fabs(x / target - 1.0)
}

fn order(errors: &[f64], sizes: &[u64]) -> f64 {
    let m = errors.len();
    let (e1, e2) = (errors[m - 2], errors[m - 1]);
    let (n1, n2) = (sizes[m - 2] as f64, sizes[m - 1] as f64);
    libm::log(e1 / e2) / libm::log(n2 / n1)
}

fn non_increasing(errors: &[f64]) -> bool {
    errors.windows(2).all(|w| w[1] <= w[0])
}

pub fn asym_leading_check(
    ws: &mut AsymptoticWorkspace,
    ctx: &mut RealContext,
    form: SumForm,
    schedule: &[u64],
) -> Result<AsymptoticReport> {
    check_schedule(schedule)?;
    match form {
        SumForm::First { k, l } => {
            let target = RealContext::to_f64(&ctx.rational(&first_form_coefficient(k, l)));
            let mut ratios = Vec::new();
            for &n in schedule {
                let s = asym_sum(ws, ctx, n, form)?;
                let scale = ctx.powi(&ctx.int(n as i64), (k + l + 2) as i64);
                ratios.push(RealContext::to_f64(&ctx.div(&s, &scale)));
            }
            let errors: Vec<f64> = ratios.iter().map(|&r| rel_err(r, target)).collect();
            let extrapolated = richardson(&ratios, schedule, 1.0);
            let verdict = *errors.last().unwrap() <= FIRST_FORM_TOLERANCE && non_increasing(&errors);
            Ok(AsymptoticReport {
                formula: ReportFormula::FirstForm { k, l },
                sizes: schedule.to_vec(),
                rate: order(&errors, schedule),
                leading_ratio: None,
                ratios,
                errors,
                extrapolated,
                target,
                verdict,
            })
        }
        SumForm::Second { k } => {
            let target = -RealContext::to_f64(&ctx.rational(&second_form_coefficient(k)));
            let sqrt_2pi = ctx.sqrt_2pi();
            let mut ratios = Vec::new();
            let mut leading_ratio = None;
            for (idx, &n) in schedule.iter().enumerate() {
                let s = asym_sum(ws, ctx, n, form)?;
                let nn = ctx.int(n as i64);
                let lead = ctx.div(&ctx.pow_half(&nn, 2 * k as i64 + 1), &sqrt_2pi);
                if idx + 1 == schedule.len() {
                    leading_ratio = Some(RealContext::to_f64(&ctx.div(&s, &lead)));
                }
                let sub = ctx.div(&ctx.sub(&s, &lead), &ctx.powi(&nn, k as i64));
                ratios.push(RealContext::to_f64(&sub));
            }
            let errors: Vec<f64> = ratios.iter().map(|&r| rel_err(r, target)).collect();
            let extrapolated = richardson(&ratios, schedule, 0.5);
            let verdict = rel_err(extrapolated, target) <= SECOND_FORM_TOLERANCE;
            Ok(AsymptoticReport {
                formula: ReportFormula::SecondForm { k },
                sizes: schedule.to_vec(),
                rate: order(&errors, schedule),
                leading_ratio,
                ratios,
                errors,
                extrapolated,
                target,
                verdict,
            })
        }
    }
}

/// Eliminates an `A n^{-α}` term using the last two sizes.
fn richardson(values: &[f64], sizes: &[u64], alpha: f64) -> f64 {
    let m = values.len();
    let (a, b) = (values[m - 2], values[m - 1]);
    let (ra, rb) = (libm::pow(sizes[m - 2] as f64, alpha), libm::pow(sizes[m - 1] as f64, alpha));
    (b * rb - a * ra) / (rb - ra)
}

/// Whether the leading term `n^{k+1/2}/√(2π)` of the second form is within
/// tolerance at the largest size.
pub fn second_form_leading_holds(report: &AsymptoticReport) -> bool {
    report.leading_ratio.is_some_and(|r| rel_err(r, 1.0) <= SECOND_FORM_LEADING_TOLERANCE)
}

/// `∏ μ_i^{μ_i+k_i}/μ_i!` against `e^{|μ|} ∏ μ_i^{k_i-1/2}/√(2π)` for
/// `μ_i = N x_i`; the ratio should behave like `1 - Σ 1/(12 μ_i)`.
pub fn stirling_stratum_check(ctx: &mut RealContext, x: &[u32], k: &[i64], schedule: &[u64]) -> Result<AsymptoticReport> {
    check_schedule(schedule)?;
    if x.is_empty() || x.len() != k.len() || x.contains(&0) {
        bail!(InvalidArgument, "need matching non-empty x and k with positive x");
    }
    let largest = schedule.last().unwrap() * *x.iter().max().unwrap() as u64;
    if remaining_bits(ctx, largest) < 32.0 {
        bail!(PrecisionTooLow, "{} bits are too few for parts up to {largest}", ctx.precision());
    }
    let sqrt_2pi = ctx.sqrt_2pi();
    let ln_sqrt_2pi = ctx.ln(&sqrt_2pi);
    let mut ratios = Vec::new();
    let mut scaled = Vec::new();
    for &n in schedule {
        let mut acc = ctx.zero();
        for (&xi, &ki) in x.iter().zip(k) {
            let mu = n * xi as u64;
            let ln_mu = ctx.ln(&ctx.int(mu as i64));
            let mut ln_fact = ctx.zero();
            let mut logs = Vec::with_capacity(mu as usize);
            for j in 2..=mu {
                logs.push(ctx.ln(&ctx.int(j as i64)));
            }
            if !logs.is_empty() {
                ln_fact = ctx.sum(&logs);
            }
            // (μ+k) ln μ - ln μ! - μ - (k - 1/2) ln μ + ln √(2π)
            let t = ctx.mul_int(&ln_mu, mu as i64 + ki);
            let t = ctx.sub(&ctx.sub(&t, &ln_fact), &ctx.int(mu as i64));
            let t = ctx.sub(&t, &ctx.div_int(&ctx.mul_int(&ln_mu, 2 * ki - 1), 2));
            let t = ctx.add(&t, &ln_sqrt_2pi);
            acc = ctx.add(&acc, &t);
        }
        let ratio = ctx.exp(&acc);
        let excess = ctx.sub(&ratio, &ctx.int(1));
        ratios.push(RealContext::to_f64(&ratio));
        scaled.push(RealContext::to_f64(&ctx.mul_int(&excess, n as i64)));
    }
    // μ^{μ+1/2} √(2π) / (μ! e^μ) = 1 - 1/(12μ) + O(μ^{-2})
    let predicted: f64 = -x.iter().map(|&xi| 1.0 / (12.0 * xi as f64)).sum::<f64>();
    let errors: Vec<f64> = ratios.iter().map(|&r| libm::fabs(r - 1.0)).collect();
    let extrapolated = *scaled.last().unwrap();
    let verdict = non_increasing(&errors) && rel_err(extrapolated, predicted) <= STIRLING_RATE_TOLERANCE;
    Ok(AsymptoticReport {
        formula: ReportFormula::Stirling { x: x.to_vec(), k: k.to_vec() },
        sizes: schedule.to_vec(),
        rate: order(&errors, schedule),
        leading_ratio: None,
        ratios,
        errors,
        extrapolated,
        target: predicted,
        verdict,
    })
}

#[derive(Clone, Debug)]
pub struct IntegralComparison {
    pub quadrature: f64,
    pub closed_form: f64,
    pub relative_error: f64,
    pub holds: bool,
}

fn compare(ctx: &RealContext, quad: &BigFloat, exact: &BigFloat, tol: f64) -> IntegralComparison {
    let rel = RealContext::to_f64(&ctx.div(&ctx.sub(quad, exact), exact)).abs();
    IntegralComparison {
        quadrature: RealContext::to_f64(quad),
        closed_form: RealContext::to_f64(exact),
        relative_error: rel,
        holds: rel <= tol,
    }
}

#[derive(Clone, Debug)]
pub struct LaplaceReport {
    pub k: u32,
    pub s: Rational,
    /// `∫ x^{k-1/2}/√(2π) e^{-x/2s}` against `(2k-1)!! s^{k+1/2}`.
    pub half_integer: IntegralComparison,
    /// `∫ x^k e^{-x/2s}` against `k! (2s)^{k+1}`.
    pub integer: IntegralComparison,
}

impl LaplaceReport {
    pub fn holds(&self) -> bool {
        self.half_integer.holds && self.integer.holds
    }
}

fn laplace_options() -> QuadratureOptions {
    QuadratureOptions::with_tolerance(-60)
}

pub fn laplace_check(ctx: &mut RealContext, k: u32, s: &Rational) -> Result<LaplaceReport> {
    if s <= &int(0) {
        bail!(InvalidArgument, "s must be positive");
    }
    let rate = ctx.rational(&(int(1) / (int(2) * s)));
    let sqrt_2pi = ctx.sqrt_2pi();
    let kk = k as i64;
    let half = exp_sinh(ctx, laplace_options(), |ctx, x| {
        let e = ctx.exp(&ctx.mul_int(&ctx.mul(x, &rate), -1));
        Ok(ctx.div(&ctx.mul(&ctx.pow_half(x, 2 * kk - 1), &e), &sqrt_2pi))
    })?;
    let whole = exp_sinh(ctx, laplace_options(), |ctx, x| {
        let e = ctx.exp(&ctx.mul_int(&ctx.mul(x, &rate), -1));
        Ok(ctx.mul(&ctx.powi(x, kk), &e))
    })?;
    let sf = ctx.rational(s);
    let half_exact = ctx.mul(&ctx.bigint(&double_factorial(2 * kk - 1)?), &ctx.pow_half(&sf, 2 * kk + 1));
    let whole_exact = ctx.rational(&(big(factorial(k)) * powi(&(int(2) * s), kk + 1)));
    Ok(LaplaceReport {
        k,
        s: s.clone(),
        half_integer: compare(ctx, &half.value, &half_exact, QUADRATURE_1D),
        integer: compare(ctx, &whole.value, &whole_exact, QUADRATURE_1D),
    })
}

#[derive(Clone, Debug)]
pub struct JoinIntegralReport {
    pub k: u32,
    pub yi: Rational,
    pub yj: Rational,
    /// Two-dimensional quadrature against the closed form.
    pub comparison: IntegralComparison,
    /// Relative distance between the closed form and the one-dimensional reduction.
    pub oracle_error: f64,
}

impl JoinIntegralReport {
    pub fn holds(&self) -> bool {
        self.comparison.holds && self.oracle_error <= QUADRATURE_2D
    }
}

/// `(1/(√y_i+√y_j)) (2k+1)!!/(2 y_i y_j)^{k+3/2} Σ_{m=0}^{2k+2} y_i^{(2k+2-m)/2} y_j^{m/2}`.
pub fn join_integral_closed_form(ctx: &mut RealContext, k: u32, yi: &BigFloat, yj: &BigFloat) -> BigFloat {
    let kk = k as i64;
    let mut terms = Vec::new();
    for m in 0..=(2 * kk + 2) {
        terms.push(ctx.mul(&ctx.pow_half(yi, 2 * kk + 2 - m), &ctx.pow_half(yj, m)));
    }
    let poly = ctx.sum(&terms);
    let denom = ctx.add(&ctx.sqrt(yi), &ctx.sqrt(yj));
    let two_y = ctx.mul_int(&ctx.mul(yi, yj), 2);
    let df = ctx.bigint(&odd_double_factorial(k));
    let v = ctx.div(&ctx.mul(&df, &poly), &ctx.pow_half(&two_y, 2 * kk + 3));
    ctx.div(&v, &denom)
}

/// `Γ(a+1) (y_i^{-a-1} - y_j^{-a-1}) / ((y_j - y_i) √(2π))` with `a = k + 1/2`.
fn join_integral_reduced(ctx: &mut RealContext, k: u32, yi: &BigFloat, yj: &BigFloat) -> BigFloat {
    let kk = k as i64;
    // Γ(k + 3/2) = (2k+1)!! √π / 2^{k+1}
    let pi = ctx.pi();
    let gamma = ctx.mul(&ctx.bigint(&odd_double_factorial(k)), &ctx.sqrt(&pi));
    let gamma = ctx.mul(&gamma, &ctx.pow2(-(kk + 1)));
    let diff = ctx.sub(&ctx.pow_half(yi, -(2 * kk + 3)), &ctx.pow_half(yj, -(2 * kk + 3)));
    let sqrt_2pi = ctx.sqrt_2pi();
    ctx.div(&ctx.mul(&gamma, &diff), &ctx.mul(&ctx.sub(yj, yi), &sqrt_2pi))
}

pub fn join_integral_check(ctx: &mut RealContext, k: u32, yi: &Rational, yj: &Rational) -> Result<JoinIntegralReport> {
    if yi <= &int(0) || yj <= &int(0) {
        bail!(InvalidArgument, "y_i and y_j must be positive");
    }
    if yi == yj {
        bail!(InvalidArgument, "y_i and y_j must differ");
    }
    let (a, b) = (ctx.rational(yi), ctx.rational(yj));
    let kk = k as i64;
    let sqrt_2pi = ctx.sqrt_2pi();
    let opts = QuadratureOptions { tolerance_log2: -40, max_level: 8 };
    let quad = exp_sinh_2d(
        ctx,
        opts,
        |ctx, x| ctx.exp(&ctx.mul_int(&ctx.mul(x, &a), -1)),
        |ctx, y| ctx.exp(&ctx.mul_int(&ctx.mul(y, &b), -1)),
        |ctx, x, y| ctx.pow_half(&ctx.add(x, y), 2 * kk + 1),
    )?;
    let value = ctx.div(&quad.value, &sqrt_2pi);
    let closed = join_integral_closed_form(ctx, k, &a, &b);
    let reduced = join_integral_reduced(ctx, k, &a, &b);
    let oracle_error = RealContext::to_f64(&ctx.div(&ctx.sub(&closed, &reduced), &reduced)).abs();
    Ok(JoinIntegralReport {
        k,
        yi: yi.clone(),
        yj: yj.clone(),
        comparison: compare(ctx, &value, &closed, QUADRATURE_2D),
        oracle_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], ratio(-1, 2));
        assert_eq!(b[2], ratio(1, 6));
        assert_eq!(b[4], ratio(-1, 30));
        assert_eq!(b[12], ratio(-691, 2730));
        assert_eq!(b[7], int(0));
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut ctx = RealContext::new(128).unwrap();
        let b = bernoulli_numbers(80);
        let x = ctx.int(31);
        let lg = ln_gamma(&mut ctx, &x, &b).unwrap();
        let exact = ctx.bigint(&factorial(30));
        let exact = ctx.ln(&exact);
        assert!(RealContext::log2_abs(&ctx.sub(&lg, &exact)) < -115.0);
        let half = ctx.div_int(&ctx.int(1), 2);
        let lg = ln_gamma(&mut ctx, &half, &b).unwrap();
        let pi = ctx.pi();
        let lnpi = ctx.ln(&pi);
        let exact = ctx.div_int(&lnpi, 2);
        assert!(RealContext::log2_abs(&ctx.sub(&lg, &exact)) < -115.0);
    }

    #[test]
    fn smallest_sum_is_a_single_ordered_pair() {
        let mut ctx = RealContext::new(128).unwrap();
        let mut ws = AsymptoticWorkspace::new(&mut ctx, 10).unwrap();
        let s = asym_sum(&mut ws, &mut ctx, 2, SumForm::First { k: 0, l: 0 }).unwrap();
        let e2 = ctx.exp(&ctx.int(-2));
        assert!(RealContext::log2_abs(&ctx.sub(&s, &e2)) < -120.0);
    }

    #[test]
    fn coefficients() {
        assert_eq!(first_form_coefficient(0, 0), ratio(1, 16));
        assert_eq!(first_form_coefficient(1, 2), ratio(45, 7680));
        assert_eq!(second_form_coefficient(0), ratio(1, 2));
    }

    #[test]
    fn precision_guard() {
        let mut ctx = RealContext::new(64).unwrap();
        let mut ws = AsymptoticWorkspace::new(&mut ctx, 10).unwrap();
        let err = asym_sum(&mut ws, &mut ctx, 3_000_000, SumForm::First { k: 0, l: 0 }).unwrap_err();
        assert!(matches!(err, crate::Error::PrecisionTooLow(_)));
    }
}
