//! Double-exponential quadrature at arbitrary precision.
//!
//! `tanh_sinh` integrates over a finite interval and hands the integrand the
//! distances to both endpoints, computed without cancellation, so endpoint
//! singularities like `(b - x)^{-1/2}` stay accurate. `exp_sinh` covers
//! `[0, ∞)`. Both refine by halving the step until two successive levels
//! agree to the requested relative tolerance.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::real::{BigFloat, RealContext};

/// An abscissa with its distances to the interval ends.
pub struct Node {
    pub x: BigFloat,
    pub from_lower: BigFloat,
    pub to_upper: BigFloat,
}

#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: BigFloat,
    /// Difference between the last two levels.
    pub error_estimate: BigFloat,
    pub levels: u32,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    /// Stop once successive levels agree to `2^{tolerance_log2}` relatively.
    pub tolerance_log2: i64,
    pub max_level: u32,
}

impl QuadratureOptions {
    /// Tolerance a few bits above the working precision.
    pub fn full(ctx: &RealContext) -> Self {
        QuadratureOptions { tolerance_log2: -(ctx.precision() as i64) + 24, max_level: 12 }
    }

    pub fn with_tolerance(tolerance_log2: i64) -> Self {
        QuadratureOptions { tolerance_log2, max_level: 12 }
    }
}

fn t_cap(ctx: &RealContext) -> f64 {
    let bits = ctx.precision() as f64;
    libm::asinh(4.0 * bits * core::f64::consts::LN_2 / core::f64::consts::PI) + 0.5
}

/// Sum of `f` over one side of the grid `t = j·h` for the given `j`s,
/// stopping after the terms become negligible and start to shrink.
fn side_sum<G>(ctx: &mut RealContext, js: impl Iterator<Item = i64>, h: f64, cap: f64, cutoff: f64, term: &mut G, count: &mut usize) -> Result<Vec<BigFloat>>
where
    G: FnMut(&mut RealContext, &BigFloat) -> Result<BigFloat>,
{
    let mut out = Vec::new();
    let mut prev: Option<f64> = None;
    let mut running = ctx.zero();
    for j in js {
        let tf = j as f64 * h;
        if tf.abs() > cap {
            break;
        }
        let t = ctx.mul(&ctx.int(j), &h_big(ctx, h));
        let v = term(ctx, &t)?;
        *count += 1;
        let size = RealContext::log2_abs(&v);
        running = ctx.add(&running, &v);
        let scale = RealContext::log2_abs(&running);
        let small = size < scale + cutoff || v.is_zero();
        let shrinking = prev.is_none_or(|p| size <= p);
        out.push(v);
        if small && shrinking && j != 0 {
            break;
        }
        prev = Some(size);
    }
    Ok(out)
}

fn h_big(ctx: &RealContext, h: f64) -> BigFloat {
    // h is always a power of two
    let e = h.log2().round() as i64;
    ctx.pow2(e)
}

fn level_loop<G>(ctx: &mut RealContext, opts: QuadratureOptions, mut term: G) -> Result<QuadratureResult>
where
    G: FnMut(&mut RealContext, &BigFloat) -> Result<BigFloat>,
{
    let cap = t_cap(ctx);
    // terms this far below the running sum cannot affect the requested tolerance
    let cutoff = (opts.tolerance_log2 as f64 - 16.0).max(-(ctx.precision() as f64) - 8.0);
    let mut count = 0usize;
    let mut h = 1.0f64;
    let mut positive = side_sum(ctx, 0.., h, cap, cutoff, &mut term, &mut count)?;
    let mut negative = side_sum(ctx, (1..).map(|j: i64| -j), h, cap, cutoff, &mut term, &mut count)?;
    let mut total = ctx.add(&ctx.sum(&positive), &ctx.sum(&negative));
    let mut prev = ctx.mul(&total, &h_big(ctx, h));
    for level in 1..=opts.max_level {
        h /= 2.0;
        // odd multiples of the new step
        positive = side_sum(ctx, (0..).map(|j: i64| 2 * j + 1), h, cap, cutoff, &mut term, &mut count)?;
        negative = side_sum(ctx, (0..).map(|j: i64| -(2 * j + 1)), h, cap, cutoff, &mut term, &mut count)?;
        let fresh = ctx.add(&ctx.sum(&positive), &ctx.sum(&negative));
        total = ctx.add(&total, &fresh);
        let value = ctx.mul(&total, &h_big(ctx, h));
        let diff = ctx.sub(&value, &prev).abs();
        let scale = RealContext::log2_abs(&value);
        let err = RealContext::log2_abs(&diff);
        if level >= 3 && (diff.is_zero() || err <= scale + opts.tolerance_log2 as f64) {
            return Ok(QuadratureResult { value, error_estimate: diff, levels: level, evaluations: count });
        }
        prev = value;
    }
    bail!(NoConvergence, "quadrature did not converge after {} levels", opts.max_level)
}

/// `∫_a^b f` for `a < b`.
pub fn tanh_sinh<F>(ctx: &mut RealContext, a: &BigFloat, b: &BigFloat, opts: QuadratureOptions, mut f: F) -> Result<QuadratureResult>
where
    F: FnMut(&mut RealContext, &Node) -> Result<BigFloat>,
{
    if RealContext::cmp(a, b) != core::cmp::Ordering::Less {
        bail!(InvalidArgument, "empty interval");
    }
    let half = ctx.div_int(&ctx.sub(b, a), 2);
    let pi = ctx.pi();
    let half_pi = ctx.div_int(&pi, 2);
    let one = ctx.int(1);
    level_loop(ctx, opts, |ctx, t| {
        let sh = ctx.sinh(t);
        let s = ctx.mul(&half_pi, &sh);
        let abs_s = s.abs();
        let q = ctx.exp(&ctx.mul_int(&abs_s, -2));
        let one_q = ctx.add(&one, &q);
        let near = ctx.div(&ctx.mul_int(&ctx.mul(&half, &q), 2), &one_q);
        let far = ctx.div(&ctx.mul_int(&half, 2), &one_q);
        let (from_lower, to_upper) = if s.is_negative() { (near, far) } else { (far, near) };
        let x = ctx.add(a, &from_lower);
        // half · (π/2) cosh t · 4q / (1+q)^2
        let ch = ctx.cosh(t);
        let w = ctx.mul(&ctx.mul(&half, &half_pi), &ch);
        let w = ctx.div(&ctx.mul_int(&ctx.mul(&w, &q), 4), &ctx.mul(&one_q, &one_q));
        if w.is_zero() {
            return Ok(ctx.zero());
        }
        let node = Node { x, from_lower, to_upper };
        let v = f(ctx, &node)?;
        Ok(ctx.mul(&w, &v))
    })
}

/// `∫_0^∞ f`.
pub fn exp_sinh<F>(ctx: &mut RealContext, opts: QuadratureOptions, mut f: F) -> Result<QuadratureResult>
where
    F: FnMut(&mut RealContext, &BigFloat) -> Result<BigFloat>,
{
    let pi = ctx.pi();
    let half_pi = ctx.div_int(&pi, 2);
    level_loop(ctx, opts, |ctx, t| {
        let sh = ctx.sinh(t);
        let s = ctx.mul(&half_pi, &sh);
        let x = ctx.exp(&s);
        let ch = ctx.cosh(t);
        let w = ctx.mul(&ctx.mul(&x, &half_pi), &ch);
        let v = f(ctx, &x)?;
        Ok(ctx.mul(&w, &v))
    })
}

/// Nodes `(x, w)` of the `[0, ∞)` rule with step `2^{-level}`.
pub fn exp_sinh_nodes(ctx: &mut RealContext, level: u32) -> Vec<(BigFloat, BigFloat)> {
    let cap = t_cap(ctx);
    let pi = ctx.pi();
    let half_pi = ctx.div_int(&pi, 2);
    let h = ctx.pow2(-(level as i64));
    let steps = (cap * (1u64 << level) as f64) as i64;
    let mut out = Vec::with_capacity(2 * steps as usize + 1);
    for j in -steps..=steps {
        let t = ctx.mul(&ctx.int(j), &h);
        let sh = ctx.sinh(&t);
        let x = ctx.exp(&ctx.mul(&half_pi, &sh));
        let ch = ctx.cosh(&t);
        let w = ctx.mul(&ctx.mul(&ctx.mul(&x, &half_pi), &ch), &h);
        out.push((x, w));
    }
    out
}

/// `∫_0^∞ ∫_0^∞ g(x) h(y) k(x, y) dy dx` by the product rule, where `g` and
/// `h` carry the decay and `k` is cheap. Axis factors below the tolerance
/// relative to their maximum are dropped.
pub fn exp_sinh_2d<G, H, K>(ctx: &mut RealContext, opts: QuadratureOptions, mut g: G, mut h: H, mut k: K) -> Result<QuadratureResult>
where
    G: FnMut(&mut RealContext, &BigFloat) -> BigFloat,
    H: FnMut(&mut RealContext, &BigFloat) -> BigFloat,
    K: FnMut(&mut RealContext, &BigFloat, &BigFloat) -> BigFloat,
{
    let cutoff = opts.tolerance_log2 as f64 - 24.0;
    let mut prev: Option<BigFloat> = None;
    let mut count = 0usize;
    for level in 2..=opts.max_level.max(3) {
        let nodes = exp_sinh_nodes(ctx, level);
        let axis = |ctx: &mut RealContext, f: &mut dyn FnMut(&mut RealContext, &BigFloat) -> BigFloat| {
            let weighted: Vec<(BigFloat, BigFloat)> =
                nodes.iter().map(|(x, w)| {
                    let v = f(ctx, x);
                    (x.clone(), ctx.mul(w, &v))
                }).collect();
            let top = weighted.iter().map(|(_, v)| RealContext::log2_abs(v)).fold(f64::NEG_INFINITY, f64::max);
            weighted.into_iter().filter(|(_, v)| RealContext::log2_abs(v) > top + cutoff).collect::<Vec<_>>()
        };
        let xs = axis(ctx, &mut g);
        let ys = axis(ctx, &mut h);
        let mut rows = Vec::with_capacity(xs.len());
        for (x, wx) in &xs {
            let mut row = Vec::with_capacity(ys.len());
            for (y, wy) in &ys {
                let v = k(ctx, x, y);
                row.push(ctx.mul(wy, &v));
                count += 1;
            }
            rows.push(ctx.mul(wx, &ctx.sum(&row)));
        }
        let value = ctx.sum(&rows);
        if let Some(p) = prev {
            let diff = ctx.sub(&value, &p).abs();
            if level >= 3
                && (diff.is_zero()
                    || RealContext::log2_abs(&diff) <= RealContext::log2_abs(&value) + opts.tolerance_log2 as f64)
            {
                return Ok(QuadratureResult { value, error_estimate: diff, levels: level, evaluations: count });
            }
        }
        prev = Some(value);
    }
    bail!(NoConvergence, "product quadrature did not converge after {} levels", opts.max_level)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(ctx: &RealContext, a: &BigFloat, b: &BigFloat) -> f64 {
        RealContext::to_f64(&ctx.div(&ctx.sub(a, b), b)).abs()
    }

    #[test]
    fn polynomial_on_interval() {
        let mut ctx = RealContext::new(128).unwrap();
        let (a, b) = (ctx.int(1), ctx.int(3));
        let r = tanh_sinh(&mut ctx, &a, &b, QuadratureOptions::full(&RealContext::new(128).unwrap()), |ctx, n| {
            Ok(ctx.mul(&n.x, &n.x))
        })
        .unwrap();
        let exact = ctx.div_int(&ctx.int(26), 3);
        assert!(rel(&ctx, &r.value, &exact) < 1e-35);
    }

    #[test]
    fn endpoint_singularity_uses_distances() {
        // ∫_0^1 (1-x)^{-1/2} dx = 2
        let mut ctx = RealContext::new(192).unwrap();
        let (a, b) = (ctx.zero(), ctx.int(1));
        let opts = QuadratureOptions::full(&ctx);
        let r = tanh_sinh(&mut ctx, &a, &b, opts, |ctx, n| Ok(ctx.div(&ctx.int(1), &ctx.sqrt(&n.to_upper)))).unwrap();
        assert!(rel(&ctx, &r.value, &ctx.int(2)) < 1e-50);
    }

    #[test]
    fn half_line() {
        // ∫_0^∞ x^{-1/2} e^{-x} dx = √π
        let mut ctx = RealContext::new(128).unwrap();
        let opts = QuadratureOptions::full(&ctx);
        let r = exp_sinh(&mut ctx, opts, |ctx, x| {
            let e = ctx.exp(&ctx.mul_int(x, -1));
            Ok(ctx.div(&e, &ctx.sqrt(x)))
        })
        .unwrap();
        let pi = ctx.pi();
        let exact = ctx.sqrt(&pi);
        assert!(rel(&ctx, &r.value, &exact) < 1e-30, "{}", rel(&ctx, &r.value, &exact));
    }
}
