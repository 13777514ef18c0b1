//! Exact rationals and a few conversions used throughout.

use alloc::collections::btree_map::{BTreeMap, Entry};
use alloc::string::String;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `x^e` for integer `e`, including negative exponents.
pub fn powi(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub fn sign_pow(e: u64) -> Rational {
    if e % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(alloc::format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Sums products of rationals without reducing each term: numerators are
/// collected per unreduced denominator and reduced once in [`Self::finish`].
#[derive(Clone, Debug, Default)]
pub struct BucketSum {
    buckets: BTreeMap<BigInt, BigInt>,
}

impl BucketSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `w · ∏ factors`.
    pub fn add_product(&mut self, w: &BigInt, factors: &[&Rational]) {
        let mut num = w.clone();
        let mut den = BigInt::one();
        for f in factors {
            if f.is_zero() {
                return;
            }
            num *= f.numer();
            den *= f.denom();
        }
        match self.buckets.entry(den) {
            Entry::Vacant(v) => {
                v.insert(num);
            }
            Entry::Occupied(mut o) => *o.get_mut() += num,
        }
    }

    pub fn finish(self) -> Rational {
        self.buckets
            .into_iter()
            .filter(|(_, n)| !n.is_zero())
            .map(|(d, n)| Rational::new(n, d))
            .sum()
    }
}

pub fn render(x: &Rational) -> String {
    alloc::format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_render_roundtrip() {
        for s in ["0", "1/24", "-7/3", "4"] {
            assert_eq!(render(&parse(s).unwrap()), s);
        }
        assert_eq!(parse("2/4").unwrap(), ratio(1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn bucket_sum_matches_reduced_sum() {
        let xs = [ratio(1, 6), ratio(-3, 4), ratio(5, 12), int(2), ratio(7, 9)];
        let mut b = BucketSum::new();
        let mut direct = Rational::zero();
        for (i, x) in xs.iter().enumerate() {
            for y in &xs[i..] {
                b.add_product(&BigInt::from(i + 1), &[x, y]);
                direct += x * y * int(i as i64 + 1);
            }
        }
        assert_eq!(b.finish(), direct);
        assert_eq!(BucketSum::new().finish(), Rational::zero());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(powi(&ratio(2, 3), -2), ratio(9, 4));
        assert_eq!(powi(&int(5), 0), int(1));
    }
}
