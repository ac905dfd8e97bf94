//! Exact integers, reduced rationals, Bernoulli numbers and the zeta values
//! `ζ(1−2k)` that appear in every mass formula.
//!
//! Bernoulli numbers use the convention `B_2 = 1/6`, `B_4 = −1/30`, so that
//! `ζ(1−2k) = −B_{2k}/(2k)` gives `ζ(−1) = −1/12` and `ζ(−3) = 1/120`. Only even
//! indices are exposed; the sign of `B_1` never matters here.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;

/// Arbitrary-precision fraction, always kept reduced with a positive denominator.
pub type Rational = BigRational;

/// Growable Akiyama–Tanigawa table. `row` is the working row after step
/// `values.len() - 1`; extending the table continues from there.
struct BernoulliCache {
    row: Vec<Rational>,
    values: Vec<Rational>,
}

impl BernoulliCache {
    fn extend_to(&mut self, m: usize) {
        while self.values.len() <= m {
            let step = self.values.len();
            self.row.push(Rational::new(BigInt::one(), BigInt::from(step + 1)));
            for j in (1..=step).rev() {
                let diff = &self.row[j - 1] - &self.row[j];
                self.row[j - 1] = diff * BigInt::from(j);
            }
            self.values.push(self.row[0].clone());
        }
    }
}

fn cache() -> &'static Mutex<BernoulliCache> {
    static CACHE: OnceLock<Mutex<BernoulliCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(BernoulliCache {
            row: Vec::new(),
            values: Vec::new(),
        })
    })
}

/// The Bernoulli number `B_m` for even `m ≥ 2`.
pub fn bernoulli(m: u32) -> Result<Rational> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::bad(format!(
            "bernoulli index must be even and >= 2, got {m}"
        )));
    }
    let mut table = cache().lock().unwrap_or_else(|e| e.into_inner());
    table.extend_to(m as usize);
    Ok(table.values[m as usize].clone())
}

/// `ζ(1−2k) = −B_{2k}/(2k)` for `k ≥ 1`.
pub fn zeta_neg_odd(k: u32) -> Result<Rational> {
    if k == 0 {
        return Err(Error::bad("zeta_neg_odd requires k >= 1"));
    }
    let b = bernoulli(2 * k)?;
    Ok(-b / BigInt::from(2 * k))
}

/// Returns the numerator of `x` when its reduced denominator is 1.
pub fn rational_to_integer(x: &Rational) -> Result<Integer> {
    if x.denom().is_one() {
        Ok(x.numer().clone())
    } else {
        Err(Error::NonIntegral(x.clone()))
    }
}

pub fn int(v: impl Into<Integer>) -> Integer {
    v.into()
}

pub fn ratio(num: impl Into<Integer>, den: impl Into<Integer>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn pow_u(base: u64, exp: u32) -> Integer {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Renders `x` as `num/den` even when the denominator is 1.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses either `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::bad(format!("not a decimal integer: {t:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(parse_int(n)?, den))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Splits `q = p^e` with `p` prime, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

/// Sign of `(−1)^k` as a rational.
pub(crate) fn sign_pow(k: u64) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}
