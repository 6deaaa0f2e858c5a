//! Arbitrary-precision integer and rational helpers.
//!
//! Double factorials overflow 64-bit integers well below the degrees this
//! crate handles (`d <= 30` means ground sets up to `m = 29`), so every count
//! and coefficient is carried as a [`BigInt`] or [`BigRational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn q(n: i64) -> Q {
    Q::from_integer(int(n))
}

pub fn q_ratio(num: i64, den: i64) -> Q {
    Q::new(int(num), int(den))
}

pub fn q_from_int(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

/// Double factorial with the conventions `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    if n <= 0 {
        return BigInt::one();
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Raising factorial `x (x+1) ... (x+r-1)`; the empty product is 1.
pub fn rising(x: &Q, r: u32) -> Q {
    let mut acc = Q::one();
    for i in 0..r {
        acc *= x + q(i64::from(i));
    }
    acc
}

/// `base^e` for a signed integer exponent; `base` must be nonzero when `e < 0`.
pub fn q_pow(base: &Q, e: i64) -> Q {
    if e >= 0 {
        base.pow(e as u32 as i32)
    } else {
        assert!(!base.is_zero(), "negative power of zero");
        base.pow(e as i32)
    }
}

pub fn pow2(e: i64) -> Q {
    q_pow(&q(2), e)
}

pub fn pow3(e: i64) -> Q {
    q_pow(&q(3), e)
}

/// Renders a rational in lowest terms as `p` or `p/q`.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` with optional sign; inverse of [`format_q`].
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

/// Approximate conversion, for diagnostics only.
pub fn q_to_f64(x: &Q) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(-1, 0), int(0));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(binomial(0, 0), int(1));
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial(-1), int(1));
        assert_eq!(double_factorial(0), int(1));
        assert_eq!(double_factorial(5), int(15));
        assert_eq!(double_factorial(6), int(48));
        assert_eq!(double_factorial(7), int(105));
    }

    #[test]
    fn rising_factorial() {
        // (3/2)^{3 rising} = 3/2 * 5/2 * 7/2 = 105/8
        assert_eq!(rising(&q_ratio(3, 2), 3), q_ratio(105, 8));
        assert_eq!(rising(&q(7), 0), q(1));
    }

    #[test]
    fn q_format_roundtrip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let v = parse_q(s).unwrap();
            assert_eq!(format_q(&v), s);
        }
        assert_eq!(parse_q("6/8").map(|v| format_q(&v)).unwrap(), "3/4");
        assert!(parse_q("1/0").is_none());
        assert!(parse_q("abc").is_none());
    }

    #[test]
    fn q_to_f64_sanity() {
        assert!((q_to_f64(&q_ratio(1, 3)) - 1.0 / 3.0).abs() < 1e-12);
        assert!((q_to_f64(&q(-7)) + 7.0).abs() < 1e-12);
        assert_eq!(q_to_f64(&q(0)), 0.0);
    }
}
