//! Outward-rounded interval arithmetic over MPFR floats.
//!
//! Certification must not depend on double rounding, so every irrational
//! bound expression (square roots, logarithms) is evaluated on intervals
//! whose endpoints are rounded away from the enclosed set. Exact rationals
//! enter through [`Interval::from_q`]; all arithmetic keeps the enclosure
//! property, so a comparison such as `hi < 1/3` is a proof, not an estimate.

use crate::numbers::Q;
use crate::{Error, Result};
use rug::float::{Round, Special};
use rug::ops::AssignRound;
use rug::Float;

/// Minimal working precision in bits.
pub const MIN_PRECISION: u32 = 64;
/// Default starting precision for certificates.
pub const DEFAULT_PRECISION: u32 = 128;
/// Hard cap for precision escalation.
pub const MAX_PRECISION: u32 = 1024;

fn q_to_rug(x: &Q) -> rug::Rational {
    format!("{}/{}", x.numer(), x.denom())
        .parse()
        .expect("rational renders parseable")
}

/// A closed interval `[lo, hi]` with directed-rounded endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl Interval {
    fn assert_ordered(self) -> Self {
        debug_assert!(
            !(self.lo.is_nan() || self.hi.is_nan()) && self.lo <= self.hi,
            "interval endpoints out of order: [{:?}, {:?}]",
            self.lo,
            self.hi
        );
        self
    }

    pub fn precision(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    /// Tight outward enclosure of an exact rational.
    pub fn from_q(x: &Q, prec: u32) -> Self {
        let r = q_to_rug(x);
        let (lo, _) = Float::with_val_round(prec, &r, Round::Down);
        let (hi, _) = Float::with_val_round(prec, &r, Round::Up);
        Interval { lo, hi }.assert_ordered()
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        let lo = Float::with_val(prec, n);
        let hi = lo.clone();
        Interval { lo, hi }
    }

    /// The degenerate interval at `+infinity`, used for undefined bounds.
    pub fn infinite(prec: u32) -> Self {
        let inf = Float::with_val(prec, Special::Infinity);
        Interval { lo: inf.clone(), hi: inf }
    }

    pub fn is_infinite(&self) -> bool {
        self.hi.is_infinite()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.precision().max(o.precision());
        let mut lo = Float::new(p);
        lo.assign_round(&self.lo + &o.lo, Round::Down);
        let mut hi = Float::new(p);
        hi.assign_round(&self.hi + &o.hi, Round::Up);
        Interval { lo, hi }.assert_ordered()
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.precision().max(o.precision());
        let mut lo = Float::new(p);
        lo.assign_round(&self.lo - &o.hi, Round::Down);
        let mut hi = Float::new(p);
        hi.assign_round(&self.hi - &o.lo, Round::Up);
        Interval { lo, hi }.assert_ordered()
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
        .assert_ordered()
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.precision().max(o.precision());
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo = Float::with_val(p, Special::Infinity);
        let mut hi = Float::with_val(p, Special::NegInfinity);
        for (a, b) in pairs {
            let mut down = Float::new(p);
            down.assign_round(a * b, Round::Down);
            if down < lo {
                lo = down;
            }
            let mut up = Float::new(p);
            up.assign_round(a * b, Round::Up);
            if up > hi {
                hi = up;
            }
        }
        Interval { lo, hi }.assert_ordered()
    }

    /// Division; the denominator interval must exclude zero.
    pub fn div(&self, o: &Interval) -> Result<Interval> {
        if o.lo.is_sign_negative() != o.hi.is_sign_negative()
            || o.lo.is_zero()
            || o.hi.is_zero()
        {
            return Err(Error::Domain(
                "interval division by an interval containing zero".into(),
            ));
        }
        let p = self.precision().max(o.precision());
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo = Float::with_val(p, Special::Infinity);
        let mut hi = Float::with_val(p, Special::NegInfinity);
        for (a, b) in pairs {
            let mut down = Float::new(p);
            down.assign_round(a / b, Round::Down);
            if down < lo {
                lo = down;
            }
            let mut up = Float::new(p);
            up.assign_round(a / b, Round::Up);
            if up > hi {
                hi = up;
            }
        }
        Ok(Interval { lo, hi }.assert_ordered())
    }

    /// Square root; requires a nonnegative lower endpoint.
    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo.is_sign_negative() && !self.lo.is_zero() {
            return Err(Error::Domain(
                "interval square root of a possibly negative value".into(),
            ));
        }
        let p = self.precision();
        let mut lo = Float::new(p);
        lo.assign_round(self.lo.sqrt_ref(), Round::Down);
        let mut hi = Float::new(p);
        hi.assign_round(self.hi.sqrt_ref(), Round::Up);
        Ok(Interval { lo, hi }.assert_ordered())
    }

    /// Natural logarithm; requires a strictly positive lower endpoint.
    pub fn ln(&self) -> Result<Interval> {
        if self.lo <= 0 {
            return Err(Error::Domain(
                "interval logarithm of a possibly nonpositive value".into(),
            ));
        }
        let p = self.precision();
        let mut lo = Float::new(p);
        lo.assign_round(self.lo.ln_ref(), Round::Down);
        let mut hi = Float::new(p);
        hi.assign_round(self.hi.ln_ref(), Round::Up);
        Ok(Interval { lo, hi }.assert_ordered())
    }

    /// Integer power by repeated interval multiplication.
    pub fn powi(&self, e: u32) -> Interval {
        let mut acc = Interval::from_i64(1, self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_q(&self, x: &Q) -> Interval {
        self.mul(&Interval::from_q(x, self.precision()))
    }

    /// Pointwise maximum; encloses the maximum of the represented sets.
    pub fn max(&self, o: &Interval) -> Interval {
        let lo = if self.lo >= o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi >= o.hi { self.hi.clone() } else { o.hi.clone() };
        Interval { lo, hi }.assert_ordered()
    }

    /// Certified `sup(self) < x`.
    pub fn lt_q(&self, x: &Q) -> bool {
        self.hi < q_to_rug(x)
    }

    /// Certified `inf(self) >= x`.
    pub fn ge_q(&self, x: &Q) -> bool {
        self.lo >= q_to_rug(x)
    }

    pub fn contains_q(&self, x: &Q) -> bool {
        let r = q_to_rug(x);
        self.lo <= r && self.hi >= r
    }

    /// Certified `sup(self) < inf(other)`.
    pub fn definitely_lt(&self, o: &Interval) -> bool {
        self.hi < o.lo
    }

    pub fn width_f64(&self) -> f64 {
        let mut w = Float::new(self.precision());
        w.assign_round(&self.hi - &self.lo, Round::Up);
        w.to_f64()
    }

    pub fn mid_f64(&self) -> f64 {
        if self.is_infinite() {
            return f64::INFINITY;
        }
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    /// Upper endpoint rounded up to `f64`.
    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    /// Lower endpoint rounded down to `f64`.
    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    /// Decimal endpoint strings rounded outward to `digits` significant
    /// figures.
    pub fn to_decimal_strings(&self, digits: usize) -> (String, String) {
        (
            float_to_decimal(&self.lo, digits, Round::Down),
            float_to_decimal(&self.hi, digits, Round::Up),
        )
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (lo, hi) = self.to_decimal_strings(12);
        write!(f, "[{lo}, {hi}]")
    }
}

/// Renders a float in decimal scientific-free form with directed rounding.
pub fn float_to_decimal(x: &Float, digits: usize, round: Round) -> String {
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if x.is_zero() {
        return "0".into();
    }
    let (sign, mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits), round);
    let sign = if sign { "-" } else { "" };
    // exp is the position of the decimal point relative to mantissa start
    let exp = exp.expect("finite nonzero float has an exponent");
    format!("{sign}0.{mantissa}e{exp}")
}

/// Enclosure of `sqrt(3)`.
pub fn sqrt3(prec: u32) -> Interval {
    Interval::from_i64(3, prec).sqrt().expect("3 is positive")
}

/// Enclosure of `ln(2)`.
pub fn ln2(prec: u32) -> Interval {
    Interval::from_i64(2, prec).ln().expect("2 is positive")
}

/// Enclosure of `ln(3)`.
pub fn ln3(prec: u32) -> Interval {
    Interval::from_i64(3, prec).ln().expect("3 is positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{q, q_ratio};

    #[test]
    fn rational_enclosure_is_outward() {
        let third = q_ratio(1, 3);
        let iv = Interval::from_q(&third, 64);
        assert!(iv.lo() < iv.hi());
        assert!(iv.contains_q(&third));
        // representable rationals give point intervals
        let half = q_ratio(1, 2);
        let iv = Interval::from_q(&half, 64);
        assert_eq!(iv.lo(), iv.hi());
    }

    #[test]
    fn arithmetic_contains_exact_results() {
        let a = q_ratio(1, 3);
        let b = q_ratio(-2, 7);
        let ia = Interval::from_q(&a, 96);
        let ib = Interval::from_q(&b, 96);
        assert!(ia.add(&ib).contains_q(&(&a + &b)));
        assert!(ia.sub(&ib).contains_q(&(&a - &b)));
        assert!(ia.mul(&ib).contains_q(&(&a * &b)));
        assert!(ia.div(&ib).unwrap().contains_q(&(&a / &b)));
        assert!(ia.powi(5).contains_q(&crate::numbers::q_pow(&a, 5)));
    }

    #[test]
    fn division_by_zero_straddling_interval_fails() {
        let a = Interval::from_q(&q(1), 64);
        let z = Interval::from_q(&q(-1), 64).add(&Interval::from_q(&q(1), 64));
        assert!(a.div(&z).is_err());
    }

    #[test]
    fn sqrt3_squared_contains_three() {
        let r = sqrt3(128);
        assert!(r.mul(&r).contains_q(&q(3)));
        assert!(r.width_f64() < 1e-30);
    }

    #[test]
    fn sqrt_of_negative_rejected() {
        assert!(Interval::from_q(&q(-1), 64).sqrt().is_err());
    }

    #[test]
    fn ln_values() {
        let l2 = ln2(128);
        assert!(l2.lt_q(&q_ratio(6932, 10000)));
        assert!(l2.ge_q(&q_ratio(6931, 10000)));
        assert!(Interval::from_q(&q(0), 64).ln().is_err());
    }

    #[test]
    fn comparisons_certified() {
        let third = Interval::from_q(&q_ratio(1, 3), 128);
        assert!(third.lt_q(&q_ratio(34, 100)));
        assert!(!third.lt_q(&q_ratio(1, 3)));
        assert!(third.ge_q(&q_ratio(33, 100)));
        let smaller = Interval::from_q(&q_ratio(1, 4), 128);
        assert!(smaller.definitely_lt(&third));
        assert!(!third.definitely_lt(&third));
    }

    #[test]
    fn max_and_infinite() {
        let a = Interval::from_q(&q(1), 64);
        let b = Interval::from_q(&q(2), 64);
        assert_eq!(a.max(&b), b.clone());
        let inf = Interval::infinite(64);
        assert!(inf.is_infinite());
        assert!(!inf.lt_q(&q(1_000_000)));
        assert!(a.max(&inf).is_infinite());
    }

    #[test]
    fn decimal_strings_bracket_value() {
        let third = Interval::from_q(&q_ratio(1, 3), 128);
        let (lo, hi) = third.to_decimal_strings(10);
        assert!(lo.starts_with("0.3333333333"));
        assert!(hi.starts_with("0.3333333334"));
    }

    #[test]
    fn precision_grows_through_ops() {
        let a = Interval::from_q(&q_ratio(1, 3), 64);
        let b = Interval::from_q(&q_ratio(1, 3), 256);
        assert_eq!(a.mul(&b).precision(), 256);
    }
}
