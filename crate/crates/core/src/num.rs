//! Exact rationals, rigorous `f64` balls and the process-wide numeric settings.

use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub type Rational = BigRational;

static PRECISION_BITS: AtomicU32 = AtomicU32::new(256);
static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Cap on the interval precision used to separate transcendental dimensions.
pub fn precision_bits() -> u32 {
    PRECISION_BITS.load(Ordering::Relaxed)
}

pub fn set_precision_bits(bits: u32) {
    PRECISION_BITS.store(bits.max(64), Ordering::Relaxed);
}

/// Tolerance used when comparing interval-valued measures.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

pub fn set_tolerance(tol: f64) {
    TOLERANCE_BITS.store(tol.abs().to_bits(), Ordering::Relaxed);
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `p/q` or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.125` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(invalid("empty rational"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad numerator in '{s}'")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| invalid(format!("bad denominator in '{s}'")))?;
        if d.is_zero() {
            return Err(invalid(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return Err(invalid(format!("bad decimal '{s}'")));
        }
        let digits = format!("{ip}{fp}");
        let n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().unwrap()
        };
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| invalid(format!("bad rational '{s}'")))?;
    Ok(Rational::from_integer(n))
}

/// Smallest integer `>= r`.
pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// `r^k` for a possibly negative exponent.
pub fn pow_rational(r: &Rational, k: i64) -> Rational {
    if k >= 0 {
        num_traits::pow(r.clone(), k as usize)
    } else {
        num_traits::pow(r.recip(), (-k) as usize)
    }
}

/// Exact integer `k`-th root of a non-negative rational, if it exists.
pub fn exact_root(r: &Rational, k: u32) -> Option<Rational> {
    if r.is_negative() {
        if k % 2 == 1 {
            return exact_root(&-r, k).map(|x| -x);
        }
        return None;
    }
    let n = r.numer().nth_root(k);
    let d = r.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *r.numer()
        && num_traits::pow(d.clone(), k as usize) == *r.denom()
    {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// A closed interval `[mid - rad, mid + rad]` with rigorous outward padding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub mid: f64,
    pub rad: f64,
}

const ULP: f64 = f64::EPSILON;

impl Ball {
    pub fn new(mid: f64, rad: f64) -> Self {
        Ball {
            mid,
            rad: rad.abs(),
        }
    }

    pub fn from_bounds(lo: f64, hi: f64) -> Self {
        let mid = 0.5 * (lo + hi);
        let rad = (hi - mid).max(mid - lo) + mid.abs() * ULP;
        Ball { mid, rad }
    }

    pub fn from_rational(r: &Rational) -> Self {
        let mid = to_f64(r);
        Ball {
            mid,
            rad: mid.abs() * ULP,
        }
    }

    pub fn lo(&self) -> f64 {
        self.mid - self.rad
    }

    pub fn hi(&self) -> f64 {
        self.mid + self.rad
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let mid = self.mid + o.mid;
        Ball {
            mid,
            rad: self.rad + o.rad + mid.abs() * ULP,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: -self.mid,
            rad: self.rad,
        }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let mid = self.mid * o.mid;
        let rad =
            self.mid.abs() * o.rad + o.mid.abs() * self.rad + self.rad * o.rad + mid.abs() * ULP;
        Ball { mid, rad }
    }

    pub fn scale(&self, c: &Rational) -> Ball {
        self.mul(&Ball::from_rational(c))
    }

    pub fn abs(&self) -> Ball {
        if self.mid.abs() >= self.rad {
            Ball {
                mid: self.mid.abs(),
                rad: self.rad,
            }
        } else {
            Ball::from_bounds(0.0, self.mid.abs() + self.rad)
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.mid).abs() <= self.rad
    }

    /// True when the two balls are within `tol` of overlapping.
    pub fn close_to(&self, o: &Ball, tol: f64) -> bool {
        (self.mid - o.mid).abs() <= self.rad + o.rad + tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("2.5").unwrap(), rat(5, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(fmt_rational(&rat(4, 2)), "2");
        assert_eq!(fmt_rational(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&rat(9, 4), 2), Some(rat(3, 2)));
        assert_eq!(exact_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(exact_root(&int(2), 2), None);
    }

    #[test]
    fn ball_arithmetic_encloses() {
        let a = Ball::from_rational(&rat(1, 3));
        let b = a.add(&a).add(&a);
        assert!(b.contains(1.0));
        assert!(Ball::new(-0.1, 0.2).abs().contains(0.0));
    }
}
