//! Rigorous fixed-point enclosures of natural logarithms.
//!
//! A [`Fixed`] holds integers `lo <= hi` such that the true value lies in
//! `[lo / 2^bits, hi / 2^bits]`. Logs are computed as
//! `ln n = k ln 2 + 2 atanh((n - 2^k) / (n + 2^k))` with the atanh argument
//! at most 1/3, truncating every series term outward.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::num::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Fixed {
    pub fn exact_int(n: &BigInt, bits: u32) -> Fixed {
        let v = n << bits as usize;
        Fixed {
            lo: v.clone(),
            hi: v,
            bits,
        }
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Fixed {
        let num = r.numer() << bits as usize;
        Fixed {
            lo: div_floor(&num, r.denom()),
            hi: div_ceil(&num, r.denom()),
            bits,
        }
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, o.bits);
        Fixed {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Fixed {
        Fixed {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        self.add(&o.neg())
    }

    /// Multiplies by an exact rational, rounding outward.
    pub fn scale(&self, c: &Rational) -> Fixed {
        let (a, b) = (&self.lo * c.numer(), &self.hi * c.numer());
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Fixed {
            lo: div_floor(&a, c.denom()),
            hi: div_ceil(&b, c.denom()),
            bits: self.bits,
        }
    }

    /// Interval product.
    pub fn mul(&self, o: &Fixed) -> Fixed {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let min = cands.iter().min().unwrap();
        let max = cands.iter().max().unwrap();
        let one = BigInt::one() << self.bits as usize;
        Fixed {
            lo: div_floor(min, &one),
            hi: div_ceil(max, &one),
            bits: self.bits,
        }
    }

    /// Interval quotient; the divisor must be strictly positive.
    pub fn div_pos(&self, o: &Fixed) -> Fixed {
        assert!(
            o.lo.sign() == Sign::Plus,
            "divisor interval must be positive"
        );
        let shift = |x: &BigInt| x << self.bits as usize;
        let cands = [
            (shift(&self.lo), &o.lo),
            (shift(&self.lo), &o.hi),
            (shift(&self.hi), &o.lo),
            (shift(&self.hi), &o.hi),
        ];
        let lo = cands.iter().map(|(a, b)| div_floor(a, b)).min().unwrap();
        let hi = cands.iter().map(|(a, b)| div_ceil(a, b)).max().unwrap();
        Fixed {
            lo,
            hi,
            bits: self.bits,
        }
    }

    /// `Some(sign)` when the enclosure excludes zero or is exactly zero.
    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        if self.lo.is_positive() {
            Some(Greater)
        } else if self.hi.is_negative() {
            Some(Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Equal)
        } else {
            None
        }
    }

    pub fn lo_f64(&self) -> f64 {
        scaled_to_f64(&self.lo, self.bits, false)
    }

    pub fn hi_f64(&self) -> f64 {
        scaled_to_f64(&self.hi, self.bits, true)
    }
}

fn scaled_to_f64(v: &BigInt, bits: u32, up: bool) -> f64 {
    let x = v.to_f64().unwrap_or(f64::NAN) / 2f64.powi(bits as i32);
    let pad = x.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
    if up {
        x + pad
    } else {
        x - pad
    }
}

/// Enclosure of `atanh(u / v)` for `0 <= u/v <= 1/3`.
fn atanh(u: &BigInt, v: &BigInt, bits: u32) -> Fixed {
    let one = BigInt::one() << bits as usize;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    if u.is_zero() {
        return Fixed { lo, hi, bits };
    }
    let u2 = u * u;
    let v2 = v * v;
    let mut num = u.clone();
    let mut den = v.clone();
    let mut j: u64 = 0;
    loop {
        let k = BigInt::from(2 * j + 1);
        let d = &den * &k;
        let t_lo = div_floor(&(&num * &one), &d);
        // terms shrink geometrically; stop once a term is below one unit
        if t_lo.is_zero() {
            // remainder <= term / (1 - x^2) with x^2 <= 1/9
            let t_hi = div_ceil(&(&num * &one * &v2), &(&d * (&v2 - &u2)));
            hi += t_hi;
            break;
        }
        lo += &t_lo;
        hi += div_ceil(&(&num * &one), &d);
        num *= &u2;
        den *= &v2;
        j += 1;
    }
    Fixed { lo, hi, bits }
}

fn ln2(bits: u32) -> Fixed {
    let a = atanh(&BigInt::one(), &BigInt::from(3), bits);
    Fixed {
        lo: a.lo * 2,
        hi: a.hi * 2,
        bits,
    }
}

/// Enclosure of `ln n` for a positive integer `n`.
pub fn ln_int(n: &BigInt, bits: u32) -> Fixed {
    assert!(n.is_positive(), "ln of non-positive integer");
    let work = bits + 16;
    let k = n.bits() - 1;
    let pow = BigInt::one() << k as usize;
    let a = atanh(&(n - &pow), &(n + &pow), work);
    let l2 = ln2(work);
    let kk = BigInt::from(k);
    let lo = &l2.lo * &kk + &a.lo * 2;
    let hi = &l2.hi * &kk + &a.hi * 2;
    let shift = BigInt::one() << 16usize;
    Fixed {
        lo: div_floor(&lo, &shift),
        hi: div_ceil(&hi, &shift),
        bits,
    }
}

/// Enclosure of `ln r` for a positive rational.
pub fn ln_rational(r: &Rational, bits: u32) -> Fixed {
    ln_int(r.numer(), bits).sub(&ln_int(r.denom(), bits))
}

/// Enclosure of `ln p / ln q`.
pub fn log_ratio(p: u64, q: u64, bits: u32) -> Fixed {
    let lp = ln_int(&BigInt::from(p), bits);
    let lq = ln_int(&BigInt::from(q), bits);
    lp.div_pos(&lq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_encloses_f64_values() {
        for n in [2u64, 3, 5, 10, 1000, 123_456_789] {
            let f = ln_int(&BigInt::from(n), 80);
            let v = (n as f64).ln();
            assert!(f.lo_f64() <= v && v <= f.hi_f64(), "ln {n}");
            assert!(&f.hi - &f.lo < BigInt::from(64));
        }
    }

    #[test]
    fn log2_over_log3() {
        let f = log_ratio(2, 3, 128);
        let v = 2f64.ln() / 3f64.ln();
        assert!(f.lo_f64() <= v && v <= f.hi_f64());
        assert!(f.hi_f64() - f.lo_f64() < 1e-14);
    }

    #[test]
    fn ln_one_is_zero() {
        let f = ln_int(&BigInt::one(), 64);
        assert_eq!(f.sign(), Some(std::cmp::Ordering::Equal));
    }
}
