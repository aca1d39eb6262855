use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{HError, Result};
use crate::num::{fmt_rational, to_f64, tolerance, Ball, Rational};

/// An extended real: exact rational, rigorous ball, or a signed infinity.
#[derive(Clone, Debug)]
pub enum ExtReal {
    NegInf,
    Finite(Rational),
    Approx(Ball),
    PosInf,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Rational::zero())
    }

    pub fn finite(r: Rational) -> Self {
        ExtReal::Finite(r)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_) | ExtReal::Approx(_))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExtReal::Approx(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtReal::Finite(r) if r.is_zero())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::Finite(r) => to_f64(r),
            ExtReal::Approx(b) => b.mid,
        }
    }

    fn ball(&self) -> Option<Ball> {
        match self {
            ExtReal::Finite(r) => Some(Ball::from_rational(r)),
            ExtReal::Approx(b) => Some(*b),
            _ => None,
        }
    }

    /// Extended-real addition; `(+inf) + (-inf)` is undefined.
    pub fn try_add(&self, o: &ExtReal) -> Result<ExtReal> {
        use ExtReal::*;
        Ok(match (self, o) {
            (PosInf, NegInf) | (NegInf, PosInf) => {
                return Err(HError::UndefinedSum(String::from("measure")))
            }
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Finite(a), Finite(b)) => Finite(a + b),
            (a, b) => Approx(a.ball().unwrap().add(&b.ball().unwrap())),
        })
    }

    pub fn neg(&self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::Finite(r) => ExtReal::Finite(-r),
            ExtReal::Approx(b) => ExtReal::Approx(b.neg()),
        }
    }

    /// Multiplication by a rational, with `0 * inf = 0` as in measure theory.
    pub fn scale(&self, c: &Rational) -> ExtReal {
        if c.is_zero() {
            return ExtReal::zero();
        }
        match self {
            ExtReal::PosInf | ExtReal::NegInf => {
                if c.is_negative() {
                    self.neg()
                } else {
                    self.clone()
                }
            }
            ExtReal::Finite(r) => ExtReal::Finite(r * c),
            ExtReal::Approx(b) => ExtReal::Approx(b.scale(c)),
        }
    }

    pub fn abs(&self) -> ExtReal {
        match self {
            ExtReal::NegInf | ExtReal::PosInf => ExtReal::PosInf,
            ExtReal::Finite(r) => ExtReal::Finite(r.abs()),
            ExtReal::Approx(b) => ExtReal::Approx(b.abs()),
        }
    }

    /// Total comparison; interval values within the configured tolerance
    /// of each other compare equal.
    pub fn cmp_tol(&self, o: &ExtReal) -> Ordering {
        use ExtReal::*;
        match (self, o) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
            (a, b) => {
                let (x, y) = (a.ball().unwrap(), b.ball().unwrap());
                if x.close_to(&y, tolerance()) {
                    Ordering::Equal
                } else {
                    x.mid.partial_cmp(&y.mid).unwrap_or(Ordering::Equal)
                }
            }
        }
    }

    pub fn sign(&self) -> Ordering {
        self.cmp_tol(&ExtReal::zero())
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, o: &Self) -> bool {
        self.cmp_tol(o) == Ordering::Equal
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::Finite(r)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::Finite(r) => write!(f, "{}", fmt_rational(r)),
            ExtReal::Approx(b) => write!(f, "{:.15}", b.mid),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    #[test]
    fn infinities() {
        let p = ExtReal::PosInf;
        assert!(matches!(
            p.try_add(&ExtReal::finite(int(3))),
            Ok(ExtReal::PosInf)
        ));
        assert!(matches!(
            p.try_add(&ExtReal::NegInf),
            Err(HError::UndefinedSum(_))
        ));
        assert_eq!(
            ExtReal::NegInf.cmp_tol(&ExtReal::finite(int(-1000))),
            Ordering::Less
        );
        assert!(ExtReal::PosInf.scale(&int(0)).is_zero());
        assert!(matches!(ExtReal::PosInf.scale(&int(-2)), ExtReal::NegInf));
    }

    #[test]
    fn approx_compare_with_tolerance() {
        let a = ExtReal::Approx(Ball::new(0.5, 1e-15));
        assert_eq!(a, ExtReal::finite(rat(1, 2)));
        assert_eq!(a.cmp_tol(&ExtReal::finite(rat(1, 3))), Ordering::Greater);
    }

    #[test]
    fn default_tolerance_is_1e_minus_9() {
        assert_eq!(tolerance(), 1e-9);
    }
}
