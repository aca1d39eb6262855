use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, HError, Result};
use crate::logs::{self, Fixed};
use crate::num::{
    fmt_rational, gcd_u64, int, parse_rational, precision_bits, rat, to_f64, Rational,
};

/// `log p / log q`, normalized so that `p` and `q` are not powers of a
/// common base and share no common exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogRatio {
    p: u64,
    q: u64,
}

impl LogRatio {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn to_f64(&self) -> f64 {
        (self.p as f64).ln() / (self.q as f64).ln()
    }
}

/// `n = base^exp` with the largest possible exponent.
fn perfect_power(n: u64) -> (u64, u32) {
    for e in (2..=63u32).rev() {
        let approx = (n as f64).powf(1.0 / e as f64).round() as u64;
        for r in approx.saturating_sub(1)..=approx + 1 {
            if r >= 2 && (r as u128).checked_pow(e) == Some(n as u128) {
                return (r, e);
            }
        }
    }
    (n, 1)
}

enum Normal {
    Rat(Rational),
    Log(LogRatio),
}

fn normalize(p: u64, q: u64) -> Result<Normal> {
    if q < 2 || p < 1 {
        return Err(invalid(format!("log({p})/log({q}) needs p >= 1, q >= 2")));
    }
    if p == 1 {
        return Ok(Normal::Rat(Rational::zero()));
    }
    let (u, a) = perfect_power(p);
    let (v, b) = perfect_power(q);
    if u == v {
        return Ok(Normal::Rat(rat(a as i64, b as i64)));
    }
    let g = gcd_u64(a as u64, b as u64) as u32;
    Ok(Normal::Log(LogRatio {
        p: u.pow(a / g),
        q: v.pow(b / g),
    }))
}

/// An exact dimension value: a rational plus a rational combination of
/// normalized log-ratios. The set algebra only ever produces `0`, `1`,
/// rationals and `log 2 / log 3`; the combination form closes the type under
/// the differences taken by `d^H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dimension {
    rational: Rational,
    logs: BTreeMap<LogRatio, Rational>,
}

impl Dimension {
    pub fn zero() -> Self {
        Dimension::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Dimension::from_rational(Rational::one())
    }

    pub fn two() -> Self {
        Dimension::from_rational(int(2))
    }

    pub fn from_rational(r: Rational) -> Self {
        Dimension {
            rational: r,
            logs: BTreeMap::new(),
        }
    }

    /// A rational dimension in `[0, 2]`.
    pub fn rat(r: Rational) -> Result<Self> {
        if r.is_negative() || r > int(2) {
            return Err(invalid(format!(
                "dimension {} outside [0,2]",
                fmt_rational(&r)
            )));
        }
        Ok(Dimension::from_rational(r))
    }

    /// `log p / log q`, normalized; must lie strictly between 0 and 1 unless
    /// it collapses to a rational.
    pub fn log_ratio(p: u64, q: u64) -> Result<Self> {
        match normalize(p, q)? {
            Normal::Rat(r) => Dimension::rat(r),
            Normal::Log(l) => {
                if l.p >= l.q {
                    return Err(invalid(format!("log({p})/log({q}) is not below 1")));
                }
                let mut logs = BTreeMap::new();
                logs.insert(l, Rational::one());
                Ok(Dimension {
                    rational: Rational::zero(),
                    logs,
                })
            }
        }
    }

    /// Dimension of the middle-thirds Cantor set.
    pub fn cantor() -> Self {
        Dimension::log_ratio(2, 3).expect("log2/log3 is a valid dimension")
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.logs.is_empty() {
            Some(&self.rational)
        } else {
            None
        }
    }

    pub fn as_log_ratio(&self) -> Option<LogRatio> {
        if self.rational.is_zero() && self.logs.len() == 1 {
            let (l, c) = self.logs.iter().next().unwrap();
            if c.is_one() {
                return Some(*l);
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.logs.is_empty() && self.rational.is_zero()
    }

    pub fn add(&self, o: &Dimension) -> Dimension {
        let mut out = self.clone();
        out.rational += &o.rational;
        for (l, c) in &o.logs {
            let e = out.logs.entry(*l).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.logs.remove(l);
            }
        }
        out
    }

    pub fn neg(&self) -> Dimension {
        Dimension {
            rational: -&self.rational,
            logs: self.logs.iter().map(|(l, c)| (*l, -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Dimension) -> Dimension {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Dimension {
        if c.is_zero() {
            return Dimension::zero();
        }
        Dimension {
            rational: &self.rational * c,
            logs: self.logs.iter().map(|(l, k)| (*l, k * c)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.logs
            .iter()
            .fold(to_f64(&self.rational), |acc, (l, c)| {
                acc + to_f64(c) * l.to_f64()
            })
    }

    /// Rigorous enclosure at the given fixed-point precision.
    pub fn enclosure(&self, bits: u32) -> Fixed {
        self.logs
            .iter()
            .fold(Fixed::from_rational(&self.rational, bits), |acc, (l, c)| {
                acc.add(&logs::log_ratio(l.p, l.q, bits).scale(c))
            })
    }

    /// Sign of the value. Single log terms are decided exactly by comparing
    /// integer powers; mixed terms by interval refinement up to the
    /// configured precision cap.
    pub fn sign(&self) -> Result<Ordering> {
        if self.logs.is_empty() {
            return Ok(self.rational.cmp(&Rational::zero()));
        }
        if self.logs.len() == 1 {
            let (l, c) = self.logs.iter().next().unwrap();
            if let Some(s) = exact_single_sign(&self.rational, c, l) {
                return Ok(s);
            }
        }
        let cap = precision_bits();
        let mut bits = 64u32.min(cap);
        loop {
            match self.enclosure(bits).sign() {
                Some(s) => return Ok(s),
                None if bits >= cap => break,
                None => bits = (bits * 2).min(cap),
            }
        }
        Err(HError::IncomparableDimensions {
            left: self.to_string(),
            right: String::from("0"),
            bits: cap,
        })
    }

    pub fn try_cmp(&self, o: &Dimension) -> Result<Ordering> {
        if self == o {
            return Ok(Ordering::Equal);
        }
        self.sub(o).sign().map_err(|e| match e {
            HError::IncomparableDimensions { bits, .. } => HError::IncomparableDimensions {
                left: self.to_string(),
                right: o.to_string(),
                bits,
            },
            e => e,
        })
    }

    pub fn try_max(&self, o: &Dimension) -> Result<Dimension> {
        Ok(if self.try_cmp(o)? == Ordering::Less {
            o.clone()
        } else {
            self.clone()
        })
    }

    pub fn abs(&self) -> Result<Dimension> {
        Ok(if self.sign()? == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        })
    }
}

/// Sign of `r + c * ln p / ln q` via `sign(A ln p + B ln q)` and integer
/// powers; `None` when the powers would be too large to form.
fn exact_single_sign(r: &Rational, c: &Rational, l: &LogRatio) -> Option<Ordering> {
    let a: BigInt = c.numer() * r.denom();
    let b: BigInt = r.numer() * c.denom();
    let sa = a.sign();
    let sb = b.sign();
    use num_bigint::Sign::*;
    let ord = |s| match s {
        Plus => Ordering::Greater,
        Minus => Ordering::Less,
        NoSign => Ordering::Equal,
    };
    if sa == NoSign {
        return Some(ord(sb));
    }
    if sb == NoSign || sa == sb {
        return Some(ord(sa));
    }
    let (ea, eb) = (a.abs().to_u64()?, b.abs().to_u64()?);
    let budget = 400_000f64;
    if ea as f64 * (l.p as f64).log2() > budget || eb as f64 * (l.q as f64).log2() > budget {
        return None;
    }
    let pa = num_traits::pow(BigInt::from(l.p), ea as usize);
    let qb = num_traits::pow(BigInt::from(l.q), eb as usize);
    // A > 0 > B: positive iff p^A > q^|B|; A < 0 < B: positive iff q^B > p^|A|
    Some(if sa == Plus { pa.cmp(&qb) } else { qb.cmp(&pa) })
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.rational.is_zero() || self.logs.is_empty() {
            write!(f, "{}", fmt_rational(&self.rational))?;
            first = false;
        }
        for (l, c) in &self.logs {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if !mag.is_one() {
                write!(f, "{}*", fmt_rational(&mag))?;
            }
            write!(f, "log({})/log({})", l.p, l.q)?;
            first = false;
        }
        Ok(())
    }
}

fn parse_log_term(t: &str) -> Result<Dimension> {
    let err = || invalid(format!("bad dimension term '{t}'"));
    let (coef, rest) = match t.split_once('*') {
        Some((c, r)) => (parse_rational(c)?, r),
        None => (Rational::one(), t),
    };
    let (num, den) = rest.split_once('/').ok_or_else(err)?;
    let inner = |s: &str| -> Result<u64> {
        s.trim()
            .strip_prefix("log(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(err)?
            .trim()
            .parse()
            .map_err(|_| err())
    };
    let (p, q) = (inner(num)?, inner(den)?);
    let base = match normalize(p, q)? {
        Normal::Rat(r) => Dimension::from_rational(r),
        Normal::Log(l) => {
            let mut logs = BTreeMap::new();
            logs.insert(l, Rational::one());
            Dimension {
                rational: Rational::zero(),
                logs,
            }
        }
    };
    Ok(base.scale(&coef))
}

impl std::str::FromStr for Dimension {
    type Err = HError;

    /// Parses the display form: `0`, `1/2`, `log(2)/log(3)`,
    /// `1 - log(2)/log(3)`, `3/2*log(2)/log(5)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(invalid("empty dimension"));
        }
        let mut out = Dimension::zero();
        let mut sign = Rational::one();
        let tokens = s.split_whitespace();
        let mut expect_term = true;
        for tok in tokens {
            if !expect_term {
                sign = match tok {
                    "+" => Rational::one(),
                    "-" => -Rational::one(),
                    _ => return Err(invalid(format!("expected + or - in dimension '{s}'"))),
                };
                expect_term = true;
                continue;
            }
            let (neg, body) = match tok.strip_prefix('-') {
                Some(b) if b.starts_with("log") || b.contains("*log") => (true, b),
                _ => (false, tok),
            };
            let term = if body.contains("log") {
                parse_log_term(body)?
            } else {
                Dimension::from_rational(parse_rational(body)?)
            };
            let term = if neg { term.neg() } else { term };
            out = out.add(&term.scale(&sign));
            expect_term = false;
        }
        if expect_term {
            return Err(invalid(format!("dangling operator in dimension '{s}'")));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dimension {
        s.parse().unwrap()
    }

    #[test]
    fn normalization_identifies_powers() {
        assert_eq!(
            Dimension::log_ratio(4, 9).unwrap(),
            Dimension::log_ratio(2, 3).unwrap()
        );
        assert_eq!(Dimension::log_ratio(8, 27).unwrap(), Dimension::cantor());
        assert_eq!(
            Dimension::log_ratio(4, 8).unwrap(),
            Dimension::from_rational(rat(2, 3))
        );
        assert_ne!(Dimension::log_ratio(8, 9).unwrap(), Dimension::cantor());
        assert!(Dimension::log_ratio(3, 2).is_err());
        assert_eq!(perfect_power(1024), (2, 10));
        assert_eq!(perfect_power(12), (12, 1));
    }

    #[test]
    fn exact_comparisons_against_rationals() {
        let c = Dimension::cantor();
        // log2/log3 = 0.6309...
        assert_eq!(
            c.try_cmp(&Dimension::from_rational(rat(63, 100))).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            c.try_cmp(&Dimension::from_rational(rat(631, 1000)))
                .unwrap(),
            Ordering::Less
        );
        assert_eq!(c.try_cmp(&Dimension::one()).unwrap(), Ordering::Less);
        assert_eq!(c.try_cmp(&Dimension::zero()).unwrap(), Ordering::Greater);
    }

    #[test]
    fn mixed_logs_by_intervals() {
        let a = Dimension::log_ratio(2, 3).unwrap();
        let b = Dimension::log_ratio(2, 5).unwrap();
        assert_eq!(a.try_cmp(&b).unwrap(), Ordering::Greater);
        let s = a.sub(&b).add(&Dimension::log_ratio(3, 7).unwrap());
        let v = s.to_f64();
        let e = s.enclosure(100);
        assert!(e.lo_f64() <= v && v <= e.hi_f64());
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "0",
            "1",
            "1/2",
            "log(2)/log(3)",
            "1 - log(2)/log(3)",
            "-log(2)/log(3)",
            "1/2 + 3/2*log(2)/log(5) - log(3)/log(7)",
        ] {
            assert_eq!(d(s).to_string(), s);
        }
        assert_eq!(d("log(4)/log(9)"), Dimension::cantor());
    }

    #[test]
    fn abs_of_difference() {
        let diff = Dimension::zero().sub(&Dimension::cantor());
        assert_eq!(diff.abs().unwrap(), Dimension::cantor());
        let diff = Dimension::one().sub(&Dimension::cantor());
        assert_eq!(diff.abs().unwrap().to_string(), "1 - log(2)/log(3)");
    }
}
