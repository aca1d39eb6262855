use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::hvalue::{Dimension, ExtReal, HPair};
use crate::logs::{ln_rational, log_ratio};
use crate::num::{ceil_int, floor_int, fmt_rational, int, rat, Ball, Rational};

/// Largest number of explicit points a set operation may enumerate.
pub const MAX_ENUMERATION: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SeqKind {
    /// `a + b / n`
    Harmonic,
    /// `a + b q^n`, `0 < q < 1`
    Geometric { q: Rational },
}

/// A catalog sequence restricted to indices `n >= start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeqSpec {
    pub kind: SeqKind,
    pub a: Rational,
    pub b: Rational,
    pub start: u64,
}

impl SeqSpec {
    pub fn harmonic(a: Rational, b: Rational) -> Result<Self> {
        if b.is_zero() {
            return Err(invalid("harmonic sequence needs b != 0"));
        }
        Ok(SeqSpec {
            kind: SeqKind::Harmonic,
            a,
            b,
            start: 1,
        })
    }

    pub fn geometric(a: Rational, b: Rational, q: Rational) -> Result<Self> {
        if b.is_zero() || !q.is_positive() || q >= Rational::one() {
            return Err(invalid("geometric sequence needs b != 0 and 0 < q < 1"));
        }
        Ok(SeqSpec {
            kind: SeqKind::Geometric { q },
            a,
            b,
            start: 1,
        })
    }

    pub fn from(mut self, start: u64) -> Self {
        self.start = start.max(1);
        self
    }

    /// `g(n)` with term `a + b g(n)`; positive and strictly decreasing.
    fn g(&self, n: u64) -> Rational {
        match &self.kind {
            SeqKind::Harmonic => rat(1, n as i64),
            SeqKind::Geometric { q } => crate::num::pow_rational(q, n as i64),
        }
    }

    pub fn term(&self, n: u64) -> Rational {
        &self.a + &self.b * self.g(n)
    }

    pub fn first(&self) -> Rational {
        self.term(self.start)
    }

    /// The accumulation point.
    pub fn limit(&self) -> &Rational {
        &self.a
    }

    /// Terms lie above the accumulation point.
    pub fn from_above(&self) -> bool {
        self.b.is_positive()
    }

    /// The global index of `x`, if `x` is a term with index `>= start`.
    pub fn index_of(&self, x: &Rational) -> Option<u64> {
        let v = (x - &self.a) / &self.b;
        if !v.is_positive() {
            return None;
        }
        match &self.kind {
            SeqKind::Harmonic => {
                let n = v.recip();
                if !n.is_integer() {
                    return None;
                }
                n.to_integer().to_u64().filter(|&n| n >= self.start)
            }
            SeqKind::Geometric { q } => {
                let (mut n, mut g) = (self.start, self.g(self.start));
                while g > v {
                    g *= q;
                    n += 1;
                }
                (g == v).then_some(n)
            }
        }
    }

    /// Indices `n >= start` with `g(n)` in `[lo, hi]`; an upper index of
    /// `None` means every later index qualifies.
    fn g_range(&self, lo: &Rational, hi: &Rational) -> Option<(u64, Option<u64>)> {
        if !hi.is_positive() {
            return None;
        }
        let n_min = match &self.kind {
            SeqKind::Harmonic => {
                let c = ceil_int(&hi.recip()).to_u64().unwrap_or(u64::MAX);
                c.max(self.start)
            }
            SeqKind::Geometric { q } => {
                let (mut n, mut g) = (self.start, self.g(self.start));
                while &g > hi {
                    g *= q;
                    n += 1;
                }
                n
            }
        };
        if !lo.is_positive() {
            return Some((n_min, None));
        }
        let n_max = match &self.kind {
            SeqKind::Harmonic => floor_int(&lo.recip()).to_u64().unwrap_or(u64::MAX),
            SeqKind::Geometric { q } => {
                if &self.g(n_min) < lo {
                    return None;
                }
                let (mut n, mut g) = (n_min, self.g(n_min + 1));
                while &g >= lo {
                    g *= q;
                    n += 1;
                }
                n
            }
        };
        (n_max >= n_min).then_some((n_min, Some(n_max)))
    }

    /// Indices of the terms inside the closed interval `[lo, hi]`.
    pub fn index_range(&self, lo: &Rational, hi: &Rational) -> Option<(u64, Option<u64>)> {
        let (x, y) = ((lo - &self.a) / &self.b, (hi - &self.a) / &self.b);
        if self.b.is_positive() {
            self.g_range(&x, &y)
        } else {
            self.g_range(&y, &x)
        }
    }

    /// Closed hull of the terms together with their limit.
    pub fn hull(&self) -> (Rational, Rational) {
        let f = self.first();
        if f < self.a {
            (f, self.a.clone())
        } else {
            (self.a.clone(), f)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Points(BTreeSet<Rational>),
    Seq(SeqSpec),
    /// Closed interval `[lo, hi]`, `lo < hi`.
    Interval {
        lo: Rational,
        hi: Rational,
    },
    /// `t + s C` with `s > 0`.
    Cantor {
        t: Rational,
        s: Rational,
    },
}

/// A basic set with known dimension and measure, minus finitely many points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub deletions: BTreeSet<Rational>,
}

impl Atom {
    fn bare(kind: AtomKind) -> Atom {
        Atom {
            kind,
            deletions: BTreeSet::new(),
        }
    }

    pub fn points<I: IntoIterator<Item = Rational>>(pts: I) -> Atom {
        Atom::bare(AtomKind::Points(pts.into_iter().collect()))
    }

    pub fn point(x: Rational) -> Atom {
        Atom::points([x])
    }

    pub fn seq(spec: SeqSpec) -> Atom {
        Atom::bare(AtomKind::Seq(spec))
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Atom> {
        if lo >= hi {
            return Err(invalid(format!(
                "interval [{}, {}] needs lo < hi",
                fmt_rational(&lo),
                fmt_rational(&hi)
            )));
        }
        Ok(Atom::bare(AtomKind::Interval { lo, hi }))
    }

    /// `t + s C`; a negative scale is reflected since `C = 1 - C`.
    pub fn cantor(t: Rational, s: Rational) -> Result<Atom> {
        if s.is_zero() {
            return Err(invalid("cantor scale must be nonzero"));
        }
        Ok(if s.is_negative() {
            Atom::bare(AtomKind::Cantor { t: &t + &s, s: -s })
        } else {
            Atom::bare(AtomKind::Cantor { t, s })
        })
    }

    /// Removes the given points; `None` when nothing is left.
    pub fn without<'a, I: IntoIterator<Item = &'a Rational>>(&self, pts: I) -> Option<Atom> {
        let mut out = self.clone();
        match &mut out.kind {
            AtomKind::Points(p) => {
                for x in pts {
                    p.remove(x);
                }
                if p.is_empty() {
                    return None;
                }
            }
            _ => {
                for x in pts {
                    if self.core_contains(x) {
                        out.deletions.insert(x.clone());
                    }
                }
            }
        }
        Some(out)
    }

    pub fn core(&self) -> Atom {
        Atom::bare(self.kind.clone())
    }

    pub fn is_points(&self) -> bool {
        matches!(self.kind, AtomKind::Points(_))
    }

    /// Membership ignoring deletions.
    pub fn core_contains(&self, x: &Rational) -> bool {
        match &self.kind {
            AtomKind::Points(p) => p.contains(x),
            AtomKind::Seq(s) => s.index_of(x).is_some(),
            AtomKind::Interval { lo, hi } => lo <= x && x <= hi,
            AtomKind::Cantor { t, s } => cantor_contains(&((x - t) / s)),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        !self.deletions.contains(x) && self.core_contains(x)
    }

    /// Closed bounding interval.
    pub fn hull(&self) -> (Rational, Rational) {
        match &self.kind {
            AtomKind::Points(p) => (
                p.iter().next().cloned().unwrap_or_else(Rational::zero),
                p.iter().next_back().cloned().unwrap_or_else(Rational::zero),
            ),
            AtomKind::Seq(s) => s.hull(),
            AtomKind::Interval { lo, hi } => (lo.clone(), hi.clone()),
            AtomKind::Cantor { t, s } => (t.clone(), t + s),
        }
    }

    pub fn dimension(&self) -> Dimension {
        match &self.kind {
            AtomKind::Points(_) | AtomKind::Seq(_) => Dimension::zero(),
            AtomKind::Interval { .. } => Dimension::one(),
            AtomKind::Cantor { .. } => Dimension::cantor(),
        }
    }

    /// `mu^d` at the atom's own dimension.
    pub fn measure(&self) -> ExtReal {
        match &self.kind {
            AtomKind::Points(p) => ExtReal::Finite(int(p.len() as i64)),
            AtomKind::Seq(_) => ExtReal::PosInf,
            AtomKind::Interval { lo, hi } => ExtReal::Finite(hi - lo),
            AtomKind::Cantor { s, .. } => cantor_measure(s),
        }
    }

    pub fn hmeasure(&self) -> HPair {
        HPair {
            d: self.dimension(),
            m: self.measure(),
        }
    }

    /// Enumerates the points of a finite atom.
    pub fn finite_points(&self) -> Option<Vec<Rational>> {
        match &self.kind {
            AtomKind::Points(p) => Some(p.iter().cloned().collect()),
            _ => None,
        }
    }

    /// The image under `x -> c - x`.
    pub fn reflect(&self, c: &Rational) -> Atom {
        let kind = match &self.kind {
            AtomKind::Points(p) => AtomKind::Points(p.iter().map(|x| c - x).collect()),
            AtomKind::Seq(s) => AtomKind::Seq(SeqSpec {
                kind: s.kind.clone(),
                a: c - &s.a,
                b: -s.b.clone(),
                start: s.start,
            }),
            AtomKind::Interval { lo, hi } => AtomKind::Interval {
                lo: c - hi,
                hi: c - lo,
            },
            AtomKind::Cantor { t, s } => AtomKind::Cantor {
                t: c - t - s,
                s: s.clone(),
            },
        };
        Atom {
            kind,
            deletions: self.deletions.iter().map(|x| c - x).collect(),
        }
    }

    pub(crate) fn kind_rank(&self) -> u8 {
        match self.kind {
            AtomKind::Points(_) => 0,
            AtomKind::Seq(_) => 1,
            AtomKind::Interval { .. } => 2,
            AtomKind::Cantor { .. } => 3,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = fmt_rational;
        match &self.kind {
            AtomKind::Points(p) => {
                let v: Vec<String> = p.iter().map(r).collect();
                write!(f, "{{{}}}", v.join(", "))?
            }
            AtomKind::Seq(s) => match &s.kind {
                SeqKind::Harmonic => {
                    write!(f, "{{{} + {}/n : n >= {}}}", r(&s.a), r(&s.b), s.start)?
                }
                SeqKind::Geometric { q } => write!(
                    f,
                    "{{{} + {}*({})^n : n >= {}}}",
                    r(&s.a),
                    r(&s.b),
                    r(q),
                    s.start
                )?,
            },
            AtomKind::Interval { lo, hi } => write!(f, "[{}, {}]", r(lo), r(hi))?,
            AtomKind::Cantor { t, s } => write!(f, "{} + {}*C", r(t), r(s))?,
        }
        if !self.deletions.is_empty() {
            let v: Vec<String> = self.deletions.iter().map(r).collect();
            write!(f, " - {{{}}}", v.join(", "))?;
        }
        Ok(())
    }
}

/// Whether `y` lies in the middle-thirds Cantor set. Rational points have
/// eventually periodic ternary expansions, so the orbit under the two
/// expanding branches either leaves through a middle third or cycles.
pub fn cantor_contains(y: &Rational) -> bool {
    let (one, third, two_thirds) = (Rational::one(), rat(1, 3), rat(2, 3));
    let mut y = y.clone();
    let mut seen = HashSet::new();
    loop {
        if y.is_negative() || y > one {
            return false;
        }
        if y.is_zero() || y == one {
            return true;
        }
        if !seen.insert(y.clone()) {
            return true;
        }
        y = if y <= third {
            y * int(3)
        } else if y >= two_thirds {
            y * int(3) - int(2)
        } else {
            return false;
        };
    }
}

/// `s^(log 2 / log 3)`: exact when `s` is a power of 3, otherwise a
/// rigorous ball from fixed-point logarithms.
pub fn cantor_measure(s: &Rational) -> ExtReal {
    if let Some(k) = power_of_three(s) {
        return ExtReal::Finite(crate::num::pow_rational(&int(2), k));
    }
    let bits = 96;
    let e = ln_rational(s, bits).mul(&log_ratio(2, 3, bits));
    let (lo, hi) = (e.lo_f64().exp(), e.hi_f64().exp());
    let pad = 4.0 * f64::EPSILON;
    ExtReal::Approx(Ball::from_bounds(lo * (1.0 - pad), hi * (1.0 + pad)))
}

fn power_of_three(s: &Rational) -> Option<i64> {
    let three = BigInt::from(3);
    let log3 = |n: &BigInt| -> Option<i64> {
        let mut n = n.clone();
        let mut k = 0;
        while n > BigInt::one() {
            let (q, r) = n.div_rem(&three);
            if !r.is_zero() {
                return None;
            }
            n = q;
            k += 1;
        }
        Some(k)
    };
    if s.numer().is_one() {
        log3(s.denom()).map(|k| -k)
    } else if s.denom().is_one() {
        log3(s.numer())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_membership() {
        assert!(cantor_contains(&rat(1, 4)));
        assert!(!cantor_contains(&rat(1, 2)));
        assert!(cantor_contains(&rat(3, 4)));
        assert!(cantor_contains(&rat(1, 3)));
        assert!(cantor_contains(&rat(2, 3)));
        assert!(!cantor_contains(&rat(5, 9)));
        assert!(cantor_contains(&rat(1, 10)));
        assert!(!cantor_contains(&rat(-1, 4)));
    }

    #[test]
    fn reflected_cantor() {
        let c = Atom::cantor(int(1), int(-1)).unwrap();
        assert_eq!(c, Atom::cantor(int(0), int(1)).unwrap());
    }

    #[test]
    fn cantor_measures() {
        assert_eq!(cantor_measure(&int(1)), ExtReal::Finite(int(1)));
        assert_eq!(cantor_measure(&rat(1, 9)), ExtReal::Finite(rat(1, 4)));
        let m = cantor_measure(&rat(1, 2));
        let v = 0.5f64.powf(2f64.ln() / 3f64.ln());
        match m {
            ExtReal::Approx(b) => assert!(b.contains(v) && b.rad < 1e-14),
            _ => panic!("expected ball"),
        }
    }

    #[test]
    fn harmonic_indices() {
        let s = SeqSpec::harmonic(int(0), int(1)).unwrap();
        assert_eq!(s.index_of(&rat(1, 7)), Some(7));
        assert_eq!(s.index_of(&rat(2, 7)), None);
        assert_eq!(s.index_range(&rat(1, 10), &rat(1, 3)), Some((3, Some(10))));
        assert_eq!(s.index_range(&rat(-1, 1), &rat(1, 3)), Some((3, None)));
        assert_eq!(s.index_range(&int(2), &int(3)), None);
        let neg = SeqSpec::harmonic(int(1), int(-1)).unwrap();
        assert_eq!(neg.index_range(&rat(1, 2), &rat(3, 4)), Some((2, Some(4))));
    }

    #[test]
    fn geometric_indices() {
        let s = SeqSpec::geometric(int(0), int(1), rat(1, 2)).unwrap();
        assert_eq!(s.index_of(&rat(1, 16)), Some(4));
        assert_eq!(s.index_of(&rat(3, 16)), None);
        assert_eq!(s.index_range(&rat(1, 20), &rat(1, 3)), Some((2, Some(4))));
        assert_eq!(s.index_range(&int(0), &rat(1, 3)), Some((2, None)));
        assert_eq!(s.index_range(&rat(3, 5), &rat(4, 5)), None);
    }
}
