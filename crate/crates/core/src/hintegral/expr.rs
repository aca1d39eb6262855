use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{invalid, not_rep, HError, Result};
use crate::hvalue::{CoefficientSeries, ExtReal};
use crate::num::{fmt_rational, Rational};
use crate::poly::Poly;
use crate::setalg::MAX_ENUMERATION;

/// Values `offset + sum_j c_{j,n}` attached to the terms `n` of a countable
/// sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesExpr {
    pub offset: Rational,
    pub parts: Vec<CoefficientSeries>,
}

/// How the signs of a sequence of values behave.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignPattern {
    /// Every value is zero.
    Zero,
    /// Every value is zero or has this sign.
    Constant(Ordering),
    /// From index `from` on, every value is nonzero with this sign.
    Eventually { from: u64, sign: Ordering },
}

impl SeriesExpr {
    pub fn new(offset: Rational, parts: Vec<CoefficientSeries>) -> Result<Self> {
        for p in &parts {
            if let CoefficientSeries::PSeries { p, .. } = p {
                if !p.is_integer() || !p.is_positive() {
                    return Err(invalid(
                        "function values from a p-series need a positive integer exponent",
                    ));
                }
            }
        }
        Ok(SeriesExpr { offset, parts }.merged())
    }

    pub fn single(c: CoefficientSeries) -> Result<Self> {
        SeriesExpr::new(Rational::zero(), vec![c])
    }

    pub fn value(&self, n: u64) -> Rational {
        self.parts.iter().fold(self.offset.clone(), |acc, p| {
            acc + p.term(n).expect("integer exponents give rational terms")
        })
    }

    pub fn scale(&self, k: &Rational) -> SeriesExpr {
        SeriesExpr {
            offset: &self.offset * k,
            parts: self.parts.iter().map(|p| p.scale(k)).collect(),
        }
        .merged()
    }

    pub fn add(&self, o: &SeriesExpr) -> SeriesExpr {
        let mut parts = self.parts.clone();
        parts.extend(o.parts.iter().cloned());
        SeriesExpr {
            offset: &self.offset + &o.offset,
            parts,
        }
        .merged()
    }

    pub fn add_const(&self, c: &Rational) -> SeriesExpr {
        SeriesExpr {
            offset: &self.offset + c,
            parts: self.parts.clone(),
        }
    }

    /// Collects like parts and drops vanishing ones.
    fn merged(self) -> SeriesExpr {
        let mut list: Vec<Rational> = vec![];
        let mut geo: Vec<(Rational, Rational)> = vec![];
        let mut pser: Vec<(Rational, Rational)> = vec![];
        for p in self.parts {
            match p {
                CoefficientSeries::FiniteList(v) => {
                    if list.len() < v.len() {
                        list.resize(v.len(), Rational::zero());
                    }
                    for (i, x) in v.into_iter().enumerate() {
                        list[i] += x;
                    }
                }
                CoefficientSeries::Geometric { a, r } => {
                    match geo.iter_mut().find(|(_, s)| *s == r) {
                        Some(e) => e.0 += a,
                        None => geo.push((a, r)),
                    }
                }
                CoefficientSeries::PSeries { c, p } => match pser.iter_mut().find(|(_, q)| *q == p)
                {
                    Some(e) => e.0 += c,
                    None => pser.push((c, p)),
                },
            }
        }
        while list.last().is_some_and(Zero::is_zero) {
            list.pop();
        }
        let mut parts = vec![];
        if !list.is_empty() {
            parts.push(CoefficientSeries::FiniteList(list));
        }
        parts.extend(
            geo.into_iter()
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, r)| CoefficientSeries::Geometric { a, r }),
        );
        parts.extend(
            pser.into_iter()
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, p)| CoefficientSeries::PSeries { c, p }),
        );
        SeriesExpr {
            offset: self.offset,
            parts,
        }
    }

    fn only_finite_parts(&self) -> bool {
        self.parts
            .iter()
            .all(|p| matches!(p, CoefficientSeries::FiniteList(_)))
    }

    /// Last index at which a finite-list part can be nonzero.
    pub fn finite_len(&self) -> u64 {
        self.parts
            .iter()
            .map(|p| match p {
                CoefficientSeries::FiniteList(v) => v.len() as u64,
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Upper bound for `|sum_j c_{j,m}|` over all `m >= n`.
    fn tail_bound(&self, n: u64) -> Rational {
        self.parts.iter().fold(Rational::zero(), |acc, p| {
            acc + match p {
                CoefficientSeries::FiniteList(v) => v
                    .iter()
                    .skip(n as usize - 1)
                    .map(|x| x.abs())
                    .max()
                    .unwrap_or_else(Rational::zero),
                CoefficientSeries::Geometric { .. } | CoefficientSeries::PSeries { .. } => {
                    p.term(n).unwrap().abs()
                }
            }
        })
    }

    /// Sign behaviour over the indices `n >= start`.
    pub fn sign_pattern(&self, start: u64) -> Result<SignPattern> {
        let osign = self.offset.cmp(&Rational::zero());
        if self.parts.is_empty() {
            return Ok(if osign == Ordering::Equal {
                SignPattern::Zero
            } else {
                SignPattern::Constant(osign)
            });
        }
        let signs: Vec<Option<Ordering>> = self.parts.iter().map(|p| p.constant_sign()).collect();
        if let Some(Some(s)) = signs.first() {
            let s = *s;
            if signs.iter().all(|x| *x == Some(s)) && (osign == Ordering::Equal || osign == s) {
                return Ok(SignPattern::Constant(s));
            }
        }
        if osign == Ordering::Equal {
            if self.only_finite_parts() {
                return Ok(SignPattern::Eventually {
                    from: self.finite_len().max(start) + 1,
                    sign: Ordering::Equal,
                });
            }
            return Err(not_rep(
                "series values with mixed signs and no constant offset",
            ));
        }
        let bound = self.offset.abs();
        let mut n = start;
        while self.tail_bound(n) >= bound {
            n += 1;
            if n - start > MAX_ENUMERATION {
                return Err(not_rep(
                    "series values settle on a sign too late to enumerate",
                ));
            }
        }
        Ok(SignPattern::Eventually {
            from: n,
            sign: osign,
        })
    }

    /// `sum_{n >= start} value(n)` over the nonzero values.
    pub fn sum_from(&self, start: u64) -> Result<ExtReal> {
        if !self.offset.is_zero() {
            return Ok(if self.offset.is_positive() {
                ExtReal::PosInf
            } else {
                ExtReal::NegInf
            });
        }
        let (mut pos, mut neg, mut acc) = (false, false, ExtReal::zero());
        for p in &self.parts {
            match p.sum_from(start)? {
                ExtReal::PosInf => pos = true,
                ExtReal::NegInf => neg = true,
                v => acc = acc.try_add(&v)?,
            }
        }
        match (pos, neg) {
            (true, true) => Err(HError::UndefinedSum(String::from("0"))),
            (true, false) => Ok(ExtReal::PosInf),
            (false, true) => Ok(ExtReal::NegInf),
            _ => Ok(acc),
        }
    }
}

impl fmt::Display for SeriesExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = vec![];
        if !self.offset.is_zero() || self.parts.is_empty() {
            parts.push(fmt_rational(&self.offset));
        }
        for p in &self.parts {
            parts.push(match p {
                CoefficientSeries::FiniteList(v) => {
                    format!(
                        "[{}]_n",
                        v.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")
                    )
                }
                CoefficientSeries::Geometric { a, r } => {
                    format!("{}*({})^(n-1)", fmt_rational(a), fmt_rational(r))
                }
                CoefficientSeries::PSeries { c, p } => {
                    format!(
                        "{}/n^{}",
                        fmt_rational(c),
                        p.to_integer().to_i64().unwrap_or_default()
                    )
                }
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The expression a function takes on one atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Rational),
    /// Interval atoms only.
    Poly(Poly),
    /// Countable-sequence atoms only; indexed by the sequence position.
    Series(SeriesExpr),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(Rational::zero())
    }

    /// Constant polynomials collapse to constants.
    pub fn simplify(self) -> Expr {
        match self {
            Expr::Poly(p) => match p.as_constant() {
                Some(c) => Expr::Const(c),
                None => Expr::Poly(p),
            },
            Expr::Series(s) if s.parts.is_empty() => Expr::Const(s.offset),
            e => e,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Expr::Const(c) => c.is_zero(),
            Expr::Poly(p) => p.is_zero(),
            Expr::Series(s) => s.offset.is_zero() && s.parts.is_empty(),
        }
    }

    pub fn as_poly(&self) -> Option<Poly> {
        match self {
            Expr::Const(c) => Some(Poly::constant(c.clone())),
            Expr::Poly(p) => Some(p.clone()),
            Expr::Series(_) => None,
        }
    }

    fn as_series(&self) -> Option<SeriesExpr> {
        match self {
            Expr::Const(c) => Some(SeriesExpr {
                offset: c.clone(),
                parts: vec![],
            }),
            Expr::Series(s) => Some(s.clone()),
            Expr::Poly(_) => None,
        }
    }

    /// Value at `x`; `index` is the sequence position for series values.
    pub fn eval(&self, x: &Rational, index: Option<u64>) -> Rational {
        match self {
            Expr::Const(c) => c.clone(),
            Expr::Poly(p) => p.eval(x),
            Expr::Series(s) => s.value(index.expect("series values need a sequence index")),
        }
    }

    pub fn scale(&self, k: &Rational) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(c * k),
            Expr::Poly(p) => Expr::Poly(p.scale(k)),
            Expr::Series(s) => Expr::Series(s.scale(k)),
        }
        .simplify()
    }

    pub fn add(&self, o: &Expr) -> Result<Expr> {
        Ok(match (self, o) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
            (Expr::Series(_), _) | (_, Expr::Series(_)) => {
                match (self.as_series(), o.as_series()) {
                    (Some(a), Some(b)) => Expr::Series(a.add(&b)),
                    _ => return Err(invalid("polynomial and series values on the same atom")),
                }
            }
            _ => Expr::Poly(self.as_poly().unwrap().add(&o.as_poly().unwrap())),
        }
        .simplify())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", fmt_rational(c)),
            Expr::Poly(p) => write!(f, "{p}"),
            Expr::Series(s) => write!(f, "{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn geo(a: Rational, r: Rational) -> CoefficientSeries {
        CoefficientSeries::geometric(a, r).unwrap()
    }

    #[test]
    fn merge_like_parts() {
        let s = SeriesExpr::new(
            int(0),
            vec![geo(int(1), rat(1, 2)), geo(int(-1), rat(1, 2))],
        )
        .unwrap();
        assert!(s.parts.is_empty());
        assert_eq!(s.sign_pattern(1).unwrap(), SignPattern::Zero);
    }

    #[test]
    fn sign_patterns() {
        let s = SeriesExpr::single(geo(rat(1, 2), rat(1, 2))).unwrap();
        assert_eq!(
            s.sign_pattern(1).unwrap(),
            SignPattern::Constant(Ordering::Greater)
        );
        let t = s.add_const(&rat(-1, 10));
        // 2^-n - 1/10 is positive for n <= 3
        assert_eq!(
            t.sign_pattern(1).unwrap(),
            SignPattern::Eventually {
                from: 4,
                sign: Ordering::Less
            }
        );
        let alt = SeriesExpr::single(geo(int(1), rat(-1, 2))).unwrap();
        assert!(alt.sign_pattern(1).is_err());
    }

    #[test]
    fn sums() {
        let s = SeriesExpr::single(geo(rat(1, 2), rat(1, 2))).unwrap();
        assert_eq!(s.sum_from(1).unwrap(), ExtReal::Finite(int(1)));
        assert_eq!(s.sum_from(2).unwrap(), ExtReal::Finite(rat(1, 2)));
        let h = SeriesExpr::single(CoefficientSeries::pseries(int(1), int(1)).unwrap()).unwrap();
        assert!(matches!(h.sum_from(1).unwrap(), ExtReal::PosInf));
        assert!(
            SeriesExpr::single(CoefficientSeries::pseries(int(1), rat(3, 2)).unwrap()).is_err()
        );
    }
}
