//! Finitely presented sequences and series of pairs.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, HError, Result};
use crate::hvalue::{hpair_sum, Dimension, ExtReal, HPair};
use crate::num::{fmt_rational, int, pow_rational, to_f64, Ball, Rational};

/// A catalog sequence of rational coefficients `c_1, c_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientSeries {
    /// `c_n` = the n-th entry, zero past the end.
    FiniteList(Vec<Rational>),
    /// `c_n = a * r^(n-1)`, `|r| < 1`.
    Geometric { a: Rational, r: Rational },
    /// `c_n = c / n^p`, `p > 0`; summable only for `p > 1`.
    PSeries { c: Rational, p: Rational },
}

impl CoefficientSeries {
    pub fn geometric(a: Rational, r: Rational) -> Result<Self> {
        if r.abs() >= Rational::one() {
            return Err(invalid(format!(
                "geometric ratio {} must satisfy |r| < 1",
                fmt_rational(&r)
            )));
        }
        Ok(CoefficientSeries::Geometric { a, r })
    }

    pub fn pseries(c: Rational, p: Rational) -> Result<Self> {
        if !p.is_positive() {
            return Err(invalid(format!(
                "p-series exponent {} must be positive",
                fmt_rational(&p)
            )));
        }
        Ok(CoefficientSeries::PSeries { c, p })
    }

    fn integer_p(p: &Rational) -> Option<u32> {
        if p.is_integer() {
            p.to_integer().to_u32()
        } else {
            None
        }
    }

    /// Exact `c_n` (n >= 1); `None` for irrational p-series terms.
    pub fn term(&self, n: u64) -> Option<Rational> {
        assert!(n >= 1, "coefficient index starts at 1");
        match self {
            CoefficientSeries::FiniteList(v) => Some(
                v.get(n as usize - 1)
                    .cloned()
                    .unwrap_or_else(Rational::zero),
            ),
            CoefficientSeries::Geometric { a, r } => Some(a * pow_rational(r, n as i64 - 1)),
            CoefficientSeries::PSeries { c, p } => {
                let k = Self::integer_p(p)?;
                Some(c / Rational::from_integer(num_traits::pow(BigInt::from(n), k as usize)))
            }
        }
    }

    pub fn term_ext(&self, n: u64) -> ExtReal {
        match self.term(n) {
            Some(r) => ExtReal::Finite(r),
            None => match self {
                CoefficientSeries::PSeries { c, p } => {
                    let v = to_f64(c) * (n as f64).powf(-to_f64(p));
                    ExtReal::Approx(Ball::new(v, v.abs() * 8.0 * f64::EPSILON))
                }
                _ => unreachable!("only p-series terms are irrational"),
            },
        }
    }

    pub fn is_absolutely_convergent(&self) -> bool {
        match self {
            CoefficientSeries::FiniteList(_) | CoefficientSeries::Geometric { .. } => true,
            CoefficientSeries::PSeries { c, p } => c.is_zero() || *p > Rational::one(),
        }
    }

    /// Whether `c_n -> 0`.
    pub fn vanishes(&self) -> bool {
        true
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            CoefficientSeries::FiniteList(v) => v.iter().all(Zero::is_zero),
            CoefficientSeries::Geometric { a, .. } => a.is_zero(),
            CoefficientSeries::PSeries { c, .. } => c.is_zero(),
        }
    }

    /// Common sign of all nonzero terms, if there is one.
    pub fn constant_sign(&self) -> Option<Ordering> {
        let sign = |x: &Rational| x.cmp(&Rational::zero());
        match self {
            CoefficientSeries::FiniteList(v) => {
                let pos = v.iter().any(Signed::is_positive);
                let neg = v.iter().any(Signed::is_negative);
                match (pos, neg) {
                    (true, true) => None,
                    (true, false) => Some(Ordering::Greater),
                    (false, true) => Some(Ordering::Less),
                    _ => Some(Ordering::Equal),
                }
            }
            CoefficientSeries::Geometric { a, r } => {
                if a.is_zero() || !r.is_negative() {
                    Some(sign(a))
                } else {
                    None
                }
            }
            CoefficientSeries::PSeries { c, .. } => Some(sign(c)),
        }
    }

    pub fn scale(&self, k: &Rational) -> CoefficientSeries {
        match self {
            CoefficientSeries::FiniteList(v) => {
                CoefficientSeries::FiniteList(v.iter().map(|x| x * k).collect())
            }
            CoefficientSeries::Geometric { a, r } => CoefficientSeries::Geometric {
                a: a * k,
                r: r.clone(),
            },
            CoefficientSeries::PSeries { c, p } => CoefficientSeries::PSeries {
                c: c * k,
                p: p.clone(),
            },
        }
    }

    /// `sum_{n >= start} c_n` (start >= 1). Divergent series of constant
    /// sign sum to a signed infinity; other divergent series are undefined.
    pub fn sum_from(&self, start: u64) -> Result<ExtReal> {
        let start = start.max(1);
        match self {
            CoefficientSeries::FiniteList(v) => Ok(ExtReal::Finite(
                v.iter()
                    .skip(start as usize - 1)
                    .fold(Rational::zero(), |acc, x| acc + x),
            )),
            CoefficientSeries::Geometric { a, r } => Ok(ExtReal::Finite(
                a * pow_rational(r, start as i64 - 1) / (Rational::one() - r),
            )),
            CoefficientSeries::PSeries { c, p } => {
                if c.is_zero() {
                    return Ok(ExtReal::zero());
                }
                if *p <= Rational::one() {
                    return Ok(if c.is_positive() {
                        ExtReal::PosInf
                    } else {
                        ExtReal::NegInf
                    });
                }
                Ok(ExtReal::Approx(
                    zeta_tail(to_f64(p), start, Self::integer_p(p)).scale(c),
                ))
            }
        }
    }

    pub fn sum(&self) -> Result<ExtReal> {
        self.sum_from(1)
    }

    /// Exact partial sum `c_1 + ... + c_n` where every term is rational.
    pub fn partial_sum(&self, n: u64) -> ExtReal {
        (1..=n).fold(ExtReal::zero(), |acc, k| {
            acc.try_add(&self.term_ext(k)).expect("finite terms")
        })
    }
}

/// Enclosure of `sum_{n >= start} n^{-p}` for `p > 1`: explicit partial sum
/// up to `N - 1`, then the trapezoid bound for convex summands on the rest,
/// `I + f(N)/2 <= tail <= I + f(N)/2 + p (N-1)^{-p-1} / 12`.
fn zeta_tail(p: f64, start: u64, integer_p: Option<u32>) -> Ball {
    let n_cut =
        ((p / 12.0 / 1e-15).powf(1.0 / (p + 1.0)).ceil() as u64).clamp(start + 16, start + 200_000);
    let head = match integer_p {
        Some(k) => exact_power_sum(k, start, n_cut),
        None => {
            let mut s = 0.0f64;
            for n in (start..n_cut).rev() {
                s += (n as f64).powf(-p);
            }
            let err = s * ((n_cut - start) as f64 + 2.0) * f64::EPSILON;
            Ball::from_bounds(s - err, s + err)
        }
    };
    let m = n_cut as f64;
    let base = m.powf(1.0 - p) / (p - 1.0) + m.powf(-p) / 2.0;
    let extra = p * (m - 1.0).powf(-p - 1.0) / 12.0;
    let pad = base * 8.0 * f64::EPSILON;
    head.add(&Ball::from_bounds(base - pad, base + extra + pad))
}

/// Rigorous `sum_{start <= n < end} n^{-k}` via fixed point.
fn exact_power_sum(k: u32, start: u64, end: u64) -> Ball {
    let bits = 80usize;
    let one = BigInt::one() << bits;
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    for n in start..end {
        let d = num_traits::pow(BigInt::from(n), k as usize);
        let q = &one / &d;
        hi += &q + 1;
        lo += q;
    }
    let scale = 2f64.powi(-(bits as i32));
    let (l, h) = (lo.to_f64().unwrap() * scale, hi.to_f64().unwrap() * scale);
    Ball::from_bounds(l - l * 4.0 * f64::EPSILON, h + h * 4.0 * f64::EPSILON)
}

/// Tail rules for sequences beyond their explicit prefix. Every rule is
/// evaluated at the global (1-based) index.
#[derive(Clone, Debug, PartialEq)]
pub enum TailRule {
    Constant(HPair),
    /// `(d, limit + c_n)` with `c_n -> 0`.
    VanishingMeasure {
        d: Dimension,
        limit: Rational,
        coefficients: CoefficientSeries,
    },
    /// `(limit - gap_n, base + c_n)` with positive gaps decreasing to zero.
    DimensionClimb {
        limit: Dimension,
        gaps: CoefficientSeries,
        base: Rational,
        coefficients: CoefficientSeries,
    },
    /// `(d, start + step * n)`, unbounded.
    Divergent {
        d: Dimension,
        start: Rational,
        step: Rational,
    },
    /// Partial sums of the round-robin pair series built from one
    /// coefficient series per dimension.
    PartialSums(Vec<(Dimension, CoefficientSeries)>),
    /// Component `(n - 1) mod k` supplies term `n`.
    Interleaved(Vec<TailRule>),
}

impl TailRule {
    fn validate(&self, first: u64) -> Result<()> {
        match self {
            TailRule::DimensionClimb { limit, gaps, .. } => {
                let ok = match gaps {
                    CoefficientSeries::Geometric { a, r } => a.is_positive() && r.is_positive(),
                    CoefficientSeries::PSeries { c, .. } => c.is_positive(),
                    CoefficientSeries::FiniteList(_) => false,
                };
                if !ok {
                    return Err(invalid(
                        "dimension climb needs positive, strictly decreasing gaps",
                    ));
                }
                let g = gaps
                    .term(first)
                    .ok_or_else(|| invalid("dimension climb gaps must be rational"))?;
                if limit.sub(&Dimension::from_rational(g)).sign()? == Ordering::Less {
                    return Err(invalid("dimension climb starts below zero"));
                }
                Ok(())
            }
            TailRule::Divergent { step, .. } if step.is_zero() => {
                Err(invalid("divergent rule needs a nonzero step"))
            }
            TailRule::PartialSums(terms) => {
                for (i, (d, _)) in terms.iter().enumerate() {
                    if terms[..i].iter().any(|(e, _)| e == d) {
                        return Err(invalid(format!("dimension {d} listed twice")));
                    }
                }
                Ok(())
            }
            TailRule::Interleaved(parts) => {
                if parts.is_empty() {
                    return Err(invalid("empty interleaving"));
                }
                parts.iter().try_for_each(|p| p.validate(first))
            }
            _ => Ok(()),
        }
    }

    fn term(&self, n: u64) -> Result<HPair> {
        Ok(match self {
            TailRule::Constant(p) => p.clone(),
            TailRule::VanishingMeasure {
                d,
                limit,
                coefficients,
            } => HPair {
                d: d.clone(),
                m: ExtReal::Finite(limit.clone()).try_add(&coefficients.term_ext(n))?,
            },
            TailRule::DimensionClimb {
                limit,
                gaps,
                base,
                coefficients,
            } => {
                let g = gaps
                    .term(n)
                    .ok_or_else(|| invalid("irrational dimension gap"))?;
                HPair {
                    d: limit.sub(&Dimension::from_rational(g)),
                    m: ExtReal::Finite(base.clone()).try_add(&coefficients.term_ext(n))?,
                }
            }
            TailRule::Divergent { d, start, step } => {
                HPair::new(d.clone(), start + step * int(n as i64))
            }
            TailRule::PartialSums(terms) => partial_sum_at(terms, n)?,
            TailRule::Interleaved(parts) => {
                parts[((n - 1) % parts.len() as u64) as usize].term(n)?
            }
        })
    }

    fn liminf(&self) -> Result<HPair> {
        match self {
            TailRule::Interleaved(parts) => {
                let v: Vec<HPair> = parts.iter().map(TailRule::liminf).collect::<Result<_>>()?;
                crate::hvalue::hpair_inf(&v)
            }
            _ => self.limit(),
        }
    }

    fn limsup(&self) -> Result<HPair> {
        match self {
            TailRule::Interleaved(parts) => {
                let v: Vec<HPair> = parts.iter().map(TailRule::limsup).collect::<Result<_>>()?;
                crate::hvalue::hpair_sup(&v)
            }
            _ => self.limit(),
        }
    }

    fn limit(&self) -> Result<HPair> {
        Ok(match self {
            TailRule::Constant(p) => p.clone(),
            TailRule::VanishingMeasure { d, limit, .. } => HPair::new(d.clone(), limit.clone()),
            // climbing dimensions converge to (d, 0) in [0,1] x [0,+inf]
            TailRule::DimensionClimb { limit, .. } => HPair::new(limit.clone(), Rational::zero()),
            TailRule::Divergent { d, step, .. } => HPair {
                d: d.clone(),
                m: if step.is_positive() {
                    ExtReal::PosInf
                } else {
                    ExtReal::NegInf
                },
            },
            TailRule::PartialSums(terms) => {
                let (dims, coeffs): (Vec<_>, Vec<_>) = terms.iter().cloned().unzip();
                hpair_series(&dims, &coeffs)?
            }
            TailRule::Interleaved(_) => {
                let (lo, hi) = (self.liminf()?, self.limsup()?);
                if lo.try_cmp(&hi)? != Ordering::Equal {
                    return Err(HError::DoesNotConverge {
                        liminf: lo.to_string(),
                        limsup: hi.to_string(),
                    });
                }
                lo
            }
        })
    }
}

/// Partial sum of the first `n` terms of the round-robin pair series: term
/// `i` is `(d_j, c_{j,k})` with `j = (i-1) mod len`, `k = (i-1) div len + 1`.
fn partial_sum_at(terms: &[(Dimension, CoefficientSeries)], n: u64) -> Result<HPair> {
    let k = terms.len() as u64;
    if k == 0 {
        return Ok(HPair::zero());
    }
    let mut acc = HPair::zero();
    for i in 1..=n {
        let (d, c) = &terms[((i - 1) % k) as usize];
        acc = acc.add(&HPair {
            d: d.clone(),
            m: c.term_ext((i - 1) / k + 1),
        })?;
    }
    Ok(acc)
}

/// A sequence of pairs: explicit prefix, then a tail rule.
#[derive(Clone, Debug, PartialEq)]
pub struct HSeq {
    pub prefix: Vec<HPair>,
    pub tail: TailRule,
}

impl HSeq {
    pub fn new(prefix: Vec<HPair>, tail: TailRule) -> Result<Self> {
        tail.validate(prefix.len() as u64 + 1)?;
        Ok(HSeq { prefix, tail })
    }

    /// Term `n`, 1-based.
    pub fn term(&self, n: u64) -> Result<HPair> {
        if n == 0 {
            return Err(invalid("sequence index starts at 1"));
        }
        match self.prefix.get(n as usize - 1) {
            Some(p) => Ok(p.clone()),
            None => self.tail.term(n),
        }
    }

    pub fn limit(&self) -> Result<HPair> {
        self.tail.limit()
    }

    pub fn liminf(&self) -> Result<HPair> {
        self.tail.liminf()
    }

    pub fn limsup(&self) -> Result<HPair> {
        self.tail.limsup()
    }
}

pub fn hseq_limit(s: &HSeq) -> Result<HPair> {
    s.limit()
}

pub fn hseq_liminf(s: &HSeq) -> Result<HPair> {
    s.liminf()
}

pub fn hseq_limsup(s: &HSeq) -> Result<HPair> {
    s.limsup()
}

/// `sum_i (d_i, m_i)` where each distinct dimension carries a coefficient
/// series: the result is `(sup d, sum of the series at the sup)`.
pub fn hpair_series(dims: &[Dimension], coeffs: &[CoefficientSeries]) -> Result<HPair> {
    if dims.len() != coeffs.len() {
        return Err(invalid("one coefficient series per dimension"));
    }
    if dims.is_empty() {
        return Ok(HPair::zero());
    }
    let mut top = 0usize;
    for i in 1..dims.len() {
        match dims[i].try_cmp(&dims[top])? {
            Ordering::Greater => top = i,
            Ordering::Equal => return Err(invalid(format!("dimension {} listed twice", dims[i]))),
            Ordering::Less => {}
        }
    }
    let c = &coeffs[top];
    let m = if c.is_absolutely_convergent() || c.constant_sign().is_some() {
        c.sum()?
    } else {
        return Err(HError::UndefinedSum(dims[top].to_string()));
    };
    Ok(HPair {
        d: dims[top].clone(),
        m,
    })
}

/// Series whose dimensions `limit - gap_n` climb strictly: no term sits at
/// the supremum, so the sum is `(limit, 0)`.
pub fn hpair_series_climbing(limit: &Dimension, gaps: &CoefficientSeries) -> Result<HPair> {
    TailRule::DimensionClimb {
        limit: limit.clone(),
        gaps: gaps.clone(),
        base: Rational::zero(),
        coefficients: CoefficientSeries::FiniteList(vec![]),
    }
    .validate(1)?;
    Ok(HPair::new(limit.clone(), Rational::zero()))
}

/// Partial sums `a_n` of a finite explicit list of pairs.
pub fn partial_sums(terms: &[HPair]) -> Result<Vec<HPair>> {
    let mut out = Vec::with_capacity(terms.len());
    for i in 0..terms.len() {
        out.push(hpair_sum(&terms[..=i])?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn one() -> Dimension {
        Dimension::one()
    }

    #[test]
    fn constant_tail() {
        let s = HSeq::new(vec![], TailRule::Constant(HPair::new(one(), int(3)))).unwrap();
        assert_eq!(s.limit().unwrap(), HPair::new(one(), int(3)));
    }

    #[test]
    fn vanishing_measure_limit() {
        // (1, -1/n)
        let tail = TailRule::VanishingMeasure {
            d: one(),
            limit: Rational::zero(),
            coefficients: CoefficientSeries::pseries(int(-1), int(1)).unwrap(),
        };
        let s = HSeq::new(vec![], tail).unwrap();
        assert_eq!(s.term(4).unwrap(), HPair::new(one(), rat(-1, 4)));
        assert_eq!(s.limit().unwrap(), HPair::new(one(), int(0)));
        assert_eq!(s.liminf().unwrap(), s.limsup().unwrap());
    }

    #[test]
    fn climbing_dimension_limit() {
        let tail = TailRule::DimensionClimb {
            limit: one(),
            gaps: CoefficientSeries::pseries(int(1), int(1)).unwrap(),
            base: int(5),
            coefficients: CoefficientSeries::geometric(int(1), rat(-1, 2)).unwrap(),
        };
        let s = HSeq::new(vec![], tail).unwrap();
        assert_eq!(s.term(1).unwrap().d, Dimension::zero());
        assert_eq!(s.limit().unwrap(), HPair::new(one(), int(0)));
    }

    #[test]
    fn interleaved_oscillation() {
        let tail = TailRule::Interleaved(vec![
            TailRule::Constant(HPair::new(one(), int(-1))),
            TailRule::Constant(HPair::new(one(), int(1))),
        ]);
        let s = HSeq::new(vec![], tail).unwrap();
        assert_eq!(s.liminf().unwrap(), HPair::new(one(), int(-1)));
        assert_eq!(s.limsup().unwrap(), HPair::new(one(), int(1)));
        assert!(matches!(s.limit(), Err(HError::DoesNotConverge { .. })));
    }

    #[test]
    fn series_examples() {
        let g = CoefficientSeries::geometric(rat(1, 2), rat(1, 2)).unwrap();
        assert_eq!(
            hpair_series(&[Dimension::zero()], &[g]).unwrap(),
            HPair::new(Dimension::zero(), int(1))
        );
        let s = hpair_series(
            &[Dimension::zero(), one()],
            &[
                CoefficientSeries::geometric(int(1), rat(1, 2)).unwrap(),
                CoefficientSeries::FiniteList(vec![]),
            ],
        )
        .unwrap();
        assert_eq!(s, HPair::new(one(), int(0)));
        let s = hpair_series(
            &[Dimension::cantor()],
            &[CoefficientSeries::FiniteList(vec![int(1), int(2), int(3)])],
        )
        .unwrap();
        assert_eq!(s, HPair::new(Dimension::cantor(), int(6)));
    }

    #[test]
    fn pseries_sum_encloses_zeta2() {
        let z = CoefficientSeries::pseries(int(1), int(2))
            .unwrap()
            .sum()
            .unwrap();
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        match z {
            ExtReal::Approx(b) => assert!(b.contains(pi2_6) && b.rad < 1e-11, "{b:?}"),
            other => panic!("expected interval, got {other}"),
        }
        let tail = CoefficientSeries::pseries(int(1), int(2))
            .unwrap()
            .sum_from(3)
            .unwrap();
        assert!((tail.to_f64() - (pi2_6 - 1.25)).abs() < 1e-11);
    }

    #[test]
    fn partial_sum_sequence_converges_to_series() {
        let terms = vec![
            (
                Dimension::zero(),
                CoefficientSeries::geometric(int(1), rat(1, 3)).unwrap(),
            ),
            (
                Dimension::cantor(),
                CoefficientSeries::geometric(int(2), rat(1, 2)).unwrap(),
            ),
        ];
        let s = HSeq::new(vec![], TailRule::PartialSums(terms)).unwrap();
        assert_eq!(s.limit().unwrap(), HPair::new(Dimension::cantor(), int(4)));
        let far = s.term(200).unwrap();
        assert_eq!(far.d, Dimension::cantor());
        assert!((far.m.to_f64() - 4.0).abs() < 1e-12);
    }
}
