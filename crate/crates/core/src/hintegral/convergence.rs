use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{invalid, HError, Result};
use crate::hintegral::expr::{Expr, SeriesExpr};
use crate::hintegral::function::{Domain, PiecewiseFunction};
use crate::hintegral::integral::h_integral;
use crate::hvalue::{hseq_liminf, hseq_limit, CoefficientSeries, Dimension, HPair, HSeq, TailRule};
use crate::num::Rational;
use crate::setalg::{Atom, SeqSpec};

/// Terms of the tail checked against the engine.
const CROSS_CHECK: u64 = 8;

fn single(atom: Atom, e: Expr) -> Result<PiecewiseFunction> {
    PiecewiseFunction::new(vec![(atom, e)], Domain::All)
}

fn harmonic_step(w: &Rational) -> Result<CoefficientSeries> {
    CoefficientSeries::pseries(w.clone(), Rational::one())
}

/// Generated chains `f_n`, `n >= 1`, each with a known pointwise limit.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainRule {
    /// `c * chi[a, b - w/n]`, limit `c * chi[a, b)`.
    GrowingInterval {
        a: Rational,
        b: Rational,
        w: Rational,
        c: Rational,
    },
    /// Indicator of the first `n` points of a sequence.
    GrowingPoints(SeqSpec),
    /// Values `c_k` on the first `n` points of a sequence starting at index 1.
    GrowingValues {
        spec: SeqSpec,
        coefficients: CoefficientSeries,
    },
    /// `-chi[0, w/n]`, limit `-chi{0}`.
    SignedShrinking { w: Rational },
}

impl ChainRule {
    fn check(&self, first: u64) -> Result<()> {
        match self {
            ChainRule::GrowingInterval { a, b, w, .. } => {
                if !w.is_positive() || b - w / Rational::from_integer(first.into()) <= *a {
                    return Err(invalid(
                        "growing interval must be nondegenerate from its first term",
                    ));
                }
            }
            ChainRule::GrowingValues { spec, coefficients } => {
                if spec.start != 1 {
                    return Err(invalid("value chains index their sequence from 1"));
                }
                if let CoefficientSeries::PSeries { p, .. } = coefficients {
                    if !p.is_integer() {
                        return Err(invalid("value chains need an integer exponent"));
                    }
                }
            }
            ChainRule::SignedShrinking { w } if !w.is_positive() => {
                return Err(invalid("width must be positive"))
            }
            _ => {}
        }
        Ok(())
    }

    /// `f_n`.
    pub fn function(&self, n: u64) -> Result<PiecewiseFunction> {
        let nr = Rational::from_integer(n.into());
        match self {
            ChainRule::GrowingInterval { a, b, w, c } => single(
                Atom::interval(a.clone(), b - w / &nr)?,
                Expr::Const(c.clone()),
            ),
            ChainRule::GrowingPoints(spec) => {
                let pts: Vec<Rational> =
                    (spec.start..spec.start + n).map(|k| spec.term(k)).collect();
                Ok(PiecewiseFunction::indicator(
                    &crate::setalg::RepSet::from_atom(Atom::points(pts)),
                ))
            }
            ChainRule::GrowingValues { spec, coefficients } => {
                let pieces = (1..=n)
                    .map(|k| {
                        let v = coefficients
                            .term(k)
                            .ok_or_else(|| invalid("irrational coefficient"))?;
                        Ok((Atom::point(spec.term(k)), Expr::Const(v)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                PiecewiseFunction::new(pieces, Domain::All)
            }
            ChainRule::SignedShrinking { w } => single(
                Atom::interval(Rational::zero(), w / &nr)?,
                Expr::Const(-Rational::one()),
            ),
        }
    }

    /// The pointwise limit.
    pub fn limit(&self) -> Result<PiecewiseFunction> {
        match self {
            ChainRule::GrowingInterval { a, b, c, .. } => {
                let atom = Atom::interval(a.clone(), b.clone())?
                    .without([b])
                    .expect("interval is not a point");
                single(atom, Expr::Const(c.clone()))
            }
            ChainRule::GrowingPoints(spec) => {
                single(Atom::seq(spec.clone()), Expr::Const(Rational::one()))
            }
            ChainRule::GrowingValues { spec, coefficients } => single(
                Atom::seq(spec.clone()),
                Expr::Series(SeriesExpr::single(coefficients.clone())?),
            ),
            ChainRule::SignedShrinking { .. } => {
                single(Atom::point(Rational::zero()), Expr::Const(-Rational::one()))
            }
        }
    }

    /// Closed form of `int f_n`.
    fn integrals(&self) -> Result<TailRule> {
        Ok(match self {
            ChainRule::GrowingInterval { a, b, w, c } => TailRule::VanishingMeasure {
                d: Dimension::one(),
                limit: c * (b - a),
                coefficients: harmonic_step(&-(c * w))?,
            },
            ChainRule::GrowingPoints(_) => TailRule::Divergent {
                d: Dimension::zero(),
                start: Rational::zero(),
                step: Rational::one(),
            },
            ChainRule::GrowingValues { coefficients, .. } => {
                TailRule::PartialSums(vec![(Dimension::zero(), coefficients.clone())])
            }
            ChainRule::SignedShrinking { w } => TailRule::VanishingMeasure {
                d: Dimension::one(),
                limit: Rational::zero(),
                coefficients: harmonic_step(&-w)?,
            },
        })
    }

    /// Whether every `f_n` is nonnegative.
    pub fn nonnegative(&self) -> bool {
        match self {
            ChainRule::GrowingInterval { c, .. } => !c.is_negative(),
            ChainRule::GrowingPoints(_) => true,
            ChainRule::GrowingValues { coefficients, .. } => {
                matches!(
                    coefficients.constant_sign(),
                    Some(Ordering::Greater | Ordering::Equal)
                )
            }
            ChainRule::SignedShrinking { .. } => false,
        }
    }

    /// Whether `f_n <= f_{n+1}` for all `n`.
    pub fn increasing(&self) -> bool {
        match self {
            ChainRule::SignedShrinking { .. } => true,
            _ => self.nonnegative(),
        }
    }
}

fn engine_matches(rule: &ChainRule, tail: &TailRule, from: u64) -> Result<()> {
    let seq = HSeq::new(vec![], tail.clone())?;
    for n in from..from + CROSS_CHECK {
        let (engine, closed) = (h_integral(&rule.function(n)?, &Domain::All)?, seq.term(n)?);
        if engine.try_cmp(&closed)? != Ordering::Equal {
            return Err(invalid(format!(
                "term {n}: engine {engine} differs from closed form {closed}"
            )));
        }
    }
    Ok(())
}

/// Outcome of a monotone convergence run.
#[derive(Clone, Debug)]
pub struct BeppoLeviReport {
    pub integrals: HSeq,
    pub limit: HPair,
    pub integral_of_limit: HPair,
    pub agrees: bool,
    pub nonnegative: bool,
}

/// Integrals of `prefix` followed by `rule` from index `prefix.len() + 1`,
/// their limit, and the integral of the pointwise limit.
pub fn beppo_levi_limit(prefix: &[PiecewiseFunction], rule: &ChainRule) -> Result<BeppoLeviReport> {
    let first = prefix.len() as u64 + 1;
    rule.check(first)?;
    if !rule.increasing() {
        return Err(HError::MonotonicityViolated(String::from(
            "the generated tail decreases",
        )));
    }
    let head = rule.function(first)?;
    let chain: Vec<&PiecewiseFunction> = prefix.iter().chain(std::iter::once(&head)).collect();
    for (i, w) in chain.windows(2).enumerate() {
        if !w[0].le(w[1])? {
            return Err(HError::MonotonicityViolated(format!(
                "f_{} > f_{} somewhere",
                i + 1,
                i + 2
            )));
        }
    }
    let tail = rule.integrals()?;
    engine_matches(rule, &tail, first)?;
    let integrals = HSeq::new(
        prefix
            .iter()
            .map(|f| h_integral(f, &Domain::All))
            .collect::<Result<_>>()?,
        tail,
    )?;
    let limit = hseq_limit(&integrals)?;
    let integral_of_limit = h_integral(&rule.limit()?, &Domain::All)?;
    let agrees = limit.try_cmp(&integral_of_limit)? == Ordering::Equal;
    let nonnegative = rule.nonnegative() && prefix.iter().all(PiecewiseFunction::is_nonneg);
    Ok(BeppoLeviReport {
        integrals,
        limit,
        integral_of_limit,
        agrees,
        nonnegative,
    })
}

/// Generated nonnegative sequences with a certified pointwise limit.
#[derive(Clone, Debug, PartialEq)]
pub enum FatouSequence {
    /// `chi[n, n + w]`, escaping to zero.
    Escaping { w: Rational },
    /// `f_n = f`.
    Constant(PiecewiseFunction),
    /// `chi[0, w/n]`, limit `chi{0}`.
    Shrinking { w: Rational },
    /// `chi{1/n}`, limit zero.
    MovingPoint,
    /// `f, g, f, g, ...`: no limit unless `f = g`.
    Alternating(PiecewiseFunction, PiecewiseFunction),
}

impl FatouSequence {
    pub fn function(&self, n: u64) -> Result<PiecewiseFunction> {
        let nr = Rational::from_integer(n.into());
        match self {
            FatouSequence::Escaping { w } => single(
                Atom::interval(nr.clone(), nr + w)?,
                Expr::Const(Rational::one()),
            ),
            FatouSequence::Constant(f) => Ok(f.clone()),
            FatouSequence::Shrinking { w } => single(
                Atom::interval(Rational::zero(), w / nr)?,
                Expr::Const(Rational::one()),
            ),
            FatouSequence::MovingPoint => {
                single(Atom::point(nr.recip()), Expr::Const(Rational::one()))
            }
            FatouSequence::Alternating(f, g) => Ok(if n % 2 == 1 { f.clone() } else { g.clone() }),
        }
    }

    /// The certified pointwise limit.
    pub fn limit(&self) -> Result<PiecewiseFunction> {
        match self {
            FatouSequence::Escaping { .. } | FatouSequence::MovingPoint => {
                Ok(PiecewiseFunction::zero())
            }
            FatouSequence::Constant(f) => Ok(f.clone()),
            FatouSequence::Shrinking { .. } => {
                single(Atom::point(Rational::zero()), Expr::Const(Rational::one()))
            }
            FatouSequence::Alternating(f, g) => {
                if f.equivalent(g)? {
                    Ok(f.clone())
                } else {
                    Err(HError::NoLimitFound(String::from(
                        "alternating sequence has no pointwise limit",
                    )))
                }
            }
        }
    }

    fn integrals(&self) -> Result<TailRule> {
        let one = |d: Dimension, m: Rational| TailRule::Constant(HPair::new(d, m));
        Ok(match self {
            FatouSequence::Escaping { w } => one(Dimension::one(), w.clone()),
            FatouSequence::Constant(f) => TailRule::Constant(h_integral(f, &Domain::All)?),
            FatouSequence::Shrinking { w } => TailRule::VanishingMeasure {
                d: Dimension::one(),
                limit: Rational::zero(),
                coefficients: harmonic_step(w)?,
            },
            FatouSequence::MovingPoint => one(Dimension::zero(), Rational::one()),
            FatouSequence::Alternating(f, g) => TailRule::Interleaved(vec![
                TailRule::Constant(h_integral(f, &Domain::All)?),
                TailRule::Constant(h_integral(g, &Domain::All)?),
            ]),
        })
    }

    fn check(&self) -> Result<()> {
        match self {
            FatouSequence::Escaping { w } | FatouSequence::Shrinking { w } if !w.is_positive() => {
                Err(invalid("width must be positive"))
            }
            FatouSequence::Constant(f) | FatouSequence::Alternating(f, _) if !f.is_nonneg() => Err(
                HError::OrderNotVerified(String::from("sequence is not nonnegative")),
            ),
            FatouSequence::Alternating(_, g) if !g.is_nonneg() => Err(HError::OrderNotVerified(
                String::from("sequence is not nonnegative"),
            )),
            _ => Ok(()),
        }
    }
}

/// Outcome of a lower-semicontinuity check.
#[derive(Clone, Debug)]
pub struct FatouReport {
    pub integrals: HSeq,
    pub liminf: HPair,
    pub integral_of_limit: HPair,
    pub holds: bool,
}

/// `int lim f_n <= liminf int f_n`.
pub fn fatou_check(seq: &FatouSequence) -> Result<FatouReport> {
    seq.check()?;
    let integral_of_limit = h_integral(&seq.limit()?, &Domain::All)?;
    let integrals = HSeq::new(vec![], seq.integrals()?)?;
    for n in 1..=CROSS_CHECK {
        let (engine, closed) = (
            h_integral(&seq.function(n)?, &Domain::All)?,
            integrals.term(n)?,
        );
        if engine.try_cmp(&closed)? != Ordering::Equal {
            return Err(invalid(format!(
                "term {n}: engine {engine} differs from closed form {closed}"
            )));
        }
    }
    let liminf = hseq_liminf(&integrals)?;
    let holds = integral_of_limit.leq(&liminf)?;
    Ok(FatouReport {
        integrals,
        liminf,
        integral_of_limit,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hvalue::ExtReal;
    use crate::num::{int, rat};

    fn p(d: Dimension, m: Rational) -> HPair {
        HPair::new(d, m)
    }

    #[test]
    fn growing_interval_reaches_half_open_limit() {
        let rule = ChainRule::GrowingInterval {
            a: int(0),
            b: int(1),
            w: int(1),
            c: int(1),
        };
        let f1 = single(Atom::point(int(0)), Expr::Const(int(1))).unwrap();
        let r = beppo_levi_limit(&[f1], &rule).unwrap();
        assert_eq!(r.integrals.term(1).unwrap(), p(Dimension::zero(), int(1)));
        assert_eq!(r.limit, p(Dimension::one(), int(1)));
        assert!(r.agrees && r.nonnegative);
        assert_eq!(r.integrals.term(4).unwrap(), p(Dimension::one(), rat(3, 4)));
    }

    #[test]
    fn growing_points_diverge() {
        let rule = ChainRule::GrowingPoints(SeqSpec::harmonic(int(0), int(1)).unwrap());
        let r = beppo_levi_limit(&[], &rule).unwrap();
        assert_eq!(r.integrals.term(5).unwrap(), p(Dimension::zero(), int(5)));
        assert_eq!(r.limit.m, ExtReal::PosInf);
        assert!(r.agrees);
    }

    #[test]
    fn growing_values_sum() {
        let rule = ChainRule::GrowingValues {
            spec: SeqSpec::harmonic(int(0), int(1)).unwrap(),
            coefficients: CoefficientSeries::geometric(rat(1, 2), rat(1, 2)).unwrap(),
        };
        let r = beppo_levi_limit(&[], &rule).unwrap();
        assert_eq!(
            r.integrals.term(3).unwrap(),
            p(Dimension::zero(), rat(7, 8))
        );
        assert!(r.agrees && r.limit == p(Dimension::zero(), int(1)));
    }

    #[test]
    fn signed_chain_is_flagged() {
        let r = beppo_levi_limit(&[], &ChainRule::SignedShrinking { w: int(1) }).unwrap();
        assert_eq!(r.limit, p(Dimension::one(), int(0)));
        assert_eq!(r.integral_of_limit, p(Dimension::zero(), int(-1)));
        assert!(!r.agrees && !r.nonnegative);
    }

    #[test]
    fn dimension_stabilizes_after_prefix() {
        let two = single(Atom::point(int(5)), Expr::Const(int(1))).unwrap();
        let rule = ChainRule::GrowingInterval {
            a: int(5),
            b: int(6),
            w: rat(1, 2),
            c: int(1),
        };
        let r = beppo_levi_limit(&[two.clone(), two], &rule).unwrap();
        assert_eq!(r.integrals.term(1).unwrap(), p(Dimension::zero(), int(1)));
        assert!(r.agrees && r.limit == p(Dimension::one(), int(1)));
    }

    #[test]
    fn decreasing_chains_rejected() {
        let rule = ChainRule::GrowingInterval {
            a: int(0),
            b: int(1),
            w: rat(1, 2),
            c: int(-1),
        };
        assert!(matches!(
            beppo_levi_limit(&[], &rule),
            Err(HError::MonotonicityViolated(_))
        ));
        let big = single(Atom::interval(int(0), int(3)).unwrap(), Expr::Const(int(1))).unwrap();
        let rule = ChainRule::GrowingInterval {
            a: int(0),
            b: int(1),
            w: int(1),
            c: int(1),
        };
        assert!(matches!(
            beppo_levi_limit(&[big], &rule),
            Err(HError::MonotonicityViolated(_))
        ));
    }

    #[test]
    fn fatou_examples() {
        let r = fatou_check(&FatouSequence::Escaping { w: int(1) }).unwrap();
        assert!(
            r.holds
                && r.liminf == p(Dimension::one(), int(1))
                && r.integral_of_limit == HPair::zero()
        );
        let f = single(Atom::interval(int(0), int(2)).unwrap(), Expr::Const(int(3))).unwrap();
        let r = fatou_check(&FatouSequence::Constant(f)).unwrap();
        assert!(r.holds && r.liminf == r.integral_of_limit);
        assert!(
            fatou_check(&FatouSequence::Shrinking { w: int(1) })
                .unwrap()
                .holds
        );
        assert!(fatou_check(&FatouSequence::MovingPoint).unwrap().holds);
        let a = PiecewiseFunction::indicator(&crate::setalg::unit_interval());
        let b = single(Atom::interval(int(1), int(2)).unwrap(), Expr::Const(int(1))).unwrap();
        assert!(matches!(
            fatou_check(&FatouSequence::Alternating(a, b)),
            Err(HError::NoLimitFound(_))
        ));
    }
}
