//! h-metrics on pairs, sets and functions, with Cauchy and completeness
//! checks on generated sequences.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{invalid, HError, Result};
use crate::hintegral::{h_integral, Domain, Expr, PiecewiseFunction};
use crate::hvalue::{Dimension, ExtReal, HPair};
use crate::num::{pow_rational, Rational};
use crate::setalg::{hmeasure, repset_symdiff, Atom, RepSet, SeqSpec};

/// A value of an h-metric: a pair with nonnegative measure.
#[derive(Clone, Debug, PartialEq)]
pub struct HDistance {
    pub value: HPair,
}

impl HDistance {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl std::fmt::Display for HDistance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.value.fmt(f)
    }
}

fn abs_diff(a: &ExtReal, b: &ExtReal) -> ExtReal {
    match (a, b) {
        (ExtReal::PosInf, ExtReal::PosInf) => ExtReal::zero(),
        (ExtReal::PosInf, _) | (_, ExtReal::PosInf) => ExtReal::PosInf,
        _ => a.try_add(&b.neg()).expect("finite difference").abs(),
    }
}

/// `d^H`: dimension gap when the dimensions differ, else measure gap.
#[allow(non_snake_case)]
pub fn dH_pairs(a: &HPair, b: &HPair) -> Result<HDistance> {
    if a.m.sign() == Ordering::Less || b.m.sign() == Ordering::Less {
        return Err(invalid("d^H is defined for nonnegative measures"));
    }
    let value = match a.d.try_cmp(&b.d)? {
        Ordering::Equal => HPair {
            d: Dimension::zero(),
            m: abs_diff(&a.m, &b.m),
        },
        _ => HPair {
            d: a.d.sub(&b.d).abs()?,
            m: ExtReal::zero(),
        },
    };
    Ok(HDistance { value })
}

/// `mu_H(A xor B)`.
pub fn d_s(a: &RepSet, b: &RepSet) -> Result<HDistance> {
    Ok(HDistance {
        value: hmeasure(&repset_symdiff(a, b)?),
    })
}

fn abs_integrable(f: &PiecewiseFunction, k: &Domain) -> Result<()> {
    let i = h_integral(&f.abs()?, k)?;
    if !i.m.is_finite() {
        return Err(HError::NotInLH(format!("integral of |f| is {i}")));
    }
    Ok(())
}

/// `d_H(f, g) = (H) int_K |f - g|`.
#[allow(non_snake_case)]
pub fn d_H(f: &PiecewiseFunction, g: &PiecewiseFunction, k: &Domain) -> Result<HDistance> {
    abs_integrable(f, k)?;
    abs_integrable(g, k)?;
    Ok(HDistance {
        value: h_integral(&f.sub(g)?.abs()?, k)?,
    })
}

/// An h-metric on some space.
pub trait HMetric<T> {
    fn distance(&self, a: &T, b: &T) -> Result<HDistance>;
}

/// `d^H` on pairs.
pub struct PairMetric;

/// `d_s` on sets.
pub struct SetMetric;

/// `d_H` on functions integrated over a region.
pub struct FunctionMetric(pub Domain);

impl HMetric<HPair> for PairMetric {
    fn distance(&self, a: &HPair, b: &HPair) -> Result<HDistance> {
        dH_pairs(a, b)
    }
}

impl HMetric<RepSet> for SetMetric {
    fn distance(&self, a: &RepSet, b: &RepSet) -> Result<HDistance> {
        d_s(a, b)
    }
}

impl HMetric<PiecewiseFunction> for FunctionMetric {
    fn distance(&self, a: &PiecewiseFunction, b: &PiecewiseFunction) -> Result<HDistance> {
        d_H(a, b, &self.0)
    }
}

/// `d(center, y) < radius`.
pub fn ball_member<T, M: HMetric<T>>(
    metric: &M,
    center: &T,
    y: &T,
    radius: &HPair,
) -> Result<bool> {
    if !HPair::zero().lt(radius)? {
        return Err(invalid("radius must exceed (0, 0)"));
    }
    metric.distance(center, y)?.value.lt(radius)
}

/// Sequences `x_n = f + p_n`, `n >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum Perturbation {
    /// `p_n = 0`.
    Constant,
    /// `p_n = a r^n chi{x}`, `0 < |r| < 1`.
    GeometricPoint {
        x: Rational,
        a: Rational,
        r: Rational,
    },
    /// `p_n = c / n^p` on the first `n` points of a sequence, `p >= 2`.
    HarmonicPrefix { spec: SeqSpec, c: Rational, p: u32 },
    /// `p_n = 0` for odd `n`, `g - f` for even `n`.
    Alternating(PiecewiseFunction),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedSequence {
    pub base: PiecewiseFunction,
    pub perturbation: Perturbation,
}

/// Largest index searched when looking for a Cauchy threshold.
const MAX_INDEX: u64 = 1 << 20;
/// Later terms checked directly against each threshold.
const WINDOW: u64 = 4;

fn nr(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

impl PerturbedSequence {
    pub fn new(base: PiecewiseFunction, perturbation: Perturbation) -> Result<Self> {
        match &perturbation {
            Perturbation::GeometricPoint { r, .. } if r.is_zero() || r.abs() >= Rational::one() => {
                return Err(invalid("geometric perturbations need 0 < |r| < 1"))
            }
            Perturbation::HarmonicPrefix { p, .. } if *p < 2 => {
                return Err(invalid("prefix perturbations need p >= 2 to vanish"))
            }
            _ => {}
        }
        Ok(PerturbedSequence { base, perturbation })
    }

    fn perturbation(&self, n: u64) -> Result<PiecewiseFunction> {
        match &self.perturbation {
            Perturbation::Constant => Ok(PiecewiseFunction::zero()),
            Perturbation::GeometricPoint { x, a, r } => PiecewiseFunction::new(
                vec![(
                    Atom::point(x.clone()),
                    Expr::Const(a * pow_rational(r, n as i64)),
                )],
                Domain::All,
            ),
            Perturbation::HarmonicPrefix { spec, c, p } => {
                let pts: Vec<Rational> =
                    (spec.start..spec.start + n).map(|k| spec.term(k)).collect();
                let v = c / pow_rational(&nr(n), *p as i64);
                PiecewiseFunction::new(vec![(Atom::points(pts), Expr::Const(v))], Domain::All)
            }
            Perturbation::Alternating(g) => {
                if n % 2 == 1 {
                    Ok(PiecewiseFunction::zero())
                } else {
                    g.sub(&self.base)
                }
            }
        }
    }

    /// `x_n`.
    pub fn term(&self, n: u64) -> Result<PiecewiseFunction> {
        if n == 0 {
            return Err(invalid("sequence index starts at 1"));
        }
        self.base.add(&self.perturbation(n)?)
    }

    /// A bound on `d(x_n, x_m)` for `n, m >= big_n`, all at dimension 0.
    fn tail_bound(&self, big_n: u64) -> Option<Rational> {
        match &self.perturbation {
            Perturbation::Constant => Some(Rational::zero()),
            Perturbation::GeometricPoint { a, r, .. } => Some(
                Rational::from_integer(2.into()) * a.abs() * pow_rational(&r.abs(), big_n as i64),
            ),
            Perturbation::HarmonicPrefix { c, p, .. } => Some(
                Rational::from_integer(2.into()) * c.abs()
                    / pow_rational(&nr(big_n), *p as i64 - 1),
            ),
            Perturbation::Alternating(_) => None,
        }
    }

    /// Smallest `N` whose tail bound is below `eps`, if one exists.
    fn threshold(&self, eps: &Rational) -> Result<Option<u64>> {
        if let Perturbation::Alternating(g) = &self.perturbation {
            let d = d_H(&self.base, g, &Domain::All)?;
            return Ok(
                if d.value.lt(&HPair::new(Dimension::zero(), eps.clone()))? {
                    Some(1)
                } else {
                    None
                },
            );
        }
        let below = |n: u64| self.tail_bound(n).is_some_and(|b| b < *eps);
        let mut hi = 1;
        while !below(hi) {
            if hi >= MAX_INDEX {
                return Ok(None);
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if below(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Some(if below(lo.max(1)) { lo.max(1) } else { hi }))
    }
}

fn check_schedule(schedule: &[Rational]) -> Result<()> {
    if schedule.is_empty() || schedule.iter().any(|e| !e.is_positive()) {
        return Err(invalid("tolerance schedule must be nonempty and positive"));
    }
    Ok(())
}

/// For each `eps`, a verified `N` with `d(x_n, x_m) < (0, eps)` for
/// `n, m >= N`.
pub fn is_cauchy(seq: &PerturbedSequence, schedule: &[Rational]) -> Result<bool> {
    check_schedule(schedule)?;
    for eps in schedule {
        let Some(n0) = seq.threshold(eps)? else {
            return Ok(false);
        };
        let radius = HPair::new(Dimension::zero(), eps.clone());
        let terms: Vec<PiecewiseFunction> = (n0..n0 + WINDOW)
            .map(|n| seq.term(n))
            .collect::<Result<_>>()?;
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if !d_H(&terms[i], &terms[j], &Domain::All)?.value.lt(&radius)? {
                    return Err(invalid(format!("bound at index {n0} fails for eps {eps}")));
                }
            }
        }
    }
    Ok(true)
}

/// Limit of a Cauchy sequence and, per tolerance, the index beyond which
/// `d_H(x_n, f) < (0, eps)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RieszFischerReport {
    pub limit: PiecewiseFunction,
    pub certificate: Vec<(Rational, u64)>,
}

pub fn riesz_fischer_check(
    seq: &PerturbedSequence,
    schedule: &[Rational],
) -> Result<RieszFischerReport> {
    if !is_cauchy(seq, schedule)? {
        return Err(HError::NoLimitFound(String::from("sequence is not Cauchy")));
    }
    let limit = match &seq.perturbation {
        Perturbation::Alternating(g) if !g.equivalent(&seq.base)? => {
            return Err(HError::NoLimitFound(String::from(
                "alternating sequence outside the constructive fragment",
            )))
        }
        _ => seq.base.clone(),
    };
    let mut certificate = vec![];
    for eps in schedule {
        let n0 = seq
            .threshold(eps)?
            .expect("Cauchy sequences have thresholds");
        let radius = HPair::new(Dimension::zero(), eps.clone());
        for n in n0..n0 + WINDOW {
            let d = d_H(&seq.term(n)?, &limit, &Domain::All)?;
            if !d.value.lt(&radius)? {
                return Err(invalid(format!("d(x_{n}, f) = {d} is not below {radius}")));
            }
        }
        certificate.push((eps.clone(), n0));
    }
    Ok(RieszFischerReport { limit, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};
    use crate::setalg::{repset_union, unit_interval};

    fn p(d: Dimension, m: Rational) -> HPair {
        HPair::new(d, m)
    }

    fn iv(a: i64, b: i64) -> RepSet {
        RepSet::from_atom(Atom::interval(int(a), int(b)).unwrap())
    }

    #[test]
    fn pair_distance_branches() {
        let one = Dimension::one();
        assert_eq!(
            dH_pairs(&p(one.clone(), int(1)), &p(one.clone(), int(5)))
                .unwrap()
                .value,
            p(Dimension::zero(), int(4))
        );
        assert_eq!(
            dH_pairs(&p(Dimension::zero(), int(9)), &p(one.clone(), int(9)))
                .unwrap()
                .value,
            p(one.clone(), int(0))
        );
        assert!(dH_pairs(&p(one.clone(), int(3)), &p(one.clone(), int(3)))
            .unwrap()
            .is_zero());
        let inf = HPair::new(one.clone(), ExtReal::PosInf);
        assert!(dH_pairs(&inf, &inf).unwrap().is_zero());
        assert!(dH_pairs(&p(one, int(-1)), &HPair::zero()).is_err());
    }

    #[test]
    fn set_distance_examples() {
        let a = unit_interval();
        let b = repset_union(&a, &RepSet::from_atom(Atom::point(int(2)))).unwrap();
        assert_eq!(d_s(&a, &b).unwrap().value, p(Dimension::zero(), int(1)));
        assert_eq!(
            d_s(&a, &iv(0, 2)).unwrap().value,
            p(Dimension::one(), int(1))
        );
        assert!(d_s(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn function_distance_examples() {
        let chi0 = PiecewiseFunction::indicator(&RepSet::from_atom(Atom::point(int(0))));
        let z = PiecewiseFunction::zero();
        assert_eq!(
            d_H(&chi0, &z, &Domain::All).unwrap().value,
            p(Dimension::zero(), int(1))
        );
        let x = PiecewiseFunction::new(
            vec![(
                Atom::interval(int(0), int(1)).unwrap(),
                Expr::Poly(crate::poly::Poly::x()),
            )],
            Domain::All,
        )
        .unwrap();
        assert_eq!(
            d_H(&x, &z, &Domain::All).unwrap().value,
            p(Dimension::one(), rat(1, 2))
        );
        assert!(d_H(&x, &x, &Domain::All).unwrap().is_zero());
        let harmonic = PiecewiseFunction::indicator(&RepSet::from_atom(Atom::seq(
            SeqSpec::harmonic(int(0), int(1)).unwrap(),
        )));
        assert!(matches!(
            d_H(&harmonic, &z, &Domain::All),
            Err(HError::NotInLH(_))
        ));
    }

    #[test]
    fn balls_are_lexicographic() {
        let zero = HPair::zero();
        let at = |m: i64| p(Dimension::zero(), int(m));
        assert!(ball_member(&PairMetric, &zero, &at(1), &at(2)).unwrap());
        assert!(ball_member(&PairMetric, &zero, &at(1), &p(Dimension::one(), int(0))).unwrap());
        assert!(!ball_member(&PairMetric, &zero, &p(Dimension::one(), int(0)), &at(5)).unwrap());
        assert!(ball_member(&PairMetric, &zero, &zero, &zero).is_err());
    }

    fn base() -> PiecewiseFunction {
        PiecewiseFunction::indicator(&unit_interval())
    }

    fn schedule() -> Vec<Rational> {
        vec![rat(1, 10), rat(1, 1000), rat(1, 1_000_000)]
    }

    #[test]
    fn geometric_point_perturbation() {
        let s = PerturbedSequence::new(
            base(),
            Perturbation::GeometricPoint {
                x: int(0),
                a: int(1),
                r: rat(1, 2),
            },
        )
        .unwrap();
        assert_eq!(
            d_H(&s.term(3).unwrap(), &s.term(5).unwrap(), &Domain::All)
                .unwrap()
                .value,
            p(Dimension::zero(), rat(3, 32))
        );
        assert!(is_cauchy(&s, &schedule()).unwrap());
        let r = riesz_fischer_check(&s, &schedule()).unwrap();
        assert!(r.limit.equivalent(&base()).unwrap());
        assert_eq!(r.certificate[0], (rat(1, 10), 5));
    }

    #[test]
    fn prefix_perturbation() {
        let spec = SeqSpec::harmonic(int(0), int(1)).unwrap();
        let s = PerturbedSequence::new(
            base().with_domain(Domain::All),
            Perturbation::HarmonicPrefix {
                spec,
                c: int(1),
                p: 3,
            },
        )
        .unwrap();
        assert!(is_cauchy(&s, &schedule()).unwrap());
        assert!(riesz_fischer_check(&s, &schedule())
            .unwrap()
            .limit
            .equivalent(&base())
            .unwrap());
    }

    #[test]
    fn constant_and_alternating() {
        let s = PerturbedSequence::new(base(), Perturbation::Constant).unwrap();
        assert!(is_cauchy(&s, &schedule()).unwrap());
        assert_eq!(riesz_fischer_check(&s, &schedule()).unwrap().limit, base());
        let g = base()
            .add(&PiecewiseFunction::indicator(&RepSet::from_atom(
                Atom::point(int(5)),
            )))
            .unwrap();
        let s = PerturbedSequence::new(base(), Perturbation::Alternating(g)).unwrap();
        assert!(!is_cauchy(&s, &schedule()).unwrap());
        assert!(matches!(
            riesz_fischer_check(&s, &schedule()),
            Err(HError::NoLimitFound(_))
        ));
    }
}
