use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{invalid, HError, Result};
use crate::hintegral::expr::{Expr, SignPattern};
use crate::hintegral::function::{Domain, PiecewiseFunction, Term};
use crate::hvalue::{hpair_sum, Dimension, ExtReal, HPair};
use crate::num::Rational;
use crate::setalg::{
    hmeasure, repset_intersect, repset_normalize, repset_union, Atom, AtomKind, RepSet, SeqSpec,
};

fn restricted(f: &PiecewiseFunction, k: &Domain) -> Result<PiecewiseFunction> {
    match k {
        Domain::All => Ok(f.clone()),
        Domain::Set(s) => f.restrict(s),
    }
}

/// Nonzero points of a series term, and the tail atom when infinite.
fn series_support(
    spec: &SeqSpec,
    atom: &Atom,
    pattern: &SignPattern,
    value: impl Fn(u64) -> Rational,
) -> Vec<Atom> {
    match pattern {
        SignPattern::Zero => vec![],
        SignPattern::Constant(_) => vec![atom.clone()],
        SignPattern::Eventually { from, sign } => {
            let mut out = vec![];
            let pts: BTreeSet<Rational> = (spec.start..*from)
                .filter(|&n| !value(n).is_zero())
                .map(|n| spec.term(n))
                .filter(|x| atom.contains(x))
                .collect();
            if !pts.is_empty() {
                out.push(Atom::points(pts));
            }
            if *sign != Ordering::Equal {
                let tail = Atom {
                    kind: AtomKind::Seq(spec.clone().from(*from)),
                    deletions: Default::default(),
                };
                out.extend(tail.without(atom.deletions.iter()));
            }
            out
        }
    }
}

fn term_support(t: &Term) -> Result<Vec<Atom>> {
    Ok(match (&t.atom.kind, &t.expr) {
        (_, Expr::Const(c)) if c.is_zero() => vec![],
        (_, Expr::Const(_)) => vec![t.atom.clone()],
        (AtomKind::Interval { lo, hi }, Expr::Poly(p)) => {
            // rational roots become deletions; irrational ones are null sets
            let roots: Vec<Rational> = p
                .real_roots(lo, hi)
                .into_iter()
                .filter_map(|r| match r {
                    crate::poly::Root::Exact(x) => Some(x),
                    crate::poly::Root::Open(..) => None,
                })
                .collect();
            t.atom.without(roots.iter()).into_iter().collect()
        }
        (AtomKind::Seq(spec), Expr::Series(s)) => {
            let pattern = s.sign_pattern(spec.start)?;
            let pattern = match pattern {
                // a constant sign still allows zeros where every part vanishes
                SignPattern::Constant(sign)
                    if s.offset.is_zero()
                        && s.parts.iter().all(|p| {
                            matches!(p, crate::hvalue::CoefficientSeries::FiniteList(_))
                        }) =>
                {
                    let _ = sign;
                    SignPattern::Eventually {
                        from: s.finite_len().max(spec.start) + 1,
                        sign: Ordering::Equal,
                    }
                }
                p => p,
            };
            series_support(spec, &t.atom, &pattern, |n| s.value(n))
        }
        _ => unreachable!("expression kinds are checked at construction"),
    })
}

/// `D_f = {x : f(x) != 0}`.
pub fn support(f: &PiecewiseFunction) -> Result<RepSet> {
    let mut atoms: Vec<Atom> = vec![];
    let pts: Vec<Rational> = f
        .points()
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(x, _)| x.clone())
        .collect();
    if !pts.is_empty() {
        atoms.push(Atom::points(pts));
    }
    for t in f.terms() {
        atoms.extend(term_support(t)?);
    }
    repset_normalize(atoms)
}

/// `(d, m)` contributed by one term on its own support.
fn term_integral(t: &Term) -> Result<Option<HPair>> {
    let pair = |m: ExtReal| {
        Some(HPair {
            d: t.atom.dimension(),
            m,
        })
    };
    Ok(match (&t.atom.kind, &t.expr) {
        (_, Expr::Const(c)) if c.is_zero() => None,
        (_, Expr::Const(c)) => pair(t.atom.measure().scale(c)),
        (AtomKind::Interval { lo, hi }, Expr::Poly(p)) => {
            if p.is_zero() {
                None
            } else {
                pair(ExtReal::Finite(p.integrate(lo, hi)))
            }
        }
        (AtomKind::Seq(spec), Expr::Series(s)) => {
            if term_support(t)?.is_empty() {
                return Ok(None);
            }
            let mut m = s.sum_from(spec.start)?;
            for x in &t.atom.deletions {
                let n = spec.index_of(x).expect("deletions are terms");
                m = m.try_add(&ExtReal::Finite(-s.value(n)))?;
            }
            Some(HPair {
                d: Dimension::zero(),
                m,
            })
        }
        _ => unreachable!("expression kinds are checked at construction"),
    })
}

/// `(H) int_K f = (dim_H (D_f & K), int_K f dmu^d)`.
pub fn h_integral(f: &PiecewiseFunction, k: &Domain) -> Result<HPair> {
    let g = restricted(f, k)?;
    let mut parts: Vec<HPair> = g
        .points()
        .values()
        .filter(|v| !v.is_zero())
        .map(|v| HPair::new(Dimension::zero(), v.clone()))
        .collect();
    for t in g.terms() {
        parts.extend(term_integral(t)?);
    }
    hpair_sum(&parts)
}

/// Integrable iff the integral exists with a finite measure.
pub fn is_integrable(f: &PiecewiseFunction, k: &Domain) -> bool {
    matches!(h_integral(f, k), Ok(p) if p.m.is_finite())
}

/// A checked identity: both sides and whether they agree.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub left: HPair,
    pub right: HPair,
    pub holds: bool,
}

impl Identity {
    fn new(left: HPair, right: HPair) -> Result<Identity> {
        let holds = left.try_cmp(&right)? == Ordering::Equal;
        Ok(Identity { left, right, holds })
    }
}

/// `int_K f` against `int_{D_f & K} f`.
pub fn restrict_to_support(f: &PiecewiseFunction, k: &Domain) -> Result<Identity> {
    let left = h_integral(f, k)?;
    let d = support(&restricted(f, k)?)?;
    let right = h_integral(f, &Domain::Set(d))?;
    Identity::new(left, right)
}

/// `int_R chi_K`, checked against `mu_H(K)`.
pub fn indicator_bridge(k: &RepSet) -> Result<HPair> {
    let via_integral = h_integral(&PiecewiseFunction::indicator(k), &Domain::All)?;
    let direct = hmeasure(k);
    if via_integral.try_cmp(&direct)? != Ordering::Equal {
        return Err(invalid(format!(
            "indicator integral {via_integral} differs from measure {direct}"
        )));
    }
    Ok(via_integral)
}

/// `int_{A|B} f` against `int_A f + int_B f` for disjoint `A`, `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionAdditivity {
    pub whole: HPair,
    pub on_a: HPair,
    pub on_b: HPair,
    pub holds: bool,
}

pub fn additivity_over_region(
    f: &PiecewiseFunction,
    a: &RepSet,
    b: &RepSet,
) -> Result<RegionAdditivity> {
    if !repset_intersect(a, b)?.is_empty() {
        return Err(HError::DisjointnessViolated(format!("{a} and {b}")));
    }
    let whole = h_integral(f, &Domain::Set(repset_union(a, b)?))?;
    let on_a = h_integral(f, &Domain::Set(a.clone()))?;
    let on_b = h_integral(f, &Domain::Set(b.clone()))?;
    let holds = whole.try_cmp(&on_a.add(&on_b)?)? == Ordering::Equal;
    Ok(RegionAdditivity {
        whole,
        on_a,
        on_b,
        holds,
    })
}

/// A countable partition: finitely many sets plus, optionally, every
/// single point of a catalog sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub finite: Vec<RepSet>,
    pub singletons_of: Option<SeqSpec>,
}

/// `int_A f` against the series of the integrals over the parts of `A`.
pub fn countable_additivity(f: &PiecewiseFunction, parts: &Partition) -> Result<Identity> {
    let mut all: Vec<RepSet> = parts.finite.clone();
    if let Some(spec) = &parts.singletons_of {
        all.push(RepSet::from_atom(Atom::seq(spec.clone())));
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if !repset_intersect(&all[i], &all[j])?.is_empty() {
                return Err(HError::DisjointnessViolated(format!(
                    "parts {} and {}",
                    all[i], all[j]
                )));
            }
        }
    }
    let mut union = RepSet::empty();
    for s in &all {
        union = repset_union(&union, s)?;
    }
    let whole = h_integral(f, &Domain::Set(union))?;
    let mut terms: Vec<HPair> = vec![];
    for s in &parts.finite {
        terms.push(h_integral(f, &Domain::Set(s.clone()))?);
    }
    if let Some(spec) = &parts.singletons_of {
        // (0, f(x_n)) summed over n: every part has dimension 0
        let on_seq = f.restrict(&RepSet::from_atom(Atom::seq(spec.clone())))?;
        let tail = h_integral(&on_seq, &Domain::All)?;
        if !tail.d.is_zero() {
            return Err(invalid("singleton parts carry dimension 0"));
        }
        terms.push(tail);
    }
    Identity::new(whole, hpair_sum(&terms)?)
}

/// `int f <= int g` for `0 <= f <= g`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneComparison {
    pub integral_f: HPair,
    pub integral_g: HPair,
    pub holds: bool,
}

pub fn monotone_compare(
    f: &PiecewiseFunction,
    g: &PiecewiseFunction,
    k: &Domain,
) -> Result<MonotoneComparison> {
    if !f.is_nonneg() {
        return Err(HError::OrderNotVerified(format!(
            "f is not nonnegative: {f}"
        )));
    }
    if !f.le(g)? {
        return Err(HError::OrderNotVerified(String::from(
            "f <= g fails somewhere",
        )));
    }
    let (integral_f, integral_g) = (h_integral(f, k)?, h_integral(g, k)?);
    let holds = integral_f.leq(&integral_g)?;
    Ok(MonotoneComparison {
        integral_f,
        integral_g,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hintegral::expr::SeriesExpr;
    use crate::hvalue::CoefficientSeries;
    use crate::num::{int, rat};
    use crate::poly::Poly;

    fn iv(a: Rational, b: Rational) -> Atom {
        Atom::interval(a, b).unwrap()
    }

    fn f1(atom: Atom, e: Expr) -> PiecewiseFunction {
        PiecewiseFunction::new(vec![(atom, e)], Domain::All).unwrap()
    }

    fn one() -> Dimension {
        Dimension::one()
    }

    #[test]
    fn constants_and_cancellation() {
        let f = f1(iv(int(0), int(1)), Expr::Const(int(1)));
        let g = f1(iv(int(0), int(1)), Expr::Const(int(-1)));
        assert_eq!(
            h_integral(&f, &Domain::All).unwrap(),
            HPair::new(one(), int(1))
        );
        assert_eq!(
            h_integral(&g, &Domain::All).unwrap(),
            HPair::new(one(), int(-1))
        );
        assert_eq!(
            h_integral(&f.add(&g).unwrap(), &Domain::All).unwrap(),
            HPair::zero()
        );
    }

    #[test]
    fn shrinking_negative_indicator() {
        for n in 1..6 {
            let f = f1(iv(int(0), rat(1, n)), Expr::Const(int(-1)));
            assert_eq!(
                h_integral(&f, &Domain::All).unwrap(),
                HPair::new(one(), rat(-1, n))
            );
        }
    }

    #[test]
    fn geometric_values_on_harmonic_points() {
        let h = Atom::seq(SeqSpec::harmonic(int(0), int(1)).unwrap());
        let s = SeriesExpr::single(CoefficientSeries::geometric(rat(1, 2), rat(1, 2)).unwrap())
            .unwrap();
        let f = f1(h.clone(), Expr::Series(s));
        assert_eq!(
            h_integral(&f, &Domain::All).unwrap(),
            HPair::new(Dimension::zero(), int(1))
        );
        assert!(is_integrable(&f, &Domain::All));
        let ones = f1(h, Expr::Const(int(1)));
        assert!(!is_integrable(&ones, &Domain::All));
        assert!(matches!(
            h_integral(&ones, &Domain::All).unwrap().m,
            ExtReal::PosInf
        ));
    }

    #[test]
    fn support_examples() {
        let f = f1(Atom::point(int(0)), Expr::Const(int(3)));
        assert_eq!(support(&f).unwrap(), RepSet::from_atom(Atom::point(int(0))));
        let x = f1(iv(int(-1), int(1)), Expr::Poly(Poly::x()));
        assert_eq!(
            support(&x).unwrap(),
            RepSet::from_atom(iv(int(-1), int(1)).without([&int(0)]).unwrap())
        );
        assert!(support(&PiecewiseFunction::zero()).unwrap().is_empty());
    }

    #[test]
    fn support_restriction() {
        let x = f1(iv(int(0), int(1)), Expr::Poly(Poly::x()));
        let k = Domain::Set(RepSet::from_atom(iv(int(-5), int(5))));
        let id = restrict_to_support(&x, &k).unwrap();
        assert!(id.holds);
        assert_eq!(id.left, HPair::new(one(), rat(1, 2)));
        let z = restrict_to_support(&PiecewiseFunction::zero(), &Domain::All).unwrap();
        assert_eq!((z.left, z.holds), (HPair::zero(), true));
    }

    #[test]
    fn indicators() {
        let c = RepSet::from_atom(Atom::cantor(int(0), int(1)).unwrap());
        assert_eq!(
            indicator_bridge(&c).unwrap(),
            HPair::new(Dimension::cantor(), int(1))
        );
        let p = RepSet::from_atom(Atom::points([int(1), int(2), int(3)]));
        assert_eq!(
            indicator_bridge(&p).unwrap(),
            HPair::new(Dimension::zero(), int(3))
        );
    }

    #[test]
    fn pos_neg_parts() {
        let x = f1(iv(int(-1), int(1)), Expr::Poly(Poly::x()));
        let (p, n) = (x.pos_part().unwrap(), x.neg_part().unwrap());
        assert_eq!(
            h_integral(&p, &Domain::All).unwrap(),
            HPair::new(one(), rat(1, 2))
        );
        assert_eq!(
            h_integral(&n, &Domain::All).unwrap(),
            HPair::new(one(), rat(-1, 2))
        );
        assert!(p.add(&n).unwrap().equivalent(&x).unwrap());
        let m2 = f1(Atom::points([int(0), int(1)]), Expr::Const(int(-2)));
        assert!(m2.pos_part().unwrap().points().is_empty());
        assert_eq!(
            h_integral(&m2.neg_part().unwrap(), &Domain::All).unwrap(),
            HPair::new(Dimension::zero(), int(-4))
        );
    }

    #[test]
    fn additivity_examples() {
        let f = f1(iv(int(-10), int(10)), Expr::Const(int(1)));
        let a = RepSet::from_atom(iv(int(0), int(1)));
        let r = additivity_over_region(&f, &a, &RepSet::from_atom(Atom::point(int(2)))).unwrap();
        assert!(r.holds && r.whole == HPair::new(one(), int(1)));
        let r = additivity_over_region(&f, &a, &RepSet::from_atom(iv(int(2), int(3)))).unwrap();
        assert_eq!(r.whole, HPair::new(one(), int(2)));
        let c0 = RepSet::from_atom(Atom::cantor(int(0), int(1)).unwrap());
        let c2 = RepSet::from_atom(Atom::cantor(int(2), int(1)).unwrap());
        let r = additivity_over_region(&f, &c0, &c2).unwrap();
        assert!(r.holds && r.whole == HPair::new(Dimension::cantor(), int(2)));
        assert!(matches!(
            additivity_over_region(&f, &a, &a),
            Err(HError::DisjointnessViolated(_))
        ));
    }

    #[test]
    fn countable_partitions() {
        let spec = SeqSpec::harmonic(int(0), int(1)).unwrap();
        let s = SeriesExpr::single(CoefficientSeries::geometric(rat(1, 2), rat(1, 2)).unwrap())
            .unwrap();
        let f = f1(Atom::seq(spec.clone()), Expr::Series(s));
        let id = countable_additivity(
            &f,
            &Partition {
                finite: vec![],
                singletons_of: Some(spec),
            },
        )
        .unwrap();
        assert!(id.holds && id.left == HPair::new(Dimension::zero(), int(1)));
        let g = f1(iv(int(0), int(5)), Expr::Const(int(1)));
        let parts = Partition {
            finite: vec![
                RepSet::from_atom(iv(int(0), int(1))),
                RepSet::from_atom(Atom::point(int(2))),
                RepSet::from_atom(Atom::point(int(3))),
            ],
            singletons_of: None,
        };
        let id = countable_additivity(&g, &parts).unwrap();
        assert!(id.holds && id.right == HPair::new(one(), int(1)));
    }

    #[test]
    fn monotone_examples() {
        let f = f1(Atom::point(int(0)), Expr::Const(int(1)));
        let g = f1(iv(int(0), int(1)), Expr::Const(int(1)));
        assert!(monotone_compare(&f, &g, &Domain::All).unwrap().holds);
        let neg = f1(iv(int(0), int(1)), Expr::Const(int(-1)));
        assert!(matches!(
            monotone_compare(&neg, &f, &Domain::All),
            Err(HError::OrderNotVerified(_))
        ));
        let x = f1(iv(int(0), int(1)), Expr::Poly(Poly::x()));
        let x2 = f1(iv(int(0), int(1)), Expr::Poly(Poly::x().scale(&int(2))));
        let r = monotone_compare(&x, &x2, &Domain::All).unwrap();
        assert!(r.holds && r.integral_g == HPair::new(one(), int(1)));
    }
}
