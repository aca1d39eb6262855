use std::cmp::Ordering;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{same, SuiteReport};
use crate::error::{HError, Result};
use crate::gen::{self, slot, Gen};
use crate::hintegral::{
    additivity_over_region, beppo_levi_limit, countable_additivity, fatou_check, h_integral,
    monotone_compare, restrict_to_support, support, ChainRule, Domain, Expr, FatouSequence,
    Partition, PiecewiseFunction, SeriesExpr,
};
use crate::hvalue::{hseq_limit, CoefficientSeries, Dimension, ExtReal, HPair, HSeq, TailRule};
use crate::num::{int, rat, Rational};
use crate::setalg::{Atom, AtomKind, RepSet};

fn domain(g: &mut Gen) -> Domain {
    if g.gen_bool(0.3) {
        Domain::All
    } else {
        Domain::Set(gen::set(g, true))
    }
}

fn region(g: &mut Gen) -> Result<bool> {
    let f = gen::function(g, false);
    let (a, b) = (
        gen::set_in(g, &[0, 1], true),
        gen::set_in(g, &[2, 3, 4], true),
    );
    let r = additivity_over_region(&f, &a, &b)?;
    Ok(r.holds && same(&r.whole, &r.on_a.add(&r.on_b)?))
}

fn countable(g: &mut Gen) -> Result<bool> {
    let f = gen::function(g, false);
    let finite = vec![gen::set_in(g, &[0, 1], true), gen::set_in(g, &[2], true)];
    let singletons_of = g.gen_bool(0.6).then(|| {
        let k = g.gen_range(3..5);
        gen::seq_in(g, k)
    });
    Ok(countable_additivity(
        &f,
        &Partition {
            finite,
            singletons_of,
        },
    )?
    .holds)
}

fn linear_sum(g: &mut Gen) -> Result<bool> {
    let (f, h) = (gen::function(g, true), gen::function(g, true));
    let all = Domain::All;
    Ok(same(
        &h_integral(&f.add(&h)?, &all)?,
        &h_integral(&f, &all)?.add(&h_integral(&h, &all)?)?,
    ))
}

fn linear_scalar(g: &mut Gen) -> Result<bool> {
    let nonneg = g.gen_bool(0.5);
    let f = gen::function(g, nonneg);
    let c = gen::scalar(g);
    let i = h_integral(&f, &Domain::All)?;
    Ok(same(
        &h_integral(&f.scalar_mul(&c), &Domain::All)?,
        &HPair {
            d: i.d,
            m: i.m.scale(&c),
        },
    ))
}

fn monotone(g: &mut Gen) -> Result<bool> {
    let f = gen::function(g, true);
    let big = f.add(&gen::function(g, true))?;
    let k = domain(g);
    Ok(monotone_compare(&f, &big, &k)?.holds)
}

fn restriction(g: &mut Gen) -> Result<bool> {
    let f = gen::function(g, false);
    let k = domain(g);
    Ok(restrict_to_support(&f, &k)?.holds)
}

fn decomposition(g: &mut Gen) -> Result<bool> {
    let f = gen::function(g, false);
    let (pos, neg) = (f.pos_part()?, f.neg_part()?);
    let all = Domain::All;
    let sum = h_integral(&pos, &all)?.add(&h_integral(&neg, &all)?)?;
    Ok(pos.add(&neg)?.equivalent(&f)?
        && pos.is_nonneg()
        && neg.neg().is_nonneg()
        && same(&h_integral(&f, &all)?, &sum))
}

/// Values on points and sequences only: the integral sits at dimension 0
/// and equals the plain sum, whatever the summation order.
fn countable_support(g: &mut Gen) -> Result<bool> {
    let mut slots: Vec<i64> = (0..5).collect();
    slots.shuffle(g);
    let mut pieces = vec![];
    let mut point_values = vec![];
    let mut series_total = Rational::zero();
    for &k in &slots[..g.gen_range(1..=3)] {
        if g.gen_bool(0.5) {
            let n = g.gen_range(1..=4);
            let pts: Vec<Rational> = (0..n).map(|j| slot(k) + rat(j, 4)).collect();
            for x in pts {
                let v = gen::positive(g, 9, 4);
                point_values.push(v.clone());
                pieces.push((Atom::point(x), Expr::Const(v)));
            }
        } else {
            let spec = gen::seq_in(g, k);
            let (a, r) = (gen::positive(g, 5, 2), rat(1, g.gen_range(2..=4)));
            series_total += &a / (Rational::one() - &r);
            let s = SeriesExpr::single(CoefficientSeries::geometric(a, r)?)?;
            pieces.push((Atom::seq(spec), Expr::Series(s)));
        }
    }
    let f = PiecewiseFunction::new(pieces, Domain::All)?;
    let i = h_integral(&f, &Domain::All)?;
    let countable = support(&f)?
        .atoms()
        .iter()
        .all(|a| matches!(a.kind, AtomKind::Points(_) | AtomKind::Seq(_)));
    let mut sums_agree = true;
    for _ in 0..10 {
        point_values.shuffle(g);
        let total = point_values
            .iter()
            .fold(series_total.clone(), |acc, v| acc + v);
        sums_agree &= i == HPair::new(Dimension::zero(), total);
    }
    Ok(countable && sums_agree)
}

/// Integral laws, `cases` seeded draws each.
pub fn integral_laws(seed: u64, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("integral-laws");
    let mut g = gen::rng(seed);
    type Law = fn(&mut Gen) -> Result<bool>;
    // the flag marks laws that only hold where every integral exists
    let laws: [(&str, Law, bool); 8] = [
        ("region additivity", region, true),
        ("countable additivity", countable, true),
        ("nonnegative sum", linear_sum, false),
        ("scalar multiple", linear_scalar, false),
        ("monotonicity", monotone, false),
        ("support restriction", restriction, false),
        ("positive/negative parts", decomposition, true),
        ("countable support", countable_support, false),
    ];
    for (name, law, needs_existence) in laws {
        for i in 0..cases {
            let label = format!("{name} #{i}");
            if needs_existence {
                r.draw_defined(label, || law(&mut g));
            } else {
                r.draw(label, || law(&mut g));
            }
        }
    }
    r
}

/// A chain and the closed form of the integral of its limit.
fn chain(g: &mut Gen, kind: usize) -> Result<(Vec<PiecewiseFunction>, ChainRule, HPair)> {
    let k = g.gen_range(0..5);
    Ok(match kind {
        0 | 1 => {
            let a = slot(k) + rat(g.gen_range(0..4), 16);
            let b = slot(k) + int(1);
            let w = rat(1, g.gen_range(2..=4));
            let c = gen::positive(g, 6, 3);
            let want = HPair::new(Dimension::one(), &c * (&b - &a));
            let mut prefix = vec![];
            if kind == 1 {
                // point functions below the first interval term: dimension
                // climbs from 0 to 1 and then stays
                let mut pts = vec![];
                for j in 0..g.gen_range(1..=3) {
                    pts.push(a.clone() + rat(j, 32));
                    let v = &c * rat(j + 1, 4);
                    prefix.push(PiecewiseFunction::indicator_scaled(
                        &RepSet::from_atom(Atom::points(pts.clone())),
                        v,
                    ));
                }
            }
            let w = w.min(rat(1, 2) * (&b - &a) * int(prefix.len() as i64 + 1));
            (prefix, ChainRule::GrowingInterval { a, b, w, c }, want)
        }
        2 => {
            let spec = gen::seq_in(g, k);
            (
                vec![],
                ChainRule::GrowingPoints(spec),
                HPair {
                    d: Dimension::zero(),
                    m: ExtReal::PosInf,
                },
            )
        }
        _ => {
            let spec = gen::seq_in(g, k);
            let (a, r) = (gen::positive(g, 5, 2), rat(1, g.gen_range(2..=4)));
            let want = HPair::new(Dimension::zero(), &a / (Rational::one() - &r));
            (
                vec![],
                ChainRule::GrowingValues {
                    spec,
                    coefficients: CoefficientSeries::geometric(a, r)?,
                },
                want,
            )
        }
    })
}

fn chain_case(g: &mut Gen, kind: usize) -> Result<bool> {
    let (prefix, rule, want) = chain(g, kind)?;
    let r = beppo_levi_limit(&prefix, &rule)?;
    let dims_climb = kind == 1;
    let first_dim = r.integrals.term(1)?.d;
    let stabilized = r.integrals.term(prefix.len() as u64 + 1)?.d == r.limit.d;
    let branch_ok = if dims_climb {
        first_dim.try_cmp(&r.limit.d)? == Ordering::Less
    } else {
        first_dim == r.limit.d
    };
    Ok(r.agrees && r.nonnegative && same(&r.limit, &want) && stabilized && branch_ok)
}

/// Nondecreasing integral sequences whose dimensions climb strictly: the
/// order-topology limit is `(d, 0)` whatever the measures do.
fn climbing_case(g: &mut Gen) -> Result<bool> {
    let limit = [
        Dimension::one(),
        Dimension::cantor(),
        Dimension::from_rational(rat(1, 2)),
    ]
    .choose(g)
    .unwrap()
    .clone();
    let gaps = CoefficientSeries::geometric(rat(1, 4), rat(1, g.gen_range(2..=3)))?;
    let coefficients = CoefficientSeries::geometric(gen::positive(g, 5, 2), rat(1, 2))?;
    let s = HSeq::new(
        vec![],
        TailRule::DimensionClimb {
            limit: limit.clone(),
            gaps,
            base: int(0),
            coefficients,
        },
    )?;
    for n in 1..=20 {
        if !s.term(n)?.lt(&s.term(n + 1)?)? {
            return Ok(false);
        }
    }
    Ok(same(&hseq_limit(&s)?, &HPair::new(limit, int(0))))
}

/// Monotone convergence on seeded nonnegative chains, covering both the
/// stabilizing and the climbing branch, plus the signed counterexample.
pub fn beppo_levi(seed: u64, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("beppo-levi");
    let mut g = gen::rng(seed);
    for i in 0..cases {
        match i % 5 {
            4 => r.check(
                format!("#{i} strictly climbing dimensions"),
                climbing_case(&mut g),
            ),
            kind => r.check(format!("#{i} chain kind {kind}"), chain_case(&mut g, kind)),
        }
    }
    let signed = beppo_levi_limit(&[], &ChainRule::SignedShrinking { w: int(1) }).map(|b| {
        !b.agrees
            && !b.nonnegative
            && b.limit == HPair::new(Dimension::one(), int(0))
            && b.integral_of_limit == HPair::new(Dimension::zero(), int(-1))
    });
    r.check("signed shrinking chain reported as counterexample", signed);
    r
}

fn fatou_case(g: &mut Gen, kind: usize) -> Result<bool> {
    let (seq, liminf) = match kind {
        0 => {
            let w = gen::positive(g, 3, 2);
            (
                FatouSequence::Escaping { w: w.clone() },
                Some(HPair::new(Dimension::one(), w)),
            )
        }
        1 => (
            FatouSequence::Shrinking {
                w: gen::positive(g, 3, 2),
            },
            Some(HPair::new(Dimension::one(), int(0))),
        ),
        2 => (
            FatouSequence::MovingPoint,
            Some(HPair::new(Dimension::zero(), int(1))),
        ),
        3 => {
            let f = gen::function(g, true);
            let i = h_integral(&f, &Domain::All)?;
            (FatouSequence::Constant(f), Some(i))
        }
        _ => {
            let f = gen::function(g, true);
            (FatouSequence::Alternating(f.clone(), f), None)
        }
    };
    let r = fatou_check(&seq)?;
    Ok(
        r.holds
            && r.integral_of_limit.leq(&r.liminf)?
            && liminf.is_none_or(|l| same(&l, &r.liminf)),
    )
}

/// Lower semicontinuity on seeded nonnegative sequences.
pub fn fatou(seed: u64, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("fatou");
    let mut g = gen::rng(seed);
    for i in 0..cases {
        r.check(
            format!("#{i} sequence kind {}", i % 5),
            fatou_case(&mut g, i % 5),
        );
    }
    let a =
        PiecewiseFunction::indicator(&RepSet::from_atom(Atom::interval(int(0), int(1)).unwrap()));
    let b =
        PiecewiseFunction::indicator(&RepSet::from_atom(Atom::interval(int(1), int(2)).unwrap()));
    let refused = match fatou_check(&FatouSequence::Alternating(a, b)) {
        Err(HError::NoLimitFound(_)) => Ok(true),
        Err(e) => Err(e),
        Ok(_) => Ok(false),
    };
    r.check("alternating sequence without a limit is refused", refused);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for rep in [integral_laws(5, 20), beppo_levi(5, 20), fatou(5, 20)] {
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn climb_prefix_has_lower_dimension() {
        let mut g = gen::rng(9);
        let (prefix, ..) = chain(&mut g, 1).unwrap();
        assert!(!prefix.is_empty());
        assert!(h_integral(&prefix[0], &Domain::All).unwrap().d.is_zero());
    }
}
