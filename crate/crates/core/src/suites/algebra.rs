use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{same, SuiteReport};
use crate::error::{HError, Result};
use crate::gen::{self, Gen};
use crate::hintegral::{
    beppo_levi_limit, h_integral, monotone_compare, ChainRule, Domain, Expr, PiecewiseFunction,
};
use crate::hvalue::{
    hpair_series, hpair_series_climbing, hpair_sum, hseq_liminf, hseq_limit, hseq_limsup,
    CoefficientSeries, Dimension, ExtReal, HPair, HSeq, TailRule,
};
use crate::num::{int, rat, Rational};
use crate::setalg::{Atom, RepSet};

fn p(d: Dimension, m: Rational) -> HPair {
    HPair::new(d, m)
}

fn on(atom: Atom, c: Rational) -> Result<PiecewiseFunction> {
    PiecewiseFunction::new(vec![(atom, Expr::Const(c))], Domain::All)
}

fn shrinking(n: i64) -> Result<PiecewiseFunction> {
    on(Atom::interval(int(0), rat(1, n))?, int(-1))
}

/// The fixed regression table of worked examples.
pub fn worked_examples() -> SuiteReport {
    let mut r = SuiteReport::new("paper-examples");
    let (zero, one) = (Dimension::zero(), Dimension::one());
    let all = Domain::All;

    r.pair_row(
        "lower dimension absorbed",
        &p(one.clone(), int(-2)),
        p(zero.clone(), int(5)).add(&p(one.clone(), int(-2))),
    );
    r.pair_row("empty sum", &HPair::zero(), hpair_sum(&[]));

    let unit = || Atom::interval(int(0), int(1));
    let f = on(unit().unwrap(), int(1)).unwrap();
    let g = on(unit().unwrap(), int(-1)).unwrap();
    r.pair_row("1 on [0,1]", &p(one.clone(), int(1)), h_integral(&f, &all));
    r.pair_row(
        "-1 on [0,1]",
        &p(one.clone(), int(-1)),
        h_integral(&g, &all),
    );
    r.pair_row(
        "integral of (1) + (-1)",
        &HPair::zero(),
        f.add(&g).and_then(|s| h_integral(&s, &all)),
    );
    r.pair_row(
        "sum of integrals of 1 and -1",
        &p(one.clone(), int(0)),
        h_integral(&f, &all).and_then(|a| a.add(&h_integral(&g, &all)?)),
    );

    let chi0 = on(Atom::point(int(0)), int(1)).unwrap();
    r.pair_row(
        "indicator of {0}",
        &p(zero.clone(), int(1)),
        h_integral(&chi0, &all),
    );
    let rejected = match monotone_compare(&g, &chi0, &all) {
        Err(HError::OrderNotVerified(_)) => Ok(String::from("rejected")),
        Err(e) => Err(e),
        Ok(m) => Ok(format!("accepted ({} vs {})", m.integral_f, m.integral_g)),
    };
    r.row(
        "-1 <= chi{0} fed to monotone comparison",
        "rejected",
        rejected,
        |a| a == "rejected",
    );

    let mut bad = vec![];
    for n in 1..=1000 {
        let want = p(one.clone(), rat(-1, n));
        match shrinking(n).and_then(|f| h_integral(&f, &all)) {
            Ok(got) if got == want => {}
            Ok(got) => bad.push(format!("n={n}: {got}")),
            Err(e) => bad.push(format!("n={n}: {e}")),
        }
    }
    r.row(
        "-chi[0,1/n], n = 1..1000",
        "(1, -1/n)",
        Ok(if bad.is_empty() {
            String::from("(1, -1/n)")
        } else {
            bad.join("; ")
        }),
        |_| bad.is_empty(),
    );
    let minus_chi0 = on(Atom::point(int(0)), int(-1)).unwrap();
    r.pair_row(
        "pointwise limit -chi{0}",
        &p(zero.clone(), int(-1)),
        h_integral(&minus_chi0, &all),
    );
    let e1 = HSeq::new(
        vec![],
        TailRule::VanishingMeasure {
            d: one.clone(),
            limit: int(0),
            coefficients: CoefficientSeries::pseries(int(-1), int(1)).unwrap(),
        },
    )
    .unwrap();
    r.pair_row(
        "liminf of (1, -1/n)",
        &p(one.clone(), int(0)),
        hseq_liminf(&e1),
    );
    r.pair_row(
        "limsup of (1, -1/n)",
        &p(one.clone(), int(0)),
        hseq_limsup(&e1),
    );
    match beppo_levi_limit(&[], &ChainRule::SignedShrinking { w: int(1) }) {
        Ok(b) => {
            r.pair_row(
                "signed chain: limit of integrals",
                &p(one.clone(), int(0)),
                Ok(b.limit.clone()),
            );
            r.pair_row(
                "signed chain: integral of limit",
                &p(zero.clone(), int(-1)),
                Ok(b.integral_of_limit.clone()),
            );
            let flagged = !b.agrees && !b.nonnegative;
            r.row(
                "signed chain flagged as counterexample",
                "flagged",
                Ok(if flagged { "flagged" } else { "not flagged" }.into()),
                |a| a == "flagged",
            );
        }
        Err(e) => r.check("signed chain", Err(e)),
    }

    let mut bad = vec![];
    for n in 1..=1000 {
        let want = p(one.clone(), rat(1, n));
        match shrinking(n).and_then(|f| h_integral(&f.scalar_mul(&int(-1)), &all)) {
            Ok(got) if got == want => {}
            Ok(got) => bad.push(format!("n={n}: {got}")),
            Err(e) => bad.push(format!("n={n}: {e}")),
        }
    }
    r.row(
        "chi[0,1/n] by scalar -1, n = 1..1000",
        "(1, 1/n)",
        Ok(if bad.is_empty() {
            String::from("(1, 1/n)")
        } else {
            bad.join("; ")
        }),
        |_| bad.is_empty(),
    );
    r.pair_row(
        "chi{0} by scalar -1",
        &p(zero.clone(), int(1)),
        h_integral(&minus_chi0.scalar_mul(&int(-1)), &all),
    );

    let climb = HSeq::new(
        vec![],
        TailRule::DimensionClimb {
            limit: one.clone(),
            gaps: CoefficientSeries::pseries(int(1), int(1)).unwrap(),
            base: int(3),
            coefficients: CoefficientSeries::geometric(int(1), rat(1, 2)).unwrap(),
        },
    )
    .unwrap();
    r.pair_row(
        "(1 - 1/n, bounded) converges",
        &p(one, int(0)),
        hseq_limit(&climb),
    );
    let cantor = RepSet::from_atom(Atom::cantor(int(0), int(1)).unwrap());
    r.pair_row(
        "indicator of the Cantor set",
        &p(Dimension::cantor(), int(1)),
        crate::hintegral::indicator_bridge(&cantor),
    );
    r
}

/// Monoid and order laws of pair addition on seeded triples.
pub fn pair_algebra(seed: u64, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("pair-algebra");
    let mut g = gen::rng(seed);
    for i in 0..cases {
        let (a, b, c) = (gen::pair(&mut g), gen::pair(&mut g), gen::pair(&mut g));
        let t = format!("#{i} a={a} b={b} c={c}");
        r.check(
            format!("{t} commutativity"),
            (|| Ok(same(&a.add(&b)?, &b.add(&a)?)))(),
        );
        r.check(
            format!("{t} associativity"),
            (|| Ok(same(&a.add(&b)?.add(&c)?, &a.add(&b.add(&c)?)?)))(),
        );
        r.check(
            format!("{t} identity"),
            (|| Ok(same(&a.add(&HPair::zero())?, &a) && same(&HPair::zero().add(&a)?, &a)))(),
        );
        r.check(
            format!("{t} totality"),
            (|| {
                let (ab, ba) = (a.try_cmp(&b)?, b.try_cmp(&a)?);
                let antisym = ab == ba.reverse() && (ab != Ordering::Equal || a == b);
                let trans = !(a.leq(&b)? && b.leq(&c)?) || a.leq(&c)?;
                Ok(antisym && trans && a.try_cmp(&a)? == Ordering::Equal)
            })(),
        );
        r.check(
            format!("{t} order compatibility"),
            (|| Ok(!a.leq(&b)? || a.add(&c)?.leq(&b.add(&c)?)?))(),
        );
    }
    r
}

fn catalog_dims() -> Vec<Dimension> {
    vec![
        Dimension::zero(),
        Dimension::from_rational(rat(1, 4)),
        Dimension::from_rational(rat(1, 2)),
        Dimension::cantor(),
        Dimension::from_rational(rat(3, 4)),
        Dimension::one(),
        Dimension::two(),
    ]
}

fn coefficient_series(g: &mut Gen) -> CoefficientSeries {
    match g.gen_range(0..10) {
        0..=3 => {
            let r = [
                rat(1, 2),
                rat(-1, 2),
                rat(1, 3),
                rat(2, 3),
                rat(-3, 4),
                rat(9, 10),
            ]
            .choose(g)
            .unwrap()
            .clone();
            CoefficientSeries::geometric(gen::rational(g, 9, 4), r).unwrap()
        }
        4..=6 => {
            CoefficientSeries::pseries(gen::rational(g, 5, 3), int(g.gen_range(2..=3))).unwrap()
        }
        7 | 8 => CoefficientSeries::FiniteList(
            (0..g.gen_range(1..=5))
                .map(|_| gen::rational(g, 7, 5))
                .collect(),
        ),
        _ => CoefficientSeries::pseries(if g.gen_bool(0.5) { int(1) } else { int(-2) }, int(1))
            .unwrap(),
    }
}

fn f64_of(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

/// `sum_{n <= big_n} c_n` in floating point, plus a bound on the rest.
fn float_sum(c: &CoefficientSeries, big_n: u64) -> (f64, f64) {
    match c {
        CoefficientSeries::FiniteList(v) => (v.iter().take(big_n as usize).map(f64_of).sum(), 0.0),
        CoefficientSeries::Geometric { a, r } => {
            let (a, r) = (f64_of(a), f64_of(r));
            let s: f64 = (0..big_n).map(|k| a * r.powi(k as i32)).sum();
            (s, a.abs() * r.abs().powi(big_n as i32) / (1.0 - r.abs()))
        }
        CoefficientSeries::PSeries { c, p } => {
            let (c, p) = (f64_of(c), f64_of(p));
            let s: f64 = (1..=big_n).map(|n| c / (n as f64).powf(p)).sum();
            let tail = if p > 1.0 {
                c.abs() * (big_n as f64).powf(1.0 - p) / (p - 1.0)
            } else {
                f64::INFINITY
            };
            (s, tail)
        }
    }
}

const TERMS: u64 = 20_000;

fn series_instance(g: &mut Gen) -> Result<bool> {
    let mut dims = catalog_dims();
    dims.shuffle(g);
    dims.truncate(g.gen_range(1..=3));
    let coeffs: Vec<CoefficientSeries> = dims.iter().map(|_| coefficient_series(g)).collect();
    let engine = hpair_series(&dims, &coeffs)?;
    let seq = HSeq::new(
        vec![],
        TailRule::PartialSums(dims.iter().cloned().zip(coeffs.iter().cloned()).collect()),
    )?;
    if !same(&hseq_limit(&seq)?, &engine) {
        return Ok(false);
    }
    // independent route: top dimension by float value, top series summed directly
    let top = (0..dims.len())
        .max_by(|&i, &j| dims[i].to_f64().total_cmp(&dims[j].to_f64()))
        .unwrap();
    if engine.d.try_cmp(&dims[top])? != Ordering::Equal {
        return Ok(false);
    }
    let (s, tail) = float_sum(&coeffs[top], TERMS);
    let measure_ok = match &engine.m {
        ExtReal::PosInf | ExtReal::NegInf => {
            let CoefficientSeries::PSeries { c, p } = &coeffs[top] else {
                return Ok(false);
            };
            // harmonic partial sums exceed c ln(N + 1) in absolute value
            let grows = s.abs() >= f64_of(c).abs() * ((TERMS + 1) as f64).ln();
            *p == int(1) && grows && (engine.m == ExtReal::PosInf) == c.is_positive()
        }
        m => (m.to_f64() - s).abs() <= tail + 1e-9 * (1.0 + s.abs()),
    };
    // engine partial sums against float partial sums of the round robin
    let k = dims.len() as u64;
    let mut partial_ok = true;
    for n in [1, k, 7 * k + 1] {
        let term = seq.term(n)?;
        let seen = n.min(k) as usize;
        let top_seen = (0..seen)
            .max_by(|&i, &j| dims[i].to_f64().total_cmp(&dims[j].to_f64()))
            .unwrap();
        let count = (n - top_seen as u64).div_ceil(k);
        let (want, _) = float_sum(&coeffs[top_seen], count);
        partial_ok &= term.d.try_cmp(&dims[top_seen])? == Ordering::Equal
            && (term.m.to_f64() - want).abs() <= 1e-9 * (1.0 + want.abs());
    }
    Ok(measure_ok && partial_ok)
}

fn climb_instance(g: &mut Gen) -> Result<bool> {
    let limit = [
        Dimension::one(),
        Dimension::cantor(),
        Dimension::from_rational(rat(1, 2)),
    ]
    .choose(g)
    .unwrap()
    .clone();
    let gaps = CoefficientSeries::geometric(rat(1, 4), rat(1, g.gen_range(2..=3)))?;
    let coefficients = coefficient_series(g);
    let coefficients = match coefficients {
        CoefficientSeries::PSeries { p, .. } if p == int(1) => {
            CoefficientSeries::FiniteList(vec![int(1)])
        }
        c => c,
    };
    let base = gen::rational(g, 5, 2);
    let want = HPair::new(limit.clone(), int(0));
    let seq = HSeq::new(
        vec![],
        TailRule::DimensionClimb {
            limit: limit.clone(),
            gaps: gaps.clone(),
            base,
            coefficients,
        },
    )?;
    if !same(&hseq_limit(&seq)?, &want) || !same(&hpair_series_climbing(&limit, &gaps)?, &want) {
        return Ok(false);
    }
    // independent route: dimensions climb strictly and close the gap
    let CoefficientSeries::Geometric { a, r } = &gaps else {
        unreachable!()
    };
    let (a, r, d) = (f64_of(a), f64_of(r), limit.to_f64());
    for n in 1..=30u64 {
        let (dn, next) = (seq.term(n)?.d, seq.term(n + 1)?.d);
        let expect = d - a * r.powi(n as i32 - 1);
        if dn.try_cmp(&next)? != Ordering::Less || (dn.to_f64() - expect).abs() > 1e-12 {
            return Ok(false);
        }
    }
    Ok(a * r.powi(29) < 1e-8)
}

/// Pair series against directly summed partial sums, with one
/// dimension-climbing instance in every ten.
pub fn series_theorem(seed: u64, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("series-theorem");
    let mut g = gen::rng(seed);
    for i in 0..cases {
        if i % 10 == 0 {
            r.check(format!("#{i} dimension climb"), climb_instance(&mut g));
        } else {
            r.check(format!("#{i} catalog series"), series_instance(&mut g));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_table_passes() {
        let r = worked_examples();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn small_random_suites_pass() {
        let r = pair_algebra(3, 300);
        assert!(r.passed(), "{r}");
        let r = series_theorem(3, 30);
        assert!(r.passed(), "{r}");
    }
}
