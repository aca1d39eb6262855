//! Numerical cross-checks that share only the atom types with the engine:
//! structural box covers, quadrature with error bounds, and brute-force
//! enumeration.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, HError, Result};
use crate::hintegral::{Expr, PiecewiseFunction};
use crate::hvalue::{CoefficientSeries, Dimension, ExtReal, HPair};
use crate::num::{Ball, Rational};
use crate::setalg::{Atom, AtomKind, RepSet, SeqSpec};

/// Largest enumeration the brute-force paths accept.
pub const BRUTE_LIMIT: usize = 1000;
/// Deepest cover level.
pub const MAX_DEPTH: u32 = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverReport {
    pub depth: u32,
    pub box_count: u128,
    pub box_size: Rational,
    /// `sum diam^d` over the cover, when a dimension was given.
    pub premeasure: Option<Ball>,
}

/// One family of equal boxes.
struct Boxes {
    count: u128,
    size: f64,
}

fn third_pow(k: u32) -> Rational {
    Rational::new(One::one(), num_bigint::BigInt::from(3u8).pow(k))
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Cells `floor(x / delta)` hit by a monotone sequence.
fn seq_cells(s: &SeqSpec, delta: &Rational) -> Result<u128> {
    let cell = |x: &Rational| (x / delta).floor().to_integer();
    let mut cells = BTreeSet::new();
    let mut n = s.start;
    loop {
        let (x, next) = (s.term(n), s.term(n + 1));
        cells.insert(cell(&x));
        if (&x - &next).abs() < *delta {
            // gaps only shrink from here, so no cell toward the limit is skipped
            let (a, b) = (cell(&x), cell(s.limit()));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let tail = (&hi - &lo + 1u8)
                .to_u128()
                .ok_or(HError::TooLarge(usize::MAX))?;
            let extra = cells.iter().filter(|c| **c < lo || **c > hi).count() as u128;
            return Ok(tail + extra);
        }
        n += 1;
        if cells.len() > 1 << 22 {
            return Err(HError::TooLarge(cells.len()));
        }
    }
}

fn atom_boxes(a: &Atom, k: u32) -> Result<Boxes> {
    let delta = third_pow(k);
    Ok(match &a.kind {
        AtomKind::Points(p) => Boxes {
            count: p.len() as u128,
            size: f(&delta),
        },
        AtomKind::Interval { lo, hi } => {
            let n = ((hi - lo) / &delta).ceil().to_integer();
            Boxes {
                count: n.to_u128().ok_or(HError::TooLarge(usize::MAX))?,
                size: f(&delta),
            }
        }
        AtomKind::Cantor { s, .. } => {
            // construction level whose intervals have length at most delta
            let mut m = 0u32;
            let mut len = s.abs();
            while len > delta {
                len /= Rational::from_integer(3.into());
                m += 1;
            }
            Boxes {
                count: 1u128 << m.min(127),
                size: f(&len),
            }
        }
        AtomKind::Seq(s) => Boxes {
            count: seq_cells(s, &delta)?,
            size: f(&delta),
        },
    })
}

fn cover(s: &RepSet, k: u32, d: Option<f64>) -> Result<CoverReport> {
    if k > MAX_DEPTH {
        return Err(invalid(format!("depth {k} exceeds {MAX_DEPTH}")));
    }
    if s.atoms().is_empty() {
        return Err(invalid("cannot cover the empty set"));
    }
    let mut count = 0u128;
    let mut sum = 0.0f64;
    for a in s.atoms() {
        let b = atom_boxes(a, k)?;
        count += b.count;
        if let Some(d) = d {
            sum += b.count as f64 * b.size.powf(d);
        }
    }
    let premeasure = d.map(|_| {
        Ball::new(
            sum,
            sum * 64.0 * f64::EPSILON * (1.0 + s.atoms().len() as f64),
        )
    });
    Ok(CoverReport {
        depth: k,
        box_count: count,
        box_size: third_pow(k),
        premeasure,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxDimEstimate {
    pub slope: Ball,
    pub reports: Vec<CoverReport>,
}

/// Least-squares slope of `log N(delta)` against `log(1/delta)`, with
/// `delta = 3^-k` for each depth `k`.
pub fn box_dim_estimate(s: &RepSet, depths: &[u32]) -> Result<BoxDimEstimate> {
    let distinct: BTreeSet<u32> = depths.iter().copied().collect();
    if distinct.len() < 2 {
        return Err(invalid("box counting needs at least two depths"));
    }
    let reports: Vec<CoverReport> = distinct
        .iter()
        .map(|&k| cover(s, k, None))
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = distinct.iter().map(|&k| k as f64 * 3f64.ln()).collect();
    let ys: Vec<f64> = reports.iter().map(|r| (r.box_count as f64).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(BoxDimEstimate {
        slope: Ball::new(slope, 1e-13 * (1.0 + slope.abs())),
        reports,
    })
}

/// `sum diam^d` over the depth-`k` structural cover.
pub fn premeasure_estimate(s: &RepSet, d: &Dimension, depth: u32) -> Result<CoverReport> {
    cover(s, depth, Some(d.to_f64()))
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// Bound on `sum |c_i| i (i-1) r^(i-2)` and `sum |c_i| r^i` for `|x| <= r`.
fn bounds(c: &[f64], r: f64) -> (f64, f64) {
    let second = c
        .iter()
        .enumerate()
        .skip(2)
        .map(|(i, a)| a.abs() * (i * (i - 1)) as f64 * r.powi(i as i32 - 2))
        .sum();
    let value = c
        .iter()
        .enumerate()
        .map(|(i, a)| a.abs() * r.powi(i as i32))
        .sum();
    (second, value)
}

/// Composite midpoint rule for `int_lo^hi f dx` with `n` panels; the ball
/// encloses the exact value.
pub fn quadrature(fun: &PiecewiseFunction, lo: &Rational, hi: &Rational, n: u32) -> Result<Ball> {
    if lo >= hi || n == 0 {
        return Err(invalid("quadrature needs lo < hi and n > 0"));
    }
    let mut total = Ball::new(0.0, 0.0);
    for t in fun.terms() {
        let AtomKind::Interval { lo: a, hi: b } = &t.atom.kind else {
            continue;
        };
        let (a, b) = (a.max(lo).clone(), b.min(hi).clone());
        if a >= b {
            continue;
        }
        let coeffs: Vec<f64> = match &t.expr {
            Expr::Const(c) => vec![f(c)],
            Expr::Poly(p) => p.coeffs().iter().map(f).collect(),
            Expr::Series(_) => unreachable!("series live on sequence atoms"),
        };
        let (af, bf) = (f(&a), f(&b));
        let h = (bf - af) / n as f64;
        let sum: f64 = (0..n)
            .map(|i| horner(&coeffs, af + (i as f64 + 0.5) * h))
            .sum();
        let r = af.abs().max(bf.abs());
        let (second, value) = bounds(&coeffs, r);
        let truncation = (bf - af) * h * h * second / 24.0;
        let rounding =
            (bf - af) * value * (n as f64 + coeffs.len() as f64 + 8.0) * 2.0 * f64::EPSILON;
        total = total.add(&Ball::new(sum * h, truncation + rounding));
    }
    Ok(total)
}

/// Inputs for direct recomputation.
#[derive(Clone, Debug, PartialEq)]
pub enum BruteOp {
    /// Sum of finitely many pairs.
    PairSum(Vec<HPair>),
    /// First `terms` partial sum of a coefficient series.
    SeriesPrefix(CoefficientSeries, usize),
    /// Integral of a function supported on finitely many points.
    PointIntegral(PiecewiseFunction),
}

#[derive(Clone, Debug, PartialEq)]
pub enum BruteValue {
    Pair(HPair),
    Exact(Rational),
}

fn series_prefix(c: &CoefficientSeries, terms: usize) -> Result<Rational> {
    let mut s = Rational::zero();
    match c {
        CoefficientSeries::FiniteList(v) => s = v.iter().take(terms).fold(s, |acc, x| acc + x),
        CoefficientSeries::Geometric { a, r } => {
            let mut t = a.clone();
            for _ in 0..terms {
                s += &t;
                t *= r;
            }
        }
        CoefficientSeries::PSeries { c, p } => {
            let p = p
                .to_integer()
                .to_u32()
                .filter(|_| p.is_integer())
                .ok_or_else(|| invalid("integer exponent needed"))?;
            for n in 1..=terms {
                s += c / Rational::from_integer(num_bigint::BigInt::from(n).pow(p));
            }
        }
    }
    Ok(s)
}

fn point_value(e: &Expr) -> Result<Rational> {
    match e {
        Expr::Const(c) => Ok(c.clone()),
        _ => Err(invalid("point masses carry constants")),
    }
}

/// Recomputes sums and dimension-0 integrals by direct loops.
pub fn brute_recompute(op: &BruteOp) -> Result<BruteValue> {
    match op {
        BruteOp::PairSum(pairs) => {
            if pairs.len() > BRUTE_LIMIT {
                return Err(HError::TooLarge(pairs.len()));
            }
            let top = pairs.iter().map(|p| p.d.to_f64()).fold(0.0f64, f64::max);
            let mut d = Dimension::zero();
            let mut m = ExtReal::zero();
            for p in pairs.iter().filter(|p| (p.d.to_f64() - top).abs() < 1e-12) {
                d = p.d.clone();
                m = match (&m, &p.m) {
                    (ExtReal::PosInf, ExtReal::NegInf) | (ExtReal::NegInf, ExtReal::PosInf) => {
                        return Err(HError::UndefinedSum(d.to_string()))
                    }
                    (ExtReal::PosInf, _) | (_, ExtReal::PosInf) => ExtReal::PosInf,
                    (ExtReal::NegInf, _) | (_, ExtReal::NegInf) => ExtReal::NegInf,
                    (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
                    _ => return Err(invalid("brute sums need exact measures")),
                };
            }
            Ok(BruteValue::Pair(HPair { d, m }))
        }
        BruteOp::SeriesPrefix(c, terms) => {
            if *terms > BRUTE_LIMIT {
                return Err(HError::TooLarge(*terms));
            }
            Ok(BruteValue::Exact(series_prefix(c, *terms)?))
        }
        BruteOp::PointIntegral(fun) => {
            let mut seen = BTreeSet::new();
            let mut m = Rational::zero();
            for (x, v) in fun.points() {
                seen.insert(x.clone());
                m += v;
            }
            for t in fun.terms() {
                let AtomKind::Points(p) = &t.atom.kind else {
                    return Err(invalid(format!(
                        "atom {} is not a finite point set",
                        t.atom
                    )));
                };
                let v = point_value(&t.expr)?;
                for x in p.iter().filter(|x| !t.atom.deletions.contains(x)) {
                    if seen.insert(x.clone()) {
                        m += &v;
                    }
                }
                if seen.len() > BRUTE_LIMIT {
                    return Err(HError::TooLarge(seen.len()));
                }
            }
            let nonzero = fun.points().values().any(|v| !v.is_zero())
                || fun.terms().iter().any(|t| !t.expr.is_zero());
            let d = Dimension::zero();
            Ok(BruteValue::Pair(if nonzero {
                HPair::new(d, m)
            } else {
                HPair::zero()
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};
    use crate::setalg::unit_interval;

    fn cantor() -> RepSet {
        RepSet::from_atom(Atom::cantor(int(0), int(1)).unwrap())
    }

    #[test]
    fn cantor_counts_are_exact() {
        let depths: Vec<u32> = (1..=20).collect();
        let e = box_dim_estimate(&cantor(), &depths).unwrap();
        assert_eq!(e.reports[4].box_count, 32);
        assert!((e.slope.mid - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        for k in [1, 7, 20] {
            let p = premeasure_estimate(&cantor(), &Dimension::cantor(), k)
                .unwrap()
                .premeasure
                .unwrap();
            assert!(p.contains(1.0) || (p.mid - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_and_points() {
        let depths: Vec<u32> = (1..=20).collect();
        assert!(
            (box_dim_estimate(&unit_interval(), &depths)
                .unwrap()
                .slope
                .mid
                - 1.0)
                .abs()
                < 1e-3
        );
        let five = RepSet::from_atom(Atom::points((1..=5).map(int)));
        assert!(box_dim_estimate(&five, &depths).unwrap().slope.mid.abs() < 1e-3);
        let p = premeasure_estimate(&unit_interval(), &Dimension::one(), 9)
            .unwrap()
            .premeasure
            .unwrap();
        assert!((p.mid - 1.0).abs() < 1e-9);
        let half = Dimension::from_rational(rat(1, 2));
        let p = premeasure_estimate(&unit_interval(), &half, 10)
            .unwrap()
            .premeasure
            .unwrap();
        assert!((p.mid - 3f64.powi(5)).abs() < 1e-6);
    }

    #[test]
    fn sequences_report_box_dimension() {
        let depths: Vec<u32> = (6..=14).collect();
        let g = RepSet::from_atom(Atom::seq(
            SeqSpec::geometric(int(0), int(1), rat(1, 2)).unwrap(),
        ));
        assert!(box_dim_estimate(&g, &depths).unwrap().slope.mid.abs() < 0.15);
        let h = RepSet::from_atom(Atom::seq(SeqSpec::harmonic(int(0), int(1)).unwrap()));
        assert!((box_dim_estimate(&h, &depths).unwrap().slope.mid - 0.5).abs() < 0.05);
    }

    #[test]
    fn quadrature_encloses() {
        let x = PiecewiseFunction::new(
            vec![(
                Atom::interval(int(0), int(1)).unwrap(),
                Expr::Poly(crate::poly::Poly::x()),
            )],
            crate::hintegral::Domain::All,
        )
        .unwrap();
        let q = quadrature(&x, &int(0), &int(1), 1000).unwrap();
        assert!(q.contains(0.5));
        let sq = crate::poly::Poly::x().mul(&crate::poly::Poly::x());
        let x2 = PiecewiseFunction::new(
            vec![(Atom::interval(int(-1), int(1)).unwrap(), Expr::Poly(sq))],
            crate::hintegral::Domain::All,
        )
        .unwrap();
        let q = quadrature(&x2, &int(-1), &int(1), 1000).unwrap();
        assert!(q.contains(2.0 / 3.0) && q.rad < 1e-6);
        let c = PiecewiseFunction::indicator_scaled(&unit_interval(), int(3));
        assert!(quadrature(&c, &int(-2), &int(2), 10).unwrap().contains(3.0));
    }

    #[test]
    fn brute_paths() {
        let g = CoefficientSeries::geometric(rat(1, 2), rat(1, 2)).unwrap();
        let BruteValue::Exact(s) = brute_recompute(&BruteOp::SeriesPrefix(g, 1000)).unwrap() else {
            panic!()
        };
        let gap = Rational::one() - s;
        assert!(
            gap.is_positive()
                && gap <= Rational::new(One::one(), num_bigint::BigInt::from(2u8).pow(997u32))
        );
        assert_eq!(
            brute_recompute(&BruteOp::PairSum(vec![])).unwrap(),
            BruteValue::Pair(HPair::zero())
        );
        let f = PiecewiseFunction::new(
            vec![(Atom::points([int(1), int(2)]), Expr::Const(rat(3, 2)))],
            crate::hintegral::Domain::All,
        )
        .unwrap();
        assert_eq!(
            brute_recompute(&BruteOp::PointIntegral(f)).unwrap(),
            BruteValue::Pair(HPair::new(Dimension::zero(), int(3)))
        );
        assert!(matches!(
            brute_recompute(&BruteOp::SeriesPrefix(
                CoefficientSeries::FiniteList(vec![]),
                1001
            )),
            Err(HError::TooLarge(_))
        ));
    }
}
