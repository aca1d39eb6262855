use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::{same, SuiteReport};
use crate::deficiency::{
    convex_hull, defi_continuity_cluster, defi_continuity_dist, defi_continuity_osc, defi_convex,
    defi_even, Hull, LineFunction, PlanarAtom, PlanarSet,
};
use crate::error::Result;
use crate::gen;
use crate::hintegral::{Domain, Expr, PiecewiseFunction, SeriesExpr};
use crate::hvalue::{CoefficientSeries, Dimension, HPair};
use crate::metrics::d_H;
use crate::num::{int, rat, to_f64, Ball, Rational};
use crate::oracle::{box_dim_estimate, premeasure_estimate, quadrature};
use crate::poly::Poly;
use crate::setalg::{hmeasure, Atom, RepSet, SeqSpec};

fn cantor_dim() -> f64 {
    2f64.ln() / 3f64.ln()
}

/// Exact measure of the unit Cantor set against its box-counting and
/// premeasure estimates, then the scaling law on random copies.
pub fn fractal(seed: u64, cases: usize) -> SuiteReport {
    let mut r = SuiteReport::new("fractal");
    let c = RepSet::from_atom(Atom::cantor(int(0), int(1)).expect("unit Cantor set"));
    let dim = Dimension::cantor();
    r.pair_row(
        "Cantor set measure",
        &HPair::new(dim.clone(), int(1)),
        Ok(hmeasure(&c)),
    );

    let depths: Vec<u32> = (1..=20).collect();
    let slope = box_dim_estimate(&c, &depths).map(|e| e.slope.mid);
    r.row(
        "box-count slope, depths 1..20",
        format!("{:.15}", cantor_dim()),
        slope
            .as_ref()
            .map(|s| format!("{s:.15}"))
            .map_err(Clone::clone),
        |_| {
            slope
                .as_ref()
                .is_ok_and(|s| (s - cantor_dim()).abs() < 1e-12)
        },
    );
    for k in depths {
        let p =
            premeasure_estimate(&c, &dim, k).map(|rep| rep.premeasure.expect("dimension given"));
        r.check(
            format!("premeasure at depth {k} is 1"),
            p.map(|b| b.close_to(&Ball::new(1.0, 0.0), 1e-12)),
        );
    }

    let mut g = gen::rng(seed);
    for i in 0..cases {
        let s = gen::positive(&mut g, 200, 60);
        let s = if g.gen_bool(0.5) { -s } else { s };
        let t = gen::rational(&mut g, 20, 8);
        let s_f = s.to_f64().expect("finite").abs();
        let expected = s_f.powf(cantor_dim());
        let got = Atom::cantor(t.clone(), s.clone()).map(|a| hmeasure(&RepSet::from_atom(a)));
        r.check(
            format!("#{i} scaling t = {t}, s = {s}"),
            got.map(|p| {
                p.d.to_f64() == cantor_dim()
                    && (p.m.to_f64() - expected).abs() <= 1e-9 * expected.max(1.0)
            }),
        );
    }
    r
}

fn line(pieces: Vec<(Atom, Expr)>) -> PiecewiseFunction {
    PiecewiseFunction::new(pieces, Domain::All).expect("disjoint pieces")
}

fn unit() -> Atom {
    Atom::interval(int(0), int(1)).expect("interval")
}

fn step() -> LineFunction {
    LineFunction::new(
        line(vec![(unit(), Expr::Const(int(1)))]),
        None,
        Some((int(1), Poly::constant(int(1)))),
    )
    .expect("step")
}

fn spikes() -> LineFunction {
    let s = SeriesExpr::single(CoefficientSeries::geometric(rat(1, 2), rat(1, 2)).expect("series"))
        .expect("series");
    line(vec![(
        Atom::seq(SeqSpec::harmonic(int(0), int(1)).expect("seq")),
        Expr::Series(s),
    )])
    .into()
}

fn pt(x: i64, y: i64) -> (Rational, Rational) {
    (int(x), int(y))
}

/// Continuous functions on the line.
fn continuous_controls() -> Vec<(&'static str, LineFunction)> {
    let x = || Some((int(0), Poly::x()));
    vec![
        ("zero function", PiecewiseFunction::zero().into()),
        (
            "identity",
            LineFunction::new(PiecewiseFunction::zero(), x(), x()).expect("identity"),
        ),
    ]
}

fn even_controls() -> Vec<(&'static str, PiecewiseFunction)> {
    let sym = || Atom::interval(int(-1), int(1)).expect("interval");
    let pts = Atom::points([int(-2), int(2)]);
    vec![
        (
            "x^2 on [-1,1]",
            line(vec![(sym(), Expr::Poly(Poly::x().mul(&Poly::x())))]),
        ),
        (
            "indicator of [-1,1]",
            PiecewiseFunction::indicator(&RepSet::from_atom(sym())),
        ),
        ("3 on {-2,2}", line(vec![(pts, Expr::Const(int(3)))])),
    ]
}

fn convex_controls() -> Vec<(&'static str, PlanarSet)> {
    let square = PlanarAtom::Polygon(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]);
    vec![
        ("unit square", PlanarSet::new(vec![square]).expect("square")),
        (
            "segment",
            PlanarSet::new(vec![PlanarAtom::Segment(pt(0, 0), pt(3, 4))]).expect("segment"),
        ),
        (
            "single point",
            PlanarSet::new(vec![PlanarAtom::Points(vec![pt(2, 2)])]).expect("point"),
        ),
    ]
}

/// Shoelace area in floating point.
fn shoelace(v: &[(f64, f64)]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| v[i].0 * v[(i + 1) % n].1 - v[(i + 1) % n].0 * v[i].1)
        .sum::<f64>()
        .abs()
        / 2.0
}

/// `(H) int |f(x) - f(-x)|` over `[-w, w]` by quadrature.
fn even_quadrature(f: &PiecewiseFunction, w: i64) -> Result<Ball> {
    quadrature(
        &f.sub(&f.reflect(&Rational::zero()))?.abs()?,
        &int(-w),
        &int(w),
        1 << 12,
    )
}

/// Continuous piecewise-linear ramp: 0 outside `[-w, 1 + w]`, 1 on `[0, 1]`.
fn ramp(w: &Rational) -> Result<PiecewiseFunction> {
    let open_at = |a: Atom, x: Rational| a.without([x].iter()).expect("nonempty interval");
    let up = Poly::new(vec![Rational::one(), w.recip()]);
    let down = Poly::new(vec![(Rational::one() + w) / w, -w.recip()]);
    PiecewiseFunction::new(
        vec![
            (
                open_at(Atom::interval(-w.clone(), int(0))?, int(0)),
                Expr::Poly(up),
            ),
            (unit(), Expr::Const(int(1))),
            (
                open_at(Atom::interval(int(1), Rational::one() + w)?, int(1)),
                Expr::Poly(down),
            ),
        ],
        Domain::All,
    )
}

/// Continuous competitors to the indicator of `[0, 1]` never get below the
/// closed form `(1, 0)`, and approach it as the ramps narrow.
fn dist_competitors(r: &mut SuiteReport) {
    let chi = PiecewiseFunction::indicator(&RepSet::from_atom(unit()));
    r.pair_row(
        "indicator of [0,1]: distance to continuous",
        &p1(0),
        defi_continuity_dist(&chi.clone().into()),
    );
    for w in [int(1), rat(1, 2), rat(1, 10), rat(1, 1000)] {
        let label = format!("ramp of width {w}");
        let case = || -> Result<bool> {
            let g = ramp(&w)?;
            let gap = d_H(&chi, &g, &Domain::All)?.value;
            let quad = quadrature(
                &chi.sub(&g)?.abs()?,
                &-w.clone(),
                &(Rational::one() + &w),
                1 << 12,
            )?;
            Ok(gap.try_cmp(&p1(0))?.is_gt()
                && same(&gap, &HPair::new(Dimension::one(), w.clone()))
                && quad.close_to(&Ball::new(to_f64(&w), 0.0), 1e-6))
        };
        r.check(label, case());
    }
}

fn p1(m: i64) -> HPair {
    HPair::new(Dimension::one(), int(m))
}

/// Every deficiency on its reference inputs and on controls that must sit at
/// the minimum.
pub fn deficiency_battery() -> SuiteReport {
    let mut r = SuiteReport::new("deficiency");
    let p = |d: Dimension, m: i64| HPair::new(d, int(m));
    r.pair_row(
        "step: oscillation",
        &p(Dimension::zero(), 1),
        defi_continuity_osc(&step()),
    );
    r.pair_row(
        "step: distance to continuous",
        &p(Dimension::one(), 0),
        defi_continuity_dist(&step()),
    );
    r.pair_row(
        "step: cluster set",
        &p(Dimension::zero(), 2),
        defi_continuity_cluster(&step()),
    );
    r.pair_row(
        "2^-n at 1/n: oscillation",
        &p(Dimension::zero(), 1),
        defi_continuity_osc(&spikes()),
    );

    dist_competitors(&mut r);

    let x = line(vec![(unit(), Expr::Poly(Poly::x()))]);
    r.pair_row(
        "x on [0,1]: evenness",
        &p(Dimension::one(), 1),
        defi_even(&x),
    );
    r.check(
        "x on [0,1]: quadrature of |f - f(-x)|",
        even_quadrature(&x, 1).map(|b| b.close_to(&Ball::new(1.0, 0.0), 1e-6)),
    );

    let tri = PlanarSet::new(vec![PlanarAtom::Points(vec![pt(0, 0), pt(1, 0), pt(0, 1)])])
        .expect("triangle");
    r.pair_row(
        "three points: convexity",
        &HPair::new(Dimension::two(), rat(1, 2)),
        defi_convex(&tri),
    );
    let area = match convex_hull(&tri) {
        Hull::Polygon(v) => shoelace(
            &v.iter()
                .map(|(x, y)| (to_f64(x), to_f64(y)))
                .collect::<Vec<_>>(),
        ),
        _ => f64::NAN,
    };
    r.check("three points: hull area", Ok((area - 0.5).abs() < 1e-12));

    for (name, f) in continuous_controls() {
        r.pair_row(
            format!("{name}: oscillation"),
            &HPair::zero(),
            defi_continuity_osc(&f),
        );
        r.pair_row(
            format!("{name}: distance to continuous"),
            &HPair::zero(),
            defi_continuity_dist(&f),
        );
        r.pair_row(
            format!("{name}: cluster set"),
            &p(Dimension::zero(), 1),
            defi_continuity_cluster(&f),
        );
    }
    for (name, f) in even_controls() {
        r.pair_row(format!("{name}: evenness"), &HPair::zero(), defi_even(&f));
        r.check(
            format!("{name}: quadrature of |f - f(-x)|"),
            even_quadrature(&f, 3).map(|b| b.contains(0.0) && b.rad < 1e-6),
        );
    }
    for (name, h) in convex_controls() {
        r.pair_row(
            format!("{name}: convexity"),
            &HPair::zero(),
            defi_convex(&h),
        );
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractal_checks_pass() {
        let rep = fractal(3, 20);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn battery_passes() {
        let rep = deficiency_battery();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn shoelace_of_unit_square() {
        assert_eq!(
            shoelace(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
            1.0
        );
    }
}
