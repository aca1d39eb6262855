use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{invalid, HError, Result};
use crate::hintegral::{h_integral, Domain, Expr, PiecewiseFunction};
use crate::hvalue::{Dimension, HPair};
use crate::num::{fmt_rational, Rational};
use crate::poly::Poly;
use crate::setalg::{Atom, AtomKind, RepSet};

/// A function on the whole line: `left` below `a`, `right` above `b`, and a
/// piecewise function on `[a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineFunction {
    core: PiecewiseFunction,
    left: Option<(Rational, Poly)>,
    right: Option<(Rational, Poly)>,
}

impl From<PiecewiseFunction> for LineFunction {
    fn from(core: PiecewiseFunction) -> Self {
        LineFunction {
            core,
            left: None,
            right: None,
        }
    }
}

impl LineFunction {
    pub fn new(
        core: PiecewiseFunction,
        left: Option<(Rational, Poly)>,
        right: Option<(Rational, Poly)>,
    ) -> Result<Self> {
        let mut xs: Vec<Rational> = core.points().keys().cloned().collect();
        for t in core.terms() {
            let (lo, hi) = t.atom.hull();
            xs.push(lo);
            xs.push(hi);
        }
        if let Some((a, _)) = &left {
            if xs.iter().any(|x| x < a) {
                return Err(invalid("core reaches below the left tail"));
            }
        }
        if let Some((b, _)) = &right {
            if xs.iter().any(|x| x > b) {
                return Err(invalid("core reaches above the right tail"));
            }
        }
        if let (Some((a, _)), Some((b, _))) = (&left, &right) {
            if a > b {
                return Err(invalid("tails overlap"));
            }
        }
        Ok(LineFunction { core, left, right })
    }

    pub fn core(&self) -> &PiecewiseFunction {
        &self.core
    }

    pub fn left(&self) -> Option<&(Rational, Poly)> {
        self.left.as_ref()
    }

    pub fn right(&self) -> Option<&(Rational, Poly)> {
        self.right.as_ref()
    }

    pub fn value_at(&self, x: &Rational) -> Rational {
        match (&self.left, &self.right) {
            (Some((a, p)), _) if x < a => p.eval(x),
            (_, Some((b, p))) if x > b => p.eval(x),
            _ => self.core.value_at(x),
        }
    }

    fn check_supported(&self) -> Result<()> {
        if self
            .core
            .terms()
            .iter()
            .any(|t| matches!(t.atom.kind, AtomKind::Cantor { .. }))
        {
            return Err(HError::NotSupported(String::from(
                "discontinuities on Cantor atoms",
            )));
        }
        Ok(())
    }

    /// Interval pieces with their polynomials, tails as open rays.
    fn cells(&self) -> Vec<(Option<Rational>, Option<Rational>, Poly)> {
        let mut out = vec![];
        if let Some((a, p)) = &self.left {
            out.push((None, Some(a.clone()), p.clone()));
        }
        if let Some((b, p)) = &self.right {
            out.push((Some(b.clone()), None, p.clone()));
        }
        for t in self.core.terms() {
            if let AtomKind::Interval { lo, hi } = &t.atom.kind {
                let p = t
                    .expr
                    .as_poly()
                    .expect("interval expressions are polynomial");
                out.push((Some(lo.clone()), Some(hi.clone()), p));
            }
        }
        out
    }

    /// `lim f(y)` as `y -> x` from below (`from_above = false`) or above,
    /// ignoring isolated points.
    fn background_limit(&self, x: &Rational, from_above: bool) -> Rational {
        for (lo, hi, p) in self.cells() {
            let inside = if from_above {
                lo.as_ref().is_none_or(|lo| lo <= x) && hi.as_ref().is_none_or(|hi| x < hi)
            } else {
                lo.as_ref().is_none_or(|lo| lo < x) && hi.as_ref().is_none_or(|hi| x <= hi)
            };
            if inside {
                return p.eval(x);
            }
        }
        Rational::zero()
    }

    /// Limits of values along sequence atoms accumulating at `x`.
    fn sequence_limits(&self, x: &Rational) -> Vec<Rational> {
        self.core
            .terms()
            .iter()
            .filter_map(|t| match (&t.atom.kind, &t.expr) {
                (AtomKind::Seq(s), e) if s.limit() == x => Some(match e {
                    Expr::Const(c) => c.clone(),
                    Expr::Series(s) => s.offset.clone(),
                    Expr::Poly(_) => unreachable!("expression kinds are checked at construction"),
                }),
                _ => None,
            })
            .collect()
    }

    /// Every point where the function may fail to be continuous, besides
    /// the points of sequence atoms.
    fn candidates(&self) -> BTreeSet<Rational> {
        let mut out: BTreeSet<Rational> = self.core.points().keys().cloned().collect();
        for (a, _) in self.left.iter().chain(self.right.iter()) {
            out.insert(a.clone());
        }
        for t in self.core.terms() {
            out.extend(t.atom.deletions.iter().cloned());
            match &t.atom.kind {
                AtomKind::Interval { lo, hi } => {
                    out.insert(lo.clone());
                    out.insert(hi.clone());
                }
                AtomKind::Points(p) => out.extend(p.iter().cloned()),
                AtomKind::Seq(s) => {
                    out.insert(s.limit().clone());
                }
                AtomKind::Cantor { .. } => {}
            }
        }
        out
    }

    /// Sequence points not among the candidates; the background vanishes
    /// there, so the function jumps by its value.
    fn spikes(&self, candidates: &BTreeSet<Rational>) -> Result<PiecewiseFunction> {
        let mut pieces = vec![];
        for t in self.core.terms() {
            if let AtomKind::Seq(_) = t.atom.kind {
                let special: Vec<&Rational> =
                    candidates.iter().filter(|x| t.atom.contains(x)).collect();
                if let Some(atom) = t.atom.without(special) {
                    pieces.push((atom, t.expr.clone()));
                }
            }
        }
        PiecewiseFunction::new(pieces, Domain::All)?.abs()
    }
}

impl fmt::Display for LineFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, p)) = &self.left {
            write!(f, "{p:?} on (-inf, {}); ", fmt_rational(a))?;
        }
        write!(f, "{}", self.core)?;
        if let Some((b, p)) = &self.right {
            write!(f, "; {p:?} on ({}, +inf)", fmt_rational(b))?;
        }
        Ok(())
    }
}

/// `Lambda_f(x)`: the value and every limit of `f` along sequences to `x`.
pub fn cluster_set(f: &LineFunction, x: &Rational) -> Result<RepSet> {
    f.check_supported()?;
    Ok(RepSet::from_atom(Atom::points(cluster_values(f, x))))
}

fn cluster_values(f: &LineFunction, x: &Rational) -> Vec<Rational> {
    let mut vals = vec![
        f.value_at(x),
        f.background_limit(x, false),
        f.background_limit(x, true),
    ];
    vals.extend(f.sequence_limits(x));
    vals
}

fn spread(vals: &[Rational]) -> Rational {
    let max = vals.iter().max().expect("nonempty");
    let min = vals.iter().min().expect("nonempty");
    max - min
}

/// `omega_f`: positive exactly at the discontinuities.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillationProfile {
    pub finite: BTreeMap<Rational, Rational>,
    pub countable: PiecewiseFunction,
}

impl OscillationProfile {
    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.countable.is_zero()
    }

    pub fn to_function(&self) -> Result<PiecewiseFunction> {
        let pts = PiecewiseFunction::new(
            self.finite
                .iter()
                .map(|(x, w)| (Atom::point(x.clone()), Expr::Const(w.clone())))
                .collect(),
            Domain::All,
        )?;
        pts.add(&self.countable)
    }

    pub fn at(&self, x: &Rational) -> Rational {
        self.finite
            .get(x)
            .cloned()
            .unwrap_or_else(|| self.countable.value_at(x))
    }
}

pub fn oscillation(f: &LineFunction) -> Result<OscillationProfile> {
    f.check_supported()?;
    let candidates = f.candidates();
    let finite = candidates
        .iter()
        .map(|x| (x.clone(), spread(&cluster_values(f, x))))
        .filter(|(_, w)| !w.is_zero())
        .collect();
    Ok(OscillationProfile {
        finite,
        countable: f.spikes(&candidates)?,
    })
}

/// `(H) int omega_f`.
pub fn defi_continuity_osc(f: &LineFunction) -> Result<HPair> {
    h_integral(&oscillation(f)?.to_function()?, &Domain::All)
}

/// Distance from `f` to the continuous functions.
pub fn defi_continuity_dist(f: &LineFunction) -> Result<HPair> {
    let profile = oscillation(f)?;
    if !profile.countable.is_zero() {
        return Err(HError::NotSupported(String::from(
            "countably many discontinuities",
        )));
    }
    let mut m = Rational::zero();
    for x in profile.finite.keys() {
        let (below, above) = (f.background_limit(x, false), f.background_limit(x, true));
        if below != above {
            return Ok(HPair::new(Dimension::one(), Rational::zero()));
        }
        m += (f.value_at(x) - below).abs();
    }
    Ok(HPair::new(Dimension::zero(), m))
}

/// `sup_x mu_H(Lambda_f(x))`; `(0, 1)` when `f` is continuous.
pub fn defi_continuity_cluster(f: &LineFunction) -> Result<HPair> {
    let profile = oscillation(f)?;
    let mut best = if profile.countable.is_zero() { 1 } else { 2 };
    for x in f.candidates() {
        let distinct: BTreeSet<Rational> = cluster_values(f, &x).into_iter().collect();
        best = best.max(distinct.len());
    }
    Ok(HPair::new(
        Dimension::zero(),
        Rational::from_integer(best.into()),
    ))
}

/// `(H) int |f(x) - f(-x)|`.
pub fn defi_even(f: &PiecewiseFunction) -> Result<HPair> {
    h_integral(&f.sub(&f.reflect(&Rational::zero()))?.abs()?, &Domain::All)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hintegral::SeriesExpr;
    use crate::hvalue::CoefficientSeries;
    use crate::num::{int, rat};
    use crate::setalg::SeqSpec;

    fn step() -> LineFunction {
        let core = PiecewiseFunction::new(
            vec![(Atom::interval(int(0), int(1)).unwrap(), Expr::Const(int(1)))],
            Domain::All,
        )
        .unwrap();
        LineFunction::new(core, None, Some((int(1), Poly::constant(int(1))))).unwrap()
    }

    fn spikes() -> LineFunction {
        let s = SeriesExpr::single(CoefficientSeries::geometric(rat(1, 2), rat(1, 2)).unwrap())
            .unwrap();
        let atom = Atom::seq(SeqSpec::harmonic(int(0), int(1)).unwrap());
        PiecewiseFunction::new(vec![(atom, Expr::Series(s))], Domain::All)
            .unwrap()
            .into()
    }

    fn continuous() -> LineFunction {
        LineFunction::new(
            PiecewiseFunction::zero(),
            Some((int(0), Poly::x())),
            Some((int(0), Poly::x())),
        )
        .unwrap()
    }

    fn removable() -> LineFunction {
        PiecewiseFunction::indicator_scaled(&RepSet::from_atom(Atom::point(int(0))), int(5)).into()
    }

    #[test]
    fn oscillation_examples() {
        let p = oscillation(&step()).unwrap();
        assert_eq!(p.finite, BTreeMap::from([(int(0), int(1))]));
        assert!(p.countable.is_zero());
        assert!(oscillation(&continuous()).unwrap().is_empty());
        let p = oscillation(&spikes()).unwrap();
        assert_eq!(p.at(&rat(1, 3)), rat(1, 8));
        assert_eq!(p.at(&int(0)), int(0));
    }

    #[test]
    fn osc_deficiency() {
        assert_eq!(
            defi_continuity_osc(&step()).unwrap(),
            HPair::new(Dimension::zero(), int(1))
        );
        assert_eq!(defi_continuity_osc(&continuous()).unwrap(), HPair::zero());
        assert_eq!(
            defi_continuity_osc(&spikes()).unwrap(),
            HPair::new(Dimension::zero(), int(1))
        );
    }

    #[test]
    fn dist_deficiency() {
        assert_eq!(defi_continuity_dist(&continuous()).unwrap(), HPair::zero());
        let chi0: LineFunction =
            PiecewiseFunction::indicator(&RepSet::from_atom(Atom::point(int(0)))).into();
        assert_eq!(
            defi_continuity_dist(&chi0).unwrap(),
            HPair::new(Dimension::zero(), int(1))
        );
        assert_eq!(
            defi_continuity_dist(&step()).unwrap(),
            HPair::new(Dimension::one(), int(0))
        );
        assert!(matches!(
            defi_continuity_dist(&spikes()),
            Err(HError::NotSupported(_))
        ));
    }

    #[test]
    fn cluster_deficiency() {
        assert_eq!(
            defi_continuity_cluster(&continuous()).unwrap(),
            HPair::new(Dimension::zero(), int(1))
        );
        assert_eq!(
            defi_continuity_cluster(&step()).unwrap(),
            HPair::new(Dimension::zero(), int(2))
        );
        assert_eq!(
            cluster_set(&step(), &int(0)).unwrap(),
            RepSet::from_atom(Atom::points([int(0), int(1)]))
        );
        assert_eq!(
            defi_continuity_cluster(&removable()).unwrap(),
            HPair::new(Dimension::zero(), int(2))
        );
        assert_eq!(
            cluster_set(&removable(), &int(0)).unwrap(),
            RepSet::from_atom(Atom::points([int(0), int(5)]))
        );
    }

    #[test]
    fn even_deficiency() {
        let sym = Atom::interval(int(-1), int(1)).unwrap();
        let x2 = PiecewiseFunction::new(
            vec![(sym, Expr::Poly(Poly::x().mul(&Poly::x())))],
            Domain::All,
        )
        .unwrap();
        assert_eq!(defi_even(&x2).unwrap(), HPair::zero());
        let x = PiecewiseFunction::new(
            vec![(
                Atom::interval(int(0), int(1)).unwrap(),
                Expr::Poly(Poly::x()),
            )],
            Domain::All,
        )
        .unwrap();
        assert_eq!(defi_even(&x).unwrap(), HPair::new(Dimension::one(), int(1)));
        let chi1 = PiecewiseFunction::indicator(&RepSet::from_atom(Atom::point(int(1))));
        assert_eq!(
            defi_even(&chi1).unwrap(),
            HPair::new(Dimension::zero(), int(2))
        );
    }
}
