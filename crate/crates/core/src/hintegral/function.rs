use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, not_rep, HError, Result};
use crate::hintegral::expr::{Expr, SeriesExpr, SignPattern};
use crate::hvalue::CoefficientSeries;
use crate::num::{fmt_rational, pow_rational, Rational};
use crate::poly::Poly;
use crate::setalg::{
    diff_atoms, intersect_atoms, is_subset, Atom, AtomKind, RepSet, SeqKind, SeqSpec,
};

/// Where a function is defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    All,
    Set(RepSet),
}

impl Domain {
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Domain::All => true,
            Domain::Set(s) => s.contains(x),
        }
    }
}

/// One non-point piece of a function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub atom: Atom,
    pub expr: Expr,
}

/// Values on finitely many points plus expressions on disjoint atoms; zero
/// elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseFunction {
    points: BTreeMap<Rational, Rational>,
    terms: Vec<Term>,
    domain: Domain,
}

fn check_expr(atom: &Atom, expr: &Expr) -> Result<()> {
    match (&atom.kind, expr) {
        (_, Expr::Const(_)) => Ok(()),
        (AtomKind::Interval { .. }, Expr::Poly(_)) => Ok(()),
        (AtomKind::Seq(_), Expr::Series(_)) => Ok(()),
        (_, Expr::Poly(_)) => Err(invalid(format!(
            "polynomial values need an interval atom, got {atom}"
        ))),
        (_, Expr::Series(_)) => Err(invalid(format!(
            "series values need a sequence atom, got {atom}"
        ))),
    }
}

impl PiecewiseFunction {
    pub fn zero() -> Self {
        PiecewiseFunction {
            points: BTreeMap::new(),
            terms: vec![],
            domain: Domain::All,
        }
    }

    /// Builds a function from `(atom, expr)` pairs on pairwise disjoint
    /// atoms lying inside `domain`.
    pub fn new(pieces: Vec<(Atom, Expr)>, domain: Domain) -> Result<Self> {
        let mut points = BTreeMap::new();
        let mut terms = vec![];
        for (atom, expr) in pieces {
            let expr = expr.simplify();
            if let Domain::Set(d) = &domain {
                if !is_subset(&RepSet::from_atom(atom.clone()), d)? {
                    return Err(invalid(format!("{atom} is not inside the domain {d}")));
                }
            }
            match atom.finite_points() {
                Some(pts) => {
                    if matches!(expr, Expr::Series(_)) {
                        return Err(invalid("series values need a sequence atom"));
                    }
                    for x in pts {
                        let v = expr.eval(&x, None);
                        if points.insert(x.clone(), v).is_some() {
                            return Err(HError::DisjointnessViolated(format!(
                                "point {} listed twice",
                                fmt_rational(&x)
                            )));
                        }
                    }
                }
                None => {
                    check_expr(&atom, &expr)?;
                    terms.push(Term { atom, expr });
                }
            }
        }
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[i + 1..] {
                if !intersect_atoms(&a.atom, &b.atom)?.is_empty() {
                    return Err(HError::DisjointnessViolated(format!(
                        "{} and {}",
                        a.atom, b.atom
                    )));
                }
            }
            if let Some(x) = points.keys().find(|x| a.atom.contains(x)) {
                return Err(HError::DisjointnessViolated(format!(
                    "point {} lies in {}",
                    fmt_rational(x),
                    a.atom
                )));
            }
        }
        Ok(PiecewiseFunction {
            points,
            terms,
            domain,
        }
        .tidy())
    }

    /// `c` times the indicator of `k`.
    pub fn indicator_scaled(k: &RepSet, c: Rational) -> PiecewiseFunction {
        let pieces = k
            .atoms()
            .iter()
            .map(|a| (a.clone(), Expr::Const(c.clone())))
            .collect();
        PiecewiseFunction::new(pieces, Domain::All).expect("atoms of a set are disjoint")
    }

    pub fn indicator(k: &RepSet) -> PiecewiseFunction {
        PiecewiseFunction::indicator_scaled(k, Rational::one())
    }

    pub fn points(&self) -> &BTreeMap<Rational, Rational> {
        &self.points
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    fn tidy(mut self) -> Self {
        self.points.retain(|_, v| !v.is_zero());
        self.terms.retain(|t| !t.expr.is_zero());
        self.terms
            .sort_by(|a, b| a.atom.hull().0.cmp(&b.atom.hull().0));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.points.values().all(|v| v.is_zero()) && self.terms.iter().all(|t| t.expr.is_zero())
    }

    /// Pointwise equality, whatever the piece layout.
    pub fn equivalent(&self, g: &PiecewiseFunction) -> Result<bool> {
        Ok(self.sub(g)?.is_zero())
    }

    pub fn value_at(&self, x: &Rational) -> Rational {
        if let Some(v) = self.points.get(x) {
            return v.clone();
        }
        for t in &self.terms {
            if t.atom.contains(x) {
                return t.expr.eval(x, seq_index(&t.atom, x));
            }
        }
        Rational::zero()
    }

    /// `f` restricted to `k`: zero outside.
    pub fn restrict(&self, k: &RepSet) -> Result<PiecewiseFunction> {
        let mut points: BTreeMap<Rational, Rational> = self
            .points
            .iter()
            .filter(|(x, _)| k.contains(x))
            .map(|(x, v)| (x.clone(), v.clone()))
            .collect();
        let mut terms = vec![];
        for t in &self.terms {
            for ka in k.atoms() {
                for piece in intersect_atoms(&t.atom, ka)? {
                    place(t, piece, &mut points, &mut terms)?;
                }
            }
        }
        Ok(PiecewiseFunction {
            points,
            terms,
            domain: self.domain.clone(),
        }
        .tidy())
    }

    pub fn scalar_mul(&self, c: &Rational) -> PiecewiseFunction {
        PiecewiseFunction {
            points: self
                .points
                .iter()
                .map(|(x, v)| (x.clone(), v * c))
                .collect(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    atom: t.atom.clone(),
                    expr: t.expr.scale(c),
                })
                .collect(),
            domain: self.domain.clone(),
        }
        .tidy()
    }

    pub fn neg(&self) -> PiecewiseFunction {
        self.scalar_mul(&-Rational::one())
    }

    /// Pointwise sum over the common refinement of both term lists.
    pub fn add(&self, g: &PiecewiseFunction) -> Result<PiecewiseFunction> {
        let all_pts: BTreeSet<Rational> =
            self.points.keys().chain(g.points.keys()).cloned().collect();
        let mut points: BTreeMap<Rational, Rational> = all_pts
            .iter()
            .map(|x| (x.clone(), self.value_at(x) + g.value_at(x)))
            .collect();
        let strip = |f: &PiecewiseFunction| -> Vec<Term> {
            f.terms
                .iter()
                .filter_map(|t| {
                    t.atom.without(all_pts.iter()).map(|atom| Term {
                        atom,
                        expr: t.expr.clone(),
                    })
                })
                .collect()
        };
        let (ft, gt) = (strip(self), strip(g));
        let mut terms = vec![];
        let mut stray: BTreeSet<Rational> = BTreeSet::new();
        for a in &ft {
            let mut rest = vec![a.atom.clone()];
            for b in &gt {
                for piece in intersect_atoms(&a.atom, &b.atom)? {
                    match piece.finite_points() {
                        Some(pts) => stray.extend(pts),
                        None => {
                            let ea = transfer(a, &piece)?;
                            let eb = transfer(b, &piece)?;
                            let expr = ea.add(&eb)?;
                            check_expr(&piece, &expr)?;
                            terms.push(Term { atom: piece, expr });
                        }
                    }
                }
                rest = subtract(&rest, &b.atom)?;
            }
            for piece in rest {
                keep_piece(a, piece, &mut stray, &mut terms)?;
            }
        }
        for b in &gt {
            let mut rest = vec![b.atom.clone()];
            for a in &ft {
                rest = subtract(&rest, &a.atom)?;
            }
            for piece in rest {
                keep_piece(b, piece, &mut stray, &mut terms)?;
            }
        }
        // point pieces produced by the refinement take both values directly
        for x in stray {
            points.insert(x.clone(), self.value_at(&x) + g.value_at(&x));
        }
        let domain = match (&self.domain, &g.domain) {
            (Domain::All, d) | (d, Domain::All) => d.clone(),
            (Domain::Set(a), Domain::Set(b)) => Domain::Set(crate::setalg::repset_intersect(a, b)?),
        };
        Ok(PiecewiseFunction {
            points,
            terms,
            domain,
        }
        .tidy())
    }

    pub fn sub(&self, g: &PiecewiseFunction) -> Result<PiecewiseFunction> {
        self.add(&g.neg())
    }

    /// `max{f, 0}`.
    pub fn pos_part(&self) -> Result<PiecewiseFunction> {
        let points = self
            .points
            .iter()
            .filter(|(_, v)| v.is_positive())
            .map(|(x, v)| (x.clone(), v.clone()))
            .collect();
        let mut out = PiecewiseFunction {
            points,
            terms: vec![],
            domain: self.domain.clone(),
        };
        for t in &self.terms {
            match (&t.atom.kind, &t.expr) {
                (_, Expr::Const(c)) => {
                    if c.is_positive() {
                        out.terms.push(t.clone());
                    }
                }
                (AtomKind::Interval { lo, hi }, Expr::Poly(p)) => {
                    for (a, b, s) in p.sign_pieces(lo, hi)? {
                        if s == Ordering::Greater {
                            let atom = Atom::interval(a, b)?;
                            let atom = atom
                                .without(t.atom.deletions.iter())
                                .expect("intervals are infinite");
                            out.terms.push(Term {
                                atom,
                                expr: t.expr.clone(),
                            });
                        }
                    }
                }
                (AtomKind::Seq(spec), Expr::Series(s)) => {
                    let keep = |v: &Rational| v.is_positive();
                    match s.sign_pattern(spec.start)? {
                        SignPattern::Zero => {}
                        SignPattern::Constant(Ordering::Greater) => out.terms.push(t.clone()),
                        SignPattern::Constant(_) => {}
                        SignPattern::Eventually { from, sign } => {
                            for n in spec.start..from {
                                let x = spec.term(n);
                                let v = s.value(n);
                                if keep(&v) && t.atom.contains(&x) {
                                    out.points.insert(x, v);
                                }
                            }
                            if sign == Ordering::Greater {
                                let atom = Atom {
                                    kind: AtomKind::Seq(spec.clone().from(from)),
                                    deletions: Default::default(),
                                };
                                let atom = atom
                                    .without(t.atom.deletions.iter())
                                    .expect("sequences are infinite");
                                out.terms.push(Term {
                                    atom,
                                    expr: t.expr.clone(),
                                });
                            }
                        }
                    }
                }
                _ => unreachable!("expression kinds are checked at construction"),
            }
        }
        for t in &mut out.terms {
            let keep: std::collections::BTreeSet<Rational> = t
                .atom
                .deletions
                .iter()
                .filter(|x| t.atom.core_contains(x))
                .cloned()
                .collect();
            t.atom.deletions = keep;
        }
        Ok(out.tidy())
    }

    /// `min{f, 0}`, so that `f = f+ + f-`.
    pub fn neg_part(&self) -> Result<PiecewiseFunction> {
        Ok(self.neg().pos_part()?.neg())
    }

    pub fn abs(&self) -> Result<PiecewiseFunction> {
        self.pos_part()?.sub(&self.neg_part()?)
    }

    /// `x -> f(c - x)`.
    pub fn reflect(&self, c: &Rational) -> PiecewiseFunction {
        let points = self
            .points
            .iter()
            .map(|(x, v)| (c - x, v.clone()))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let expr = match &t.expr {
                    Expr::Poly(p) => Expr::Poly(p.reflect(c)),
                    e => e.clone(),
                };
                Term {
                    atom: t.atom.reflect(c),
                    expr,
                }
            })
            .collect();
        let domain = match &self.domain {
            Domain::All => Domain::All,
            Domain::Set(s) => Domain::Set(s.reflect(c)),
        };
        PiecewiseFunction {
            points,
            terms,
            domain,
        }
        .tidy()
    }

    /// Pointwise `f >= 0`; `false` also when the check cannot be decided.
    pub fn is_nonneg(&self) -> bool {
        self.points.values().all(|v| !v.is_negative())
            && self.terms.iter().all(|t| match (&t.atom.kind, &t.expr) {
                (_, Expr::Const(c)) => !c.is_negative(),
                (AtomKind::Interval { lo, hi }, Expr::Poly(p)) => p.nonneg_on(lo, hi),
                (AtomKind::Seq(spec), Expr::Series(s)) => match s.sign_pattern(spec.start) {
                    Ok(SignPattern::Zero) | Ok(SignPattern::Constant(Ordering::Greater)) => true,
                    Ok(SignPattern::Eventually { from, sign }) => {
                        sign != Ordering::Less
                            && (spec.start..from).all(|n| !s.value(n).is_negative())
                    }
                    _ => false,
                },
                _ => false,
            })
    }

    /// `self <= g` pointwise.
    pub fn le(&self, g: &PiecewiseFunction) -> Result<bool> {
        Ok(g.sub(self)?.is_nonneg())
    }
}

/// The global sequence index of `x` when `atom` is a sequence.
pub(crate) fn seq_index(atom: &Atom, x: &Rational) -> Option<u64> {
    match &atom.kind {
        AtomKind::Seq(s) => s.index_of(x),
        _ => None,
    }
}

fn subtract(pieces: &[Atom], b: &Atom) -> Result<Vec<Atom>> {
    let mut out = vec![];
    for p in pieces {
        out.extend(diff_atoms(p, b)?);
    }
    Ok(out)
}

/// The expression of `t` carried over to a sub-atom `piece`.
fn transfer(t: &Term, piece: &Atom) -> Result<Expr> {
    match (&t.atom.kind, &piece.kind, &t.expr) {
        (_, _, Expr::Const(_)) => Ok(t.expr.clone()),
        (_, AtomKind::Interval { .. }, Expr::Poly(_)) => Ok(t.expr.clone()),
        (_, AtomKind::Cantor { .. }, Expr::Poly(p)) => match p.as_constant() {
            Some(c) => Ok(Expr::Const(c)),
            None => Err(not_rep(format!("non-constant values on {piece}"))),
        },
        (_, AtomKind::Seq(spec), Expr::Poly(p)) => Ok(Expr::Series(poly_on_seq(p, spec)?)),
        (AtomKind::Seq(a), AtomKind::Seq(b), Expr::Series(s)) if a.a == b.a && a.kind == b.kind => {
            if a.b == b.b {
                return Ok(t.expr.clone());
            }
            // harmonic subsequence: term k of the piece is term v k of the atom
            let v = &a.b / &b.b;
            match (&a.kind, v.is_integer() && v.is_positive()) {
                (SeqKind::Harmonic, true) => Ok(Expr::Series(every_nth(s, &v)?)),
                _ => Err(not_rep(format!(
                    "series values of {} do not carry over to {}",
                    t.atom, piece
                ))),
            }
        }
        _ => Err(not_rep(format!(
            "series values of {} do not carry over to {}",
            t.atom, piece
        ))),
    }
}

/// `p(a + b g(n))` as a series in the sequence index.
fn poly_on_seq(p: &Poly, spec: &SeqSpec) -> Result<SeriesExpr> {
    let shifted = p.compose(&Poly::new(vec![spec.a.clone(), Rational::one()]));
    let c = shifted.coeffs();
    let mut parts = vec![];
    for (k, d) in c.iter().enumerate().skip(1) {
        let scale = d * pow_rational(&spec.b, k as i64);
        parts.push(match &spec.kind {
            SeqKind::Harmonic => {
                CoefficientSeries::pseries(scale, Rational::from_integer((k as i64).into()))?
            }
            SeqKind::Geometric { q } => {
                let qk = pow_rational(q, k as i64);
                CoefficientSeries::geometric(scale * &qk, qk)?
            }
        });
    }
    SeriesExpr::new(c.first().cloned().unwrap_or_else(Rational::zero), parts)
}

/// The values at indices `v, 2v, 3v, ...`.
fn every_nth(s: &SeriesExpr, v: &Rational) -> Result<SeriesExpr> {
    let vi = v
        .to_integer()
        .to_u64()
        .ok_or_else(|| not_rep("subsequence step too large"))?;
    let parts = s
        .parts
        .iter()
        .map(|p| match p {
            CoefficientSeries::Geometric { a, r } => CoefficientSeries::geometric(
                a * pow_rational(r, vi as i64 - 1),
                pow_rational(r, vi as i64),
            ),
            CoefficientSeries::PSeries { c, p } => {
                let k = p
                    .to_integer()
                    .to_i64()
                    .ok_or_else(|| invalid("exponent too large"))?;
                CoefficientSeries::pseries(c / pow_rational(v, k), p.clone())
            }
            CoefficientSeries::FiniteList(list) => Ok(CoefficientSeries::FiniteList(
                list.iter()
                    .skip(vi as usize - 1)
                    .step_by(vi as usize)
                    .cloned()
                    .collect(),
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    SeriesExpr::new(s.offset.clone(), parts)
}

/// Adds `piece` of term `t` to the output, expanding finite pieces.
fn place(
    t: &Term,
    piece: Atom,
    points: &mut BTreeMap<Rational, Rational>,
    terms: &mut Vec<Term>,
) -> Result<()> {
    match piece.finite_points() {
        Some(pts) => {
            for x in pts {
                let v = t.expr.eval(&x, seq_index(&t.atom, &x));
                points.insert(x, v);
            }
        }
        None => terms.push(Term {
            expr: transfer(t, &piece)?,
            atom: piece,
        }),
    }
    Ok(())
}

/// Like [`place`], but finite pieces are only recorded for later evaluation.
fn keep_piece(
    t: &Term,
    piece: Atom,
    stray: &mut BTreeSet<Rational>,
    terms: &mut Vec<Term>,
) -> Result<()> {
    match piece.finite_points() {
        Some(pts) => stray.extend(pts),
        None => terms.push(Term {
            expr: transfer(t, &piece)?,
            atom: piece,
        }),
    }
    Ok(())
}

impl fmt::Display for PiecewiseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .points
            .iter()
            .map(|(x, v)| format!("{} at {}", fmt_rational(v), fmt_rational(x)))
            .collect();
        parts.extend(
            self.terms
                .iter()
                .map(|t| format!("{} on {}", t.expr, t.atom)),
        );
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hintegral::h_integral;
    use crate::hvalue::{Dimension, HPair};
    use crate::num::{int, rat};

    fn harmonic(b: Rational) -> Atom {
        Atom::seq(SeqSpec::harmonic(int(0), b).unwrap())
    }

    #[test]
    fn polynomial_restricted_to_a_sequence() {
        // x^2 on [0,1] sampled at 1/n sums to pi^2/6; x^2 - x at 1/n is 1/n^2 - 1/n
        let sq = Poly::x().mul(&Poly::x());
        let f = PiecewiseFunction::new(
            vec![(Atom::interval(int(0), int(1)).unwrap(), Expr::Poly(sq))],
            Domain::All,
        )
        .unwrap();
        let on_seq = f.restrict(&RepSet::from_atom(harmonic(int(1)))).unwrap();
        assert_eq!(on_seq.value_at(&rat(1, 3)), rat(1, 9));
        let i = h_integral(&on_seq, &Domain::All).unwrap();
        assert!(i.d.is_zero() && (i.m.to_f64() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-9);
        let g = PiecewiseFunction::new(
            vec![(
                Atom::interval(int(0), int(1)).unwrap(),
                Expr::Poly(Poly::x()),
            )],
            Domain::All,
        )
        .unwrap();
        let geo = Atom::seq(SeqSpec::geometric(int(0), int(1), rat(1, 2)).unwrap());
        let i = h_integral(&g.restrict(&RepSet::from_atom(geo)).unwrap(), &Domain::All).unwrap();
        assert_eq!(i, HPair::new(Dimension::zero(), int(1)));
    }

    #[test]
    fn series_on_a_subsequence() {
        // 2^-n at 1/n restricted to the points 1/(2k): values 4^-k
        let s = SeriesExpr::single(CoefficientSeries::geometric(rat(1, 2), rat(1, 2)).unwrap())
            .unwrap();
        let f =
            PiecewiseFunction::new(vec![(harmonic(int(1)), Expr::Series(s))], Domain::All).unwrap();
        let evens = f.restrict(&RepSet::from_atom(harmonic(rat(1, 2)))).unwrap();
        assert_eq!(evens.value_at(&rat(1, 4)), rat(1, 16));
        assert_eq!(evens.value_at(&rat(1, 3)), int(0));
        assert_eq!(
            h_integral(&evens, &Domain::All).unwrap(),
            HPair::new(Dimension::zero(), rat(1, 3))
        );
    }

    #[test]
    fn nonconstant_values_on_cantor_copies_refused() {
        let f = PiecewiseFunction::new(
            vec![(
                Atom::interval(int(0), int(1)).unwrap(),
                Expr::Poly(Poly::x()),
            )],
            Domain::All,
        )
        .unwrap();
        let c = RepSet::from_atom(Atom::cantor(int(0), int(1)).unwrap());
        assert!(matches!(f.restrict(&c), Err(HError::NotRepresentable(_))));
        let one = PiecewiseFunction::new(
            vec![(
                Atom::interval(int(0), int(1)).unwrap(),
                Expr::Poly(Poly::constant(int(2))),
            )],
            Domain::All,
        )
        .unwrap();
        assert_eq!(
            h_integral(&one.restrict(&c).unwrap(), &Domain::All).unwrap(),
            HPair::new(Dimension::cantor(), int(2))
        );
    }
}
