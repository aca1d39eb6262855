//! Pairwise intersection and difference of atoms.
//!
//! Both operations work on the atoms' cores and then account for deletions:
//! `A & B = (core A & core B) - D_A - D_B` and
//! `A - B = (core A - core B - D_A) | (A & D_B)`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive};

use crate::error::{not_rep, Result};
use crate::num::{fmt_rational, int, Rational};
use crate::setalg::atom::{cantor_contains, Atom, AtomKind, SeqKind, SeqSpec, MAX_ENUMERATION};

/// Recursion cap when splitting Cantor copies.
pub const CANTOR_DEPTH: u32 = 24;

/// Cap on the number of copy comparisons in one Cantor operation.
const CANTOR_WORK: u32 = 20_000;

pub fn intersect_atoms(a: &Atom, b: &Atom) -> Result<Vec<Atom>> {
    let pieces = inter_core(&a.kind, &b.kind)?;
    let removed: Vec<&Rational> = a.deletions.iter().chain(b.deletions.iter()).collect();
    Ok(pieces
        .into_iter()
        .filter_map(|p| p.without(removed.iter().copied()))
        .collect())
}

pub fn diff_atoms(a: &Atom, b: &Atom) -> Result<Vec<Atom>> {
    let mut out: Vec<Atom> = diff_core(&a.kind, &b.kind)?
        .into_iter()
        .filter_map(|p| p.without(a.deletions.iter()))
        .collect();
    let back: Vec<Rational> = b
        .deletions
        .iter()
        .filter(|x| a.contains(x))
        .cloned()
        .collect();
    if !back.is_empty() {
        out.push(Atom::points(back));
    }
    Ok(out)
}

fn points_of(xs: impl IntoIterator<Item = Rational>) -> Vec<Atom> {
    let set: BTreeSet<Rational> = xs.into_iter().collect();
    if set.is_empty() {
        vec![]
    } else {
        vec![Atom::points(set)]
    }
}

fn seq_terms(s: &SeqSpec, from: u64, to: u64) -> Result<Vec<Rational>> {
    if to >= from && to - from >= MAX_ENUMERATION {
        return Err(not_rep(format!(
            "{} terms of a countable sequence would need enumeration",
            to - from + 1
        )));
    }
    Ok((from..=to).map(|n| s.term(n)).collect())
}

fn inter_core(a: &AtomKind, b: &AtomKind) -> Result<Vec<Atom>> {
    use AtomKind::*;
    let a_atom = Atom {
        kind: a.clone(),
        deletions: BTreeSet::new(),
    };
    let b_atom = Atom {
        kind: b.clone(),
        deletions: BTreeSet::new(),
    };
    Ok(match (a, b) {
        (Points(p), _) => points_of(p.iter().filter(|x| b_atom.core_contains(x)).cloned()),
        (_, Points(p)) => points_of(p.iter().filter(|x| a_atom.core_contains(x)).cloned()),
        (Seq(s), Interval { lo, hi }) | (Interval { lo, hi }, Seq(s)) => {
            seq_in_interval(s, lo, hi)?
        }
        (Seq(s), Seq(r)) => seq_inter_seq(s, r)?,
        (Seq(s), Cantor { t, s: sc }) | (Cantor { t, s: sc }, Seq(s)) => {
            points_of(seq_in_cantor(s, t, sc)?)
        }
        (Interval { lo: a0, hi: a1 }, Interval { lo: b0, hi: b1 }) => {
            let (lo, hi) = (a0.max(b0).clone(), a1.min(b1).clone());
            if lo < hi {
                vec![Atom::interval(lo, hi)?]
            } else if lo == hi {
                vec![Atom::point(lo)]
            } else {
                vec![]
            }
        }
        (Interval { lo, hi }, Cantor { t, s }) | (Cantor { t, s }, Interval { lo, hi }) => {
            let mut out = vec![];
            cantor_vs(
                t,
                s,
                &Shape::Interval(lo, hi),
                Mode::Inter,
                0,
                &mut 0,
                &mut out,
            )?;
            out
        }
        (Cantor { t, s }, Cantor { t: t2, s: s2 }) => {
            let mut out = vec![];
            cantor_vs(
                t,
                s,
                &Shape::Cantor(t2, s2),
                Mode::Inter,
                0,
                &mut 0,
                &mut out,
            )?;
            out
        }
    })
}

fn diff_core(a: &AtomKind, b: &AtomKind) -> Result<Vec<Atom>> {
    use AtomKind::*;
    let a_atom = Atom {
        kind: a.clone(),
        deletions: BTreeSet::new(),
    };
    let b_atom = Atom {
        kind: b.clone(),
        deletions: BTreeSet::new(),
    };
    Ok(match (a, b) {
        (Points(p), _) => points_of(p.iter().filter(|x| !b_atom.core_contains(x)).cloned()),
        (_, Points(p)) => a_atom.without(p.iter()).into_iter().collect(),
        (Seq(s), Interval { lo, hi }) => match s.index_range(lo, hi) {
            None => vec![a_atom],
            Some((n0, n1)) => {
                let mut out = points_of(seq_terms(s, s.start, n0.saturating_sub(1))?);
                if let Some(n1) = n1 {
                    out.push(Atom::seq(s.clone().from(n1 + 1)));
                }
                out
            }
        },
        (Seq(s), Seq(r)) => {
            let common = seq_inter_seq(s, r)?;
            let mut pts = vec![];
            for c in &common {
                match &c.kind {
                    Points(p) => pts.extend(p.iter().cloned()),
                    Seq(t) if same_terms_from(s, t) => {
                        return Ok(points_of(seq_terms(s, s.start, t.start.saturating_sub(1))?));
                    }
                    _ => {
                        return Err(not_rep(
                            "difference of sequences sharing an infinite subsequence",
                        ))
                    }
                }
            }
            a_atom.without(pts.iter()).into_iter().collect()
        }
        (Seq(s), Cantor { t, s: sc }) => {
            let pts = seq_in_cantor(s, t, sc)?;
            a_atom.without(pts.iter()).into_iter().collect()
        }
        (Interval { .. }, Seq(_)) | (Cantor { .. }, Seq(_)) => {
            let common = inter_core(a, b)?;
            let mut pts = vec![];
            for c in &common {
                match &c.kind {
                    Points(p) => pts.extend(p.iter().cloned()),
                    _ => {
                        return Err(not_rep(format!(
                            "{a_atom} minus an infinite sequence inside it"
                        )))
                    }
                }
            }
            a_atom.without(pts.iter()).into_iter().collect()
        }
        (Interval { lo: a0, hi: a1 }, Interval { lo: b0, hi: b1 }) => {
            if b1 < a0 || a1 < b0 {
                return Ok(vec![a_atom]);
            }
            let mut out = vec![];
            if a0 < b0 {
                out.extend(Atom::interval(a0.clone(), b0.clone())?.without([b0]));
            }
            if b1 < a1 {
                out.extend(Atom::interval(b1.clone(), a1.clone())?.without([b1]));
            }
            out
        }
        (Interval { lo, hi }, Cantor { t, s }) => {
            let (c0, c1) = (t.clone(), t + s);
            if hi < &c0 || &c1 < lo {
                vec![a_atom]
            } else if hi == &c0 {
                a_atom.without([&c0]).into_iter().collect()
            } else if lo == &c1 {
                a_atom.without([&c1]).into_iter().collect()
            } else {
                return Err(not_rep(format!("{a_atom} minus the Cantor copy {b_atom}")));
            }
        }
        (Cantor { t, s }, Interval { lo, hi }) => {
            let mut out = vec![];
            cantor_vs(
                t,
                s,
                &Shape::Interval(lo, hi),
                Mode::Diff,
                0,
                &mut 0,
                &mut out,
            )?;
            out
        }
        (Cantor { t, s }, Cantor { t: t2, s: s2 }) => {
            let mut out = vec![];
            cantor_vs(
                t,
                s,
                &Shape::Cantor(t2, s2),
                Mode::Diff,
                0,
                &mut 0,
                &mut out,
            )?;
            out
        }
    })
}

fn same_terms_from(s: &SeqSpec, t: &SeqSpec) -> bool {
    s.a == t.a && s.b == t.b && s.kind == t.kind && t.start >= s.start
}

fn seq_in_interval(s: &SeqSpec, lo: &Rational, hi: &Rational) -> Result<Vec<Atom>> {
    Ok(match s.index_range(lo, hi) {
        None => vec![],
        Some((n0, None)) => vec![Atom::seq(s.clone().from(n0))],
        Some((n0, Some(n1))) => points_of(seq_terms(s, n0, n1)?),
    })
}

/// Terms of `s` farther than `radius` from its limit.
fn far_terms(s: &SeqSpec, radius: &Rational) -> Result<Vec<Rational>> {
    let n0 = match s.index_range(&(s.limit() - radius), &(s.limit() + radius)) {
        Some((n0, _)) => n0,
        None => unreachable!("a sequence has terms arbitrarily close to its limit"),
    };
    seq_terms(s, s.start, n0.saturating_sub(1))
}

fn seq_inter_seq(s: &SeqSpec, r: &SeqSpec) -> Result<Vec<Atom>> {
    if s.a != r.a {
        // every common term is far from at least one of the two limits
        let radius = (&s.a - &r.a).abs() / int(4);
        let mut pts: BTreeSet<Rational> = BTreeSet::new();
        pts.extend(
            far_terms(s, &radius)?
                .into_iter()
                .filter(|x| r.index_of(x).is_some()),
        );
        pts.extend(
            far_terms(r, &radius)?
                .into_iter()
                .filter(|x| s.index_of(x).is_some()),
        );
        return Ok(points_of(pts));
    }
    if s.b.is_positive() != r.b.is_positive() {
        return Ok(vec![]);
    }
    match (&s.kind, &r.kind) {
        (SeqKind::Harmonic, SeqKind::Harmonic) => {
            // a + b/n = a + b'/m  iff  m = n b'/b; with b'/b = u/v in lowest
            // terms the common terms are a + (b/v)/k with n = v k, m = u k
            let ratio = &r.b / &s.b;
            let (u, v) = (ratio.numer().to_u64(), ratio.denom().to_u64());
            let (Some(u), Some(v)) = (u, v) else {
                return Err(not_rep("harmonic ratio too large"));
            };
            let k0 = s.start.div_ceil(v).max(r.start.div_ceil(u)).max(1);
            let common = SeqSpec::harmonic(s.a.clone(), &s.b / int(v as i64))?.from(k0);
            Ok(vec![Atom::seq(common)])
        }
        (SeqKind::Geometric { q }, SeqKind::Geometric { q: q2 }) if q == q2 => {
            // shifted copies: b' = b q^j
            let mut ratio = &r.b / &s.b;
            let (mut j, mut swap) = (0i64, false);
            if ratio > Rational::one() {
                ratio = ratio.recip();
                swap = true;
            }
            while ratio < Rational::one() && j < 4096 {
                ratio /= q;
                j += 1;
            }
            if ratio != Rational::one() {
                return Err(not_rep(
                    "geometric sequences with a common limit and unrelated offsets",
                ));
            }
            // term n of the lower-offset one equals term n - j of the other
            let (big, small) = if swap { (r, s) } else { (s, r) };
            let start = big.start.max(small.start + j as u64);
            Ok(vec![Atom::seq(big.clone().from(start))])
        }
        _ if s == r => Ok(vec![Atom::seq(s.clone())]),
        _ => Err(not_rep(
            "sequences of different families accumulating at the same point",
        )),
    }
}

fn seq_in_cantor(s: &SeqSpec, t: &Rational, sc: &Rational) -> Result<Vec<Rational>> {
    let (c0, c1) = (t.clone(), t + sc);
    let a = s.limit();
    if !(a >= &c0 && a <= &c1) {
        let terms = match s.index_range(&c0, &c1) {
            None => vec![],
            Some((n0, Some(n1))) => seq_terms(s, n0, n1)?,
            Some((_, None)) => unreachable!("limit outside the hull"),
        };
        return Ok(terms
            .into_iter()
            .filter(|x| cantor_contains(&((x - t) / sc)))
            .collect());
    }
    if cantor_contains(&((a - t) / sc)) {
        return Err(not_rep(
            "countable sequence accumulating inside a Cantor copy",
        ));
    }
    // descend to the removed middle third that contains the limit
    let (mut t0, mut s0) = (t.clone(), sc.clone());
    let (g0, g1) = loop {
        let third = &s0 / int(3);
        let (m0, m1) = (&t0 + &third, &t0 + &third * int(2));
        if a <= &m0 {
            s0 = third;
        } else if a >= &m1 {
            t0 = m1;
            s0 = third;
        } else {
            break (m0, m1);
        }
    };
    // terms inside the closed gap miss C except at its two endpoints
    let (n0, _) = s.index_range(&g0, &g1).expect("limit lies in the gap");
    let mut out: Vec<Rational> = seq_terms(s, s.start, n0.saturating_sub(1))?
        .into_iter()
        .filter(|x| cantor_contains(&((x - t) / sc)))
        .collect();
    out.extend([g0, g1].into_iter().filter(|g| s.index_of(g).is_some()));
    Ok(out)
}

enum Shape<'a> {
    Interval(&'a Rational, &'a Rational),
    Cantor(&'a Rational, &'a Rational),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Inter,
    Diff,
}

fn cantor_children(t: &Rational, s: &Rational) -> [(Rational, Rational); 2] {
    let third = s / int(3);
    [(t.clone(), third.clone()), (t + &third * int(2), third)]
}

/// `t + s C` intersected with, or minus, the shape. Copies are split until
/// each piece is equal to, disjoint from, touching or inside the shape.
fn cantor_vs(
    t: &Rational,
    s: &Rational,
    other: &Shape,
    mode: Mode,
    depth: u32,
    work: &mut u32,
    out: &mut Vec<Atom>,
) -> Result<()> {
    let me = || Atom::cantor(t.clone(), s.clone()).expect("positive scale");
    let (c0, c1) = (t.clone(), t + s);
    let (o0, o1, whole) = match other {
        Shape::Interval(lo, hi) => ((*lo).clone(), (*hi).clone(), **lo <= c0 && c1 <= **hi),
        Shape::Cantor(t2, s2) => ((*t2).clone(), *t2 + *s2, *t2 == t && *s2 == s),
    };
    let touch = if c1 == o0 {
        Some(c1.clone())
    } else if o1 == c0 {
        Some(c0.clone())
    } else {
        None
    };
    if whole {
        if mode == Mode::Inter {
            out.push(me());
        }
        return Ok(());
    }
    if c1 < o0 || o1 < c0 {
        if mode == Mode::Diff {
            out.push(me());
        }
        return Ok(());
    }
    if let Some(p) = touch {
        match mode {
            Mode::Inter => out.push(Atom::point(p)),
            Mode::Diff => out.extend(me().without([&p])),
        }
        return Ok(());
    }
    *work += 1;
    if depth >= CANTOR_DEPTH || *work > CANTOR_WORK {
        return Err(not_rep(format!(
            "overlap of {} with {} is not resolved by splitting",
            me(),
            shape_name(other)
        )));
    }
    let split_self = match other {
        Shape::Interval(..) => true,
        Shape::Cantor(_, s2) => s >= *s2,
    };
    if split_self {
        for (ct, cs) in cantor_children(t, s) {
            cantor_vs(&ct, &cs, other, mode, depth + 1, work, out)?;
        }
        return Ok(());
    }
    let Shape::Cantor(t2, s2) = other else {
        unreachable!()
    };
    let kids = cantor_children(t2, s2);
    match mode {
        Mode::Inter => {
            for (ct, cs) in &kids {
                cantor_vs(t, s, &Shape::Cantor(ct, cs), mode, depth + 1, work, out)?;
            }
        }
        Mode::Diff => {
            let mut first = vec![];
            cantor_vs(
                t,
                s,
                &Shape::Cantor(&kids[0].0, &kids[0].1),
                mode,
                depth + 1,
                work,
                &mut first,
            )?;
            let second = Atom::cantor(kids[1].0.clone(), kids[1].1.clone())?;
            for piece in first {
                out.extend(diff_atoms_depth(&piece, &second, depth + 1, work)?);
            }
        }
    }
    Ok(())
}

fn diff_atoms_depth(a: &Atom, b: &Atom, depth: u32, work: &mut u32) -> Result<Vec<Atom>> {
    match (&a.kind, &b.kind) {
        (AtomKind::Cantor { t, s }, AtomKind::Cantor { t: t2, s: s2 }) => {
            let mut out = vec![];
            cantor_vs(
                t,
                s,
                &Shape::Cantor(t2, s2),
                Mode::Diff,
                depth,
                work,
                &mut out,
            )?;
            Ok(out
                .into_iter()
                .filter_map(|p| p.without(a.deletions.iter()))
                .collect())
        }
        _ => diff_atoms(a, b),
    }
}

fn shape_name(s: &Shape) -> String {
    match s {
        Shape::Interval(lo, hi) => format!("[{}, {}]", fmt_rational(lo), fmt_rational(hi)),
        Shape::Cantor(t, s) => format!("{} + {}*C", fmt_rational(t), fmt_rational(s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn iv(a: i64, b: i64) -> Atom {
        Atom::interval(int(a), int(b)).unwrap()
    }

    fn c(t: Rational, s: Rational) -> Atom {
        Atom::cantor(t, s).unwrap()
    }

    #[test]
    fn interval_difference_marks_shared_endpoint() {
        let d = diff_atoms(&iv(0, 2), &iv(0, 1)).unwrap();
        assert_eq!(d, vec![iv(1, 2).without([&int(1)]).unwrap()]);
    }

    #[test]
    fn cantor_subcopy_difference() {
        let whole = c(int(0), int(1));
        let left = c(int(0), rat(1, 3));
        assert_eq!(intersect_atoms(&whole, &left).unwrap(), vec![left.clone()]);
        assert_eq!(
            diff_atoms(&whole, &left).unwrap(),
            vec![c(rat(2, 3), rat(1, 3))]
        );
        let deep = c(rat(2, 9), rat(1, 9));
        let rest = diff_atoms(&whole, &deep).unwrap();
        assert_eq!(rest.len(), 2);
        assert!(diff_atoms(&left, &whole).unwrap().is_empty());
    }

    #[test]
    fn cantor_and_interval() {
        let whole = c(int(0), int(1));
        let i = Atom::interval(rat(1, 3), rat(2, 3)).unwrap();
        let pts = intersect_atoms(&whole, &i).unwrap();
        assert_eq!(pts, vec![Atom::point(rat(1, 3)), Atom::point(rat(2, 3))]);
        assert_eq!(intersect_atoms(&whole, &iv(2, 3)).unwrap(), vec![]);
        assert!(matches!(
            diff_atoms(&iv(0, 1), &whole),
            Err(crate::error::HError::NotRepresentable(_))
        ));
        let quarter = Atom::interval(int(0), rat(1, 4)).unwrap();
        assert!(intersect_atoms(&whole, &quarter).is_err());
    }

    #[test]
    fn overlapping_cantor_copies_rejected() {
        let a = c(int(0), int(1));
        let b = c(rat(1, 4), int(1));
        assert!(matches!(
            diff_atoms(&a, &b),
            Err(crate::error::HError::NotRepresentable(_))
        ));
    }

    #[test]
    fn sequences() {
        let h = Atom::seq(SeqSpec::harmonic(int(0), int(1)).unwrap());
        let cut = intersect_atoms(&h, &Atom::interval(rat(1, 5), int(1)).unwrap()).unwrap();
        assert_eq!(cut, vec![Atom::points((1..=5).map(|n| rat(1, n)))]);
        let tail = diff_atoms(&h, &Atom::interval(rat(1, 5), int(1)).unwrap()).unwrap();
        assert_eq!(
            tail,
            vec![Atom::seq(
                SeqSpec::harmonic(int(0), int(1)).unwrap().from(6)
            )]
        );
        let evens = Atom::seq(SeqSpec::harmonic(int(0), rat(1, 2)).unwrap());
        assert_eq!(intersect_atoms(&h, &evens).unwrap(), vec![evens.clone()]);
        let g = Atom::seq(SeqSpec::geometric(int(1), int(1), rat(1, 2)).unwrap());
        assert!(intersect_atoms(&h, &g).unwrap().is_empty());
        let in_c = intersect_atoms(&h, &c(int(0), int(1))).unwrap_err();
        assert!(matches!(in_c, crate::error::HError::NotRepresentable(_)));
        let shifted = Atom::seq(SeqSpec::harmonic(rat(1, 2), rat(1, 10)).unwrap());
        let pts = intersect_atoms(&shifted, &c(int(0), int(1))).unwrap();
        for p in pts.iter().flat_map(|a| a.finite_points().unwrap()) {
            assert!(cantor_contains(&p));
        }
    }
}
