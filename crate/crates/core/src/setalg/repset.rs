use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;

use crate::error::{HError, Result};
use crate::hvalue::{hpair_sum, HPair};
use crate::num::{int, Rational};
use crate::setalg::atom::{Atom, AtomKind};
use crate::setalg::ops::{diff_atoms, intersect_atoms};

/// A finite union of pairwise disjoint atoms in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RepSet {
    atoms: Vec<Atom>,
}

impl RepSet {
    pub fn empty() -> Self {
        RepSet::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn from_atom(a: Atom) -> Self {
        RepSet {
            atoms: canonical(vec![a]),
        }
    }

    /// Builds a set from atoms already known to be pairwise disjoint.
    pub fn from_disjoint(atoms: Vec<Atom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[i + 1..] {
                if !intersect_atoms(a, b)?.is_empty() {
                    return Err(HError::DisjointnessViolated(format!("{a} and {b}")));
                }
            }
        }
        Ok(RepSet {
            atoms: canonical(atoms),
        })
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.atoms.iter().any(|a| a.contains(x))
    }

    /// Closed hull of all atoms.
    pub fn hull(&self) -> Option<(Rational, Rational)> {
        let mut it = self.atoms.iter().map(Atom::hull);
        let first = it.next()?;
        Some(it.fold(first, |(lo, hi), (a, b)| (lo.min(a), hi.max(b))))
    }

    /// The image under `x -> c - x`.
    pub fn reflect(&self, c: &Rational) -> RepSet {
        RepSet {
            atoms: canonical(self.atoms.iter().map(|a| a.reflect(c)).collect()),
        }
    }

    /// Explicit points when the set is finite.
    pub fn finite_points(&self) -> Option<Vec<Rational>> {
        let mut out = vec![];
        for a in &self.atoms {
            out.extend(a.finite_points()?);
        }
        Some(out)
    }
}

impl fmt::Display for RepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// Canonical form of a list of pairwise disjoint atoms.
fn canonical(atoms: Vec<Atom>) -> Vec<Atom> {
    let mut points: BTreeSet<Rational> = BTreeSet::new();
    let mut intervals = vec![];
    let mut others = vec![];
    for a in atoms {
        match a.kind {
            AtomKind::Points(p) => points.extend(p),
            AtomKind::Interval { .. } => intervals.push(a),
            _ => others.push(a),
        }
    }
    let mut out = merge_intervals(intervals);
    out.extend(merge_cantor_siblings(others));
    for a in &mut out {
        absorb_points(a, &mut points);
    }
    if !points.is_empty() {
        out.push(Atom::points(points));
    }
    out.sort_by(|a, b| {
        let (ha, hb) = (a.hull(), b.hull());
        ha.0.cmp(&hb.0)
            .then(a.kind_rank().cmp(&b.kind_rank()))
            .then(ha.1.cmp(&hb.1))
    });
    assign_shared_points(&mut out);
    out
}

/// A point lying in the cores of several atoms belongs to the first of them,
/// so the form does not depend on the order atoms were merged in.
fn assign_shared_points(atoms: &mut [Atom]) {
    let deleted: BTreeSet<Rational> = atoms
        .iter()
        .flat_map(|a| a.deletions.iter().cloned())
        .collect();
    for x in deleted {
        let holders: Vec<usize> = (0..atoms.len())
            .filter(|&i| atoms[i].core_contains(&x))
            .collect();
        if holders.len() < 2 || !holders.iter().any(|&i| atoms[i].contains(&x)) {
            continue;
        }
        for (k, &i) in holders.iter().enumerate() {
            if k == 0 {
                atoms[i].deletions.remove(&x);
            } else {
                atoms[i].deletions.insert(x.clone());
            }
        }
    }
}

fn merge_intervals(mut v: Vec<Atom>) -> Vec<Atom> {
    let bounds = |a: &Atom| match &a.kind {
        AtomKind::Interval { lo, hi } => (lo.clone(), hi.clone()),
        _ => unreachable!(),
    };
    v.sort_by_key(|a| bounds(a).0);
    let mut out: Vec<Atom> = vec![];
    for a in v {
        if let Some(last) = out.last_mut() {
            let (l0, l1) = bounds(last);
            let (a0, a1) = bounds(&a);
            if l1 == a0 {
                // the shared endpoint is in the union iff either side keeps it
                let keep = last.contains(&l1) || a.contains(&a0);
                let mut dels: BTreeSet<Rational> =
                    last.deletions.union(&a.deletions).cloned().collect();
                if keep {
                    dels.remove(&l1);
                }
                *last = Atom {
                    kind: AtomKind::Interval { lo: l0, hi: a1 },
                    deletions: dels,
                };
                continue;
            }
        }
        out.push(a);
    }
    out
}

fn merge_cantor_siblings(mut v: Vec<Atom>) -> Vec<Atom> {
    loop {
        let mut merged = None;
        'search: for i in 0..v.len() {
            for j in 0..v.len() {
                if let (AtomKind::Cantor { t, s }, AtomKind::Cantor { t: t2, s: s2 }) =
                    (&v[i].kind, &v[j].kind)
                {
                    if i != j && s == s2 && *t2 == t + s * int(2) {
                        merged = Some((i, j, t.clone(), s * int(3)));
                        break 'search;
                    }
                }
            }
        }
        let Some((i, j, t, s)) = merged else {
            return v;
        };
        let dels: BTreeSet<Rational> = v[i].deletions.union(&v[j].deletions).cloned().collect();
        let (hi, lo) = (i.max(j), i.min(j));
        v.remove(hi);
        v.remove(lo);
        v.push(Atom {
            kind: AtomKind::Cantor { t, s },
            deletions: dels,
        });
    }
}

fn absorb_points(a: &mut Atom, points: &mut BTreeSet<Rational>) {
    let back: Vec<Rational> = a.deletions.intersection(points).cloned().collect();
    for x in back {
        a.deletions.remove(&x);
        points.remove(&x);
    }
    if let AtomKind::Seq(s) = &mut a.kind {
        while s.start > 1 && points.remove(&s.term(s.start - 1)) {
            s.start -= 1;
        }
    }
    points.retain(|x| !a.core_contains(x) || a.deletions.contains(x));
}

/// Canonical disjoint form of an arbitrary list of atoms.
pub fn repset_normalize(atoms: Vec<Atom>) -> Result<RepSet> {
    let mut acc = RepSet::empty();
    for a in atoms {
        acc = repset_union(&acc, &RepSet { atoms: vec![a] })?;
    }
    Ok(acc)
}

pub fn member(x: &Rational, s: &RepSet) -> bool {
    s.contains(x)
}

/// `(dim_H S, mu^d(S))`; the empty set gives `(0, 0)`.
pub fn hmeasure(s: &RepSet) -> HPair {
    let parts: Vec<HPair> = s.atoms.iter().map(Atom::hmeasure).collect();
    hpair_sum(&parts).expect("measures are nonnegative and dimensions come from the catalog")
}

fn diff_raw(a: &[Atom], b: &[Atom]) -> Result<Vec<Atom>> {
    let mut pieces: Vec<Atom> = a.to_vec();
    for y in b {
        let mut next = vec![];
        for x in &pieces {
            next.extend(diff_atoms(x, y)?);
        }
        pieces = next;
    }
    Ok(pieces)
}

pub fn repset_diff(a: &RepSet, b: &RepSet) -> Result<RepSet> {
    Ok(RepSet {
        atoms: canonical(diff_raw(&a.atoms, &b.atoms)?),
    })
}

pub fn repset_intersect(a: &RepSet, b: &RepSet) -> Result<RepSet> {
    let mut out = vec![];
    for x in &a.atoms {
        for y in &b.atoms {
            out.extend(intersect_atoms(x, y)?);
        }
    }
    Ok(RepSet {
        atoms: canonical(out),
    })
}

/// `A | B`, computed as `A | (B - A)` or, failing that, `(A - B) | B`.
pub fn repset_union(a: &RepSet, b: &RepSet) -> Result<RepSet> {
    let combine = |x: &[Atom], rest: Vec<Atom>| {
        let mut v = x.to_vec();
        v.extend(rest);
        RepSet {
            atoms: canonical(v),
        }
    };
    match diff_raw(&b.atoms, &a.atoms) {
        Ok(rest) => Ok(combine(&a.atoms, rest)),
        Err(HError::NotRepresentable(first)) => match diff_raw(&a.atoms, &b.atoms) {
            Ok(rest) => Ok(combine(&b.atoms, rest)),
            Err(HError::NotRepresentable(_)) => Err(HError::NotRepresentable(first)),
            Err(e) => Err(e),
        },
        Err(e) => Err(e),
    }
}

pub fn repset_symdiff(a: &RepSet, b: &RepSet) -> Result<RepSet> {
    let mut v = diff_raw(&a.atoms, &b.atoms)?;
    v.extend(diff_raw(&b.atoms, &a.atoms)?);
    Ok(RepSet {
        atoms: canonical(v),
    })
}

/// Set equality, decided through the symmetric difference.
pub fn repset_eq(a: &RepSet, b: &RepSet) -> Result<bool> {
    Ok(a == b || repset_symdiff(a, b)?.is_empty())
}

pub fn is_subset(a: &RepSet, b: &RepSet) -> Result<bool> {
    Ok(repset_diff(a, b)?.is_empty())
}

/// Witness of monotonicity: `mu_H(A) <= mu_H(B)` for `A` inside `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneCheck {
    pub measure_a: HPair,
    pub measure_b: HPair,
    pub holds: bool,
}

pub fn verify_monotone(a: &RepSet, b: &RepSet) -> Result<MonotoneCheck> {
    if !is_subset(a, b)? {
        return Err(crate::error::invalid(format!("{a} is not a subset of {b}")));
    }
    let (ma, mb) = (hmeasure(a), hmeasure(b));
    let holds = ma.try_cmp(&mb)? != Ordering::Greater;
    Ok(MonotoneCheck {
        measure_a: ma,
        measure_b: mb,
        holds,
    })
}

/// Witness of subadditivity: `mu_H(A | B) <= mu_H(A) + mu_H(B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubadditiveCheck {
    pub measure_union: HPair,
    pub measure_a: HPair,
    pub measure_b: HPair,
    pub sum: HPair,
    pub holds: bool,
}

pub fn verify_subadditive(a: &RepSet, b: &RepSet) -> Result<SubadditiveCheck> {
    let u = repset_union(a, b)?;
    let (mu, ma, mb) = (hmeasure(&u), hmeasure(a), hmeasure(b));
    let sum = ma.add(&mb)?;
    let holds = mu.try_cmp(&sum)? != Ordering::Greater;
    Ok(SubadditiveCheck {
        measure_union: mu,
        measure_a: ma,
        measure_b: mb,
        sum,
        holds,
    })
}

/// The unit interval, a frequent test fixture.
pub fn unit_interval() -> RepSet {
    RepSet::from_atom(Atom::interval(int(0), Rational::one()).expect("0 < 1"))
}
