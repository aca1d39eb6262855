use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{invalid, HError, Result};
use crate::hvalue::{Dimension, ExtReal, HPair};
use crate::num::{exact_root, fmt_rational, to_f64, Ball, Rational};

pub type Point2 = (Rational, Rational);

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanarAtom {
    Points(Vec<Point2>),
    Segment(Point2, Point2),
    /// Counterclockwise vertices of a filled convex polygon.
    Polygon(Vec<Point2>),
}

/// A finite union of pairwise disjoint planar atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarSet {
    atoms: Vec<PlanarAtom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hull {
    Empty,
    Point(Point2),
    Segment(Point2, Point2),
    Polygon(Vec<Point2>),
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

fn on_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    cross(a, b, p).is_zero()
        && p.0 >= a.0.clone().min(b.0.clone())
        && p.0 <= a.0.clone().max(b.0.clone())
        && p.1 >= a.1.clone().min(b.1.clone())
        && p.1 <= a.1.clone().max(b.1.clone())
}

fn segments_meet(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    let (d1, d2) = (
        cross(a, b, c).cmp(&Rational::zero()),
        cross(a, b, d).cmp(&Rational::zero()),
    );
    let (d3, d4) = (
        cross(c, d, a).cmp(&Rational::zero()),
        cross(c, d, b).cmp(&Rational::zero()),
    );
    if d1 != d2
        && d1 != Ordering::Equal
        && d2 != Ordering::Equal
        && d3 != d4
        && d3 != Ordering::Equal
        && d4 != Ordering::Equal
    {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

fn edges(v: &[Point2]) -> impl Iterator<Item = (&Point2, &Point2)> {
    v.iter().zip(v.iter().cycle().skip(1))
}

fn in_polygon(p: &Point2, v: &[Point2]) -> bool {
    edges(v).all(|(a, b)| !cross(a, b, p).is_negative())
}

fn polygon_meets_segment(v: &[Point2], a: &Point2, b: &Point2) -> bool {
    in_polygon(a, v) || in_polygon(b, v) || edges(v).any(|(c, d)| segments_meet(a, b, c, d))
}

fn meets(x: &PlanarAtom, y: &PlanarAtom) -> bool {
    use PlanarAtom::*;
    match (x, y) {
        (Points(p), Points(q)) => p.iter().any(|a| q.contains(a)),
        (Points(p), Segment(a, b)) | (Segment(a, b), Points(p)) => {
            p.iter().any(|c| on_segment(c, a, b))
        }
        (Points(p), Polygon(v)) | (Polygon(v), Points(p)) => p.iter().any(|c| in_polygon(c, v)),
        (Segment(a, b), Segment(c, d)) => segments_meet(a, b, c, d),
        (Segment(a, b), Polygon(v)) | (Polygon(v), Segment(a, b)) => polygon_meets_segment(v, a, b),
        (Polygon(v), Polygon(w)) => {
            v.iter().any(|p| in_polygon(p, w))
                || w.iter().any(|p| in_polygon(p, v))
                || edges(v).any(|(a, b)| edges(w).any(|(c, d)| segments_meet(a, b, c, d)))
        }
    }
}

fn check_atom(a: &PlanarAtom) -> Result<()> {
    match a {
        PlanarAtom::Points(p) => {
            if p.is_empty() {
                return Err(invalid("empty point list"));
            }
            for (i, x) in p.iter().enumerate() {
                if p[..i].contains(x) {
                    return Err(invalid("repeated point"));
                }
            }
        }
        PlanarAtom::Segment(a, b) if a == b => return Err(invalid("degenerate segment")),
        PlanarAtom::Polygon(v) => {
            if v.len() < 3 {
                return Err(invalid("a polygon needs three vertices"));
            }
            let n = v.len();
            for i in 0..n {
                let (a, b) = (&v[i], &v[(i + 1) % n]);
                if (0..n)
                    .filter(|&j| j != i && j != (i + 1) % n)
                    .any(|j| !cross(a, b, &v[j]).is_positive())
                {
                    return Err(invalid(
                        "polygon must be strictly convex and counterclockwise",
                    ));
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn area(v: &[Point2]) -> Rational {
    edges(v)
        .map(|(a, b)| &a.0 * &b.1 - &b.0 * &a.1)
        .fold(Rational::zero(), |s, x| s + x)
        / Rational::from_integer(2.into())
}

/// `sqrt(r)`, exact when `r` is a rational square.
fn sqrt_ext(r: &Rational) -> ExtReal {
    match exact_root(r, 2) {
        Some(s) => ExtReal::Finite(s),
        None => {
            let s = to_f64(r).sqrt();
            ExtReal::Approx(Ball::from_bounds(s * (1.0 - 4e-16), s * (1.0 + 4e-16)))
        }
    }
}

fn sq_len(a: &Point2, b: &Point2) -> Rational {
    let (dx, dy) = (&b.0 - &a.0, &b.1 - &a.1);
    &dx * &dx + &dy * &dy
}

impl PlanarSet {
    pub fn new(atoms: Vec<PlanarAtom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            check_atom(a)?;
            if let Some(b) = atoms[..i].iter().find(|b| meets(a, b)) {
                return Err(HError::DisjointnessViolated(format!("{a:?} meets {b:?}")));
            }
        }
        Ok(PlanarSet { atoms })
    }

    pub fn atoms(&self) -> &[PlanarAtom] {
        &self.atoms
    }

    fn vertices(&self) -> Vec<Point2> {
        let mut out = vec![];
        for a in &self.atoms {
            match a {
                PlanarAtom::Points(p) | PlanarAtom::Polygon(p) => out.extend(p.iter().cloned()),
                PlanarAtom::Segment(a, b) => out.extend([a.clone(), b.clone()]),
            }
        }
        out
    }
}

/// Planar `mu_H`: the top dimension present and its total measure.
pub fn planar_hmeasure(h: &PlanarSet) -> HPair {
    let polys: Vec<&Vec<Point2>> = h
        .atoms
        .iter()
        .filter_map(|a| {
            if let PlanarAtom::Polygon(v) = a {
                Some(v)
            } else {
                None
            }
        })
        .collect();
    if !polys.is_empty() {
        let total = polys
            .iter()
            .map(|v| area(v))
            .fold(Rational::zero(), |s, x| s + x);
        return HPair::new(Dimension::two(), total);
    }
    let segs: Vec<ExtReal> = h
        .atoms
        .iter()
        .filter_map(|a| {
            if let PlanarAtom::Segment(a, b) = a {
                Some(sqrt_ext(&sq_len(a, b)))
            } else {
                None
            }
        })
        .collect();
    if !segs.is_empty() {
        let total = segs
            .iter()
            .try_fold(ExtReal::zero(), |s, x| s.try_add(x))
            .expect("finite lengths");
        return HPair::new(Dimension::one(), total);
    }
    HPair::new(
        Dimension::zero(),
        Rational::from_integer(h.vertices().len().into()),
    )
}

pub fn convex_hull(h: &PlanarSet) -> Hull {
    let mut pts = h.vertices();
    pts.sort();
    pts.dedup();
    match pts.len() {
        0 => return Hull::Empty,
        1 => return Hull::Point(pts[0].clone()),
        _ => {}
    }
    let half = |iter: &mut dyn Iterator<Item = &Point2>| {
        let mut chain: Vec<Point2> = vec![];
        for p in iter {
            while chain.len() >= 2
                && !cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p).is_positive()
            {
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain.pop();
        chain
    };
    let mut hull = half(&mut pts.iter());
    hull.extend(half(&mut pts.iter().rev()));
    match hull.len() {
        2 => Hull::Segment(hull[0].clone(), hull[1].clone()),
        _ => Hull::Polygon(hull),
    }
}

/// `mu_H(Conv(H) - H)`.
pub fn defi_convex(h: &PlanarSet) -> Result<HPair> {
    Ok(match convex_hull(h) {
        Hull::Empty | Hull::Point(_) => HPair::zero(),
        Hull::Polygon(v) => {
            let own = h.atoms.iter().filter_map(|a| {
                if let PlanarAtom::Polygon(w) = a {
                    Some(area(w))
                } else {
                    None
                }
            });
            let gap = area(&v) - own.fold(Rational::zero(), |s, x| s + x);
            if gap.is_positive() {
                HPair::new(Dimension::two(), gap)
            } else {
                HPair::zero()
            }
        }
        Hull::Segment(a, b) => {
            let d2 = sq_len(&a, &b);
            let t =
                |p: &Point2| ((&p.0 - &a.0) * (&b.0 - &a.0) + (&p.1 - &a.1) * (&b.1 - &a.1)) / &d2;
            let covered = h
                .atoms
                .iter()
                .filter_map(|x| {
                    if let PlanarAtom::Segment(p, q) = x {
                        Some((t(p) - t(q)).abs())
                    } else {
                        None
                    }
                })
                .fold(Rational::zero(), |s, x| s + x);
            let gap = Rational::one() - covered;
            if gap.is_positive() {
                HPair::new(Dimension::one(), sqrt_ext(&d2).scale(&gap))
            } else {
                HPair::zero()
            }
        }
    })
}

impl fmt::Display for Hull {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |x: &Point2| format!("({}, {})", fmt_rational(&x.0), fmt_rational(&x.1));
        match self {
            Hull::Empty => write!(f, "empty"),
            Hull::Point(x) => write!(f, "point {}", p(x)),
            Hull::Segment(a, b) => write!(f, "segment {} -- {}", p(a), p(b)),
            Hull::Polygon(v) => write!(
                f,
                "polygon {}",
                v.iter().map(p).collect::<Vec<_>>().join(" ")
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn pt(x: i64, y: i64) -> Point2 {
        (int(x), int(y))
    }

    fn square() -> PlanarAtom {
        PlanarAtom::Polygon(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])
    }

    #[test]
    fn convex_sets_have_no_deficiency() {
        assert_eq!(
            defi_convex(&PlanarSet::new(vec![square()]).unwrap()).unwrap(),
            HPair::zero()
        );
        let seg = PlanarSet::new(vec![PlanarAtom::Segment(pt(0, 0), pt(3, 4))]).unwrap();
        assert_eq!(defi_convex(&seg).unwrap(), HPair::zero());
        assert_eq!(
            defi_convex(&PlanarSet::new(vec![PlanarAtom::Points(vec![pt(2, 2)])]).unwrap())
                .unwrap(),
            HPair::zero()
        );
    }

    #[test]
    fn hull_gaps() {
        let tri =
            PlanarSet::new(vec![PlanarAtom::Points(vec![pt(0, 0), pt(1, 0), pt(0, 1)])]).unwrap();
        assert_eq!(
            defi_convex(&tri).unwrap(),
            HPair::new(Dimension::two(), rat(1, 2))
        );
        let rails = PlanarSet::new(vec![
            PlanarAtom::Segment(pt(0, 0), pt(1, 0)),
            PlanarAtom::Segment(pt(0, 1), pt(1, 1)),
        ])
        .unwrap();
        assert_eq!(
            defi_convex(&rails).unwrap(),
            HPair::new(Dimension::two(), int(1))
        );
        let split = PlanarSet::new(vec![
            PlanarAtom::Segment(pt(0, 0), pt(3, 4)),
            PlanarAtom::Segment(pt(6, 8), pt(9, 12)),
        ])
        .unwrap();
        assert_eq!(
            defi_convex(&split).unwrap(),
            HPair::new(Dimension::one(), int(5))
        );
    }

    #[test]
    fn measures_and_validation() {
        assert_eq!(
            planar_hmeasure(&PlanarSet::new(vec![square()]).unwrap()),
            HPair::new(Dimension::two(), int(1))
        );
        let seg = PlanarSet::new(vec![PlanarAtom::Segment(pt(0, 0), pt(1, 1))]).unwrap();
        assert!((planar_hmeasure(&seg).m.to_f64() - 2f64.sqrt()).abs() < 1e-12);
        assert!(PlanarSet::new(vec![
            square(),
            PlanarAtom::Points(vec![(rat(1, 2), rat(1, 2))])
        ])
        .is_err());
        assert!(PlanarSet::new(vec![PlanarAtom::Polygon(vec![
            pt(0, 0),
            pt(0, 1),
            pt(1, 0)
        ])])
        .is_err());
        assert!(PlanarSet::new(vec![
            PlanarAtom::Segment(pt(0, 0), pt(2, 2)),
            PlanarAtom::Segment(pt(0, 2), pt(2, 0))
        ])
        .is_err());
    }
}
