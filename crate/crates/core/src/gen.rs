//! Seeded random inputs for the check suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hintegral::{Domain, Expr, PiecewiseFunction, SeriesExpr};
use crate::hvalue::{CoefficientSeries, Dimension, ExtReal, HPair};
use crate::num::{int, rat, Rational};
use crate::poly::Poly;
use crate::setalg::{repset_normalize, Atom, RepSet, SeqSpec};

pub type Gen = ChaCha8Rng;

pub fn rng(seed: u64) -> Gen {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| <= num`, `1 <= q <= den`.
pub fn rational(g: &mut Gen, num: i64, den: i64) -> Rational {
    rat(g.gen_range(-num..=num), g.gen_range(1..=den))
}

pub fn positive(g: &mut Gen, num: i64, den: i64) -> Rational {
    rat(g.gen_range(1..=num), g.gen_range(1..=den))
}

/// Dimensions the atom catalog produces, plus a few rationals.
pub fn dimension(g: &mut Gen) -> Dimension {
    match g.gen_range(0..6) {
        0 => Dimension::zero(),
        1 => Dimension::one(),
        2 => Dimension::cantor(),
        3 => Dimension::from_rational(rat(1, 2)),
        4 => Dimension::from_rational(rat(g.gen_range(1..=3), 4)),
        _ => Dimension::two(),
    }
}

/// A pair with measure in `[0, +inf]`.
pub fn pair(g: &mut Gen) -> HPair {
    let m = if g.gen_ratio(1, 12) {
        ExtReal::PosInf
    } else {
        ExtReal::Finite(rat(g.gen_range(0..=40), g.gen_range(1..=6)))
    };
    HPair { d: dimension(g), m }
}

/// Start of slot `k`; slots `[2k, 2k + 1]` never meet.
pub fn slot(k: i64) -> Rational {
    int(2 * k)
}

fn sub_interval(g: &mut Gen, k: i64) -> Atom {
    let a = rat(g.gen_range(0..4), 8);
    let b = rat(g.gen_range(5..=8), 8);
    Atom::interval(slot(k) + a, slot(k) + b).expect("a < b")
}

fn cantor_in(g: &mut Gen, k: i64) -> Atom {
    // nested copies right of the slot's sequence limit
    let s = [rat(1, 2), rat(1, 6), rat(1, 18)][g.gen_range(0..3)].clone();
    Atom::cantor(slot(k) + rat(1, 2), s).expect("s != 0")
}

/// A sequence inside slot `k`: harmonic in even slots, ratio-1/2 geometric
/// in odd ones, so sequences sharing a limit share a family.
pub fn seq_in(g: &mut Gen, k: i64) -> SeqSpec {
    if k % 2 == 0 {
        SeqSpec::harmonic(slot(k), rat(1, g.gen_range(1..=3))).expect("b != 0")
    } else {
        SeqSpec::geometric(slot(k), rat(1, 1 << g.gen_range(0..3)), rat(1, 2)).expect("valid ratio")
    }
}

fn points_in(g: &mut Gen, k: i64) -> Atom {
    let n = g.gen_range(1..=3);
    Atom::points((0..n).map(|_| slot(k) + rat(g.gen_range(0..=16), 16)))
}

/// One atom inside slot `k`.
pub fn atom_in(g: &mut Gen, k: i64, allow_cantor: bool) -> Atom {
    match g.gen_range(0..if allow_cantor { 4 } else { 3 }) {
        0 => sub_interval(g, k),
        1 => points_in(g, k),
        2 => Atom::seq(seq_in(g, k)),
        _ => cantor_in(g, k),
    }
}

/// A union of up to three atoms in slots `0..4`; slots may repeat, so atoms
/// can overlap before normalization.
pub fn set(g: &mut Gen, allow_cantor: bool) -> RepSet {
    set_in(g, &[0, 1, 2, 3], allow_cantor)
}

/// Like [`set`], drawing slots from `slots` only.
pub fn set_in(g: &mut Gen, slots: &[i64], allow_cantor: bool) -> RepSet {
    loop {
        let n = g.gen_range(1..=3);
        let atoms: Vec<Atom> = (0..n)
            .map(|_| {
                let k = *slots.choose(g).expect("nonempty slots");
                atom_in(g, k, allow_cantor)
            })
            .collect();
        if let Ok(s) = repset_normalize(atoms) {
            return s;
        }
    }
}

fn nonneg_poly(g: &mut Gen) -> Poly {
    match g.gen_range(0..3) {
        0 => Poly::constant(positive(g, 5, 3)),
        1 => Poly::new(vec![positive(g, 4, 2), positive(g, 3, 2)]),
        _ => {
            let r = rational(g, 8, 2);
            let lin = Poly::new(vec![-r, int(1)]);
            lin.mul(&lin).scale(&positive(g, 3, 2))
        }
    }
}

fn signed_poly(g: &mut Gen, k: i64) -> Poly {
    // rational roots keep sign changes exact
    let r = slot(k) + rat(g.gen_range(0..=8), 8);
    let lin = Poly::new(vec![-r, int(1)]);
    match g.gen_range(0..3) {
        0 => lin.scale(&rational(g, 4, 2)),
        1 => lin
            .mul(&Poly::new(vec![
                -(slot(k) + rat(g.gen_range(0..=8), 8)),
                int(1),
            ]))
            .scale(&rational(g, 3, 1)),
        _ => Poly::constant(rational(g, 5, 2)),
    }
}

fn geometric_values(g: &mut Gen, signed: bool) -> SeriesExpr {
    let a = if signed {
        rational(g, 4, 2)
    } else {
        positive(g, 4, 2)
    };
    let r = rat(g.gen_range(1..=2), 3);
    let r = if signed && g.gen_bool(0.3) { -r } else { r };
    SeriesExpr::single(CoefficientSeries::geometric(a, r).expect("|r| < 1"))
        .expect("integer exponent")
}

/// An integrable function on disjoint atoms in distinct slots.
pub fn function(g: &mut Gen, nonneg: bool) -> PiecewiseFunction {
    let mut slots: Vec<i64> = (0..5).collect();
    slots.shuffle(g);
    let n = g.gen_range(1..=3);
    let mut pieces = vec![];
    for &k in &slots[..n] {
        let value = |g: &mut Gen| {
            if nonneg {
                positive(g, 5, 2)
            } else {
                rational(g, 5, 2)
            }
        };
        pieces.push(match g.gen_range(0..5) {
            0 => (sub_interval(g, k), Expr::Const(value(g))),
            1 => {
                let p = if nonneg {
                    nonneg_poly(g)
                } else {
                    signed_poly(g, k)
                };
                (
                    Atom::interval(slot(k), slot(k) + int(1)).expect("unit"),
                    Expr::Poly(p),
                )
            }
            2 => (points_in(g, k), Expr::Const(value(g))),
            3 => (
                Atom::seq(seq_in(g, k)),
                Expr::Series(geometric_values(g, !nonneg)),
            ),
            _ => (cantor_in(g, k), Expr::Const(value(g))),
        });
    }
    PiecewiseFunction::new(pieces, Domain::All).expect("slots are disjoint")
}

/// A nonzero scalar.
pub fn scalar(g: &mut Gen) -> Rational {
    let c = rational(g, 6, 3);
    if c == int(0) {
        int(1)
    } else {
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_repeat() {
        let (mut a, mut b) = (rng(7), rng(7));
        for _ in 0..20 {
            assert_eq!(function(&mut a, false), function(&mut b, false));
            assert_eq!(set(&mut a, true), set(&mut b, true));
            assert_eq!(pair(&mut a), pair(&mut b));
        }
    }

    #[test]
    fn nonneg_functions_are_nonneg() {
        let mut g = rng(1);
        for _ in 0..50 {
            assert!(function(&mut g, true).is_nonneg());
        }
    }
}
