//! Rational polynomials with exact real-root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{not_rep, Result};
use crate::num::{ceil_int, floor_int, fmt_rational, int, Rational};

/// `c_0 + c_1 x + ... + c_k x^k`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::new(vec![c])
    }

    /// `x`
    pub fn x() -> Poly {
        Poly::new(vec![int(0), int(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::num::to_f64(c))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::default();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// `p(c - x)`, or `p(-x)` for `c = 0`.
    pub fn reflect(&self, c: &Rational) -> Poly {
        let lin = Poly::new(vec![c.clone(), int(-1)]);
        self.compose(&lin)
    }

    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs.iter().rev().fold(Poly::default(), |acc, c| {
            acc.mul(inner).add(&Poly::constant(c.clone()))
        })
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![Rational::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / int(i as i64 + 1)),
        );
        Poly::new(out)
    }

    /// `int_a^b p`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let big = self.antiderivative();
        big.eval(b) - big.eval(a)
    }

    /// Euclidean division.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let dn = d.coeffs.len();
        if r.len() < dn {
            return (Poly::default(), self.clone());
        }
        let lead = d.lead();
        let mut q = vec![Rational::zero(); r.len() - dn + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dn - 1] / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&l.recip())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Same roots, all simple.
    pub fn square_free(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Multiplicity of `r` as a root.
    pub fn multiplicity(&self, r: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::new(vec![-r.clone(), int(1)]);
        let mut p = self.clone();
        let mut k = 0;
        while p.eval(r).is_zero() {
            p = p.div_rem(&lin).0;
            k += 1;
        }
        k
    }

    fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                return seq;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1.neg();
            if r.is_zero() {
                return seq;
            }
            seq.push(r);
        }
    }

    /// Every real root in `[lo, hi]`, sorted, each either exact (rational)
    /// or isolated in an open interval with non-root rational endpoints.
    pub fn real_roots(&self, lo: &Rational, hi: &Rational) -> Vec<Root> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let sf = self.square_free();
        let chain = sf.sturm();
        let mut out = vec![];
        if sf.eval(lo).is_zero() {
            out.push(Root::Exact(lo.clone()));
        }
        if lo < hi {
            isolate(&sf, &chain, lo.clone(), hi.clone(), &mut out);
            if sf.eval(hi).is_zero() {
                out.push(Root::Exact(hi.clone()));
            }
        }
        out.into_iter().map(|r| exact_if_rational(&sf, r)).collect()
    }

    /// The sign of `p` on `[lo, hi]` as a partition into closed pieces
    /// separated by sign changes. Each piece carries the sign taken on its
    /// interior. A sign change at an irrational point is not representable.
    pub fn sign_pieces(
        &self,
        lo: &Rational,
        hi: &Rational,
    ) -> Result<Vec<(Rational, Rational, Ordering)>> {
        let mut cuts = vec![lo.clone()];
        for r in self.real_roots(lo, hi) {
            match r {
                Root::Exact(x) => {
                    if &x > lo && &x < hi && self.multiplicity(&x) % 2 == 1 {
                        cuts.push(x);
                    }
                }
                Root::Open(a, b) => {
                    if self.eval(&a).signum() != self.eval(&b).signum() {
                        return Err(not_rep(format!(
                            "sign change at an irrational root in ({}, {})",
                            fmt_rational(&a),
                            fmt_rational(&b)
                        )));
                    }
                }
            }
        }
        cuts.push(hi.clone());
        Ok(cuts
            .windows(2)
            .map(|w| {
                let s = self.interior_sign(&w[0], &w[1]);
                (w[0].clone(), w[1].clone(), s)
            })
            .collect())
    }

    /// Sign on `(a, b)` for an interval without sign changes.
    fn interior_sign(&self, a: &Rational, b: &Rational) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        // a nonzero polynomial has finitely many roots; probe until one misses
        let mut k = 2i64;
        loop {
            for j in 1..k {
                let x = a + (b - a) * Rational::new(BigInt::from(j), BigInt::from(k));
                let v = self.eval(&x);
                if !v.is_zero() {
                    return v.cmp(&Rational::zero());
                }
            }
            k += 1;
        }
    }

    /// `p >= 0` everywhere on `[lo, hi]`.
    pub fn nonneg_on(&self, lo: &Rational, hi: &Rational) -> bool {
        if self.eval(lo).is_negative() || self.eval(hi).is_negative() {
            return false;
        }
        match self.sign_pieces(lo, hi) {
            Ok(pieces) => pieces.iter().all(|(_, _, s)| *s != Ordering::Less),
            Err(_) => false,
        }
    }
}

/// An isolated real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Exact(Rational),
    Open(Rational, Rational),
}

fn sign_changes(chain: &[Poly], x: &Rational) -> usize {
    let mut last = Ordering::Equal;
    let mut n = 0;
    for p in chain {
        let s = p.eval(x).cmp(&Rational::zero());
        if s != Ordering::Equal {
            if last != Ordering::Equal && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Roots in the open interval `(a, b)` of a square-free polynomial.
fn isolate(sf: &Poly, chain: &[Poly], a: Rational, b: Rational, out: &mut Vec<Root>) {
    let b_root = sf.eval(&b).is_zero();
    let n = sign_changes(chain, &a) - sign_changes(chain, &b) - usize::from(b_root);
    if n == 0 {
        return;
    }
    if n == 1 && !b_root && !sf.eval(&a).is_zero() {
        out.push(Root::Open(a, b));
        return;
    }
    let m = (&a + &b) / int(2);
    isolate(sf, chain, a, m.clone(), out);
    if sf.eval(&m).is_zero() {
        out.push(Root::Exact(m.clone()));
    }
    isolate(sf, chain, m, b, out);
}

/// A rational root `u/v` of a primitive integer polynomial has `v` dividing
/// the leading coefficient `L`, so it is `k/L` for an integer `k`. Shrinking
/// the isolating interval below width `1/L` leaves at most two candidates.
fn exact_if_rational(sf: &Poly, r: Root) -> Root {
    let Root::Open(mut a, mut b) = r else {
        return r;
    };
    let lead = primitive_lead(sf);
    let width = Rational::new(BigInt::one(), lead.clone());
    let sa = sf.eval(&a).cmp(&Rational::zero());
    while &b - &a >= width {
        let m = (&a + &b) / int(2);
        let v = sf.eval(&m);
        if v.is_zero() {
            return Root::Exact(m);
        }
        if v.cmp(&Rational::zero()) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    let l = Rational::from_integer(lead);
    let (k0, k1) = (ceil_int(&(&a * &l)), floor_int(&(&b * &l)));
    let mut k = k0;
    while k <= k1 {
        let x = Rational::from_integer(k.clone()) / &l;
        if sf.eval(&x).is_zero() {
            return Root::Exact(x);
        }
        k += 1;
    }
    Root::Open(a, b)
}

fn primitive_lead(p: &Poly) -> BigInt {
    let den = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    (ints.last().expect("nonzero polynomial") / g).abs()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => fmt_rational(c),
                1 => format!("{}*x", fmt_rational(c)),
                _ => format!("{}*x^{}", fmt_rational(c), i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        assert_eq!(a.mul(&a), p(&[1, 2, 1]));
        assert_eq!(p(&[1, 2, 1]).div_rem(&a), (a.clone(), Poly::default()));
        assert_eq!(p(&[0, 0, 3]).derivative(), p(&[0, 6]));
        assert_eq!(Poly::x().integrate(&int(0), &int(1)), rat(1, 2));
        assert_eq!(p(&[0, 1]).reflect(&int(0)), p(&[0, -1]));
    }

    #[test]
    fn roots_rational_and_irrational() {
        // (x - 1/3)(x^2 - 2)
        let q = Poly::new(vec![rat(2, 3), int(-2), rat(-1, 3), int(1)]);
        let roots = q.real_roots(&int(-2), &int(2));
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&Root::Exact(rat(1, 3))));
        let open = roots.iter().filter(|r| matches!(r, Root::Open(..))).count();
        assert_eq!(open, 2);
    }

    #[test]
    fn double_roots_and_endpoints() {
        let q = p(&[0, 0, 1]);
        assert_eq!(q.real_roots(&int(-1), &int(1)), vec![Root::Exact(int(0))]);
        assert_eq!(q.real_roots(&int(0), &int(1)), vec![Root::Exact(int(0))]);
        assert_eq!(q.multiplicity(&int(0)), 2);
        assert!(q.nonneg_on(&int(-1), &int(1)));
        assert!(!Poly::x().nonneg_on(&int(-1), &int(1)));
    }

    #[test]
    fn sign_pieces_split_at_rational_changes() {
        let pieces = Poly::x().sign_pieces(&int(-1), &int(1)).unwrap();
        assert_eq!(
            pieces,
            vec![
                (int(-1), int(0), Ordering::Less),
                (int(0), int(1), Ordering::Greater)
            ]
        );
        let irr = p(&[-2, 0, 1]);
        assert!(irr.sign_pieces(&int(0), &int(2)).is_err());
        assert!(!irr.nonneg_on(&int(0), &int(2)));
        assert!(p(&[2, 0, -1]).nonneg_on(&int(-1), &int(1)));
    }
}
