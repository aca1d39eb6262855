use std::cmp::Ordering;

use proptest::prelude::*;

use hdint_core::doc::{document_from_json, document_to_json, Document};
use hdint_core::gen;
use hdint_core::hintegral::{h_integral, Domain};
use hdint_core::metrics::d_s;
use hdint_core::num::{int, rat, Rational};
use hdint_core::setalg::{hmeasure, member, repset_diff, repset_intersect, repset_union};
use hdint_core::{Dimension, ExtReal, HError, HPair};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn measure() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        8 => rational().prop_map(ExtReal::Finite),
        1 => Just(ExtReal::PosInf),
        1 => Just(ExtReal::NegInf),
    ]
}

fn dimension() -> impl Strategy<Value = Dimension> {
    prop_oneof![
        4 => (0i64..=6, 1i64..=3).prop_map(|(n, d)| Dimension::from_rational(rat(n, d))),
        1 => Just(Dimension::cantor()),
    ]
}

fn pair() -> impl Strategy<Value = HPair> {
    (dimension(), measure()).prop_map(|(d, m)| HPair::new(d, m))
}

fn eq(a: &HPair, b: &HPair) -> bool {
    a.try_cmp(b).unwrap() == Ordering::Equal
}

/// `a + b`, or `None` when the measures are opposite infinities at the top dimension.
fn sum(a: &HPair, b: &HPair) -> Option<HPair> {
    match a.add(b) {
        Err(HError::UndefinedSum(_)) => None,
        r => Some(r.unwrap()),
    }
}

fn nonneg_pair() -> impl Strategy<Value = HPair> {
    let m = prop_oneof![
        8 => (0i64..=40, 1i64..=12).prop_map(|(n, d)| ExtReal::Finite(rat(n, d))),
        1 => Just(ExtReal::PosInf),
    ];
    (dimension(), m).prop_map(|(d, m)| HPair::new(d, m))
}

fn sample_x() -> impl Strategy<Value = Rational> {
    (-8i64..=200, 1i64..=24).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn pair_addition_commutes(a in pair(), b in pair()) {
        if let (Some(x), Some(y)) = (sum(&a, &b), sum(&b, &a)) {
            prop_assert!(eq(&x, &y));
        }
    }

    #[test]
    fn pair_addition_associates(a in pair(), b in pair(), c in pair()) {
        let left = sum(&a, &b).and_then(|ab| sum(&ab, &c));
        let right = sum(&b, &c).and_then(|bc| sum(&a, &bc));
        if let (Some(l), Some(r)) = (left, right) {
            prop_assert!(eq(&l, &r));
        }
    }

    #[test]
    fn zero_is_neutral(a in pair()) {
        prop_assert!(eq(&a.add(&HPair::zero()).unwrap(), &a));
    }

    #[test]
    fn order_is_lexicographic(a in pair(), b in pair()) {
        let by_dim = a.d.to_f64().partial_cmp(&b.d.to_f64()).unwrap();
        let expected = if a.d == b.d { a.m.cmp_tol(&b.m) } else { by_dim };
        prop_assert_eq!(a.try_cmp(&b).unwrap(), expected);
    }

    #[test]
    fn order_is_compatible_with_addition(a in nonneg_pair(), b in nonneg_pair(), c in nonneg_pair()) {
        if a.leq(&b).unwrap() {
            prop_assert!(a.add(&c).unwrap().leq(&b.add(&c).unwrap()).unwrap());
        }
    }

    #[test]
    fn set_operations_respect_membership(seed in any::<u64>(), x in sample_x()) {
        let mut g = gen::rng(seed);
        let (a, b) = (gen::set(&mut g, true), gen::set(&mut g, true));
        let (ina, inb) = (member(&x, &a), member(&x, &b));
        match repset_union(&a, &b) {
            Ok(u) => prop_assert_eq!(member(&x, &u), ina || inb),
            Err(e) => prop_assume!(matches!(e, HError::NotRepresentable(_))),
        }
        match repset_intersect(&a, &b) {
            Ok(i) => prop_assert_eq!(member(&x, &i), ina && inb),
            Err(e) => prop_assume!(matches!(e, HError::NotRepresentable(_))),
        }
        match repset_diff(&a, &b) {
            Ok(d) => prop_assert_eq!(member(&x, &d), ina && !inb),
            Err(e) => prop_assume!(matches!(e, HError::NotRepresentable(_))),
        }
    }

    #[test]
    fn measure_is_monotone(seed in any::<u64>()) {
        let mut g = gen::rng(seed);
        let (a, b) = (gen::set(&mut g, true), gen::set(&mut g, true));
        let u = repset_union(&a, &b);
        prop_assume!(u.is_ok());
        let u = u.unwrap();
        prop_assert!(hmeasure(&a).leq(&hmeasure(&u)).unwrap());
        prop_assert!(hmeasure(&b).leq(&hmeasure(&u)).unwrap());
    }

    #[test]
    fn set_distance_is_symmetric_and_vanishes_on_the_diagonal(seed in any::<u64>()) {
        let mut g = gen::rng(seed);
        let (a, b) = (gen::set(&mut g, true), gen::set(&mut g, true));
        prop_assert!(d_s(&a, &a).unwrap().is_zero());
        if let (Ok(ab), Ok(ba)) = (d_s(&a, &b), d_s(&b, &a)) {
            prop_assert!(eq(&ab.value, &ba.value));
        }
    }

    #[test]
    fn positive_scaling_scales_the_measure(seed in any::<u64>(), n in 1i64..=9, d in 1i64..=5) {
        let mut g = gen::rng(seed);
        let f = gen::function(&mut g, true);
        let c = rat(n, d);
        let before = h_integral(&f, &Domain::All).unwrap();
        let after = h_integral(&f.scalar_mul(&c), &Domain::All).unwrap();
        prop_assert!(eq(&after, &HPair::new(before.d.clone(), before.m.scale(&c))));
    }

    #[test]
    fn negation_flips_the_measure(seed in any::<u64>()) {
        let mut g = gen::rng(seed);
        let f = gen::function(&mut g, false);
        let before = h_integral(&f, &Domain::All);
        prop_assume!(!matches!(before, Err(HError::NotRepresentable(_))));
        let before = before.unwrap();
        let after = h_integral(&f.scalar_mul(&int(-1)), &Domain::All).unwrap();
        prop_assert!(eq(&after, &HPair::new(before.d.clone(), before.m.neg())));
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), p in pair()) {
        let mut g = gen::rng(seed);
        let docs = [
            Document::Set(gen::set(&mut g, true)),
            Document::Function(gen::function(&mut g, false).into()),
            Document::Pair(p),
        ];
        for doc in docs {
            let back = document_from_json(&document_to_json(&doc)).unwrap();
            prop_assert_eq!(back, doc);
        }
    }
}

#[test]
fn signed_measures_break_order_compatibility() {
    let (a, b, c) = (
        HPair::zero(),
        HPair::new(Dimension::one(), int(-1)),
        HPair::new(Dimension::one(), int(0)),
    );
    assert!(a.leq(&b).unwrap());
    assert!(!a.add(&c).unwrap().leq(&b.add(&c).unwrap()).unwrap());
}
