use std::sync::Arc;

use proptest::prelude::*;

use pkl_core::hecke::{Hecke, HeckeElt, LaurentPoly};
use pkl_core::root_datum::{smith_invariants, RootDatum};
use pkl_core::weyl::{ExtWeylElt, WeylGroup};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Order of Z^2 / (column span), counted as lattice points in a fundamental box.
fn brute_force_index(a: i64, b: i64, c: i64, d: i64) -> i64 {
    let det = (a * d - b * c).abs();
    let mut seen = std::collections::HashSet::new();
    for x in 0..det {
        for y in 0..det {
            // reduce (x, y) modulo the lattice via its adjugate coordinates
            let u = (d * x - c * y).rem_euclid(det);
            let v = (-b * x + a * y).rem_euclid(det);
            seen.insert((u, v));
        }
    }
    seen.len() as i64
}

proptest! {
    #[test]
    fn smith_matches_determinant_and_gcd(a in -5i64..6, b in -5i64..6, c in -5i64..6, d in -5i64..6) {
        let det = a * d - b * c;
        prop_assume!(det != 0);
        let inv = smith_invariants(&[vec![a, b], vec![c, d]]);
        prop_assert_eq!(inv.len(), 2);
        prop_assert_eq!(inv[0], gcd(gcd(a, b), gcd(c, d)));
        prop_assert_eq!(inv[1] % inv[0], 0);
        prop_assert_eq!(inv[0] * inv[1], det.abs());
        prop_assert_eq!(inv[0] * inv[1], brute_force_index(a, b, c, d));
    }

    #[test]
    fn hecke_bar_and_associativity(w1 in prop::collection::vec(0usize..3, 0..4),
                                   w2 in prop::collection::vec(0usize..3, 0..4),
                                   w3 in prop::collection::vec(0usize..3, 0..3),
                                   e in -3i32..4) {
        let g = Arc::new(WeylGroup::from_name("A2-sc").unwrap());
        let h = Hecke::new(g.clone());
        let elt = |w: &[usize], k: i32| -> HeckeElt {
            let mut x = h.std(&g.product(w));
            x.insert(g.identity(), LaurentPoly::monomial(k, 2));
            x
        };
        let (a, b, c) = (elt(&w1, e), elt(&w2, -e), elt(&w3, 1));
        prop_assert_eq!(h.bar(&h.bar(&a)), a.clone());
        prop_assert_eq!(h.mul(&h.mul(&a, &b), &c), h.mul(&a, &h.mul(&b, &c)));
        prop_assert_eq!(h.bar(&h.mul(&a, &b)), h.mul(&h.bar(&a), &h.bar(&b)));
    }

    #[test]
    fn length_is_subadditive_and_inverse_invariant(w1 in prop::collection::vec(0usize..3, 0..7),
                                                   w2 in prop::collection::vec(0usize..3, 0..7)) {
        let g = WeylGroup::from_name("A2-adj").unwrap();
        let (x, y) = (g.product(&w1), g.product(&w2));
        prop_assert!(g.length(&g.mul(&x, &y)) <= g.length(&x) + g.length(&y));
        prop_assert_eq!(g.length(&g.inv(&x)), g.length(&x));
        prop_assert!(g.length(&x) <= w1.len());
        prop_assert_eq!(g.length(&x) % 2, w1.len() % 2);
    }
}

#[test]
fn components_do_not_depend_on_factor_order() {
    let kinds = |name: &str| {
        let mut k: Vec<String> = RootDatum::named(name).unwrap().components().unwrap().iter().map(|c| c.kind.to_string()).collect();
        k.sort();
        k
    };
    assert_eq!(kinds("A1-scxB2-sc"), kinds("B2-scxA1-sc"));
    assert_eq!(kinds("G2-scxA2-adj"), vec!["A2".to_string(), "G2".to_string()]);
}

#[test]
fn datum_json_round_trip() {
    for name in ["GL2", "GL3", "A2-adj", "B2-sc", "G2-sc", "A1-scxA1-sc"] {
        let d = RootDatum::named(name).unwrap();
        let json = serde_json::to_string(&d.to_doc()).unwrap();
        let back = RootDatum::from_json(&json).unwrap();
        assert_eq!(back.fingerprint(), d.fingerprint());
    }
}

#[test]
fn bruhat_order_is_the_support_of_kl_elements() {
    let g = Arc::new(WeylGroup::from_name("GL2").unwrap());
    let h = Hecke::new(g.clone());
    let elts: Vec<ExtWeylElt> = g.enumerate_waff(5);
    for w in &elts {
        let b = h.canonical_basis(w);
        for y in &elts {
            assert_eq!(g.bruhat_leq(y, w), b.contains_key(y), "{} <= {}", g.display(y), g.display(w));
        }
    }
}
