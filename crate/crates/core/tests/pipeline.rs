use std::sync::Arc;

use pkl_core::field::{Fp, Rational};
use pkl_core::hecke::{self, Hecke, HeckeElt, LaurentPoly};
use pkl_core::soergel::pcan::PCanTable;
use pkl_core::soergel::bs_character;
use pkl_core::tilt;
use pkl_core::weyl::WeylGroup;

fn gl2() -> Arc<WeylGroup> {
    Arc::new(WeylGroup::from_name("GL2").unwrap())
}

#[test]
fn decompositions_reconstruct_bott_samelson_characters() {
    let g = gl2();
    let mut t = PCanTable::<Fp<2>>::new(g.clone()).unwrap();
    let e = g.identity();
    for word in [vec![0, 1, 0], vec![1, 0, 1, 0], vec![0, 0, 1], vec![1, 0, 0, 1]] {
        let mult = t.decompose_bs(&e, &word).unwrap();
        let mut sum = HeckeElt::new();
        for (y, m) in &mult {
            let pb = t.p_canonical(y).unwrap();
            hecke::add_scaled(&mut sum, &pb, m);
            assert!(m.has_nonnegative_coeffs() && m.is_bar_invariant(), "{word:?}");
        }
        assert_eq!(sum, bs_character(&t.hecke, &e, &word, 0), "{word:?}");
    }
}

#[test]
fn first_differences_from_kl_in_affine_a1() {
    let g = gl2();
    let h = Hecke::new(g.clone());
    let mut two = PCanTable::<Fp<2>>::new(g.clone()).unwrap();
    let mut three = PCanTable::<Fp<3>>::new(g.clone()).unwrap();
    let differs_at = |t: &mut dyn FnMut(&pkl_core::weyl::ExtWeylElt) -> HeckeElt| -> Vec<usize> {
        let mut lens: Vec<usize> = g.enumerate_waff(5).iter().filter(|w| t(w) != h.canonical_basis(w)).map(|w| g.length(w)).collect();
        lens.dedup();
        lens
    };
    assert_eq!(differs_at(&mut |w| two.p_canonical(w).unwrap()), vec![3, 5]);
    assert_eq!(differs_at(&mut |w| three.p_canonical(w).unwrap()), vec![4, 5]);

    // BS(s0 s1 s0) = B(s0 s1 s0) ⊕ B(s0) in characteristic 2
    let w = g.parse("s0.s1.s0").unwrap();
    let mut want = h.canonical_basis(&w);
    hecke::add_scaled(&mut want, &h.canonical_basis(&g.parse("s0").unwrap()), &LaurentPoly::one());
    assert_eq!(two.p_canonical(&w).unwrap(), want);
}

#[test]
fn length_zero_twists() {
    let g = gl2();
    let mut t = PCanTable::<Fp<2>>::new(g.clone()).unwrap();
    let omega = g.omega_elements(1).into_iter().find(|o| !g.is_identity(o)).unwrap();
    let u = g.parse("s0.s1.s0").unwrap();
    let x = g.mul(&omega, &u);
    let pb = t.p_canonical(&x).unwrap();
    let pu = t.p_canonical(&u).unwrap();
    assert_eq!(pb, t.hecke.left_mul_omega(&omega, &pu));
    assert_eq!(t.hecke.bar(&pb), pb);
    assert_eq!(t.p_kl(&x, &x).unwrap(), LaurentPoly::one());
}

#[test]
fn characteristic_zero_multiplicities_are_kl_values() {
    let g = gl2();
    let h = Hecke::new(g.clone());
    let mut t = PCanTable::<Rational>::new(g.clone()).unwrap();
    let elts = g.enumerate_waff(4);
    for w in &elts {
        for y in &elts {
            let want = h.kl_poly(y, w).eval_one() as u64;
            assert_eq!(tilt::tilt_mult(&mut t, w, y).unwrap(), want);
        }
    }
}

#[test]
fn parabolic_table_over_affine_a2() {
    let g = Arc::new(WeylGroup::from_name("A2-adj").unwrap());
    let mut t = PCanTable::<Fp<2>>::new(g.clone()).unwrap();
    let s1 = g.simple_by_name("s1").unwrap();
    let s2 = g.simple_by_name("s2").unwrap();
    let m = tilt::mult_table(&mut t, &[s1], &[s2], 4).unwrap();
    assert!(!m.elements.is_empty());
    for x in &m.elements {
        assert_eq!(m.get(x, x), 1, "{x}");
    }
}
