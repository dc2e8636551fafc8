//! Krull–Schmidt decomposition of a bimodule through its degree-zero
//! endomorphism algebra.

use super::algebra::{coords, independent_mats, primitive_idempotents, radical};
use super::bimodule::{Bimodule, Label};
use super::hom::{constant_part, hom_space};
use super::SoergelError;
use crate::field::Field;
use crate::linalg::{independent_subset, Mat};
use crate::poly::{Poly, PolyMat};

#[derive(Clone, Debug)]
pub struct Summand<F: Field> {
    pub idempotent: PolyMat<F>,
    pub module: Bimodule<F>,
}

fn from_const<F: Field>(m: &Mat<F>) -> PolyMat<F> {
    PolyMat { rows: m.rows, cols: m.cols, data: m.data.iter().map(|c| Poly::constant(c.clone())).collect() }
}

fn newton<F: Field>(mut x: PolyMat<F>) -> PolyMat<F> {
    let three = F::from_i64(3);
    let two = F::from_i64(2);
    loop {
        let x2 = x.mul(&x);
        if x2 == x {
            return x;
        }
        let x3 = x2.mul(&x);
        x = x2.scale(&three).sub(&x3.scale(&two));
    }
}

/// Splits `M` into indecomposable summands given by primitive idempotents of
/// `End^0(M)`.
pub fn end0_split<F: Field>(m: &Bimodule<F>) -> Result<Vec<Summand<F>>, SoergelError> {
    let n = m.rank();
    let basis = hom_space(m, m, 0)?;
    let bars: Vec<Mat<F>> = basis.iter().map(|b| constant_part(b, &m.degrees, &m.degrees)).collect();
    let idx = independent_mats(&bars);
    let abar: Vec<Mat<F>> = idx.iter().map(|&i| bars[i].clone()).collect();
    let lifts: Vec<&PolyMat<F>> = idx.iter().map(|&i| &basis[i]).collect();
    let rad = radical(&abar);
    let ids = primitive_idempotents(&abar, &rad)?;
    if ids.len() == 1 {
        return Ok(vec![Summand { idempotent: PolyMat::identity(n), module: m.clone() }]);
    }
    let one = PolyMat::identity(n);
    let mut acc = PolyMat::zeros(n, n);
    let mut lifted = Vec::with_capacity(ids.len());
    for e in &ids[..ids.len() - 1] {
        let c = coords(&abar, e).expect("idempotent lies in the algebra");
        let mut a = PolyMat::zeros(n, n);
        for (l, x) in lifts.iter().zip(&c) {
            if !x.is_zero() {
                a = a.add(&l.scale(x));
            }
        }
        let comp = one.sub(&acc);
        let f = newton(comp.mul(&a).mul(&comp));
        acc = acc.add(&f);
        lifted.push(f);
    }
    lifted.push(one.sub(&acc));
    lifted
        .into_iter()
        .map(|f| {
            let module = materialize(m, &f)?;
            Ok(Summand { idempotent: f, module })
        })
        .collect()
}

fn pivot_columns<F: Field>(m: &Mat<F>) -> Vec<usize> {
    m.clone().rref()
}

/// The image of the idempotent `f` as a bimodule in its own right.
pub fn materialize<F: Field>(m: &Bimodule<F>, f: &PolyMat<F>) -> Result<Bimodule<F>, SoergelError> {
    let n = m.rank();
    let one = PolyMat::identity(n);
    let g = one.sub(f);
    let jf = pivot_columns(&constant_part(f, &m.degrees, &m.degrees));
    let jg = pivot_columns(&constant_part(&g, &m.degrees, &m.degrees));
    if jf.len() + jg.len() != n {
        return Err(SoergelError::IdentificationFailure("idempotent image is not a graded direct summand".into()));
    }
    let k = jf.len();
    let cols: Vec<Vec<Poly<F>>> = jf.iter().map(|&j| f.column(j)).chain(jg.iter().map(|&j| g.column(j))).collect();
    let new_deg: Vec<i32> = jf.iter().chain(&jg).map(|&j| m.degrees[j]).collect();
    let p = PolyMat::from_columns(n, &cols);
    let pbar = constant_part(&p, &new_deg, &m.degrees);
    let pbar_inv = from_const(&pbar.inverse().ok_or_else(|| SoergelError::IdentificationFailure("change of basis is not invertible".into()))?);
    // P = P̄(1 + N) with N nilpotent
    let nil = pbar_inv.mul(&p.sub(&from_const(&pbar)));
    let mut p_inv = PolyMat::identity(n);
    let mut term = PolyMat::identity(n);
    for _ in 0..n {
        term = term.mul(&nil).scale(&F::one().neg());
        if term.is_zero() {
            break;
        }
        p_inv = p_inv.add(&term);
    }
    let p_inv = p_inv.mul(&pbar_inv);
    debug_assert!(p_inv.mul(&p) == one);
    let top: Vec<usize> = (0..k).collect();
    let act = m.act.iter().map(|a| p_inv.mul(a).mul(&p).select_rows(&top).select_cols(&top)).collect();
    let mut labels = Vec::new();
    for l in &m.labels {
        let vecs: Vec<Vec<Poly<F>>> = l.vecs.iter().map(|v| p_inv.mul_vec(&f.mul_vec(v))[..k].to_vec()).collect();
        let keep = independent_subset(&vecs);
        if !keep.is_empty() {
            labels.push(Label { elt: l.elt.clone(), vecs: keep.iter().map(|&i| vecs[i].clone()).collect() });
        }
    }
    let mut frame = Vec::new();
    let mut seen: Vec<&crate::weyl::ExtWeylElt> = Vec::new();
    for (u, _) in &m.frame {
        if seen.contains(&u) {
            continue;
        }
        seen.push(u);
        let rows: Vec<Vec<Poly<F>>> = m
            .frame
            .iter()
            .filter(|(v, _)| v == u)
            .map(|(_, r)| (0..k).map(|j| super::bimodule::dot(r, &p.column(j))).collect())
            .collect();
        for i in independent_subset(&rows) {
            frame.push((u.clone(), rows[i].clone()));
        }
    }
    let total: usize = labels.iter().map(|l: &Label<F>| l.vecs.len()).sum();
    if total != k || frame.len() != k {
        return Err(SoergelError::IdentificationFailure(format!("summand of rank {k} has {total} label vectors and {} frame rows", frame.len())));
    }
    Ok(Bimodule { degrees: new_deg[..k].to_vec(), act, labels, frame, word_len: m.word_len })
}

/// Whether two indecomposable bimodules are isomorphic (degree-zero maps both
/// ways composing to an automorphism).
pub fn isomorphic<F: Field>(a: &Bimodule<F>, b: &Bimodule<F>) -> Result<bool, SoergelError> {
    if a.rank() != b.rank() {
        return Ok(false);
    }
    let mut da = a.degrees.clone();
    let mut db = b.degrees.clone();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }
    let ab = hom_space(a, b, 0)?;
    if ab.is_empty() {
        return Ok(false);
    }
    let ba = hom_space(b, a, 0)?;
    for phi in &ab {
        for psi in &ba {
            let c = constant_part(&psi.mul(phi), &a.degrees, &a.degrees);
            if c.inverse().is_some() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::soergel::{b_object, bott_samelson, Realization};
    use crate::weyl::WeylGroup;

    fn run<F: Field>() {
        let g = WeylGroup::from_name("GL2").unwrap();
        let r = Realization::<F>::new(&g).unwrap();
        let bs = b_object(&r, &g, 0);
        assert_eq!(end0_split(&bs).unwrap().len(), 1);
        let bss = bott_samelson(&r, &g, &g.identity(), &[0, 0], 0);
        let parts = end0_split(&bss).unwrap();
        assert_eq!(parts.len(), 2);
        let mut shifts = Vec::new();
        for s in &parts {
            s.module.check_invariants(&r).unwrap();
            let n = bs.min_degree() - s.module.min_degree();
            assert!(isomorphic(&s.module, &bs.shifted(n)).unwrap());
            shifts.push(n);
        }
        shifts.sort();
        assert_eq!(shifts, vec![-1, 1]);
        let sum = parts.iter().fold(PolyMat::zeros(4, 4), |a, s| a.add(&s.idempotent));
        assert_eq!(sum, PolyMat::identity(4));
        assert!(parts[0].idempotent.mul(&parts[1].idempotent).is_zero());
    }

    #[test]
    fn bss_splits() {
        run::<Rational>();
        run::<Fp<2>>();
        run::<Fp<3>>();
    }
}
