//! Graded bimodules that are free as left R-modules, together with a
//! W-labeled decomposition over the fraction field.
//!
//! A bimodule of rank N is stored by the degrees of a left basis `b_1..b_N`
//! and one N x N matrix per variable: column `j` of `act[k]` holds the left
//! coordinates of `b_j · x_k`. The labeled decomposition is stored twice: as
//! spanning vectors of each summand, and as a dual frame of linear forms
//! where the rows labeled `u` vanish on every summand labeled `u' != u`.

use std::collections::HashMap;

use super::realization::Realization;
use crate::field::Field;
use crate::hecke::{self, Hecke, HeckeElt, LaurentPoly};
use crate::poly::{Mono, Poly, PolyMat};
use crate::weyl::{ExtWeylElt, WeylGroup};

pub type PolyVec<F> = Vec<Poly<F>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label<F: Field> {
    pub elt: ExtWeylElt,
    pub vecs: Vec<PolyVec<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule<F: Field> {
    pub degrees: Vec<i32>,
    pub act: Vec<PolyMat<F>>,
    pub labels: Vec<Label<F>>,
    pub frame: Vec<(ExtWeylElt, PolyVec<F>)>,
    /// Number of `B_s` factors it was built from; bounds Hom degrees.
    pub word_len: usize,
}

impl<F: Field> Bimodule<F> {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn min_degree(&self) -> i32 {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    /// `M(n)`: every basis degree drops by `n`.
    pub fn shifted(&self, n: i32) -> Self {
        let mut m = self.clone();
        m.degrees.iter_mut().for_each(|d| *d -= n);
        m
    }

    /// Graded rank as a left module: `Σ v^{deg}`.
    pub fn graded_rank(&self) -> LaurentPoly {
        LaurentPoly::from_pairs(self.degrees.iter().map(|&d| (d, 1)))
    }

    pub fn label_dims(&self) -> Vec<(ExtWeylElt, usize)> {
        self.labels.iter().map(|l| (l.elt.clone(), l.vecs.len())).collect()
    }

    pub fn label(&self, w: &ExtWeylElt) -> Option<&Label<F>> {
        self.labels.iter().find(|l| l.elt == *w)
    }

    /// Checks commutativity, the eigencondition of every label vector, and
    /// that the frame separates the labels.
    pub fn check_invariants(&self, real: &Realization<F>) -> Result<(), String> {
        let n = self.act.len();
        for a in 0..n {
            for b in a + 1..n {
                if self.act[a].mul(&self.act[b]) != self.act[b].mul(&self.act[a]) {
                    return Err(format!("right action of x{} and x{} do not commute", a + 1, b + 1));
                }
            }
        }
        let total: usize = self.labels.iter().map(|l| l.vecs.len()).sum();
        if total != self.rank() || self.frame.len() != self.rank() {
            return Err("label dimensions do not add up to the rank".into());
        }
        for l in &self.labels {
            let img = real.images(&l.elt);
            for v in &l.vecs {
                for (k, a) in self.act.iter().enumerate() {
                    let lhs = a.mul_vec(v);
                    if lhs.iter().zip(v).any(|(x, y)| *x != y.mul(&img[k])) {
                        return Err(format!("label vector fails the eigencondition for x{}", k + 1));
                    }
                }
                for (u, row) in &self.frame {
                    if *u != l.elt && !dot(row, v).is_zero() {
                        return Err("frame row does not vanish on another label".into());
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn dot<F: Field>(a: &[Poly<F>], b: &[Poly<F>]) -> Poly<F> {
    let mut acc = Poly::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc.add_assign(&x.mul(y));
        }
    }
    acc
}

/// The standard object `F_w`.
pub fn f_object<F: Field>(real: &Realization<F>, w: &ExtWeylElt) -> Bimodule<F> {
    let act = real.images(w).into_iter().map(|p| PolyMat { rows: 1, cols: 1, data: vec![p] }).collect();
    Bimodule {
        degrees: vec![0],
        act,
        labels: vec![Label { elt: w.clone(), vecs: vec![vec![Poly::one()]] }],
        frame: vec![(w.clone(), vec![Poly::one()])],
        word_len: 0,
    }
}

/// `B_s = R ⊗_{R^s} R(1)` on the basis `1⊗1` (degree -1), `1⊗δ_s` (degree 1).
pub fn b_object<F: Field>(real: &Realization<F>, g: &WeylGroup, s: usize) -> Bimodule<F> {
    let delta = real.delta_poly(s);
    let alpha = real.alpha_poly(s);
    // f = f0 + f1 δ with f0 s-invariant, f1 = ∂f
    let split = |f: &Poly<F>| {
        let f1 = real.demazure(s, f);
        (f.sub(&f1.mul(&delta)), f1)
    };
    let mut act = Vec::new();
    for k in 0..real.rank {
        let x = Poly::var(k);
        let (a0, a1) = split(&x);
        let (c0, c1) = split(&delta.mul(&x));
        act.push(PolyMat { rows: 2, cols: 2, data: vec![a0, c0, a1, c1] });
    }
    let e = g.identity();
    let se = g.simple(s).clone();
    let one = Poly::one();
    Bimodule {
        degrees: vec![-1, 1],
        act,
        labels: vec![
            Label { elt: e.clone(), vecs: vec![vec![alpha.sub(&delta), one.clone()]] },
            Label { elt: se.clone(), vecs: vec![vec![delta.clone(), one.neg()]] },
        ],
        frame: vec![(e, vec![one.clone(), delta.clone()]), (se, vec![one, delta.sub(&alpha)])],
        word_len: 1,
    }
}

/// Evaluates polynomials at the commuting matrices `mats`, caching monomials.
struct MatEval<'a, F: Field> {
    mats: &'a [PolyMat<F>],
    cache: HashMap<Mono, PolyMat<F>>,
}

impl<'a, F: Field> MatEval<'a, F> {
    fn new(mats: &'a [PolyMat<F>]) -> Self {
        MatEval { mats, cache: HashMap::new() }
    }

    fn monomial(&mut self, m: Mono) -> PolyMat<F> {
        if let Some(r) = self.cache.get(&m) {
            return r.clone();
        }
        let n = self.mats[0].rows;
        let r = match (0..self.mats.len()).find(|&i| crate::poly::mono_exp(m, i) > 0) {
            None => PolyMat::identity(n),
            Some(i) => {
                let rest = m - crate::poly::mono_var(i);
                self.monomial(rest).mul(&self.mats[i])
            }
        };
        self.cache.insert(m, r.clone());
        r
    }

    fn eval(&mut self, p: &Poly<F>) -> PolyMat<F> {
        let n = self.mats[0].rows;
        let mut acc = PolyMat::zeros(n, n);
        for (m, c) in p.terms() {
            acc = acc.add(&self.monomial(*m).scale(c));
        }
        acc
    }
}

/// `M ⋆ N = M ⊗_R N`.
pub fn tensor<F: Field>(real: &Realization<F>, g: &WeylGroup, m: &Bimodule<F>, n: &Bimodule<F>) -> Bimodule<F> {
    let (rm, rn) = (m.rank(), n.rank());
    let size = rm * rn;
    let idx = |i: usize, j: usize| i * rn + j;
    let degrees = (0..rm).flat_map(|i| (0..rn).map(move |j| m.degrees[i] + n.degrees[j])).collect();
    let mut eval = MatEval::new(&m.act);
    let mut act = Vec::with_capacity(real.rank);
    for an in &n.act {
        let mut out = PolyMat::zeros(size, size);
        for j in 0..rn {
            for l in 0..rn {
                let p = an.get(l, j);
                if p.is_zero() {
                    continue;
                }
                let e = eval.eval(p);
                for i in 0..rm {
                    for k in 0..rm {
                        let v = e.get(k, i);
                        if !v.is_zero() {
                            out.set(idx(k, l), idx(i, j), v.clone());
                        }
                    }
                }
            }
        }
        act.push(out);
    }
    let mut labels: Vec<Label<F>> = Vec::new();
    for lm in &m.labels {
        let img = real.images(&lm.elt);
        for ln in &n.labels {
            let elt = g.mul(&lm.elt, &ln.elt);
            let moved: Vec<PolyVec<F>> = ln.vecs.iter().map(|v| v.iter().map(|p| p.substitute(&img)).collect()).collect();
            let mut vecs = Vec::new();
            for a in &lm.vecs {
                for b in &moved {
                    vecs.push(kron(a, b));
                }
            }
            match labels.iter_mut().find(|l| l.elt == elt) {
                Some(l) => l.vecs.extend(vecs),
                None => labels.push(Label { elt, vecs }),
            }
        }
    }
    let mut frame = Vec::with_capacity(size);
    for (u, ra) in &m.frame {
        let img = real.images(u);
        for (v, rb) in &n.frame {
            let moved: PolyVec<F> = rb.iter().map(|p| p.substitute(&img)).collect();
            frame.push((g.mul(u, v), kron(ra, &moved)));
        }
    }
    Bimodule { degrees, act, labels, frame, word_len: m.word_len + n.word_len }
}

fn kron<F: Field>(a: &[Poly<F>], b: &[Poly<F>]) -> PolyVec<F> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(if x.is_zero() || y.is_zero() { Poly::zero() } else { x.mul(y) });
        }
    }
    out
}

/// `F_ω ⋆ B_{s_1} ⋆ ... ⋆ B_{s_k} (shift)`.
pub fn bott_samelson<F: Field>(real: &Realization<F>, g: &WeylGroup, omega: &ExtWeylElt, word: &[usize], shift: i32) -> Bimodule<F> {
    let mut acc: Option<Bimodule<F>> = if g.is_identity(omega) { None } else { Some(f_object(real, omega)) };
    for &s in word {
        let b = b_object(real, g, s);
        acc = Some(match acc {
            None => b,
            Some(m) => tensor(real, g, &m, &b),
        });
    }
    acc.unwrap_or_else(|| f_object(real, omega)).shifted(shift)
}

/// `ch(BS) = H_ω (H_{s_1} + v) ... (H_{s_k} + v) v^{-shift}`.
pub fn bs_character(h: &Hecke, omega: &ExtWeylElt, word: &[usize], shift: i32) -> HeckeElt {
    let mut acc = h.std(omega);
    for &s in word {
        acc = h.mul(&acc, &h.b_simple(s));
    }
    hecke::scale(&acc, &LaurentPoly::monomial(-shift, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    fn gl2<F: Field>() -> (WeylGroup, Realization<F>) {
        let g = WeylGroup::from_name("GL2").unwrap();
        let r = Realization::new(&g).unwrap();
        (g, r)
    }

    #[test]
    fn bs_invariants() {
        let (g, r) = gl2::<Rational>();
        for s in 0..2 {
            let b = b_object(&r, &g, s);
            b.check_invariants(&r).unwrap();
            assert_eq!(b.graded_rank(), LaurentPoly::from_pairs([(-1, 1), (1, 1)]));
        }
        let bss = bott_samelson(&r, &g, &g.identity(), &[0, 0], 0);
        bss.check_invariants(&r).unwrap();
        let mut d = bss.degrees.clone();
        d.sort();
        assert_eq!(d, vec![-2, 0, 0, 2]);
        assert_eq!(bss.label(&g.identity()).unwrap().vecs.len(), 2);
        let b01 = bott_samelson(&r, &g, &g.identity(), &[0, 1, 0], 0);
        b01.check_invariants(&r).unwrap();
    }

    #[test]
    fn char2_invariants() {
        let (g, r) = gl2::<Fp<2>>();
        let m = bott_samelson(&r, &g, &g.identity(), &[1, 0, 1], 0);
        m.check_invariants(&r).unwrap();
    }

    #[test]
    fn conjugated_b_object() {
        let (g, r) = gl2::<Rational>();
        let omega = g.mul(g.simple(0), &g.translation(&[0, 1]));
        let fo = f_object(&r, &omega);
        let m = tensor(&r, &g, &tensor(&r, &g, &fo, &b_object(&r, &g, 0)), &f_object(&r, &g.inv(&omega)));
        m.check_invariants(&r).unwrap();
        let mut elts: Vec<ExtWeylElt> = m.labels.iter().map(|l| l.elt.clone()).collect();
        elts.sort();
        let mut expect = vec![g.identity(), g.simple(1).clone()];
        expect.sort();
        assert_eq!(elts, expect);
    }
}
