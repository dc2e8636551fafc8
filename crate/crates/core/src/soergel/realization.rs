//! The realization `t = X ⊗ k`, `R = Sym(t)` with `t` in degree 2.

use sha2::{Digest, Sha256};

use super::SoergelError;
use crate::field::Field;
use crate::poly::Poly;
use crate::weyl::{ExtWeylElt, WeylGroup};

#[derive(Clone, Debug)]
pub struct Realization<F: Field> {
    pub rank: usize,
    /// `α_s` as coefficients in `x_1..x_n`, one entry per simple reflection.
    pub alpha: Vec<Vec<F>>,
    pub coroot: Vec<Vec<F>>,
    pub delta: Vec<Vec<F>>,
    /// Images of `x_i` under each simple reflection.
    simple_images: Vec<Vec<Poly<F>>>,
}

fn reduce<F: Field>(v: &[i64]) -> Vec<F> {
    v.iter().map(|&x| F::from_i64(x)).collect()
}

impl<F: Field> Realization<F> {
    pub fn new(g: &WeylGroup) -> Result<Self, SoergelError> {
        let rank = g.rank;
        let mut alpha = Vec::new();
        let mut coroot = Vec::new();
        let mut delta = Vec::new();
        for (k, s) in g.simples.iter().enumerate() {
            let a: Vec<F> = reduce(&s.root);
            let c: Vec<F> = reduce(&s.coroot);
            if a.iter().all(|x| x.is_zero()) {
                return Err(SoergelError::DegenerateRealization(format!("root of {} vanishes in characteristic {}", s.name, F::characteristic())));
            }
            // prefer a basis vector pairing to exactly 1, else rescale the first usable one
            let i = c.iter().position(|x| x.is_one()).or_else(|| c.iter().position(|x| !x.is_zero())).ok_or(SoergelError::NoDelta(k))?;
            let mut d = vec![F::zero(); rank];
            d[i] = c[i].inv().expect("nonzero");
            alpha.push(a);
            coroot.push(c);
            delta.push(d);
        }
        let simple_images = g.simples.iter().map(|s| images_of(&s.element.fin, rank)).collect();
        Ok(Realization { rank, alpha, coroot, delta, simple_images })
    }

    pub fn alpha_poly(&self, s: usize) -> Poly<F> {
        Poly::linear(&self.alpha[s])
    }

    pub fn delta_poly(&self, s: usize) -> Poly<F> {
        Poly::linear(&self.delta[s])
    }

    pub fn reflect(&self, s: usize, f: &Poly<F>) -> Poly<F> {
        f.substitute(&self.simple_images[s])
    }

    /// `∂_s f = (f - s f) / α_s`.
    pub fn demazure(&self, s: usize, f: &Poly<F>) -> Poly<F> {
        f.sub(&self.reflect(s, f)).div_exact(&self.alpha_poly(s)).expect("Demazure quotient is exact")
    }

    /// Images of the variables under the finite part of `w`.
    pub fn images(&self, w: &ExtWeylElt) -> Vec<Poly<F>> {
        images_of(&w.fin, self.rank)
    }

    pub fn act(&self, w: &ExtWeylElt, f: &Poly<F>) -> Poly<F> {
        f.substitute(&self.images(w))
    }

    /// Hash of the realization data including the choice of `δ_s`.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("char={};rank={}", F::characteristic(), self.rank));
        for s in 0..self.alpha.len() {
            h.update(format!("|{}|{}|{}", self.alpha_poly(s).render(), Poly::linear(&self.coroot[s]).render(), self.delta_poly(s).render()));
        }
        hex::encode(&h.finalize()[..8])
    }
}

/// `w(x_i) = Σ_r M[r][i] x_r` for the matrix `M` of `w` on X.
fn images_of<F: Field>(fin: &[i64], n: usize) -> Vec<Poly<F>> {
    (0..n)
        .map(|i| {
            let col: Vec<F> = (0..n).map(|r| F::from_i64(fin[r * n + i])).collect();
            Poly::linear(&col)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    #[test]
    fn gl2_delta() {
        let g = WeylGroup::from_name("GL2").unwrap();
        let r = Realization::<Rational>::new(&g).unwrap();
        assert_eq!(r.delta_poly(0), Poly::var(0));
        assert_eq!(r.alpha_poly(0), Poly::var(0).sub(&Poly::var(1)));
        let r2 = Realization::<Fp<2>>::new(&g).unwrap();
        assert_eq!(r2.delta_poly(0), Poly::var(0));
        assert_eq!(r.delta_poly(1), Poly::var(1));
        for s in 0..2 {
            let d = r.delta_poly(s);
            assert_eq!(r.demazure(s, &d), Poly::one());
        }
    }

    #[test]
    fn adjoint_a1_has_no_delta_mod_2() {
        let g = WeylGroup::from_name("A1-adj").unwrap();
        assert!(matches!(Realization::<Fp<2>>::new(&g), Err(SoergelError::NoDelta(_))));
        Realization::<Fp<3>>::new(&g).unwrap();
    }
}
