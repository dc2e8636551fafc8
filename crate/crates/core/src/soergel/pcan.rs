//! The p-canonical basis, computed by decomposing `B^p_{w'} ⋆ B_s` and
//! identifying lower summands with previously stored indecomposables.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::bimodule::{b_object, bott_samelson, bs_character, f_object, tensor, Bimodule};
use super::split::{end0_split, isomorphic};
use super::{Realization, SoergelError};
use crate::field::Field;
use crate::hecke::{self, Hecke, HeckeElt, LaurentPoly};
use crate::weyl::{ExtWeylElt, WeylGroup};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub computed: usize,
    pub cache_hits: usize,
}

pub struct PCanTable<F: Field> {
    pub g: Arc<WeylGroup>,
    pub hecke: Hecke,
    pub real: Realization<F>,
    /// `^p b_u` for `u ∈ W_aff`.
    pub entries: BTreeMap<ExtWeylElt, HeckeElt>,
    /// Representative of the indecomposable `B^p_u`.
    pub reps: HashMap<ExtWeylElt, Bimodule<F>>,
    /// Check every identification with an explicit isomorphism.
    pub verify_identification: bool,
    pub stats: Stats,
}

/// A summand of a decomposition, identified as `B^p_y(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identified {
    pub y: ExtWeylElt,
    pub shift: i32,
}

impl<F: Field> PCanTable<F> {
    pub fn new(g: Arc<WeylGroup>) -> Result<Self, SoergelError> {
        let real = Realization::new(&g)?;
        Ok(PCanTable {
            hecke: Hecke::new(g.clone()),
            g,
            real,
            entries: BTreeMap::new(),
            reps: HashMap::new(),
            verify_identification: true,
            stats: Stats::default(),
        })
    }

    pub fn characteristic(&self) -> u32 {
        F::characteristic()
    }

    /// `^p b_w`; for `w = ωu`, `H_ω ^p b_u`.
    pub fn p_canonical(&mut self, w: &ExtWeylElt) -> Result<HeckeElt, SoergelError> {
        let (omega, word) = self.g.omega_factorize_word(w);
        let u = self.g.product(&word);
        let pb = self.p_canonical_waff(&u, &word)?;
        Ok(if self.g.is_identity(&omega) { pb } else { self.hecke.left_mul_omega(&omega, &pb) })
    }

    pub fn p_kl(&mut self, y: &ExtWeylElt, w: &ExtWeylElt) -> Result<LaurentPoly, SoergelError> {
        Ok(self.p_canonical(w)?.get(y).cloned().unwrap_or_default())
    }

    fn p_canonical_waff(&mut self, u: &ExtWeylElt, word: &[usize]) -> Result<HeckeElt, SoergelError> {
        if let Some(h) = self.entries.get(u) {
            self.stats.cache_hits += 1;
            return Ok(h.clone());
        }
        self.stats.computed += 1;
        let (pb, rep) = match word {
            [] => (self.hecke.one(), f_object(&self.real, u)),
            [s] => (self.hecke.b_simple(*s), b_object(&self.real, &self.g, *s)),
            _ => {
                let (&s, prefix) = word.split_last().unwrap();
                let prev = self.g.product(prefix);
                let prev_pb = self.p_canonical_waff(&prev, prefix)?;
                let m = tensor(&self.real, &self.g, &self.reps[&prev], &b_object(&self.real, &self.g, s));
                let ch = self.hecke.mul(&prev_pb, &self.hecke.b_simple(s));
                self.extract_top(u, &m, ch)?
            }
        };
        if pb.get(u) != Some(&LaurentPoly::one()) {
            return Err(SoergelError::IdentificationFailure(format!("coefficient of H_w in p-canonical element of {} is not 1", self.g.display(u))));
        }
        self.entries.insert(u.clone(), pb.clone());
        self.reps.insert(u.clone(), rep);
        Ok(pb)
    }

    /// Decomposes `m` (with character `ch`), returns `ch` minus the characters of
    /// the summands not labeled by `top`, together with the top summand.
    fn extract_top(&mut self, top: &ExtWeylElt, m: &Bimodule<F>, ch: HeckeElt) -> Result<(HeckeElt, Bimodule<F>), SoergelError> {
        let parts = end0_split(m)?;
        let mut result = ch;
        let mut top_part = None;
        for part in parts {
            if part.module.label(top).is_some() {
                if top_part.is_some() {
                    return Err(SoergelError::IdentificationFailure("two summands carry the top label".into()));
                }
                top_part = Some(part.module);
                continue;
            }
            let id = self.identify(&part.module)?;
            let lower = self.p_canonical(&id.y)?;
            hecke::add_scaled(&mut result, &lower, &LaurentPoly::monomial(-id.shift, -1));
        }
        let top_part = top_part.ok_or_else(|| SoergelError::IdentificationFailure("no summand carries the top label".into()))?;
        Ok((result, top_part))
    }

    /// Identifies an indecomposable summand as `B^p_y(n)`.
    pub fn identify(&mut self, s: &Bimodule<F>) -> Result<Identified, SoergelError> {
        let g = self.g.clone();
        let y = s
            .labels
            .iter()
            .map(|l| &l.elt)
            .max_by_key(|e| (g.length(e), (*e).clone()))
            .cloned()
            .ok_or_else(|| SoergelError::IdentificationFailure("summand without labels".into()))?;
        self.p_canonical(&y)?;
        let (omega, word) = g.omega_factorize_word(&y);
        let stored = if g.is_identity(&omega) {
            self.reps[&y].clone()
        } else {
            let u = g.product(&word);
            tensor(&self.real, &g, &f_object(&self.real, &omega), &self.reps[&u])
        };
        let shift = stored.min_degree() - s.min_degree();
        if self.verify_identification && !isomorphic(s, &stored.shifted(shift))? {
            return Err(SoergelError::IdentificationFailure(format!("summand with top label {} matches no stored indecomposable", g.display(&y))));
        }
        Ok(Identified { y, shift })
    }

    /// Fully decomposes `BS(ω, word)` and returns the graded multiplicities
    /// `m_y(v)` with `ch(BS) = Σ m_y(v) ^p b_y`.
    pub fn decompose_bs(&mut self, omega: &ExtWeylElt, word: &[usize]) -> Result<BTreeMap<ExtWeylElt, LaurentPoly>, SoergelError> {
        let m = bott_samelson(&self.real, &self.g, omega, word, 0);
        let mut mult: BTreeMap<ExtWeylElt, LaurentPoly> = BTreeMap::new();
        for part in end0_split(&m)? {
            let id = self.identify(&part.module)?;
            mult.entry(id.y).or_default().add_term(-id.shift, 1);
        }
        Ok(mult)
    }

    /// `^p b_w` computed from an arbitrary reduced word of `w ∈ W_aff`.
    pub fn p_canonical_from_word(&mut self, word: &[usize]) -> Result<HeckeElt, SoergelError> {
        let e = self.g.identity();
        let w = self.g.product(word);
        let mult = self.decompose_bs(&e, word)?;
        let mut result = bs_character(&self.hecke, &e, word, 0);
        for (y, m) in &mult {
            if *y != w {
                let pb = self.p_canonical(y)?;
                hecke::add_scaled(&mut result, &pb, &m.neg());
            }
        }
        if mult.get(&w) != Some(&LaurentPoly::one()) {
            return Err(SoergelError::IdentificationFailure("top summand does not occur exactly once".into()));
        }
        Ok(result)
    }

    /// All `^p b_u` for `u ∈ W_aff` with `ℓ(u) <= max_len`.
    pub fn fill(&mut self, max_len: usize) -> Result<(), SoergelError> {
        for u in self.g.enumerate_waff(max_len) {
            self.p_canonical(&u)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    #[test]
    fn small_gl2() {
        let g = Arc::new(WeylGroup::from_name("GL2").unwrap());
        let mut t = PCanTable::<Fp<2>>::new(g.clone()).unwrap();
        let s0 = g.simple(1).clone();
        let pb = t.p_canonical(&s0).unwrap();
        assert_eq!(pb, t.hecke.b_simple(1));
        assert_eq!(t.p_kl(&g.identity(), &s0).unwrap(), LaurentPoly::v());
        let mut q = PCanTable::<Rational>::new(g.clone()).unwrap();
        for u in g.enumerate_waff(4) {
            assert_eq!(q.p_canonical(&u).unwrap(), q.hecke.canonical_basis(&u), "{}", g.display(&u));
        }
    }
}
