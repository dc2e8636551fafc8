//! Tilting multiplicities and Hom dimensions read off p-Kazhdan-Lusztig
//! polynomials, including the signed sums for the parabolic case.

mod table;

use std::collections::BTreeSet;

use thiserror::Error;

pub use table::{MultEntry, MultTable, TableFormat};

use crate::field::Field;
use crate::soergel::pcan::PCanTable;
use crate::soergel::SoergelError;
use crate::weyl::{ExtWeylElt, WeylError};

#[derive(Debug, Error)]
pub enum TiltError {
    #[error("support misses {0}, where the multiplicity is nonzero")]
    SupportIncomplete(String),
    #[error("{0} is not a minimal double coset representative")]
    NotMinimalRep(String),
    #[error("negative multiplicity {value} at ({w}, {y})")]
    NegativeMultiplicity { w: String, y: String, value: i64 },
    #[error("signed sum depends on the left coset representative at ({w}, {y})")]
    CosetDependence { w: String, y: String },
    #[error("table parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Soergel(#[from] SoergelError),
}

/// `(T_w : Δ_y) = ^p h_{y,w}(1)`.
pub fn tilt_mult<F: Field>(t: &mut PCanTable<F>, w: &ExtWeylElt, y: &ExtWeylElt) -> Result<u64, TiltError> {
    let value = t.p_kl(y, w)?.eval_one();
    u64::try_from(value).map_err(|_| TiltError::NegativeMultiplicity { w: t.g.display(w), y: t.g.display(y), value })
}

/// Elements `z` with `^p h_{z,w} != 0`.
fn support_of<F: Field>(t: &mut PCanTable<F>, w: &ExtWeylElt) -> Result<BTreeSet<ExtWeylElt>, TiltError> {
    Ok(t.p_canonical(w)?.into_iter().filter(|(_, c)| !c.is_zero()).map(|(z, _)| z).collect())
}

fn check_support<F: Field>(t: &PCanTable<F>, needed: &BTreeSet<ExtWeylElt>, support: Option<&[ExtWeylElt]>) -> Result<(), TiltError> {
    if let Some(s) = support {
        let given: BTreeSet<&ExtWeylElt> = s.iter().collect();
        if let Some(z) = needed.iter().find(|z| !given.contains(z)) {
            return Err(TiltError::SupportIncomplete(t.g.display(z)));
        }
    }
    Ok(())
}

/// `dim Hom(T_x, T_y) = Σ_w (T_x : Δ_w)(T_y : Δ_w)`. Without an explicit
/// support the sum runs over the common support of `^p b_x` and `^p b_y`.
pub fn tilt_hom_dim<F: Field>(
    t: &mut PCanTable<F>,
    x: &ExtWeylElt,
    y: &ExtWeylElt,
    support: Option<&[ExtWeylElt]>,
) -> Result<u64, TiltError> {
    let common: BTreeSet<ExtWeylElt> = support_of(t, x)?.intersection(&support_of(t, y)?).cloned().collect();
    check_support(t, &common, support)?;
    let mut sum = 0;
    for w in &common {
        sum += tilt_mult(t, x, w)? * tilt_mult(t, y, w)?;
    }
    Ok(sum)
}

/// `Σ_z ^p h_{z,w}(1) ^p h_{z,y}(1)`, read directly off the stored elements.
pub fn parity_hom_dim<F: Field>(
    t: &mut PCanTable<F>,
    w: &ExtWeylElt,
    y: &ExtWeylElt,
    support: Option<&[ExtWeylElt]>,
) -> Result<u64, TiltError> {
    let bw = t.p_canonical(w)?;
    let by = t.p_canonical(y)?;
    let needed: BTreeSet<ExtWeylElt> = bw.keys().filter(|z| by.contains_key(z)).cloned().collect();
    check_support(t, &needed, support)?;
    let sum: i64 = needed.iter().map(|z| bw[z].eval_one() * by[z].eval_one()).sum();
    Ok(sum as u64)
}

/// Data of a finitary pair `(L, K)`: `w_L`, `W_L` and `W_K` with lengths.
pub struct Parabolic {
    pub l: Vec<usize>,
    pub k: Vec<usize>,
    pub w_l: ExtWeylElt,
    pub w_l_group: Vec<ExtWeylElt>,
    pub w_k_group: Vec<(ExtWeylElt, usize)>,
}

impl Parabolic {
    pub fn new<F: Field>(t: &PCanTable<F>, l: &[usize], k: &[usize]) -> Result<Self, TiltError> {
        let (w_l_group, w_l) = t.g.finitary_data(l)?;
        let (wk, _) = t.g.finitary_data(k)?;
        let w_k_group = wk.into_iter().map(|x| (x.clone(), t.g.length(&x))).collect();
        Ok(Parabolic { l: l.to_vec(), k: k.to_vec(), w_l, w_l_group, w_k_group })
    }

    fn signed_sum<F: Field>(&self, t: &mut PCanTable<F>, w: &ExtWeylElt, y: &ExtWeylElt) -> Result<i64, TiltError> {
        let top = t.g.mul(&self.w_l, w);
        let b = t.p_canonical(&top)?;
        let mut sum = 0;
        for (x, len) in &self.w_k_group {
            let v = b.get(&t.g.mul(y, x)).map_or(0, |c| c.eval_one());
            sum += if len % 2 == 0 { v } else { -v };
        }
        Ok(sum)
    }

    fn require_rep<F: Field>(&self, t: &PCanTable<F>, x: &ExtWeylElt) -> Result<(), TiltError> {
        if !t.g.is_min_double_coset_rep(&self.l, &self.k, x)? {
            return Err(TiltError::NotMinimalRep(t.g.display(x)));
        }
        Ok(())
    }

    /// `Σ_{x ∈ W_K} (-1)^{ℓ(x)} ^p h_{yx, w_L w}(1)`.
    pub fn mult<F: Field>(&self, t: &mut PCanTable<F>, w: &ExtWeylElt, y: &ExtWeylElt) -> Result<u64, TiltError> {
        self.require_rep(t, w)?;
        self.require_rep(t, y)?;
        let value = self.signed_sum(t, w, y)?;
        u64::try_from(value).map_err(|_| TiltError::NegativeMultiplicity { w: t.g.display(w), y: t.g.display(y), value })
    }

    /// The signed sum with `y` replaced by `zy`, for every `z ∈ W_L`.
    pub fn z_sweep<F: Field>(&self, t: &mut PCanTable<F>, w: &ExtWeylElt, y: &ExtWeylElt) -> Result<Vec<i64>, TiltError> {
        self.w_l_group.clone().iter().map(|z| self.signed_sum(t, w, &t.g.mul(z, y))).collect()
    }
}

pub fn parabolic_tilt_mult<F: Field>(
    t: &mut PCanTable<F>,
    l: &[usize],
    k: &[usize],
    w: &ExtWeylElt,
    y: &ExtWeylElt,
) -> Result<u64, TiltError> {
    Parabolic::new(t, l, k)?.mult(t, w, y)
}

/// `^L W^K ∩ {w : ℓ(w_L w) <= max_len}`, sorted by (length, name).
pub fn table_elements<F: Field>(t: &PCanTable<F>, par: &Parabolic, max_len: usize) -> Result<Vec<ExtWeylElt>, TiltError> {
    let ll = t.g.length(&par.w_l);
    if ll > max_len {
        return Ok(Vec::new());
    }
    let mut reps = t.g.min_double_coset_reps(&par.l, &par.k, max_len - ll)?;
    reps.sort_by_cached_key(|x| (t.g.length(x), t.g.display(x)));
    Ok(reps)
}

/// All multiplicities for `w, y ∈ ^L W^K` with `ℓ(w_L w) <= max_len`. When
/// `L` is nonempty every entry is also checked for independence of `z ∈ W_L`.
pub fn mult_table<F: Field>(t: &mut PCanTable<F>, l: &[usize], k: &[usize], max_len: usize) -> Result<MultTable, TiltError> {
    let par = Parabolic::new(t, l, k)?;
    let elements = table_elements(t, &par, max_len)?;
    let mut entries = Vec::new();
    for w in &elements {
        for y in &elements {
            let value = if l.is_empty() && k.is_empty() { tilt_mult(t, w, y)? } else { par.mult(t, w, y)? };
            if !l.is_empty() && par.z_sweep(t, w, y)?.iter().any(|&v| v != value as i64) {
                return Err(TiltError::CosetDependence { w: t.g.display(w), y: t.g.display(y) });
            }
            if value != 0 {
                entries.push(MultEntry { w: t.g.display(w), y: t.g.display(y), value });
            }
        }
    }
    let names = |s: &[usize]| s.iter().map(|&i| t.g.simples[i].name.clone()).collect();
    Ok(MultTable {
        datum_fingerprint: t.g.datum.fingerprint(),
        p: F::characteristic(),
        l: names(l),
        k: names(k),
        max_len,
        elements: elements.iter().map(|x| t.g.display(x)).collect(),
        entries,
        metadata: Default::default(),
    })
}
