//! The extended affine Hecke algebra over `Z[v, v^{-1}]`, in Soergel's
//! normalization: `(H_s - v^{-1})(H_s + v) = 0`, `b_s = H_s + v`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::weyl::{EltDoc, ExtWeylElt, WeylError, WeylGroup};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentPoly(BTreeMap<i32, i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(exp: i32, coeff: i64) -> Self {
        let mut m = BTreeMap::new();
        if coeff != 0 {
            m.insert(exp, coeff);
        }
        LaurentPoly(m)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c);
        }
        p
    }

    /// `v^{-1} - v`.
    pub fn quad() -> Self {
        Self::from_pairs([(-1, 1), (1, -1)])
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.0.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (e, c) in o.terms() {
            self.add_term(e, c);
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e, -c)).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_pairs(self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn shift(&self, n: i32) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e + n, c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }

    pub fn bar(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (-e, c)).collect())
    }

    pub fn eval_one(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Whether all exponents are positive.
    pub fn in_v_zv(&self) -> bool {
        self.min_exp().map_or(true, |e| e > 0)
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.0.values().all(|&c| c >= 0)
    }

    /// The unique bar-invariant `a` with `self - a ∈ vZ[v]`, given that `self`
    /// has no terms below the ones it shares with `a`.
    pub fn bar_invariant_part(&self) -> Self {
        let mut a = Self::zero();
        for (e, c) in self.terms() {
            if e < 0 {
                a.add_term(e, c);
                a.add_term(-e, c);
            } else if e == 0 {
                a.add_term(0, c);
            }
        }
        a
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.0.iter().map(|(&e, &c)| (e, c)) {
            let (sign, abs) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let var = match e {
                0 => String::new(),
                1 => "v".to_string(),
                _ => format!("v^{e}"),
            };
            match (abs, var.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (1, false) => write!(f, "{var}")?,
                (_, false) => write!(f, "{abs}{var}")?,
            }
        }
        Ok(())
    }
}

pub type HeckeElt = BTreeMap<ExtWeylElt, LaurentPoly>;

pub fn add_term(h: &mut HeckeElt, x: &ExtWeylElt, c: &LaurentPoly) {
    if c.is_zero() {
        return;
    }
    let e = h.entry(x.clone()).or_default();
    e.add_assign(c);
    if e.is_zero() {
        h.remove(x);
    }
}

pub fn add_scaled(h: &mut HeckeElt, other: &HeckeElt, c: &LaurentPoly) {
    for (x, p) in other {
        add_term(h, x, &p.mul(c));
    }
}

pub fn scale(h: &HeckeElt, c: &LaurentPoly) -> HeckeElt {
    let mut r = HeckeElt::new();
    add_scaled(&mut r, h, c);
    r
}

pub fn sub(a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
    let mut r = a.clone();
    add_scaled(&mut r, b, &LaurentPoly::monomial(0, -1));
    r
}

/// `Σ_x a_x b_x` in the standard basis.
pub fn pairing(a: &HeckeElt, b: &HeckeElt) -> LaurentPoly {
    let mut r = LaurentPoly::zero();
    for (x, p) in a {
        if let Some(q) = b.get(x) {
            r.add_assign(&p.mul(q));
        }
    }
    r
}

/// `Σ_{x ∈ W_K} (-1)^{ℓ(x)} table(yx)`; missing entries read as zero.
pub fn signed_coset_sum<F: Fn(&ExtWeylElt) -> i64>(g: &WeylGroup, table: F, y: &ExtWeylElt, k: &[usize]) -> Result<i64, WeylError> {
    let (wk, _) = g.finitary_data(k)?;
    Ok(wk.iter().map(|x| if g.length(x) % 2 == 0 { 1 } else { -1 } * table(&g.mul(y, x))).sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeDoc(pub Vec<(EltDoc, LaurentPoly)>);

pub struct Hecke {
    pub g: Arc<WeylGroup>,
    kl: Mutex<HashMap<ExtWeylElt, HeckeElt>>,
}

impl Hecke {
    pub fn new(g: Arc<WeylGroup>) -> Self {
        Hecke { g, kl: Mutex::new(HashMap::new()) }
    }

    pub fn std(&self, x: &ExtWeylElt) -> HeckeElt {
        HeckeElt::from([(x.clone(), LaurentPoly::one())])
    }

    pub fn one(&self) -> HeckeElt {
        self.std(&self.g.identity())
    }

    /// `b_s = H_s + v`.
    pub fn b_simple(&self, s: usize) -> HeckeElt {
        let mut h = self.std(self.g.simple(s));
        add_term(&mut h, &self.g.identity(), &LaurentPoly::v());
        h
    }

    pub fn left_mul_simple(&self, s: usize, h: &HeckeElt) -> HeckeElt {
        let mut r = HeckeElt::new();
        for (z, c) in h {
            let sz = self.g.simple_mul(s, z);
            add_term(&mut r, &sz, c);
            if self.g.length(&sz) < self.g.length(z) {
                add_term(&mut r, z, &c.mul(&LaurentPoly::quad()));
            }
        }
        r
    }

    pub fn right_mul_simple(&self, h: &HeckeElt, s: usize) -> HeckeElt {
        let mut r = HeckeElt::new();
        for (z, c) in h {
            let zs = self.g.mul_simple(z, s);
            add_term(&mut r, &zs, c);
            if self.g.length(&zs) < self.g.length(z) {
                add_term(&mut r, z, &c.mul(&LaurentPoly::quad()));
            }
        }
        r
    }

    /// Left multiplication by `H_ω`, `ℓ(ω) = 0`.
    pub fn left_mul_omega(&self, omega: &ExtWeylElt, h: &HeckeElt) -> HeckeElt {
        h.iter().map(|(z, c)| (self.g.mul(omega, z), c.clone())).collect()
    }

    /// `H_x · h`.
    pub fn left_mul_std(&self, x: &ExtWeylElt, h: &HeckeElt) -> HeckeElt {
        let (omega, word) = self.g.omega_factorize_word(x);
        let mut r = h.clone();
        for &s in word.iter().rev() {
            r = self.left_mul_simple(s, &r);
        }
        if self.g.is_identity(&omega) {
            r
        } else {
            self.left_mul_omega(&omega, &r)
        }
    }

    pub fn mul(&self, a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
        let mut r = HeckeElt::new();
        for (x, c) in a {
            add_scaled(&mut r, &self.left_mul_std(x, b), c);
        }
        r
    }

    fn bar_std(&self, x: &ExtWeylElt) -> HeckeElt {
        let (omega, word) = self.g.omega_factorize_word(x);
        let shift = LaurentPoly::from_pairs([(1, 1), (-1, -1)]);
        let mut r = self.one();
        for &s in &word {
            let mut next = self.right_mul_simple(&r, s);
            add_scaled(&mut next, &r, &shift);
            r = next;
        }
        self.left_mul_omega(&omega, &r)
    }

    pub fn bar(&self, a: &HeckeElt) -> HeckeElt {
        let mut r = HeckeElt::new();
        for (x, c) in a {
            add_scaled(&mut r, &self.bar_std(x), &c.bar());
        }
        r
    }

    /// Kazhdan–Lusztig basis element `b_w`.
    pub fn canonical_basis(&self, w: &ExtWeylElt) -> HeckeElt {
        if let Some(h) = self.kl.lock().unwrap().get(w) {
            return h.clone();
        }
        let (omega, word) = self.g.omega_factorize_word(w);
        let result = if !self.g.is_identity(&omega) {
            let u = self.g.product(&word);
            self.left_mul_omega(&omega, &self.canonical_basis(&u))
        } else if word.is_empty() {
            self.one()
        } else {
            let s = *word.last().unwrap();
            let prev = self.g.product(&word[..word.len() - 1]);
            let h = self.mul(&self.canonical_basis(&prev), &self.b_simple(s));
            self.correct_to_canonical(h, w)
        };
        self.kl.lock().unwrap().insert(w.clone(), result.clone());
        result
    }

    /// Subtracts bar-invariant multiples of lower `b_y` until every coefficient
    /// other than that of `top` lies in `vZ[v]`.
    fn correct_to_canonical(&self, mut h: HeckeElt, top: &ExtWeylElt) -> HeckeElt {
        loop {
            let bad = h
                .iter()
                .filter(|(y, c)| *y != top && !c.in_v_zv())
                .max_by_key(|(y, _)| (self.g.length(y), (*y).clone()))
                .map(|(y, c)| (y.clone(), c.bar_invariant_part()));
            match bad {
                None => return h,
                Some((y, a)) => {
                    let by = self.canonical_basis(&y);
                    add_scaled(&mut h, &by, &a.neg());
                }
            }
        }
    }

    /// Writes a bar-invariant element in the canonical basis.
    pub fn in_canonical_basis(&self, h: &HeckeElt) -> Vec<(ExtWeylElt, LaurentPoly)> {
        let mut rest = h.clone();
        let mut out = Vec::new();
        while let Some((y, c)) = rest.iter().max_by_key(|(y, _)| (self.g.length(y), (*y).clone())).map(|(y, c)| (y.clone(), c.clone())) {
            let by = self.canonical_basis(&y);
            add_scaled(&mut rest, &by, &c.neg());
            out.push((y, c));
        }
        out
    }

    pub fn kl_poly(&self, y: &ExtWeylElt, w: &ExtWeylElt) -> LaurentPoly {
        self.canonical_basis(w).get(y).cloned().unwrap_or_default()
    }

    pub fn to_doc(&self, h: &HeckeElt) -> HeckeDoc {
        HeckeDoc(h.iter().map(|(x, c)| (self.g.to_doc(x), c.clone())).collect())
    }

    pub fn from_doc(&self, d: &HeckeDoc) -> Result<HeckeElt, WeylError> {
        let mut h = HeckeElt::new();
        for (x, c) in &d.0 {
            add_term(&mut h, &self.g.from_doc(x)?, c);
        }
        Ok(h)
    }

    pub fn display(&self, h: &HeckeElt) -> String {
        if h.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<(&ExtWeylElt, &LaurentPoly)> = h.iter().collect();
        terms.sort_by_key(|(x, _)| (std::cmp::Reverse(self.g.length(x)), self.g.display(x)));
        let mut out = String::new();
        for (k, (x, c)) in terms.iter().enumerate() {
            let name = self.g.display(x);
            let basis = if name == "e" { "H_e".to_string() } else { format!("H_{{{name}}}") };
            let single = c.terms().count() == 1;
            let (neg, c) = match c.terms().next() {
                Some((_, v)) if single && v < 0 => (true, c.neg()),
                _ => (false, (*c).clone()),
            };
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if c.is_one() {
                out.push_str(&basis);
            } else if single {
                out.push_str(&format!("{c}·{basis}"));
            } else {
                out.push_str(&format!("({c})·{basis}"));
            }
        }
        out
    }
}
