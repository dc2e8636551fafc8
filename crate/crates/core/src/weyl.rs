//! The extended affine Weyl group `W = W_f ⋉ X`.
//!
//! Elements are stored as `w·t(λ)`: the finite part is its integer matrix on
//! X (columns are images of the basis vectors), the translation part is `λ`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::root_datum::{dot, smith_invariants, DatumError, RootDatum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("element is not in the affine Weyl group")]
    NotInWaff,
    #[error("element does not have length zero")]
    NotLengthZero,
    #[error("no conjugation witness found for affine reflection {0}")]
    ConjDataNotFound(usize),
    #[error("subset {0:?} does not generate a finite group")]
    NotFinitary(Vec<usize>),
    #[error("the length-zero subgroup is infinite; a truncation bound is required")]
    OmegaUnbounded,
    #[error("cannot parse element: {0}")]
    Parse(String),
    #[error(transparent)]
    Datum(#[from] DatumError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtWeylElt {
    /// Row-major `rank x rank` matrix of the finite part.
    pub fin: Vec<i64>,
    pub trans: Vec<i64>,
}

/// Serialized form of an element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EltDoc {
    pub fin_word: Vec<usize>,
    pub trans: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimpleKind {
    /// Index into the datum's list of simple roots.
    Finite(usize),
    /// Index of the irreducible component.
    Affine(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleReflection {
    pub kind: SimpleKind,
    pub element: ExtWeylElt,
    pub name: String,
    /// `α_s` and `α_s^∨` as vectors in X and X^∨.
    pub root: Vec<i64>,
    pub coroot: Vec<i64>,
    /// For affine reflections: `(s', w)` with `s = w s' w^{-1}` and `ℓ(ws') = ℓ(w) + 1`.
    pub conj_data: Option<(usize, ExtWeylElt)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    All,
    WaffOnly,
}

pub struct WeylGroup {
    pub datum: RootDatum,
    pub rank: usize,
    /// Positive roots with their coroots.
    pos: Vec<(Vec<i64>, Vec<i64>)>,
    positive: HashMap<Vec<i64>, bool>,
    pub simples: Vec<SimpleReflection>,
    pub n_fin: usize,
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    c[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    c
}

fn mat_vec(a: &[i64], v: &[i64]) -> Vec<i64> {
    let n = v.len();
    (0..n).map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum()).collect()
}

fn identity(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    (0..n).for_each(|i| m[i * n + i] = 1);
    m
}

impl WeylGroup {
    pub fn new(datum: RootDatum) -> Result<Self, WeylError> {
        let rank = datum.rank;
        let mut pos = Vec::new();
        let mut positive = HashMap::new();
        for i in 0..datum.num_roots() {
            let p = datum.is_positive(i);
            positive.insert(datum.roots[i].clone(), p);
            if p {
                pos.push((datum.roots[i].clone(), datum.coroots[i].clone()));
            }
        }
        let mut g = WeylGroup { rank, pos, positive, simples: Vec::new(), n_fin: datum.simple.len(), datum };
        let mut simples = Vec::new();
        for (k, &i) in g.datum.simple.iter().enumerate() {
            simples.push(SimpleReflection {
                kind: SimpleKind::Finite(k),
                element: ExtWeylElt { fin: g.datum.reflection_matrix(i), trans: vec![0; rank] },
                name: format!("s{}", k + 1),
                root: g.datum.roots[i].clone(),
                coroot: g.datum.coroots[i].clone(),
                conj_data: None,
            });
        }
        let comps = g.datum.components()?;
        let ncomp = comps.len();
        for (c, comp) in comps.iter().enumerate() {
            let b = comp.max_short_root;
            let beta = g.datum.roots[b].clone();
            let element = ExtWeylElt { fin: g.datum.reflection_matrix(b), trans: beta.iter().map(|x| -x).collect() };
            simples.push(SimpleReflection {
                kind: SimpleKind::Affine(c),
                element,
                name: if ncomp == 1 { "s0".to_string() } else { format!("s0_{}", c + 1) },
                root: beta.iter().map(|x| -x).collect(),
                coroot: g.datum.coroots[b].iter().map(|x| -x).collect(),
                conj_data: None,
            });
        }
        g.simples = simples;
        // witnesses need not exist when the derived subgroup is not simply connected
        for k in g.n_fin..g.simples.len() {
            g.simples[k].conj_data = g.find_conj_data(k).ok();
        }
        Ok(g)
    }

    /// The fixed `(s', w)` witness of an affine simple reflection.
    pub fn conj_data(&self, k: usize) -> Result<(usize, ExtWeylElt), WeylError> {
        self.simples[k].conj_data.clone().ok_or(WeylError::ConjDataNotFound(k))
    }

    pub fn from_name(name: &str) -> Result<Self, WeylError> {
        Self::new(RootDatum::named(name)?)
    }

    pub fn num_simples(&self) -> usize {
        self.simples.len()
    }

    pub fn identity(&self) -> ExtWeylElt {
        ExtWeylElt { fin: identity(self.rank), trans: vec![0; self.rank] }
    }

    pub fn translation(&self, lambda: &[i64]) -> ExtWeylElt {
        ExtWeylElt { fin: identity(self.rank), trans: lambda.to_vec() }
    }

    pub fn simple(&self, s: usize) -> &ExtWeylElt {
        &self.simples[s].element
    }

    pub fn is_identity(&self, x: &ExtWeylElt) -> bool {
        x.trans.iter().all(|&t| t == 0) && x.fin == identity(self.rank)
    }

    /// `(w,λ)(y,μ) = (wy, y^{-1}λ + μ)`.
    pub fn mul(&self, x: &ExtWeylElt, y: &ExtWeylElt) -> ExtWeylElt {
        let yinv = self.fin_inverse(&y.fin);
        let moved = mat_vec(&yinv, &x.trans);
        ExtWeylElt { fin: mat_mul(&x.fin, &y.fin, self.rank), trans: moved.iter().zip(&y.trans).map(|(a, b)| a + b).collect() }
    }

    pub fn inv(&self, x: &ExtWeylElt) -> ExtWeylElt {
        let moved = mat_vec(&x.fin, &x.trans);
        ExtWeylElt { fin: self.fin_inverse(&x.fin), trans: moved.iter().map(|a| -a).collect() }
    }

    pub fn mul_simple(&self, x: &ExtWeylElt, s: usize) -> ExtWeylElt {
        self.mul(x, self.simple(s))
    }

    pub fn simple_mul(&self, s: usize, x: &ExtWeylElt) -> ExtWeylElt {
        self.mul(self.simple(s), x)
    }

    pub fn product(&self, word: &[usize]) -> ExtWeylElt {
        word.iter().fold(self.identity(), |acc, &s| self.mul_simple(&acc, s))
    }

    fn is_positive_root(&self, v: &[i64]) -> bool {
        *self.positive.get(v).expect("finite Weyl group permutes the roots")
    }

    /// Inverse of a finite Weyl group matrix, via its reduced word.
    fn fin_inverse(&self, m: &[i64]) -> Vec<i64> {
        let word = self.fin_word_of(m);
        word.iter().rev().fold(identity(self.rank), |acc, &k| mat_mul(&acc, &self.simples[k].element.fin, self.rank))
    }

    /// Lexicographically least reduced word of a finite Weyl group matrix.
    pub fn fin_word_of(&self, m: &[i64]) -> Vec<usize> {
        let n = self.rank;
        let mut cur = m.to_vec();
        let mut word = Vec::new();
        // s_i is a left descent of w iff w^{-1}α_i < 0 iff α_i^∨ ∘ w takes a negative value on
        // positive roots; we test via the transpose: (w^T α_i^∨) is a negative coroot.
        'outer: loop {
            for k in 0..self.n_fin {
                let idx = self.datum.simple[k];
                let c = &self.datum.coroots[idx];
                // w^{-1} α_i < 0  <=>  w^T α_i^∨ < 0 (as coroot of w^{-1}α_i)
                let img: Vec<i64> = (0..n).map(|j| (0..n).map(|i| cur[i * n + j] * c[i]).sum()).collect();
                let root_idx = self.datum.coroots.iter().position(|r| *r == img).expect("coroot");
                if !self.datum.is_positive(root_idx) {
                    word.push(k);
                    cur = mat_mul(&self.simples[k].element.fin, &cur, n);
                    continue 'outer;
                }
            }
            break;
        }
        word
    }

    pub fn fin_word(&self, x: &ExtWeylElt) -> Vec<usize> {
        self.fin_word_of(&x.fin)
    }

    pub fn length(&self, x: &ExtWeylElt) -> usize {
        let mut total = 0i64;
        for (a, ac) in &self.pos {
            let wa = mat_vec(&x.fin, a);
            let k = dot(&x.trans, ac);
            total += if self.is_positive_root(&wa) { k.abs() } else { (k + 1).abs() };
        }
        total as usize
    }

    pub fn is_right_descent(&self, x: &ExtWeylElt, s: usize) -> bool {
        self.length(&self.mul_simple(x, s)) < self.length(x)
    }

    pub fn is_left_descent(&self, x: &ExtWeylElt, s: usize) -> bool {
        self.length(&self.simple_mul(s, x)) < self.length(x)
    }

    pub fn right_descents(&self, x: &ExtWeylElt) -> Vec<usize> {
        let l = self.length(x);
        (0..self.num_simples()).filter(|&s| self.length(&self.mul_simple(x, s)) < l).collect()
    }

    /// `x = ω·u` with `ℓ(ω) = 0`; also returns the reduced word of `u`.
    pub fn omega_factorize_word(&self, x: &ExtWeylElt) -> (ExtWeylElt, Vec<usize>) {
        let mut cur = x.clone();
        let mut len = self.length(&cur);
        let mut rev = Vec::new();
        while len > 0 {
            let s = (0..self.num_simples())
                .find(|&s| self.length(&self.mul_simple(&cur, s)) < len)
                .expect("positive length element has a descent");
            cur = self.mul_simple(&cur, s);
            rev.push(s);
            len -= 1;
        }
        rev.reverse();
        (cur, rev)
    }

    pub fn omega_factorize(&self, x: &ExtWeylElt) -> (ExtWeylElt, ExtWeylElt) {
        let (omega, word) = self.omega_factorize_word(x);
        (omega, self.product(&word))
    }

    pub fn in_waff(&self, x: &ExtWeylElt) -> bool {
        self.is_identity(&self.omega_factorize_word(x).0)
    }

    pub fn reduced_word(&self, u: &ExtWeylElt) -> Result<Vec<usize>, WeylError> {
        let (omega, word) = self.omega_factorize_word(u);
        if !self.is_identity(&omega) {
            return Err(WeylError::NotInWaff);
        }
        Ok(word)
    }

    pub fn conj_simple(&self, omega: &ExtWeylElt, s: usize) -> Result<usize, WeylError> {
        if self.length(omega) != 0 {
            return Err(WeylError::NotLengthZero);
        }
        let c = self.mul(&self.mul(omega, self.simple(s)), &self.inv(omega));
        Ok((0..self.num_simples()).find(|&t| *self.simple(t) == c).expect("length-zero elements permute the simple reflections"))
    }

    /// Bruhat order; elements in different Ω-components are incomparable.
    pub fn bruhat_leq(&self, x: &ExtWeylElt, y: &ExtWeylElt) -> bool {
        let (mut x, mut y) = (x.clone(), y.clone());
        loop {
            let (lx, ly) = (self.length(&x), self.length(&y));
            if lx > ly {
                return false;
            }
            if ly == 0 {
                return x == y;
            }
            let s = (0..self.num_simples()).find(|&s| self.length(&self.mul_simple(&y, s)) < ly).expect("descent");
            let xs = self.mul_simple(&x, s);
            if self.length(&xs) < lx {
                x = xs;
            }
            y = self.mul_simple(&y, s);
        }
    }

    fn find_conj_data(&self, k: usize) -> Result<(usize, ExtWeylElt), WeylError> {
        let target = self.simple(k).clone();
        let comp = match self.simples[k].kind {
            SimpleKind::Affine(c) => c,
            SimpleKind::Finite(_) => unreachable!(),
        };
        let h = self.datum.components()?[comp].kind.coxeter_number();
        // generators: simple reflections and unit translations
        let mut gens: Vec<ExtWeylElt> = self.simples.iter().map(|s| s.element.clone()).collect();
        for i in 0..self.rank {
            let mut e = vec![0; self.rank];
            e[i] = 1;
            gens.push(self.translation(&e));
            e[i] = -1;
            gens.push(self.translation(&e));
        }
        let mut seen: HashSet<ExtWeylElt> = HashSet::new();
        let mut layer = vec![self.identity()];
        seen.insert(self.identity());
        for _ in 0..=2 * h {
            for w in &layer {
                let winv = self.inv(w);
                let lw = self.length(w);
                for sp in 0..self.n_fin {
                    let ws = self.mul_simple(w, sp);
                    if self.length(&ws) == lw + 1 && self.mul(&ws, &winv) == target {
                        return Ok((sp, w.clone()));
                    }
                }
            }
            let mut next = Vec::new();
            for w in &layer {
                for g in &gens {
                    let n = self.mul(w, g);
                    if seen.insert(n.clone()) {
                        next.push(n);
                    }
                }
            }
            layer = next;
        }
        Err(WeylError::ConjDataNotFound(k))
    }

    /// Whether X / ZR is finite.
    pub fn omega_is_finite(&self) -> bool {
        self.n_fin == self.rank
    }

    /// Length-zero parts of `t(λ)` for `λ ∈ [-bound, bound]^rank`.
    pub fn omega_elements(&self, bound: i64) -> Vec<ExtWeylElt> {
        let mut out = BTreeSet::new();
        let mut lambda = vec![-bound; self.rank];
        loop {
            out.insert(self.omega_factorize_word(&self.translation(&lambda)).0);
            let mut i = 0;
            loop {
                if i == self.rank {
                    let mut v: Vec<ExtWeylElt> = out.into_iter().collect();
                    v.sort_by_key(|w| (!self.is_identity(w), w.clone()));
                    return v;
                }
                lambda[i] += 1;
                if lambda[i] > bound {
                    lambda[i] = -bound;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// The whole of Ω when it is finite.
    pub fn omega_group(&self) -> Result<Vec<ExtWeylElt>, WeylError> {
        if !self.omega_is_finite() {
            return Err(WeylError::OmegaUnbounded);
        }
        let cols: Vec<Vec<i64>> = self.datum.simple.iter().map(|&i| self.datum.roots[i].clone()).collect();
        let order: i64 = smith_invariants(&cols).iter().product();
        Ok(self.omega_elements(order.max(1)))
    }

    /// All `u ∈ W_aff` with `ℓ(u) <= max_len`, layered by length.
    pub fn enumerate_waff(&self, max_len: usize) -> Vec<ExtWeylElt> {
        let mut out = vec![self.identity()];
        let mut layer = vec![self.identity()];
        for l in 1..=max_len {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for x in &layer {
                for s in 0..self.num_simples() {
                    let xs = self.mul_simple(x, s);
                    if self.length(&xs) == l && seen.insert(xs.clone()) {
                        next.push(xs);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Elements of length `<= max_len`; with `Sector::All` the Ω-parts range over
    /// `omegas` (or all of Ω if finite and `omegas` is `None`).
    pub fn enumerate(&self, max_len: usize, sector: Sector, omegas: Option<&[ExtWeylElt]>) -> Result<Vec<ExtWeylElt>, WeylError> {
        let waff = self.enumerate_waff(max_len);
        match sector {
            Sector::WaffOnly => Ok(waff),
            Sector::All => {
                let om = match omegas {
                    Some(o) => o.to_vec(),
                    None => self.omega_group()?,
                };
                Ok(om.iter().flat_map(|o| waff.iter().map(move |u| self.mul(o, u))).collect())
            }
        }
    }

    /// Elements and longest element of the parabolic subgroup generated by `k`.
    pub fn finitary_data(&self, k: &[usize]) -> Result<(Vec<ExtWeylElt>, ExtWeylElt), WeylError> {
        let n = k.len();
        let guard: usize = (1usize << n) * (1..=n + 1).product::<usize>();
        let mut seen: HashSet<ExtWeylElt> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.identity()]);
        seen.insert(self.identity());
        while let Some(x) = queue.pop_front() {
            order.push(x.clone());
            if order.len() > guard {
                return Err(WeylError::NotFinitary(k.to_vec()));
            }
            for &s in k {
                let xs = self.mul_simple(&x, s);
                if seen.insert(xs.clone()) {
                    queue.push_back(xs);
                }
            }
        }
        let longest = order.iter().max_by_key(|x| self.length(x)).cloned().expect("nonempty");
        Ok((order, longest))
    }

    pub fn is_finitary(&self, k: &[usize]) -> bool {
        self.finitary_data(k).is_ok()
    }

    /// Elements of `candidates` with `ℓ(w_L w w_K) = ℓ(w_L) + ℓ(w) + ℓ(w_K)`.
    pub fn filter_double_coset_reps(&self, l: &[usize], k: &[usize], candidates: &[ExtWeylElt]) -> Result<Vec<ExtWeylElt>, WeylError> {
        let (_, wl) = self.finitary_data(l)?;
        let (_, wk) = self.finitary_data(k)?;
        let (ll, lk) = (self.length(&wl), self.length(&wk));
        Ok(candidates
            .iter()
            .filter(|w| self.length(&self.mul(&self.mul(&wl, w), &wk)) == ll + self.length(w) + lk)
            .cloned()
            .collect())
    }

    pub fn min_double_coset_reps(&self, l: &[usize], k: &[usize], max_len: usize) -> Result<Vec<ExtWeylElt>, WeylError> {
        let all = self.enumerate_waff(max_len);
        self.filter_double_coset_reps(l, k, &all)
    }

    pub fn is_min_double_coset_rep(&self, l: &[usize], k: &[usize], w: &ExtWeylElt) -> Result<bool, WeylError> {
        Ok(!self.filter_double_coset_reps(l, k, std::slice::from_ref(w))?.is_empty())
    }

    pub fn to_doc(&self, x: &ExtWeylElt) -> EltDoc {
        EltDoc { fin_word: self.fin_word(x), trans: x.trans.clone() }
    }

    pub fn from_doc(&self, doc: &EltDoc) -> Result<ExtWeylElt, WeylError> {
        if doc.trans.len() != self.rank {
            return Err(WeylError::Parse(format!("translation must have length {}", self.rank)));
        }
        if let Some(&bad) = doc.fin_word.iter().find(|&&i| i >= self.n_fin) {
            return Err(WeylError::Parse(format!("finite index {bad} out of range")));
        }
        let fin = doc.fin_word.iter().fold(identity(self.rank), |acc, &k| mat_mul(&acc, &self.simples[k].element.fin, self.rank));
        Ok(ExtWeylElt { fin, trans: doc.trans.clone() })
    }

    pub fn simple_by_name(&self, name: &str) -> Option<usize> {
        self.simples.iter().position(|s| s.name == name)
    }

    /// Human-readable form: the Ω-part (if nontrivial) followed by a reduced word.
    pub fn display(&self, x: &ExtWeylElt) -> String {
        let (omega, word) = self.omega_factorize_word(x);
        let mut parts = Vec::new();
        if !self.is_identity(&omega) {
            let d = self.to_doc(&omega);
            parts.push(format!("o{:?}{:?}", d.fin_word, d.trans).replace(' ', ""));
        }
        parts.extend(word.iter().map(|&s| self.simples[s].name.clone()));
        if parts.is_empty() {
            "e".to_string()
        } else {
            parts.join(".")
        }
    }

    /// Parses `e`, a word like `s0.s1.s2` (also `s0 s1 s2`), or the JSON form.
    pub fn parse(&self, text: &str) -> Result<ExtWeylElt, WeylError> {
        let t = text.trim();
        if t.starts_with('{') {
            let doc: EltDoc = serde_json::from_str(t).map_err(|e| WeylError::Parse(e.to_string()))?;
            return self.from_doc(&doc);
        }
        let (omega, t) = self.split_omega_prefix(t)?;
        if t.is_empty() || t == "e" {
            return Ok(omega);
        }
        let mut word = Vec::new();
        for tok in t.split(|c: char| c == '.' || c == ',' || c == '*' || c.is_whitespace()).filter(|s| !s.is_empty()) {
            let s = self.simple_by_name(tok).ok_or_else(|| WeylError::Parse(format!("unknown simple reflection {tok:?}")))?;
            word.push(s);
        }
        Ok(self.mul(&omega, &self.product(&word)))
    }

    /// Strips a leading `omega:<json>` or displayed `o[..][..]` part.
    fn split_omega_prefix<'a>(&self, t: &'a str) -> Result<(ExtWeylElt, &'a str), WeylError> {
        let bad = |m: &str| WeylError::Parse(m.to_string());
        if let Some(rest) = t.strip_prefix("omega:") {
            let end = rest.find('}').ok_or_else(|| bad("unterminated omega part"))?;
            let doc: EltDoc = serde_json::from_str(&rest[..=end]).map_err(|e| bad(&e.to_string()))?;
            return Ok((self.from_doc(&doc)?, rest[end + 1..].trim_start_matches(['.', ' '])));
        }
        if let Some(rest) = t.strip_prefix("o[") {
            let (fin, rest) = rest.split_once(']').ok_or_else(|| bad("unterminated omega part"))?;
            let rest = rest.strip_prefix('[').ok_or_else(|| bad("omega part needs a translation"))?;
            let (trans, rest) = rest.split_once(']').ok_or_else(|| bad("unterminated omega part"))?;
            let json = format!(r#"{{"fin_word":[{fin}],"trans":[{trans}]}}"#);
            let doc: EltDoc = serde_json::from_str(&json).map_err(|e| bad(&e.to_string()))?;
            return Ok((self.from_doc(&doc)?, rest.trim_start_matches(['.', ' '])));
        }
        Ok((self.identity(), t))
    }
}

impl fmt::Display for EltDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}
