//! Independent reference computations: breadth-first lengths and the
//! classical Kazhdan-Lusztig recursion for `P_{x,w}(q)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use pkl_core::hecke::{HeckeElt, LaurentPoly};
use pkl_core::weyl::{ExtWeylElt, WeylGroup};

/// Distance from the identity in the Cayley graph on all simple reflections.
pub fn bfs_lengths(g: &WeylGroup, max: usize) -> Vec<(ExtWeylElt, usize)> {
    let mut dist: HashMap<ExtWeylElt, usize> = HashMap::from([(g.identity(), 0)]);
    let mut order = vec![(g.identity(), 0)];
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == max {
            continue;
        }
        for s in 0..g.num_simples() {
            let y = g.mul_simple(&x, s);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                order.push((y.clone(), d + 1));
                queue.push_back(y);
            }
        }
    }
    order
}

pub fn reduced_words(g: &WeylGroup, w: &ExtWeylElt) -> Vec<Vec<usize>> {
    let l = g.length(w);
    if l == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for s in 0..g.num_simples() {
        let ws = g.mul_simple(w, s);
        if g.length(&ws) < l {
            for mut word in reduced_words(g, &ws) {
                word.push(s);
                out.push(word);
            }
        }
    }
    out.sort();
    out
}

/// Polynomials in `q`, lowest degree first.
type Q = Vec<i64>;

fn q_add(a: &mut Q, b: &Q, shift: usize, k: i64) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, c) in b.iter().enumerate() {
        a[i + shift] += k * c;
    }
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// `P_{x,w}` on a set of elements closed under taking smaller elements,
/// generated by the simple reflections it contains.
pub struct KlOracle {
    g: Arc<WeylGroup>,
    gens: Vec<usize>,
    len: HashMap<ExtWeylElt, usize>,
    by_len: Vec<ExtWeylElt>,
    memo: HashMap<(ExtWeylElt, ExtWeylElt), Q>,
}

impl KlOracle {
    pub fn new(g: Arc<WeylGroup>, elts: &[ExtWeylElt]) -> Self {
        let set: HashSet<&ExtWeylElt> = elts.iter().collect();
        let gens: Vec<usize> = (0..g.num_simples()).filter(|&s| set.contains(g.simple(s))).collect();
        let mut len = HashMap::from([(g.identity(), 0)]);
        let mut by_len = vec![g.identity()];
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = g.mul_simple(&x, s);
                if set.contains(&y) && !len.contains_key(&y) {
                    len.insert(y.clone(), len[&x] + 1);
                    by_len.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        KlOracle { g, gens, len, by_len, memo: HashMap::new() }
    }

    fn l(&self, x: &ExtWeylElt) -> usize {
        self.len.get(x).copied().unwrap_or(usize::MAX)
    }

    pub fn p(&mut self, x: &ExtWeylElt, w: &ExtWeylElt) -> Q {
        let (lx, lw) = (self.l(x), self.l(w));
        if lx > lw {
            return vec![];
        }
        if lw == 0 {
            return if lx == 0 { vec![1] } else { vec![] };
        }
        let key = (x.clone(), w.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let g = self.g.clone();
        let s = *self.gens.iter().find(|&&s| self.l(&g.simple_mul(s, w)) < lw).expect("left descent");
        let v = g.simple_mul(s, w);
        let sx = g.simple_mul(s, x);
        let c = usize::from(self.l(&sx) < lx);
        let mut r = Q::new();
        q_add(&mut r, &self.p(&sx, &v), 1 - c, 1);
        q_add(&mut r, &self.p(x, &v), c, 1);
        let lv = lw - 1;
        for z in self.by_len.clone() {
            let lz = self.l(&z);
            if lz >= lv || (lv - lz) % 2 == 0 || self.l(&g.simple_mul(s, &z)) > lz {
                continue;
            }
            let mu = self.p(&z, &v).get((lv - lz - 1) / 2).copied().unwrap_or(0);
            if mu != 0 {
                let pxz = self.p(x, &z);
                q_add(&mut r, &pxz, (lw - lz) / 2, -mu);
            }
        }
        self.memo.insert(key, r.clone());
        r
    }

    /// `b_w = Σ_x v^{ℓ(w)-ℓ(x)} P_{x,w}(v^{-2}) H_x`.
    pub fn canonical(&mut self, w: &ExtWeylElt) -> HeckeElt {
        let lw = self.l(w);
        let mut out = HeckeElt::new();
        for x in self.by_len.clone() {
            let lx = self.l(&x);
            if lx > lw {
                continue;
            }
            let p = self.p(&x, w);
            if p.is_empty() {
                continue;
            }
            let h = LaurentPoly::from_pairs(p.iter().enumerate().map(|(i, &c)| ((lw - lx) as i32 - 2 * i as i32, c)));
            out.insert(x, h);
        }
        out
    }
}
