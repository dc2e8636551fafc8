//! Root data with explicit root/coroot tables, Dynkin classification of the
//! irreducible components, and the standing assumptions on `p`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("malformed root datum: {0}")]
    MalformedDatum(String),
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("component {0:?} is not of finite type")]
    UnclassifiableComponent(Vec<usize>),
    #[error("unknown root datum name {0:?}")]
    UnknownName(String),
}

/// The JSON document form of a root datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumDoc {
    pub name: String,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub simple: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl DynkinType {
    /// Lower bound on `p` from the table of bounds: `p` must be strictly larger.
    pub fn p_bound(self) -> u64 {
        match self {
            DynkinType::A(_) => 1,
            DynkinType::B(n) => n as u64,
            DynkinType::C(_) | DynkinType::D(_) => 2,
            DynkinType::E(6) => 3,
            DynkinType::E(7) => 19,
            DynkinType::E(_) => 31,
            DynkinType::F4 | DynkinType::G2 => 3,
        }
    }

    /// Coxeter number.
    pub fn coxeter_number(self) -> usize {
        match self {
            DynkinType::A(n) => n + 1,
            DynkinType::B(n) | DynkinType::C(n) => 2 * n,
            DynkinType::D(n) => 2 * n - 2,
            DynkinType::E(6) => 12,
            DynkinType::E(7) => 18,
            DynkinType::E(_) => 30,
            DynkinType::F4 => 12,
            DynkinType::G2 => 6,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            DynkinType::A(n) | DynkinType::B(n) | DynkinType::C(n) | DynkinType::D(n) | DynkinType::E(n) => n,
            DynkinType::F4 => 4,
            DynkinType::G2 => 2,
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::B(n) => write!(f, "B{n}"),
            DynkinType::C(n) => write!(f, "C{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
            DynkinType::F4 => write!(f, "F4"),
            DynkinType::G2 => write!(f, "G2"),
        }
    }
}

/// An irreducible component of the root system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Indices into `RootDatum::roots` of the simple roots in this component.
    pub simple: Vec<usize>,
    pub kind: DynkinType,
    /// Index into `RootDatum::roots` of the maximal short root.
    pub max_short_root: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCheck {
    pub label: String,
    pub bound: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    pub p: u64,
    pub free_quotient: bool,
    pub cotorsion_ok: bool,
    pub figure1_ok: bool,
    pub per_component: Vec<ComponentCheck>,
}

impl AssumptionReport {
    pub fn all_ok(&self) -> bool {
        self.free_quotient && self.cotorsion_ok && self.figure1_ok
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = |b: bool| if b { "ok" } else { "FAIL" };
        writeln!(f, "p = {}", self.p)?;
        writeln!(f, "character lattice / root lattice free: {}", flag(self.free_quotient))?;
        writeln!(f, "cocharacter lattice / coroot lattice without p-torsion: {}", flag(self.cotorsion_ok))?;
        for c in &self.per_component {
            writeln!(f, "component {}: need p > {}: {}", c.label, c.bound, flag(c.pass))?;
        }
        write!(f, "bounds on p: {}", flag(self.figure1_ok))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub name: String,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    /// Indices into `roots` of the simple roots.
    pub simple: Vec<usize>,
    /// Coordinates of each root in the simple roots.
    simple_coords: Vec<Vec<i64>>,
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootDatum {
    pub fn from_doc(doc: DatumDoc) -> Result<Self, DatumError> {
        let DatumDoc { name, rank, roots, coroots, simple } = doc;
        let bad = |m: String| Err(DatumError::MalformedDatum(m));
        if rank == 0 {
            return bad("rank must be positive".into());
        }
        if roots.len() != coroots.len() {
            return bad("roots and coroots differ in number".into());
        }
        for v in roots.iter().chain(&coroots) {
            if v.len() != rank {
                return bad(format!("vector {v:?} does not have length {rank}"));
            }
        }
        let distinct: BTreeSet<&Vec<i64>> = roots.iter().collect();
        if distinct.len() != roots.len() {
            return bad("duplicate roots".into());
        }
        for &i in &simple {
            if i >= roots.len() {
                return bad(format!("simple index {i} out of range"));
            }
        }
        for (i, (r, c)) in roots.iter().zip(&coroots).enumerate() {
            if dot(r, c) != 2 {
                return bad(format!("<root {i}, coroot {i}> != 2"));
            }
        }
        for &i in &simple {
            for &j in &simple {
                if i != j && dot(&roots[i], &coroots[j]) > 0 {
                    return bad("simple Cartan matrix has a positive off-diagonal entry".into());
                }
            }
        }
        // reflection closure, compatible on coroots
        for (b, (beta, beta_c)) in roots.iter().zip(&coroots).enumerate() {
            for (a, (alpha, alpha_c)) in roots.iter().zip(&coroots).enumerate() {
                let k = dot(alpha, beta_c);
                let img: Vec<i64> = alpha.iter().zip(beta).map(|(x, y)| x - k * y).collect();
                let kc = dot(beta, alpha_c);
                let img_c: Vec<i64> = alpha_c.iter().zip(beta_c).map(|(x, y)| x - kc * y).collect();
                match roots.iter().position(|r| *r == img) {
                    Some(idx) if coroots[idx] == img_c => {}
                    _ => return bad(format!("reflection of root {a} in root {b} is not a root")),
                }
            }
        }
        let simple_coords = simple_coordinates(&roots, &simple)
            .ok_or_else(|| DatumError::MalformedDatum("roots are not integral combinations of the simple roots".into()))?;
        for (i, c) in simple_coords.iter().enumerate() {
            let pos = c.iter().all(|&x| x >= 0);
            let neg = c.iter().all(|&x| x <= 0);
            if !(pos || neg) {
                return bad(format!("root {i} has mixed-sign simple coordinates"));
            }
        }
        Ok(RootDatum { name, rank, roots, coroots, simple, simple_coords })
    }

    pub fn to_doc(&self) -> DatumDoc {
        DatumDoc { name: self.name.clone(), rank: self.rank, roots: self.roots.clone(), coroots: self.coroots.clone(), simple: self.simple.clone() }
    }

    /// Builds a named datum: `GLn`, `Xn-sc`, `Xn-adj` (Cartan types A–G), and
    /// products joined by `x`, e.g. `A1xA1`.
    pub fn named(name: &str) -> Result<Self, DatumError> {
        let doc = named_doc(name)?;
        Self::from_doc(doc)
    }

    pub fn from_json(s: &str) -> Result<Self, DatumError> {
        let doc: DatumDoc = serde_json::from_str(s).map_err(|e| DatumError::MalformedDatum(e.to_string()))?;
        Self::from_doc(doc)
    }

    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(&(self.rank, &self.roots, &self.coroots, &self.simple)).expect("serializable");
        let digest = Sha256::digest(canonical.as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn simple_coords(&self, root: usize) -> &[i64] {
        &self.simple_coords[root]
    }

    pub fn is_positive(&self, root: usize) -> bool {
        self.simple_coords[root].iter().all(|&x| x >= 0)
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.roots.len()).filter(move |&i| self.is_positive(i))
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == v)
    }

    pub fn pairing(&self, lambda: &[i64], coweight: &[i64]) -> Result<i64, DatumError> {
        for v in [lambda, coweight] {
            if v.len() != self.rank {
                return Err(DatumError::DimensionMismatch { expected: self.rank, got: v.len() });
            }
        }
        Ok(dot(lambda, coweight))
    }

    /// `cartan[i][j] = <alpha_i, alpha_j^vee>` over the simple roots.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        self.simple.iter().map(|&i| self.simple.iter().map(|&j| dot(&self.roots[i], &self.coroots[j])).collect()).collect()
    }

    /// Matrix of the reflection in root `i`, acting on column vectors of X.
    pub fn reflection_matrix(&self, i: usize) -> Vec<i64> {
        let n = self.rank;
        let (a, ac) = (&self.roots[i], &self.coroots[i]);
        let mut m = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                m[r * n + c] = i64::from(r == c) - a[r] * ac[c];
            }
        }
        m
    }

    /// Irreducible components, ordered by their smallest simple index.
    pub fn components(&self) -> Result<Vec<Component>, DatumError> {
        let cartan = self.cartan();
        let k = self.simple.len();
        let mut seen = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut idx = 0;
            while idx < comp.len() {
                let i = comp[idx];
                for j in 0..k {
                    if !seen[j] && cartan[i][j] != 0 {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                idx += 1;
            }
            comp.sort_unstable();
            let kind = classify(&cartan, &comp).ok_or_else(|| DatumError::UnclassifiableComponent(comp.iter().map(|&c| self.simple[c]).collect()))?;
            let lengths = simple_lengths(&cartan, &comp);
            let max_short_root = self.max_short_root(&cartan, &comp, &lengths);
            out.push(Component { simple: comp.iter().map(|&c| self.simple[c]).collect(), kind, max_short_root });
        }
        Ok(out)
    }

    fn max_short_root(&self, cartan: &[Vec<i64>], comp: &[usize], lengths: &[i64]) -> usize {
        let sq_len = |coords: &[i64]| -> i64 {
            let mut s = 0;
            for &i in comp {
                for &j in comp {
                    // (alpha_i, alpha_j) = cartan[i][j] * |alpha_j|^2 / 2
                    s += coords[i] * coords[j] * cartan[i][j] * lengths[j];
                }
            }
            s / 2
        };
        let in_comp: Vec<usize> = self
            .positive_roots()
            .filter(|&r| self.simple_coords[r].iter().enumerate().all(|(i, &c)| c == 0 || comp.contains(&i)))
            .collect();
        let min_len = in_comp.iter().map(|&r| sq_len(&self.simple_coords[r])).min().expect("component has roots");
        *in_comp
            .iter()
            .filter(|&&r| sq_len(&self.simple_coords[r]) == min_len)
            .max_by_key(|&&r| (self.simple_coords[r].iter().sum::<i64>(), std::cmp::Reverse(r)))
            .expect("short roots exist")
    }

    /// Checks the standing assumptions for the prime `p`.
    pub fn check_assumptions(&self, p: u64) -> Result<AssumptionReport, DatumError> {
        let root_cols: Vec<Vec<i64>> = self.simple.iter().map(|&i| self.roots[i].clone()).collect();
        let coroot_cols: Vec<Vec<i64>> = self.simple.iter().map(|&i| self.coroots[i].clone()).collect();
        let free_quotient = smith_invariants(&root_cols).iter().all(|&d| d == 1);
        let cotorsion_ok = smith_invariants(&coroot_cols).iter().all(|&d| p == 0 || d % p as i64 != 0);
        let per_component: Vec<ComponentCheck> = self
            .components()?
            .into_iter()
            .map(|c| {
                let bound = c.kind.p_bound();
                ComponentCheck { label: c.kind.to_string(), bound, pass: p == 0 || p > bound }
            })
            .collect();
        let figure1_ok = per_component.iter().all(|c| c.pass);
        Ok(AssumptionReport { p, free_quotient, cotorsion_ok, figure1_ok, per_component })
    }
}

/// Squared lengths of the simple roots in `comp`, scaled to integers.
fn simple_lengths(cartan: &[Vec<i64>], comp: &[usize]) -> Vec<i64> {
    let k = cartan.len();
    let mut len = vec![0i64; k];
    len[comp[0]] = 6;
    let mut stack = vec![comp[0]];
    while let Some(i) = stack.pop() {
        for &j in comp {
            if len[j] == 0 && cartan[i][j] != 0 {
                // |alpha_j|^2 / |alpha_i|^2 = cartan[j][i] / cartan[i][j]
                len[j] = len[i] * cartan[j][i] / cartan[i][j];
                stack.push(j);
            }
        }
    }
    let g = comp.iter().fold(0, |acc, &i| gcd(acc, len[i]));
    comp.iter().for_each(|&i| len[i] /= g);
    len
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn classify(cartan: &[Vec<i64>], comp: &[usize]) -> Option<DynkinType> {
    let n = comp.len();
    let mut edges = Vec::new();
    for (a, &i) in comp.iter().enumerate() {
        for (b, &j) in comp.iter().enumerate() {
            if a < b && cartan[i][j] != 0 {
                edges.push((a, b, cartan[i][j] * cartan[j][i]));
            }
        }
    }
    if edges.len() + 1 != n {
        return None; // not a tree
    }
    if edges.iter().any(|e| e.2 > 3) {
        return None;
    }
    let degree: Vec<usize> = (0..n).map(|v| edges.iter().filter(|e| e.0 == v || e.1 == v).count()).collect();
    let multi: Vec<&(usize, usize, i64)> = edges.iter().filter(|e| e.2 > 1).collect();
    let lengths = simple_lengths(cartan, comp);
    let ls: Vec<i64> = comp.iter().map(|&i| lengths[i]).collect();
    let max_len = *ls.iter().max().unwrap();
    let short = ls.iter().filter(|&&l| l < max_len).count();
    match multi.len() {
        0 => {
            let branch: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
            match branch.len() {
                0 => Some(DynkinType::A(n)),
                1 if degree[branch[0]] == 3 => {
                    let c = branch[0];
                    let mut arms: Vec<usize> = edges
                        .iter()
                        .filter_map(|e| if e.0 == c { Some(e.1) } else if e.1 == c { Some(e.0) } else { None })
                        .map(|start| arm_length(&edges, c, start))
                        .collect();
                    arms.sort_unstable();
                    match arms.as_slice() {
                        [1, 1, _] => Some(DynkinType::D(n)),
                        [1, 2, 2] => Some(DynkinType::E(6)),
                        [1, 2, 3] => Some(DynkinType::E(7)),
                        [1, 2, 4] => Some(DynkinType::E(8)),
                        _ => None,
                    }
                }
                _ => None,
            }
        }
        1 => {
            if degree.iter().any(|&d| d > 2) {
                return None;
            }
            match multi[0].2 {
                3 if n == 2 => Some(DynkinType::G2),
                2 if n == 2 => Some(DynkinType::B(2)),
                2 if n == 4 && short == 2 => {
                    // F4 has the double bond in the middle of the path
                    let (a, b) = (multi[0].0, multi[0].1);
                    if degree[a] == 2 && degree[b] == 2 {
                        Some(DynkinType::F4)
                    } else {
                        None
                    }
                }
                2 if short == 1 => Some(DynkinType::B(n)),
                2 if short == n - 1 => Some(DynkinType::C(n)),
                _ => None,
            }
        }
        _ => None,
    }
}

fn arm_length(edges: &[(usize, usize, i64)], center: usize, start: usize) -> usize {
    let (mut prev, mut cur, mut len) = (center, start, 1);
    loop {
        let next = edges.iter().find_map(|e| {
            if e.0 == cur && e.1 != prev {
                Some(e.1)
            } else if e.1 == cur && e.0 != prev {
                Some(e.0)
            } else {
                None
            }
        });
        match next {
            Some(n) => {
                prev = cur;
                cur = n;
                len += 1;
            }
            None => return len,
        }
    }
}

/// Integer coordinates of every root in the simple roots, if they exist.
fn simple_coordinates(roots: &[Vec<i64>], simple: &[usize]) -> Option<Vec<Vec<i64>>> {
    use crate::field::{Field, Rational};
    use crate::linalg::Mat;
    let rank = roots.first().map_or(0, |r| r.len());
    let k = simple.len();
    let mut basis = Mat::<Rational>::zeros(rank, k);
    for (j, &s) in simple.iter().enumerate() {
        for i in 0..rank {
            basis.set(i, j, Rational::from_i64(roots[s][i]));
        }
    }
    if basis.rank() != k {
        return None;
    }
    roots
        .iter()
        .map(|r| {
            let b: Vec<Rational> = r.iter().map(|&x| Rational::from_i64(x)).collect();
            let sol = basis.solve(&b)?;
            sol.iter()
                .map(|x| if x.denom() == &num_bigint::BigInt::from(1) { num_traits::ToPrimitive::to_i64(x.numer()) } else { None })
                .collect()
        })
        .collect()
}

/// Nonzero invariant factors of the integer matrix whose columns are `cols`.
pub fn smith_invariants(cols: &[Vec<i64>]) -> Vec<i64> {
    if cols.is_empty() {
        return Vec::new();
    }
    let (m, n) = (cols[0].len(), cols.len());
    let mut a: Vec<Vec<i64>> = (0..m).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the remaining block as pivot
        let Some((pi, pj)) = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut done = false;
        while !done {
            done = true;
            for i in t + 1..m {
                let q = a[i][t] / a[t][t];
                for j in t..n {
                    a[i][j] -= q * a[t][j];
                }
                if a[i][t] != 0 {
                    a.swap(t, i);
                    done = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j] / a[t][t];
                for row in a.iter_mut().skip(t) {
                    row[j] -= q * row[t];
                }
                if a[t][j] != 0 {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    done = false;
                }
            }
            if done {
                // the pivot must divide the rest of the block
                if let Some((i, _)) = (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % a[t][t] != 0) {
                    for j in t..n {
                        a[t][j] += a[i][j];
                    }
                    done = false;
                }
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

fn cartan_of_type(kind: char, n: usize) -> Option<Vec<Vec<i64>>> {
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
    }
    let link = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match kind {
        'A' if n >= 1 => (0..n.saturating_sub(1)).for_each(|i| link(&mut c, i, i + 1)),
        'B' | 'C' if n >= 2 => {
            (0..n - 1).for_each(|i| link(&mut c, i, i + 1));
            // c[i][j] = <alpha_i, alpha_j^vee>; B: last root short
            if kind == 'B' {
                c[n - 2][n - 1] = -2;
            } else {
                c[n - 1][n - 2] = -2;
            }
        }
        'D' if n >= 4 => {
            (0..n - 2).for_each(|i| link(&mut c, i, i + 1));
            link(&mut c, n - 3, n - 1);
        }
        'E' if (6..=8).contains(&n) => {
            link(&mut c, 0, 2);
            link(&mut c, 1, 3);
            (2..n - 1).for_each(|i| link(&mut c, i, i + 1));
        }
        'F' if n == 4 => {
            link(&mut c, 0, 1);
            link(&mut c, 1, 2);
            link(&mut c, 2, 3);
            c[1][2] = -2;
        }
        'G' if n == 2 => {
            link(&mut c, 0, 1);
            c[1][0] = -3;
        }
        _ => return None,
    }
    Some(c)
}

/// Datum of a Cartan matrix, simply connected (`sc`) or adjoint.
fn doc_from_cartan(name: &str, cartan: &[Vec<i64>], sc: bool) -> DatumDoc {
    let n = cartan.len();
    // orbit of (root, coroot) pairs in simple coordinates
    let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            (e.clone(), e)
        })
        .collect();
    let mut idx = 0;
    while idx < pairs.len() {
        let (r, c) = pairs[idx].clone();
        for j in 0..n {
            let k: i64 = (0..n).map(|i| r[i] * cartan[i][j]).sum();
            let kc: i64 = (0..n).map(|i| c[i] * cartan[j][i]).sum();
            let mut r2 = r.clone();
            r2[j] -= k;
            let mut c2 = c.clone();
            c2[j] -= kc;
            if !pairs.iter().any(|(x, _)| *x == r2) {
                pairs.push((r2, c2));
            }
        }
        idx += 1;
    }
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for (r, c) in &pairs {
        if sc {
            roots.push((0..n).map(|j| (0..n).map(|i| r[i] * cartan[i][j]).sum()).collect());
            coroots.push(c.clone());
        } else {
            roots.push(r.clone());
            coroots.push((0..n).map(|j| (0..n).map(|i| cartan[j][i] * c[i]).sum()).collect());
        }
    }
    DatumDoc { name: name.to_string(), rank: n, roots, coroots, simple: (0..n).collect() }
}

fn gl_doc(name: &str, n: usize) -> DatumDoc {
    let mut roots = Vec::new();
    let mut simple = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut v = vec![0; n];
                v[i] = 1;
                v[j] = -1;
                if j == i + 1 {
                    simple.push(roots.len());
                }
                roots.push(v);
            }
        }
    }
    DatumDoc { name: name.to_string(), rank: n, coroots: roots.clone(), roots, simple }
}

fn product_doc(name: &str, parts: &[DatumDoc]) -> DatumDoc {
    let rank: usize = parts.iter().map(|d| d.rank).sum();
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    let mut simple = Vec::new();
    let mut offset = 0;
    for d in parts {
        let base = roots.len();
        for (r, c) in d.roots.iter().zip(&d.coroots) {
            let mut rr = vec![0; rank];
            let mut cc = vec![0; rank];
            rr[offset..offset + d.rank].copy_from_slice(r);
            cc[offset..offset + d.rank].copy_from_slice(c);
            roots.push(rr);
            coroots.push(cc);
        }
        simple.extend(d.simple.iter().map(|s| s + base));
        offset += d.rank;
    }
    DatumDoc { name: name.to_string(), rank, roots, coroots, simple }
}

pub fn named_doc(name: &str) -> Result<DatumDoc, DatumError> {
    let unknown = || DatumError::UnknownName(name.to_string());
    let trimmed = name.trim();
    if trimmed.contains('x') {
        let parts: Result<Vec<DatumDoc>, DatumError> = trimmed.split('x').map(named_doc).collect();
        return Ok(product_doc(trimmed, &parts.map_err(|_| unknown())?));
    }
    if let Some(n) = trimmed.strip_prefix("GL") {
        let n: usize = n.parse().map_err(|_| unknown())?;
        if n < 1 {
            return Err(unknown());
        }
        return Ok(gl_doc(trimmed, n));
    }
    let (body, sc) = match trimmed.rsplit_once('-') {
        Some((b, "sc")) => (b, true),
        Some((b, "adj")) => (b, false),
        Some(_) => return Err(unknown()),
        None => (trimmed, true),
    };
    let mut chars = body.chars();
    let kind = chars.next().ok_or_else(unknown)?;
    let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
    let cartan = cartan_of_type(kind, n).ok_or_else(unknown)?;
    Ok(doc_from_cartan(trimmed, &cartan, sc))
}

/// Names bundled with the tool.
pub const BUILTIN_NAMES: &[&str] =
    &["A1-sc", "A1-adj", "GL2", "GL3", "A2-sc", "A2-adj", "A3-sc", "B2-sc", "B2-adj", "C3-sc", "D4-sc", "G2", "F4", "E6-sc", "E7-sc", "E8", "A1xA1"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_and_a1() {
        let d = RootDatum::named("GL2").unwrap();
        assert_eq!(d.rank, 2);
        let set: BTreeSet<Vec<i64>> = d.roots.iter().cloned().collect();
        assert_eq!(set, [vec![1, -1], vec![-1, 1]].into_iter().collect());
        assert_eq!(d.coroots, d.roots);
        let a1 = RootDatum::named("A1-sc").unwrap();
        assert_eq!(a1.rank, 1);
        assert_eq!(a1.roots[a1.simple[0]], vec![2]);
        assert_eq!(a1.coroots[a1.simple[0]], vec![1]);
    }

    #[test]
    fn malformed_diagonal() {
        let doc = DatumDoc { name: "bad".into(), rank: 1, roots: vec![vec![1], vec![-1]], coroots: vec![vec![1], vec![-1]], simple: vec![0] };
        assert!(matches!(RootDatum::from_doc(doc), Err(DatumError::MalformedDatum(_))));
    }

    #[test]
    fn pairing_examples() {
        let d = RootDatum::named("GL2").unwrap();
        assert_eq!(d.pairing(&[1, 0], &[1, -1]).unwrap(), 1);
        assert_eq!(d.pairing(&[5, 3], &[0, 0]).unwrap(), 0);
        assert!(matches!(d.pairing(&[1], &[1, -1]), Err(DatumError::DimensionMismatch { .. })));
        let a1 = RootDatum::named("A1-sc").unwrap();
        assert_eq!(a1.pairing(&[1], &[1]).unwrap(), 1);
    }

    #[test]
    fn component_classification() {
        let expect = [
            ("GL2", vec![DynkinType::A(1)]),
            ("A2-sc", vec![DynkinType::A(2)]),
            ("B2-sc", vec![DynkinType::B(2)]),
            ("C3-sc", vec![DynkinType::C(3)]),
            ("D4-sc", vec![DynkinType::D(4)]),
            ("G2", vec![DynkinType::G2]),
            ("F4", vec![DynkinType::F4]),
            ("E6-sc", vec![DynkinType::E(6)]),
            ("E7-sc", vec![DynkinType::E(7)]),
            ("A1xA1", vec![DynkinType::A(1), DynkinType::A(1)]),
        ];
        for (name, kinds) in expect {
            let d = RootDatum::named(name).unwrap();
            let got: Vec<DynkinType> = d.components().unwrap().iter().map(|c| c.kind).collect();
            assert_eq!(got, kinds, "{name}");
        }
    }

    #[test]
    fn max_short_roots() {
        let gl2 = RootDatum::named("GL2").unwrap();
        let c = &gl2.components().unwrap()[0];
        assert_eq!(gl2.roots[c.max_short_root], vec![1, -1]);
        // A2: highest root alpha1 + alpha2 (all roots have equal length)
        let a2 = RootDatum::named("A2-sc").unwrap();
        let c = &a2.components().unwrap()[0];
        assert_eq!(a2.simple_coords(c.max_short_root), &[1, 1]);
        // B2 with alpha2 short: roots alpha2, alpha1 + alpha2 are short
        let b2 = RootDatum::named("B2-sc").unwrap();
        let c = &b2.components().unwrap()[0];
        assert_eq!(b2.simple_coords(c.max_short_root), &[1, 1]);
        // G2 with alpha1 short: highest short root 2 alpha1 + alpha2
        let g2 = RootDatum::named("G2").unwrap();
        let c = &g2.components().unwrap()[0];
        assert_eq!(g2.simple_coords(c.max_short_root), &[2, 1]);
    }

    #[test]
    fn assumption_examples() {
        let gl2 = RootDatum::named("GL2").unwrap().check_assumptions(2).unwrap();
        assert!(gl2.all_ok());
        let a2 = RootDatum::named("A2-sc").unwrap().check_assumptions(2).unwrap();
        assert!(a2.figure1_ok);
        let b2 = RootDatum::named("B2-sc").unwrap().check_assumptions(2).unwrap();
        assert!(!b2.figure1_ok);
        let a1 = RootDatum::named("A1-sc").unwrap().check_assumptions(3).unwrap();
        assert!(!a1.free_quotient);
        let a1adj = RootDatum::named("A1-adj").unwrap().check_assumptions(2).unwrap();
        assert!(!a1adj.cotorsion_ok);
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_invariants(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_invariants(&[vec![2, -1], vec![-1, 2]]), vec![1, 3]);
    }
}
