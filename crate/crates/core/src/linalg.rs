//! Exact linear algebra: dense row reduction over a field, an incremental
//! sparse echelon form for large homogeneous systems, and fraction-free
//! (Bareiss) elimination over polynomial rings.

use std::collections::HashMap;

use crate::field::Field;
use crate::poly::Poly;

/// Dense row-major matrix over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in 0..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(r, f).neg();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Sparse vector: sorted `(column, value)` pairs without zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

/// Incremental fully-reduced echelon form of a set of sparse rows.
///
/// Every stored row has a unit pivot, and no stored row has a nonzero entry
/// in another row's pivot column.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F: Field> {
    ncols: usize,
    rows: Vec<SparseVec<F>>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon { ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `row` against the stored rows.
    pub fn reduce(&self, row: &[(usize, F)]) -> SparseVec<F> {
        let mut acc: HashMap<usize, F> = HashMap::with_capacity(row.len() * 2);
        for (c, v) in row {
            if v.is_zero() {
                continue;
            }
            let e = acc.entry(*c).or_insert_with(F::zero);
            *e = e.add(v);
        }
        let pivot_entries: Vec<(usize, F)> = acc.iter().filter(|(c, v)| self.pivot_row[**c].is_some() && !v.is_zero()).map(|(c, v)| (*c, v.clone())).collect();
        for (c, v) in pivot_entries {
            let r = &self.rows[self.pivot_row[c].unwrap()];
            for (rc, rv) in r {
                let e = acc.entry(*rc).or_insert_with(F::zero);
                *e = e.sub(&v.mul(rv));
            }
        }
        let mut out: SparseVec<F> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_by_key(|(c, _)| *c);
        out
    }

    /// Adds a row; returns `true` if it was independent of the stored rows.
    pub fn insert(&mut self, row: &[(usize, F)]) -> bool {
        let reduced = self.reduce(row);
        if reduced.is_empty() {
            return false;
        }
        let (pc, pv) = reduced[0].clone();
        let inv = pv.inv().expect("nonzero");
        let new_row: SparseVec<F> = reduced.into_iter().map(|(c, v)| (c, v.mul(&inv))).collect();
        for r in self.rows.iter_mut() {
            if let Ok(pos) = r.binary_search_by_key(&pc, |(c, _)| *c) {
                let f = r[pos].1.clone();
                *r = sparse_axpy(r, &f.neg(), &new_row);
            }
        }
        self.pivot_row[pc] = Some(self.rows.len());
        self.rows.push(new_row);
        true
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Basis of the solution space of the homogeneous system, one vector per
    /// free column (value 1 there, 0 at the other free columns).
    pub fn kernel(&self) -> Vec<SparseVec<F>> {
        let mut by_free: HashMap<usize, Vec<(usize, F)>> = HashMap::new();
        for r in &self.rows {
            let pc = r[0].0;
            for (c, v) in &r[1..] {
                by_free.entry(*c).or_default().push((pc, v.neg()));
            }
        }
        (0..self.ncols)
            .filter(|&c| self.pivot_row[c].is_none())
            .map(|f| {
                let mut v = by_free.remove(&f).unwrap_or_default();
                v.push((f, F::one()));
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect()
    }
}

/// `a + f * b` for sparse vectors.
pub fn sparse_axpy<F: Field>(a: &[(usize, F)], f: &F, b: &[(usize, F)]) -> SparseVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = f.mul(&b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.add(&f.mul(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Indices of a maximal subset of `vectors` that is linearly independent
/// over the fraction field of the polynomial ring, found by fraction-free
/// (Bareiss) elimination. Earlier vectors are preferred.
pub fn independent_subset<F: Field>(vectors: &[Vec<Poly<F>>]) -> Vec<usize> {
    let m = vectors.len();
    if m == 0 {
        return Vec::new();
    }
    let n = vectors[0].len();
    let mut mat: Vec<Vec<Poly<F>>> = vectors.to_vec();
    let mut order: Vec<usize> = (0..m).collect();
    let mut col_order: Vec<usize> = (0..n).collect();
    let mut prev = Poly::one();
    let mut rank = 0;
    for k in 0..m.min(n) {
        // earliest original row with a nonzero entry in the remaining columns
        let mut best: Option<(usize, usize)> = None;
        for i in k..m {
            if let Some(j) = (k..n).find(|&j| !mat[i][col_order[j]].is_zero()) {
                if best.map_or(true, |(bi, _)| order[i] < order[bi]) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        mat.swap(k, pi);
        order.swap(k, pi);
        col_order.swap(k, pj);
        let pc = col_order[k];
        let pivot = mat[k][pc].clone();
        for i in k + 1..m {
            let factor = mat[i][pc].clone();
            for jj in k + 1..n {
                let c = col_order[jj];
                let num = pivot.mul(&mat[i][c]).sub(&factor.mul(&mat[k][c]));
                mat[i][c] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            mat[i][pc] = Poly::zero();
        }
        prev = pivot;
        rank = k + 1;
    }
    let mut idx: Vec<usize> = order[..rank].to_vec();
    idx.sort_unstable();
    idx
}

/// Rank over the fraction field of a list of polynomial vectors.
pub fn poly_rank<F: Field>(vectors: &[Vec<Poly<F>>]) -> usize {
    independent_subset(vectors).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    type Q = Rational;

    fn q(rows: &[&[i64]]) -> Mat<Q> {
        Mat::from_rows(&rows.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn dense_nullspace_and_inverse() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for i in 0..2 {
                let s = (0..3).fold(Q::zero(), |acc, j| acc.add(&m.get(i, j).mul(&v[j])));
                assert!(s.is_zero());
            }
        }
        let a = q(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.mul(&a.inverse().unwrap()), Mat::identity(2));
        assert!(q(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn sparse_matches_dense() {
        type F = Fp<3>;
        let rows: Vec<Vec<(usize, F)>> = vec![
            vec![(0, F::new(1)), (2, F::new(2))],
            vec![(1, F::new(1)), (2, F::new(1)), (3, F::new(1))],
            vec![(0, F::new(2)), (1, F::new(2)), (2, F::new(0)), (3, F::new(2))],
        ];
        let mut ech = SparseEchelon::new(4);
        for r in &rows {
            ech.insert(r);
        }
        let dense = Mat::from_rows(&rows.iter().map(|r| {
            let mut d = vec![F::zero(); 4];
            for (c, v) in r {
                d[*c] = *v;
            }
            d
        }).collect::<Vec<_>>());
        assert_eq!(ech.rank(), dense.rank());
        for k in ech.kernel() {
            for r in &rows {
                let s = r.iter().fold(F::zero(), |acc, (c, v)| {
                    let x = k.iter().find(|(kc, _)| kc == c).map_or(F::zero(), |(_, x)| *x);
                    acc.add(&v.mul(&x))
                });
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn bareiss_independence() {
        let x = Poly::<Q>::var(0);
        let y = Poly::<Q>::var(1);
        let v1 = vec![x.clone(), y.clone()];
        let v2 = vec![x.mul(&y), y.mul(&y)]; // y * v1
        let v3 = vec![Poly::one(), x.clone()];
        assert_eq!(independent_subset(&[v1.clone(), v2.clone(), v3.clone()]), vec![0, 2]);
        assert_eq!(poly_rank(&[v1, v2]), 1);
    }
}
