//! Graded Hom spaces between labeled bimodules.
//!
//! A degree-d map `Φ: M → N(d)` is a matrix with `Φ(b_j) = Σ_i Φ_ij c_i`,
//! `Φ_ij` homogeneous of polynomial degree `(deg b_j + d - deg c_i) / 2`.
//! Commutation with the right action is solved first; the label conditions
//! are then imposed on the (much smaller) solution space.

use super::bimodule::{dot, Bimodule};
use super::SoergelError;
use crate::field::Field;
use crate::hecke::LaurentPoly;
use crate::linalg::{Mat, SparseEchelon, SparseVec};
use crate::poly::{monomial_count, monomials_of_degree, Mono, Poly, PolyMat};

use std::collections::HashMap;

pub fn degree_window<F: Field>(m: &Bimodule<F>, n: &Bimodule<F>) -> i32 {
    (m.word_len + n.word_len + 2) as i32
}

struct Unknowns {
    /// `(offset, monomials)` per entry `(i, j)`, row-major over `N x M`.
    blocks: Vec<Option<(usize, Vec<Mono>)>>,
    total: usize,
}

fn unknowns(nvars: usize, dm: &[i32], dn: &[i32], d: i32) -> Unknowns {
    let mut blocks = Vec::with_capacity(dn.len() * dm.len());
    let mut total = 0;
    for &di in dn {
        for &dj in dm {
            let twice = dj + d - di;
            if twice >= 0 && twice % 2 == 0 {
                let monos = monomials_of_degree(nvars, (twice / 2) as u32);
                let len = monos.len();
                blocks.push(Some((total, monos)));
                total += len;
            } else {
                blocks.push(None);
            }
        }
    }
    Unknowns { blocks, total }
}

/// Basis over the base field of `Hom^d(M, N)`.
pub fn hom_space<F: Field>(m: &Bimodule<F>, n: &Bimodule<F>, d: i32) -> Result<Vec<PolyMat<F>>, SoergelError> {
    let window = degree_window(m, n);
    if d.abs() > window {
        return Err(SoergelError::DegreeOutOfWindow { degree: d, window });
    }
    let nvars = m.act.len();
    let (rm, rn) = (m.rank(), n.rank());
    let unk = unknowns(nvars, &m.degrees, &n.degrees, d);
    if unk.total == 0 {
        return Ok(Vec::new());
    }
    let block = |i: usize, j: usize| unk.blocks[i * rm + j].as_ref();
    let mut ech = SparseEchelon::<F>::new(unk.total);
    for (am, an) in m.act.iter().zip(&n.act) {
        for i in 0..rn {
            for j in 0..rm {
                let mut rows: HashMap<Mono, SparseVec<F>> = HashMap::new();
                // (Φ A^M)_ij
                for l in 0..rm {
                    let a = am.get(l, j);
                    if a.is_zero() {
                        continue;
                    }
                    if let Some((off, monos)) = block(i, l) {
                        for (t, mu) in monos.iter().enumerate() {
                            for (mono, c) in a.terms() {
                                rows.entry(mu + mono).or_default().push((off + t, c.clone()));
                            }
                        }
                    }
                }
                // -(A^N Φ)_ij
                for l in 0..rn {
                    let a = an.get(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    if let Some((off, monos)) = block(l, j) {
                        for (t, mu) in monos.iter().enumerate() {
                            for (mono, c) in a.terms() {
                                rows.entry(mu + mono).or_default().push((off + t, c.neg()));
                            }
                        }
                    }
                }
                let mut keys: Vec<Mono> = rows.keys().copied().collect();
                keys.sort_unstable();
                for k in keys {
                    ech.insert(&rows[&k]);
                }
            }
        }
    }
    let to_mat = |v: &SparseVec<F>| -> PolyMat<F> {
        let mut mat = PolyMat::zeros(rn, rm);
        let mut entries: HashMap<usize, Vec<(Mono, F)>> = HashMap::new();
        for (col, c) in v {
            // locate the block containing `col`
            let pos = unk.blocks.iter().position(|b| b.as_ref().is_some_and(|(off, ms)| *col >= *off && *col < off + ms.len())).expect("column in a block");
            let (off, ms) = unk.blocks[pos].as_ref().unwrap();
            entries.entry(pos).or_default().push((ms[col - off], c.clone()));
        }
        for (pos, terms) in entries {
            mat.set(pos / rm, pos % rm, Poly::from_terms(terms));
        }
        mat
    };
    let candidates: Vec<PolyMat<F>> = ech.kernel().iter().map(to_mat).collect();
    impose_labels(m, n, candidates)
}

/// Restricts `candidates` to the combinations sending each labeled summand of
/// `M` into the summand of `N` with the same label.
fn impose_labels<F: Field>(m: &Bimodule<F>, n: &Bimodule<F>, candidates: Vec<PolyMat<F>>) -> Result<Vec<PolyMat<F>>, SoergelError> {
    let t = candidates.len();
    if t == 0 {
        return Ok(candidates);
    }
    let mut ech = SparseEchelon::<F>::new(t);
    for (u, row) in &n.frame {
        let projected: Vec<Vec<Poly<F>>> = candidates.iter().map(|phi| row_times(row, phi)).collect();
        for l in &m.labels {
            // maps commute with the right action, so only labels with the same
            // finite part can mix
            if l.elt == *u || l.elt.fin != u.fin {
                continue;
            }
            for v in &l.vecs {
                let mut rows: HashMap<Mono, SparseVec<F>> = HashMap::new();
                for (k, pr) in projected.iter().enumerate() {
                    let q = dot(pr, v);
                    for (mono, c) in q.terms() {
                        rows.entry(*mono).or_default().push((k, c.clone()));
                    }
                }
                for r in rows.values() {
                    ech.insert(r);
                }
            }
        }
    }
    if ech.rank() == 0 {
        return Ok(candidates);
    }
    Ok(ech
        .kernel()
        .iter()
        .map(|coeffs| {
            let mut acc = PolyMat::zeros(n.rank(), m.rank());
            for (k, c) in coeffs {
                acc = acc.add(&candidates[*k].scale(c));
            }
            acc
        })
        .collect())
}

fn row_times<F: Field>(row: &[Poly<F>], phi: &PolyMat<F>) -> Vec<Poly<F>> {
    (0..phi.cols)
        .map(|j| {
            let mut acc = Poly::zero();
            for (i, r) in row.iter().enumerate() {
                let p = phi.get(i, j);
                if !r.is_zero() && !p.is_zero() {
                    acc.add_assign(&r.mul(p));
                }
            }
            acc
        })
        .collect()
}

/// Constant part of a degree-0 map: entries between basis elements of equal degree.
pub fn constant_part<F: Field>(phi: &PolyMat<F>, dom: &[i32], cod: &[i32]) -> Mat<F> {
    let mut out = Mat::zeros(phi.rows, phi.cols);
    for i in 0..phi.rows {
        for j in 0..phi.cols {
            if cod[i] == dom[j] {
                out.set(i, j, phi.get(i, j).constant_term());
            }
        }
    }
    out
}

/// Dimensions over the base field of `Hom^d(M, N)` for every `d` in the window.
pub fn hom_dims<F: Field>(m: &Bimodule<F>, n: &Bimodule<F>) -> Result<Vec<(i32, usize)>, SoergelError> {
    let w = degree_window(m, n);
    (-w..=w).map(|d| Ok((d, hom_space(m, n, d)?.len()))).collect()
}

/// Graded rank of `Hom^•(M, N)` as a free left R-module.
pub fn hom_graded_rank<F: Field>(m: &Bimodule<F>, n: &Bimodule<F>) -> Result<LaurentPoly, SoergelError> {
    let nvars = m.act.len();
    let dims = hom_dims(m, n)?;
    let mut ranks: HashMap<i32, i64> = HashMap::new();
    let mut out = LaurentPoly::zero();
    for &(d, dim) in &dims {
        let mut r = dim as i64;
        for (&d2, &r2) in &ranks {
            if d2 < d && (d - d2) % 2 == 0 {
                r -= r2 * monomial_count(nvars, ((d - d2) / 2) as u32) as i64;
            }
        }
        ranks.insert(d, r);
        out.add_term(d, r);
    }
    Ok(out)
}
