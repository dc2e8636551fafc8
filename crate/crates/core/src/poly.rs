//! Sparse multivariate polynomials over a [`Field`], in at most four
//! variables. Monomials are packed into a `u64`, 16 bits per exponent, with
//! variable 0 in the high bits so that integer order is lex order.

use std::fmt;

use crate::field::Field;

pub const MAX_VARS: usize = 4;

pub type Mono = u64;

#[inline]
pub fn mono_exp(m: Mono, var: usize) -> u32 {
    ((m >> (16 * (MAX_VARS - 1 - var))) & 0xffff) as u32
}

#[inline]
pub fn mono_var(var: usize) -> Mono {
    1u64 << (16 * (MAX_VARS - 1 - var))
}

pub fn mono_from_exps(exps: &[u32]) -> Mono {
    exps.iter().enumerate().fold(0, |acc, (i, &e)| acc + (e as u64) * mono_var(i))
}

#[inline]
pub fn mono_degree(m: Mono) -> u32 {
    (0..MAX_VARS).map(|i| mono_exp(m, i)).sum()
}

#[inline]
pub fn mono_divides(a: Mono, b: Mono) -> bool {
    (0..MAX_VARS).all(|i| mono_exp(a, i) <= mono_exp(b, i))
}

/// All monomials of total degree `deg` in `nvars` variables, in descending
/// (lex) order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Mono> {
    fn rec(nvars: usize, var: usize, left: u32, acc: Mono, out: &mut Vec<Mono>) {
        if var + 1 == nvars {
            out.push(acc + left as u64 * mono_var(var));
            return;
        }
        for e in (0..=left).rev() {
            rec(nvars, var + 1, left - e, acc + e as u64 * mono_var(var), out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(0);
        }
        return out;
    }
    rec(nvars, 0, deg, 0, &mut out);
    out
}

/// Number of monomials of degree `deg` in `nvars` variables.
pub fn monomial_count(nvars: usize, deg: u32) -> u64 {
    if nvars == 0 {
        return u64::from(deg == 0);
    }
    // C(deg + nvars - 1, nvars - 1)
    let (n, k) = (deg as u64 + nvars as u64 - 1, nvars as u64 - 1);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    /// Sorted by monomial, descending; no zero coefficients.
    terms: Vec<(Mono, F)>,
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(0, c)] }
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn var(i: usize) -> Self {
        Poly { terms: vec![(mono_var(i), F::one())] }
    }

    pub fn monomial(m: Mono, c: F) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds from unsorted terms, combining duplicates.
    pub fn from_terms(mut terms: Vec<(Mono, F)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, F)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    /// Linear form `sum coeffs[i] * x_i`.
    pub fn linear(coeffs: &[F]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(i, c)| (mono_var(i), c.clone())).collect())
    }

    pub fn terms(&self) -> &[(Mono, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> F {
        match self.terms.binary_search_by(|t| m.cmp(&t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn constant_term(&self) -> F {
        self.coeff(0)
    }

    /// Maximal total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| mono_degree(*m)).max()
    }

    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.iter().all(|(m, _)| mono_degree(*m) == deg)
    }

    pub fn leading(&self) -> Option<&(Mono, F)> {
        self.terms.first()
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (*m, a.mul(c))).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 > b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 > a[i].0 {
                let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Poly { terms: out }
    }

    pub fn add_assign(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        *self = self.add(other);
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return Poly { terms: self.terms.iter().map(|(a, x)| (a + m, x.mul(c))).filter(|(_, x)| !x.is_zero()).collect() };
        }
        if self.terms.len() == 1 {
            return other.mul(self);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma + mb, ca.mul(cb)));
            }
        }
        Self::from_terms(terms)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (lm, lc) = divisor.terms[0].clone();
        let lc_inv = lc.inv()?;
        if divisor.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !mono_divides(lm, *m) {
                    return None;
                }
                out.push((m - lm, c.mul(&lc_inv)));
            }
            return Some(Poly { terms: out });
        }
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !mono_divides(lm, m) {
                return None;
            }
            let qm = m - lm;
            let qc = c.mul(&lc_inv);
            rem = rem.sub(&divisor.mul(&Poly::monomial(qm, qc.clone())));
            quot.push((qm, qc));
        }
        Some(Self::from_terms(quot))
    }

    /// Substitutes `images[i]` for `x_i`.
    pub fn substitute(&self, images: &[Poly<F>]) -> Self {
        let mut powers: Vec<Vec<Poly<F>>> = images.iter().map(|p| vec![Poly::one(), p.clone()]).collect();
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = mono_exp(*m, i) as usize;
                while pw.len() <= e {
                    let next = pw.last().unwrap().mul(&pw[1]);
                    pw.push(next);
                }
                if e > 0 {
                    t = t.mul(&pw[e]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Renders with variables `x1, x2, ...`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            for i in 0..MAX_VARS {
                match mono_exp(*m, i) {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    e => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if factors.is_empty() {
                s.push_str(&mag);
            } else {
                if mag != "1" {
                    s.push_str(&mag);
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }

    /// Parses the output of [`Poly::render`].
    pub fn parse(input: &str) -> Option<Self> {
        let input = input.trim();
        if input == "0" {
            return Some(Self::zero());
        }
        let mut terms = Vec::new();
        let normalized = input.replace(" - ", " + -").replace(' ', "");
        let normalized = normalized.strip_prefix('+').unwrap_or(&normalized).to_string();
        for chunk in normalized.split('+') {
            if chunk.is_empty() {
                return None;
            }
            let (neg, body) = match chunk.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, chunk),
            };
            let mut coeff = F::one();
            let mut mono: Mono = 0;
            for factor in body.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, exp) = match var.split_once('^') {
                        Some((i, e)) => (i.parse::<usize>().ok()?, e.parse::<u32>().ok()?),
                        None => (var.parse::<usize>().ok()?, 1),
                    };
                    if idx == 0 || idx > MAX_VARS {
                        return None;
                    }
                    mono += exp as u64 * mono_var(idx - 1);
                } else {
                    coeff = coeff.mul(&F::parse(factor)?);
                }
            }
            if neg {
                coeff = coeff.neg();
            }
            terms.push((mono, coeff));
        }
        Some(Self::from_terms(terms))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Dense matrix of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMat<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Poly<F>>,
}

impl<F: Field> PolyMat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMat { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, p: Poly<F>) {
        self.data[i * self.cols + j] = p;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in PolyMat::mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Poly<F>]) -> Vec<Poly<F>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        PolyMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        PolyMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        PolyMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn map(&self, f: impl Fn(&Poly<F>) -> Poly<F>) -> Self {
        PolyMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn column(&self, j: usize) -> Vec<Poly<F>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Poly<F>> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Poly<F>>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, p) in c.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Poly<F>>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, p) in r.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_rows(self.cols, &idx.iter().map(|&i| self.row(i)).collect::<Vec<_>>())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_columns(self.rows, &idx.iter().map(|&j| self.column(j)).collect::<Vec<_>>())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    type Q = Rational;

    fn x(i: usize) -> Poly<Q> {
        Poly::var(i)
    }

    #[test]
    fn arithmetic_and_division() {
        let a = x(0).add(&x(1)); // x1 + x2
        let b = x(0).sub(&x(1));
        let prod = a.mul(&b);
        assert_eq!(prod, x(0).mul(&x(0)).sub(&x(1).mul(&x(1))));
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.add(&Poly::one()).div_exact(&a).is_none());
    }

    #[test]
    fn substitute_swaps() {
        let p = x(0).mul(&x(0)).add(&x(1).scale(&Q::from_i64(3)));
        let swapped = p.substitute(&[x(1), x(0)]);
        assert_eq!(swapped, x(1).mul(&x(1)).add(&x(0).scale(&Q::from_i64(3))));
    }

    #[test]
    fn render_parse() {
        let p = x(0).mul(&x(1)).scale(&Q::new(-3, 2)).add(&x(1).pow(3)).add(&Poly::constant(Q::from_i64(4)));
        let s = p.render();
        assert_eq!(Poly::<Q>::parse(&s).unwrap(), p, "{s}");
        let q: Poly<Fp<3>> = Poly::var(0).scale(&Fp::new(2)).sub(&Poly::var(1));
        assert_eq!(Poly::<Fp<3>>::parse(&q.render()).unwrap(), q);
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(2, 3).len(), 4);
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(1, 0), vec![0]);
    }
}
