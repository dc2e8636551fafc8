//! Finite-dimensional matrix algebras over the base field: Jacobson radical
//! and complete sets of primitive orthogonal idempotents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SoergelError;
use crate::field::{field_roots, Field};
use crate::linalg::Mat;

fn flat<F: Field>(m: &Mat<F>) -> Vec<F> {
    m.data.clone()
}

/// Indices of a maximal linearly independent subset, earlier preferred.
pub fn independent_mats<F: Field>(mats: &[Mat<F>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<F>> = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        rows.push(flat(m));
        if Mat::from_rows(&rows).rank() == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}

fn span_dim<F: Field>(mats: &[Mat<F>]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    Mat::from_rows(&mats.iter().map(flat).collect::<Vec<_>>()).rank()
}

/// Coordinates of `x` in the span of `basis`.
pub fn coords<F: Field>(basis: &[Mat<F>], x: &Mat<F>) -> Option<Vec<F>> {
    let len = x.data.len();
    let mut a = Mat::zeros(len, basis.len());
    for (j, b) in basis.iter().enumerate() {
        for i in 0..len {
            a.set(i, j, b.data[i].clone());
        }
    }
    a.solve(&x.data)
}

fn combine<F: Field>(basis: &[Mat<F>], c: &[F]) -> Mat<F> {
    let (r, k) = (basis[0].rows, basis[0].cols);
    let mut acc = Mat::zeros(r, k);
    for (b, x) in basis.iter().zip(c) {
        if !x.is_zero() {
            acc = acc.add(&b.scale(x));
        }
    }
    acc
}

/// `Tr(ã^{p^i}) mod p^{i+1}`, divided by `p^i`, for an integer lift `ã`.
fn ronyai_functional<F: Field>(a: &Mat<F>, p: u64, i: u32) -> F {
    let modulus = p.pow(i + 1);
    let n = a.rows;
    let lift: Vec<u64> = a.data.iter().map(|x| x.lift().expect("finite field")).collect();
    let mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut z = vec![0u64; n * n];
        for r in 0..n {
            for k in 0..n {
                let v = x[r * n + k];
                if v != 0 {
                    for c in 0..n {
                        z[r * n + c] = (z[r * n + c] + v * y[k * n + c]) % modulus;
                    }
                }
            }
        }
        z
    };
    let mut pw = lift;
    for _ in 0..i {
        // raise to the p-th power
        let base = pw.clone();
        for _ in 1..p {
            pw = mul(&pw, &base);
        }
    }
    let tr = (0..n).map(|r| pw[r * n + r]).sum::<u64>() % modulus;
    let scale = p.pow(i);
    F::from_i64((tr / scale) as i64)
}

/// Jacobson radical of the algebra spanned by `basis` (a basis of a unital
/// subalgebra of `Mat_n`). In positive characteristic the trace form alone is
/// not enough; the iterated kernels of Rónyai's functionals are used.
pub fn radical<F: Field>(basis: &[Mat<F>]) -> Vec<Mat<F>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let n = basis[0].rows;
    let p = F::characteristic() as u64;
    let mut ideal: Vec<Mat<F>> = basis.to_vec();
    let steps: Vec<Option<u32>> = if p == 0 {
        vec![None]
    } else {
        let mut l = 0u32;
        while p.pow(l + 1) <= n as u64 {
            l += 1;
        }
        (0..=l).map(Some).collect()
    };
    for step in steps {
        if ideal.is_empty() {
            break;
        }
        let mut g = Mat::zeros(basis.len(), ideal.len());
        for (r, a) in ideal.iter().enumerate() {
            for (t, b) in basis.iter().enumerate() {
                let ab = a.mul(b);
                let v = match step {
                    None => ab.trace(),
                    Some(i) => ronyai_functional(&ab, p, i),
                };
                g.set(t, r, v);
            }
        }
        ideal = g.nullspace().iter().map(|c| combine(&ideal, c)).collect();
    }
    ideal
}

// Univariate polynomials as ascending coefficient vectors.
fn trim<F: Field>(mut a: Vec<F>) -> Vec<F> {
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

fn pmul<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![F::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] = c[i + j].add(&x.mul(y));
        }
    }
    trim(c)
}

fn psub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let n = a.len().max(b.len());
    let z = F::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z))).collect())
}

fn pdivrem<F: Field>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lead_inv = b.last().expect("nonzero divisor").inv().unwrap();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![F::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().mul(&lead_inv);
        for (i, x) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&c.mul(x));
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

/// `(s, t)` with `s a + t b = 1` for coprime `a`, `b`.
fn bezout<F: Field>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![F::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![F::one()]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1);
        let s2 = psub(&s0, &pmul(&q, &s1));
        let t2 = psub(&t0, &pmul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    // r0 is a nonzero constant
    let inv = r0[0].inv().expect("coprime");
    (s0.iter().map(|x| x.mul(&inv)).collect(), t0.iter().map(|x| x.mul(&inv)).collect())
}

/// Evaluates `poly` at `x` inside the corner algebra with identity `e`.
fn eval_at<F: Field>(poly: &[F], x: &Mat<F>, e: &Mat<F>) -> Mat<F> {
    let mut acc = Mat::zeros(x.rows, x.cols);
    for c in poly.iter().rev() {
        acc = acc.mul(x).add(&e.scale(c));
    }
    acc
}

/// Minimal polynomial of `x` in the corner algebra with identity `e`.
fn min_poly<F: Field>(x: &Mat<F>, e: &Mat<F>) -> Vec<F> {
    let mut powers = vec![e.clone()];
    loop {
        let next = powers.last().unwrap().mul(x);
        if let Some(c) = coords(&powers, &next) {
            let mut m: Vec<F> = c.iter().map(|v| v.neg()).collect();
            m.push(F::one());
            return m;
        }
        powers.push(next);
    }
}

/// Splits the idempotent `e` using `x ∈ eAe`, if the minimal polynomial of
/// `x` has a base-field root and another coprime factor.
fn try_split<F: Field>(x: &Mat<F>, e: &Mat<F>) -> Result<Option<Mat<F>>, usize> {
    let m = min_poly(x, e);
    let roots = field_roots(&m).unwrap_or_default();
    let Some(c) = roots.first() else {
        return Err(m.len() - 1);
    };
    let lin = vec![c.neg(), F::one()];
    let mut q = m.clone();
    let mut power = vec![F::one()];
    loop {
        let (qq, r) = pdivrem(&q, &lin);
        if !r.is_empty() {
            break;
        }
        q = qq;
        power = pmul(&power, &lin);
    }
    if q.len() <= 1 {
        return Ok(None);
    }
    let (_, t) = bezout(&power, &q);
    Ok(Some(eval_at(&pmul(&t, &q), x, e)))
}

/// A complete set of primitive orthogonal idempotents summing to 1.
pub fn primitive_idempotents<F: Field>(basis: &[Mat<F>], rad: &[Mat<F>]) -> Result<Vec<Mat<F>>, SoergelError> {
    let n = basis[0].rows;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut pending = vec![Mat::identity(n)];
    let mut done = Vec::new();
    while let Some(e) = pending.pop() {
        let corner: Vec<Mat<F>> = basis.iter().map(|b| e.mul(b).mul(&e)).collect();
        let corner_rad: Vec<Mat<F>> = rad.iter().map(|b| e.mul(b).mul(&e)).collect();
        let quotient_dim = span_dim(&corner) - span_dim(&corner_rad);
        if quotient_dim <= 1 {
            done.push(e);
            continue;
        }
        let mut split = None;
        let mut ext_degree = 0;
        let trials = corner.len() + 64;
        for trial in 0..trials {
            let x = if trial < corner.len() {
                corner[trial].clone()
            } else {
                let c: Vec<F> = corner.iter().map(|_| F::from_i64(rng.gen_range(-50..50))).collect();
                combine(&corner, &c)
            };
            match try_split(&x, &e) {
                Ok(Some(f)) => {
                    split = Some(f);
                    break;
                }
                Ok(None) => {}
                Err(d) => ext_degree = ext_degree.max(d),
            }
        }
        match split {
            Some(f) => {
                let rest = e.sub(&f);
                pending.push(rest);
                pending.push(f);
            }
            None => return Err(SoergelError::SplitOverExtensionNeeded { degree: ext_degree.max(2) }),
        }
    }
    done.reverse();
    Ok(done)
}
