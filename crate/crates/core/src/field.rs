//! Coefficient fields: prime fields `F_p` (const-generic modulus) and the
//! rationals.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arithmetic required by the bimodule engine.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// 0 for the rationals.
    fn characteristic() -> u32;
    /// All elements, for finite fields.
    fn elements() -> Option<Vec<Self>>;
    /// Integer representative in `[0, p)` (finite fields only).
    fn lift(&self) -> Option<u64>;
    fn parse(s: &str) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

/// The prime field with `P` elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        let s = self.0 + other.0;
        Fp(if s >= P { s - P } else { s })
    }
    fn sub(&self, other: &Self) -> Self {
        Fp(if self.0 >= other.0 { self.0 - other.0 } else { self.0 + P - other.0 })
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(((self.0 as u64 * other.0 as u64) % P as u64) as u32)
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat
        let mut base = self.0 as u64;
        let mut exp = P as u64 - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P as u64;
            }
            base = base * base % P as u64;
            exp >>= 1;
        }
        Some(Fp(acc as u32))
    }
    fn characteristic() -> u32 {
        P
    }
    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Fp).collect())
    }
    fn lift(&self) -> Option<u64> {
        Some(self.0 as u64)
    }
    fn parse(s: &str) -> Option<Self> {
        s.trim().parse::<i64>().ok().map(Fp::new)
    }
}

/// Exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn characteristic() -> u32 {
        0
    }
    fn elements() -> Option<Vec<Self>> {
        None
    }
    fn lift(&self) -> Option<u64> {
        None
    }
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(Rational(BigRational::new(n, d)))
            }
            None => s.parse::<BigInt>().ok().map(|n| Rational(BigRational::from_integer(n))),
        }
    }
}

/// Rational roots of a polynomial given by ascending coefficients.
///
/// Returns `None` when the constant or leading coefficient is too large for
/// divisor enumeration.
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().map_or(false, |x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    // strip zero roots
    let mut start = 0;
    while c[start].is_zero() {
        start += 1;
    }
    if start > 0 {
        roots.push(Rational::zero());
    }
    let c = &c[start..];
    if c.len() <= 1 {
        return Some(roots);
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (&x.0 * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints[0].abs().to_u64()?;
    let an = ints[ints.len() - 1].abs().to_u64()?;
    if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
        return None;
    }
    let dn = divisors(a0);
    let dd = divisors(an);
    let mut seen = std::collections::BTreeSet::new();
    for n in &dn {
        for d in &dd {
            for sign in [1i64, -1] {
                let cand = BigRational::new(BigInt::from(*n) * sign, BigInt::from(*d));
                if !seen.insert(cand.clone()) {
                    continue;
                }
                let mut acc = BigRational::zero();
                for coef in ints.iter().rev() {
                    acc = acc * &cand + BigRational::from_integer(coef.clone());
                }
                if acc.is_zero() {
                    roots.push(Rational(cand));
                }
            }
        }
    }
    Some(roots)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}

/// Roots in the base field of a polynomial given by ascending coefficients.
pub fn field_roots<F: Field>(coeffs: &[F]) -> Option<Vec<F>> {
    if let Some(elts) = F::elements() {
        let mut roots = Vec::new();
        for x in elts {
            let mut acc = F::zero();
            for c in coeffs.iter().rev() {
                acc = acc.mul(&x).add(c);
            }
            if acc.is_zero() {
                roots.push(x);
            }
        }
        return Some(roots);
    }
    // Only the rationals are infinite here.
    let as_rat: Vec<Rational> = coeffs.iter().map(|c| Rational::parse(&c.to_string()).expect("rational coefficient")).collect();
    rational_roots(&as_rat).map(|rs| rs.into_iter().map(|r| F::parse(&r.to_string()).expect("rational root")).collect())
}

/// Invoke `$body` with the type alias `$F` bound to the coefficient field of
/// characteristic `$p` (0 for the rationals). Evaluates to `None` for
/// unsupported characteristics.
#[macro_export]
macro_rules! with_field {
    ($p:expr, $F:ident => $body:expr) => {{
        match $p {
            0 => { type $F = $crate::field::Rational; Some($body) }
            2 => { type $F = $crate::field::Fp<2>; Some($body) }
            3 => { type $F = $crate::field::Fp<3>; Some($body) }
            5 => { type $F = $crate::field::Fp<5>; Some($body) }
            7 => { type $F = $crate::field::Fp<7>; Some($body) }
            11 => { type $F = $crate::field::Fp<11>; Some($body) }
            13 => { type $F = $crate::field::Fp<13>; Some($body) }
            17 => { type $F = $crate::field::Fp<17>; Some($body) }
            19 => { type $F = $crate::field::Fp<19>; Some($body) }
            23 => { type $F = $crate::field::Fp<23>; Some($body) }
            29 => { type $F = $crate::field::Fp<29>; Some($body) }
            31 => { type $F = $crate::field::Fp<31>; Some($body) }
            37 => { type $F = $crate::field::Fp<37>; Some($body) }
            41 => { type $F = $crate::field::Fp<41>; Some($body) }
            43 => { type $F = $crate::field::Fp<43>; Some($body) }
            47 => { type $F = $crate::field::Fp<47>; Some($body) }
            _ => None,
        }
    }};
}

/// Characteristics accepted by [`with_field!`].
pub const SUPPORTED_CHARACTERISTICS: &[u32] = &[0, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}
