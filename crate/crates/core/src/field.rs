//! Exact fields: the rationals, prime fields GF(p), and quadratic extensions
//! F(√d) of either.
//!
//! A [`FieldSpec`] is a small, cheaply clonable description of the field and
//! carries all arithmetic. [`FieldElem`] values are plain data; the field they
//! belong to is always supplied by the caller. Mixing elements of different
//! fields is a logic error and panics in debug builds.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An element of some exact field.
///
/// The derived order is the deterministic tie-breaking order used by subspace
/// enumeration: numeric on ℚ, residue order on GF(p), lexicographic on the
/// coordinate pair `(a, b)` of `a + b√d`. It has no algebraic meaning.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElem {
    Rational(BigRational),
    Residue(u64),
    Quadratic(Box<(FieldElem, FieldElem)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("malformed field descriptor `{0}`")]
    MalformedSpec(String),
    #[error("{0} is already a square in the base field")]
    DIsSquare(String),
    #[error("cannot adjoin the square root of zero")]
    ZeroRadicand,
    #[error("only quadratic extensions of ℚ or GF(p) are supported")]
    NestedExtension,
    #[error("malformed field element `{0}`")]
    MalformedElem(String),
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cardinality {
    Finite(u128),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSpec {
    base: FieldSpec,
    d: FieldElem,
}

/// An exact field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
    Quadratic(Arc<QuadraticSpec>),
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// Parses `q`, `fp:<p>`, `qext:q:<d>` or `qext:fp:<p>:<d>`.
    pub fn parse(desc: &str) -> Result<Self, FieldError> {
        let malformed = || FieldError::MalformedSpec(desc.to_string());
        let parts: Vec<&str> = desc.trim().split(':').collect();
        match parts.as_slice() {
            ["q"] => Ok(FieldSpec::Rationals),
            ["fp", p] => FieldSpec::prime(p.parse().map_err(|_| malformed())?),
            ["qext", "q", d] => {
                let base = FieldSpec::Rationals;
                let d = base.parse_elem(d).map_err(|_| malformed())?;
                base.adjoin_sqrt(d)
            }
            ["qext", "fp", p, d] => {
                let base = FieldSpec::prime(p.parse().map_err(|_| malformed())?)?;
                let d = base.parse_elem(d).map_err(|_| malformed())?;
                base.adjoin_sqrt(d)
            }
            _ => Err(malformed()),
        }
    }

    /// The canonical descriptor; `FieldSpec::parse(&f.descriptor()) == Ok(f)`.
    pub fn descriptor(&self) -> String {
        match self {
            FieldSpec::Rationals => "q".to_string(),
            FieldSpec::Prime(p) => format!("fp:{p}"),
            FieldSpec::Quadratic(q) => match &q.base {
                FieldSpec::Rationals => format!("qext:q:{}", q.base.format_elem(&q.d)),
                FieldSpec::Prime(p) => format!("qext:fp:{p}:{}", q.base.format_elem(&q.d)),
                FieldSpec::Quadratic(_) => unreachable!("nested extensions are rejected"),
            },
        }
    }

    /// The quadratic extension `self(√d)`.
    pub fn adjoin_sqrt(&self, d: FieldElem) -> Result<Self, FieldError> {
        if matches!(self, FieldSpec::Quadratic(_)) {
            return Err(FieldError::NestedExtension);
        }
        debug_assert!(self.contains(&d));
        if self.is_zero(&d) {
            return Err(FieldError::ZeroRadicand);
        }
        if self.is_square(&d) {
            return Err(FieldError::DIsSquare(self.format_elem(&d)));
        }
        Ok(FieldSpec::Quadratic(Arc::new(QuadraticSpec {
            base: self.clone(),
            d,
        })))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
            FieldSpec::Quadratic(q) => q.base.characteristic(),
        }
    }

    pub fn cardinality(&self) -> Cardinality {
        match self {
            FieldSpec::Rationals => Cardinality::Infinite,
            FieldSpec::Prime(p) => Cardinality::Finite(*p as u128),
            FieldSpec::Quadratic(q) => match q.base.cardinality() {
                Cardinality::Finite(c) => Cardinality::Finite(c * c),
                Cardinality::Infinite => Cardinality::Infinite,
            },
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.cardinality(), Cardinality::Finite(_))
    }

    /// Number of elements, when finite and small enough to index with `u64`.
    pub fn order(&self) -> Option<u64> {
        match self.cardinality() {
            Cardinality::Finite(c) => u64::try_from(c).ok(),
            Cardinality::Infinite => None,
        }
    }

    /// Base field and radicand of a quadratic extension.
    pub fn quadratic_parts(&self) -> Option<(&FieldSpec, &FieldElem)> {
        match self {
            FieldSpec::Quadratic(q) => Some((&q.base, &q.d)),
            _ => None,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match self {
            FieldSpec::Rationals => FieldElem::Rational(BigRational::zero()),
            FieldSpec::Prime(_) => FieldElem::Residue(0),
            FieldSpec::Quadratic(q) => {
                FieldElem::Quadratic(Box::new((q.base.zero(), q.base.zero())))
            }
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match self {
            FieldSpec::Rationals => FieldElem::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => FieldElem::Residue((n as i128).rem_euclid(*p as i128) as u64),
            FieldSpec::Quadratic(q) => {
                FieldElem::Quadratic(Box::new((q.base.from_i64(n), q.base.zero())))
            }
        }
    }

    /// Image of a rational number; fails when the denominator vanishes in the field.
    pub fn from_rational(&self, r: &BigRational) -> Result<FieldElem, FieldError> {
        match self {
            FieldSpec::Rationals => Ok(FieldElem::Rational(r.clone())),
            FieldSpec::Prime(p) => {
                let num = bigint_mod(r.numer(), *p);
                let den = bigint_mod(r.denom(), *p);
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(FieldElem::Residue(mul_mod(num, inv_mod(den, *p), *p)))
            }
            FieldSpec::Quadratic(q) => Ok(FieldElem::Quadratic(Box::new((
                q.base.from_rational(r)?,
                q.base.zero(),
            )))),
        }
    }

    /// The adjoined square root `s` with `s² = d`.
    pub fn sqrt_d(&self) -> Option<FieldElem> {
        match self {
            FieldSpec::Quadratic(q) => Some(FieldElem::Quadratic(Box::new((
                q.base.zero(),
                q.base.one(),
            )))),
            _ => None,
        }
    }

    /// `a + b·s` in a quadratic extension.
    pub fn quadratic_elem(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        match self {
            FieldSpec::Quadratic(_) => Some(FieldElem::Quadratic(Box::new((a, b)))),
            _ => None,
        }
    }

    /// Whether `e` is a canonical element of this field.
    pub fn contains(&self, e: &FieldElem) -> bool {
        match (self, e) {
            (FieldSpec::Rationals, FieldElem::Rational(_)) => true,
            (FieldSpec::Prime(p), FieldElem::Residue(r)) => r < p,
            (FieldSpec::Quadratic(q), FieldElem::Quadratic(ab)) => {
                q.base.contains(&ab.0) && q.base.contains(&ab.1)
            }
            _ => false,
        }
    }

    pub fn is_zero(&self, e: &FieldElem) -> bool {
        match e {
            FieldElem::Rational(r) => r.is_zero(),
            FieldElem::Residue(r) => *r == 0,
            FieldElem::Quadratic(ab) => {
                let base = self.base_of_quadratic();
                base.is_zero(&ab.0) && base.is_zero(&ab.1)
            }
        }
    }

    pub fn is_one(&self, e: &FieldElem) -> bool {
        *e == self.one()
    }

    fn base_of_quadratic(&self) -> &FieldSpec {
        match self {
            FieldSpec::Quadratic(q) => &q.base,
            _ => panic!("quadratic element used outside a quadratic field"),
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (self, a, b) {
            (_, FieldElem::Rational(x), FieldElem::Rational(y)) => FieldElem::Rational(x + y),
            (FieldSpec::Prime(p), FieldElem::Residue(x), FieldElem::Residue(y)) => {
                let s = x + y;
                FieldElem::Residue(if s >= *p { s - p } else { s })
            }
            (FieldSpec::Quadratic(q), FieldElem::Quadratic(x), FieldElem::Quadratic(y)) => {
                FieldElem::Quadratic(Box::new((q.base.add(&x.0, &y.0), q.base.add(&x.1, &y.1))))
            }
            _ => panic!("field element mismatch in add"),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        match (self, a) {
            (_, FieldElem::Rational(x)) => FieldElem::Rational(-x),
            (FieldSpec::Prime(p), FieldElem::Residue(x)) => {
                FieldElem::Residue(if *x == 0 { 0 } else { p - x })
            }
            (FieldSpec::Quadratic(q), FieldElem::Quadratic(x)) => {
                FieldElem::Quadratic(Box::new((q.base.neg(&x.0), q.base.neg(&x.1))))
            }
            _ => panic!("field element mismatch in neg"),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (self, a, b) {
            (_, FieldElem::Rational(x), FieldElem::Rational(y)) => FieldElem::Rational(x * y),
            (FieldSpec::Prime(p), FieldElem::Residue(x), FieldElem::Residue(y)) => {
                FieldElem::Residue(mul_mod(*x, *y, *p))
            }
            (FieldSpec::Quadratic(q), FieldElem::Quadratic(x), FieldElem::Quadratic(y)) => {
                let f = &q.base;
                // (a + b s)(a' + b' s) = (aa' + d bb') + (ab' + a'b) s
                let re = f.add(&f.mul(&x.0, &y.0), &f.mul(&q.d, &f.mul(&x.1, &y.1)));
                let im = f.add(&f.mul(&x.0, &y.1), &f.mul(&y.0, &x.1));
                FieldElem::Quadratic(Box::new((re, im)))
            }
            _ => panic!("field element mismatch in mul"),
        }
    }

    /// `a · b + c`, the inner-loop operation of elimination.
    pub fn mul_add(&self, a: &FieldElem, b: &FieldElem, c: &FieldElem) -> FieldElem {
        match (self, a, b, c) {
            (
                FieldSpec::Prime(p),
                FieldElem::Residue(x),
                FieldElem::Residue(y),
                FieldElem::Residue(z),
            ) => FieldElem::Residue(((*x as u128 * *y as u128 + *z as u128) % *p as u128) as u64),
            _ => self.add(&self.mul(a, b), c),
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match (self, a) {
            (_, FieldElem::Rational(x)) => FieldElem::Rational(x.recip()),
            (FieldSpec::Prime(p), FieldElem::Residue(x)) => FieldElem::Residue(inv_mod(*x, *p)),
            (FieldSpec::Quadratic(q), FieldElem::Quadratic(x)) => {
                // (a + b s)⁻¹ = (a − b s) / (a² − d b²)
                let f = &q.base;
                let norm = f.sub(&f.mul(&x.0, &x.0), &f.mul(&q.d, &f.mul(&x.1, &x.1)));
                let ninv = f.inv(&norm)?;
                FieldElem::Quadratic(Box::new((f.mul(&x.0, &ninv), f.neg(&f.mul(&x.1, &ninv)))))
            }
            _ => panic!("field element mismatch in inv"),
        })
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Galois conjugation `a + b s ↦ a − b s`; the identity outside quadratic fields.
    pub fn conjugate(&self, a: &FieldElem) -> FieldElem {
        match (self, a) {
            (FieldSpec::Quadratic(q), FieldElem::Quadratic(x)) => {
                FieldElem::Quadratic(Box::new((x.0.clone(), q.base.neg(&x.1))))
            }
            _ => a.clone(),
        }
    }

    pub fn is_square(&self, a: &FieldElem) -> bool {
        match (self, a) {
            (FieldSpec::Prime(p), FieldElem::Residue(x)) => {
                *p == 2 || *x == 0 || pow_mod(*x, (p - 1) / 2, *p) == 1
            }
            _ => self.sqrt(a).is_some(),
        }
    }

    /// Some square root of `a`, if one exists in this field.
    pub fn sqrt(&self, a: &FieldElem) -> Option<FieldElem> {
        match (self, a) {
            (FieldSpec::Rationals, FieldElem::Rational(x)) => {
                if x.is_negative() {
                    return None;
                }
                let n = exact_isqrt(x.numer())?;
                let d = exact_isqrt(x.denom())?;
                Some(FieldElem::Rational(BigRational::new(n, d)))
            }
            (FieldSpec::Prime(p), FieldElem::Residue(x)) => {
                tonelli_shanks(*x, *p).map(FieldElem::Residue)
            }
            (FieldSpec::Quadratic(q), FieldElem::Quadratic(x)) => {
                let f = &q.base;
                let (a0, b0) = (&x.0, &x.1);
                if f.is_zero(b0) {
                    if let Some(r) = f.sqrt(a0) {
                        return Some(FieldElem::Quadratic(Box::new((r, f.zero()))));
                    }
                    // a0 = d c²  ⇒  √a0 = c s
                    let c = f.sqrt(&f.div(a0, &q.d).ok()?)?;
                    return Some(FieldElem::Quadratic(Box::new((f.zero(), c))));
                }
                // (u + v s)² = a0 + b0 s  ⇔  u² + d v² = a0, 2uv = b0.
                let two = f.from_i64(2);
                if f.is_zero(&two) {
                    return None;
                }
                let norm = f.sub(&f.mul(a0, a0), &f.mul(&q.d, &f.mul(b0, b0)));
                let root = f.sqrt(&norm)?;
                for cand in [f.add(a0, &root), f.sub(a0, &root)] {
                    let u2 = f.div(&cand, &two).ok()?;
                    if let Some(u) = f.sqrt(&u2) {
                        if f.is_zero(&u) {
                            continue;
                        }
                        let v = f.div(b0, &f.mul(&two, &u)).ok()?;
                        return Some(FieldElem::Quadratic(Box::new((u, v))));
                    }
                }
                None
            }
            _ => panic!("field element mismatch in sqrt"),
        }
    }

    /// The `idx`-th element in the deterministic element order (finite fields).
    pub fn nth_element(&self, idx: u64) -> FieldElem {
        match self {
            FieldSpec::Prime(p) => {
                debug_assert!(idx < *p);
                FieldElem::Residue(idx)
            }
            FieldSpec::Quadratic(q) => {
                let p = q.base.order().expect("finite base");
                FieldElem::Quadratic(Box::new((
                    q.base.nth_element(idx / p),
                    q.base.nth_element(idx % p),
                )))
            }
            FieldSpec::Rationals => panic!("ℚ has no element indexing"),
        }
    }

    /// Inverse of [`FieldSpec::nth_element`].
    pub fn element_index(&self, e: &FieldElem) -> u64 {
        match (self, e) {
            (FieldSpec::Prime(_), FieldElem::Residue(r)) => *r,
            (FieldSpec::Quadratic(q), FieldElem::Quadratic(x)) => {
                let p = q.base.order().expect("finite base");
                q.base.element_index(&x.0) * p + q.base.element_index(&x.1)
            }
            _ => panic!("element indexing needs a finite field"),
        }
    }

    /// All elements in order; `None` for infinite fields.
    pub fn elements(&self) -> Option<Vec<FieldElem>> {
        let n = self.order()?;
        Some((0..n).map(|i| self.nth_element(i)).collect())
    }

    /// Parses an element literal: integers and `a/b` in the base fields,
    /// `x+y*s` (or `x-y*s`, `y*s`, `s`) in quadratic extensions.
    pub fn parse_elem(&self, text: &str) -> Result<FieldElem, FieldError> {
        let t = text.trim();
        let malformed = || FieldError::MalformedElem(text.to_string());
        match self {
            FieldSpec::Rationals => parse_rational(t)
                .map(FieldElem::Rational)
                .ok_or_else(malformed),
            FieldSpec::Prime(_) => {
                let r = parse_rational(t).ok_or_else(malformed)?;
                self.from_rational(&r).map_err(|_| malformed())
            }
            FieldSpec::Quadratic(q) => {
                let f = &q.base;
                let Some(body) = t.strip_suffix('s') else {
                    let a = f.parse_elem(t)?;
                    return Ok(FieldElem::Quadratic(Box::new((a, f.zero()))));
                };
                let body = body.strip_suffix('*').unwrap_or(body);
                // split "a±b" at the last sign that is not leading
                let split = body
                    .char_indices()
                    .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
                    .map(|(i, _)| i)
                    .next_back();
                let (a_txt, b_txt) = match split {
                    Some(i) => (&body[..i], &body[i..]),
                    None => ("0", body),
                };
                let b_txt = b_txt.strip_prefix('+').unwrap_or(b_txt);
                let b = match b_txt {
                    "" => f.one(),
                    "-" => f.neg(&f.one()),
                    other => f.parse_elem(other)?,
                };
                let a = f.parse_elem(a_txt)?;
                Ok(FieldElem::Quadratic(Box::new((a, b))))
            }
        }
    }

    /// Canonical text for an element; round-trips through [`FieldSpec::parse_elem`].
    pub fn format_elem(&self, e: &FieldElem) -> String {
        match (self, e) {
            (_, FieldElem::Rational(r)) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (_, FieldElem::Residue(r)) => r.to_string(),
            (FieldSpec::Quadratic(q), FieldElem::Quadratic(x)) => {
                let a = q.base.format_elem(&x.0);
                if q.base.is_zero(&x.1) {
                    return a;
                }
                let b = q.base.format_elem(&x.1);
                match b.strip_prefix('-') {
                    Some(mag) => format!("{a}-{mag}*s"),
                    None => format!("{a}+{b}*s"),
                }
            }
            _ => panic!("field element mismatch in format"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Quadratic(q) => write!(f, "{}(sqrt({}))", q.base, q.base.format_elem(&q.d)),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldSpec::parse(s)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.descriptor())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FieldSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn parse_rational(t: &str) -> Option<BigRational> {
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.strip_prefix('+').unwrap_or(n).parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime: a^(p-2)
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn tonelli_shanks(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 || p == 2 {
        return Some(n);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(f: &FieldSpec) -> Vec<FieldElem> {
        f.elements().unwrap()
    }

    #[test]
    fn field_make_examples() {
        let f = FieldSpec::parse("fp:5").unwrap();
        assert_eq!(f.characteristic(), 5);
        assert_eq!(f.cardinality(), Cardinality::Finite(5));
        let q = FieldSpec::parse("q").unwrap();
        assert_eq!(q.characteristic(), 0);
        assert_eq!(q.cardinality(), Cardinality::Infinite);
        assert_eq!(FieldSpec::parse("fp:4"), Err(FieldError::NotPrime(4)));
        assert!(matches!(
            FieldSpec::parse("fp:x"),
            Err(FieldError::MalformedSpec(_))
        ));
        assert!(matches!(
            FieldSpec::parse("gf:5"),
            Err(FieldError::MalformedSpec(_))
        ));
    }

    #[test]
    fn adjoin_sqrt_examples() {
        let f5 = FieldSpec::Prime(5);
        let e = f5.adjoin_sqrt(f5.from_i64(2)).unwrap();
        assert_eq!(e.cardinality(), Cardinality::Finite(25));
        assert_eq!(e.characteristic(), 5);
        assert!(matches!(
            f5.adjoin_sqrt(f5.from_i64(4)),
            Err(FieldError::DIsSquare(_))
        ));
        assert_eq!(f5.adjoin_sqrt(f5.zero()), Err(FieldError::ZeroRadicand));

        let qi = FieldSpec::Rationals
            .adjoin_sqrt(FieldSpec::Rationals.from_i64(-1))
            .unwrap();
        let i = qi.sqrt_d().unwrap();
        assert_eq!(qi.mul(&i, &i), qi.from_i64(-1));
        assert_eq!(qi.characteristic(), 0);
        assert!(matches!(
            qi.adjoin_sqrt(qi.one()),
            Err(FieldError::NestedExtension)
        ));
    }

    #[test]
    fn descriptors_round_trip() {
        for d in [
            "q",
            "fp:2",
            "fp:13",
            "qext:q:-1",
            "qext:q:2",
            "qext:fp:7:3",
            "qext:q:1/2",
        ] {
            let f = FieldSpec::parse(d).unwrap();
            assert_eq!(FieldSpec::parse(&f.descriptor()).unwrap(), f);
        }
        assert_eq!(
            FieldSpec::parse("qext:fp:7:-1").unwrap().descriptor(),
            "qext:fp:7:6"
        );
    }

    #[test]
    fn field_axioms_exhaustive_small_primes() {
        for p in [2u64, 3] {
            let f = FieldSpec::Prime(p);
            let els = all(&f);
            for a in &els {
                for b in &els {
                    for c in &els {
                        assert_eq!(f.mul(a, &f.mul(b, c)), f.mul(&f.mul(a, b), c));
                        assert_eq!(f.add(a, &f.add(b, c)), f.add(&f.add(a, b), c));
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                    }
                }
                if !f.is_zero(a) {
                    assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
                }
                assert!(f.is_zero(&f.add(a, &f.neg(a))));
            }
        }
    }

    #[test]
    fn gf25_inverses_and_conjugation() {
        let f = FieldSpec::parse("qext:fp:5:2").unwrap();
        let els = all(&f);
        assert_eq!(els.len(), 25);
        let s = f.sqrt_d().unwrap();
        assert_eq!(f.mul(&s, &s), f.from_i64(2));
        for a in &els {
            if !f.is_zero(a) {
                assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
            }
            for b in els.iter().step_by(3) {
                assert_eq!(
                    f.conjugate(&f.mul(a, b)),
                    f.mul(&f.conjugate(a), &f.conjugate(b))
                );
                assert_eq!(
                    f.conjugate(&f.add(a, b)),
                    f.add(&f.conjugate(a), &f.conjugate(b))
                );
            }
        }
        // conjugation fixes the base
        for i in 0..5 {
            let x = f.from_i64(i);
            assert_eq!(f.conjugate(&x), x);
        }
        // every element of GF(25) has a square root iff it is a square
        let squares: std::collections::BTreeSet<_> = els.iter().map(|x| f.mul(x, x)).collect();
        for a in &els {
            match f.sqrt(a) {
                Some(r) => assert_eq!(&f.mul(&r, &r), a),
                None => assert!(!squares.contains(a)),
            }
        }
    }

    #[test]
    fn element_order_and_indexing() {
        let f = FieldSpec::parse("qext:fp:3:2").unwrap();
        let els = all(&f);
        let mut sorted = els.clone();
        sorted.sort();
        assert_eq!(els, sorted);
        for (i, e) in els.iter().enumerate() {
            assert_eq!(f.element_index(e), i as u64);
        }
    }

    #[test]
    fn rational_sqrt_and_squares() {
        let q = FieldSpec::Rationals;
        assert!(q.is_square(&q.parse_elem("9/4").unwrap()));
        assert!(!q.is_square(&q.from_i64(2)));
        assert!(!q.is_square(&q.from_i64(-1)));
        let qi = FieldSpec::parse("qext:q:-1").unwrap();
        // (1 + i)² = 2i
        let two_i = qi.parse_elem("2*s").unwrap();
        let r = qi.sqrt(&two_i).unwrap();
        assert_eq!(qi.mul(&r, &r), two_i);
        assert!(qi.sqrt(&qi.from_i64(3)).is_none());
        // -1 = i²
        assert!(qi.is_square(&qi.from_i64(-1)));
    }

    #[test]
    fn tonelli_matches_brute_force() {
        for p in [2u64, 3, 5, 7, 13, 17, 41, 97] {
            let f = FieldSpec::Prime(p);
            for x in 0..p {
                let brute = (0..p).any(|r| r * r % p == x);
                assert_eq!(f.is_square(&FieldElem::Residue(x)), brute, "p={p} x={x}");
                if let Some(FieldElem::Residue(r)) = f.sqrt(&FieldElem::Residue(x)) {
                    assert_eq!(r * r % p, x);
                }
            }
        }
    }

    #[test]
    fn primality() {
        let brute = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..2000 {
            assert_eq!(is_prime(n), brute(n), "{n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007u64 * 3));
    }

    #[test]
    fn element_literals() {
        let f7 = FieldSpec::Prime(7);
        assert_eq!(f7.parse_elem("-1").unwrap(), FieldElem::Residue(6));
        assert_eq!(f7.parse_elem("1/2").unwrap(), FieldElem::Residue(4));
        assert!(f7.parse_elem("1/7").is_err());
        let q = FieldSpec::Rationals;
        assert_eq!(q.format_elem(&q.parse_elem("6/-4").unwrap()), "-3/2");
        let qi = FieldSpec::parse("qext:q:-1").unwrap();
        for t in ["1/2-3/4*s", "-1/2+3*s", "0+1*s", "5", "-2-1*s"] {
            assert_eq!(qi.format_elem(&qi.parse_elem(t).unwrap()), t);
        }
        assert_eq!(qi.parse_elem("s").unwrap(), qi.sqrt_d().unwrap());
        assert_eq!(qi.parse_elem("-s").unwrap(), qi.neg(&qi.sqrt_d().unwrap()));
        assert_eq!(qi.parse_elem("3").unwrap(), qi.from_i64(3));
        assert_eq!(qi.format_elem(&qi.parse_elem("5+0*s").unwrap()), "5");
    }
}
