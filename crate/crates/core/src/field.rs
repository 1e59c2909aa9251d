//! Arithmetic in GF(q), q = p^e with p an odd prime.
//!
//! Elements are stored by their integer encoding: the base-p digits of the
//! encoding are the coefficients of the residue polynomial, lowest degree
//! first. Multiplication goes through exp/log tables built from a primitive
//! element, which is found with plain polynomial arithmetic modulo the
//! defining polynomial.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default moduli, `(p, e, [c0, .., ce])`.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (3, 2, &[1, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (7, 2, &[1, 0, 1]),
    (11, 2, &[1, 0, 1]),
    (13, 2, &[2, 0, 1]),
];

/// Above this order the addition table is not materialized.
const ADD_TABLE_MAX_Q: u32 = 256;

/// Largest supported field order (exp/log tables are dense).
const MAX_Q: u64 = 1 << 22;

/// An element of GF(q) by integer encoding in `[0, q)`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The integer encoding of the element.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field: `{p, e, modulus: [c0..ce]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    trace: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// A finite field of odd characteristic. Cloning is cheap.
#[derive(Clone)]
pub struct GaloisField(Arc<Inner>);

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.0.p, self.0.e, self.0.modulus)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

/// Dense polynomials over GF(p), coefficient of `x^i` at index `i`.
pub(crate) mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut base = a as u64 % p as u64;
        let mut k = p as u64 - 2;
        while k > 0 {
            if k & 1 == 1 {
                r = r * base % p as u64;
            }
            base = base * base % p as u64;
            k >>= 1;
        }
        r as u32
    }

    /// Remainder of `a` modulo the nonzero polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = r[dr] as u64 * lead_inv % p as u64;
            for (i, &mi) in m.iter().enumerate() {
                let k = dr - dm + i;
                r[k] = ((r[k] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    /// Irreducibility by trial division with every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let m = trim(m.to_vec());
        let deg = m.len().saturating_sub(1);
        if deg == 0 {
            return false;
        }
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for code in 0..count {
                let mut f = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    f.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                f.push(1);
                if rem(&m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

fn default_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    DEFAULT_MODULI
        .iter()
        .find(|(dp, de, _)| *dp == p && *de == e)
        .map(|(_, _, m)| m.to_vec())
}

/// Lexicographically first monic irreducible polynomial of degree `e` over GF(p).
pub fn find_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for code in 0..count {
        let mut f = Vec::with_capacity(e as usize + 1);
        let mut c = code;
        for _ in 0..e {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn decode(mut a: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(a % p);
        a /= p;
    }
    out
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl GaloisField {
    /// Builds GF(p^e). Without a modulus, a built-in default is used for the
    /// tabulated orders and the lexicographically first irreducible otherwise.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::UnsupportedCharacteristic(format!("p = {p}")));
        }
        if e == 0 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        let q64 = (p as u64).checked_pow(e).filter(|&q| q <= MAX_Q);
        let q = q64.ok_or_else(|| Error::InvalidInput(format!("{p}^{e} is too large")))? as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidInput(format!(
                        "modulus must be monic of degree {e} with coefficients in [0, {p})"
                    )));
                }
                m
            }
            None if e == 1 => vec![0, 1],
            None => default_modulus(p, e).unwrap_or_else(|| find_irreducible(p, e)),
        };
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus);
        }

        let mulmod = |a: u32, b: u32| -> u32 {
            let prod = poly::mul(&decode(a, p, e), &decode(b, p, e), p);
            encode(&poly::rem(&prod, &modulus, p), p)
        };
        let order = q - 1;
        let prime_factors: Vec<u32> = (2..=order).filter(|&d| order % d == 0 && is_prime(d as u64)).collect();
        let pow_poly = |a: u32, mut k: u32| -> u32 {
            let (mut r, mut base) = (1u32, a);
            while k > 0 {
                if k & 1 == 1 {
                    r = mulmod(r, base);
                }
                base = mulmod(base, base);
                k >>= 1;
            }
            r
        };
        let generator = (1..q)
            .find(|&g| prime_factors.iter().all(|&f| pow_poly(g, order / f) != 1))
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x;
            log[x as usize] = k;
            x = mulmod(x, generator);
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| encode(&decode(a, p, e).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        let add = (q <= ADD_TABLE_MAX_Q).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = decode(a, p, e);
                for b in 0..q {
                    let db = decode(b, p, e);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = encode(&s, p);
                }
            }
            t
        });

        let partial = GaloisField(Arc::new(Inner { p, e, q, modulus, exp, log, neg, trace: Vec::new(), add }));
        let trace: Vec<u32> = (0..q)
            .map(|a| {
                let mut acc = FieldElement(0);
                let mut term = FieldElement(a);
                for _ in 0..e {
                    acc = partial.add(acc, term);
                    term = partial.pow(term, p as u64);
                }
                debug_assert!(acc.0 < p, "trace must land in the prime field");
                acc.0
            })
            .collect();
        let mut inner = Arc::into_inner(partial.0).expect("sole owner");
        inner.trace = trace;
        Ok(GaloisField(Arc::new(inner)))
    }

    /// GF(q) for a prime power q, with the default modulus.
    pub fn from_q(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::UnsupportedCharacteristic(format!("q = {q} is not a prime power")))?;
        Self::new(p, e, None)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc { p: self.0.p, e: self.0.e, modulus: self.0.modulus.clone() }
    }

    pub fn from_desc(desc: &FieldDesc) -> Result<Self> {
        Self::new(desc.p, desc.e, Some(desc.modulus.clone()))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Element with the given integer encoding.
    pub fn elem(&self, index: u32) -> Result<FieldElement> {
        if index < self.0.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::InvalidInput(format!("{index} is not an element of GF({})", self.0.q)))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Coefficients of the residue polynomial, lowest degree first.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        decode(a.0, self.0.p, self.0.e)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::InvalidInput(format!("{coeffs:?} is not a residue mod the field polynomial")));
        }
        Ok(FieldElement(encode(coeffs, self.0.p)))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.0.q).map(FieldElement)
    }

    pub fn primitive_element(&self) -> FieldElement {
        FieldElement(self.0.exp[1 % self.0.exp.len()])
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.0;
        if inner.e == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= inner.p { s - inner.p } else { s });
        }
        if let Some(t) = &inner.add {
            return FieldElement(t[(a.0 * inner.q + b.0) as usize]);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..inner.e {
            out += ((x % inner.p + y % inner.p) % inner.p) * place;
            x /= inner.p;
            y /= inner.p;
            place *= inner.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let inner = &*self.0;
        let order = inner.q - 1;
        let k = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        FieldElement(inner.exp[(if k >= order { k - order } else { k }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.0.q - 1;
        let k = self.0.log[a.0 as usize];
        Ok(FieldElement(self.0.exp[((order - k) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let (mut r, mut base) = (self.one(), a);
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        r
    }

    /// Absolute trace `a + a^p + .. + a^(q/p)`, an element of the prime field.
    pub fn trace(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.trace[a.0 as usize])
    }

    /// The trace as an integer in `[0, p)`, i.e. the exponent of ζ in ψ(a).
    #[inline]
    pub fn trace_int(&self, a: FieldElement) -> u32 {
        self.0.trace[a.0 as usize]
    }

    /// χ(a) ∈ {+1, −1}, decided by `a^((q−1)/2)`.
    pub fn quadratic_character(&self, a: FieldElement) -> Result<i32> {
        if a.is_zero() {
            return Err(Error::CharacterUndefinedAtZero);
        }
        let r = self.pow(a, (self.0.q as u64 - 1) / 2);
        if r == self.one() {
            Ok(1)
        } else {
            debug_assert_eq!(r, self.neg(self.one()));
            Ok(-1)
        }
    }

    /// δ = (−1)^((q−1)/2).
    pub fn delta(&self) -> i32 {
        if ((self.0.q - 1) / 2) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        a.is_zero() || self.quadratic_character(a) == Ok(1)
    }

    /// Some nonsquare of the field.
    pub fn nonsquare(&self) -> FieldElement {
        self.primitive_element()
    }
}
