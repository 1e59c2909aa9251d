//! Exact arithmetic in K = Q(ζ_p), the additive character ψ, the Gauss sum ρ,
//! and character sums of quadratic and affine-quadratic forms.
//!
//! A [`CycNumber`] is stored over the basis `1, ζ, .., ζ^(p−2)` with one
//! common positive denominator, reduced so that the numerators and the
//! denominator share no factor. With that normalization equality is
//! structural.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField};
use crate::linalg::{decode_vector, dot, FqMatrix, Vector};

/// Default dimension cap for brute-force character sums.
pub const DEFAULT_BRUTE_DIM_LIMIT: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    p: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNumber {
    fn normalized(p: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), p as usize - 1);
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            num.iter_mut().for_each(|c| *c = &*c / &g);
            den /= g;
        }
        CycNumber { p, num, den }
    }

    /// From coefficients of `1, ζ, .., ζ^(p−1)` (length p), reducing by Φ_p.
    fn from_redundant(p: u32, full: Vec<BigInt>, den: BigInt) -> Self {
        let top = full[p as usize - 1].clone();
        let num = full.into_iter().take(p as usize - 1).map(|c| c - &top).collect();
        Self::normalized(p, num, den)
    }

    pub fn zero(p: u32) -> Self {
        CycNumber { p, num: vec![BigInt::zero(); p as usize - 1], den: BigInt::one() }
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        Self::from_bigint(p, BigInt::from(n))
    }

    pub fn from_bigint(p: u32, n: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); p as usize - 1];
        num[0] = n;
        CycNumber { p, num, den: BigInt::one() }
    }

    pub fn from_rational(p: u32, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); p as usize - 1];
        num[0] = r.numer().clone();
        Self::normalized(p, num, r.denom().clone())
    }

    pub fn from_ratio(p: u32, n: i64, d: i64) -> Self {
        Self::from_rational(p, &BigRational::new(n.into(), d.into()))
    }

    /// From rational coefficients over `1, ζ, .., ζ^(p−2)`.
    pub fn from_coeffs(p: u32, coeffs: &[BigRational]) -> Result<Self> {
        if coeffs.len() != p as usize - 1 {
            return Err(Error::ShapeMismatch(format!("expected {} coefficients", p - 1)));
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::normalized(p, num, den))
    }

    /// ζ^k.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let k = k.rem_euclid(p as i64) as usize;
        let mut full = vec![BigInt::zero(); p as usize];
        full[k] = BigInt::one();
        Self::from_redundant(p, full, BigInt::one())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Coefficient of ζ^i in lowest terms.
    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    /// The value as a rational, when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..].iter().all(Zero::is_zero).then(|| self.coeff(0))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "cyclotomic numbers from different fields");
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(self.p, num, &self.den * r.denom())
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale_rational(&BigRational::from_integer(n.into()))
    }

    /// Multiplies by ζ^k.
    pub fn mul_zeta_pow(&self, k: u32) -> Self {
        let p = self.p as usize;
        let k = k as usize % p;
        if k == 0 {
            return self.clone();
        }
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in self.num.iter().enumerate() {
            full[(i + k) % p] = c.clone();
        }
        Self::from_redundant(self.p, full, self.den.clone())
    }

    /// The automorphism ζ ↦ ζ^(p−1) (complex conjugation).
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in self.num.iter().enumerate() {
            full[(p - i) % p] = c.clone();
        }
        Self::from_redundant(self.p, full, self.den.clone())
    }

    /// `z · conj(z)`, which is rational and equals |z|².
    pub fn abs_sq(&self) -> BigRational {
        (self * &self.conj()).as_rational().expect("z·conj(z) is real and lies in Q(ζ_p)∩R; rational for these inputs")
    }

    /// Inverse by solving the rational linear system of multiplication by `self`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.p as usize - 1;
        // Column j of the system holds the coordinates of self·ζ^j.
        let mut a: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n + 1]; n];
        for j in 0..n {
            let col = self.mul_zeta_pow(j as u32);
            for (i, row) in a.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
        }
        a[0][n] = BigRational::one();
        for c in 0..n {
            let piv = (c..n).find(|&i| !a[i][c].is_zero()).ok_or(Error::DivisionByZero)?;
            a.swap(c, piv);
            let inv = a[c][c].recip();
            for v in a[c].iter_mut() {
                *v = &*v * &inv;
            }
            for i in 0..n {
                if i != c && !a[i][c].is_zero() {
                    let factor = a[i][c].clone();
                    for j in c..=n {
                        let delta = &factor * &a[c][j];
                        a[i][j] = &a[i][j] - delta;
                    }
                }
            }
        }
        let coeffs: Vec<BigRational> = a.into_iter().map(|row| row[n].clone()).collect();
        Self::from_coeffs(self.p, &coeffs)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.p);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Approximate complex value, for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let theta = 2.0 * std::f64::consts::PI / self.p as f64;
        self.num.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            (re + c * (theta * k as f64).cos(), im + c * (theta * k as f64).sin())
        })
    }

    /// Canonical strings `"num/den"` per coefficient.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect()
    }

    pub fn from_strings(items: &[String]) -> Result<Self> {
        let p = items.len() as u32 + 1;
        if !crate::field::is_prime(p as u64) || p == 2 {
            return Err(Error::InvalidInput(format!("{} coefficients do not describe Q(ζ_p) for an odd prime p", items.len())));
        }
        let coeffs = items
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| Error::InvalidInput(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(p, &coeffs)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        CycNumber::from_strings(&items).map_err(D::Error::custom)
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag_s = if mag.is_integer() { mag.numer().to_string() } else { format!("{}/{}", mag.numer(), mag.denom()) };
            match i {
                0 => write!(f, "{mag_s}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag_s}*")?;
                    }
                    if i == 1 {
                        write!(f, "ζ")?
                    } else {
                        write!(f, "ζ^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc{}({})", self.p, self)
    }
}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        self.check(rhs);
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect();
            return CycNumber::normalized(self.p, num, self.den.clone());
        }
        let num = self.num.iter().zip(&rhs.num).map(|(a, b)| a * &rhs.den + b * &self.den).collect();
        CycNumber::normalized(self.p, num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        self + &(-rhs)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { p: self.p, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        self.check(rhs);
        let p = self.p as usize;
        if self.is_zero() || rhs.is_zero() {
            return CycNumber::zero(self.p);
        }
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        CycNumber::from_redundant(self.p, full, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &CycNumber) -> CycNumber {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: &CycNumber) {
        *self = &*self + rhs;
    }
}

/// Accumulates integer multiples of powers of ζ.
#[derive(Clone, Debug)]
pub struct ZetaSum {
    counts: Vec<i64>,
}

impl ZetaSum {
    pub fn new(p: u32) -> Self {
        ZetaSum { counts: vec![0; p as usize] }
    }

    #[inline]
    pub fn push(&mut self, k: u32) {
        self.counts[k as usize] += 1;
    }

    pub fn finish(self) -> CycNumber {
        let p = self.counts.len() as u32;
        CycNumber::from_redundant(p, self.counts.into_iter().map(BigInt::from).collect(), BigInt::one())
    }
}

/// ψ(a) = ζ^tr(a).
pub fn psi(field: &GaloisField, a: FieldElement) -> CycNumber {
    CycNumber::zeta_pow(field.p(), field.trace_int(a) as i64)
}

/// The Gauss sum Σ_α ψ(α²), by direct summation.
pub fn rho(field: &GaloisField) -> CycNumber {
    let mut acc = ZetaSum::new(field.p());
    for a in field.elements() {
        acc.push(field.trace_int(field.mul(a, a)));
    }
    acc.finish()
}

/// `sign·ρ` raised to an integer power, using ρ² = δq for the even part.
pub fn rho_power(field: &GaloisField, rho: &CycNumber, k: i64) -> CycNumber {
    let p = field.p();
    let dq = BigRational::from_integer(BigInt::from(field.delta() as i64 * field.q() as i64));
    let half = k.div_euclid(2);
    let odd = k.rem_euclid(2) == 1;
    let scale = if half >= 0 { num_traits::pow(dq, half as usize) } else { num_traits::pow(dq.recip(), (-half) as usize) };
    let base = if odd { rho.clone() } else { CycNumber::one(p) };
    base.scale_rational(&scale)
}

/// A quadratic form `Q(x) = x·G·xᵀ` with optional linear part `l(x) = Σ l_i x_i`.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    pub field: GaloisField,
    pub gram: FqMatrix,
    pub linear: Option<Vector>,
}

/// Rank, radical and χ(Q) of a symmetric Gram matrix.
#[derive(Clone, Debug)]
pub struct FormInvariants {
    pub rank: usize,
    pub radical: FqMatrix,
    /// χ of the determinant of the induced nondegenerate form; +1 for rank 0.
    pub chi: i32,
}

impl QuadraticForm {
    pub fn new(field: &GaloisField, gram: FqMatrix, linear: Option<Vector>) -> Result<Self> {
        if !gram.is_square() || gram != gram.transpose() {
            return Err(Error::ShapeMismatch("gram must be square and symmetric".into()));
        }
        if linear.as_ref().is_some_and(|l| l.len() != gram.rows()) {
            return Err(Error::ShapeMismatch("linear part has the wrong length".into()));
        }
        Ok(QuadraticForm { field: field.clone(), gram, linear })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let gx = self.gram.apply(x);
        let q = dot(f, x, &gx);
        match &self.linear {
            Some(l) => f.add(q, dot(f, l, x)),
            None => q,
        }
    }

    /// Symmetric Gaussian elimination (congruence diagonalization).
    pub fn invariants(&self) -> FormInvariants {
        let f = &self.field;
        let n = self.dim();
        let mut g = self.gram.clone();
        let swap = |g: &mut FqMatrix, a: usize, b: usize| {
            for k in 0..n {
                let (x, y) = (g.get(a, k), g.get(b, k));
                g.set(a, k, y);
                g.set(b, k, x);
            }
            for k in 0..n {
                let (x, y) = (g.get(k, a), g.get(k, b));
                g.set(k, a, y);
                g.set(k, b, x);
            }
        };
        // row_a += c·row_b and col_a += c·col_b
        let add_multiple = |g: &mut FqMatrix, a: usize, b: usize, c: FieldElement| {
            for k in 0..n {
                let v = f.add(g.get(a, k), f.mul(c, g.get(b, k)));
                g.set(a, k, v);
            }
            for k in 0..n {
                let v = f.add(g.get(k, a), f.mul(c, g.get(k, b)));
                g.set(k, a, v);
            }
        };
        for i in 0..n {
            if g.get(i, i).is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !g.get(j, j).is_zero()) {
                    swap(&mut g, i, j);
                } else if let Some(j) = (i + 1..n).find(|&j| !g.get(i, j).is_zero()) {
                    add_multiple(&mut g, i, j, FieldElement::ONE);
                } else {
                    continue;
                }
            }
            let d = g.get(i, i);
            let inv = f.inv(d).expect("nonzero pivot");
            for k in i + 1..n {
                let c = f.neg(f.mul(g.get(k, i), inv));
                if !c.is_zero() {
                    add_multiple(&mut g, k, i, c);
                }
            }
        }
        let diag: Vec<FieldElement> = (0..n).map(|i| g.get(i, i)).filter(|d| !d.is_zero()).collect();
        let det = diag.iter().fold(FieldElement::ONE, |acc, &d| f.mul(acc, d));
        FormInvariants {
            rank: diag.len(),
            radical: self.gram.right_kernel(),
            chi: f.quadratic_character(det).expect("nonzero product"),
        }
    }
}

/// Σ_x ψ(Q(x) + l(x)) by enumerating all `q^dim` vectors.
pub fn quad_psi_sum_brute(form: &QuadraticForm) -> Result<CycNumber> {
    quad_psi_sum_brute_with_limit(form, DEFAULT_BRUTE_DIM_LIMIT)
}

pub fn quad_psi_sum_brute_with_limit(form: &QuadraticForm, limit: usize) -> Result<CycNumber> {
    let dim = form.dim();
    if dim > limit {
        return Err(Error::DimensionLimit { dim, limit });
    }
    let f = &form.field;
    let mut acc = ZetaSum::new(f.p());
    let total = (f.q() as usize).pow(dim as u32);
    for code in 0..total {
        let x = decode_vector(f.q(), dim, code);
        acc.push(f.trace_int(form.eval(&x)));
    }
    Ok(acc.finish())
}

/// Closed form `ψ(−Q(y₀))·χ(Q)·ρ^rank·q^(dim−rank)`, or 0 when `l` is
/// nonzero on the radical. Here `l(x) = 2B(x, y₀)`.
pub fn quad_psi_sum_closed(form: &QuadraticForm) -> Result<CycNumber> {
    let f = &form.field;
    let p = f.p();
    let dim = form.dim();
    let inv = form.invariants();
    let mut phase = CycNumber::one(p);
    if let Some(l) = &form.linear {
        if inv.radical.row_vectors().iter().any(|z| !dot(f, l, z).is_zero()) {
            return Ok(CycNumber::zero(p));
        }
        let half = f.inv(f.from_int(2)).expect("odd characteristic");
        let target: Vector = l.iter().map(|&c| f.mul(half, c)).collect();
        let y0 = form.gram.solve_right(&target).expect("l vanishes on the radical");
        let qy0 = dot(f, &y0, &form.gram.apply(&y0));
        phase = psi(f, f.neg(qy0));
    }
    let r = rho(f);
    let value = phase
        * rho_power(f, &r, inv.rank as i64)
        * CycNumber::from_bigint(p, num_traits::pow(BigInt::from(f.q()), dim - inv.rank));
    Ok(value.scale_int(inv.chi as i64))
}

/// Writes `z = a + b·ρ` with rational a, b when possible.
pub fn rho_form(z: &CycNumber, rho: &CycNumber) -> Option<(BigRational, BigRational)> {
    if rho.as_rational().is_some() {
        return z.as_rational().map(|a| (a, BigRational::zero()));
    }
    let i = (1..rho.num.len()).find(|&i| !rho.num[i].is_zero())?;
    let b = z.coeff(i) / rho.coeff(i);
    let rest = z - &rho.scale_rational(&b);
    rest.as_rational().map(|a| (a, b))
}

/// Human-readable ρ-form, e.g. `(1/2)ρ - 1/2`.
pub fn rho_form_string(z: &CycNumber, rho: &CycNumber) -> Option<String> {
    let (a, b) = rho_form(z, rho)?;
    let fmt_q = |r: &BigRational| if r.is_integer() { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) };
    let term = |b: &BigRational| {
        if b.is_one() {
            "ρ".to_string()
        } else if (-b).is_one() {
            "-ρ".to_string()
        } else if b.is_integer() {
            format!("{}ρ", b.numer())
        } else if b.is_negative() {
            format!("-({})ρ", fmt_q(&-b))
        } else {
            format!("({})ρ", fmt_q(b))
        }
    };
    Some(match (a.is_zero(), b.is_zero()) {
        (_, true) => fmt_q(&a),
        (true, false) => term(&b),
        (false, false) if a.is_negative() => format!("{} - {}", term(&b), fmt_q(&-a)),
        (false, false) => format!("{} + {}", term(&b), fmt_q(&a)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(p: u32) -> CycNumber {
        CycNumber::zeta_pow(p, 1)
    }

    fn form(f: &GaloisField, gram: &[&[u32]], linear: Option<&[u32]>) -> QuadraticForm {
        let g = FqMatrix::from_indices(f, &gram.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        let l = linear.map(|l| l.iter().map(|&c| f.elem(c).unwrap()).collect());
        QuadraticForm::new(f, g, l).unwrap()
    }

    #[test]
    fn psi_examples() {
        let f3 = GaloisField::prime(3).unwrap();
        assert!(psi(&f3, f3.zero()).is_one());
        assert_eq!(psi(&f3, f3.one()), z(3));
        let f9 = GaloisField::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let x = f9.from_coefficients(&[0, 1]).unwrap();
        assert!(psi(&f9, x).is_one());
    }

    #[test]
    fn psi_is_additive() {
        for q in [3u64, 5, 9, 25] {
            let f = GaloisField::from_q(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(psi(&f, f.add(a, b)), psi(&f, a) * psi(&f, b));
                }
            }
        }
    }

    #[test]
    fn rho_for_q3_is_one_plus_two_zeta() {
        let f = GaloisField::prime(3).unwrap();
        let expected = &CycNumber::one(3) + &z(3).scale_int(2);
        assert_eq!(rho(&f), expected);
    }

    #[test]
    fn gauss_sum_squares_to_delta_q() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49] {
            let f = GaloisField::from_q(q).unwrap();
            let r = rho(&f);
            assert_eq!(&r * &r, CycNumber::from_int(f.p(), f.delta() as i64 * q as i64), "q = {q}");
        }
    }

    #[test]
    fn inverse_examples() {
        assert!(CycNumber::one(5).inverse().unwrap().is_one());
        let zi = z(3).inverse().unwrap();
        assert_eq!(zi, &CycNumber::from_int(3, -1) - &z(3));
        let f = GaloisField::prime(3).unwrap();
        let r = rho(&f);
        assert_eq!(r.inverse().unwrap(), r.scale_rational(&BigRational::new((-1).into(), 3.into())));
        assert_eq!(CycNumber::zero(3).inverse().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn brute_sum_examples() {
        let f = GaloisField::prime(3).unwrap();
        assert_eq!(quad_psi_sum_brute(&form(&f, &[&[1]], None)).unwrap(), rho(&f));
        assert_eq!(quad_psi_sum_brute(&form(&f, &[&[0, 0], &[0, 0]], None)).unwrap(), CycNumber::from_int(3, 9));
        // Q(x, y) = xy has symmetric Gram [[0, 1/2], [1/2, 0]]; 1/2 = 2 in GF(3)
        assert_eq!(quad_psi_sum_brute(&form(&f, &[&[0, 2], &[2, 0]], None)).unwrap(), CycNumber::from_int(3, 3));
        let big = QuadraticForm::new(&f, FqMatrix::zeros(&f, 7, 7), None).unwrap();
        assert_eq!(quad_psi_sum_brute(&big).unwrap_err(), Error::DimensionLimit { dim: 7, limit: 6 });
    }

    #[test]
    fn closed_sum_examples() {
        let f = GaloisField::prime(3).unwrap();
        let affine = form(&f, &[&[1]], Some(&[1]));
        let brute = quad_psi_sum_brute(&affine).unwrap();
        assert_eq!(brute, &CycNumber::from_int(3, 2) + &CycNumber::zeta_pow(3, 2));
        assert_eq!(quad_psi_sum_closed(&affine).unwrap(), brute);
        assert_eq!(quad_psi_sum_closed(&form(&f, &[&[1]], None)).unwrap(), rho(&f));
        for q in [3u64, 5, 9] {
            let f = GaloisField::from_q(q).unwrap();
            let zero_q = form(&f, &[&[0, 0], &[0, 0]], Some(&[1, 0]));
            assert!(quad_psi_sum_closed(&zero_q).unwrap().is_zero());
        }
    }

    #[test]
    fn rewritten_delta_exponent_disagrees_with_brute_force() {
        // χ(Q)|X|δ^(dim−rank)ρ^(−rank) vs χ(Q)|X|δ^rank ρ^(−rank) for Q = x² over GF(3)
        let f = GaloisField::prime(3).unwrap();
        let brute = quad_psi_sum_brute(&form(&f, &[&[1]], None)).unwrap();
        let r = rho(&f);
        let rinv = r.inverse().unwrap();
        let with_dim_minus_rank = rinv.scale_int(3);
        let with_rank = rinv.scale_int(3 * f.delta() as i64);
        assert_eq!(with_dim_minus_rank, -&brute);
        assert_eq!(with_rank, brute);
    }

    #[test]
    fn character_sums_of_linear_functionals() {
        for q in [3u64, 5, 9] {
            let f = GaloisField::from_q(q).unwrap();
            for dim in 1..=2usize {
                let total = (f.q() as usize).pow(dim as u32);
                for code in 0..total {
                    let l = decode_vector(f.q(), dim, code);
                    let qf = QuadraticForm::new(&f, FqMatrix::zeros(&f, dim, dim), Some(l.clone())).unwrap();
                    let s = quad_psi_sum_brute(&qf).unwrap();
                    if code == 0 {
                        assert_eq!(s, CycNumber::from_int(f.p(), total as i64));
                    } else {
                        assert!(s.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_character_forces_zero_form() {
        // exhaustive over all affine quadratic F on GF(3)^dim, dim <= 2
        let f = GaloisField::prime(3).unwrap();
        for dim in 1..=2usize {
            let sym_entries = dim * (dim + 1) / 2;
            for gcode in 0..3usize.pow(sym_entries as u32) {
                let digits = decode_vector(3, sym_entries, gcode);
                let mut g = FqMatrix::zeros(&f, dim, dim);
                let mut k = 0;
                for i in 0..dim {
                    for j in i..dim {
                        g.set(i, j, digits[k]);
                        g.set(j, i, digits[k]);
                        k += 1;
                    }
                }
                for lcode in 0..3usize.pow(dim as u32) {
                    let qf = QuadraticForm::new(&f, g.clone(), Some(decode_vector(3, dim, lcode))).unwrap();
                    let all_one = (0..3usize.pow(dim as u32)).all(|c| f.trace_int(qf.eval(&decode_vector(3, dim, c))) == 0);
                    let identically_zero = gcode == 0 && lcode == 0;
                    assert_eq!(all_one, identically_zero);
                }
            }
        }
    }

    #[test]
    fn json_encoding() {
        let v = &CycNumber::from_ratio(3, 1, 2) + &z(3).scale_int(-3);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["1/2","-3/1"]"#);
        let back: CycNumber = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn rho_form_recognises_table_entries() {
        let f = GaloisField::prime(5).unwrap();
        let r = rho(&f);
        let v = (&r - &CycNumber::one(5)).scale_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(rho_form_string(&v, &r).unwrap(), "(1/2)ρ - 1/2");
        assert_eq!(rho_form_string(&CycNumber::from_int(5, 3), &r).unwrap(), "3");
        assert!(rho_form(&z(5), &r).is_none());
    }

    fn arb_form(q: u64, max_dim: usize) -> impl Strategy<Value = (u64, usize, Vec<u32>, Vec<u32>)> {
        (1..=max_dim).prop_flat_map(move |dim| {
            let qq = q as u32;
            (
                Just(q),
                Just(dim),
                proptest::collection::vec(0..qq, dim * (dim + 1) / 2),
                proptest::collection::vec(0..qq, dim),
            )
        })
    }

    fn build(q: u64, dim: usize, sym: &[u32], lin: &[u32], affine: bool) -> QuadraticForm {
        let f = GaloisField::from_q(q).unwrap();
        let mut g = FqMatrix::zeros(&f, dim, dim);
        let mut k = 0;
        for i in 0..dim {
            for j in i..dim {
                let v = f.elem(sym[k]).unwrap();
                g.set(i, j, v);
                g.set(j, i, v);
                k += 1;
            }
        }
        let l = affine.then(|| lin.iter().map(|&c| f.elem(c).unwrap()).collect());
        QuadraticForm::new(&f, g, l).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn closed_equals_brute((q, dim, sym, lin) in prop_oneof![arb_form(3, 3), arb_form(5, 3), arb_form(9, 2)], affine in any::<bool>()) {
            let qf = build(q, dim, &sym, &lin, affine);
            prop_assert_eq!(quad_psi_sum_closed(&qf).unwrap(), quad_psi_sum_brute(&qf).unwrap());
        }

        #[test]
        fn sum_modulus_bounded_by_space_size((q, dim, sym, lin) in prop_oneof![arb_form(3, 3), arb_form(5, 2), arb_form(9, 2)]) {
            let qf = build(q, dim, &sym, &lin, true);
            let s = quad_psi_sum_brute(&qf).unwrap();
            let size = BigRational::from_integer(BigInt::from(q).pow(dim as u32));
            let sq = s.abs_sq();
            let zero_form = sym.iter().all(|&c| c == 0) && lin.iter().all(|&c| c == 0);
            prop_assert!(sq <= &size * &size);
            prop_assert_eq!(sq == &size * &size, zero_form);
        }

        #[test]
        fn field_axioms(p in prop_oneof![Just(3u32), Just(5), Just(7)], a in proptest::collection::vec(-5i64..5, 6), b in proptest::collection::vec(-5i64..5, 6)) {
            let mk = |v: &[i64]| CycNumber::from_coeffs(p, &v[..p as usize - 1].iter().map(|&c| BigRational::from_integer(c.into())).collect::<Vec<_>>()).unwrap();
            let (x, y) = (mk(&a), mk(&b));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!((&x + &y).conj(), x.conj() + y.conj());
            prop_assert_eq!((&x * &y).conj(), x.conj() * y.conj());
            if !x.is_zero() {
                prop_assert!((&x * &x.inverse().unwrap()).is_one());
            }
        }
    }
}
