//! The twisted group algebra A of V over K with product
//! `(x)(y) = f(x, y)(x + y)`, the canonical elements s(g), and the cocycle μ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::cyclotomic::{psi, CycNumber};
use crate::error::{Error, Result};
use crate::linalg::{vec_add, Vector};
use crate::symplectic::{GroupElement, SympSpace, ThetaData};

/// A finitely supported map V → K; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraElement {
    space: SympSpace,
    terms: BTreeMap<usize, CycNumber>,
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (k, v) in &self.terms {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

impl AlgebraElement {
    pub fn zero(space: &SympSpace) -> Self {
        AlgebraElement { space: space.clone(), terms: BTreeMap::new() }
    }

    /// The basis element (v).
    pub fn basis(space: &SympSpace, v: &[crate::field::FieldElement]) -> Self {
        Self::from_index(space, space.index(v), CycNumber::one(space.field().p()))
    }

    pub fn from_index(space: &SympSpace, index: usize, coeff: CycNumber) -> Self {
        let mut out = Self::zero(space);
        out.add_term(index, &coeff);
        out
    }

    /// c·(0).
    pub fn scalar(space: &SympSpace, c: CycNumber) -> Self {
        Self::from_index(space, 0, c)
    }

    pub fn one(space: &SympSpace) -> Self {
        Self::scalar(space, CycNumber::one(space.field().p()))
    }

    pub fn space(&self) -> &SympSpace {
        &self.space
    }

    pub fn terms(&self) -> &BTreeMap<usize, CycNumber> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: usize) -> CycNumber {
        self.terms.get(&index).cloned().unwrap_or_else(|| CycNumber::zero(self.space.field().p()))
    }

    fn add_term(&mut self, index: usize, c: &CycNumber) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(index).or_insert_with(|| CycNumber::zero(c.p()));
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&index);
        }
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&CycNumber::from_int(self.space.field().p(), -1)))
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        let mut out = Self::zero(&self.space);
        for (&k, v) in &self.terms {
            out.add_term(k, &(v * c));
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&CycNumber::from_rational(self.space.field().p(), r))
    }

    /// The twisted product; identity (0).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let sp = &self.space;
        let lhs: Vec<(Vector, &CycNumber)> = self.terms.iter().map(|(&k, c)| (sp.vector(k), c)).collect();
        let rhs: Vec<(Vector, &CycNumber)> = other.terms.iter().map(|(&k, c)| (sp.vector(k), c)).collect();
        let mut out = Self::zero(sp);
        for (x, a) in &lhs {
            for (y, b) in &rhs {
                let c = (*a * *b).mul_zeta_pow(sp.f_exponent(x, y));
                out.add_term(sp.index(&vec_add(sp.field(), x, y)), &c);
            }
        }
        Ok(out)
    }

    /// Relabels each (v) as (v^g); a ring automorphism of A.
    pub fn apply_g(&self, g: &GroupElement) -> Self {
        let sp = &self.space;
        let mut out = Self::zero(sp);
        for (&k, c) in &self.terms {
            out.add_term(sp.index(&g.act(&sp.vector(k))), c);
        }
        out
    }
}

/// Σ_{y ∈ V^{g−1}} ψ(±Q_g(y))(y), with the sign selected by `negate`.
fn theta_sum(td: &ThetaData, negate: bool) -> AlgebraElement {
    let sp = td.g.space();
    let f = sp.field();
    let k = td.dim();
    let mut out = AlgebraElement::zero(sp);
    for code in 0..td.moved.size() {
        let c = crate::linalg::decode_vector(f.q(), k, code);
        let qv = td.q_coords(&c);
        let qv = if negate { f.neg(qv) } else { qv };
        out.add_term(sp.index(&td.moved.vector_from_coordinates(&c)), &psi(f, qv));
    }
    out
}

/// s(g): the invertible element with (0)-coefficient 1 and s(g)⁻¹(x)s(g) = (x^g).
pub fn s_of(g: &GroupElement) -> AlgebraElement {
    theta_sum(&g.theta_data(), false)
}

pub fn s_of_theta(td: &ThetaData) -> AlgebraElement {
    theta_sum(td, false)
}

/// s(g)⁻¹ = |V^{g−1}|⁻¹ Σ ψ(−Q_g(y))(y).
pub fn s_inverse(g: &GroupElement) -> AlgebraElement {
    let td = g.theta_data();
    let size = BigRational::new(BigInt::from(1), BigInt::from(td.moved.size()));
    theta_sum(&td, true).scale_rational(&size)
}

/// μ(g, h) with s(g)s(h) = μ(g, h)s(gh), as the (0)-coefficient sum over
/// V^{g−1} ∩ V^{h−1}.
pub fn mu(g: &GroupElement, h: &GroupElement) -> CycNumber {
    let (tg, th) = (g.theta_data(), h.theta_data());
    mu_from_theta(&tg, &th)
}

pub fn mu_from_theta(tg: &ThetaData, th: &ThetaData) -> CycNumber {
    let sp = tg.g.space();
    let f = sp.field();
    let meet = tg.moved.intersect(&th.moved);
    let mut acc = crate::cyclotomic::ZetaSum::new(f.p());
    for y in meet.elements() {
        let qg = tg.q_of(&y).expect("y ∈ V^{g−1}");
        let qh = th.q_of(&y).expect("y ∈ V^{h−1}");
        acc.push(f.trace_int(f.add(qg, qh)));
    }
    acc.finish()
}

/// μ(g, h) together with whether the full product s(g)s(h) equals μ·s(gh).
pub fn mu_checked(g: &GroupElement, h: &GroupElement) -> Result<(CycNumber, bool)> {
    let m = mu(g, h);
    let lhs = s_of(g).mul(&s_of(h))?;
    let rhs = s_of(&g.mul(h)).scale(&m);
    Ok((m, lhs == rhs))
}
