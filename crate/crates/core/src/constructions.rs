//! Two explicit models of (V, φ) used as independent character checks.
//!
//! * Circle: V = GF(q^{2n}) with φ(x, y) = tr(ε·x·y^{q^n}) and ε^{q^n} = −ε;
//!   multiplication by z with z^{q^n+1} = 1 is symplectic.
//! * Split: V = GF(q^n) ⊕ GF(q^n) with φ((x, y), (x′, y′)) = tr(xy′ − yx′);
//!   (x, y) ↦ (zx, z⁻¹y) is symplectic for every z ≠ 0.
//!
//! Both identify V with GF(q)^{2n} through polynomial coordinates, so q must
//! be prime: the absolute trace is then the trace to GF(q).

use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField};
use crate::linalg::FqMatrix;
use crate::symplectic::{GroupElement, SympSpace};

/// A torus element with its multiplier in the big field.
#[derive(Clone, Debug)]
pub struct TorusElement {
    pub z: FieldElement,
    pub g: GroupElement,
    pub order: u64,
    /// χ_Z(z): the quadratic character of the cyclic group containing z.
    pub chi_z: i32,
}

fn require_prime(q: u64) -> Result<GaloisField> {
    let base = GaloisField::from_q(q)?;
    if base.e() != 1 {
        return Err(Error::InvalidInput(format!("the explicit constructions need prime q, got {q}")));
    }
    Ok(base)
}

fn mult_order(f: &GaloisField, z: FieldElement) -> u64 {
    let mut k = 1;
    let mut acc = z;
    while acc != f.one() {
        acc = f.mul(acc, z);
        k += 1;
    }
    k
}

/// Rows are the coordinates of `map(b_i)` for the polynomial basis b_i of `big`.
fn matrix_of(base: &GaloisField, big: &GaloisField, map: impl Fn(FieldElement) -> FieldElement) -> FqMatrix {
    let e = big.e() as usize;
    let rows: Vec<Vec<u32>> = (0..e)
        .map(|i| {
            let mut c = vec![0u32; e];
            c[i] = 1;
            big.coefficients(map(big.from_coefficients(&c).expect("valid coordinates")))
        })
        .collect();
    FqMatrix::from_indices(base, &rows).expect("coordinates lie in the prime field")
}

/// The circle model over GF(q^{2n}).
#[derive(Clone, Debug)]
pub struct CircleModel {
    pub big: GaloisField,
    pub space: SympSpace,
    pub epsilon: FieldElement,
    /// q^n.
    pub qn: u64,
    /// Generator of the cyclic subgroup Z of order q^n + 1.
    pub generator: FieldElement,
}

impl CircleModel {
    pub fn new(q: u64, n: usize) -> Result<Self> {
        let base = require_prime(q)?;
        let p = base.p();
        let big = GaloisField::new(p, 2 * n as u32, None)?;
        let qn = q.pow(n as u32);
        let alpha = big.primitive_element();
        let epsilon = big.pow(alpha, (qn + 1) / 2);
        let frob = |y: FieldElement| big.pow(y, qn);
        let d = 2 * n;
        let basis: Vec<FieldElement> = (0..d)
            .map(|i| {
                let mut c = vec![0u32; d];
                c[i] = 1;
                big.from_coefficients(&c).expect("valid coordinates")
            })
            .collect();
        let mut gram = FqMatrix::zeros(&base, d, d);
        for (i, &x) in basis.iter().enumerate() {
            for (j, &y) in basis.iter().enumerate() {
                let v = big.trace_int(big.mul(epsilon, big.mul(x, frob(y))));
                gram.set(i, j, base.elem(v)?);
            }
        }
        let space = SympSpace::from_gram(&base, gram)?;
        let generator = big.pow(alpha, qn - 1);
        Ok(CircleModel { big, space, epsilon, qn, generator })
    }

    /// x ↦ zx for z ∈ Z.
    pub fn element(&self, z: FieldElement) -> Result<TorusElement> {
        let big = &self.big;
        let qn = self.qn;
        if big.pow(z, qn + 1) != big.one() {
            return Err(Error::InvalidInput("z must satisfy z^(q^n+1) = 1".into()));
        }
        let g = self.space.element(matrix_of(self.space.field(), big, |x| big.mul(z, x)))?;
        let chi_z = if big.pow(z, (qn + 1) / 2) == big.one() { 1 } else { -1 };
        Ok(TorusElement { z, g, order: mult_order(big, z), chi_z })
    }

    /// All of Z, starting from 1.
    pub fn elements(&self) -> Vec<TorusElement> {
        let mut out = Vec::new();
        let mut z = self.big.one();
        loop {
            out.push(self.element(z).expect("z ∈ Z"));
            z = self.big.mul(z, self.generator);
            if z == self.big.one() {
                break;
            }
        }
        out
    }
}

/// The split model over GF(q^n) ⊕ GF(q^n).
#[derive(Clone, Debug)]
pub struct SplitModel {
    pub small: GaloisField,
    pub space: SympSpace,
}

impl SplitModel {
    pub fn new(q: u64, n: usize) -> Result<Self> {
        let base = require_prime(q)?;
        let small = GaloisField::new(base.p(), n as u32, None)?;
        let mut gram = FqMatrix::zeros(&base, 2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let mut ci = vec![0u32; n];
                ci[i] = 1;
                let mut cj = vec![0u32; n];
                cj[j] = 1;
                let t = small.trace_int(small.mul(small.from_coefficients(&ci)?, small.from_coefficients(&cj)?));
                let t = base.elem(t)?;
                gram.set(i, n + j, t);
                gram.set(n + i, j, base.neg(t));
            }
        }
        let space = SympSpace::from_gram(&base, gram)?;
        Ok(SplitModel { small, space })
    }

    /// (x, y) ↦ (zx, z⁻¹y).
    pub fn element(&self, z: FieldElement) -> Result<TorusElement> {
        let f = &self.small;
        let zinv = f.inv(z)?;
        let n = f.e() as usize;
        let base = self.space.field();
        let top = matrix_of(base, f, |x| f.mul(z, x));
        let bottom = matrix_of(base, f, |x| f.mul(zinv, x));
        let mut m = FqMatrix::zeros(base, 2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, top.get(i, j));
                m.set(n + i, n + j, bottom.get(i, j));
            }
        }
        let g = self.space.element(m)?;
        Ok(TorusElement { z, g, order: mult_order(f, z), chi_z: f.quadratic_character(z)? })
    }

    pub fn elements(&self) -> Vec<TorusElement> {
        self.small.nonzero_elements().map(|z| self.element(z).expect("z ≠ 0")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_rep::{eta_closed, eta_det, weil_values, LagrangianFrame};

    #[test]
    fn circle_gram_is_alternating_and_torus_is_cyclic() {
        for q in [3u64, 5, 7] {
            let c = CircleModel::new(q, 1).unwrap();
            let els = c.elements();
            assert_eq!(els.len() as u64, q + 1);
            assert_eq!(els.iter().filter(|t| t.chi_z == 1).count() as u64, (q + 1) / 2);
            for t in &els {
                assert_eq!(t.chi_z, if ((q + 1) / t.order) % 2 == 0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn circle_character_values() {
        for q in [3u64, 5] {
            let c = CircleModel::new(q, 1).unwrap();
            let frame = LagrangianFrame::standard(&c.space);
            let p = q as u32;
            for t in c.elements() {
                assert_eq!(eta_det(&t.g, &frame).unwrap(), eta_closed(&t.g));
                if t.order > 2 {
                    let wv = weil_values(&t.g);
                    assert_eq!(wv.omega, crate::cyclotomic::CycNumber::from_int(p, -t.chi_z as i64));
                    assert_eq!(wv.omega_minus, crate::cyclotomic::CycNumber::from_int(p, -t.chi_z as i64));
                }
            }
        }
    }

    #[test]
    fn split_character_values() {
        for q in [3u64, 5, 7] {
            let s = SplitModel::new(q, 1).unwrap();
            assert!(s.space.is_standard());
            for t in s.elements() {
                if t.order > 2 {
                    let wv = weil_values(&t.g);
                    assert!(wv.omega_minus.is_zero());
                    assert_eq!(wv.omega, crate::cyclotomic::CycNumber::from_int(q as u32, t.chi_z as i64));
                }
            }
        }
    }

    #[test]
    fn split_model_in_higher_rank() {
        let s = SplitModel::new(3, 2).unwrap();
        for t in s.elements() {
            if t.order > 2 {
                assert!(weil_values(&t.g).omega_minus.is_zero());
            }
        }
    }

    #[test]
    fn rejects_prime_powers() {
        assert!(matches!(CircleModel::new(9, 1), Err(Error::InvalidInput(_))));
        assert!(matches!(SplitModel::new(4, 1), Err(Error::UnsupportedCharacteristic(_))));
    }
}
