//! Minimal-length factorization of symplectic elements into transvections.
//!
//! A non-involution g ≠ 1 needs exactly dim V^{g−1} transvections and an
//! involution one more. The non-involution step splits off a transvection h
//! along a line ⟨c⟩ of V^{g−1} with g = h·k and V^{k−1} the Θ_g-complement
//! of ⟨c⟩, so μ(h, k) = 1.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField};
use crate::linalg::{dot, FqMatrix, Vector};
use crate::symplectic::{canonical_transvection, group_from_theta, GroupElement, SympSpace, ThetaData};

/// The transvection v ↦ v − γ⁻¹φ(v, c)c with c scaled to have leading coordinate 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransvectionSpec {
    pub c: Vector,
    pub gamma: FieldElement,
}

#[derive(Serialize)]
struct SpecJson {
    c: Vec<u32>,
    gamma: u32,
}

impl Serialize for TransvectionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecJson { c: self.c.iter().map(|x| x.index()).collect(), gamma: self.gamma.index() }.serialize(s)
    }
}

impl TransvectionSpec {
    pub fn new(f: &GaloisField, c: &[FieldElement], gamma: FieldElement) -> Result<Self> {
        let (c, gamma) = canonical_transvection(f, c, gamma)?;
        Ok(TransvectionSpec { c, gamma })
    }

    pub fn to_element(&self, space: &SympSpace) -> Result<GroupElement> {
        space.transvection(&self.c, self.gamma)
    }
}

/// Length of a minimal factorization.
pub fn minimal_length(g: &GroupElement) -> usize {
    let k = g.moved_space().dim();
    if g.is_involution() {
        k + 1
    } else {
        k
    }
}

/// Transvections whose product, in order, is g.
pub fn factor(g: &GroupElement) -> Result<Vec<TransvectionSpec>> {
    let mut out = Vec::new();
    factor_into(g, &mut out)?;
    Ok(out)
}

fn factor_into(g: &GroupElement, out: &mut Vec<TransvectionSpec>) -> Result<()> {
    let sp = g.space();
    let f = sp.field();
    if g.is_identity() {
        return Ok(());
    }
    let td = g.theta_data();
    if td.dim() == 1 {
        out.push(TransvectionSpec::new(f, &td.moved.basis_vectors()[0], td.theta.get(0, 0))?);
        return Ok(());
    }
    if g.is_involution() {
        let c = sp.line_representatives(&td.moved).remove(0);
        let h = sp.transvection(&c, f.one())?;
        factor_into(&g.mul(&h.inverse()), out)?;
        out.push(TransvectionSpec::new(f, &c, f.one())?);
        return Ok(());
    }
    let (c, h) = splitting_transvection(&td)?;
    out.push(TransvectionSpec::new(f, &c, td.q_of(&c).expect("c ∈ V^{g−1}"))?);
    factor_into(&h.inverse().mul(g), out)
}

/// The first canonical line ⟨c⟩ of V^{g−1} with Q_g(c) ≠ 0 and Q_g not
/// identically zero on Y = {y : Θ_g(c, y) = 0}, and the transvection with
/// moved space ⟨c⟩ and theta form Θ_g restricted to ⟨c⟩.
pub fn splitting_transvection(td: &ThetaData) -> Result<(Vector, GroupElement)> {
    let sp = td.g.space();
    let f = sp.field();
    for c in sp.line_representatives(&td.moved) {
        let a = td.moved.coordinates(&c).expect("c ∈ V^{g−1}");
        let qc = td.q_coords(&a);
        if qc.is_zero() {
            continue;
        }
        // Y in coordinates: b with (a·Θ)·b = 0
        let ys = FqMatrix::from_rows(f, &[td.theta.apply(&a)]).expect("one row").right_kernel().row_vectors();
        let nonzero_on_y =
            ys.iter().enumerate().any(|(i, bi)| ys[i..].iter().any(|bj| !dot(f, &td.b_sym.apply(bi), bj).is_zero()));
        if !nonzero_on_y {
            continue;
        }
        let line = sp.subspace(std::slice::from_ref(&c))?;
        let t = FqMatrix::from_rows(f, &[vec![qc]]).expect("1×1");
        return Ok((c, group_from_theta(&line, &t)?));
    }
    Err(Error::InvalidInput("no splitting line found".into()))
}

/// Outcome of checking a proposed factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub product_matches: bool,
    pub length: usize,
    pub minimal_length: usize,
}

impl FactorizationReport {
    pub fn ok(&self) -> bool {
        self.product_matches && self.length == self.minimal_length
    }
}

pub fn verify_factorization(g: &GroupElement, seq: &[TransvectionSpec]) -> Result<FactorizationReport> {
    let sp = g.space();
    let mut acc = sp.identity();
    for spec in seq {
        acc = acc.mul(&spec.to_element(sp)?);
    }
    Ok(FactorizationReport { product_matches: &acc == g, length: seq.len(), minimal_length: minimal_length(g) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted_algebra::mu;

    fn sp(q: u64, n: usize) -> SympSpace {
        SympSpace::standard(&GaloisField::from_q(q).unwrap(), n).unwrap()
    }

    #[test]
    fn examples() {
        let s = sp(3, 1);
        let f = s.field();
        assert!(factor(&s.identity()).unwrap().is_empty());
        let c = vec![f.zero(), f.one()];
        let h = s.transvection(&c, f.from_int(2)).unwrap();
        assert_eq!(factor(&h).unwrap(), vec![TransvectionSpec { c, gamma: f.from_int(2) }]);
        let seq = factor(&s.minus_one()).unwrap();
        assert_eq!(seq.len(), 3);
        assert!(verify_factorization(&s.minus_one(), &seq).unwrap().ok());
        let g4 = s.element_from_indices(&[vec![0, 1], vec![2, 0]]).unwrap();
        let seq = factor(&g4).unwrap();
        assert_eq!(seq.len(), 2);
        assert!(verify_factorization(&g4, &seq).unwrap().ok());
        assert!(verify_factorization(&s.identity(), &[]).unwrap().ok());
        assert!(!verify_factorization(&g4, &seq[..1]).unwrap().product_matches);
    }

    #[test]
    fn all_of_sp23() {
        let s = sp(3, 1);
        for g in s.enumerate_group().unwrap() {
            let seq = factor(&g).unwrap();
            let report = verify_factorization(&g, &seq).unwrap();
            assert!(report.ok(), "{g:?}: {report:?}");
            assert!(g.moved_space().dim() <= report.length);
        }
    }

    #[test]
    fn random_sp43_and_sp25() {
        for (q, n) in [(3u64, 2usize), (5, 2), (7, 1)] {
            let s = sp(q, n);
            for g in s.random_elements(q * 10 + n as u64, 60) {
                let report = verify_factorization(&g, &factor(&g).unwrap()).unwrap();
                assert!(report.ok(), "{g:?}: {report:?}");
            }
        }
    }

    #[test]
    fn splitting_steps_are_direct_sums() {
        let s = sp(3, 2);
        for g in s.random_elements(8, 40) {
            if g.is_involution() || g.moved_space().dim() < 2 {
                continue;
            }
            let (_, h) = splitting_transvection(&g.theta_data()).unwrap();
            let k = h.inverse().mul(&g);
            assert!(mu(&h, &k).is_one());
            assert_eq!(g.moved_space().dim(), 1 + k.moved_space().dim());
            assert!(!k.is_involution());
        }
    }

    #[test]
    fn involutions_in_sp43() {
        let s1 = sp(3, 1);
        let s = sp(3, 2);
        for g in [s.minus_one(), s.direct_sum(&s1.minus_one(), &s1.identity()).unwrap()] {
            let seq = factor(&g).unwrap();
            assert_eq!(seq.len(), g.moved_space().dim() + 1);
            assert!(verify_factorization(&g, &seq).unwrap().ok());
        }
    }

    #[test]
    fn json_shape() {
        let s = sp(3, 1);
        let f = s.field();
        let spec = TransvectionSpec::new(f, &[f.from_int(2), f.one()], f.one()).unwrap();
        assert_eq!(serde_json::to_string(&spec).unwrap(), r#"{"c":[1,2],"gamma":1}"#);
    }
}
