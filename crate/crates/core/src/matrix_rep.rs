//! The isomorphism A ≅ M_{q^n}(K) from a Lagrangian frame (W, W*), the
//! involution j and its centralizer blocks, the normalizer η and the Weil
//! characters.
//!
//! Rows and columns of a [`RepMatrix`] are indexed by W* in the order
//! `P, −P, 0`: P holds the a with `enc(a) < enc(−a)`, sorted by encoding, and
//! entry i of −P is the negative of entry i of P. Here enc is the coordinate
//! encoding relative to the frame's W* basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::cyc_matrix::CycMatrix;
use crate::cyclotomic::{rho, rho_power, CycNumber};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{decode_vector, encode_vector, vec_add, FqMatrix, Vector};
use crate::symplectic::{GroupElement, SympSpace, ThetaData};
use crate::twisted_algebra::{s_of_theta, AlgebraElement};

/// A pair of complementary Lagrangian subspaces with chosen bases.
#[derive(Clone, Debug)]
pub struct LagrangianFrame {
    space: SympSpace,
    w_basis: FqMatrix,
    wstar_basis: FqMatrix,
    /// Inverse of the stacked bases; maps V-vectors to (W, W*) coordinates.
    split_inv: FqMatrix,
    order: Vec<usize>,
    pos: Vec<usize>,
    wstar_vecs: Vec<Vector>,
    neg: Vec<usize>,
}

impl LagrangianFrame {
    /// W = span(e₁..e_n), W* = span(f₁..f_n) on a standard space, or a
    /// symplectic basis found by Gram–Schmidt otherwise.
    pub fn standard(space: &SympSpace) -> Self {
        let (es, fs) = if space.is_standard() {
            let n = space.n();
            ((0..n).map(|i| space.basis_vector(i)).collect(), (0..n).map(|i| space.basis_vector(n + i)).collect())
        } else {
            symplectic_basis(space)
        };
        Self::from_bases(space, &es, &fs).expect("symplectic basis gives a Lagrangian frame")
    }

    /// The standard frame with the roles of W and W* exchanged.
    pub fn swapped(space: &SympSpace) -> Self {
        let base = Self::standard(space);
        Self::from_bases(space, &base.wstar_basis.row_vectors(), &base.w_basis.row_vectors()).expect("still Lagrangian")
    }

    /// The image (W·u, W*·u) of this frame under u ∈ Sp(V).
    pub fn transformed(&self, u: &GroupElement) -> Self {
        let w: Vec<Vector> = self.w_basis.row_vectors().iter().map(|v| u.act(v)).collect();
        let ws: Vec<Vector> = self.wstar_basis.row_vectors().iter().map(|v| u.act(v)).collect();
        Self::from_bases(&self.space, &w, &ws).expect("symplectic images stay Lagrangian")
    }

    pub fn from_bases(space: &SympSpace, w: &[Vector], wstar: &[Vector]) -> Result<Self> {
        let n = space.n();
        let f = space.field();
        if w.len() != n || wstar.len() != n {
            return Err(Error::NotLagrangian(format!("both bases need {n} vectors")));
        }
        let wb = FqMatrix::from_rows(f, w)?;
        let wsb = FqMatrix::from_rows(f, wstar)?;
        let split_inv = wb.vstack(&wsb).inverse().map_err(|_| Error::NotLagrangian("bases are not complementary".into()))?;
        let isotropic = |b: &FqMatrix| b.mul(space.gram()).mul(&b.transpose()) == FqMatrix::zeros(f, n, n);
        if !isotropic(&wb) || !isotropic(&wsb) {
            return Err(Error::NotLagrangian("a subspace is not isotropic".into()));
        }
        let q = f.q();
        let size = (q as usize).pow(n as u32);
        let wstar_vecs: Vec<Vector> = (0..size).map(|i| wsb.apply(&decode_vector(q, n, i))).collect();
        let neg: Vec<usize> = (0..size)
            .map(|i| {
                let c: Vector = decode_vector(q, n, i).iter().map(|&x| f.neg(x)).collect();
                encode_vector(q, &c)
            })
            .collect();
        let mut p_set: Vec<usize> = (1..size).filter(|&i| i < neg[i]).collect();
        p_set.sort_unstable();
        let mut order = p_set.clone();
        order.extend(p_set.iter().map(|&i| neg[i]));
        order.push(0);
        let mut pos = vec![0; size];
        for (k, &i) in order.iter().enumerate() {
            pos[i] = k;
        }
        Ok(LagrangianFrame { space: space.clone(), w_basis: wb, wstar_basis: wsb, split_inv, order, pos, wstar_vecs, neg })
    }

    pub fn space(&self) -> &SympSpace {
        &self.space
    }

    /// q^n.
    pub fn size(&self) -> usize {
        self.order.len()
    }

    /// (q^n − 1)/2.
    pub fn half(&self) -> usize {
        (self.size() - 1) / 2
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, wstar_index: usize) -> usize {
        self.pos[wstar_index]
    }

    pub fn negative(&self, wstar_index: usize) -> usize {
        self.neg[wstar_index]
    }

    pub fn w(&self) -> crate::symplectic::Subspace {
        self.space.subspace(&self.w_basis.row_vectors()).expect("right length")
    }

    pub fn wstar(&self) -> crate::symplectic::Subspace {
        self.space.subspace(&self.wstar_basis.row_vectors()).expect("right length")
    }

    pub fn wstar_basis(&self) -> &FqMatrix {
        &self.wstar_basis
    }

    pub fn w_basis(&self) -> &FqMatrix {
        &self.w_basis
    }

    pub fn wstar_vector(&self, index: usize) -> &Vector {
        &self.wstar_vecs[index]
    }

    /// Is a ∈ P?
    pub fn in_p(&self, wstar_index: usize) -> bool {
        wstar_index != 0 && wstar_index < self.neg[wstar_index]
    }

    /// Coordinates of x = w + d: (W coordinates, W*-index of d).
    pub fn split(&self, x: &[FieldElement]) -> (Vector, usize) {
        let n = self.space.n();
        let c = self.split_inv.apply(x);
        (c[..n].to_vec(), encode_vector(self.space.q(), &c[n..]))
    }
}

/// A symplectic basis e₁..e_n, f₁..f_n with φ(e_i, f_j) = δ_ij.
pub fn symplectic_basis(space: &SympSpace) -> (Vec<Vector>, Vec<Vector>) {
    let f = space.field();
    let mut rest = space.whole();
    let (mut es, mut fs) = (Vec::new(), Vec::new());
    while rest.dim() > 0 {
        let basis = rest.basis_vectors();
        let e = basis[0].clone();
        let partner = basis.iter().find(|v| !space.phi(&e, v).is_zero()).expect("φ is nondegenerate on the complement");
        let scale = f.inv(space.phi(&e, partner)).expect("nonzero");
        let fv = crate::linalg::vec_scale(f, scale, partner);
        let plane = space.subspace(&[e.clone(), fv.clone()]).expect("right length");
        rest = rest.intersect(&space.perp(&plane));
        es.push(e);
        fs.push(fv);
    }
    (es, fs)
}

/// A q^n × q^n matrix over K indexed by W* in frame order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RepMatrix {
    pub order: Vec<usize>,
    pub entries: CycMatrix,
}

impl RepMatrix {
    pub fn mul(&self, other: &RepMatrix) -> RepMatrix {
        RepMatrix { order: self.order.clone(), entries: self.entries.mul(&other.entries) }
    }

    pub fn scale(&self, c: &CycNumber) -> RepMatrix {
        RepMatrix { order: self.order.clone(), entries: self.entries.scale(c) }
    }

    pub fn trace(&self) -> CycNumber {
        self.entries.trace()
    }
}

/// e₀ = q^{−n} Σ_{w ∈ W} (w).
pub fn e0(frame: &LagrangianFrame) -> AlgebraElement {
    let sp = frame.space();
    let p = sp.field().p();
    let scale = CycNumber::from_rational(p, &BigRational::new(BigInt::one(), BigInt::from(frame.size())));
    let n = sp.n();
    let q = sp.q();
    let mut out = AlgebraElement::zero(sp);
    for code in 0..frame.size() {
        let w = frame.w_basis.apply(&decode_vector(q, n, code));
        out = out.add(&AlgebraElement::from_index(sp, sp.index(&w), scale.clone())).expect("same space");
    }
    out
}

/// e_ab = (−a)e₀(b) for W*-indices a, b.
pub fn matrix_unit(frame: &LagrangianFrame, a: usize, b: usize) -> AlgebraElement {
    let sp = frame.space();
    let f = sp.field();
    let neg_a: Vector = frame.wstar_vector(a).iter().map(|&x| f.neg(x)).collect();
    let left = AlgebraElement::basis(sp, &neg_a);
    let right = AlgebraElement::basis(sp, frame.wstar_vector(b));
    left.mul(&e0(frame)).and_then(|m| m.mul(&right)).expect("same space")
}

/// The image of an algebra element: (x) with x = w + d has, in row a, the
/// single entry f(a + b, x) at column b = a + d.
pub fn to_matrix(a: &AlgebraElement, frame: &LagrangianFrame) -> Result<RepMatrix> {
    let sp = frame.space();
    if a.space() != sp {
        return Err(Error::SpaceMismatch);
    }
    let f = sp.field();
    let p = f.p();
    let q = sp.q();
    let n = sp.n();
    let size = frame.size();
    let mut entries = CycMatrix::zeros(p, size, size);
    for (&xi, c) in a.terms() {
        let x = sp.vector(xi);
        let (_, d) = frame.split(&x);
        let dc = decode_vector(q, n, d);
        for ai in 0..size {
            let ac = decode_vector(q, n, ai);
            let bi = encode_vector(q, &vec_add(f, &ac, &dc));
            let ab = vec_add(f, frame.wstar_vector(ai), frame.wstar_vector(bi));
            let v = c.mul_zeta_pow(sp.f_exponent(&ab, &x));
            entries.add_at(frame.position(ai), frame.position(bi), &v);
        }
    }
    Ok(RepMatrix { order: frame.order.clone(), entries })
}

/// [j]: the permutation a ↦ −a, block form [[0, I, 0], [I, 0, 0], [0, 0, 1]].
pub fn j_matrix(frame: &LagrangianFrame) -> RepMatrix {
    let p = frame.space().field().p();
    let size = frame.size();
    let mut entries = CycMatrix::zeros(p, size, size);
    for i in 0..size {
        entries.set(frame.position(i), frame.position(frame.negative(i)), CycNumber::one(p));
    }
    RepMatrix { order: frame.order.clone(), entries }
}

fn block_positions(frame: &LagrangianFrame) -> (Vec<usize>, Vec<usize>, usize) {
    let h = frame.half();
    ((0..h).collect(), (h..2 * h).collect(), 2 * h)
}

fn check_centralizer(m: &RepMatrix, frame: &LagrangianFrame) -> Result<()> {
    let j = j_matrix(frame);
    if m.mul(&j) != j.mul(m) {
        return Err(Error::NotInCentralizer);
    }
    Ok(())
}

/// A − B for m = [[A, B, b], [B, A, b], [a, a, α]].
pub fn flat_block(m: &RepMatrix, frame: &LagrangianFrame) -> Result<CycMatrix> {
    check_centralizer(m, frame)?;
    let (p_pos, n_pos, _) = block_positions(frame);
    Ok(m.entries.select(&p_pos, &p_pos).sub(&m.entries.select(&p_pos, &n_pos)))
}

/// [[A + B, 2b], [a, α]].
pub fn sharp_block(m: &RepMatrix, frame: &LagrangianFrame) -> Result<CycMatrix> {
    check_centralizer(m, frame)?;
    let (p_pos, n_pos, z) = block_positions(frame);
    let h = p_pos.len();
    let e = &m.entries;
    let p = e.p();
    Ok(CycMatrix::from_fn(p, h + 1, h + 1, |i, j| match (i < h, j < h) {
        (true, true) => e.get(p_pos[i], p_pos[j]) + e.get(p_pos[i], n_pos[j]),
        (true, false) => e.get(p_pos[i], z).scale_int(2),
        (false, true) => e.get(z, p_pos[j]).clone(),
        (false, false) => e.get(z, z).clone(),
    }))
}

/// [s(g)] in the given frame.
pub fn s_matrix(g: &GroupElement, frame: &LagrangianFrame) -> Result<RepMatrix> {
    to_matrix(&s_of_theta(&g.theta_data()), frame)
}

/// [t(g)] = η(g)[s(g)].
pub fn t_matrix(g: &GroupElement, frame: &LagrangianFrame) -> Result<RepMatrix> {
    let td = g.theta_data();
    let eta = eta_closed_theta(&td, &rho(g.space().field()));
    Ok(to_matrix(&s_of_theta(&td), frame)?.scale(&eta))
}

/// η(g) = (det [s(g)]^♭)² / det [s(g)].
pub fn eta_det(g: &GroupElement, frame: &LagrangianFrame) -> Result<CycNumber> {
    let s = s_matrix(g, frame)?;
    let flat = flat_block(&s, frame)?.det()?;
    (&flat * &flat).div(&s.entries.det()?)
}

/// η(g) = ρ^{−dim V^{g−1}} χ(Θ_g).
pub fn eta_closed(g: &GroupElement) -> CycNumber {
    eta_closed_theta(&g.theta_data(), &rho(g.space().field()))
}

/// The closed formula with an explicit value substituted for ρ.
pub fn eta_closed_theta(td: &ThetaData, rho_value: &CycNumber) -> CycNumber {
    let f = td.g.space().field();
    rho_power(f, rho_value, -(td.dim() as i64)).scale_int(td.chi() as i64)
}

/// η, ω, ω₋, ω₊ and their counterparts with −ρ in place of ρ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeilValues {
    pub g: Vec<Vec<u32>>,
    pub eta: CycNumber,
    pub omega: CycNumber,
    pub omega_minus: CycNumber,
    pub omega_plus: CycNumber,
    pub eta_prime: CycNumber,
    pub omega_prime: CycNumber,
    pub omega_minus_prime: CycNumber,
    pub omega_plus_prime: CycNumber,
}

/// ω = q^n η, ω₋ = (ω(g) − δ^n ω(−g))/2, ω₊ = ω − ω₋.
pub fn weil_values(g: &GroupElement) -> WeilValues {
    let sp = g.space();
    let f = sp.field();
    let p = f.p();
    let r = rho(f);
    let qn = CycNumber::from_bigint(p, BigInt::from(sp.q()).pow(sp.n() as u32));
    let delta_n = if f.delta() == -1 && sp.n() % 2 == 1 { -1 } else { 1 };
    let (tg, tm) = (g.theta_data(), g.neg().theta_data());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let values = |rv: &CycNumber| {
        let omega = &qn * &eta_closed_theta(&tg, rv);
        let omega_neg = &qn * &eta_closed_theta(&tm, rv);
        let minus = (&omega - &omega_neg.scale_int(delta_n)).scale_rational(&half);
        let plus = &omega - &minus;
        (omega, minus, plus)
    };
    let (omega, omega_minus, omega_plus) = values(&r);
    let (omega_prime, omega_minus_prime, omega_plus_prime) = values(&-&r);
    let qn_inv = qn.inverse().expect("q^n ≠ 0");
    WeilValues {
        g: g.to_indices(),
        eta: &omega * &qn_inv,
        eta_prime: &omega_prime * &qn_inv,
        omega,
        omega_minus,
        omega_plus,
        omega_prime,
        omega_minus_prime,
        omega_plus_prime,
    }
}

/// η(g) = χ(det g*) / Σ_{y = x^{g−1} ∈ W ∩ V^{g−1}} f(x^g, x) for g with W^g = W.
pub fn eta_w_stable(g: &GroupElement, frame: &LagrangianFrame) -> Result<CycNumber> {
    let sp = g.space();
    let f = sp.field();
    let w = frame.w();
    if !g.stabilizes(&w) {
        return Err(Error::WNotInvariant);
    }
    let gstar = induced_on_wstar(g, frame);
    let chi = f.quadratic_character(gstar.det())?;
    let td = g.theta_data();
    let mut acc = crate::cyclotomic::ZetaSum::new(f.p());
    for y in w.intersect(&td.moved).elements() {
        acc.push(f.trace_int(td.q_of(&y).expect("y ∈ V^{g−1}")));
    }
    CycNumber::from_int(f.p(), chi as i64).div(&acc.finish())
}

/// The matrix of g acting on V/W ≅ W*, in the frame's W* coordinates.
pub fn induced_on_wstar(g: &GroupElement, frame: &LagrangianFrame) -> FqMatrix {
    let sp = g.space();
    let n = sp.n();
    let rows: Vec<Vector> = frame
        .wstar_basis()
        .row_vectors()
        .iter()
        .map(|b| decode_vector(sp.q(), n, frame.split(&g.act(b)).1))
        .collect();
    FqMatrix::from_rows(sp.field(), &rows).expect("n rows of length n")
}

/// (−1)^{|P^g ∩ −P|} for g* acting on W* coordinates.
pub fn sigma_sign(gstar: &FqMatrix, frame: &LagrangianFrame) -> Result<i32> {
    let sp = frame.space();
    let n = sp.n();
    if gstar.rows() != n || gstar.cols() != n {
        return Err(Error::ShapeMismatch(format!("expected an {n}×{n} matrix")));
    }
    if gstar.det().is_zero() {
        return Err(Error::SingularInput);
    }
    let q = sp.q();
    let crossings = frame.order()[..frame.half()]
        .iter()
        .filter(|&&a| {
            let image = encode_vector(q, &gstar.apply(&decode_vector(q, n, a)));
            !frame.in_p(image)
        })
        .count();
    Ok(if crossings % 2 == 0 { 1 } else { -1 })
}

/// One closed-form identity evaluated at a group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub pass: bool,
}

fn delta_pow(delta: i32, k: usize) -> i64 {
    if delta == -1 && k % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Evaluates every closed-form identity that applies to g against [`weil_values`].
pub fn special_identities(g: &GroupElement) -> Vec<IdentityCheck> {
    let sp = g.space();
    let f = sp.field();
    let p = f.p();
    let n = sp.n();
    let q = BigInt::from(sp.q());
    let delta = f.delta();
    let int = |v: BigInt| CycNumber::from_bigint(p, v);
    let qpow = |k: usize| int(q.pow(k as u32));
    let r = rho(f);
    let wv = weil_values(g);
    let td = g.theta_data();
    let k = td.dim();
    let mut out = Vec::new();

    let inv = weil_values(&g.inverse());
    out.push(IdentityCheck { name: "ω(g⁻¹)ω(g) = |V_g|", pass: &inv.omega * &wv.omega == qpow(2 * n - k) });

    let semisimple = g.is_semisimple();
    if k == 2 * n {
        let gm1 = g.mat().sub(&FqMatrix::identity(f, 2 * n));
        let chi = f.quadratic_character(gm1.det()).expect("g − 1 invertible");
        let expected = CycNumber::from_int(p, delta_pow(delta, n) * chi as i64);
        out.push(IdentityCheck { name: "g − 1 invertible: ω = δ^n χ(det(g − 1))", pass: wv.omega == expected });
    }
    if g.is_involution() {
        let m = k / 2;
        let dm = delta_pow(delta, m);
        let eta = CycNumber::from_rational(p, &BigRational::new(BigInt::from(dm), q.pow(m as u32)));
        out.push(IdentityCheck { name: "involution: η = δ^m q^{−m}", pass: wv.eta == eta });
        let minus = (qpow(n - m) - qpow(m)).scale_rational(&BigRational::new(BigInt::from(dm), BigInt::from(2)));
        out.push(IdentityCheck { name: "involution: ω₋ = δ^m (q^{n−m} − q^m)/2", pass: wv.omega_minus == minus });
    }
    if k == 1 {
        let gamma = td.theta.get(0, 0);
        let c = td.moved.basis_vectors().remove(0);
        let transvection_matches = sp.transvection(&c, gamma).map(|h| &h == g).unwrap_or(false);
        let chi = f.quadratic_character(gamma).expect("γ ≠ 0") as i64;
        let eta = r.inverse().expect("ρ ≠ 0").scale_int(chi);
        out.push(IdentityCheck { name: "transvection: η = ρ⁻¹χ(γ)", pass: transvection_matches && wv.eta == eta });
        let minus = (&qpow(n) * &eta - CycNumber::one(p)).scale_rational(&BigRational::new(BigInt::one(), BigInt::from(2)));
        out.push(IdentityCheck { name: "transvection: ω₋ = (q^n ρ⁻¹χ(γ) − 1)/2", pass: wv.omega_minus == minus });
    }
    if semisimple {
        out.push(IdentityCheck { name: "semisimple: ω = ω′", pass: wv.omega == wv.omega_prime });
        out.push(IdentityCheck { name: "semisimple: ω = q^m δ^{n−m} χ(det(g|E^⊥ − 1))", pass: semisimple_closed_form(g, &td) == wv.omega });
    }
    if let Some((a, b)) = split_first_plane(g) {
        let (ea, eb) = (eta_closed(&a), eta_closed(&b));
        out.push(IdentityCheck { name: "embedding: η(g × g′) = η(g)η(g′)", pass: &ea * &eb == wv.eta });
    }
    out
}

/// q^m δ^{n−m} χ(det(g|E^⊥ − 1)) with E the fixed space of dimension 2m.
fn semisimple_closed_form(g: &GroupElement, td: &ThetaData) -> CycNumber {
    let sp = g.space();
    let f = sp.field();
    let n = sp.n();
    let k = td.dim();
    let m = n - k / 2;
    let det = if k == 0 {
        FieldElement::ONE
    } else {
        let rows: Vec<Vector> = td
            .moved
            .basis_vectors()
            .iter()
            .map(|y| td.moved.coordinates(&g.act(y)).expect("V^{g−1} is g-stable"))
            .collect();
        FqMatrix::from_rows(f, &rows).expect("square").sub(&FqMatrix::identity(f, k)).det()
    };
    let chi = if det.is_zero() { 0 } else { f.quadratic_character(det).expect("nonzero") as i64 };
    CycNumber::from_bigint(f.p(), BigInt::from(sp.q()).pow(m as u32) * delta_pow(f.delta(), n - m) * chi)
}

/// For standard spaces with n ≥ 2: if g preserves U = span(e₁, f₁), its
/// restrictions to U and U^⊥ as elements of standard spaces.
pub fn split_first_plane(g: &GroupElement) -> Option<(GroupElement, GroupElement)> {
    let sp = g.space();
    let n = sp.n();
    if !sp.is_standard() || n < 2 {
        return None;
    }
    let f = sp.field();
    let u_idx = [0, n];
    let rest: Vec<usize> = (1..n).chain(n + 1..2 * n).collect();
    let m = g.mat();
    let zero_cross = u_idx.iter().all(|&i| rest.iter().all(|&j| m.get(i, j).is_zero() && m.get(j, i).is_zero()));
    if !zero_cross {
        return None;
    }
    let pick = |idx: &[usize]| -> Vec<Vec<u32>> {
        idx.iter().map(|&i| idx.iter().map(|&j| m.get(i, j).index()).collect()).collect()
    };
    let s1 = SympSpace::standard(f, 1).ok()?;
    let s2 = SympSpace::standard(f, n - 1).ok()?;
    Some((s1.element_from_indices(&pick(&u_idx)).ok()?, s2.element_from_indices(&pick(&rest)).ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaloisField;

    fn sp(q: u64, n: usize) -> SympSpace {
        SympSpace::standard(&GaloisField::from_q(q).unwrap(), n).unwrap()
    }

    #[test]
    fn frame_order_rule() {
        let s = sp(3, 1);
        let fr = LagrangianFrame::standard(&s);
        assert_eq!(fr.order(), &[1, 2, 0]);
        let s5 = sp(5, 1);
        let fr5 = LagrangianFrame::standard(&s5);
        assert_eq!(fr5.order(), &[1, 2, 4, 3, 0]);
        let s32 = sp(3, 2);
        let fr32 = LagrangianFrame::standard(&s32);
        assert_eq!(fr32.half(), 4);
        for k in 0..4 {
            assert_eq!(fr32.negative(fr32.order()[k]), fr32.order()[k + 4]);
        }
    }

    #[test]
    fn matrix_units_multiply() {
        let s = sp(3, 1);
        let fr = LagrangianFrame::standard(&s);
        let size = fr.size();
        let mut total = AlgebraElement::zero(&s);
        let e = e0(&fr);
        for xi in 0..s.size() {
            let x = s.vector(xi);
            let sandwich = e.mul(&AlgebraElement::basis(&s, &x)).unwrap().mul(&e).unwrap();
            if fr.w().contains(&x) {
                assert_eq!(sandwich, e);
            } else {
                assert!(sandwich.is_empty());
            }
        }
        for a in 0..size {
            total = total.add(&matrix_unit(&fr, a, a)).unwrap();
            for b in 0..size {
                let eab = matrix_unit(&fr, a, b);
                let m = to_matrix(&eab, &fr).unwrap();
                for i in 0..size {
                    for j in 0..size {
                        let expect_one = i == fr.position(a) && j == fr.position(b);
                        assert_eq!(m.entries.get(i, j).is_one(), expect_one);
                        assert!(expect_one || m.entries.get(i, j).is_zero());
                    }
                }
                for c in 0..size {
                    for d in 0..size {
                        let prod = eab.mul(&matrix_unit(&fr, c, d)).unwrap();
                        if b == c {
                            assert_eq!(prod, matrix_unit(&fr, a, d));
                        } else {
                            assert!(prod.is_empty());
                        }
                    }
                }
            }
        }
        assert_eq!(total, AlgebraElement::one(&s));
    }

    #[test]
    fn to_matrix_is_a_homomorphism_with_trace_formula() {
        let s = sp(3, 2);
        let fr = LagrangianFrame::standard(&s);
        assert!(to_matrix(&AlgebraElement::one(&s), &fr).unwrap().entries.is_identity());
        for xi in (0..s.size()).step_by(3) {
            let bx = AlgebraElement::basis(&s, &s.vector(xi));
            let tr = to_matrix(&bx, &fr).unwrap().trace();
            let expected = if xi == 0 { 9 } else { 0 };
            assert_eq!(tr, CycNumber::from_int(3, expected));
            for yi in (0..s.size()).step_by(13) {
                let by = AlgebraElement::basis(&s, &s.vector(yi));
                let lhs = to_matrix(&bx.mul(&by).unwrap(), &fr).unwrap();
                let rhs = to_matrix(&bx, &fr).unwrap().mul(&to_matrix(&by, &fr).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn j_and_minus_one() {
        for (q, n) in [(3u64, 1usize), (5, 1), (3, 2)] {
            let s = sp(q, n);
            let fr = LagrangianFrame::standard(&s);
            let j = j_matrix(&fr);
            let h = fr.half();
            for i in 0..fr.size() {
                for k in 0..fr.size() {
                    let one = (i < h && k == i + h) || (k < h && i == k + h) || (i == 2 * h && k == 2 * h);
                    assert_eq!(j.entries.get(i, k).is_one(), one);
                }
            }
            let t = t_matrix(&s.minus_one(), &fr).unwrap();
            let dn = delta_pow(s.field().delta(), n);
            assert_eq!(t, j.scale(&CycNumber::from_int(s.field().p(), dn)));
            let flat = flat_block(&j, &fr).unwrap();
            assert_eq!(flat, CycMatrix::identity(s.field().p(), h).scale(&CycNumber::from_int(s.field().p(), -1)));
        }
    }

    #[test]
    fn blocks_of_identity_and_non_centralizing_input() {
        let s = sp(5, 1);
        let fr = LagrangianFrame::standard(&s);
        let id = to_matrix(&AlgebraElement::one(&s), &fr).unwrap();
        assert!(sharp_block(&id, &fr).unwrap().is_identity());
        assert!(flat_block(&s_matrix(&s.identity(), &fr).unwrap(), &fr).unwrap().is_identity());
        let e = to_matrix(&matrix_unit(&fr, 1, 2), &fr).unwrap();
        assert_eq!(flat_block(&e, &fr).unwrap_err(), Error::NotInCentralizer);
    }

    #[test]
    fn sharp_and_flat_are_multiplicative() {
        let s = sp(3, 2);
        let fr = LagrangianFrame::standard(&s);
        let gs = s.random_elements(9, 6);
        for pair in gs.chunks(2) {
            let (a, b) = (s_matrix(&pair[0], &fr).unwrap(), s_matrix(&pair[1], &fr).unwrap());
            let ab = a.mul(&b);
            assert_eq!(flat_block(&ab, &fr).unwrap(), flat_block(&a, &fr).unwrap().mul(&flat_block(&b, &fr).unwrap()));
            assert_eq!(sharp_block(&ab, &fr).unwrap(), sharp_block(&a, &fr).unwrap().mul(&sharp_block(&b, &fr).unwrap()));
        }
    }

    #[test]
    fn eta_examples() {
        let s = sp(3, 1);
        let f = s.field();
        let fr = LagrangianFrame::standard(&s);
        assert!(eta_det(&s.identity(), &fr).unwrap().is_one());
        let minus = CycNumber::from_ratio(3, -1, 3);
        assert_eq!(eta_det(&s.minus_one(), &fr).unwrap(), minus);
        let h1 = s.transvection(&[f.zero(), f.one()], f.one()).unwrap();
        let expected = rho(f).scale_rational(&BigRational::new((-1).into(), 3.into()));
        assert_eq!(eta_det(&h1, &fr).unwrap(), expected);
        assert_eq!(eta_closed(&h1), expected);
    }

    #[test]
    fn eta_w_stable_examples() {
        let s = sp(5, 1);
        let f = s.field();
        let fr = LagrangianFrame::standard(&s);
        assert!(eta_w_stable(&s.identity(), &fr).unwrap().is_one());
        let g = s.element_from_indices(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(eta_w_stable(&g, &fr).unwrap(), CycNumber::from_ratio(5, -1, 5));
        assert_eq!(eta_closed(&g), CycNumber::from_ratio(5, -1, 5));
        let h = s.transvection(&[f.one(), f.zero()], f.elem(2).unwrap()).unwrap();
        let expected = rho(f).inverse().unwrap().scale_int(f.quadratic_character(f.elem(2).unwrap()).unwrap() as i64);
        assert_eq!(eta_w_stable(&h, &fr).unwrap(), expected);
        let off = s.transvection(&[f.zero(), f.one()], f.one()).unwrap();
        assert_eq!(eta_w_stable(&off, &fr).unwrap_err(), Error::WNotInvariant);
    }

    #[test]
    fn eta_w_stable_agrees_on_stabilizer() {
        let s = sp(3, 2);
        let fr = LagrangianFrame::standard(&s);
        let w = fr.w();
        let mut found = 0;
        for g in s.random_elements(17, 4000) {
            if g.stabilizes(&w) {
                found += 1;
                assert_eq!(eta_w_stable(&g, &fr).unwrap(), eta_closed(&g));
                // [s(g)] is monomial for W-stabilizing g
                let m = s_matrix(&g, &fr).unwrap();
                for i in 0..fr.size() {
                    assert_eq!((0..fr.size()).filter(|&j| !m.entries.get(i, j).is_zero()).count(), 1);
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn sigma_sign_matches_chi() {
        let f3 = GaloisField::prime(3).unwrap();
        let s = SympSpace::standard(&f3, 1).unwrap();
        let fr = LagrangianFrame::standard(&s);
        assert_eq!(sigma_sign(&FqMatrix::identity(&f3, 1), &fr).unwrap(), 1);
        assert_eq!(sigma_sign(&FqMatrix::from_indices(&f3, &[vec![2]]).unwrap(), &fr).unwrap(), -1);
        assert_eq!(sigma_sign(&FqMatrix::zeros(&f3, 1, 1), &fr).unwrap_err(), Error::SingularInput);
        let f9 = GaloisField::from_q(9).unwrap();
        let s9 = SympSpace::standard(&f9, 1).unwrap();
        let fr9 = LagrangianFrame::standard(&s9);
        let alpha = FqMatrix::from_rows(&f9, &[vec![f9.primitive_element()]]).unwrap();
        assert_eq!(sigma_sign(&alpha, &fr9).unwrap(), -1);
        let s32 = SympSpace::standard(&f3, 2).unwrap();
        let fr32 = LagrangianFrame::standard(&s32);
        for code in 0..81usize {
            let d = decode_vector(3, 4, code);
            let m = FqMatrix::from_rows(&f3, &[d[..2].to_vec(), d[2..].to_vec()]).unwrap();
            if !m.det().is_zero() {
                assert_eq!(sigma_sign(&m, &fr32).unwrap(), f3.quadratic_character(m.det()).unwrap());
            }
        }
    }

    #[test]
    fn weil_value_examples() {
        let s = sp(3, 1);
        let wv = weil_values(&s.identity());
        assert_eq!(wv.omega, CycNumber::from_int(3, 3));
        assert_eq!(wv.omega_minus, CycNumber::from_int(3, 1));
        assert_eq!(weil_values(&s.minus_one()).omega, CycNumber::from_int(3, -1));
        let g = s.element_from_indices(&[vec![0, 1], vec![2, 0]]).unwrap();
        let wv = weil_values(&g);
        assert_eq!(wv.omega, CycNumber::from_int(3, 1));
        assert_eq!(wv.omega_minus, CycNumber::from_int(3, 1));
        assert!(wv.omega_plus.is_zero());
        assert_eq!(wv.eta, eta_closed(&g));
    }

    #[test]
    fn omega_minus_is_trace_of_flat_block() {
        for (q, n) in [(3u64, 1usize), (5, 1), (3, 2)] {
            let s = sp(q, n);
            let fr = LagrangianFrame::standard(&s);
            for g in s.random_elements(q + n as u64, 12) {
                let t = t_matrix(&g, &fr).unwrap();
                let wv = weil_values(&g);
                assert_eq!(wv.omega, t.trace());
                assert_eq!(wv.omega_minus, flat_block(&t, &fr).unwrap().trace());
                assert_eq!(wv.omega_plus, sharp_block(&t, &fr).unwrap().trace());
            }
        }
    }

    #[test]
    fn general_gram_frames() {
        let f = GaloisField::prime(5).unwrap();
        let gram = FqMatrix::from_indices(&f, &[vec![0, 2], vec![3, 0]]).unwrap();
        let s = SympSpace::from_gram(&f, gram).unwrap();
        let fr = LagrangianFrame::standard(&s);
        for g in s.random_elements(2, 10) {
            assert_eq!(eta_det(&g, &fr).unwrap(), eta_closed(&g));
        }
    }

    #[test]
    fn special_identities_hold_on_sp23() {
        let s = sp(3, 1);
        for g in s.enumerate_group().unwrap() {
            for c in special_identities(&g) {
                assert!(c.pass, "{} failed at {g:?}", c.name);
            }
        }
    }

    #[test]
    fn involution_negating_a_plane() {
        let s1 = sp(3, 1);
        let s2 = sp(3, 2);
        let g = s2.direct_sum(&s1.minus_one(), &s1.identity()).unwrap();
        assert_eq!(weil_values(&g).omega, CycNumber::from_int(3, -3));
        let checks = special_identities(&g);
        assert!(checks.iter().any(|c| c.name.starts_with("embedding")));
        assert!(checks.iter().all(|c| c.pass));
    }
}
