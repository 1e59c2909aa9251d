//! The symplectic space (V, φ), its isometry group, subspaces, theta forms
//! and transvections.
//!
//! Vectors are row vectors and group elements act on the right: `x^g = x·M`,
//! so `(gh).mat = g.mat · h.mat`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::cyclotomic::{psi, CycNumber};
use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField};
use crate::linalg::{decode_vector, dot, encode_vector, span_elements, vec_scale, FqMatrix, Vector};

/// Default cap on enumerated group orders; admits Sp(4,3).
pub const DEFAULT_GROUP_CAP: u128 = 60_000;

/// Number of random transvections multiplied together by [`SympSpace::random_element`].
pub const RANDOM_WORD_LENGTH: usize = 40;

struct SpaceInner {
    field: GaloisField,
    n: usize,
    gram: FqMatrix,
    gram_inv: FqMatrix,
    standard: bool,
}

/// A 2n-dimensional space over GF(q) with a nondegenerate alternating form.
#[derive(Clone)]
pub struct SympSpace(Arc<SpaceInner>);

impl PartialEq for SympSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field.desc() == other.0.field.desc() && self.0.gram == other.0.gram)
    }
}

impl Eq for SympSpace {}

impl fmt::Debug for SympSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SympSpace(q={}, n={}, standard={})", self.q(), self.n(), self.0.standard)
    }
}

/// |Sp(2n, q)| = q^(n²) Π_{i=1..n} (q^(2i) − 1).
pub fn group_order(q: u64, n: usize) -> u128 {
    let q = q as u128;
    let mut order = q.pow((n * n) as u32);
    for i in 1..=n {
        order *= q.pow(2 * i as u32) - 1;
    }
    order
}

impl SympSpace {
    /// Gram `[[0, I], [−I, 0]]` on the basis e₁..e_n, f₁..f_n.
    pub fn standard(field: &GaloisField, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let mut gram = FqMatrix::zeros(field, 2 * n, 2 * n);
        for i in 0..n {
            gram.set(i, n + i, field.one());
            gram.set(n + i, i, field.neg(field.one()));
        }
        let gram_inv = gram.neg();
        Ok(SympSpace(Arc::new(SpaceInner { field: field.clone(), n, gram, gram_inv, standard: true })))
    }

    /// A space with an arbitrary nondegenerate alternating Gram matrix.
    pub fn from_gram(field: &GaloisField, gram: FqMatrix) -> Result<Self> {
        let d = gram.rows();
        if !gram.is_square() || d == 0 || d % 2 == 1 {
            return Err(Error::ShapeMismatch("gram must be square of even size".into()));
        }
        let alternating = gram.transpose() == gram.neg() && (0..d).all(|i| gram.get(i, i).is_zero());
        if !alternating {
            return Err(Error::InvalidInput("gram is not alternating".into()));
        }
        let gram_inv = gram.inverse().map_err(|_| Error::InvalidInput("gram is degenerate".into()))?;
        let standard = SympSpace::standard(field, d / 2)?.gram() == &gram;
        Ok(SympSpace(Arc::new(SpaceInner { field: field.clone(), n: d / 2, gram, gram_inv, standard })))
    }

    pub fn field(&self) -> &GaloisField {
        &self.0.field
    }

    pub fn q(&self) -> u32 {
        self.0.field.q()
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn dim(&self) -> usize {
        2 * self.0.n
    }

    pub fn gram(&self) -> &FqMatrix {
        &self.0.gram
    }

    pub fn is_standard(&self) -> bool {
        self.0.standard
    }

    /// |V| = q^(2n).
    pub fn size(&self) -> usize {
        (self.q() as usize).pow(self.dim() as u32)
    }

    pub fn order(&self) -> u128 {
        group_order(self.q() as u64, self.n())
    }

    pub fn index(&self, v: &[FieldElement]) -> usize {
        encode_vector(self.q(), v)
    }

    pub fn vector(&self, index: usize) -> Vector {
        decode_vector(self.q(), self.dim(), index)
    }

    pub fn zero_vector(&self) -> Vector {
        vec![FieldElement::ZERO; self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = self.zero_vector();
        v[i] = FieldElement::ONE;
        v
    }

    /// φ(x, y) = x·Φ·yᵀ.
    pub fn phi(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        dot(self.field(), &self.gram().apply(x), y)
    }

    /// f(x, y) = ψ(φ(x, y)).
    pub fn f_pair(&self, x: &[FieldElement], y: &[FieldElement]) -> CycNumber {
        psi(self.field(), self.phi(x, y))
    }

    /// Exponent of ζ in f(x, y).
    pub fn f_exponent(&self, x: &[FieldElement], y: &[FieldElement]) -> u32 {
        self.field().trace_int(self.phi(x, y))
    }

    fn check_shape(&self, mat: &FqMatrix) -> Result<()> {
        let d = self.dim();
        if mat.rows() != d || mat.cols() != d || mat.field().desc() != self.field().desc() {
            return Err(Error::ShapeMismatch(format!("expected a {d}×{d} matrix over GF({})", self.q())));
        }
        Ok(())
    }

    pub fn is_symplectic(&self, mat: &FqMatrix) -> Result<bool> {
        self.check_shape(mat)?;
        Ok(&mat.mul(self.gram()).mul(&mat.transpose()) == self.gram())
    }

    pub fn element(&self, mat: FqMatrix) -> Result<GroupElement> {
        if !self.is_symplectic(&mat)? {
            return Err(Error::NotSymplectic);
        }
        Ok(GroupElement { space: self.clone(), mat })
    }

    pub fn element_from_indices(&self, rows: &[Vec<u32>]) -> Result<GroupElement> {
        self.element(FqMatrix::from_indices(self.field(), rows)?)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { space: self.clone(), mat: FqMatrix::identity(self.field(), self.dim()) }
    }

    pub fn minus_one(&self) -> GroupElement {
        GroupElement { space: self.clone(), mat: FqMatrix::identity(self.field(), self.dim()).neg() }
    }

    /// Φ·mᵀ·Φ⁻¹, characterised by φ(x·m, y) = φ(x, y·ad(m)).
    pub fn adjoint(&self, mat: &FqMatrix) -> FqMatrix {
        self.gram().mul(&mat.transpose()).mul(&self.0.gram_inv)
    }

    /// v ↦ v − γ⁻¹φ(v, c)c.
    pub fn transvection(&self, c: &[FieldElement], gamma: FieldElement) -> Result<GroupElement> {
        let f = self.field();
        if c.len() != self.dim() {
            return Err(Error::ShapeMismatch("transvection vector has the wrong length".into()));
        }
        if gamma.is_zero() || c.iter().all(|x| x.is_zero()) {
            return Err(Error::DegenerateTransvection);
        }
        // φ(v, c) = v·w with w = Φcᵀ = −(c·Φ)ᵀ since Φ is alternating
        let col: Vector = self.gram().apply(c).iter().map(|&x| f.neg(x)).collect();
        let ginv = f.inv(gamma)?;
        let mut mat = FqMatrix::identity(f, self.dim());
        for (i, &ci) in col.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, &cj) in c.iter().enumerate() {
                let v = f.sub(mat.get(i, j), f.mul(ginv, f.mul(ci, cj)));
                mat.set(i, j, v);
            }
        }
        Ok(GroupElement { space: self.clone(), mat })
    }

    pub fn subspace(&self, vectors: &[Vector]) -> Result<Subspace> {
        if vectors.iter().any(|v| v.len() != self.dim()) {
            return Err(Error::ShapeMismatch("subspace vector has the wrong length".into()));
        }
        let basis = if vectors.is_empty() {
            FqMatrix::empty(self.field(), self.dim())
        } else {
            FqMatrix::from_rows(self.field(), vectors)?.row_space()
        };
        Ok(Subspace { space: self.clone(), basis })
    }

    fn subspace_from_matrix(&self, m: &FqMatrix) -> Subspace {
        let basis = if m.rows() == 0 { FqMatrix::empty(self.field(), self.dim()) } else { m.row_space() };
        Subspace { space: self.clone(), basis }
    }

    pub fn zero_subspace(&self) -> Subspace {
        self.subspace_from_matrix(&FqMatrix::empty(self.field(), self.dim()))
    }

    pub fn whole(&self) -> Subspace {
        self.subspace_from_matrix(&FqMatrix::identity(self.field(), self.dim()))
    }

    /// {x : φ(u, x) = 0 for all u ∈ U}.
    pub fn perp(&self, u: &Subspace) -> Subspace {
        if u.dim() == 0 {
            return self.whole();
        }
        let m = u.basis.mul(self.gram());
        self.subspace_from_matrix(&m.right_kernel())
    }

    /// Canonical representatives of the 1-dimensional subspaces of `u`,
    /// first nonzero coordinate 1, in vector-encoding order.
    pub fn line_representatives(&self, u: &Subspace) -> Vec<Vector> {
        let mut reps: Vec<Vector> = u
            .elements()
            .into_iter()
            .filter(|v| v.iter().find(|x| !x.is_zero()) == Some(&FieldElement::ONE))
            .collect();
        reps.sort_by_key(|v| self.index(v));
        reps
    }

    /// Every transvection, each exactly once, in canonical (c, γ) order.
    pub fn all_transvections(&self) -> Vec<GroupElement> {
        let whole = self.whole();
        let f = self.field();
        let mut out = Vec::new();
        for c in self.line_representatives(&whole) {
            for gamma in f.nonzero_elements() {
                out.push(self.transvection(&c, gamma).expect("nonzero inputs"));
            }
        }
        out
    }

    fn small_generators(&self) -> Vec<GroupElement> {
        let f = self.field();
        let d = self.dim();
        let mut lines = Vec::new();
        for i in 0..d {
            lines.push(self.basis_vector(i));
            for j in i + 1..d {
                let mut v = self.basis_vector(i);
                v[j] = FieldElement::ONE;
                lines.push(v);
            }
        }
        let gammas = [f.one(), f.nonsquare()];
        lines
            .iter()
            .flat_map(|c| gammas.iter().map(move |&g| (c.clone(), g)))
            .map(|(c, g)| self.transvection(&c, g).expect("nonzero inputs"))
            .collect()
    }

    /// All group elements, as the closure of a set of transvections.
    pub fn enumerate_group(&self) -> Result<Vec<GroupElement>> {
        self.enumerate_group_with_cap(DEFAULT_GROUP_CAP)
    }

    pub fn enumerate_group_with_cap(&self, cap: u128) -> Result<Vec<GroupElement>> {
        Ok(self.enumerate_with_generators(cap)?.0)
    }

    /// All group elements in breadth-first order, with the generating set used.
    pub fn enumerate_with_generators(&self, cap: u128) -> Result<(Vec<GroupElement>, Vec<GroupElement>)> {
        let order = self.order();
        if order > cap {
            return Err(Error::GroupTooLarge { order, cap });
        }
        let closure = |gens: &[GroupElement]| {
            let mut seen: HashSet<FqMatrix> = HashSet::new();
            let mut out = Vec::new();
            let mut queue = VecDeque::new();
            let id = self.identity();
            seen.insert(id.mat.clone());
            queue.push_back(id);
            while let Some(g) = queue.pop_front() {
                for h in gens {
                    let gh = g.mul(h);
                    if seen.insert(gh.mat.clone()) {
                        queue.push_back(gh);
                    }
                }
                out.push(g);
            }
            out
        };
        let mut gens = self.small_generators();
        let mut all = closure(&gens);
        if all.len() as u128 != order {
            gens = self.all_transvections();
            all = closure(&gens);
        }
        debug_assert_eq!(all.len() as u128, order);
        Ok((all, gens))
    }

    /// A pseudo-uniform element: a product of random transvections.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> GroupElement {
        let f = self.field();
        let q = self.q();
        let mut g = self.identity();
        for _ in 0..RANDOM_WORD_LENGTH {
            let c = loop {
                let v = self.vector(rng.gen_range(0..self.size()));
                if v.iter().any(|x| !x.is_zero()) {
                    break v;
                }
            };
            let gamma = f.elem(rng.gen_range(1..q)).expect("in range");
            g = g.mul(&self.transvection(&c, gamma).expect("nonzero inputs"));
        }
        g
    }

    /// `count` pseudo-uniform elements from a seeded ChaCha8 stream.
    pub fn random_elements(&self, seed: u64, count: usize) -> Vec<GroupElement> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.random_element(&mut rng)).collect()
    }

    /// Block-diagonal embedding of Sp(U) × Sp(U′) for standard spaces,
    /// with U spanned by the first n₁ e's and f's and U′ by the rest.
    pub fn direct_sum(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let (n1, n2) = (g.space.n(), h.space.n());
        if !self.is_standard() || !g.space.is_standard() || !h.space.is_standard() || n1 + n2 != self.n() {
            return Err(Error::SpaceMismatch);
        }
        let n = self.n();
        // coordinate of local index i of a summand with offset `off` and half-dimension `m`
        let pos = |i: usize, m: usize, off: usize| if i < m { off + i } else { n + off + (i - m) };
        let mut mat = FqMatrix::zeros(self.field(), 2 * n, 2 * n);
        for (el, m, off) in [(g, n1, 0), (h, n2, n1)] {
            for i in 0..2 * m {
                for j in 0..2 * m {
                    mat.set(pos(i, m, off), pos(j, m, off), el.mat.get(i, j));
                }
            }
        }
        self.element(mat)
    }
}

/// An element of Sp(V), acting on row vectors from the right.
#[derive(Clone)]
pub struct GroupElement {
    space: SympSpace,
    mat: FqMatrix,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat && self.space == other.space
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({:?})", self.mat.to_indices())
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.mat.to_indices().serialize(s)
    }
}

impl GroupElement {
    pub fn space(&self) -> &SympSpace {
        &self.space
    }

    pub fn mat(&self) -> &FqMatrix {
        &self.mat
    }

    pub fn to_indices(&self) -> Vec<Vec<u32>> {
        self.mat.to_indices()
    }

    /// x^g.
    pub fn act(&self, x: &[FieldElement]) -> Vector {
        self.mat.apply(x)
    }

    /// The product gh: first g, then h.
    pub fn mul(&self, h: &GroupElement) -> GroupElement {
        GroupElement { space: self.space.clone(), mat: self.mat.mul(&h.mat) }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { space: self.space.clone(), mat: self.space.adjoint(&self.mat) }
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement { space: self.space.clone(), mat: self.mat.neg() }
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        GroupElement { space: self.space.clone(), mat: base.mat.pow(k.unsigned_abs()) }
    }

    /// x⁻¹·g·x.
    pub fn conjugate_by(&self, x: &GroupElement) -> GroupElement {
        x.inverse().mul(self).mul(x)
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    /// g² = 1 and g ≠ 1.
    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.mat.mul(&self.mat).is_identity()
    }

    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut acc = self.clone();
        while !acc.is_identity() {
            acc = acc.mul(self);
            k += 1;
        }
        k
    }

    fn minus_identity(&self) -> FqMatrix {
        self.mat.sub(&FqMatrix::identity(self.space.field(), self.space.dim()))
    }

    /// V^{g−1}, the image of g − 1.
    pub fn moved_space(&self) -> Subspace {
        self.space.subspace_from_matrix(&self.minus_identity())
    }

    /// V_g, the kernel of g − 1.
    pub fn fixed_space(&self) -> Subspace {
        self.space.subspace_from_matrix(&self.minus_identity().left_kernel())
    }

    pub fn stabilizes(&self, u: &Subspace) -> bool {
        u.basis.row_vectors().iter().all(|v| u.contains(&self.act(v)))
    }

    /// g is semisimple iff its minimal polynomial is squarefree.
    pub fn is_semisimple(&self) -> bool {
        crate::linalg::fpoly::is_squarefree(self.space.field(), &self.mat.min_poly())
    }

    /// Theta form on V^{g−1}; preimages solve x(g − 1) = y with free coordinates zero.
    pub fn theta_data(&self) -> ThetaData {
        let sp = &self.space;
        let f = sp.field();
        let moved = self.moved_space();
        let a = self.minus_identity();
        let ys = moved.basis.row_vectors();
        let xs: Vec<Vector> = ys.iter().map(|y| a.solve_left(y).expect("y lies in the image")).collect();
        let k = ys.len();
        let mut theta = FqMatrix::zeros(f, k, k);
        for (i, y) in ys.iter().enumerate() {
            for (j, x) in xs.iter().enumerate() {
                theta.set(i, j, sp.phi(y, x));
            }
        }
        let half = f.inv(f.from_int(2)).expect("odd characteristic");
        let b_sym = theta.add(&theta.transpose()).scale(half);
        ThetaData { g: self.clone(), moved, theta, b_sym, preimages: xs }
    }
}

/// A subspace of V held by its reduced echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    space: SympSpace,
    basis: FqMatrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({:?})", self.basis.to_indices())
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.to_indices().serialize(s)
    }
}

impl Subspace {
    pub fn space(&self) -> &SympSpace {
        &self.space
    }

    pub fn basis(&self) -> &FqMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn size(&self) -> usize {
        (self.space.q() as usize).pow(self.dim() as u32)
    }

    /// All vectors, in coordinate-encoding order relative to the basis.
    pub fn elements(&self) -> Vec<Vector> {
        if self.dim() == 0 {
            return vec![self.space.zero_vector()];
        }
        span_elements(&self.basis)
    }

    /// Coordinates c with v = c·basis, if v lies in the subspace.
    pub fn coordinates(&self, v: &[FieldElement]) -> Option<Vector> {
        if self.dim() == 0 {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        self.basis.solve_left(v)
    }

    pub fn vector_from_coordinates(&self, c: &[FieldElement]) -> Vector {
        if self.dim() == 0 {
            return self.space.zero_vector();
        }
        self.basis.apply(c)
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        self.space.subspace_from_matrix(&self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let sp = &self.space;
        sp.perp(&sp.perp(self).sum(&sp.perp(other)))
    }

    pub fn is_isotropic(&self) -> bool {
        let vs = self.basis_vectors();
        vs.iter().all(|x| vs.iter().all(|y| self.space.phi(x, y).is_zero()))
    }

    /// Gram of −φ restricted to the basis.
    fn minus_phi_gram(&self) -> FqMatrix {
        self.basis.mul(self.space.gram()).mul(&self.basis.transpose()).neg()
    }
}

/// The theta form of g on V^{g−1}, over the echelon basis y₁..y_k.
#[derive(Clone, Debug)]
pub struct ThetaData {
    pub g: GroupElement,
    pub moved: Subspace,
    /// theta[i][j] = Θ_g(y_i, y_j) = φ(y_i, x_j) with x_j(g − 1) = y_j.
    pub theta: FqMatrix,
    pub b_sym: FqMatrix,
    pub preimages: Vec<Vector>,
}

impl ThetaData {
    pub fn dim(&self) -> usize {
        self.moved.dim()
    }

    /// Q_g on coordinates relative to the moved basis.
    pub fn q_coords(&self, c: &[FieldElement]) -> FieldElement {
        if c.is_empty() {
            return FieldElement::ZERO;
        }
        dot(self.g.space.field(), c, &self.theta.apply(c))
    }

    /// Q_g(y) for y ∈ V^{g−1}.
    pub fn q_of(&self, y: &[FieldElement]) -> Option<FieldElement> {
        self.moved.coordinates(y).map(|c| self.q_coords(&c))
    }

    /// Θ_g(u, v) for u, v ∈ V^{g−1}.
    pub fn form(&self, u: &[FieldElement], v: &[FieldElement]) -> Option<FieldElement> {
        let (a, b) = (self.moved.coordinates(u)?, self.moved.coordinates(v)?);
        Some(dot(self.g.space.field(), &self.theta.apply(&a), &b))
    }

    /// det Θ_g; 1 for the empty form.
    pub fn det(&self) -> FieldElement {
        if self.dim() == 0 {
            FieldElement::ONE
        } else {
            self.theta.transpose().det()
        }
    }

    /// χ(Θ_g) = χ(det Θ_g), with value 1 for the empty form.
    pub fn chi(&self) -> i32 {
        self.g.space.field().quadratic_character(self.det()).expect("theta form is nondegenerate")
    }

    /// Whether Q_g vanishes on all of V^{g−1}.
    pub fn q_vanishes(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.b_sym.get(i, j).is_zero()))
    }

    /// Nondegeneracy and Θ − Θᵀ = −φ on the moved space.
    pub fn check_invariants(&self) -> bool {
        if self.dim() == 0 {
            return true;
        }
        let f = self.g.space.field();
        let half = f.inv(f.from_int(2)).expect("odd characteristic");
        !self.det().is_zero()
            && self.theta.sub(&self.theta.transpose()) == self.moved.minus_phi_gram()
            && self.b_sym == self.theta.add(&self.theta.transpose()).scale(half)
    }
}

/// The unique g with V^{g−1} = U and Θ_g = T (Gram on the echelon basis of U).
pub fn group_from_theta(u: &Subspace, t: &FqMatrix) -> Result<GroupElement> {
    let sp = u.space();
    let f = sp.field();
    let k = u.dim();
    if t.rows() != k || t.cols() != k {
        return Err(Error::NotAThetaForm(format!("expected a {k}×{k} Gram matrix")));
    }
    if k == 0 {
        return Ok(sp.identity());
    }
    if t.sub(&t.transpose()) != u.minus_phi_gram() {
        return Err(Error::NotAThetaForm("skew part is not −φ".into()));
    }
    let tinv_t = t.inverse().map_err(|_| Error::NotAThetaForm("degenerate".into()))?.transpose();
    // v(g − 1) = z(v) with T(u, z(v)) = φ(u, v): z(v) = v·Φᵀ·Ubᵀ·T⁻ᵀ·Ub
    let ub = u.basis();
    let delta = sp.gram().transpose().mul(&ub.transpose()).mul(&tinv_t).mul(ub);
    let mat = FqMatrix::identity(f, sp.dim()).add(&delta);
    sp.element(mat).map_err(|_| Error::NotAThetaForm("resulting map is not symplectic".into()))
}

/// Scales c so its first nonzero coordinate is 1, adjusting γ by λ².
pub fn canonical_transvection(f: &GaloisField, c: &[FieldElement], gamma: FieldElement) -> Result<(Vector, FieldElement)> {
    let lead = *c.iter().find(|x| !x.is_zero()).ok_or(Error::DegenerateTransvection)?;
    if gamma.is_zero() {
        return Err(Error::DegenerateTransvection);
    }
    let lambda = f.inv(lead)?;
    Ok((vec_scale(f, lambda, c), f.mul(f.mul(lambda, lambda), gamma)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(q: u64, n: usize) -> SympSpace {
        SympSpace::standard(&GaloisField::from_q(q).unwrap(), n).unwrap()
    }

    fn v(space: &SympSpace, xs: &[u32]) -> Vector {
        xs.iter().map(|&x| space.field().elem(x).unwrap()).collect()
    }

    #[test]
    fn gram_convention() {
        let s = sp(3, 1);
        let (e1, f1) = (v(&s, &[1, 0]), v(&s, &[0, 1]));
        assert_eq!(s.f_pair(&e1, &f1), CycNumber::zeta_pow(3, 1));
        assert!(s.f_pair(&e1, &e1).is_one());
        assert_eq!(s.f_pair(&f1, &e1), s.f_pair(&e1, &f1).inverse().unwrap());
    }

    #[test]
    fn f_pair_properties_exhaustive() {
        let s = sp(3, 1);
        let vs: Vec<Vector> = (0..s.size()).map(|i| s.vector(i)).collect();
        let f = s.field();
        for x in &vs {
            // nondegenerate: f(x, ·) ≡ 1 only for x = 0
            let trivial = vs.iter().all(|y| s.f_pair(x, y).is_one());
            assert_eq!(trivial, x.iter().all(|c| c.is_zero()));
            for y in &vs {
                assert_eq!(s.f_pair(y, x), s.f_pair(x, y).conj());
                for z in &vs {
                    let xy = crate::linalg::vec_add(f, x, y);
                    assert_eq!(s.f_pair(&xy, z), s.f_pair(x, z) * s.f_pair(y, z));
                }
            }
        }
    }

    #[test]
    fn symplectic_examples() {
        let s = sp(3, 1);
        let f = s.field();
        assert!(s.is_symplectic(&FqMatrix::identity(f, 2)).unwrap());
        assert!(s.is_symplectic(&FqMatrix::from_indices(f, &[vec![1, 1], vec![0, 1]]).unwrap()).unwrap());
        assert!(!s.is_symplectic(&FqMatrix::from_indices(f, &[vec![2, 0], vec![0, 1]]).unwrap()).unwrap());
        assert!(matches!(s.is_symplectic(&FqMatrix::identity(f, 3)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn transvection_example() {
        let s = sp(3, 1);
        let h = s.transvection(&v(&s, &[0, 1]), s.field().one()).unwrap();
        assert_eq!(h.to_indices(), vec![vec![1, 2], vec![0, 1]]);
        assert!(h.pow(3).is_identity());
        assert_eq!(h.moved_space(), s.subspace(&[v(&s, &[0, 1])]).unwrap());
        assert_eq!(h.fixed_space(), h.moved_space());
        assert_eq!(s.transvection(&v(&s, &[0, 0]), s.field().one()).unwrap_err(), Error::DegenerateTransvection);
        assert_eq!(s.transvection(&v(&s, &[1, 0]), s.field().zero()).unwrap_err(), Error::DegenerateTransvection);
    }

    #[test]
    fn moved_and_fixed_of_central_elements() {
        let s = sp(5, 2);
        assert_eq!(s.identity().moved_space().dim(), 0);
        assert_eq!(s.identity().fixed_space(), s.whole());
        assert_eq!(s.minus_one().moved_space(), s.whole());
        assert_eq!(s.minus_one().fixed_space().dim(), 0);
        assert_eq!(s.perp(&s.zero_subspace()), s.whole());
        assert_eq!(s.perp(&s.whole()).dim(), 0);
    }

    #[test]
    fn isotropic_line_is_self_perpendicular() {
        let s = sp(3, 1);
        let l = s.subspace(&[v(&s, &[0, 1])]).unwrap();
        assert_eq!(s.perp(&l), l);
    }

    #[test]
    fn adjoint_properties() {
        let s = sp(3, 2);
        let f = s.field();
        assert!(s.adjoint(&FqMatrix::identity(f, 4)).is_identity());
        let m = FqMatrix::from_indices(f, &[vec![1, 2, 0, 1], vec![0, 1, 1, 2], vec![2, 2, 1, 0], vec![1, 0, 0, 2]]).unwrap();
        assert_eq!(s.adjoint(&s.adjoint(&m)), m);
        for x in 0..s.size() {
            let xv = s.vector(x);
            for y in (0..s.size()).step_by(7) {
                let yv = s.vector(y);
                assert_eq!(s.phi(&m.apply(&xv), &yv), s.phi(&xv, &s.adjoint(&m).apply(&yv)));
            }
        }
        for g in s.random_elements(3, 10) {
            assert!(s.adjoint(g.mat()).mul(g.mat()).is_identity());
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(sp(3, 1).enumerate_group().unwrap().len(), 24);
        assert_eq!(sp(5, 1).enumerate_group().unwrap().len(), 120);
        assert_eq!(group_order(3, 2), 51840);
        assert_eq!(sp(5, 2).enumerate_group().unwrap_err(), Error::GroupTooLarge { order: group_order(5, 2), cap: DEFAULT_GROUP_CAP });
    }

    #[test]
    fn sp23_brute_force_count() {
        // all 2×2 matrices over GF(3) with det 1
        let s = sp(3, 1);
        let f = s.field();
        let mut count = 0;
        for code in 0..81usize {
            let d = decode_vector(3, 4, code);
            let m = FqMatrix::from_rows(f, &[d[..2].to_vec(), d[2..].to_vec()]).unwrap();
            if m.det() == f.one() {
                count += 1;
                assert!(s.is_symplectic(&m).unwrap());
            }
        }
        assert_eq!(count, 24);
    }

    fn check_theta(g: &GroupElement) {
        let s = g.space();
        let td = g.theta_data();
        assert!(td.check_invariants(), "{g:?}");
        assert_eq!(g.fixed_space(), s.perp(&g.moved_space()));
        // definition: Θ(x(g−1), y(g−1)) = φ(x(g−1), y), independent of preimages
        let f = s.field();
        let a = g.mat().sub(&FqMatrix::identity(f, s.dim()));
        for xi in (0..s.size()).step_by(5) {
            let x = s.vector(xi);
            for yi in (0..s.size()).step_by(11) {
                let y = s.vector(yi);
                let (xm, ym) = (a.apply(&x), a.apply(&y));
                assert_eq!(td.form(&xm, &ym).unwrap(), s.phi(&xm, &y));
            }
            // Q_g(x(g−1)) = φ(x^g, x)
            assert_eq!(td.q_of(&a.apply(&x)).unwrap(), s.phi(&g.act(&x), &x));
        }
        if !g.is_identity() {
            assert_eq!(&group_from_theta(&td.moved, &td.theta).unwrap(), g);
        }
        if td.q_vanishes() {
            assert!(g.mat().mul(g.mat()).is_identity());
        }
    }

    #[test]
    fn theta_invariants_sp23() {
        for g in sp(3, 1).enumerate_group().unwrap() {
            check_theta(&g);
        }
    }

    #[test]
    fn theta_invariants_random_sp43() {
        for g in sp(3, 2).random_elements(11, 60) {
            check_theta(&g);
        }
    }

    #[test]
    fn theta_examples() {
        let s = sp(5, 2);
        let f = s.field();
        let c = v(&s, &[1, 2, 0, 3]);
        let gamma = f.elem(3).unwrap();
        let h = s.transvection(&c, gamma).unwrap();
        let td = h.theta_data();
        let coord = td.moved.coordinates(&c).unwrap()[0];
        // Θ(ξc, ξc) = ξ²γ, where c = coord·y₁
        assert_eq!(td.q_of(&c).unwrap(), gamma);
        assert_eq!(td.theta.get(0, 0), f.div(gamma, f.mul(coord, coord)).unwrap());
        assert!(s.minus_one().theta_data().q_vanishes());
        let g = s.random_elements(5, 30).into_iter().find(|g| g.fixed_space().dim() == 0).unwrap();
        let gm1 = g.mat().sub(&FqMatrix::identity(f, 4));
        // moved basis is e₁..f_n, so Θ = Φ·((g − 1)⁻¹)ᵀ and det Θ = det(g − 1)⁻¹
        assert_eq!(g.theta_data().theta, s.gram().mul(&gm1.inverse().unwrap().transpose()));
        assert_eq!(g.theta_data().det(), f.inv(gm1.det()).unwrap());
    }

    #[test]
    fn group_from_theta_examples() {
        let s = sp(3, 1);
        let f = s.field();
        let zero = s.zero_subspace();
        assert!(group_from_theta(&zero, &FqMatrix::empty(f, 0)).unwrap().is_identity());
        let c = v(&s, &[0, 1]);
        let line = s.subspace(std::slice::from_ref(&c)).unwrap();
        for gamma in f.nonzero_elements() {
            let t = FqMatrix::from_rows(f, &[vec![gamma]]).unwrap();
            assert_eq!(group_from_theta(&line, &t).unwrap(), s.transvection(&c, gamma).unwrap());
        }
        let bad = FqMatrix::identity(f, 2);
        assert!(matches!(group_from_theta(&s.whole(), &bad), Err(Error::NotAThetaForm(_))));
    }

    #[test]
    fn direct_sum_embeds_blocks() {
        let s1 = sp(3, 1);
        let s2 = sp(3, 2);
        let g = s1.transvection(&v(&s1, &[1, 1]), s1.field().one()).unwrap();
        let h = s1.minus_one();
        let gh = s2.direct_sum(&g, &h).unwrap();
        assert_eq!(gh.moved_space().dim(), 3);
        assert_eq!(gh.act(&v(&s2, &[0, 1, 0, 0])), v(&s2, &[0, 2, 0, 0]));
    }

    #[test]
    fn canonical_transvection_identifies_scalings() {
        let s = sp(5, 1);
        let f = s.field();
        let c = v(&s, &[0, 3]);
        let gamma = f.elem(2).unwrap();
        let (c1, g1) = canonical_transvection(f, &c, gamma).unwrap();
        assert_eq!(c1, v(&s, &[0, 1]));
        assert_eq!(s.transvection(&c1, g1).unwrap(), s.transvection(&c, gamma).unwrap());
    }
}
