//! Dense matrices and vectors over GF(q), row-vector convention.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField};

pub type Vector = Vec<FieldElement>;

#[derive(Clone)]
pub struct FqMatrix {
    field: GaloisField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl PartialEq for FqMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for FqMatrix {}

impl Hash for FqMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i).iter().map(|x| x.index()).collect::<Vec<_>>())).finish()
    }
}

impl FqMatrix {
    pub fn zeros(field: &GaloisField, rows: usize, cols: usize) -> Self {
        FqMatrix { field: field.clone(), rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(field: &GaloisField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(field: &GaloisField, rows: &[Vector]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        if rows.iter().flatten().any(|x| x.index() >= field.q()) {
            return Err(Error::ShapeMismatch("entry outside the field".into()));
        }
        Ok(FqMatrix { field: field.clone(), rows: rows.len(), cols, data: rows.concat() })
    }

    /// Builds from integer encodings.
    pub fn from_indices(field: &GaloisField, rows: &[Vec<u32>]) -> Result<Self> {
        let rows: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.elem(x)).collect::<Result<Vector>>())
            .collect::<Result<_>>()?;
        Self::from_rows(field, &rows)
    }

    /// Empty matrix with `cols` columns.
    pub fn empty(field: &GaloisField, cols: usize) -> Self {
        Self::zeros(field, 0, cols)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_indices(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.index()).collect()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == if i == j { FieldElement::ONE } else { FieldElement::ZERO }))
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = &self.field;
        let mut out = FqMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.add(a, b)).collect();
        FqMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.sub(a, b)).collect();
        FqMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: FieldElement) -> FqMatrix {
        let data = self.data.iter().map(|&a| self.field.mul(c, a)).collect();
        FqMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> FqMatrix {
        self.scale(self.field.neg(FieldElement::ONE))
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut out = FqMatrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn pow(&self, mut k: u64) -> FqMatrix {
        let mut r = FqMatrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        r
    }

    /// Row vector times matrix.
    pub fn apply(&self, x: &[FieldElement]) -> Vector {
        assert_eq!(x.len(), self.rows);
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (k, &a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(k, j)));
            }
        }
        out
    }

    /// Stacks the rows of `self` above those of `other`.
    pub fn vstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FqMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = f.mul(inv, m.get(r, j));
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Nonzero rows of the reduced echelon form.
    pub fn row_space(&self) -> FqMatrix {
        let (m, pivots) = self.rref();
        let k = pivots.len();
        FqMatrix { field: self.field.clone(), rows: k, cols: self.cols, data: m.data[..k * self.cols].to_vec() }
    }

    /// Basis (as rows) of `{z : A zᵀ = 0}`.
    pub fn right_kernel(&self) -> FqMatrix {
        let f = &self.field;
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FqMatrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, FieldElement::ONE);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, f.neg(m.get(r, fc)));
            }
        }
        out
    }

    /// Basis (as rows) of `{x : x A = 0}`.
    pub fn left_kernel(&self) -> FqMatrix {
        self.transpose().right_kernel()
    }

    /// A solution of `A zᵀ = b` with free coordinates zero.
    pub fn solve_right(&self, b: &[FieldElement]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let mut aug = FqMatrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut z = vec![FieldElement::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            z[pc] = m.get(r, self.cols);
        }
        Some(z)
    }

    /// A solution of `x A = y` with free coordinates zero.
    pub fn solve_left(&self, y: &[FieldElement]) -> Option<Vector> {
        self.transpose().solve_right(y)
    }

    pub fn det(&self) -> FieldElement {
        assert!(self.is_square());
        let f = &self.field;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = FieldElement::ONE;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return FieldElement::ZERO };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let d = m.get(c, c);
            det = f.mul(det, d);
            let inv = f.inv(d).expect("pivot is nonzero");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<FqMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = FqMatrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, FieldElement::ONE);
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularInput);
        }
        let mut out = FqMatrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, m.get(i, n + j));
            }
        }
        Ok(out)
    }

    /// Minimal polynomial, monic, coefficients lowest degree first.
    pub fn min_poly(&self) -> Vector {
        assert!(self.is_square());
        let f = &self.field;
        let n = self.rows;
        let mut powers: Vec<Vector> = vec![FqMatrix::identity(f, n).data];
        let mut current = FqMatrix::identity(f, n);
        loop {
            current = current.mul(self);
            // Solve Σ c_i M^i = -M^k for the lowest k where a dependency appears.
            let basis = FqMatrix { field: f.clone(), rows: powers.len(), cols: n * n, data: powers.concat() };
            let target: Vector = current.data.iter().map(|&x| f.neg(x)).collect();
            if let Some(c) = basis.solve_left(&target) {
                let mut out = c;
                out.push(FieldElement::ONE);
                return out;
            }
            powers.push(current.data.clone());
        }
    }
}

/// Polynomials over GF(q), coefficients lowest degree first.
pub mod fpoly {
    use super::*;

    pub fn trim(mut a: Vector) -> Vector {
        while a.last().is_some_and(|x| x.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn derivative(f: &GaloisField, a: &[FieldElement]) -> Vector {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect())
    }

    pub fn rem(f: &GaloisField, a: &[FieldElement], m: &[FieldElement]) -> Vector {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = f.inv(m[dm]).expect("nonzero divisor");
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = f.mul(r[dr], lead_inv);
            for (i, &mi) in m.iter().enumerate() {
                let k = dr - dm + i;
                r[k] = f.sub(r[k], f.mul(c, mi));
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(f: &GaloisField, a: &[FieldElement], b: &[FieldElement]) -> Vector {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let inv = f.inv(lead).expect("nonzero");
            a.iter_mut().for_each(|c| *c = f.mul(*c, inv));
        }
        a
    }

    /// True when `a` has no repeated irreducible factor.
    pub fn is_squarefree(f: &GaloisField, a: &[FieldElement]) -> bool {
        let d = derivative(f, a);
        if d.is_empty() {
            return trim(a.to_vec()).len() <= 1;
        }
        gcd(f, a, &d).len() == 1
    }
}

pub fn dot(f: &GaloisField, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter().zip(b).fold(FieldElement::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn vec_add(f: &GaloisField, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vec_sub(f: &GaloisField, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn vec_scale(f: &GaloisField, c: FieldElement, a: &[FieldElement]) -> Vector {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn vec_neg(f: &GaloisField, a: &[FieldElement]) -> Vector {
    a.iter().map(|&x| f.neg(x)).collect()
}

/// Lexicographic encoding of a vector: the first coordinate is most significant.
pub fn encode_vector(q: u32, v: &[FieldElement]) -> usize {
    v.iter().fold(0usize, |acc, x| acc * q as usize + x.index() as usize)
}

pub fn decode_vector(q: u32, dim: usize, mut index: usize) -> Vector {
    let mut out = vec![FieldElement::ZERO; dim];
    for slot in out.iter_mut().rev() {
        *slot = FieldElement((index % q as usize) as u32);
        index /= q as usize;
    }
    out
}

/// All coordinate combinations of the rows of `basis`, in coordinate-encoding order.
pub fn span_elements(basis: &FqMatrix) -> Vec<Vector> {
    let f = basis.field();
    let k = basis.rows();
    let q = f.q() as usize;
    let total = q.pow(k as u32);
    (0..total).map(|code| basis.apply(&decode_vector(f.q(), k, code))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: &GaloisField, rows: &[&[u32]]) -> FqMatrix {
        FqMatrix::from_indices(f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let f = GaloisField::prime(5).unwrap();
        let a = m(&f, &[&[1, 2], &[3, 4]]);
        assert_eq!(a.det(), f.from_int(4 - 6));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let s = m(&f, &[&[1, 2], &[2, 4]]);
        assert_eq!(s.det(), FieldElement::ZERO);
        assert_eq!(s.inverse().unwrap_err(), Error::SingularInput);
    }

    #[test]
    fn kernels_and_solves() {
        let f = GaloisField::prime(3).unwrap();
        let a = m(&f, &[&[1, 1, 0], &[0, 1, 1]]);
        let k = a.right_kernel();
        assert_eq!(k.rows(), 1);
        assert!(a.mul(&k.transpose()).data.iter().all(|x| x.is_zero()));
        let lk = a.transpose().left_kernel();
        assert_eq!(lk.rows(), 1);
        let y = a.apply(&[f.from_int(2), f.from_int(1)]);
        let x = a.solve_left(&y).unwrap();
        assert_eq!(a.apply(&x), y);
        let inconsistent = m(&f, &[&[1, 0], &[1, 0]]);
        assert!(inconsistent.solve_right(&[FieldElement::ONE, FieldElement::ZERO]).is_none());
    }

    #[test]
    fn minimal_polynomials() {
        let f = GaloisField::prime(3).unwrap();
        let id = FqMatrix::identity(&f, 2);
        assert_eq!(id.min_poly(), vec![f.from_int(-1), FieldElement::ONE]);
        let u = m(&f, &[&[1, 1], &[0, 1]]);
        let mp = u.min_poly();
        assert_eq!(mp, vec![FieldElement::ONE, f.from_int(-2), FieldElement::ONE]);
        assert!(!fpoly::is_squarefree(&f, &mp));
        let r = m(&f, &[&[0, 1], &[2, 0]]);
        assert!(fpoly::is_squarefree(&f, &r.min_poly()));
    }

    #[test]
    fn vector_encoding_round_trips() {
        for idx in 0..81 {
            assert_eq!(encode_vector(3, &decode_vector(3, 4, idx)), idx);
        }
    }
}
