//! Dense matrices over K = Q(ζ_p).

use serde::{Serialize, Serializer};

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<CycNumber>,
}

impl Serialize for CycMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[CycNumber]> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.serialize(s)
    }
}

impl CycMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        CycMatrix { p, rows, cols, data: vec![CycNumber::zero(p); rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, CycNumber::one(p));
        }
        m
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycNumber) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CycMatrix { p, rows, cols, data }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &CycNumber) {
        let slot = &mut self.data[i * self.cols + j];
        *slot += v;
    }

    pub fn row(&self, i: usize) -> &[CycNumber] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn mul(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CycMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CycMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &CycNumber) -> CycMatrix {
        CycMatrix { p: self.p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> CycNumber {
        (0..self.rows.min(self.cols)).fold(CycNumber::zero(self.p), |acc, i| acc + self.get(i, i))
    }

    /// Submatrix on the given row and column positions.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> CycMatrix {
        Self::from_fn(self.p, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Fraction-free (Bareiss) elimination. Each step divides by the previous
    /// pivot, a division that is exact in the ring generated by the entries.
    pub fn det(&self) -> Result<CycNumber> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(CycNumber::one(self.p));
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev_inv = CycNumber::one(self.p);
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m.get(r, k).is_zero()) else {
                    return Ok(CycNumber::zero(self.p));
                };
                for j in 0..n {
                    m.data.swap(k * n + j, r * n + j);
                }
                negate = !negate;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                let mik = m.get(i, k).clone();
                for j in k + 1..n {
                    let v = &(&(&pivot * m.get(i, j)) - &(&mik * m.get(k, j))) * &prev_inv;
                    m.set(i, j, v);
                }
                m.set(i, k, CycNumber::zero(self.p));
            }
            prev_inv = pivot.inverse()?;
        }
        let d = m.get(n - 1, n - 1).clone();
        Ok(if negate { -d } else { d })
    }
}
