//! Small dense matrices over a scalar ring.

use num_traits::Zero;

use super::matrix::RatMatrix;
use super::rat::Rat;
use super::scalar::Scalar;

/// Row-major dense matrix; used for algebra-sized maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DMat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DMat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        DMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix with the given columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vec(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn mul(&self, rhs: &DMat<S>) -> DMat<S> {
        assert_eq!(self.cols, rhs.rows, "product shape mismatch");
        let mut out: DMat<S> = DMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = S::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        s = s + a.clone() * x.clone();
                    }
                }
                s
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + rhs.get(i, j).clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - rhs.get(i, j).clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| c.clone() * self.get(i, j).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let v = self.get(i, j);
                if i == j { v.is_one() } else { v.is_zero() }
            }))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DMat<T> {
        DMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// The Q-linear map underlying this S-linear map, in the coordinates of
    /// [`super::scalar::flatten`].
    pub fn to_q(&self) -> RatMatrix {
        let w = S::WIDTH;
        let mut entries = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for kin in 0..w {
                    let prod = a.clone() * S::q_unit(kin);
                    for (kout, c) in prod.q_coords().into_iter().enumerate() {
                        entries.push((kout * self.rows + i, kin * self.cols + j, c));
                    }
                }
            }
        }
        RatMatrix::from_triplets(w * self.rows, w * self.cols, entries)
    }
}

impl DMat<Rat> {
    pub fn to_sparse(&self) -> RatMatrix {
        self.to_q()
    }

    pub fn from_sparse(m: &RatMatrix) -> Self {
        DMat::from_rows(m.to_dense_rows())
    }
}
