use std::fmt;

use num_traits::Zero;

use super::rat::{rat, Rat};

/// Matrices at or above this density are stored densely.
pub const DEFAULT_DENSITY_THRESHOLD: f64 = 0.25;

#[derive(Clone)]
enum Store {
    Sparse(Vec<Vec<(usize, Rat)>>),
    Dense(Vec<Rat>),
}

/// Immutable exact matrix over the rationals.
///
/// Storage is sparse row lists unless the fill ratio reaches the density
/// threshold, in which case a row-major dense buffer is used.
#[derive(Clone)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    store: Store,
}

pub enum RowIter<'a> {
    Sparse(std::slice::Iter<'a, (usize, Rat)>),
    Dense(std::iter::Enumerate<std::slice::Iter<'a, Rat>>),
}

impl<'a> Iterator for RowIter<'a> {
    type Item = (usize, &'a Rat);

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            RowIter::Sparse(it) => it.next().map(|(j, v)| (*j, v)),
            RowIter::Dense(it) => it.by_ref().find(|(_, v)| !v.is_zero()),
        }
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, store: Store::Sparse(vec![Vec::new(); rows]) }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, rat(1))))
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rat)>,
    {
        Self::from_triplets_with_threshold(rows, cols, entries, DEFAULT_DENSITY_THRESHOLD)
    }

    pub fn from_triplets_with_threshold<I>(rows: usize, cols: usize, entries: I, threshold: f64) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rat)>,
    {
        let mut lists: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); rows];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
            if !v.is_zero() {
                lists[i].push((j, v));
            }
        }
        for row in lists.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Rat)> = Vec::with_capacity(row.len());
            for (j, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lj, lv)) if *lj == j => *lv += v,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *row = merged;
        }
        Self::from_sorted_rows(rows, cols, lists, threshold)
    }

    fn from_sorted_rows(rows: usize, cols: usize, lists: Vec<Vec<(usize, Rat)>>, threshold: f64) -> Self {
        let nnz: usize = lists.iter().map(Vec::len).sum();
        let cells = rows * cols;
        if cells > 0 && nnz as f64 >= threshold * cells as f64 {
            let mut data = vec![Rat::zero(); cells];
            for (i, row) in lists.into_iter().enumerate() {
                for (j, v) in row {
                    data[i * cols + j] = v;
                }
            }
            RatMatrix { rows, cols, store: Store::Dense(data) }
        } else {
            RatMatrix { rows, cols, store: Store::Sparse(lists) }
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            r,
            c,
            rows.into_iter().enumerate().flat_map(move |(i, row)| {
                assert_eq!(row.len(), c, "ragged rows");
                row.into_iter().enumerate().map(move |(j, v)| (i, j, v))
            }),
        )
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        Self::from_triplets(
            rows,
            columns.len(),
            columns.iter().enumerate().flat_map(|(j, col)| {
                assert_eq!(col.len(), rows);
                col.iter().enumerate().map(move |(i, v)| (i, j, v.clone()))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    pub fn nnz(&self) -> usize {
        (0..self.rows).map(|i| self.row(i).count()).sum()
    }

    pub fn density(&self) -> f64 {
        if self.rows * self.cols == 0 {
            0.0
        } else {
            self.nnz() as f64 / (self.rows * self.cols) as f64
        }
    }

    /// Nonzero entries of row `i` in increasing column order.
    pub fn row(&self, i: usize) -> RowIter<'_> {
        match &self.store {
            Store::Sparse(l) => RowIter::Sparse(l[i].iter()),
            Store::Dense(d) => RowIter::Dense(d[i * self.cols..(i + 1) * self.cols].iter().enumerate()),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rat)> + '_ {
        (0..self.rows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        assert!(i < self.rows && j < self.cols);
        match &self.store {
            Store::Sparse(l) => l[i]
                .binary_search_by_key(&j, |e| e.0)
                .map(|k| l[i][k].1.clone())
                .unwrap_or_else(|_| Rat::zero()),
            Store::Dense(d) => d[i * self.cols + j].clone(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); self.rows]; self.cols];
        for (i, j, v) in self.triplets() {
            out[j][i] = v.clone();
        }
        out
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        (0..self.rows).all(|i| self.row(i).next().is_none())
    }

    /// First nonzero entry, scanning rows in order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, Rat)> {
        self.triplets().next().map(|(i, j, v)| (i, j, v.clone()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v.clone())))
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "product shape mismatch");
        let mut lists = Vec::with_capacity(self.rows);
        let mut acc: Vec<Rat> = vec![Rat::zero(); rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; rhs.cols];
        for i in 0..self.rows {
            for (k, a) in self.row(i) {
                for (j, b) in rhs.row(k) {
                    if !mark[j] {
                        mark[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            let mut row = Vec::with_capacity(touched.len());
            for &j in &touched {
                mark[j] = false;
                let v = std::mem::replace(&mut acc[j], Rat::zero());
                if !v.is_zero() {
                    row.push((j, v));
                }
            }
            touched.clear();
            lists.push(row);
        }
        Self::from_sorted_rows(self.rows, rhs.cols, lists, DEFAULT_DENSITY_THRESHOLD)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for (j, a) in self.row(i) {
                    if !v[j].is_zero() {
                        s += a * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    fn zip_with(&self, rhs: &RatMatrix, sign: i64) -> RatMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sum shape mismatch");
        let s = rat(sign);
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets()
                .map(|(i, j, v)| (i, j, v.clone()))
                .chain(rhs.triplets().map(|(i, j, v)| (i, j, v * &s))),
        )
    }

    pub fn add(&self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, 1)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, -1)
    }

    pub fn scale(&self, c: &Rat) -> RatMatrix {
        Self::from_triplets(self.rows, self.cols, self.triplets().map(|(i, j, v)| (i, j, v * c)))
    }

    pub fn neg(&self) -> RatMatrix {
        self.scale(&rat(-1))
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, rhs.rows);
        let off = self.cols;
        Self::from_triplets(
            self.rows,
            self.cols + rhs.cols,
            self.triplets()
                .map(|(i, j, v)| (i, j, v.clone()))
                .chain(rhs.triplets().map(|(i, j, v)| (i, j + off, v.clone()))),
        )
    }

    /// `[self ; rhs]`.
    pub fn vstack(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.cols);
        let off = self.rows;
        Self::from_triplets(
            self.rows + rhs.rows,
            self.cols,
            self.triplets()
                .map(|(i, j, v)| (i, j, v.clone()))
                .chain(rhs.triplets().map(|(i, j, v)| (i + off, j, v.clone()))),
        )
    }

    pub fn block_diag(blocks: &[RatMatrix]) -> RatMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut entries = Vec::new();
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            entries.extend(b.triplets().map(|(i, j, v)| (i + r0, j + c0, v.clone())));
            r0 += b.rows;
            c0 += b.cols;
        }
        Self::from_triplets(rows, cols, entries)
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &RatMatrix) -> RatMatrix {
        let mut entries = Vec::with_capacity(self.nnz() * rhs.nnz());
        for (i, j, a) in self.triplets() {
            for (k, l, b) in rhs.triplets() {
                entries.push((i * rhs.rows + k, j * rhs.cols + l, a * b));
            }
        }
        Self::from_triplets(self.rows * rhs.rows, self.cols * rhs.cols, entries)
    }

    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        Self::from_triplets(
            idx.len(),
            self.cols,
            idx.iter()
                .enumerate()
                .flat_map(|(r, &i)| self.row(i).map(move |(j, v)| (r, j, v.clone()))),
        )
    }

    pub fn select_cols(&self, idx: &[usize]) -> RatMatrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (c, &j) in idx.iter().enumerate() {
            pos[j] = c;
        }
        let mut entries = Vec::new();
        for (i, j, v) in self.triplets() {
            if pos[j] != usize::MAX {
                entries.push((i, pos[j], v.clone()));
            }
        }
        // repeated indices are rare; handle them by a second pass
        if idx.len() != idx.iter().collect::<std::collections::BTreeSet<_>>().len() {
            entries.clear();
            for (c, &j) in idx.iter().enumerate() {
                for i in 0..self.rows {
                    let v = self.get(i, j);
                    if !v.is_zero() {
                        entries.push((i, c, v));
                    }
                }
            }
        }
        Self::from_triplets(self.rows, idx.len(), entries)
    }
}

impl PartialEq for RatMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.shape() == other.shape() && (0..self.rows).all(|i| self.row(i).eq(other.row(i)))
    }
}

impl Eq for RatMatrix {}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} ({})", self.rows, self.cols, if self.is_dense() { "dense" } else { "sparse" })?;
        if self.rows * self.cols <= 400 {
            for r in self.to_dense_rows() {
                let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn storage_switches_on_density() {
        let sparse = RatMatrix::from_triplets(10, 10, [(0, 0, rat(1))]);
        assert!(!sparse.is_dense());
        let dense = RatMatrix::from_i64_rows(&[&[1, 2], &[0, 3]]);
        assert!(dense.is_dense());
        assert_eq!(dense.get(1, 1), rat(3));
        assert_eq!(dense.row(1).count(), 1);
        let as_sparse = RatMatrix::from_triplets_with_threshold(2, 2, dense.triplets().map(|(i, j, v)| (i, j, v.clone())), 1.1);
        assert!(!as_sparse.is_dense());
        assert_eq!(as_sparse, dense);
    }

    #[test]
    fn duplicates_sum_and_cancel() {
        let m = RatMatrix::from_triplets(1, 2, [(0, 0, rat(1)), (0, 0, rat(-1)), (0, 1, rat(2)), (0, 1, rat(3))]);
        assert_eq!(m.get(0, 0), rat(0));
        assert_eq!(m.get(0, 1), rat(5));
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn product_and_kron() {
        let a = RatMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let b = RatMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), RatMatrix::from_i64_rows(&[&[2, 1], &[4, 3]]));
        let k = RatMatrix::identity(2).kron(&a);
        assert_eq!(k.get(2, 2), rat(1));
        assert_eq!(k.get(3, 3), rat(4));
        assert_eq!(k.get(0, 2), rat(0));
        assert_eq!(a.transpose().get(0, 1), rat(3));
        assert_eq!(a.select_cols(&[1, 1]).column(1), vec![rat(2), rat(4)]);
    }
}
