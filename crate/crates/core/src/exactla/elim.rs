//! Fraction-free sparse elimination and the linear-algebra services built on it.
//!
//! Rows are cleared of denominators once, then eliminated with integer
//! cross-multiplication and kept primitive (content divided out after every
//! combination), so no rational arithmetic happens inside the loop.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;
use super::rat::Rat;

type IRow = Vec<(usize, BigInt)>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a complex: d_out * d_in has nonzero entry {value} at ({row}, {col})")]
    ComplexViolation { row: usize, col: usize, value: String },
}

fn int_row<'a>(entries: impl Iterator<Item = (usize, &'a Rat)>) -> IRow {
    let entries: Vec<(usize, &Rat)> = entries.filter(|(_, v)| !v.is_zero()).collect();
    let mut l = BigInt::one();
    for (_, v) in &entries {
        l = l.lcm(v.denom());
    }
    let mut row: IRow = entries.into_iter().map(|(j, v)| (j, v.numer() * (&l / v.denom()))).collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut IRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if let Some((_, lead)) = row.first() {
        if lead.is_negative() {
            g = -g;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `a*v - b*p`, made primitive.
fn combine(v: &IRow, a: &BigInt, p: &IRow, b: &BigInt) -> IRow {
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut k) = (0, 0);
    while i < v.len() || k < p.len() {
        let ci = v.get(i).map_or(usize::MAX, |e| e.0);
        let ck = p.get(k).map_or(usize::MAX, |e| e.0);
        if ci < ck {
            out.push((ci, a * &v[i].1));
            i += 1;
        } else if ck < ci {
            out.push((ck, -(b * &p[k].1)));
            k += 1;
        } else {
            let x = a * &v[i].1 - b * &p[k].1;
            if !x.is_zero() {
                out.push((ci, x));
            }
            i += 1;
            k += 1;
        }
    }
    make_primitive(&mut out);
    out
}

/// Eliminates from `v` every column that carries a pivot of `rows`,
/// scanning left to right and leaving the pivot of row `skip` alone.
fn reduce(mut v: IRow, rows: &[IRow], pivot_row: &[Option<usize>], skip: Option<usize>) -> IRow {
    let mut pos = 0;
    loop {
        let hit = v[pos..]
            .iter()
            .position(|(c, _)| pivot_row[*c].is_some_and(|r| Some(r) != skip))
            .map(|k| k + pos);
        let Some(k) = hit else { break };
        let c = v[k].0;
        let p = &rows[pivot_row[c].unwrap()];
        let g = p[0].1.gcd(&v[k].1);
        let a = &p[0].1 / &g;
        let b = &v[k].1 / &g;
        v = combine(&v, &a, p, &b);
        pos = v.partition_point(|e| e.0 <= c);
        if pos >= v.len() {
            break;
        }
    }
    v
}

/// Incrementally built row echelon form with integer primitive rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<IRow>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r[0].0).collect();
        p.sort_unstable();
        p
    }

    /// Adds a row; returns whether it was independent of the rows so far.
    pub fn insert<'a>(&mut self, entries: impl Iterator<Item = (usize, &'a Rat)>) -> bool {
        let v = int_row(entries);
        debug_assert!(v.iter().all(|(c, _)| *c < self.ncols));
        self.insert_int(v)
    }

    pub fn insert_dense(&mut self, v: &[Rat]) -> bool {
        self.insert(v.iter().enumerate())
    }

    fn insert_int(&mut self, v: IRow) -> bool {
        if v.is_empty() {
            return false;
        }
        let v = reduce(v, &self.rows, &self.pivot_row, None);
        if v.is_empty() {
            return false;
        }
        self.pivot_row[v[0].0] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let r = int_row(v.iter().enumerate());
        r.is_empty() || reduce(r, &self.rows, &self.pivot_row, None).is_empty()
    }

    /// Fully reduces every row so pivot columns are zero outside their own row.
    pub fn into_rref(mut self) -> Rref {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        for r in order {
            let row = std::mem::take(&mut self.rows[r]);
            self.rows[r] = reduce(row, &self.rows, &self.pivot_row, Some(r));
        }
        Rref { ncols: self.ncols, rows: self.rows, pivot_row: self.pivot_row }
    }
}

/// Reduced row echelon form (rows primitive, pivots positive).
#[derive(Clone, Debug)]
pub struct Rref {
    ncols: usize,
    rows: Vec<IRow>,
    pivot_row: Vec<Option<usize>>,
}

impl Rref {
    pub fn of(m: &RatMatrix) -> Self {
        let mut e = Echelon::new(m.cols());
        for i in 0..m.rows() {
            e.insert(m.row(i));
        }
        e.into_rref()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self, upto: usize) -> RatMatrix {
        let free: Vec<usize> = (0..upto).filter(|&c| self.pivot_row[c].is_none()).collect();
        let mut slot = vec![usize::MAX; upto];
        for (k, &c) in free.iter().enumerate() {
            slot[c] = k;
        }
        let mut entries = Vec::new();
        for (k, &c) in free.iter().enumerate() {
            entries.push((c, k, Rat::one()));
        }
        for row in &self.rows {
            let (p, lead) = (&row[0].0, &row[0].1);
            if *p >= upto {
                continue;
            }
            for (c, v) in &row[1..] {
                if *c < upto {
                    entries.push((*p, slot[*c], Rat::new(-v.clone(), lead.clone())));
                }
            }
        }
        RatMatrix::from_triplets(upto, free.len(), entries)
    }
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut e = Echelon::new(m.cols());
    for i in 0..m.rows() {
        e.insert(m.row(i));
    }
    e.rank()
}

/// Columns form a basis of `{x : m x = 0}`.
pub fn kernel(m: &RatMatrix) -> RatMatrix {
    Rref::of(m).kernel(m.cols())
}

/// Columns form a basis of the column space (the pivot columns of `m`).
pub fn image(m: &RatMatrix) -> RatMatrix {
    let mut e = Echelon::new(m.cols());
    for i in 0..m.rows() {
        e.insert(m.row(i));
    }
    m.select_cols(&e.pivots())
}

/// Some solution of `m x = b`, free variables set to zero.
pub fn solve(m: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let bm = RatMatrix::from_columns(m.rows(), &[b.to_vec()]);
    solve_matrix(m, &bm).map(|x| x.column(0))
}

/// Some solution of `m X = B`, or `None` if any column is inconsistent.
pub fn solve_matrix(m: &RatMatrix, b: &RatMatrix) -> Option<RatMatrix> {
    assert_eq!(m.rows(), b.rows(), "right-hand side has wrong height");
    let n = m.cols();
    let aug = m.hstack(b);
    let rref = Rref::of(&aug);
    if rref.rows.iter().any(|r| r[0].0 >= n) {
        return None;
    }
    let mut entries = Vec::new();
    for row in &rref.rows {
        let (p, lead) = (row[0].0, &row[0].1);
        for (c, v) in &row[1..] {
            if *c >= n {
                entries.push((p, c - n, Rat::new(v.clone(), lead.clone())));
            }
        }
    }
    Some(RatMatrix::from_triplets(n, b.cols(), entries))
}

pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    if m.rows() != m.cols() || rank(m) != m.rows() {
        return None;
    }
    solve_matrix(m, &RatMatrix::identity(m.rows()))
}

/// Whether `v` lies in the span of the columns of `basis`.
pub fn in_span(basis: &RatMatrix, v: &[Rat]) -> bool {
    let mut e = Echelon::new(basis.rows());
    let bt = basis.transpose();
    for i in 0..bt.rows() {
        e.insert(bt.row(i));
    }
    e.contains(v)
}

/// `V / R` for `R` the span of the columns of `relations`, with a
/// projection and a section through coordinate vectors.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub proj: RatMatrix,
    pub section: RatMatrix,
}

impl Quotient {
    pub fn new(relations: &RatMatrix) -> Self {
        let n = relations.rows();
        let rref = Rref::of(&relations.transpose());
        let kept: Vec<usize> = (0..n).filter(|&c| rref.pivot_row[c].is_none()).collect();
        let mut slot = vec![usize::MAX; n];
        for (k, &c) in kept.iter().enumerate() {
            slot[c] = k;
        }
        let mut entries: Vec<(usize, usize, Rat)> = kept.iter().enumerate().map(|(k, &c)| (k, c, Rat::one())).collect();
        for row in &rref.rows {
            let (p, lead) = (row[0].0, &row[0].1);
            for (c, v) in &row[1..] {
                entries.push((slot[*c], p, Rat::new(-v.clone(), lead.clone())));
            }
        }
        let proj = RatMatrix::from_triplets(kept.len(), n, entries);
        let section = RatMatrix::from_triplets(n, kept.len(), kept.iter().enumerate().map(|(k, &c)| (c, k, Rat::one())));
        Quotient { proj, section }
    }

    pub fn dim(&self) -> usize {
        self.proj.rows()
    }
}

/// Cohomology of `C_in --d_in--> C --d_out--> C_out` at the middle term.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub dim: usize,
    /// Columns are cocycles whose classes form a basis.
    pub representatives: RatMatrix,
}

pub fn check_complex(d_in: &RatMatrix, d_out: &RatMatrix) -> Result<(), LinAlgError> {
    if d_out.cols() != d_in.rows() {
        return Err(LinAlgError::Shape(format!(
            "d_out is {}x{} but d_in is {}x{}",
            d_out.rows(),
            d_out.cols(),
            d_in.rows(),
            d_in.cols()
        )));
    }
    match d_out.mul(d_in).first_nonzero() {
        Some((row, col, v)) => Err(LinAlgError::ComplexViolation { row, col, value: v.to_string() }),
        None => Ok(()),
    }
}

/// Dimension only: `dim C - rank d_out - rank d_in`.
pub fn cohomology_dim(d_in: &RatMatrix, d_out: &RatMatrix) -> Result<usize, LinAlgError> {
    check_complex(d_in, d_out)?;
    Ok(d_in.rows() - rank(d_out) - rank(d_in))
}

pub fn cohomology(d_in: &RatMatrix, d_out: &RatMatrix) -> Result<Cohomology, LinAlgError> {
    check_complex(d_in, d_out)?;
    let n = d_in.rows();
    let z = kernel(d_out);
    let mut e = Echelon::new(n);
    let bt = d_in.transpose();
    for i in 0..bt.rows() {
        e.insert(bt.row(i));
    }
    let zt = z.transpose();
    let mut keep = Vec::new();
    for k in 0..zt.rows() {
        if e.insert(zt.row(k)) {
            keep.push(k);
        }
    }
    let reps = z.select_cols(&keep);
    Ok(Cohomology { dim: reps.cols(), representatives: reps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat::{rat, ratio};

    #[test]
    fn kernel_of_rank_one() {
        let m = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        let k = kernel(&m);
        assert_eq!(k.cols(), 1);
        // proportional to (-2, 1)
        let v = k.column(0);
        assert_eq!(&v[0] / &v[1], rat(-2));
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn solve_picks_free_zero() {
        let m = RatMatrix::from_i64_rows(&[&[1, 1]]);
        assert_eq!(solve(&m, &[rat(3)]).unwrap(), vec![rat(3), rat(0)]);
        let sing = RatMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(solve(&sing, &[rat(1), rat(2)]).is_none());
    }

    #[test]
    fn rational_entries() {
        let m = RatMatrix::from_rows(vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 4), ratio(1, 6)]]);
        assert_eq!(rank(&m), 1);
        let x = solve(&m, &[rat(1), ratio(1, 2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![rat(1), ratio(1, 2)]);
    }

    #[test]
    fn quotient_projection() {
        let rel = RatMatrix::from_columns(3, &[vec![rat(1), rat(-1), rat(0)]]);
        let q = Quotient::new(&rel);
        assert_eq!(q.dim(), 2);
        assert!(q.proj.mul(&rel).is_zero());
        assert_eq!(q.proj.mul(&q.section), RatMatrix::identity(2));
    }

    #[test]
    fn complex_violation_reported() {
        let d = RatMatrix::identity(2);
        assert!(matches!(cohomology(&d, &d), Err(LinAlgError::ComplexViolation { .. })));
    }

    #[test]
    fn inverse_round_trip() {
        let m = RatMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        assert!(inverse(&RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]])).is_none());
    }
}
