//! The Hochschild complex `C(A, M)` of a finite-dimensional algebra with
//! bimodule coefficients, its normalized subcomplex and the opposite map.
//!
//! A cochain `φ ∈ C^n(A, M) = Hom(A^{⊗n}, M)` is a `dim M × d^n` matrix.
//! Tensor basis tuples are ordered lexicographically with the first argument
//! most significant, and cochain vectors are the matrix read column by column:
//! coordinate `tuple * dim M + m`.

mod deformation;
mod tuples;

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{FinAlgebra, FinBimodule};
use crate::exactla::{cohomology, Cohomology, LinAlgError, Rat, RatMatrix};

pub use deformation::{deform_algebra, is_algebra_deformation, is_deformation_isomorphism};
pub use tuples::{pow, tuple_index, tuple_of, tuples_with_slot};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HochschildError {
    #[error("cochain shape {rows}x{cols} does not match degree {degree}")]
    Shape { rows: usize, cols: usize, degree: usize },
    #[error("the unit of the algebra is not a basis vector")]
    UnitNotInBasis,
    #[error("normalized and full complexes disagree in degree {degree}: {full} vs {normalized}")]
    QuasiIsomorphismFailed { degree: usize, full: usize, normalized: usize },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// `(-1)^k` as a rational.
pub(crate) fn sign(k: usize) -> Rat {
    if k.is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// Sparse columns of a list of matrices: `cols[j][m]` lists `(row, value)`.
pub(crate) fn sparse_columns(ms: &[RatMatrix]) -> Vec<Vec<Vec<(usize, Rat)>>> {
    ms.iter()
        .map(|m| {
            let mut cols = vec![Vec::new(); m.cols()];
            for (i, j, v) in m.triplets() {
                cols[j].push((i, v.clone()));
            }
            cols
        })
        .collect()
}

/// For each basis index `k`, the pairs `(a, b, c)` with `e_a e_b = ... + c e_k + ...`.
pub(crate) fn products_into(a: &FinAlgebra<Rat>) -> Vec<Vec<(usize, usize, Rat)>> {
    let d = a.dim();
    let mut out = vec![Vec::new(); d];
    for x in 0..d {
        for y in 0..d {
            for (k, c) in a.product(x, y).iter().enumerate() {
                if !c.is_zero() {
                    out[k].push((x, y, c.clone()));
                }
            }
        }
    }
    out
}

/// `d^n: C^n(A, M) -> C^{n+1}(A, M)` for a bimodule given by its action
/// matrices (`left[j]` is `m ↦ e_j m`, `right[j]` is `m ↦ m e_j`).
pub fn hochschild_differential(a: &FinAlgebra<Rat>, dim_m: usize, left: &[RatMatrix], right: &[RatMatrix], n: usize) -> RatMatrix {
    let d = a.dim();
    let (lcols, rcols) = (sparse_columns(left), sparse_columns(right));
    let prods = products_into(a);
    let dn = pow(d, n);
    let mut entries = Vec::new();
    let last = sign(n + 1);
    for t in 0..dn {
        let tup = tuple_of(t, d, n);
        for m in 0..dim_m {
            let col = t * dim_m + m;
            // x_1 φ(x_2, ..., x_{n+1})
            for (s, lc) in lcols.iter().enumerate() {
                for (r, v) in &lc[m] {
                    entries.push(((s * dn + t) * dim_m + r, col, v.clone()));
                }
            }
            // (-1)^j φ(..., x_j x_{j+1}, ...)
            for pos in 0..n {
                let sg = sign(pos + 1);
                let prefix = tuple_index(&tup[..pos], d);
                let tail = pow(d, n - pos - 1);
                let suffix = t % tail;
                for (x, y, c) in &prods[tup[pos]] {
                    let row_t = ((prefix * d + x) * d + y) * tail + suffix;
                    entries.push((row_t * dim_m + m, col, &sg * c));
                }
            }
            // (-1)^{n+1} φ(x_1, ..., x_n) x_{n+1}
            for (s, rc) in rcols.iter().enumerate() {
                for (r, v) in &rc[m] {
                    entries.push(((t * d + s) * dim_m + r, col, &last * v));
                }
            }
        }
    }
    RatMatrix::from_triplets(dim_m * dn * d, dim_m * dn, entries)
}

/// The matrix of `φ ↦ φ^op = (-1)^{λ(n)} φ^♯`, `λ(n) = (n-1)(n+2)/2`,
/// on cochains with `dim_m`-dimensional values.
pub fn op_matrix(d: usize, dim_m: usize, n: usize) -> RatMatrix {
    let s = op_sign(n);
    let entries = (0..pow(d, n)).flat_map(|t| {
        let mut tup = tuple_of(t, d, n);
        tup.reverse();
        let rt = tuple_index(&tup, d);
        let s = s.clone();
        (0..dim_m).map(move |m| (t * dim_m + m, rt * dim_m + m, s.clone()))
    });
    RatMatrix::from_triplets(dim_m * pow(d, n), dim_m * pow(d, n), entries)
}

/// `(-1)^{λ(n)}`.
pub fn op_sign(n: usize) -> Rat {
    // λ(0) = -1; otherwise (n-1)(n+2)/2 >= 0
    if n == 0 {
        -Rat::one()
    } else {
        sign((n - 1) * (n + 2) / 2)
    }
}

/// `C(A, M)` with `A` and `M` fixed.
#[derive(Debug, Clone)]
pub struct HochschildComplex {
    algebra: Arc<FinAlgebra<Rat>>,
    bimodule: FinBimodule,
}

/// Betti number and representative cocycles of `HH^n(A, M)`.
#[derive(Debug, Clone, Serialize)]
pub struct HochschildReport {
    pub degree: usize,
    pub betti: usize,
    /// Present when the normalized complex was computed as well.
    pub normalized_betti: Option<usize>,
    #[serde(skip)]
    pub representatives: Vec<HCochain>,
}

impl HochschildComplex {
    pub fn new(algebra: Arc<FinAlgebra<Rat>>, bimodule: FinBimodule) -> Self {
        HochschildComplex { algebra, bimodule }
    }

    /// `C(A) = C(A, A)`.
    pub fn regular(algebra: Arc<FinAlgebra<Rat>>) -> Self {
        let m = FinBimodule::regular(&algebra);
        Self::new(algebra, m)
    }

    pub fn algebra(&self) -> &Arc<FinAlgebra<Rat>> {
        &self.algebra
    }

    pub fn bimodule(&self) -> &FinBimodule {
        &self.bimodule
    }

    pub fn cochain_dim(&self, n: usize) -> usize {
        self.bimodule.dim() * pow(self.algebra.dim(), n)
    }

    pub fn differential(&self, n: usize) -> RatMatrix {
        let d = self.algebra.dim();
        let left: Vec<RatMatrix> = (0..d).map(|j| self.bimodule.left(j).clone()).collect();
        let right: Vec<RatMatrix> = (0..d).map(|j| self.bimodule.right(j).clone()).collect();
        hochschild_differential(&self.algebra, self.bimodule.dim(), &left, &right, n)
    }

    /// Coordinates of cochains vanishing whenever an argument is the unit.
    pub fn normalized_coords(&self, n: usize) -> Result<Vec<usize>, HochschildError> {
        let u = self.algebra.unit_index().ok_or(HochschildError::UnitNotInBasis)?;
        let (d, dm) = (self.algebra.dim(), self.bimodule.dim());
        let with_unit = tuples_with_slot(d, n, u);
        Ok((0..pow(d, n)).filter(|t| !with_unit[*t]).flat_map(|t| (0..dm).map(move |m| t * dm + m)).collect())
    }

    /// `d^n` restricted to normalized cochains.
    pub fn normalized_differential(&self, n: usize) -> Result<RatMatrix, HochschildError> {
        let (src, tgt) = (self.normalized_coords(n)?, self.normalized_coords(n + 1)?);
        Ok(self.differential(n).select_rows(&tgt).select_cols(&src))
    }

    /// `C(A^op, M^op)`.
    pub fn opposite(&self) -> HochschildComplex {
        HochschildComplex { algebra: Arc::new(self.algebra.opposite()), bimodule: self.bimodule.opposite() }
    }

    pub fn op_matrix(&self, n: usize) -> RatMatrix {
        op_matrix(self.algebra.dim(), self.bimodule.dim(), n)
    }

    fn incoming(&self, n: usize, normalized: bool) -> Result<RatMatrix, HochschildError> {
        let rows = if normalized { self.normalized_coords(n)?.len() } else { self.cochain_dim(n) };
        match n.checked_sub(1) {
            None => Ok(RatMatrix::zeros(rows, 0)),
            Some(k) if normalized => self.normalized_differential(k),
            Some(k) => Ok(self.differential(k)),
        }
    }

    /// Cohomology in degree `n` of the full or the normalized complex.
    pub fn cohomology(&self, n: usize, normalized: bool) -> Result<Cohomology, HochschildError> {
        let d_in = self.incoming(n, normalized)?;
        let d_out = if normalized { self.normalized_differential(n)? } else { self.differential(n) };
        Ok(cohomology(&d_in, &d_out)?)
    }

    /// Embeds normalized coordinates back into the full cochain space.
    pub fn embed_normalized(&self, n: usize, v: &[Rat]) -> Result<Vec<Rat>, HochschildError> {
        let coords = self.normalized_coords(n)?;
        let mut out = vec![Rat::zero(); self.cochain_dim(n)];
        for (k, c) in coords.into_iter().enumerate() {
            out[c] = v[k].clone();
        }
        Ok(out)
    }

    pub fn zero_cochain(&self, n: usize) -> HCochain {
        HCochain { degree: n, matrix: RatMatrix::zeros(self.bimodule.dim(), pow(self.algebra.dim(), n)) }
    }

    pub fn cochain_from_vec(&self, n: usize, v: &[Rat]) -> Result<HCochain, HochschildError> {
        HCochain::from_vec(n, self.bimodule.dim(), pow(self.algebra.dim(), n), v)
    }

    fn check(&self, phi: &HCochain) -> Result<(), HochschildError> {
        let (r, c) = phi.matrix.shape();
        if r != self.bimodule.dim() || c != pow(self.algebra.dim(), phi.degree) {
            return Err(HochschildError::Shape { rows: r, cols: c, degree: phi.degree });
        }
        Ok(())
    }

    pub fn d_hoch(&self, phi: &HCochain) -> Result<HCochain, HochschildError> {
        self.check(phi)?;
        let v = self.differential(phi.degree).mul_vec(&phi.to_vec());
        self.cochain_from_vec(phi.degree + 1, &v)
    }

    /// Vanishing on every tuple with a unit slot.
    pub fn is_normalized(&self, phi: &HCochain) -> Result<bool, HochschildError> {
        self.check(phi)?;
        let u = self.algebra.unit_index().ok_or(HochschildError::UnitNotInBasis)?;
        let with_unit = tuples_with_slot(self.algebra.dim(), phi.degree, u);
        Ok(phi.matrix.triplets().all(|(_, t, _)| !with_unit[t]))
    }

    /// `φ^op ∈ C^n(A^op, M^op)`.
    pub fn op_cochain(&self, phi: &HCochain) -> Result<HCochain, HochschildError> {
        self.check(phi)?;
        let v = self.op_matrix(phi.degree).mul_vec(&phi.to_vec());
        self.cochain_from_vec(phi.degree, &v)
    }
}

/// Betti number of `HH^n(A, M)` with representatives; when `normalized` is
/// set the normalized complex is computed too and the two must agree.
pub fn hh_algebra(
    a: Arc<FinAlgebra<Rat>>,
    m: FinBimodule,
    n: usize,
    normalized: bool,
) -> Result<HochschildReport, HochschildError> {
    let cx = HochschildComplex::new(a, m);
    let full = cx.cohomology(n, false)?;
    let normalized_betti = if normalized {
        let nb = cx.cohomology(n, true)?.dim;
        if nb != full.dim {
            return Err(HochschildError::QuasiIsomorphismFailed { degree: n, full: full.dim, normalized: nb });
        }
        Some(nb)
    } else {
        None
    };
    let representatives =
        full.representatives.columns().iter().map(|c| cx.cochain_from_vec(n, c)).collect::<Result<_, _>>()?;
    Ok(HochschildReport { degree: n, betti: full.dim, normalized_betti, representatives })
}

/// A Hochschild `n`-cochain as a `dim M × d^n` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HCochain {
    pub degree: usize,
    pub matrix: RatMatrix,
}

impl HCochain {
    pub fn from_vec(degree: usize, dim_m: usize, ntuples: usize, v: &[Rat]) -> Result<Self, HochschildError> {
        if v.len() != dim_m * ntuples {
            return Err(HochschildError::Shape { rows: dim_m, cols: v.len() / dim_m.max(1), degree });
        }
        let entries = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k % dim_m, k / dim_m, x.clone()));
        Ok(HCochain { degree, matrix: RatMatrix::from_triplets(dim_m, ntuples, entries) })
    }

    /// Column-major coordinates.
    pub fn to_vec(&self) -> Vec<Rat> {
        let rows = self.matrix.rows();
        let mut out = vec![Rat::zero(); rows * self.matrix.cols()];
        for (i, j, v) in self.matrix.triplets() {
            out[j * rows + i] = v.clone();
        }
        out
    }

    /// `φ(e_{t_1}, ..., e_{t_n})`.
    pub fn eval_basis(&self, t: &[usize], d: usize) -> Vec<Rat> {
        self.matrix.column(tuple_index(t, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rank, rat};

    fn dual() -> Arc<FinAlgebra<Rat>> {
        Arc::new(FinAlgebra::dual_numbers())
    }

    #[test]
    fn degree_zero_is_commutator() {
        let a = Arc::new(FinAlgebra::upper_triangular());
        let cx = HochschildComplex::regular(a.clone());
        // m = e12, a = e22: a m - m a = 0 - e12
        let m = cx.cochain_from_vec(0, &a.basis(1)).unwrap();
        let dm = cx.d_hoch(&m).unwrap();
        assert_eq!(dm.eval_basis(&[2], 3), vec![rat(0), rat(-1), rat(0)]);
        let commutative = HochschildComplex::regular(dual());
        assert!(commutative.differential(0).is_zero());
    }

    #[test]
    fn multiplication_is_a_cocycle() {
        for a in [FinAlgebra::dual_numbers(), FinAlgebra::upper_triangular(), FinAlgebra::matrix_algebra(2)] {
            let a = Arc::new(a);
            let cx = HochschildComplex::regular(a.clone());
            let d = a.dim();
            let cols: Vec<Vec<Rat>> = (0..d * d).map(|t| a.product(t / d, t % d).to_vec()).collect();
            let m = HCochain { degree: 2, matrix: RatMatrix::from_columns(d, &cols) };
            assert!(cx.d_hoch(&m).unwrap().matrix.is_zero());
            assert!(!cx.is_normalized(&m).unwrap());
        }
    }

    #[test]
    fn squares_to_zero() {
        for a in [FinAlgebra::dual_numbers(), FinAlgebra::upper_triangular(), FinAlgebra::truncated_polynomial(3)] {
            let cx = HochschildComplex::regular(Arc::new(a));
            for n in 0..3 {
                assert!(cx.differential(n + 1).mul(&cx.differential(n)).is_zero());
            }
        }
    }

    #[test]
    fn dual_numbers_betti() {
        let cx = HochschildComplex::regular(dual());
        let got: Vec<usize> = (0..5).map(|n| cx.cohomology(n, false).unwrap().dim).collect();
        assert_eq!(got, vec![2, 1, 1, 1, 1]);
        let got_n: Vec<usize> = (0..5).map(|n| cx.cohomology(n, true).unwrap().dim).collect();
        assert_eq!(got_n, got);
    }

    #[test]
    fn separable_algebras_are_rigid() {
        let q = Arc::new(FinAlgebra::rationals());
        let qq = Arc::new(FinAlgebra::product_of(&[FinAlgebra::rationals(), FinAlgebra::rationals()]));
        for (a, h0) in [(q, 1), (qq, 2)] {
            let r = hh_algebra(a.clone(), FinBimodule::regular(&a), 0, true).unwrap();
            assert_eq!(r.betti, h0);
            for n in 1..4 {
                assert_eq!(hh_algebra(a.clone(), FinBimodule::regular(&a), n, true).unwrap().betti, 0);
            }
        }
    }

    #[test]
    fn op_examples() {
        let a = Arc::new(FinAlgebra::upper_triangular());
        let cx = HochschildComplex::regular(a);
        assert_eq!(op_sign(0), rat(-1));
        assert_eq!(op_sign(1), rat(1));
        assert_eq!(op_sign(2), rat(1));
        assert_eq!(op_sign(3), rat(-1));
        // φ^op(a, b, c) = -φ(c, b, a)
        let v: Vec<Rat> = (0..cx.cochain_dim(3)).map(|k| rat(k as i64 % 7 - 3)).collect();
        let phi = cx.cochain_from_vec(3, &v).unwrap();
        let op = cx.op_cochain(&phi).unwrap();
        let neg: Vec<Rat> = phi.eval_basis(&[2, 0, 1], 3).into_iter().map(|x| -x).collect();
        assert_eq!(op.eval_basis(&[1, 0, 2], 3), neg);
    }

    #[test]
    fn op_is_a_chain_map() {
        let cx = HochschildComplex::regular(Arc::new(FinAlgebra::upper_triangular()));
        let op = cx.opposite();
        for n in 0..3 {
            let lhs = cx.op_matrix(n + 1).mul(&cx.differential(n));
            let rhs = op.differential(n).mul(&cx.op_matrix(n));
            assert_eq!(lhs, rhs, "degree {n}");
            assert_eq!(cx.op_matrix(n).mul(&cx.op_matrix(n)), RatMatrix::identity(cx.cochain_dim(n)));
        }
    }

    #[test]
    fn normalized_coordinates_exclude_unit_slots() {
        let cx = HochschildComplex::regular(dual());
        // tuples over {1, x} avoiding 1: only (x, x)
        assert_eq!(cx.normalized_coords(2).unwrap().len(), 2);
        let d = cx.normalized_differential(1).unwrap();
        assert_eq!(rank(&d), rank(&cx.differential(1).select_cols(&cx.normalized_coords(1).unwrap())));
        assert!(cx.is_normalized(&cx.zero_cochain(3)).unwrap());
    }
}
