//! Finite-dimensional unital associative algebras given by structure
//! constants over Q or Q[e], with homomorphisms, modules, bimodules and
//! tensor products along homomorphisms.

mod flat;
mod hom;
mod module;

use num_traits::Zero;

use crate::exactla::{flatten, rat, solve, unflatten, DMat, Rat, RatMatrix, Scalar};

pub use flat::{check_flat_epimorphism, FlatEpiReport};
pub use hom::{check_hom, AlgebraHom, HomFailure};
pub use module::{hom_space, is_module_map, tensor_over, FinBimodule, FinModule, TensorProduct};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("structure constants have length {got}, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error("multiplication not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("unit is not two-sided on basis element {0}")]
    UnitFailure(String),
    #[error("unit is not a basis vector")]
    UnitNotBasisVector,
    #[error("not an algebra homomorphism: {0}")]
    NotAHom(String),
    #[error("module axiom fails: {0}")]
    ModuleAxiom(String),
}

/// `e_i e_j = Σ_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinAlgebra<S> {
    names: Vec<String>,
    mult: Vec<S>,
    unit: Vec<S>,
}

impl<S: Scalar> FinAlgebra<S> {
    /// Validates associativity, the unit, and that the unit is a basis vector.
    pub fn new(names: Vec<String>, mult: Vec<S>, unit: Vec<S>) -> Result<Self, AlgebraError> {
        let a = Self::new_unchecked(names, mult, unit)?;
        if let Some((i, j, k)) = a.associativity_failure() {
            return Err(AlgebraError::NotAssociative(a.names[i].clone(), a.names[j].clone(), a.names[k].clone()));
        }
        if let Some(i) = a.unit_failure() {
            return Err(AlgebraError::UnitFailure(a.names[i].clone()));
        }
        if a.unit_index().is_none() {
            return Err(AlgebraError::UnitNotBasisVector);
        }
        Ok(a)
    }

    /// Only checks shapes; the axioms are left to a later checker.
    pub fn new_unchecked(names: Vec<String>, mult: Vec<S>, unit: Vec<S>) -> Result<Self, AlgebraError> {
        let d = names.len();
        if mult.len() != d * d * d {
            return Err(AlgebraError::Shape { got: mult.len(), expected: d * d * d });
        }
        if unit.len() != d {
            return Err(AlgebraError::Shape { got: unit.len(), expected: d });
        }
        Ok(FinAlgebra { names, mult, unit })
    }

    /// Builds from sparse products `(i, j, coefficients of e_i e_j)`;
    /// unlisted products are zero.
    pub fn from_table(names: &[&str], products: &[(usize, usize, Vec<S>)], unit: Vec<S>) -> Result<Self, AlgebraError> {
        let d = names.len();
        let mut mult = vec![S::zero(); d * d * d];
        for (i, j, c) in products {
            if c.len() != d {
                return Err(AlgebraError::Shape { got: c.len(), expected: d });
            }
            for (k, x) in c.iter().enumerate() {
                mult[(i * d + j) * d + k] = x.clone();
            }
        }
        Self::new(names.iter().map(|s| s.to_string()).collect(), mult, unit)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn structure_constants(&self) -> &[S] {
        &self.mult
    }

    /// Coefficients of `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[S] {
        let d = self.dim();
        &self.mult[(i * d + j) * d..(i * d + j + 1) * d]
    }

    pub fn unit(&self) -> &[S] {
        &self.unit
    }

    /// The basis index of the unit, when the unit is a basis vector.
    pub fn unit_index(&self) -> Option<usize> {
        let ones: Vec<usize> = (0..self.dim()).filter(|&i| !self.unit[i].is_zero()).collect();
        match ones.as_slice() {
            [i] if self.unit[*i].is_one() => Some(*i),
            _ => None,
        }
    }

    pub fn basis(&self, i: usize) -> Vec<S> {
        (0..self.dim()).map(|k| if k == i { S::one() } else { S::zero() }).collect()
    }

    pub fn zero_elem(&self) -> Vec<S> {
        vec![S::zero(); self.dim()]
    }

    pub fn mul(&self, a: &[S], b: &[S]) -> Vec<S> {
        let d = self.dim();
        let mut out = vec![S::zero(); d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x.clone() * y.clone();
                for (k, c) in self.product(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].clone() + xy.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul3(&self, a: &[S], b: &[S], c: &[S]) -> Vec<S> {
        self.mul(&self.mul(a, b), c)
    }

    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.product(i, j).to_vec();
                for k in 0..d {
                    let l = self.mul(&ij, &self.basis(k));
                    let r = self.mul(&self.basis(i), self.product(j, k));
                    if l != r {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn unit_failure(&self) -> Option<usize> {
        (0..self.dim()).find(|&i| {
            let e = self.basis(i);
            self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.product(i, j) == self.product(j, i)))
    }

    pub fn is_central(&self, a: &[S]) -> bool {
        (0..self.dim()).all(|i| {
            let e = self.basis(i);
            self.mul(a, &e) == self.mul(&e, a)
        })
    }

    /// `m^op(a, b) = m(b, a)`.
    pub fn opposite(&self) -> Self {
        let d = self.dim();
        let mut mult = vec![S::zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    mult[(i * d + j) * d + k] = self.mult[(j * d + i) * d + k].clone();
                }
            }
        }
        FinAlgebra { names: self.names.clone(), mult, unit: self.unit.clone() }
    }

    /// Matrix of `x ↦ a x`.
    pub fn left_mult(&self, a: &[S]) -> DMat<S> {
        let cols: Vec<Vec<S>> = (0..self.dim()).map(|j| self.mul(a, &self.basis(j))).collect();
        DMat::from_columns(self.dim(), &cols)
    }

    /// Matrix of `x ↦ x a`.
    pub fn right_mult(&self, a: &[S]) -> DMat<S> {
        let cols: Vec<Vec<S>> = (0..self.dim()).map(|j| self.mul(&self.basis(j), a)).collect();
        DMat::from_columns(self.dim(), &cols)
    }

    /// Two-sided inverse, if any.
    pub fn inverse(&self, a: &[S]) -> Option<Vec<S>> {
        let l = self.left_mult(a).to_q();
        let y = unflatten::<S>(&solve(&l, &flatten(&self.unit))?);
        (self.mul(&y, a) == self.unit).then_some(y)
    }

    /// Restriction of scalars to Q. The Q-basis is `q_unit(k) e_i` at index
    /// `k * dim + i`, matching [`flatten`].
    pub fn to_q_algebra(&self) -> FinAlgebra<Rat> {
        let d = self.dim();
        let w = S::WIDTH;
        let n = w * d;
        let names: Vec<String> = (0..w)
            .flat_map(|k| self.names.iter().map(move |s| if k == 0 { s.clone() } else { format!("e{k}*{s}") }))
            .collect();
        let elem = |alpha: usize| {
            let mut v = self.zero_elem();
            v[alpha % d] = S::q_unit(alpha / d);
            v
        };
        let mut mult = vec![Rat::zero(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                let p = flatten(&self.mul(&elem(a), &elem(b)));
                for (k, c) in p.into_iter().enumerate() {
                    mult[(a * n + b) * n + k] = c;
                }
            }
        }
        FinAlgebra { names, mult, unit: flatten(&self.unit) }
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FinAlgebra<T> {
        FinAlgebra {
            names: self.names.clone(),
            mult: self.mult.iter().map(&f).collect(),
            unit: self.unit.iter().map(&f).collect(),
        }
    }
}

impl FinAlgebra<Rat> {
    pub fn left_mult_q(&self, a: &[Rat]) -> RatMatrix {
        self.left_mult(a).to_sparse()
    }

    pub fn right_mult_q(&self, a: &[Rat]) -> RatMatrix {
        self.right_mult(a).to_sparse()
    }

    /// The rationals.
    pub fn rationals() -> Self {
        Self::from_table(&["1"], &[(0, 0, vec![rat(1)])], vec![rat(1)]).unwrap()
    }

    /// `Q[x]/(x^n)` with basis `1, x, ..., x^(n-1)`.
    pub fn truncated_polynomial(n: usize) -> Self {
        assert!(n >= 1);
        let names: Vec<String> = (0..n).map(|i| if i == 0 { "1".into() } else if i == 1 { "x".into() } else { format!("x^{i}") }).collect();
        let mut mult = vec![Rat::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    mult[(i * n + j) * n + i + j] = rat(1);
                }
            }
        }
        let mut unit = vec![Rat::zero(); n];
        unit[0] = rat(1);
        Self::new(names, mult, unit).unwrap()
    }

    /// The dual numbers `Q[x]/(x^2)`.
    pub fn dual_numbers() -> Self {
        Self::truncated_polynomial(2)
    }

    /// `n x n` matrices with basis `E_ij` named `eij`.
    pub fn matrix_algebra(n: usize) -> Self {
        let idx = |i: usize, j: usize| i * n + j;
        let names: Vec<String> = (0..n).flat_map(|i| (0..n).map(move |j| format!("e{}{}", i + 1, j + 1))).collect();
        let d = n * n;
        let mut mult = vec![Rat::zero(); d * d * d];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    mult[(idx(i, j) * d + idx(j, k)) * d + idx(i, k)] = rat(1);
                }
            }
        }
        // the unit is not a basis vector; rewrite the basis with 1 in front
        let mut unit = vec![Rat::zero(); d];
        for i in 0..n {
            unit[idx(i, i)] = rat(1);
        }
        let a = FinAlgebra { names, mult, unit };
        if n == 1 {
            return Self::new(a.names, a.mult, a.unit).unwrap();
        }
        a.with_unit_basis().0
    }

    /// Upper-triangular 2x2 matrices, basis `e11, e12, e22`, unit rewritten
    /// as the basis `1, e12, e22` so that `1 = e11 + e22` is a basis vector.
    pub fn upper_triangular() -> Self {
        // basis: 1, e12, e22 ; e12 e22 = e12, e22 e12 = 0, e22 e22 = e22
        Self::from_table(
            &["1", "e12", "e22"],
            &[
                (0, 0, vec![rat(1), rat(0), rat(0)]),
                (0, 1, vec![rat(0), rat(1), rat(0)]),
                (0, 2, vec![rat(0), rat(0), rat(1)]),
                (1, 0, vec![rat(0), rat(1), rat(0)]),
                (2, 0, vec![rat(0), rat(0), rat(1)]),
                (1, 2, vec![rat(0), rat(1), rat(0)]),
                (2, 2, vec![rat(0), rat(0), rat(1)]),
            ],
            vec![rat(1), rat(0), rat(0)],
        )
        .unwrap()
    }

    /// `A_1 x ... x A_r`, basis rewritten so the unit is a basis vector.
    pub fn product_of(factors: &[FinAlgebra<Rat>]) -> Self {
        let d: usize = factors.iter().map(|a| a.dim()).sum();
        let mut names = Vec::new();
        let mut mult = vec![Rat::zero(); d * d * d];
        let mut unit = vec![Rat::zero(); d];
        let mut off = 0;
        for (f, a) in factors.iter().enumerate() {
            let da = a.dim();
            for i in 0..da {
                names.push(format!("{}_{}", a.names[i], f + 1));
                unit[off + i] = a.unit[i].clone();
                for j in 0..da {
                    for (k, c) in a.product(i, j).iter().enumerate() {
                        mult[((off + i) * d + off + j) * d + off + k] = c.clone();
                    }
                }
            }
            off += da;
        }
        let a = FinAlgebra { names, mult, unit };
        let (b, _) = a.with_unit_basis();
        Self::new(b.names, b.mult, b.unit).unwrap()
    }

    /// Rewrites the basis as `1, e_j (j not the first support index of 1)`.
    /// Returns the new algebra and the change of basis `P` with
    /// `old coordinates = P * new coordinates`.
    pub fn with_unit_basis(&self) -> (Self, DMat<Rat>) {
        if self.unit_index().is_some() {
            return (self.clone(), DMat::identity(self.dim()));
        }
        let d = self.dim();
        let piv = (0..d).find(|&i| !self.unit[i].is_zero()).expect("unit is nonzero");
        let mut cols = vec![self.unit.clone()];
        let mut names = vec!["1".to_string()];
        for j in 0..d {
            if j != piv {
                cols.push(self.basis(j));
                names.push(self.names[j].clone());
            }
        }
        let p = DMat::from_columns(d, &cols);
        let pinv = DMat::from_sparse(&crate::exactla::inverse(&p.to_sparse()).expect("basis change invertible"));
        let mut mult = vec![Rat::zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                let prod = pinv.mul_vec(&self.mul(&cols[i], &cols[j]));
                for (k, c) in prod.into_iter().enumerate() {
                    mult[(i * d + j) * d + k] = c;
                }
            }
        }
        let mut unit = vec![Rat::zero(); d];
        unit[0] = rat(1);
        (FinAlgebra { names, mult, unit }, p)
    }
}
