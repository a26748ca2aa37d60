//! Eulerian idempotents in `QS_n` and the Hodge decomposition of `C_GS` for
//! commutative presheaves.

use num_traits::Zero;
use serde::Serialize;

use super::{GsCochain, GsComplex, GsError};
use crate::exactla::{rank, solve_matrix, Rat, RatMatrix};
use crate::hochschild::{pow, tuple_index, tuple_of};
use crate::perm::{compose, inverse, permutations, rank as perm_rank, sign};
use crate::presheaf::TwistedPresheaf;
use crate::simpcech::SimpComplex;

pub const DEFAULT_IDEMPOTENT_BOUND: usize = 6;

/// How `QS_q` acts on `q`-cochains.
pub const ACTION_CONVENTION: &str = "(phi.s)(x_1, ..., x_q) = phi(x_{s^-1(1)}, ..., x_{s^-1(q)})";

/// An element `Σ c_s s` of `QS_n`, coefficients indexed by permutation rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    n: usize,
    coeffs: Vec<Rat>,
}

impl GroupElement {
    pub fn zero(n: usize) -> Self {
        GroupElement { n, coeffs: vec![Rat::default(); permutations(n).len()] }
    }

    pub fn identity(n: usize) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[0] = Rat::from_integer(1.into());
        e
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, s: &[usize]) -> &Rat {
        &self.coeffs[perm_rank(s)]
    }

    /// Nonzero terms in permutation order.
    pub fn terms(&self) -> Vec<(Vec<usize>, Rat)> {
        permutations(self.n).into_iter().zip(&self.coeffs).filter(|(_, c)| !c.is_zero()).map(|(s, c)| (s, c.clone())).collect()
    }

    pub fn add_term(&mut self, s: &[usize], c: &Rat) {
        self.coeffs[perm_rank(s)] += c;
    }

    pub fn add(&self, other: &Self) -> Self {
        GroupElement { n: self.n, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        GroupElement { n: self.n, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Product with `s t = s ∘ t`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let perms = permutations(self.n);
        let mut out = Self::zero(self.n);
        let rhs: Vec<(usize, &Rat)> = other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for &(j, b) in &rhs {
                out.coeffs[perm_rank(&compose(&perms[i], &perms[j]))] += a * b;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// `s_n = Σ_{i=1}^{n-1} Σ_{(i, n-i)-shuffles s} sgn(s) s`.
pub fn shuffle_operator(n: usize) -> GroupElement {
    let mut out = GroupElement::zero(n);
    for s in permutations(n) {
        // the identity is a shuffle for every i, any other one for a single i
        let splits = (1..n).filter(|&i| s[..i].windows(2).all(|w| w[0] < w[1]) && s[i..].windows(2).all(|w| w[0] < w[1])).count();
        if splits > 0 {
            out.add_term(&s, &Rat::from_integer((sign(&s) * splits as i64).into()));
        }
    }
    out
}

/// `e_n(1), ..., e_n(n)` by Lagrange interpolation in `s_n`, whose eigenvalues
/// are `2^r - 2`; idempotency, orthogonality and completeness are checked.
pub fn eulerian_idempotents(n: usize, bound: usize) -> Result<Vec<GroupElement>, GsError> {
    if n == 0 {
        return Err(GsError::Shape("Eulerian idempotents start in degree 1".into()));
    }
    if n > bound {
        return Err(GsError::BoundExceeded { n, bound });
    }
    let t = shuffle_operator(n);
    let mut powers = vec![GroupElement::identity(n)];
    for k in 1..n {
        powers.push(powers[k - 1].mul(&t));
    }
    let lambda: Vec<Rat> = (1..=n).map(|r| Rat::from_integer(((1i64 << r) - 2).into())).collect();
    let mut out = Vec::new();
    for r in 0..n {
        // coefficients of Π_{j≠r} (x - λ_j) / (λ_r - λ_j), lowest degree first
        let mut poly = vec![Rat::from_integer(1.into())];
        for j in (0..n).filter(|&j| j != r) {
            let denom = &lambda[r] - &lambda[j];
            let mut next = vec![Rat::default(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] += c / &denom;
                next[k] -= c * &lambda[j] / &denom;
            }
            poly = next;
        }
        let e = poly.iter().zip(&powers).fold(GroupElement::zero(n), |acc, (c, p)| acc.add(&p.scale(c)));
        out.push(e);
    }
    verify(&out)?;
    Ok(out)
}

fn verify(es: &[GroupElement]) -> Result<(), GsError> {
    let n = es[0].n;
    for (r, e) in es.iter().enumerate() {
        for (s, f) in es.iter().enumerate() {
            let prod = e.mul(f);
            let ok = if r == s { &prod == e } else { prod.is_zero() };
            if !ok {
                return Err(GsError::VerificationFailed(format!("e_{n}({}) e_{n}({}) in degree {n}", r + 1, s + 1)));
            }
        }
    }
    let sum = es.iter().skip(1).fold(es[0].clone(), |acc, e| acc.add(e));
    if sum != GroupElement::identity(n) {
        return Err(GsError::VerificationFailed(format!("the idempotents of degree {n} do not sum to 1")));
    }
    Ok(())
}

/// The matrix of `φ ↦ φ·e` on `d^q` tuples with `m`-dimensional values.
pub fn tuple_action(e: &GroupElement, d: usize, m: usize) -> RatMatrix {
    let q = e.n;
    let mut entries = Vec::new();
    for (s, c) in e.terms() {
        let si = inverse(&s);
        for t in 0..pow(d, q) {
            let tup = tuple_of(t, d, q);
            let moved: Vec<usize> = (0..q).map(|k| tup[si[k]]).collect();
            let src = tuple_index(&moved, d);
            for x in 0..m {
                entries.push((t * m + x, src * m + x, c.clone()));
            }
        }
    }
    RatMatrix::from_triplets(m * pow(d, q), m * pow(d, q), entries)
}

/// The Hodge projectors of a commutative presheaf up to a fixed degree.
pub struct HodgeDecomposition<'a> {
    cx: &'a GsComplex,
    /// `idempotents[q - 1][r - 1] = e_q(r)`.
    idempotents: Vec<Vec<GroupElement>>,
}

impl<'a> HodgeDecomposition<'a> {
    /// Prepares projectors for cochains of degree at most `max_degree`.
    pub fn new(cx: &'a GsComplex, max_degree: usize, bound: usize) -> Result<Self, GsError> {
        cx.require_commutative()?;
        let idempotents = (1..=max_degree).map(|q| eulerian_idempotents(q, bound)).collect::<Result<_, _>>()?;
        Ok(HodgeDecomposition { cx, idempotents })
    }

    pub fn max_degree(&self) -> usize {
        self.idempotents.len()
    }

    /// `Π_r` on degree `n`: the identity on the bottom row for `r = 0`,
    /// `e_q(r)` on each `C^{p,q}` with `1 ≤ r ≤ q`.
    pub fn projector(&self, r: usize, n: usize) -> RatMatrix {
        assert!(n <= self.max_degree(), "degree {n} is beyond the prepared idempotents");
        let c = self.cx.presheaf().base();
        let mut blocks = Vec::new();
        for part in self.cx.parts(n) {
            for s in c.nerve(part.p).iter() {
                let (m, dc) = self.cx.dims_of(s);
                let size = m * pow(dc, part.q);
                blocks.push(match (part.q, r) {
                    (0, 0) => RatMatrix::identity(size),
                    (q, r) if q >= 1 && (1..=q).contains(&r) => tuple_action(&self.idempotents[q - 1][r - 1], dc, m),
                    _ => RatMatrix::zeros(size, size),
                });
            }
        }
        RatMatrix::block_diag(&blocks)
    }

    /// `θ = Σ_r θ_r`; the result is indexed by `r = 0, ..., n`.
    pub fn split(&self, theta: &GsCochain) -> Result<Vec<GsCochain>, GsError> {
        let n = theta.degree;
        let v = self.cx.to_vec(theta)?;
        (0..=n).map(|r| self.cx.from_vec(n, &self.projector(r, n).mul_vec(&v))).collect()
    }

    /// `d Π_r = Π_r d` from degree `n` for every `r`.
    pub fn is_stable(&self, n: usize) -> bool {
        let d = self.cx.differential(n);
        (0..=n + 1).all(|r| {
            let lhs = if r <= n { d.mul(&self.projector(r, n)) } else { RatMatrix::zeros(d.rows(), d.cols()) };
            lhs == self.projector(r, n + 1).mul(&d)
        })
    }

    /// `dim H^n(C_GS(A)_r)`.
    pub fn component_betti(&self, r: usize, n: usize) -> usize {
        let p_n = self.projector(r, n);
        let boundaries = match n.checked_sub(1) {
            Some(k) => rank(&self.cx.differential(k).mul(&self.projector(r, k))),
            None => 0,
        };
        rank(&p_n) - rank(&self.cx.differential(n).mul(&p_n)) - boundaries
    }
}

/// Splits `θ` into its Hodge components `θ_0, ..., θ_n`.
pub fn hodge_split(cx: &GsComplex, theta: &GsCochain, bound: usize) -> Result<Vec<GsCochain>, GsError> {
    HodgeDecomposition::new(cx, theta.degree.max(1), bound)?.split(theta)
}

#[derive(Debug, Clone, Serialize)]
pub struct HodgeComponent {
    pub r: usize,
    pub betti: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HodgeReport {
    pub degree: usize,
    pub action_convention: &'static str,
    pub components: Vec<HodgeComponent>,
    pub total_betti: usize,
    /// Every component is closed under `d_GS` into the next degree.
    pub stable: bool,
    pub additive: bool,
    /// Betti number of the simplicial cohomology of the underlying presheaf.
    pub bottom_row_betti: usize,
    pub bottom_row_matches: bool,
}

impl HodgeReport {
    pub fn passed(&self) -> bool {
        self.stable && self.additive && self.bottom_row_matches
    }
}

/// Component Betti numbers of `H^n_GS(A)` with the stability and additivity checks.
pub fn hodge_report(a: &TwistedPresheaf<Rat>, n: usize, bound: usize) -> Result<HodgeReport, GsError> {
    let cx = GsComplex::new(a)?;
    let hd = HodgeDecomposition::new(&cx, n + 1, bound)?;
    let stable = hd.is_stable(n) && n.checked_sub(1).is_none_or(|k| hd.is_stable(k));
    let components: Vec<HodgeComponent> = (0..=n).map(|r| HodgeComponent { r, betti: hd.component_betti(r, n) }).collect();
    let total_betti = cx.cohomology(n, super::Kind::Full)?.dim;
    let bottom = SimpComplex::of(crate::simpcech::ModPresheaf::underlying(a));
    let bottom_row_betti = bottom.cohomology(n, false).map_err(|e| GsError::Shape(e.to_string()))?.dim;
    Ok(HodgeReport {
        degree: n,
        action_convention: ACTION_CONVENTION,
        additive: components.iter().map(|c| c.betti).sum::<usize>() == total_betti,
        bottom_row_matches: components[0].betti == bottom_row_betti,
        components,
        total_betti,
        stable,
        bottom_row_betti,
    })
}

/// The outcome of lifting `θ^σ` through `(f^σ)^{⊗r}` on one simplex.
#[derive(Debug, Clone, Serialize)]
pub struct FactorResult {
    pub simplex: String,
    /// `θ^σ e_r(r) = θ^σ`.
    pub in_top_component: bool,
    /// `Θ^σ: A(dσ)^{⊗r} -> A(dσ)` when it exists.
    #[serde(skip)]
    pub lift: Option<RatMatrix>,
    /// The lift is the only one.
    pub unique: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub p: usize,
    pub r: usize,
    pub results: Vec<FactorResult>,
    /// Simplices where no lift exists.
    pub failures: Vec<String>,
}

impl FactorReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn flatten(m: &RatMatrix) -> Vec<Rat> {
    let mut out = vec![Rat::default(); m.rows() * m.cols()];
    for (i, j, v) in m.triplets() {
        out[j * m.rows() + i] = v.clone();
    }
    out
}

/// Solves `Θ^σ ∘ (f^σ)^{⊗r} = θ^σ` for every `σ ∈ N_p`; `blocks[k]` is the
/// `dim A(dσ) × dim A(cσ)^r` block of the `k`-th simplex.
pub fn factor_through(cx: &GsComplex, p: usize, r: usize, blocks: &[RatMatrix], bound: usize) -> Result<FactorReport, GsError> {
    let a = cx.presheaf();
    let c = a.base();
    let nerve = c.nerve(p);
    if blocks.len() != nerve.len() {
        return Err(GsError::Shape(format!("N_{p} has {} simplices, got {} blocks", nerve.len(), blocks.len())));
    }
    let top = if r >= 1 { Some(eulerian_idempotents(r, bound)?.pop().expect("r >= 1")) } else { None };
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for (s, theta) in nerve.iter().zip(blocks) {
        let (m, dc) = cx.dims_of(s);
        if theta.shape() != (m, pow(dc, r)) {
            return Err(GsError::Shape(format!("block of {} has shape {:?}", c.simplex_name(s), theta.shape())));
        }
        let v = flatten(theta);
        let in_top_component = match &top {
            Some(e) => tuple_action(e, dc, m).mul_vec(&v) == v,
            None => true,
        };
        let f = a.restriction(c.composite(s)).to_sparse();
        let fr = (0..r).fold(RatMatrix::identity(1), |acc, _| acc.kron(&f));
        let lift = solve_matrix(&fr.transpose(), &theta.transpose()).map(|x| x.transpose());
        let unique = lift.is_some() && rank(&fr) == fr.rows();
        let name = c.simplex_name(s);
        if lift.is_none() {
            failures.push(name.clone());
        }
        results.push(FactorResult { simplex: name, in_top_component, lift, unique });
    }
    Ok(FactorReport { p, r, results, failures })
}
