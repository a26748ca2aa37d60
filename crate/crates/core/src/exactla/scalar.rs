//! Scalar rings: the rationals and the dual numbers Q[e]/(e^2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rat::Rat;

/// A commutative ring that is a finite-dimensional Q-algebra with a fixed
/// Q-basis of scalars (`q_unit(0) = 1`).
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Dimension over Q.
    const WIDTH: usize;
    fn from_rat(r: Rat) -> Self;
    fn q_unit(k: usize) -> Self;
    fn q_coords(&self) -> Vec<Rat>;
    fn from_q_coords(c: &[Rat]) -> Self;
}

impl Scalar for Rat {
    const WIDTH: usize = 1;

    fn from_rat(r: Rat) -> Self {
        r
    }

    fn q_unit(k: usize) -> Self {
        assert_eq!(k, 0);
        Rat::one()
    }

    fn q_coords(&self) -> Vec<Rat> {
        vec![self.clone()]
    }

    fn from_q_coords(c: &[Rat]) -> Self {
        c[0].clone()
    }
}

/// `re + eps * e` with `e^2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dual {
    pub re: Rat,
    pub eps: Rat,
}

impl Dual {
    pub fn new(re: Rat, eps: Rat) -> Self {
        Dual { re, eps }
    }

    pub fn epsilon() -> Self {
        Dual { re: Rat::zero(), eps: Rat::one() }
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}e", self.re, self.eps)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, r: Dual) -> Dual {
        Dual { re: self.re + r.re, eps: self.eps + r.eps }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, r: Dual) -> Dual {
        Dual { re: self.re - r.re, eps: self.eps - r.eps }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, r: Dual) -> Dual {
        let eps = &self.re * &r.eps + &self.eps * &r.re;
        Dual { re: self.re * r.re, eps }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual { re: -self.re, eps: -self.eps }
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Dual { re: Rat::zero(), eps: Rat::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl One for Dual {
    fn one() -> Self {
        Dual { re: Rat::one(), eps: Rat::zero() }
    }
}

impl Scalar for Dual {
    const WIDTH: usize = 2;

    fn from_rat(r: Rat) -> Self {
        Dual { re: r, eps: Rat::zero() }
    }

    fn q_unit(k: usize) -> Self {
        match k {
            0 => Dual::one(),
            1 => Dual::epsilon(),
            _ => panic!("dual numbers have Q-dimension 2"),
        }
    }

    fn q_coords(&self) -> Vec<Rat> {
        vec![self.re.clone(), self.eps.clone()]
    }

    fn from_q_coords(c: &[Rat]) -> Self {
        Dual { re: c[0].clone(), eps: c[1].clone() }
    }
}

/// Q coordinates of an S-vector of length `d`: block `k` holds the `k`-th
/// coordinate of every entry, so `[re; eps]` for dual numbers.
pub fn flatten<S: Scalar>(v: &[S]) -> Vec<Rat> {
    let d = v.len();
    let mut out = vec![Rat::zero(); S::WIDTH * d];
    for (i, x) in v.iter().enumerate() {
        for (k, c) in x.q_coords().into_iter().enumerate() {
            out[k * d + i] = c;
        }
    }
    out
}

pub fn unflatten<S: Scalar>(v: &[Rat]) -> Vec<S> {
    assert_eq!(v.len() % S::WIDTH, 0);
    let d = v.len() / S::WIDTH;
    (0..d)
        .map(|i| {
            let c: Vec<Rat> = (0..S::WIDTH).map(|k| v[k * d + i].clone()).collect();
            S::from_q_coords(&c)
        })
        .collect()
}

/// `(re, eps)` split of a dual vector.
pub fn split_dual(v: &[Dual]) -> (Vec<Rat>, Vec<Rat>) {
    (v.iter().map(|x| x.re.clone()).collect(), v.iter().map(|x| x.eps.clone()).collect())
}

pub fn join_dual(re: &[Rat], eps: &[Rat]) -> Vec<Dual> {
    assert_eq!(re.len(), eps.len());
    re.iter().zip(eps).map(|(a, b)| Dual::new(a.clone(), b.clone())).collect()
}
