//! Exact computation of Gerstenhaber-Schack cohomology for presheaves of
//! finite-dimensional algebras over finite categories, together with the
//! first-order deformation theory of twisted presheaves, the Hodge
//! decomposition in the commutative case, Cech comparison on meet posets and
//! descent for module prestacks.
//!
//! All arithmetic is over Q (or Q[e]/(e^2)); every verdict is exact.

pub mod exactla;
pub mod fincat;
pub mod algebra;
pub mod presheaf;
pub mod hochschild;
pub mod perm;
pub mod simpcech;
pub mod gs;
pub mod deform;
pub mod descent;
pub mod project;
pub mod fixtures;
