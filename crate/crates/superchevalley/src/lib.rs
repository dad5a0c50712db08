//! Exact computer algebra for the exceptional Lie superalgebra `D(2,1;a)`.
//!
//! The crate builds the 17-dimensional algebra over `Q[a][(1+a)^{-1}]` in a
//! Chevalley basis, verifies the basis axioms and the super Jacobi identity
//! symbolically in the parameter `a`, implements the Kostant form of the
//! enveloping algebra with PBW straightening, and realizes the generators of
//! the associated Chevalley supergroup as exact matrices over finite
//! Grassmann carrier superalgebras, including the commutator identities and
//! the big-cell factorization.

pub mod carriers;
pub mod cli;
pub mod kostant;
pub mod matrix;
pub mod roots;
pub mod scalars;
pub mod superalgebra;
pub mod supergroup;
