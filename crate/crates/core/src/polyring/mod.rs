//! Sparse multivariate polynomials over `Z` and `F2` with graded variables,
//! and the integer linear algebra used to certify injectivity.

mod linalg;
mod poly;

pub use linalg::{kernel_is_zero, rank_mod2, smith_normal_form, IntMatrix, Modulus, SmithForm};
pub use poly::{monomials_of_weighted_degree, Coefficients, Monomial, PolyRing, Polynomial, Substitution, VarSpec};
