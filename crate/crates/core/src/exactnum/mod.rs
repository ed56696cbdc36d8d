//! Exact arithmetic foundation: big rationals, univariate polynomials over
//! Q, rational functions, factorization, resultants, and p-adic valuations.

mod factor;
pub mod intfactor;
mod modp;
mod poly;
mod rat;
mod ratfunc;
mod resultant;

pub use factor::factor;
pub use poly::Poly;
pub use rat::{canonical_proj_key, coprime_integer_coords, rat, rat_int, vp, vp_int, Rat};
pub use ratfunc::RatFunc;
pub use resultant::{determinant, resultant_binary_forms, solve_linear, sylvester_matrix, FieldElem};
