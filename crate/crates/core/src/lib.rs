//! Deterministic factor extraction for multivariate polynomials over the rationals.
//!
//! The crate recovers two kinds of irreducible factors:
//!
//! * factors of constant degree, through a monic shift, an isolating
//!   projection to three variables and a dense three-variable factorizer;
//! * sparse factors from a class that comes with an irreducibility-preserving
//!   projection oracle, through sparse interpolation of factors of
//!   three-variable projections.
//!
//! All arithmetic is exact. Modular arithmetic is used internally only
//! where the result is certified afterwards.

pub mod config;
pub mod dense;
pub mod divisibility;
pub mod engine;
pub mod error;
pub mod factor;
pub mod factorlist;
pub mod irredproj;
pub mod isolation;
pub mod par;
pub mod parse;
pub mod pit;
pub mod poly;
pub mod rational;

pub use config::Config;
pub use dense::DensePoly3;
pub use error::{Error, Result};
pub use factorlist::FactorList;
pub use parse::{parse_expression, parse_poly, parse_poly_n, parse_poly_vars, render_poly, render_poly_with};
pub use poly::{Monomial, SparsePoly};
pub use rational::Q;
