//! Univariate polynomials over Z and over prime fields, factorization over
//! both, resultants and discriminants.

pub mod fp;
mod parse;
mod z;
mod zfactor;

pub use fp::PolyFp;
pub use parse::{parse_rational_poly, ParseError};
pub use z::PolyZ;
pub use zfactor::{factor_z, is_irreducible_z};
