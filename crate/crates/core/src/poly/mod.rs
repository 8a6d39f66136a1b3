//! Sparse multivariate polynomials and the univariate toolkit built on them.

pub mod binary;
pub mod factor;
pub mod intpoly;
pub mod modp;
mod monomial;
mod parse;
mod polynomial;
pub mod resultant;
pub mod univariate;

pub use monomial::{count_monomials, monomials_of_degree, Monomial, MAX_VARS};
pub use parse::parse_auto;
pub use polynomial::{Poly, Vars};
pub use binary::{factor_univariate, squarefree, SquarefreeDecomposition};
pub use intpoly::ZPoly;
pub use resultant::{discriminant, resultant, subresultant, trial_divide};
pub use univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("variable lists differ: {0}")]
    VarMismatch(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("degree bound exceeded: {0}")]
    DegreeBound(String),
}
