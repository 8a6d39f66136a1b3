//! Exact reconstruction of Darboux cyclides from their apparent contour.

pub mod conductor;
pub mod contour;
pub mod forward;
pub mod ideals;
pub mod linalg;
pub mod nf;
pub mod poly;
pub mod reconstruct;
pub mod scalar;

pub use poly::{Monomial, Poly, PolyError, Vars};
pub use scalar::{Fp62, Rational, Scalar};

/// Polynomials over the rationals, the working type of the pipeline.
pub type QPoly = Poly<Rational>;
/// Double-precision polynomials, used for numeric sanity checks.
pub type FPoly = Poly<f64>;
