//! Ideals of polynomial rings over the rationals: Gröbner bases, normal
//! forms, intersections, quotients, saturation, elimination and graded
//! pieces.

mod groebner;
mod ideal;
mod order;

pub use ideal::{Ideal, IdealError};
pub use order::TermOrder;

