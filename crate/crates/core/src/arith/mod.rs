//! Exact scalar arithmetic: ℚ / ℚ(i) scalars, sparse multivariate
//! polynomials, and reduced rational functions.

mod gcd;
mod multi_index;
mod poly;
mod ratfunc;
mod scalar;

pub use gcd::{gcd, lcm};
pub use multi_index::MultiIndex;
pub use poly::Polynomial;
pub use ratfunc::{common_denominator, RationalFunction};
pub use scalar::{FieldMode, Scalar};
