//! Exact computations with linear partial differential operators with
//! polynomial coefficients: Weyl-closure membership with certificates,
//! Riquier bases, and truncated formal power-series solutions.

pub mod arith;
pub mod closure;
pub mod error;
pub mod linalg;
pub mod ranking;
pub mod riquier;
pub mod solver;
pub mod syntax;
pub mod weyl;

pub use arith::{FieldMode, MultiIndex, Polynomial, RationalFunction, Scalar};
pub use closure::{
    cross_check, membership_via_span, oracle_division_member_1d, verify_witness, weyl_closure_member, CrossCheck,
    MembershipResult, Witness,
};
pub use error::{Error, Result};
pub use riquier::{complete_to_riquier_basis, RiquierBasis};
pub use weyl::{Derivative, Dims, Jet, OperatorVector};
