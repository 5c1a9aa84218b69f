//! The rational Weyl algebra `B_m(F)` acting on `B_m(F)^n`: derivatives,
//! standard-form operator vectors, normal-ordered products and the action
//! of operators on truncated jets.

mod derivative;
mod jet;
mod operator;
pub(crate) mod cleared;

pub use derivative::{compare_derivatives, Derivative, Dims};
pub use jet::{apply_to_jet, Jet};
pub use operator::{scalar_operator_product, OperatorVector};
