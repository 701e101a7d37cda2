//! Exact rational certification of regime membership and scheme constraints.
//!
//! Everything in this crate is arbitrary-precision rational arithmetic; no
//! floating point enters any verdict. Inequalities of the form "quantity is
//! much smaller than one" are certified as strict negativity of the exact
//! lambda-exponent obtained by substituting the parameter ansatz.

mod certificate;
mod constraints;
mod exponents;
mod scheme;

pub use certificate::{certify, Certificate, ConstraintKind, ConstraintRecord, Overrides};
pub use constraints::{
    check_constraints_a1, check_constraints_a2, in_a1, in_a2, pick_epsilon, rho_a1, rho_a2, Regime,
};
pub use exponents::{Exponents, Ext, Q};
pub use scheme::SchemeParams;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegimeError {
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("no admissible epsilon for this b: {0}")]
    InfeasibleB(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, RegimeError>;
