//! Finite rings with involution, form parameters and form ideals.
//!
//! A form ring is a ring `R` with involution, a central unit `λ` with
//! `λλ̄ = 1`, and an additive subgroup `Λ` sandwiched between
//! `Λ_min = {r - λr̄}` and `Λ_max = {r : r = -λr̄}` that is stable under
//! `a -> r a r̄`. A form ideal `(I, Γ)` is the relative version of this data.

mod param;
mod ring;
mod set;

use thiserror::Error;

pub use param::{
    enumerate_form_parameters, lambda_max, lambda_min, subring_c, FormIdeal, FormRing, Violation,
};
pub use ring::{FiniteRing, MAX_ORDER};
pub use set::ElementSet;

/// A ring element, identified by its index in the operation tables.
pub type Elem = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("ring order {order} is outside the supported range 2..=64")]
    OrderOutOfRange { order: usize },
    #[error("operation tables do not have shape {order}x{order}")]
    TableShape { order: usize },
    #[error("ring axiom violated ({axiom}): {witness}")]
    Axiom { axiom: &'static str, witness: String },
    #[error("involution axiom violated ({axiom}): {witness}")]
    Involution { axiom: &'static str, witness: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormRingError {
    #[error("element {0} is not a valid λ (must be central with λλ̄ = 1)")]
    InvalidLambda(Elem),
    #[error("invalid form ring: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("{0} is not an involution-invariant ideal")]
    NotInvariantIdeal(ElementSet),
    #[error("invalid form ideal: {}", join_violations(.0))]
    InvalidFormIdeal(Vec<Violation>),
    #[error("element {x} lies in I and is not in Γ_max \\ Γ; no form ideal is defined by it")]
    NoFormIdealDefined { x: Elem },
    #[error("{0} is not a subring of the center")]
    NotCentralSubring(ElementSet),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
