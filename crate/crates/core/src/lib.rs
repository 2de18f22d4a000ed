//! Hyperbolic unitary groups over finite form rings.

pub mod cli;
pub mod formring;
pub mod groups;
pub mod localize;
pub mod rng;
pub mod unitary;
