//! The hyperbolic unitary group `U_2n(R, Λ)`.
//!
//! Rows and columns are indexed by `Ω = {1, …, n, -n, …, -1}` in that
//! order, so index `i > 0` sits at position `i` and `i < 0` at `2n + 1 + i`
//! (1-based). Commutators are `[g, h] = g h g⁻¹ h⁻¹` and conjugation is
//! `ʰg = h g h⁻¹`.

mod congruence;
mod context;
mod elementary;
mod matrix;
mod relations;

use thiserror::Error;

use crate::formring::{Elem, FormRingError};

pub use congruence::{Lemma46Check, Lemma46Report, Move, PropagationReport};
pub use context::{Key, Method, UnitaryContext};
pub use elementary::Root;
pub use matrix::Matrix;
pub use relations::{QReductionReport, RelationFailure, RelationReport, SweepMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitaryError {
    #[error("index {value} is not in Ω for n = {n}")]
    InvalidIndex { value: i32, n: usize },
    #[error("rank n = {0} is not supported (need 1 ≤ n ≤ 8)")]
    Rank(usize),
    #[error("expected a {expected}x{expected} matrix, found {found}x{found}")]
    Shape { expected: usize, found: usize },
    #[error("expected a vector of length {expected}, found {found}")]
    VectorLength { expected: usize, found: usize },
    #[error("entry {entry} is not an element of a ring of order {order}")]
    Entry { entry: Elem, order: usize },
    #[error("matrix is not invertible over the ring")]
    Singular,
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("T_ij needs i != ±j, got i={i}, j={j}")]
    ShortRootIndices { i: i32, j: i32 },
    #[error("α={alpha} is not admissible for the long root at i={i}")]
    LongRootValue { i: i32, alpha: Elem },
    #[error("invertibility of a {dim}x{dim} matrix over a noncommutative ring of order {order} is too costly to decide")]
    Undecidable { dim: usize, order: usize },
    #[error(transparent)]
    FormIdeal(#[from] FormRingError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// `ε(i)`: `+1` on `{1..n}`, `-1` on `{-n..-1}`.
pub fn eps(value: i32) -> Result<i32, UnitaryError> {
    match value {
        0 => Err(UnitaryError::InvalidIndex { value, n: 0 }),
        v if v > 0 => Ok(1),
        _ => Ok(-1),
    }
}

/// 1-based matrix position of the index `value`.
pub fn pos(value: i32, n: usize) -> Result<usize, UnitaryError> {
    OmegaIndex::new(value, n).map(|i| i.pos(n))
}

/// An element of `Ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaIndex(i32);

impl OmegaIndex {
    pub fn new(value: i32, n: usize) -> Result<Self, UnitaryError> {
        if value == 0 || value.unsigned_abs() as usize > n {
            Err(UnitaryError::InvalidIndex { value, n })
        } else {
            Ok(OmegaIndex(value))
        }
    }

    /// The index at 0-based position `p` of a rank-`n` basis.
    pub fn at(p: usize, n: usize) -> Self {
        assert!(p < 2 * n, "position {p} out of range for n = {n}");
        if p < n {
            OmegaIndex(p as i32 + 1)
        } else {
            OmegaIndex(p as i32 - 2 * n as i32)
        }
    }

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn eps(self) -> i32 {
        self.0.signum()
    }

    pub fn neg(self) -> Self {
        OmegaIndex(-self.0)
    }

    /// 1-based position.
    pub fn pos(self, n: usize) -> usize {
        if self.0 > 0 {
            self.0 as usize
        } else {
            (2 * n as i32 + 1 + self.0) as usize
        }
    }

    /// 0-based position.
    pub fn idx(self, n: usize) -> usize {
        self.pos(n) - 1
    }
}

impl std::fmt::Display for OmegaIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_and_pos() {
        assert_eq!(eps(3).unwrap(), 1);
        assert_eq!(eps(-2).unwrap(), -1);
        assert!(eps(0).is_err());
        assert_eq!(pos(1, 3).unwrap(), 1);
        assert_eq!(pos(-3, 3).unwrap(), 4);
        assert_eq!(pos(-1, 3).unwrap(), 6);
        assert!(pos(4, 3).is_err());
    }

    #[test]
    fn positions_round_trip() {
        for n in 1..=5 {
            for p in 0..2 * n {
                assert_eq!(OmegaIndex::at(p, n).idx(n), p);
            }
        }
    }
}
