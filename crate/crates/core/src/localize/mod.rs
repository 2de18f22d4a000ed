//! Localization of finite form rings at maximal ideals of a central subring,
//! and the induced maps on unitary groups.

mod base;
mod maps;
mod ring;

use thiserror::Error;

use crate::formring::{Elem, ElementSet, FiniteRing, FormRingError, RingError};
use crate::groups::GroupError;
use crate::unitary::UnitaryError;

pub use base::{base_families, supplemented_base_axioms, BaseFamilies, SupplementedBaseReport};
pub use maps::{
    find_noncentral_witness, InjectivityReport, Localization, NoncentralWitness, SquareReport,
};
pub use ring::LocalizedRing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalizeError {
    #[error("{0} is not commutative")]
    NotCommutative(ElementSet),
    #[error("{0} is not a subring")]
    NotSubring(ElementSet),
    #[error("multiplicative set {set} is invalid: {reason}")]
    InvalidMultiplicativeSet { set: ElementSet, reason: &'static str },
    #[error("no element of S satisfies both s0 properties")]
    NoS0,
    #[error("the class is central; no witness exists")]
    NoWitness,
    #[error("no maximal ideal separates the class (I ∩ C ⊆ m fails or every localization is central)")]
    WitnessNotFound,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    FormRing(#[from] FormRingError),
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A multiplicatively closed subset of the center containing `1` and not `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicativeSet {
    elements: ElementSet,
}

impl MultiplicativeSet {
    pub fn new(ring: &FiniteRing, elements: ElementSet) -> Result<Self, LocalizeError> {
        let bad = |reason| LocalizeError::InvalidMultiplicativeSet {
            set: elements,
            reason,
        };
        if !elements.contains(ring.one()) {
            return Err(bad("does not contain 1"));
        }
        if elements.contains(ring.zero()) {
            return Err(bad("contains 0"));
        }
        if !elements.iter().all(|s| ring.is_central(s)) {
            return Err(bad("not central"));
        }
        if !elements.iter().all(|s| elements.contains(ring.conj(s))) {
            return Err(bad("not stable under the involution"));
        }
        for a in elements.iter() {
            for b in elements.iter() {
                if !elements.contains(ring.mul(a, b)) {
                    return Err(bad("not closed under multiplication"));
                }
            }
        }
        Ok(MultiplicativeSet { elements })
    }

    /// `S_m = C \ m`.
    pub fn complement(ring: &FiniteRing, c: ElementSet, m: ElementSet) -> Result<Self, LocalizeError> {
        Self::new(ring, c.difference(m))
    }

    pub fn elements(&self) -> ElementSet {
        self.elements
    }

    pub fn contains(&self, s: Elem) -> bool {
        self.elements.contains(s)
    }
}

fn check_commutative_subring(ring: &FiniteRing, c: ElementSet) -> Result<(), LocalizeError> {
    let closed = c.contains(ring.zero())
        && c.contains(ring.one())
        && c.iter().all(|a| {
            c.contains(ring.neg(a)) && c.iter().all(|b| c.contains(ring.add(a, b)) && c.contains(ring.mul(a, b)))
        });
    if !closed {
        return Err(LocalizeError::NotSubring(c));
    }
    if !c.iter().all(|a| c.iter().all(|b| ring.mul(a, b) == ring.mul(b, a))) {
        return Err(LocalizeError::NotCommutative(c));
    }
    Ok(())
}

/// The ideal of the subring `C` generated by `gens`.
fn c_ideal_closure(ring: &FiniteRing, c: ElementSet, gens: ElementSet) -> ElementSet {
    let mut j = ring.additive_closure(gens.union(ElementSet::singleton(ring.zero())));
    loop {
        let next = ring.additive_closure(
            c.iter()
                .flat_map(|a| j.iter().map(move |x| ring.mul(a, x)))
                .collect::<ElementSet>()
                .union(j),
        );
        if next == j {
            return j;
        }
        j = next;
    }
}

/// All maximal ideals of the commutative subring `C`, in canonical order.
pub fn maximal_ideals(ring: &FiniteRing, c: ElementSet) -> Result<Vec<ElementSet>, LocalizeError> {
    check_commutative_subring(ring, c)?;
    let zero = ElementSet::singleton(ring.zero());
    let mut ideals = vec![zero];
    let mut k = 0;
    while k < ideals.len() {
        let j = ideals[k];
        for x in c.difference(j).iter() {
            let bigger = c_ideal_closure(ring, c, j.union(ElementSet::singleton(x)));
            if !ideals.contains(&bigger) {
                ideals.push(bigger);
            }
        }
        k += 1;
    }
    let proper: Vec<ElementSet> = ideals.into_iter().filter(|j| !j.contains(ring.one())).collect();
    let mut maximal: Vec<ElementSet> = proper
        .iter()
        .filter(|j| !proper.iter().any(|k| k != *j && j.is_subset(*k)))
        .copied()
        .collect();
    maximal.sort_by(|a, b| a.canonical_cmp(b));
    Ok(maximal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set<const N: usize>(xs: [Elem; N]) -> ElementSet {
        ElementSet::from(xs)
    }

    #[test]
    fn maximal_ideals_of_cyclic_rings() {
        let z6 = FiniteRing::zmod(6).unwrap();
        let mut got = maximal_ideals(&z6, z6.all()).unwrap();
        got.sort_by_key(|j| j.len());
        assert_eq!(got, vec![set([0, 3]), set([0, 2, 4])]);
        let z4 = FiniteRing::zmod(4).unwrap();
        assert_eq!(maximal_ideals(&z4, z4.all()).unwrap(), vec![set([0, 2])]);
        let z5 = FiniteRing::zmod(5).unwrap();
        assert_eq!(maximal_ideals(&z5, z5.all()).unwrap(), vec![set([0])]);
    }

    #[test]
    fn bad_subrings() {
        let z6 = FiniteRing::zmod(6).unwrap();
        assert_eq!(
            maximal_ideals(&z6, set([0, 2, 4])),
            Err(LocalizeError::NotSubring(set([0, 2, 4])))
        );
    }

    #[test]
    fn multiplicative_sets() {
        let z6 = FiniteRing::zmod(6).unwrap();
        assert!(MultiplicativeSet::new(&z6, set([1, 3, 5])).is_ok());
        assert!(MultiplicativeSet::new(&z6, set([1, 2, 4])).is_ok());
        assert!(MultiplicativeSet::new(&z6, set([1, 2])).is_err());
        assert!(MultiplicativeSet::new(&z6, set([0, 1])).is_err());
        assert!(MultiplicativeSet::new(&z6, set([3, 5])).is_err());
        let s = MultiplicativeSet::complement(&z6, z6.all(), set([0, 2, 4])).unwrap();
        assert_eq!(s.elements(), set([1, 3, 5]));
    }
}
