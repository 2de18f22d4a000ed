//! Explicitly enumerated subgroups of `U_2n(R, Λ)` and the subgroup families
//! built from root elements and congruence conditions.

mod enumerate;
mod families;
mod sandwich;

use std::sync::Arc;

use indexmap::IndexSet;
use thiserror::Error;

use crate::unitary::{Key, Matrix, UnitaryContext, UnitaryError};

pub use enumerate::{enumerate_u, order_lower_bound, VECTOR_LIMIT};
pub use families::{
    commutator_subgroup, eu_group, eu_pre, eu_rel, from_elements, in_cu, in_cu_necessary,
    principal_congruence, cu_subgroup,
};
pub use sandwich::{
    is_e_normal, level_of, make_pivot_invertible, sample_e_normal, sandwich_check, Level,
    PivotSearch, SandwichReport, Workspace,
};

/// Default limit on the number of elements of any closure.
pub const DEFAULT_CAP: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded the cap of {cap} elements ({reached} reached, {frontier} still unexpanded)")]
    CapExceeded {
        cap: usize,
        reached: usize,
        frontier: usize,
    },
    #[error("generator {0} does not lie in the ambient group")]
    NotInAmbient(Matrix),
    #[error("the given elements are not closed under multiplication")]
    NotAGroup,
    #[error("the group has at least {bound} elements, above the cap of {cap}")]
    OrderAboveCap { cap: usize, bound: u128 },
    #[error("vector space of size {size} is too large to enumerate the group")]
    Infeasible { size: u128 },
    #[error("no generating set of U is available; necessary-condition mode required")]
    NecessaryConditionModeRequired,
    #[error("element is central modulo the congruence subgroup; no witness exists")]
    NoWitness,
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
}

/// A subgroup of `U_2n(R, Λ)` given by all of its elements and a designated
/// generating set.
///
/// Elements are stored as packed keys in discovery order, identity first.
#[derive(Clone)]
pub struct FiniteSubgroup {
    ctx: Arc<UnitaryContext>,
    generators: Vec<Key>,
    elements: Arc<IndexSet<Key>>,
}

impl std::fmt::Debug for FiniteSubgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteSubgroup")
            .field("order", &self.order())
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl FiniteSubgroup {
    /// `{e}`.
    pub fn trivial(ctx: Arc<UnitaryContext>) -> Self {
        let mut elements = IndexSet::new();
        elements.insert(ctx.identity_key());
        FiniteSubgroup {
            ctx,
            generators: Vec::new(),
            elements: Arc::new(elements),
        }
    }

    pub fn ctx(&self) -> &Arc<UnitaryContext> {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generator_keys(&self) -> &[Key] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<Matrix> {
        self.generators.iter().map(|k| self.ctx.from_key(k)).collect()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Key> {
        self.elements.iter()
    }

    pub fn key_at(&self, index: usize) -> &Key {
        &self.elements[index]
    }

    pub fn matrices(&self) -> impl Iterator<Item = Matrix> + '_ {
        self.elements.iter().map(|k| self.ctx.from_key(k))
    }

    pub fn contains_key(&self, key: &Key) -> bool {
        self.elements.contains(key)
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.dim() == self.ctx.dim() && self.elements.contains(&self.ctx.key(m))
    }

    /// `self ⊆ other`, decided on generators.
    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        self.generators.iter().all(|g| other.contains_key(g))
    }

    /// Equality of element sets.
    pub fn same_elements(&self, other: &FiniteSubgroup) -> bool {
        self.order() == other.order() && self.elements.iter().all(|k| other.contains_key(k))
    }

    /// Whether `n h n⁻¹ ∈ self` for every generator `h` and every `n` in
    /// `normalizer`.
    pub fn is_normalized_by(&self, normalizer: &[Key]) -> bool {
        self.generators.iter().all(|h| {
            normalizer
                .iter()
                .all(|n| self.contains_key(&self.ctx.key_conjugate(n, h)))
        })
    }

    /// Adds generators and re-closes. Generators already in the group are
    /// skipped. With an `ambient` group, a subgroup that grows past half of
    /// it is the whole ambient group.
    pub fn extend(
        &mut self,
        new: &[Key],
        cap: usize,
        ambient: Option<&FiniteSubgroup>,
    ) -> Result<(), GroupError> {
        self.extend_inner(new, cap, ambient, true)
    }

    /// Like [`FiniteSubgroup::extend`]; without `shortcut` the ambient set is
    /// only used for membership, so it need not be a group.
    pub(crate) fn extend_inner(
        &mut self,
        new: &[Key],
        cap: usize,
        ambient: Option<&FiniteSubgroup>,
        shortcut: bool,
    ) -> Result<(), GroupError> {
        let mut fresh: Vec<Key> = Vec::new();
        for g in new {
            if !self.elements.contains(g) && !fresh.contains(g) {
                if let Some(a) = ambient {
                    if !a.contains_key(g) {
                        return Err(GroupError::NotInAmbient(self.ctx.from_key(g)));
                    }
                }
                fresh.push(g.clone());
            }
        }
        if fresh.is_empty() {
            return Ok(());
        }
        self.generators.extend(fresh.iter().cloned());
        let ctx = self.ctx.clone();
        let elements = Arc::make_mut(&mut self.elements);
        let old = elements.len();
        let half = ambient.filter(|_| shortcut).map(|a| a.order() / 2);
        let mut whole = false;
        let check = |elements: &IndexSet<Key>, processed: usize| -> Result<bool, GroupError> {
            if half.is_some_and(|h| elements.len() > h) {
                return Ok(true);
            }
            if elements.len() > cap {
                return Err(GroupError::CapExceeded {
                    cap,
                    reached: elements.len(),
                    frontier: elements.len() - processed,
                });
            }
            Ok(false)
        };
        'outer: {
            for k in 0..old {
                for g in &fresh {
                    let y = ctx.key_mul(&elements[k], g);
                    if !shortcut && ambient.is_some_and(|a| !a.contains_key(&y)) {
                        return Err(GroupError::NotInAmbient(ctx.from_key(&y)));
                    }
                    if elements.insert(y) && check(elements, k)? {
                        whole = true;
                        break 'outer;
                    }
                }
            }
            let mut k = old;
            while k < elements.len() {
                let x = elements[k].clone();
                for g in &self.generators {
                    let y = ctx.key_mul(&x, g);
                    if !shortcut && ambient.is_some_and(|a| !a.contains_key(&y)) {
                        return Err(GroupError::NotInAmbient(ctx.from_key(&y)));
                    }
                    if elements.insert(y) && check(elements, k)? {
                        whole = true;
                        break 'outer;
                    }
                }
                k += 1;
            }
        }
        if whole {
            self.elements = ambient.expect("shortcut needs an ambient group").elements.clone();
        }
        Ok(())
    }
}

/// `⟨gens⟩`.
pub fn closure(
    ctx: &Arc<UnitaryContext>,
    gens: &[Matrix],
    cap: usize,
) -> Result<FiniteSubgroup, GroupError> {
    closure_within(ctx, gens, cap, None)
}

/// `⟨gens⟩` inside a known ambient group.
pub fn closure_within(
    ctx: &Arc<UnitaryContext>,
    gens: &[Matrix],
    cap: usize,
    ambient: Option<&FiniteSubgroup>,
) -> Result<FiniteSubgroup, GroupError> {
    let keys = gens
        .iter()
        .map(|g| ctx.check_matrix(g).map(|_| ctx.key(g)))
        .collect::<Result<Vec<_>, _>>()?;
    closure_keys(ctx, &keys, cap, ambient)
}

pub(crate) fn closure_keys(
    ctx: &Arc<UnitaryContext>,
    keys: &[Key],
    cap: usize,
    ambient: Option<&FiniteSubgroup>,
) -> Result<FiniteSubgroup, GroupError> {
    let mut h = FiniteSubgroup::trivial(ctx.clone());
    h.extend(keys, cap, ambient)?;
    Ok(h)
}

/// The smallest subgroup containing `seed` and normalized by `normalizer`.
pub fn normal_closure(
    ctx: &Arc<UnitaryContext>,
    seed: &[Matrix],
    normalizer: &[Matrix],
    cap: usize,
    ambient: Option<&FiniteSubgroup>,
) -> Result<FiniteSubgroup, GroupError> {
    let seed: Vec<Key> = seed.iter().map(|m| ctx.key(m)).collect();
    let normalizer: Vec<Key> = normalizer.iter().map(|m| ctx.key(m)).collect();
    normal_closure_keys(ctx, &seed, &normalizer, cap, ambient)
}

pub(crate) fn normal_closure_keys(
    ctx: &Arc<UnitaryContext>,
    seed: &[Key],
    normalizer: &[Key],
    cap: usize,
    ambient: Option<&FiniteSubgroup>,
) -> Result<FiniteSubgroup, GroupError> {
    let mut h = closure_keys(ctx, seed, cap, ambient)?;
    let mut done = 0;
    while done < h.generators.len() {
        let g = h.generators[done].clone();
        let conj: Vec<Key> = normalizer
            .iter()
            .map(|n| ctx.key_conjugate(n, &g))
            .filter(|c| !h.contains_key(c))
            .collect();
        h.extend(&conj, cap, ambient)?;
        if ambient.is_some_and(|a| a.order() == h.order()) {
            break;
        }
        done += 1;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formring::{FiniteRing, FormRing};

    fn z2(full: bool) -> Arc<UnitaryContext> {
        let r = Arc::new(FiniteRing::zmod(2).unwrap());
        let lp = if full { r.all() } else { crate::formring::ElementSet::from([0]) };
        let fr = FormRing::new(r, 1, lp).unwrap();
        Arc::new(UnitaryContext::new(Arc::new(fr), 3).unwrap())
    }

    #[test]
    fn trivial_and_cyclic() {
        let c = z2(true);
        assert_eq!(closure(&c, &[], 10).unwrap().order(), 1);
        let t = c.t_short(c.index(1).unwrap(), c.index(2).unwrap(), 1).unwrap();
        let h = closure(&c, std::slice::from_ref(&t), 10).unwrap();
        assert_eq!(h.order(), 2);
        assert!(h.contains(&t));
        assert!(matches!(
            closure(&c, &[t], 1),
            Err(GroupError::CapExceeded { cap: 1, reached: 2, .. })
        ));
    }

    #[test]
    fn normal_closure_without_normalizer_is_closure() {
        let c = z2(true);
        let i = |v| c.index(v).unwrap();
        let gens = vec![c.t_short(i(1), i(2), 1).unwrap(), c.t_short(i(2), i(3), 1).unwrap()];
        let a = closure(&c, &gens, 1000).unwrap();
        let b = normal_closure(&c, &gens, &[], 1000, None).unwrap();
        assert!(a.same_elements(&b));
        let e = normal_closure(&c, &[c.identity()], &gens, 1000, None).unwrap();
        assert_eq!(e.order(), 1);
    }

    #[test]
    fn context_mismatch_is_rejected() {
        let c = z2(true);
        let bad = Matrix::filled(4, 0);
        assert!(matches!(
            closure(&c, &[bad], 10),
            Err(GroupError::Unitary(UnitaryError::Shape { .. }))
        ));
    }
}
