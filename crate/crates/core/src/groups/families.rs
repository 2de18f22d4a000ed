use std::sync::Arc;

use indexmap::IndexSet;

use super::{closure_keys, normal_closure_keys, FiniteSubgroup, GroupError};
use crate::formring::FormIdeal;
use crate::unitary::{Key, Matrix, UnitaryContext};

fn keys(ctx: &UnitaryContext, roots: &[(crate::unitary::Root, Matrix)]) -> Vec<Key> {
    roots.iter().map(|(_, m)| ctx.key(m)).collect()
}

/// `EU_2n(R, Λ)`.
pub fn eu_group(
    ctx: &Arc<UnitaryContext>,
    cap: usize,
    ambient: Option<&FiniteSubgroup>,
) -> Result<FiniteSubgroup, GroupError> {
    closure_keys(ctx, &keys(ctx, &ctx.elementary_roots()), cap, ambient)
}

/// The subgroup generated by the root elements of level `(I, Γ)`.
pub fn eu_pre(
    ctx: &Arc<UnitaryContext>,
    fi: &FormIdeal,
    cap: usize,
    ambient: Option<&FiniteSubgroup>,
) -> Result<FiniteSubgroup, GroupError> {
    ctx.form_ring().check_form_ideal(fi).map_err(crate::unitary::UnitaryError::from)?;
    closure_keys(ctx, &keys(ctx, &ctx.level_roots(fi.ideal, fi.gamma)), cap, ambient)
}

/// `EU_2n((R, Λ), (I, Γ))`: the normal closure of the level-`(I, Γ)` root
/// elements in `EU_2n(R, Λ)`.
pub fn eu_rel(
    ctx: &Arc<UnitaryContext>,
    fi: &FormIdeal,
    cap: usize,
    ambient: Option<&FiniteSubgroup>,
) -> Result<FiniteSubgroup, GroupError> {
    ctx.form_ring().check_form_ideal(fi).map_err(crate::unitary::UnitaryError::from)?;
    let seed = keys(ctx, &ctx.level_roots(fi.ideal, fi.gamma));
    let normalizer = keys(ctx, &ctx.elementary_roots());
    normal_closure_keys(ctx, &seed, &normalizer, cap, ambient)
}

/// A subgroup from its full element set, with a generating set chosen
/// greedily in the given order. Fails if the elements are not a group.
pub fn from_elements(
    ctx: &Arc<UnitaryContext>,
    elements: IndexSet<Key>,
    cap: usize,
) -> Result<FiniteSubgroup, GroupError> {
    let id = ctx.identity_key();
    if !elements.contains(&id) {
        return Err(GroupError::NotAGroup);
    }
    let whole = FiniteSubgroup {
        ctx: ctx.clone(),
        generators: Vec::new(),
        elements: Arc::new(elements),
    };
    let mut sub = FiniteSubgroup::trivial(ctx.clone());
    let mut k = 0;
    while sub.order() < whole.order() {
        while sub.contains_key(whole.key_at(k)) {
            k += 1;
        }
        let g = whole.key_at(k).clone();
        sub.extend_inner(&[g], cap, Some(&whole), false).map_err(|e| match e {
            GroupError::NotInAmbient(_) => GroupError::NotAGroup,
            e => e,
        })?;
    }
    Ok(FiniteSubgroup {
        generators: sub.generators,
        ..whole
    })
}

/// `U_2n((R, Λ), (I, Γ))` as a subgroup of an enumerated `U`.
pub fn principal_congruence(u: &FiniteSubgroup, fi: &FormIdeal, cap: usize) -> Result<FiniteSubgroup, GroupError> {
    let ctx = u.ctx();
    ctx.form_ring().check_form_ideal(fi).map_err(crate::unitary::UnitaryError::from)?;
    let elements: IndexSet<Key> = u
        .keys()
        .filter(|k| ctx.in_principal_congruence_unchecked(&ctx.from_key(k), fi))
        .cloned()
        .collect();
    if elements.len() == u.order() {
        return Ok(u.clone());
    }
    from_elements(ctx, elements, cap)
}

fn commutes_mod(ctx: &UnitaryContext, sigma: &Key, gens: &[Key], fi: &FormIdeal) -> bool {
    gens.iter()
        .all(|t| ctx.in_principal_congruence_unchecked(&ctx.from_key(&ctx.key_commutator(sigma, t)), fi))
}

/// `σ ∈ CU_2n((R, Λ), (I, Γ))`, decided by `[σ, τ] ∈ U((I, Γ))` for every
/// generator `τ` of `U`. Without a generating set of `U` this is an error;
/// use [`in_cu_necessary`] instead.
pub fn in_cu(
    ctx: &UnitaryContext,
    sigma: &Matrix,
    fi: &FormIdeal,
    u_generators: Option<&[Key]>,
) -> Result<bool, GroupError> {
    ctx.check_matrix(sigma)?;
    ctx.form_ring().check_form_ideal(fi).map_err(crate::unitary::UnitaryError::from)?;
    let gens = u_generators.ok_or(GroupError::NecessaryConditionModeRequired)?;
    Ok(commutes_mod(ctx, &ctx.key(sigma), gens, fi))
}

/// The necessary condition `[σ, T] ∈ U((I, Γ))` for every elementary
/// generator `T`. `false` is conclusive; `true` is not.
pub fn in_cu_necessary(ctx: &UnitaryContext, sigma: &Matrix, fi: &FormIdeal) -> Result<bool, GroupError> {
    ctx.check_matrix(sigma)?;
    ctx.form_ring().check_form_ideal(fi).map_err(crate::unitary::UnitaryError::from)?;
    let gens = keys(ctx, &ctx.elementary_roots());
    Ok(commutes_mod(ctx, &ctx.key(sigma), &gens, fi))
}

/// `CU_2n((R, Λ), (I, Γ))` inside an enumerated `U`.
pub fn cu_subgroup(u: &FiniteSubgroup, fi: &FormIdeal, cap: usize) -> Result<FiniteSubgroup, GroupError> {
    let ctx = u.ctx();
    ctx.form_ring().check_form_ideal(fi).map_err(crate::unitary::UnitaryError::from)?;
    let gens = u.generator_keys();
    // [σ, τ] ∈ U((I, Γ)) for all τ once U((I, Γ)) = U
    if gens
        .iter()
        .all(|g| ctx.in_principal_congruence_unchecked(&ctx.from_key(g), fi))
    {
        return Ok(u.clone());
    }
    let elements: IndexSet<Key> = u.keys().filter(|k| commutes_mod(ctx, k, gens, fi)).cloned().collect();
    from_elements(ctx, elements, cap)
}

/// `[A, B]`: the normal closure of the generator commutators in `⟨A, B⟩`.
pub fn commutator_subgroup(
    a: &FiniteSubgroup,
    b: &FiniteSubgroup,
    cap: usize,
    ambient: Option<&FiniteSubgroup>,
) -> Result<FiniteSubgroup, GroupError> {
    let ctx = a.ctx();
    let mut seed = Vec::new();
    for x in a.generator_keys() {
        for y in b.generator_keys() {
            seed.push(ctx.key_commutator(x, y));
        }
    }
    let normalizer: Vec<Key> = a
        .generator_keys()
        .iter()
        .chain(b.generator_keys())
        .cloned()
        .collect();
    normal_closure_keys(ctx, &seed, &normalizer, cap, ambient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formring::{ElementSet, Elem, FiniteRing, FormRing};
    use crate::groups::enumerate_u;

    fn ctx(m: usize, lambda: Elem, lp: &[Elem], n: usize) -> Arc<UnitaryContext> {
        let r = Arc::new(FiniteRing::zmod(m).unwrap());
        let fr = FormRing::new(r, lambda, lp.iter().copied().collect::<ElementSet>()).unwrap();
        Arc::new(UnitaryContext::new(Arc::new(fr), n).unwrap())
    }

    #[test]
    fn rank_two_over_z2() {
        // Sp4(2) ≅ S6 has derived subgroup of index 2
        let c = ctx(2, 1, &[0, 1], 2);
        let u = enumerate_u(&c, 100_000).unwrap();
        let eu = eu_group(&c, 100_000, Some(&u)).unwrap();
        assert_eq!(eu.order(), u.order());
        let d = commutator_subgroup(&u, &u, 100_000, Some(&u)).unwrap();
        assert_eq!(d.order() * 2, u.order());
    }

    #[test]
    fn congruence_of_zero_ideal_is_trivial() {
        let c = ctx(2, 1, &[0], 2);
        let u = enumerate_u(&c, 100_000).unwrap();
        let fr = c.form_ring();
        let zero = fr.zero_ideal();
        assert_eq!(principal_congruence(&u, &zero, 100_000).unwrap().order(), 1);
        assert!(principal_congruence(&u, &fr.whole(), 100_000).unwrap().same_elements(&u));
        let cu = cu_subgroup(&u, &zero, 100_000).unwrap();
        assert!(cu.keys().all(|k| u.generator_keys().iter().all(|g| c.key_commutator(k, g) == c.identity_key())));
    }

    #[test]
    fn cu_requires_generators() {
        let c = ctx(2, 1, &[0, 1], 2);
        let zero = c.form_ring().zero_ideal();
        assert_eq!(
            in_cu(&c, &c.identity(), &zero, None),
            Err(GroupError::NecessaryConditionModeRequired)
        );
        assert_eq!(in_cu_necessary(&c, &c.identity(), &zero), Ok(true));
        let t = c.t_short(c.index(1).unwrap(), c.index(2).unwrap(), 1).unwrap();
        assert_eq!(in_cu_necessary(&c, &t, &zero), Ok(false));
    }

    #[test]
    fn non_group_is_rejected() {
        let c = ctx(2, 1, &[0, 1], 2);
        let t = c.t_short(c.index(1).unwrap(), c.index(2).unwrap(), 1).unwrap();
        let s = c.t_short(c.index(2).unwrap(), c.index(1).unwrap(), 1).unwrap();
        let set: IndexSet<Key> = [c.identity(), t, s].iter().map(|m| c.key(m)).collect();
        assert_eq!(from_elements(&c, set, 1000).unwrap_err(), GroupError::NotAGroup);
    }
}
