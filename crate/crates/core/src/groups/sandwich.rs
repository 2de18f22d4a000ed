use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::Rng;

use super::{
    cu_subgroup, eu_group, eu_rel, normal_closure_keys, principal_congruence, FiniteSubgroup,
    GroupError,
};
use crate::formring::FormIdeal;
use crate::rng::SplitMix64;
use crate::unitary::{Key, Matrix, UnitaryContext, UnitaryError};

/// The level read off from root elements in a subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    pub form_ideal: FormIdeal,
    /// Whether the pair is a form ideal.
    pub valid: bool,
}

/// `I = {x : T_12(x) ∈ H}` and `Γ = {y ∈ Λ : T_{-1,1}(y) ∈ H}`.
pub fn level_of(h: &FiniteSubgroup) -> Result<Level, GroupError> {
    let ctx = h.ctx();
    if ctx.n() < 2 {
        return Err(UnitaryError::Precondition("the level needs rank at least 2".into()).into());
    }
    let fr = ctx.form_ring();
    let (one, two, minus_one) = (ctx.index(1)?, ctx.index(2)?, ctx.index(-1)?);
    let ideal = fr
        .ring()
        .elements()
        .filter(|&x| h.contains(&ctx.t_short(one, two, x).expect("short root")))
        .collect();
    let gamma = fr
        .form_parameter()
        .iter()
        .filter(|&y| h.contains(&ctx.t_long_unchecked(minus_one, y)))
        .collect();
    let form_ideal = FormIdeal::new(ideal, gamma);
    Ok(Level {
        form_ideal,
        valid: fr.is_form_ideal(&form_ideal),
    })
}

/// Whether `H` is normalized by the given elementary generators.
pub fn is_e_normal(h: &FiniteSubgroup, eu_generators: &[Key]) -> bool {
    h.is_normalized_by(eu_generators)
}

/// Both inclusions `EU((I, Γ)) ⊆ H ⊆ CU((I, Γ))` at the level of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichReport {
    pub level: Level,
    pub lower: bool,
    pub upper: bool,
    /// A generator of `EU((I, Γ))` outside `H`.
    pub lower_witness: Option<Matrix>,
    /// A generator of `H` outside `CU((I, Γ))`.
    pub upper_witness: Option<Matrix>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.level.valid && self.lower && self.upper
    }
}

/// Checks the sandwich property of `H` against an enumerated `U`.
pub fn sandwich_check(h: &FiniteSubgroup, u: &FiniteSubgroup, cap: usize) -> Result<SandwichReport, GroupError> {
    let level = level_of(h)?;
    if !level.valid {
        return Ok(SandwichReport {
            level,
            lower: false,
            upper: false,
            lower_witness: None,
            upper_witness: None,
        });
    }
    let rel = eu_rel(h.ctx(), &level.form_ideal, cap, Some(u))?;
    Ok(sandwich_against(h, u, level, &rel))
}

fn sandwich_against(h: &FiniteSubgroup, u: &FiniteSubgroup, level: Level, rel: &FiniteSubgroup) -> SandwichReport {
    let lower_witness = rel
        .generator_keys()
        .iter()
        .find(|g| !h.contains_key(g))
        .map(|g| h.ctx().from_key(g));
    let upper_witness = first_outside_cu(h, u, &level.form_ideal);
    SandwichReport {
        level,
        lower: lower_witness.is_none(),
        upper: upper_witness.is_none(),
        lower_witness,
        upper_witness,
    }
}

fn first_outside_cu(h: &FiniteSubgroup, u: &FiniteSubgroup, fi: &FormIdeal) -> Option<Matrix> {
    let ctx = h.ctx();
    h.generator_keys()
        .iter()
        .find(|s| {
            !u.generator_keys().iter().all(|t| {
                ctx.in_principal_congruence_unchecked(&ctx.from_key(&ctx.key_commutator(s, t)), fi)
            })
        })
        .map(|s| ctx.from_key(s))
}

/// Result of a conjugation search for an invertible `(1, 1)` entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotSearch {
    /// Indices into the generator list; the conjugator is their product in
    /// this order.
    pub word: Vec<usize>,
    pub conjugator: Matrix,
    /// `ε σ ε⁻¹`.
    pub result: Matrix,
}

/// Breadth-first search over `ε σ ε⁻¹`, `ε` a word in `generators`, for a
/// conjugate whose `(1, 1)` entry is a unit. At most `cap` conjugates are
/// visited.
pub fn make_pivot_invertible(
    ctx: &UnitaryContext,
    sigma: &Matrix,
    generators: &[Matrix],
    cap: usize,
) -> Result<PivotSearch, GroupError> {
    ctx.check_matrix(sigma)?;
    let ring = ctx.ring();
    let gens: Vec<Key> = generators.iter().map(|g| ctx.key(g)).collect();
    let pivot_unit = |k: &Key| ring.is_unit(ctx.from_key(k).get(0, 0));
    let start = ctx.key(sigma);
    let mut parent: HashMap<Key, Option<(Key, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    let mut found = None;
    while let Some(x) = queue.pop_front() {
        if pivot_unit(&x) {
            found = Some(x);
            break;
        }
        for (gi, g) in gens.iter().enumerate() {
            let y = ctx.key_conjugate(g, &x);
            if parent.contains_key(&y) {
                continue;
            }
            if parent.len() >= cap {
                return Err(GroupError::CapExceeded {
                    cap,
                    reached: parent.len(),
                    frontier: queue.len(),
                });
            }
            parent.insert(y.clone(), Some((x.clone(), gi)));
            queue.push_back(y);
        }
    }
    let Some(end) = found else {
        return Err(GroupError::NoWitness);
    };
    let mut word = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, gi))) = parent.get(&cur) {
        word.push(*gi);
        cur = prev.clone();
    }
    // the last conjugation applied is the leftmost factor
    let conjugator = word
        .iter()
        .fold(ctx.identity(), |acc, &gi| ctx.mul(&acc, &generators[gi]));
    Ok(PivotSearch {
        word,
        conjugator,
        result: ctx.from_key(&end),
    })
}

/// `count` normal closures in `EU` of one to three uniformly chosen
/// elements of `U`.
pub fn sample_e_normal(
    u: &FiniteSubgroup,
    eu_generators: &[Key],
    seed: u64,
    count: usize,
    cap: usize,
) -> Result<Vec<FiniteSubgroup>, GroupError> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(1..=3usize);
            let picks: Vec<Key> = (0..k)
                .map(|_| u.key_at(rng.random_range(0..u.order())).clone())
                .collect();
            normal_closure_keys(u.ctx(), &picks, eu_generators, cap, Some(u))
        })
        .collect()
}

/// An enumerated `U` together with `EU` and cached subgroups per form ideal.
pub struct Workspace {
    u: FiniteSubgroup,
    eu: FiniteSubgroup,
    cap: usize,
    eu_rel: HashMap<FormIdeal, FiniteSubgroup>,
    congruence: HashMap<FormIdeal, FiniteSubgroup>,
    cu: HashMap<FormIdeal, FiniteSubgroup>,
}

impl Workspace {
    pub fn new(ctx: &Arc<UnitaryContext>, cap: usize) -> Result<Self, GroupError> {
        let u = super::enumerate_u(ctx, cap)?;
        let eu = eu_group(ctx, cap, Some(&u))?;
        Ok(Workspace {
            u,
            eu,
            cap,
            eu_rel: HashMap::new(),
            congruence: HashMap::new(),
            cu: HashMap::new(),
        })
    }

    pub fn ctx(&self) -> &Arc<UnitaryContext> {
        self.u.ctx()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn u(&self) -> &FiniteSubgroup {
        &self.u
    }

    pub fn eu(&self) -> &FiniteSubgroup {
        &self.eu
    }

    pub fn eu_generators(&self) -> &[Key] {
        self.eu.generator_keys()
    }

    pub fn form_ideals(&self) -> Vec<FormIdeal> {
        self.ctx().form_ring().form_ideals()
    }

    pub fn eu_rel(&mut self, fi: &FormIdeal) -> Result<FiniteSubgroup, GroupError> {
        if let Some(h) = self.eu_rel.get(fi) {
            return Ok(h.clone());
        }
        let h = eu_rel(self.u.ctx(), fi, self.cap, Some(&self.u))?;
        self.eu_rel.insert(*fi, h.clone());
        Ok(h)
    }

    pub fn principal_congruence(&mut self, fi: &FormIdeal) -> Result<FiniteSubgroup, GroupError> {
        if let Some(h) = self.congruence.get(fi) {
            return Ok(h.clone());
        }
        let h = principal_congruence(&self.u, fi, self.cap)?;
        self.congruence.insert(*fi, h.clone());
        Ok(h)
    }

    pub fn cu(&mut self, fi: &FormIdeal) -> Result<FiniteSubgroup, GroupError> {
        if let Some(h) = self.cu.get(fi) {
            return Ok(h.clone());
        }
        let h = cu_subgroup(&self.u, fi, self.cap)?;
        self.cu.insert(*fi, h.clone());
        Ok(h)
    }

    pub fn is_e_normal(&self, h: &FiniteSubgroup) -> bool {
        is_e_normal(h, self.eu.generator_keys())
    }

    pub fn sandwich(&mut self, h: &FiniteSubgroup) -> Result<SandwichReport, GroupError> {
        let level = level_of(h)?;
        if !level.valid {
            return sandwich_check(h, &self.u, self.cap);
        }
        let rel = self.eu_rel(&level.form_ideal)?;
        Ok(sandwich_against(h, &self.u, level, &rel))
    }

    /// Every form ideal `(I, Γ)` with `EU((I, Γ)) ⊆ H ⊆ CU((I, Γ))`.
    pub fn sandwiching_levels(&mut self, h: &FiniteSubgroup) -> Result<Vec<FormIdeal>, GroupError> {
        let mut out = Vec::new();
        for fi in self.form_ideals() {
            let rel = self.eu_rel(&fi)?;
            if rel.is_subgroup_of(h) && first_outside_cu(h, &self.u, &fi).is_none() {
                out.push(fi);
            }
        }
        Ok(out)
    }

    pub fn sample_e_normal(&self, seed: u64, count: usize) -> Result<Vec<FiniteSubgroup>, GroupError> {
        sample_e_normal(&self.u, self.eu.generator_keys(), seed, count, self.cap)
    }
}
