use std::sync::Arc;

use rand::Rng;

use super::{maximal_ideals, LocalizeError, LocalizedRing, MultiplicativeSet};
use crate::formring::{Elem, ElementSet, FormIdeal, FormRing};
use crate::rng::SplitMix64;
use crate::unitary::{Matrix, Root, UnitaryContext};

/// `R -> S⁻¹R` together with the induced map `F` on `2n × 2n` matrices.
#[derive(Debug, Clone)]
pub struct Localization {
    source: Arc<UnitaryContext>,
    ring: LocalizedRing,
    target: Arc<UnitaryContext>,
}

/// Outcome of a commuting-square sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SquareReport {
    pub checked: u64,
    pub failures: Vec<String>,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A maximal ideal at which a class stays noncentral, with the partner
/// that fails to commute with it modulo the localized level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoncentralWitness {
    pub maximal_ideal: ElementSet,
    pub partner: Matrix,
    pub commutator: Matrix,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InjectivityReport {
    pub samples: u64,
    /// Pairs whose images agree modulo the localized level.
    pub premise_hits: u64,
    /// Pairs where the images agree but the originals do not.
    pub failures: Vec<(Matrix, Matrix)>,
}

impl InjectivityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Localization {
    pub fn new(source: Arc<UnitaryContext>, set: MultiplicativeSet) -> Result<Self, LocalizeError> {
        let fr = source.form_ring();
        let ring = LocalizedRing::new(fr.ring_arc().clone(), set)?;
        let lambda = ring.map(fr.lambda());
        let form_parameter = ring.image(fr.form_parameter());
        let target_fr = FormRing::new(ring.ring().clone(), lambda, form_parameter)?;
        let target = Arc::new(UnitaryContext::new(Arc::new(target_fr), source.n())?);
        Ok(Localization {
            source,
            ring,
            target,
        })
    }

    /// Localization at `S_m = C \ m`.
    pub fn at(source: Arc<UnitaryContext>, c: ElementSet, m: ElementSet) -> Result<Self, LocalizeError> {
        let set = MultiplicativeSet::complement(source.ring(), c, m)?;
        Self::new(source, set)
    }

    pub fn source(&self) -> &Arc<UnitaryContext> {
        &self.source
    }

    pub fn target(&self) -> &Arc<UnitaryContext> {
        &self.target
    }

    pub fn localized_ring(&self) -> &LocalizedRing {
        &self.ring
    }

    pub fn map_elem(&self, x: Elem) -> Elem {
        self.ring.map(x)
    }

    /// `F`: entrywise `f`.
    pub fn map_matrix(&self, m: &Matrix) -> Matrix {
        Matrix::from_fn(m.dim(), |r, c| self.ring.map(m.get(r, c)))
    }

    /// `(S⁻¹I, S⁻¹Γ)`.
    pub fn localized_level(&self, fi: &FormIdeal) -> FormIdeal {
        FormIdeal::new(self.ring.image(fi.ideal), self.ring.image(fi.gamma))
    }

    /// Whether `σ ≡ τ (mod U((I, Γ)))` implies
    /// `F(σ) ≡ F(τ) (mod U((S⁻¹I, S⁻¹Γ)))`; vacuously true otherwise.
    pub fn commuting_square(&self, fi: &FormIdeal, sigma: &Matrix, tau: &Matrix) -> Result<bool, LocalizeError> {
        let src = &self.source;
        src.form_ring().check_form_ideal(fi)?;
        src.check_matrix(sigma)?;
        src.check_matrix(tau)?;
        let h = src.mul(&src.entry_law_inverse(sigma), tau);
        if !src.in_principal_congruence_unchecked(&h, fi) {
            return Ok(true);
        }
        let tgt = &self.target;
        let (fs, ft) = (self.map_matrix(sigma), self.map_matrix(tau));
        let fh = tgt.mul(&tgt.entry_law_inverse(&fs), &ft);
        Ok(tgt.in_principal_congruence_unchecked(&fh, &self.localized_level(fi)))
    }

    /// For every elementary generator `g` and every root element `c` of
    /// level `(I, Γ)`: `F(g)` is unitary, `F(gc) = F(g)F(c)`, and the square
    /// commutes on the pair `(g, gc)`.
    pub fn sweep_commuting_square(&self, fi: &FormIdeal) -> Result<SquareReport, LocalizeError> {
        let src = &self.source;
        let tgt = &self.target;
        src.form_ring().check_form_ideal(fi)?;
        let level = self.localized_level(fi);
        tgt.form_ring().check_form_ideal(&level)?;
        let gens = src.elementary_roots();
        let mut cs: Vec<(String, Matrix)> = vec![("e".into(), src.identity())];
        cs.extend(src.level_roots(fi.ideal, fi.gamma).into_iter().map(|(r, m)| (r.to_string(), m)));
        let mut report = SquareReport::default();
        for (root, g) in &gens {
            let fg = self.map_matrix(g);
            report.checked += 1;
            if tgt.is_unitary(&fg, crate::unitary::Method::Entries) != Ok(true) {
                report.failures.push(format!("F({root}) is not unitary"));
            }
            for (name, c) in &cs {
                let gc = src.mul(g, c);
                report.checked += 1;
                if self.map_matrix(&gc) != tgt.mul(&fg, &self.map_matrix(c)) {
                    report.failures.push(format!("F({root}·{name}) != F({root})F({name})"));
                }
                if !self.commuting_square(fi, g, &gc)? {
                    report.failures.push(format!("square fails on ({root}, {root}·{name})"));
                }
            }
        }
        Ok(report)
    }

    /// Properties of a candidate `s₀`: for `x ∈ s₀R`, `tx ∈ I` for some
    /// `t ∈ S` forces `x ∈ I`; likewise with `Γ`.
    pub fn s0_properties(&self, fi: &FormIdeal, s0: Elem) -> (bool, bool) {
        let r = self.source.ring();
        let set = self.ring.multiplicative_set().elements();
        let saturated = |x: Elem, target: ElementSet| {
            !set.iter().any(|t| target.contains(r.mul(t, x))) || target.contains(x)
        };
        let xs: Vec<Elem> = r.elements().map(|y| r.mul(s0, y)).collect();
        (
            xs.iter().all(|&x| saturated(x, fi.ideal)),
            xs.iter().all(|&x| saturated(x, fi.gamma)),
        )
    }

    /// The first `s₀ ∈ S` in index order with both properties.
    pub fn find_s0(&self, fi: &FormIdeal) -> Result<Elem, LocalizeError> {
        self.ring
            .multiplicative_set()
            .elements()
            .iter()
            .find(|&s| self.s0_properties(fi, s) == (true, true))
            .ok_or(LocalizeError::NoS0)
    }

    /// Samples pairs `g₁, g₂ ∈ U((s₀R, s₀Λ))` and checks that
    /// `F(g₁⁻¹g₂) ∈ U((S⁻¹I, S⁻¹Γ))` implies `g₁⁻¹g₂ ∈ U((I, Γ))`.
    ///
    /// Samples are products of root elements of level `(s₀R, s₀Λ)`
    /// conjugated by elementary words; every other pair has
    /// `g₂ = g₁c` with `c` built from roots of level
    /// `(I ∩ s₀R, Γ ∩ s₀Λ)` so that the premise is exercised.
    pub fn check_s0_injectivity(
        &self,
        fi: &FormIdeal,
        s0: Elem,
        samples: u64,
        seed: u64,
    ) -> Result<InjectivityReport, LocalizeError> {
        let src = &self.source;
        let r = src.ring();
        src.form_ring().check_form_ideal(fi)?;
        let j: ElementSet = r.elements().map(|y| r.mul(s0, y)).collect();
        let delta: ElementSet = src.form_ring().form_parameter().iter().map(|a| r.mul(s0, a)).collect();
        let level0 = FormIdeal::new(j, delta);
        let roots0: Vec<Matrix> = src.level_roots(j, delta).into_iter().map(|(_, m)| m).collect();
        let small: Vec<Matrix> = src
            .level_roots(j.intersection(fi.ideal), delta.intersection(fi.gamma))
            .into_iter()
            .map(|(_, m)| m)
            .collect();
        let eu: Vec<Matrix> = src.elementary_roots().into_iter().map(|(_, m)| m).collect();
        let mut rng = SplitMix64::new(seed);
        let word = |pool: &[Matrix], len: usize, rng: &mut SplitMix64| {
            (0..len).fold(src.identity(), |acc, _| {
                if pool.is_empty() {
                    acc
                } else {
                    src.mul(&acc, &pool[rng.random_range(0..pool.len())])
                }
            })
        };
        let sample = |rng: &mut SplitMix64| {
            let inner = word(&roots0, rng.random_range(1..=6), rng);
            let outer = word(&eu, 3, rng);
            src.conjugate(&outer, &inner)
        };
        let level = self.localized_level(fi);
        let tgt = &self.target;
        let mut report = InjectivityReport::default();
        for k in 0..samples {
            let g1 = sample(&mut rng);
            let g2 = if k % 2 == 0 {
                sample(&mut rng)
            } else {
                let c = word(&small, rng.random_range(0..=4), &mut rng);
                src.mul(&g1, &c)
            };
            if !src.in_principal_congruence_unchecked(&g1, &level0)
                || !src.in_principal_congruence_unchecked(&g2, &level0)
            {
                return Err(LocalizeError::Unitary(crate::unitary::UnitaryError::Precondition(
                    "sample left the congruence subgroup of level (s0R, s0Λ)".into(),
                )));
            }
            report.samples += 1;
            let h = src.mul(&src.entry_law_inverse(&g1), &g2);
            if tgt.in_principal_congruence_unchecked(&self.map_matrix(&h), &level) {
                report.premise_hits += 1;
                if !src.in_principal_congruence_unchecked(&h, fi) {
                    report.failures.push((g1, g2));
                }
            }
        }
        Ok(report)
    }

    /// `[σ, T(x)] ∈ U((I_m, I_m ∩ Λ_m))` iff `[σ, T(f(s)x)]` is, for `σ`
    /// and the root element over the localized ring.
    pub fn commutator_scaling_agrees(
        &self,
        fi: &FormIdeal,
        sigma: &Matrix,
        root: &Root,
        s: Elem,
    ) -> Result<bool, LocalizeError> {
        let tgt = &self.target;
        let m = self.ring.ring();
        let ideal = self.ring.image(fi.ideal);
        let level = FormIdeal::new(ideal, ideal.intersection(tgt.form_ring().form_parameter()));
        let fs = self.ring.map(s);
        let scaled = match *root {
            Root::Short(i, j, x) => Root::Short(i, j, m.mul(fs, x)),
            Root::Long(i, a) => Root::Long(i, m.mul(fs, a)),
        };
        let a = tgt.commutator(sigma, &tgt.root_matrix(root)?);
        let b = tgt.commutator(sigma, &tgt.root_matrix(&scaled)?);
        Ok(tgt.in_principal_congruence_unchecked(&a, &level) == tgt.in_principal_congruence_unchecked(&b, &level))
    }
}

/// A maximal ideal `m ⊇ I ∩ C` of `C` at which `g` stays noncentral modulo
/// the localized level. `partners` must witness noncentrality over `R`.
pub fn find_noncentral_witness(
    source: &Arc<UnitaryContext>,
    c: ElementSet,
    g: &Matrix,
    fi: &FormIdeal,
    partners: &[Matrix],
) -> Result<NoncentralWitness, LocalizeError> {
    source.form_ring().check_form_ideal(fi)?;
    source.check_matrix(g)?;
    let noncentral = partners
        .iter()
        .any(|p| !source.in_principal_congruence_unchecked(&source.commutator(g, p), fi));
    if !noncentral {
        return Err(LocalizeError::NoWitness);
    }
    let ic = fi.ideal.intersection(c);
    for m in maximal_ideals(source.ring(), c)? {
        if !ic.is_subset(m) {
            continue;
        }
        let loc = Localization::at(source.clone(), c, m)?;
        let tgt = loc.target();
        let level = loc.localized_level(fi);
        let fg = loc.map_matrix(g);
        let candidates = partners
            .iter()
            .map(|p| loc.map_matrix(p))
            .chain(tgt.elementary_roots().into_iter().map(|(_, t)| t));
        for p in candidates {
            let comm = tgt.commutator(&fg, &p);
            if !tgt.in_principal_congruence_unchecked(&comm, &level) {
                return Ok(NoncentralWitness {
                    maximal_ideal: m,
                    partner: p,
                    commutator: comm,
                });
            }
        }
    }
    Err(LocalizeError::WitnessNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formring::FiniteRing;

    fn ctx(m: usize, lp: &[Elem], n: usize) -> Arc<UnitaryContext> {
        let r = Arc::new(FiniteRing::zmod(m).unwrap());
        let fr = FormRing::new(r, 1, lp.iter().copied().collect()).unwrap();
        Arc::new(UnitaryContext::new(Arc::new(fr), n).unwrap())
    }

    fn set<const N: usize>(xs: [Elem; N]) -> ElementSet {
        ElementSet::from(xs)
    }

    #[test]
    fn s0_over_z6() {
        let c = ctx(6, &[0, 3], 3);
        let loc = Localization::at(c.clone(), c.ring().all(), set([0, 2, 4])).unwrap();
        let zero = c.form_ring().zero_ideal();
        assert_eq!(loc.s0_properties(&zero, 1), (false, false));
        assert_eq!(loc.find_s0(&zero), Ok(3));
        // I = R makes the first property vacuous, but 3·2 = 0 ∈ Λ with 2 ∉ Λ
        let whole = c.form_ring().whole();
        assert_eq!(loc.s0_properties(&whole, 1), (true, false));
        assert_eq!(loc.find_s0(&whole), Ok(3));
        let f = ctx(2, &[0, 1], 3);
        let loc = Localization::at(f.clone(), f.ring().all(), set([0])).unwrap();
        for fi in f.form_ring().form_ideals() {
            assert_eq!(loc.find_s0(&fi), Ok(1));
        }
    }

    #[test]
    fn localized_levels_over_z6() {
        let c = ctx(6, &[0, 3], 3);
        let loc = Localization::at(c.clone(), c.ring().all(), set([0, 2, 4])).unwrap();
        let l = loc.localized_ring();
        assert_eq!(l.order(), 2);
        let fr = c.form_ring();
        assert_eq!(loc.localized_level(&fr.zero_ideal()).ideal.len(), 1);
        assert_eq!(loc.localized_level(&fr.whole()).ideal, l.ring().all());
        for fi in fr.form_ideals() {
            assert!(loc.target().form_ring().is_form_ideal(&loc.localized_level(&fi)));
        }
    }

    #[test]
    fn squares_commute_over_z6() {
        let c = ctx(6, &[0, 3], 3);
        for m in [set([0, 2, 4]), set([0, 3])] {
            let loc = Localization::at(c.clone(), c.ring().all(), m).unwrap();
            for fi in c.form_ring().form_ideals() {
                let rep = loc.sweep_commuting_square(&fi).unwrap();
                assert!(rep.passed(), "{:?}", rep.failures);
            }
        }
    }

    #[test]
    fn injectivity_over_z6() {
        let c = ctx(6, &[0, 3], 3);
        let loc = Localization::at(c.clone(), c.ring().all(), set([0, 2, 4])).unwrap();
        for fi in c.form_ring().form_ideals() {
            let s0 = loc.find_s0(&fi).unwrap();
            let rep = loc.check_s0_injectivity(&fi, s0, 40, 11).unwrap();
            assert_eq!(rep.samples, 40);
            assert!(rep.premise_hits > 0);
            assert!(rep.passed());
        }
    }

    #[test]
    fn witness_over_a_field() {
        let c = ctx(2, &[0, 1], 3);
        let i = |v| c.index(v).unwrap();
        let g = c.t_short(i(1), i(2), 1).unwrap();
        let partners: Vec<Matrix> = c.elementary_roots().into_iter().map(|(_, m)| m).collect();
        let zero = c.form_ring().zero_ideal();
        let w = find_noncentral_witness(&c, c.ring().all(), &g, &zero, &partners).unwrap();
        assert_eq!(w.maximal_ideal, set([0]));
        assert_eq!(
            find_noncentral_witness(&c, c.ring().all(), &c.identity(), &zero, &partners),
            Err(LocalizeError::NoWitness)
        );
        assert_eq!(
            find_noncentral_witness(&c, c.ring().all(), &g, &c.form_ring().whole(), &partners),
            Err(LocalizeError::NoWitness)
        );
    }

    #[test]
    fn scaling_by_units_of_s() {
        let c = ctx(6, &[0, 3], 3);
        let loc = Localization::at(c.clone(), c.ring().all(), set([0, 3])).unwrap();
        let t = loc.target();
        let i = |v| t.index(v).unwrap();
        let sigma = t.product(&[
            &t.t_short(i(1), i(2), 1).unwrap(),
            &t.t_short(i(2), i(-3), 2).unwrap(),
        ]);
        for fi in c.form_ring().form_ideals() {
            for s in loc.localized_ring().multiplicative_set().elements().iter() {
                for root in [Root::Short(i(1), i(3), 1), Root::Short(i(3), i(-1), 2), Root::Long(i(-2), 0)] {
                    assert!(loc.commutator_scaling_agrees(&fi, &sigma, &root, s).unwrap());
                }
            }
        }
    }
}
