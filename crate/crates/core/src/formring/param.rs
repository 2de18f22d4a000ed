use std::fmt;
use std::sync::Arc;

use super::{Elem, ElementSet, FiniteRing, FormRingError};

/// One violated axiom of a form ring or a form ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Involution { axiom: &'static str, witness: String },
    LambdaNotCentral { lambda: Elem, witness: Elem },
    LambdaNorm { lambda: Elem, product: Elem },
    NotAdditiveSubgroup { name: &'static str },
    BelowMinimum { name: &'static str, missing: ElementSet },
    AboveMaximum { name: &'static str, extra: ElementSet },
    NotConjugationStable { name: &'static str, r: Elem, a: Elem },
    NotIdeal,
    NotInvolutionInvariant,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Involution { axiom, witness } => write!(f, "{axiom} ({witness})"),
            Violation::LambdaNotCentral { lambda, witness } => {
                write!(f, "λ={lambda} does not commute with {witness}")
            }
            Violation::LambdaNorm { lambda, product } => {
                write!(f, "λλ̄ = {product} != 1 for λ={lambda}")
            }
            Violation::NotAdditiveSubgroup { name } => write!(f, "{name} is not an additive subgroup"),
            Violation::BelowMinimum { name, missing } => {
                write!(f, "{name} does not contain its minimum (missing {missing})")
            }
            Violation::AboveMaximum { name, extra } => {
                write!(f, "{name} is not contained in its maximum (extra {extra})")
            }
            Violation::NotConjugationStable { name, r, a } => {
                write!(f, "{name} is not stable under a -> r a r̄ (r={r}, a={a})")
            }
            Violation::NotIdeal => f.write_str("I is not a two-sided ideal"),
            Violation::NotInvolutionInvariant => f.write_str("I is not involution invariant"),
        }
    }
}

fn lambda_is_valid(ring: &FiniteRing, lambda: Elem) -> bool {
    (lambda as usize) < ring.order()
        && ring.is_central(lambda)
        && ring.mul(lambda, ring.conj(lambda)) == ring.one()
}

/// `Λ_min = {r - λr̄ : r ∈ R}`.
pub fn lambda_min(ring: &FiniteRing, lambda: Elem) -> Result<ElementSet, FormRingError> {
    if !lambda_is_valid(ring, lambda) {
        return Err(FormRingError::InvalidLambda(lambda));
    }
    Ok(ring
        .elements()
        .map(|r| ring.sub(r, ring.mul(lambda, ring.conj(r))))
        .collect())
}

/// `Λ_max = {r ∈ R : r = -λr̄}`.
pub fn lambda_max(ring: &FiniteRing, lambda: Elem) -> Result<ElementSet, FormRingError> {
    if !lambda_is_valid(ring, lambda) {
        return Err(FormRingError::InvalidLambda(lambda));
    }
    Ok(ring
        .elements()
        .filter(|&r| r == ring.neg(ring.mul(lambda, ring.conj(r))))
        .collect())
}

/// First `(r, a)` with `a ∈ set` and `r a r̄ ∉ set`.
fn conjugation_escape(ring: &FiniteRing, set: ElementSet) -> Option<(Elem, Elem)> {
    ring.elements().find_map(|r| {
        set.iter()
            .find(|&a| !set.contains(ring.product(&[r, a, ring.conj(r)])))
            .map(|a| (r, a))
    })
}

/// All form parameters for `(R, λ)`, in canonical order (by size, then by
/// element list).
pub fn enumerate_form_parameters(
    ring: &FiniteRing,
    lambda: Elem,
) -> Result<Vec<ElementSet>, FormRingError> {
    let lo = lambda_min(ring, lambda)?;
    let hi = lambda_max(ring, lambda)?;
    Ok(ring
        .subgroups_between(lo, hi)
        .into_iter()
        .filter(|&s| conjugation_escape(ring, s).is_none())
        .collect())
}

/// The subring `C` of all finite sums of `cc̄` and `-cc̄` for `c ∈ C'`,
/// where `C'` must be a subring of the center.
pub fn subring_c(ring: &FiniteRing, cprime: ElementSet) -> Result<ElementSet, FormRingError> {
    let center = ring.center();
    let closed = cprime.contains(ring.zero())
        && cprime.contains(ring.one())
        && cprime.iter().all(|a| {
            cprime.contains(ring.neg(a))
                && cprime
                    .iter()
                    .all(|b| cprime.contains(ring.add(a, b)) && cprime.contains(ring.mul(a, b)))
        });
    if !closed || !cprime.is_subset(center) {
        return Err(FormRingError::NotCentralSubring(cprime));
    }
    let norms: ElementSet = cprime
        .iter()
        .flat_map(|c| {
            let n = ring.mul(c, ring.conj(c));
            [n, ring.neg(n)]
        })
        .collect();
    Ok(ring.additive_closure(norms))
}

/// A pair `(I, Γ)`: an ideal and a relative form parameter of level `I`.
///
/// The fields are unchecked; use [`FormRing::form_ideal_violations`] or
/// [`FormRing::check_form_ideal`] to validate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FormIdeal {
    pub ideal: ElementSet,
    pub gamma: ElementSet,
}

impl FormIdeal {
    pub fn new(ideal: ElementSet, gamma: ElementSet) -> Self {
        FormIdeal { ideal, gamma }
    }

    /// `(I, Γ) ⊆ (I', Γ')` componentwise.
    pub fn is_contained_in(&self, other: &FormIdeal) -> bool {
        self.ideal.is_subset(other.ideal) && self.gamma.is_subset(other.gamma)
    }
}

impl fmt::Display for FormIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(I={}, Γ={})", self.ideal, self.gamma)
    }
}

/// A ring with involution together with `λ` and a form parameter `Λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormRing {
    ring: Arc<FiniteRing>,
    lambda: Elem,
    form_parameter: ElementSet,
}

impl FormRing {
    /// Validated constructor.
    pub fn new(
        ring: Arc<FiniteRing>,
        lambda: Elem,
        form_parameter: ElementSet,
    ) -> Result<Self, FormRingError> {
        let fr = Self::new_unchecked(ring, lambda, form_parameter);
        let report = fr.validate();
        if report.is_empty() {
            Ok(fr)
        } else {
            Err(FormRingError::Invalid(report))
        }
    }

    /// Builds the triple without checking any axiom; see [`FormRing::validate`].
    pub fn new_unchecked(ring: Arc<FiniteRing>, lambda: Elem, form_parameter: ElementSet) -> Self {
        FormRing {
            ring,
            lambda,
            form_parameter,
        }
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn lambda(&self) -> Elem {
        self.lambda
    }

    /// The form parameter `Λ`.
    pub fn form_parameter(&self) -> ElementSet {
        self.form_parameter
    }

    /// Every violated axiom; empty iff `(R, Λ)` is a form ring for `λ`.
    pub fn validate(&self) -> Vec<Violation> {
        let ring = &*self.ring;
        let mut out: Vec<Violation> = ring
            .involution_violations()
            .into_iter()
            .map(|(axiom, witness)| Violation::Involution { axiom, witness })
            .collect();
        let lambda = self.lambda;
        if lambda as usize >= ring.order() {
            out.push(Violation::LambdaNorm {
                lambda,
                product: ring.zero(),
            });
            return out;
        }
        if let Some(r) = ring
            .elements()
            .find(|&r| ring.mul(lambda, r) != ring.mul(r, lambda))
        {
            out.push(Violation::LambdaNotCentral { lambda, witness: r });
        }
        let norm = ring.mul(lambda, ring.conj(lambda));
        if norm != ring.one() {
            out.push(Violation::LambdaNorm {
                lambda,
                product: norm,
            });
        }
        let lp = self.form_parameter;
        if !ring.is_additive_subgroup(lp) {
            out.push(Violation::NotAdditiveSubgroup { name: "Λ" });
        }
        // Bounds are computed directly so that they are reported even when λ
        // itself is invalid.
        let lo: ElementSet = ring
            .elements()
            .map(|r| ring.sub(r, ring.mul(lambda, ring.conj(r))))
            .collect();
        let hi: ElementSet = ring
            .elements()
            .filter(|&r| r == ring.neg(ring.mul(lambda, ring.conj(r))))
            .collect();
        if !lo.is_subset(lp) {
            out.push(Violation::BelowMinimum {
                name: "Λ",
                missing: lo.difference(lp),
            });
        }
        if !lp.is_subset(hi) {
            out.push(Violation::AboveMaximum {
                name: "Λ",
                extra: lp.difference(hi),
            });
        }
        if let Some((r, a)) = conjugation_escape(ring, lp) {
            out.push(Violation::NotConjugationStable { name: "Λ", r, a });
        }
        out
    }

    pub fn lambda_min(&self) -> ElementSet {
        lambda_min(&self.ring, self.lambda).unwrap_or_default()
    }

    pub fn lambda_max(&self) -> ElementSet {
        lambda_max(&self.ring, self.lambda).unwrap_or_default()
    }

    /// `λ^k` for `k ∈ {-1, 0, 1}`, with `λ^{-1} = λ̄`.
    pub fn lambda_pow(&self, k: i32) -> Elem {
        match k {
            0 => self.ring.one(),
            1 => self.lambda,
            -1 => self.ring.conj(self.lambda),
            _ => panic!("λ exponent {k} outside {{-1, 0, 1}}"),
        }
    }

    fn check_invariant_ideal(&self, ideal: ElementSet) -> Result<(), FormRingError> {
        if self.ring.is_ideal(ideal) && self.ring.is_involution_invariant(ideal) {
            Ok(())
        } else {
            Err(FormRingError::NotInvariantIdeal(ideal))
        }
    }

    /// `Γ_min = {ξ - λξ̄ : ξ ∈ I} + ⟨ζαζ̄ : ζ ∈ I, α ∈ Λ⟩`, where `⟨⟩` is
    /// the additive subgroup generated.
    pub fn gamma_min(&self, ideal: ElementSet) -> Result<ElementSet, FormRingError> {
        self.check_invariant_ideal(ideal)?;
        let ring = &*self.ring;
        let mut gens: ElementSet = ideal
            .iter()
            .map(|x| ring.sub(x, ring.mul(self.lambda, ring.conj(x))))
            .collect();
        for z in ideal {
            for a in self.form_parameter {
                gens.insert(ring.product(&[z, a, ring.conj(z)]));
            }
        }
        Ok(ring.additive_closure(gens))
    }

    /// `Γ_max = I ∩ Λ`.
    pub fn gamma_max(&self, ideal: ElementSet) -> Result<ElementSet, FormRingError> {
        self.check_invariant_ideal(ideal)?;
        Ok(ideal.intersection(self.form_parameter))
    }

    /// Every violated form-ideal axiom.
    pub fn form_ideal_violations(&self, fi: &FormIdeal) -> Vec<Violation> {
        let ring = &*self.ring;
        let mut out = Vec::new();
        if !ring.is_ideal(fi.ideal) {
            out.push(Violation::NotIdeal);
        }
        if !ring.is_involution_invariant(fi.ideal) {
            out.push(Violation::NotInvolutionInvariant);
        }
        if !ring.is_additive_subgroup(fi.gamma) {
            out.push(Violation::NotAdditiveSubgroup { name: "Γ" });
        }
        if out.is_empty() {
            let lo = self.gamma_min(fi.ideal).unwrap_or_default();
            let hi = self.gamma_max(fi.ideal).unwrap_or_default();
            if !lo.is_subset(fi.gamma) {
                out.push(Violation::BelowMinimum {
                    name: "Γ",
                    missing: lo.difference(fi.gamma),
                });
            }
            if !fi.gamma.is_subset(hi) {
                out.push(Violation::AboveMaximum {
                    name: "Γ",
                    extra: fi.gamma.difference(hi),
                });
            }
        } else if !fi.gamma.is_subset(fi.ideal.intersection(self.form_parameter)) {
            out.push(Violation::AboveMaximum {
                name: "Γ",
                extra: fi.gamma.difference(fi.ideal.intersection(self.form_parameter)),
            });
        }
        if let Some((r, a)) = conjugation_escape(ring, fi.gamma) {
            out.push(Violation::NotConjugationStable { name: "Γ", r, a });
        }
        out
    }

    pub fn is_form_ideal(&self, fi: &FormIdeal) -> bool {
        self.form_ideal_violations(fi).is_empty()
    }

    pub fn check_form_ideal(&self, fi: &FormIdeal) -> Result<(), FormRingError> {
        let v = self.form_ideal_violations(fi);
        if v.is_empty() {
            Ok(())
        } else {
            Err(FormRingError::InvalidFormIdeal(v))
        }
    }

    /// `(R, Λ)` as a form ideal of itself.
    pub fn whole(&self) -> FormIdeal {
        FormIdeal::new(self.ring.all(), self.form_parameter)
    }

    /// `({0}, {0})`.
    pub fn zero_ideal(&self) -> FormIdeal {
        let z = ElementSet::singleton(self.ring.zero());
        FormIdeal::new(z, z)
    }

    /// Every form ideal, ordered by ideal then by `Γ` (canonical order).
    pub fn form_ideals(&self) -> Vec<FormIdeal> {
        let ring = &*self.ring;
        let mut out = Vec::new();
        for ideal in ring.involution_invariant_ideals() {
            let lo = self.gamma_min(ideal).expect("invariant ideal");
            let hi = self.gamma_max(ideal).expect("invariant ideal");
            for gamma in ring.subgroups_between(lo, hi) {
                if conjugation_escape(ring, gamma).is_none() {
                    out.push(FormIdeal::new(ideal, gamma));
                }
            }
        }
        out
    }

    /// The form ideal defined by `x` and `(I, Γ)`: `(RxR, Γ(x))` with
    /// `Γ(x) = Γ_min^{RxR}` when `x ∉ I`, and
    /// `Γ(x) = Γ_min^{RxR} + ⟨y x ȳ : y ∈ R⟩` when `x ∈ Γ_max^I \ Γ`.
    pub fn form_ideal_defined_by(
        &self,
        fi: &FormIdeal,
        x: Elem,
    ) -> Result<FormIdeal, FormRingError> {
        let ring = &*self.ring;
        let ideal = ring.involution_ideal(x);
        let lo = self.gamma_min(ideal)?;
        if !fi.ideal.contains(x) {
            return Ok(FormIdeal::new(ideal, lo));
        }
        let gmax = fi.ideal.intersection(self.form_parameter);
        if gmax.contains(x) && !fi.gamma.contains(x) {
            let conj: ElementSet = ring
                .elements()
                .map(|y| ring.product(&[y, x, ring.conj(y)]))
                .collect();
            return Ok(FormIdeal::new(ideal, ring.additive_closure(lo.union(conj))));
        }
        Err(FormRingError::NoFormIdealDefined { x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(m).unwrap())
    }

    fn set<const N: usize>(xs: [Elem; N]) -> ElementSet {
        ElementSet::from(xs)
    }

    #[test]
    fn lambda_bounds_z4() {
        let r = z(4);
        assert_eq!(lambda_min(&r, 1).unwrap(), set([0]));
        assert_eq!(lambda_min(&r, 3).unwrap(), set([0, 2]));
        assert_eq!(lambda_max(&r, 1).unwrap(), set([0, 2]));
        assert_eq!(lambda_max(&r, 3).unwrap(), r.all());
        assert_eq!(lambda_min(&z(2), 1).unwrap(), set([0]));
        assert_eq!(lambda_max(&z(2), 1).unwrap(), set([0, 1]));
        assert!(matches!(lambda_min(&r, 2), Err(FormRingError::InvalidLambda(2))));
    }

    #[test]
    fn form_parameter_tables() {
        let r = z(4);
        assert_eq!(enumerate_form_parameters(&r, 1).unwrap(), vec![set([0]), set([0, 2])]);
        assert_eq!(enumerate_form_parameters(&r, 3).unwrap(), vec![set([0, 2]), r.all()]);
        assert_eq!(enumerate_form_parameters(&z(2), 1).unwrap(), vec![set([0]), set([0, 1])]);
    }

    #[test]
    fn validation_reports() {
        let r = z(4);
        assert!(FormRing::new(r.clone(), 1, set([0])).is_ok());
        let bad = FormRing::new_unchecked(r.clone(), 1, set([0, 1]));
        let v = bad.validate();
        assert!(v.iter().any(|v| matches!(v, Violation::AboveMaximum { .. })), "{v:?}");
        let bad = FormRing::new_unchecked(r, 2, set([0]));
        assert!(bad
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::LambdaNorm { product: 0, .. })));
    }

    #[test]
    fn gamma_bounds() {
        let fr = FormRing::new(z(4), 1, set([0, 2])).unwrap();
        assert_eq!(fr.gamma_min(set([0, 2])).unwrap(), set([0]));
        assert_eq!(fr.gamma_max(set([0, 2])).unwrap(), set([0, 2]));
        assert_eq!(fr.gamma_min(set([0])).unwrap(), set([0]));
        assert_eq!(fr.gamma_max(set([0])).unwrap(), set([0]));
        assert_eq!(fr.gamma_max(fr.ring().all()).unwrap(), set([0, 2]));
        assert!(fr.gamma_min(set([0, 1])).is_err());
    }

    #[test]
    fn gamma_min_of_whole_ring_at_max_parameter() {
        // oracle: Λ_min + ⟨rαr̄⟩ by direct enumeration
        for (m, lambda) in [(4, 1), (4, 3), (2, 1)] {
            let r = z(m);
            let hi = lambda_max(&r, lambda).unwrap();
            let fr = FormRing::new(r.clone(), lambda, hi).unwrap();
            let mut gens = lambda_min(&r, lambda).unwrap();
            for x in r.elements() {
                for a in hi {
                    gens.insert(r.product(&[x, a, r.conj(x)]));
                }
            }
            assert_eq!(fr.gamma_min(r.all()).unwrap(), r.additive_closure(gens));
        }
    }

    #[test]
    fn form_ideal_checks() {
        let fr = FormRing::new(z(4), 1, set([0, 2])).unwrap();
        assert!(fr.is_form_ideal(&FormIdeal::new(set([0, 2]), set([0]))));
        assert!(fr.is_form_ideal(&FormIdeal::new(set([0, 2]), set([0, 2]))));
        let v = fr.form_ideal_violations(&FormIdeal::new(set([0]), set([0, 2])));
        assert!(v.iter().any(|v| matches!(v, Violation::AboveMaximum { .. })));
    }

    #[test]
    fn form_ideal_defined_by_element() {
        let fr = FormRing::new(z(4), 1, set([0, 2])).unwrap();
        let zero = FormIdeal::new(set([0]), set([0]));
        assert_eq!(
            fr.form_ideal_defined_by(&zero, 2).unwrap(),
            FormIdeal::new(set([0, 2]), set([0]))
        );
        let fi = FormIdeal::new(set([0, 2]), set([0]));
        assert_eq!(
            fr.form_ideal_defined_by(&fi, 2).unwrap(),
            FormIdeal::new(set([0, 2]), set([0, 2]))
        );
        assert!(matches!(
            fr.form_ideal_defined_by(&zero, 0),
            Err(FormRingError::NoFormIdealDefined { x: 0 })
        ));
    }

    #[test]
    fn subring_c_examples() {
        let r = z(6);
        assert_eq!(subring_c(&r, r.all()).unwrap(), r.all());
        let g = FiniteRing::quadratic(3, 0, 1).unwrap();
        assert_eq!(subring_c(&g, set([0, 1, 2])).unwrap(), set([0, 1, 2]));
        assert!(subring_c(&r, set([0])).is_err(), "{{0}} lacks 1, so it is not a subring");
        assert!(subring_c(&r, set([0, 3])).is_err());
    }

    #[test]
    fn form_ideals_of_z2() {
        let r = z(2);
        let sp = FormRing::new(r.clone(), 1, r.all()).unwrap();
        assert_eq!(sp.form_ideals(), vec![sp.zero_ideal(), sp.whole()]);
        let o = FormRing::new(r.clone(), 1, set([0])).unwrap();
        assert_eq!(o.form_ideals(), vec![o.zero_ideal(), o.whole()]);
    }
}
