use super::{Matrix, OmegaIndex, UnitaryContext, UnitaryError};
use crate::formring::{Elem, ElementSet, FormIdeal};

/// The elementary factor of a commutator `[σ, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// `T_ij(x)`, `i != ±j`.
    Short { i: OmegaIndex, j: OmegaIndex, x: Elem },
    /// `T_{i,-i}(y)`, `y ∈ λ^{-(ε(i)+1)/2} Λ`.
    Long { i: OmegaIndex, y: Elem },
}

/// One congruence of the form `|τ_{*k}| ≡ expected (mod Γ_min)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma46Check {
    pub column: OmegaIndex,
    pub length: Elem,
    pub expected: Elem,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma46Report {
    pub commutator: Matrix,
    pub gamma_min: ElementSet,
    pub checks: Vec<Lemma46Check>,
}

impl Lemma46Report {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Outcome of the row/column propagation check on one matrix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropagationReport {
    /// Columns `k` equal to `x e_k` (and rows `k` equal to `x f_k`) with `x`
    /// a unit.
    pub hypotheses: usize,
    /// `(k, true)` for a failed column statement, `(k, false)` for a row one.
    pub failures: Vec<(OmegaIndex, bool)>,
}

impl UnitaryContext {
    /// `σ ≡ e (mod I)` and `|σ_{*j}| ∈ Γ` for every `j`, without validating
    /// `(I, Γ)`.
    pub fn in_principal_congruence_unchecked(&self, m: &Matrix, fi: &FormIdeal) -> bool {
        let ring = self.ring();
        let d = self.dim();
        (0..d).all(|r| {
            (0..d).all(|c| {
                let x = if r == c {
                    ring.sub(m.get(r, c), ring.one())
                } else {
                    m.get(r, c)
                };
                fi.ideal.contains(x)
            })
        }) && self.indices().all(|j| fi.gamma.contains(self.column_length(m, j)))
    }

    /// Membership in `U_2n((R, Λ), (I, Γ))`.
    pub fn in_principal_congruence(&self, m: &Matrix, fi: &FormIdeal) -> Result<bool, UnitaryError> {
        self.check_matrix(m)?;
        self.form_ring().check_form_ideal(fi)?;
        Ok(self.in_principal_congruence_unchecked(m, fi))
    }

    /// The involution-invariant ideal generated by the off-diagonal entries
    /// of `σ` and `σ⁻¹`, for unitary `σ`.
    pub fn j_ideal(&self, m: &Matrix) -> ElementSet {
        let ring = self.ring();
        let inv = self.entry_law_inverse(m);
        let d = self.dim();
        let mut gens = ElementSet::empty();
        for x in [m, &inv] {
            for r in 0..d {
                for c in 0..d {
                    if r != c {
                        gens.insert(x.get(r, c));
                        gens.insert(ring.conj(x.get(r, c)));
                    }
                }
            }
        }
        ring.ideal_closure(gens)
    }

    /// Computes `[σ, T]` for the given move and checks every length
    /// congruence modulo `Γ^I_min` that holds for
    /// `σ ∈ U_2n((R, Λ), (I, I ∩ Λ))`.
    pub fn check_lemma46(
        &self,
        m: &Matrix,
        ideal: ElementSet,
        mv: Move,
    ) -> Result<Lemma46Report, UnitaryError> {
        let fr = self.form_ring();
        let ring = self.ring();
        let level = FormIdeal::new(ideal, fr.gamma_max(ideal)?);
        if !self.is_unitary(m, super::Method::Entries)? {
            return Err(UnitaryError::NotUnitary);
        }
        if !self.in_principal_congruence_unchecked(m, &level) {
            return Err(UnitaryError::Precondition(
                "σ is not in the principal congruence subgroup of level (I, I∩Λ)".into(),
            ));
        }
        let gmin = fr.gamma_min(ideal)?;
        let zero = ring.zero();
        let (t, special) = match mv {
            Move::Short { i, j, x } => {
                let t = self.t_short(i, j, x)?;
                // |τ_{*j}| ≡ x̄|σ_{*i}|x and |τ_{*,-i}| ≡ x|σ_{*,-j}|x̄
                let a = ring.product(&[ring.conj(x), self.column_length(m, i), x]);
                let b = ring.product(&[x, self.column_length(m, j.neg()), ring.conj(x)]);
                (t, vec![(j, a), (i.neg(), b)])
            }
            Move::Long { i, y } => {
                let t = self.t_long(i, y)?;
                let a = ring.product(&[ring.conj(y), self.column_length(m, i), y]);
                (t, vec![(i.neg(), a)])
            }
        };
        let tau = self.commutator(m, &t);
        let checks = self
            .indices()
            .map(|k| {
                let expected = special
                    .iter()
                    .find(|(c, _)| *c == k)
                    .map_or(zero, |&(_, v)| v);
                let length = self.column_length(&tau, k);
                Lemma46Check {
                    column: k,
                    length,
                    expected,
                    holds: gmin.contains(ring.sub(length, expected)),
                }
            })
            .collect();
        Ok(Lemma46Report {
            commutator: tau,
            gamma_min: gmin,
            checks,
        })
    }

    /// If column `k` is `x e_k` with `x` a unit, row `-k` must be
    /// `conj(x⁻¹) f_{-k}`; symmetrically for rows and columns.
    pub fn check_propagation(&self, m: &Matrix) -> PropagationReport {
        let ring = self.ring();
        let zero = ring.zero();
        let n = self.n();
        let d = self.dim();
        let mut report = PropagationReport::default();
        for k in self.indices() {
            let (p, q) = (k.idx(n), k.neg().idx(n));
            let x = m.get(p, p);
            let Some(xinv) = ring.inverse(x) else { continue };
            let target = ring.conj(xinv);
            if (0..d).all(|r| r == p || m.get(r, p) == zero) {
                report.hypotheses += 1;
                let ok = (0..d).all(|c| m.get(q, c) == if c == q { target } else { zero });
                if !ok {
                    report.failures.push((k, true));
                }
            }
            if (0..d).all(|c| c == p || m.get(p, c) == zero) {
                report.hypotheses += 1;
                let ok = (0..d).all(|r| m.get(r, q) == if r == q { target } else { zero });
                if !ok {
                    report.failures.push((k, false));
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::formring::{FiniteRing, FormRing};

    fn ctx(m: usize, lambda: Elem, lp: &[Elem]) -> UnitaryContext {
        let r = Arc::new(FiniteRing::zmod(m).unwrap());
        let fr = FormRing::new(r, lambda, lp.iter().copied().collect()).unwrap();
        UnitaryContext::new(Arc::new(fr), 3).unwrap()
    }

    fn set<const N: usize>(xs: [Elem; N]) -> ElementSet {
        ElementSet::from(xs)
    }

    #[test]
    fn congruence_membership() {
        let c = ctx(4, 1, &[0, 2]);
        let i = |v| c.index(v).unwrap();
        let whole = c.form_ring().whole();
        let half = FormIdeal::new(set([0, 2]), set([0]));
        assert!(c.in_principal_congruence(&c.identity(), &half).unwrap());
        for x in 0..4 {
            let t = c.t_short(i(1), i(2), x).unwrap();
            assert_eq!(c.in_principal_congruence(&t, &half).unwrap(), x % 2 == 0);
        }
        let t = c.t_long(i(1), 2).unwrap();
        assert!(c.in_principal_congruence(&t, &whole).unwrap());
        // 2 ∈ I but |σ_{*,-1}| = 2 ∉ Γ
        assert!(!c.in_principal_congruence(&t, &half).unwrap());
        let bad = FormIdeal::new(set([0]), set([0, 2]));
        assert!(c.in_principal_congruence(&t, &bad).is_err());
    }

    #[test]
    fn gamma_min_of_whole_ring_is_lambda() {
        // ζ = 1 ∈ R puts all of Λ into Γ_min, so (R, Γ) forces Γ = Λ
        for (m, lam, lp) in [(2, 1, vec![0, 1]), (4, 1, vec![0, 2]), (4, 3, vec![0, 2])] {
            let c = ctx(m, lam, &lp);
            let fr = c.form_ring();
            assert_eq!(fr.gamma_min(c.ring().all()).unwrap(), fr.form_parameter());
        }
    }

    #[test]
    fn j_ideal_examples() {
        let c = ctx(4, 1, &[0, 2]);
        assert_eq!(c.j_ideal(&c.identity()), set([0]));
        let t = c.t_short(c.index(1).unwrap(), c.index(2).unwrap(), 2).unwrap();
        assert_eq!(c.j_ideal(&t), set([0, 2]));
    }

    #[test]
    fn lemma46_on_long_root() {
        let c = ctx(4, 1, &[0, 2]);
        let i = |v| c.index(v).unwrap();
        let sigma = c.t_long(i(1), 2).unwrap();
        let moves = [
            Move::Short { i: i(1), j: i(2), x: 3 },
            Move::Short { i: i(-2), j: i(3), x: 1 },
            Move::Long { i: i(1), y: 2 },
            Move::Long { i: i(-3), y: 2 },
        ];
        for mv in moves {
            let rep = c.check_lemma46(&sigma, set([0, 2]), mv).unwrap();
            assert!(rep.holds(), "{mv:?}: {:?}", rep.checks);
        }
        let id = c.check_lemma46(&c.identity(), set([0, 2]), moves[0]).unwrap();
        assert!(id.checks.iter().all(|k| k.length == 0));
    }

    #[test]
    fn lemma46_precondition() {
        let c = ctx(4, 1, &[0, 2]);
        let i = |v| c.index(v).unwrap();
        let sigma = c.t_short(i(1), i(2), 1).unwrap();
        let mv = Move::Short { i: i(1), j: i(3), x: 1 };
        assert!(matches!(
            c.check_lemma46(&sigma, set([0, 2]), mv),
            Err(UnitaryError::Precondition(_))
        ));
    }

    #[test]
    fn propagation_on_diagonal_and_roots() {
        let c = ctx(4, 3, &[0, 1, 2, 3]);
        let i = |v| c.index(v).unwrap();
        for m in [
            c.identity(),
            c.t_short(i(1), i(2), 1).unwrap(),
            c.t_long(i(-2), 3).unwrap(),
        ] {
            let rep = c.check_propagation(&m);
            assert!(rep.hypotheses > 0);
            assert!(rep.failures.is_empty(), "{m}");
        }
    }
}
