use super::{Matrix, OmegaIndex, UnitaryContext, UnitaryError};
use crate::formring::{Elem, ElementSet, FormIdeal};

/// An elementary root element, by its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Root {
    /// `T_ij(ξ)` with `i != ±j`.
    Short(OmegaIndex, OmegaIndex, Elem),
    /// `T_{i,-i}(α)`.
    Long(OmegaIndex, Elem),
}

impl std::fmt::Display for Root {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Root::Short(i, j, x) => write!(f, "T_{{{i},{j}}}({x})"),
            Root::Long(i, a) => write!(f, "T_{{{i},{}}}({a})", i.neg()),
        }
    }
}

impl UnitaryContext {
    /// `T_ij(ξ) = e + ξ e^{ij} - λ^{(ε(j)-ε(i))/2} ξ̄ e^{-j,-i}`.
    pub fn t_short(&self, i: OmegaIndex, j: OmegaIndex, xi: Elem) -> Result<Matrix, UnitaryError> {
        if i.value().abs() == j.value().abs() {
            return Err(UnitaryError::ShortRootIndices {
                i: i.value(),
                j: j.value(),
            });
        }
        self.check_elem(xi)?;
        let ring = self.ring();
        let mut m = self.identity();
        self.add_unit(&mut m, i, j, xi);
        let second = ring.neg(ring.mul(self.lambda_between(i, j), ring.conj(xi)));
        self.add_unit(&mut m, j.neg(), i.neg(), second);
        Ok(m)
    }

    /// `λ^{-(ε(i)+1)/2} Λ`: `λ̄Λ` for `i > 0`, `Λ` for `i < 0`.
    pub fn long_root_values(&self, i: OmegaIndex) -> ElementSet {
        self.long_root_values_in(i, self.form_ring().form_parameter())
    }

    /// `λ^{-(ε(i)+1)/2} Γ` for an arbitrary subgroup `Γ`.
    pub fn long_root_values_in(&self, i: OmegaIndex, gamma: ElementSet) -> ElementSet {
        let ring = self.ring();
        let factor = self.form_ring().lambda_pow(-(i.eps() + 1) / 2);
        gamma.iter().map(|g| ring.mul(factor, g)).collect()
    }

    /// `e + α e^{i,-i}` without checking admissibility of `α`.
    pub fn t_long_unchecked(&self, i: OmegaIndex, alpha: Elem) -> Matrix {
        let mut m = self.identity();
        self.add_unit(&mut m, i, i.neg(), alpha);
        m
    }

    /// `T_{i,-i}(α) = e + α e^{i,-i}` for `α ∈ λ^{-(ε(i)+1)/2} Λ`.
    pub fn t_long(&self, i: OmegaIndex, alpha: Elem) -> Result<Matrix, UnitaryError> {
        self.check_elem(alpha)?;
        if !self.long_root_values(i).contains(alpha) {
            return Err(UnitaryError::LongRootValue {
                i: i.value(),
                alpha,
            });
        }
        Ok(self.t_long_unchecked(i, alpha))
    }

    pub fn root_matrix(&self, root: &Root) -> Result<Matrix, UnitaryError> {
        match *root {
            Root::Short(i, j, x) => self.t_short(i, j, x),
            Root::Long(i, a) => self.t_long(i, a),
        }
    }

    /// `P_ij` from its explicit entries.
    pub fn p_matrix(&self, i: OmegaIndex, j: OmegaIndex) -> Result<Matrix, UnitaryError> {
        if i.value().abs() == j.value().abs() {
            return Err(UnitaryError::ShortRootIndices {
                i: i.value(),
                j: j.value(),
            });
        }
        let ring = self.ring();
        let one = ring.one();
        let minus = ring.neg(one);
        let mut m = self.identity();
        self.add_unit(&mut m, i, j, one);
        self.add_unit(&mut m, j, i, minus);
        self.add_unit(&mut m, i.neg(), j.neg(), self.lambda_between(j, i));
        self.add_unit(&mut m, j.neg(), i.neg(), ring.neg(self.lambda_between(i, j)));
        for k in [i, j, i.neg(), j.neg()] {
            self.add_unit(&mut m, k, k, minus);
        }
        Ok(m)
    }

    /// `T_ij(1) T_ji(-1) T_ij(1)`.
    pub fn p_product(&self, i: OmegaIndex, j: OmegaIndex) -> Result<Matrix, UnitaryError> {
        let ring = self.ring();
        let a = self.t_short(i, j, ring.one())?;
        let b = self.t_short(j, i, ring.neg(ring.one()))?;
        Ok(self.product(&[&a, &b, &a]))
    }

    fn check_elem(&self, x: Elem) -> Result<(), UnitaryError> {
        let order = self.ring().order();
        if (x as usize) < order {
            Ok(())
        } else {
            Err(UnitaryError::Entry { entry: x, order })
        }
    }

    /// Every nontrivial root element whose parameter lies in `I` (short) or
    /// `λ^{-(ε(i)+1)/2} Γ` (long), as parameter list and distinct matrices,
    /// in index order.
    pub fn level_roots(&self, ideal: ElementSet, gamma: ElementSet) -> Vec<(Root, Matrix)> {
        let zero = self.ring().zero();
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let idx: Vec<OmegaIndex> = self.indices().collect();
        for &i in &idx {
            for &j in &idx {
                if i.value().abs() == j.value().abs() {
                    continue;
                }
                for x in ideal.iter().filter(|&x| x != zero) {
                    let m = self.t_short(i, j, x).expect("valid short root");
                    if seen.insert(m.clone()) {
                        out.push((Root::Short(i, j, x), m));
                    }
                }
            }
            for a in self
                .long_root_values_in(i, gamma)
                .iter()
                .filter(|&a| a != zero)
            {
                let m = self.t_long_unchecked(i, a);
                if seen.insert(m.clone()) {
                    out.push((Root::Long(i, a), m));
                }
            }
        }
        out
    }

    /// Generators of `EU_2n(R, Λ)`.
    pub fn elementary_roots(&self) -> Vec<(Root, Matrix)> {
        let fr = self.form_ring();
        self.level_roots(fr.ring().all(), fr.form_parameter())
    }

    /// Whether the root element is elementary of level `(I, Γ)`.
    pub fn is_elementary_of_level(&self, root: &Root, fi: &FormIdeal) -> Result<bool, UnitaryError> {
        match *root {
            Root::Short(i, j, x) => {
                if i.value().abs() == j.value().abs() {
                    return Err(UnitaryError::ShortRootIndices {
                        i: i.value(),
                        j: j.value(),
                    });
                }
                Ok(fi.ideal.contains(x))
            }
            Root::Long(i, a) => Ok(self.long_root_values_in(i, fi.gamma).contains(a)),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::formring::{FiniteRing, FormRing};
    use crate::unitary::Method;

    fn ctx(m: usize, lambda: Elem, lp: &[Elem]) -> UnitaryContext {
        let r = Arc::new(FiniteRing::zmod(m).unwrap());
        let fr = FormRing::new(r, lambda, lp.iter().copied().collect()).unwrap();
        UnitaryContext::new(Arc::new(fr), 3).unwrap()
    }

    fn ix(c: &UnitaryContext, v: i32) -> OmegaIndex {
        c.index(v).unwrap()
    }

    #[test]
    fn short_root_entries() {
        let c = ctx(4, 1, &[0, 2]);
        assert_eq!(c.t_short(ix(&c, 1), ix(&c, 2), 0).unwrap(), c.identity());
        let t = c.t_short(ix(&c, 1), ix(&c, 2), 3).unwrap();
        assert_eq!(t.get(0, 1), 3);
        // 1-based (5, 6)
        assert_eq!(t.get(4, 5), 1);
        let t = c.t_short(ix(&c, 1), ix(&c, -2), 1).unwrap();
        // -λ̄ ξ̄ at 1-based (2, 6)
        assert_eq!(t.get(1, 5), 3);
        assert!(c.t_short(ix(&c, 1), ix(&c, -1), 1).is_err());
    }

    #[test]
    fn long_root_admissibility() {
        let c = ctx(4, 1, &[0, 2]);
        assert_eq!(c.t_long(ix(&c, 1), 0).unwrap(), c.identity());
        let t = c.t_long(ix(&c, 1), 2).unwrap();
        assert_eq!(t.get(0, 5), 2);
        assert!(matches!(
            c.t_long(ix(&c, 1), 1),
            Err(UnitaryError::LongRootValue { i: 1, alpha: 1 })
        ));
    }

    #[test]
    fn root_elements_are_unitary() {
        for (m, lam, lp) in [(2, 1, vec![0, 1]), (4, 3, vec![0, 1, 2, 3]), (4, 1, vec![0, 2])] {
            let c = ctx(m, lam, &lp);
            for (root, t) in c.elementary_roots() {
                for method in Method::ALL {
                    assert_eq!(c.is_unitary(&t, method), Ok(true), "{root} {method:?}");
                }
            }
        }
    }

    #[test]
    fn p_matches_product_over_z2() {
        let c = ctx(2, 1, &[0, 1]);
        let (i, j) = (ix(&c, 1), ix(&c, 2));
        assert_eq!(c.p_matrix(i, j).unwrap(), c.p_product(i, j).unwrap());
        let p = c.p_matrix(i, j).unwrap();
        let inv = c.unitary_inverse(&p).unwrap();
        assert!(c.is_identity(&c.mul(&p, &inv)));
    }

    #[test]
    fn level_membership() {
        let c = ctx(4, 1, &[0, 2]);
        let zero = FormIdeal::new(ElementSet::from([0]), ElementSet::from([0]));
        assert!(c.is_elementary_of_level(&Root::Short(ix(&c, 1), ix(&c, 2), 0), &zero).unwrap());
        assert!(!c.is_elementary_of_level(&Root::Short(ix(&c, 1), ix(&c, 2), 1), &zero).unwrap());
        let fi = FormIdeal::new(ElementSet::from([0, 2]), ElementSet::from([0, 2]));
        assert!(c.is_elementary_of_level(&Root::Long(ix(&c, -1), 2), &fi).unwrap());
        assert!(c
            .is_elementary_of_level(&Root::Short(ix(&c, 1), ix(&c, -1), 2), &fi)
            .is_err());
    }

    #[test]
    fn generator_counts_over_z2() {
        // 12 short root subgroups after identifying T_ij with T_{-j,-i}, 6 long
        assert_eq!(ctx(2, 1, &[0, 1]).elementary_roots().len(), 18);
        assert_eq!(ctx(2, 1, &[0]).elementary_roots().len(), 12);
    }
}
