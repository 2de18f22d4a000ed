use std::sync::Arc;

use super::{LocalizeError, MultiplicativeSet};
use crate::formring::{Elem, ElementSet, FiniteRing};

/// `S⁻¹R` as classes of pairs `(r, s)` under
/// `(r, s) ~ (r', s')` iff `t(rs' - r's) = 0` for some `t ∈ S`.
///
/// Class indices are assigned in order of first appearance, scanning
/// `s = 1` first and then the rest of `S` in index order, `r` ascending
/// within each `s`. So `0/1` and `1/1` are the first two classes.
#[derive(Debug, Clone)]
pub struct LocalizedRing {
    base: Arc<FiniteRing>,
    set: MultiplicativeSet,
    ring: Arc<FiniteRing>,
    class: Vec<Option<Elem>>,
    reps: Vec<(Elem, Elem)>,
}

impl LocalizedRing {
    pub fn new(base: Arc<FiniteRing>, set: MultiplicativeSet) -> Result<Self, LocalizeError> {
        let r = &*base;
        let set = MultiplicativeSet::new(r, set.elements())?;
        let order = r.order();
        let s_list: Vec<Elem> = std::iter::once(r.one())
            .chain(set.elements().iter().filter(|&s| s != r.one()))
            .collect();
        let equiv = |(a, s): (Elem, Elem), (b, t): (Elem, Elem)| {
            let diff = r.sub(r.mul(a, t), r.mul(b, s));
            set.elements().iter().any(|u| r.mul(u, diff) == r.zero())
        };
        let mut class = vec![None; order * order];
        let mut reps: Vec<(Elem, Elem)> = Vec::new();
        for &s in &s_list {
            for a in r.elements() {
                let c = match reps.iter().position(|&p| equiv((a, s), p)) {
                    Some(c) => c,
                    None => {
                        reps.push((a, s));
                        reps.len() - 1
                    }
                };
                class[a as usize * order + s as usize] = Some(c as Elem);
            }
        }
        let cls = |a: Elem, s: Elem| class[a as usize * order + s as usize].expect("s ∈ S");
        let k = reps.len();
        let mut add = Vec::with_capacity(k * k);
        let mut mul = Vec::with_capacity(k * k);
        for &(a, s) in &reps {
            for &(b, t) in &reps {
                add.push(cls(r.add(r.mul(a, t), r.mul(b, s)), r.mul(s, t)));
                mul.push(cls(r.mul(a, b), r.mul(s, t)));
            }
        }
        let conj = reps.iter().map(|&(a, s)| cls(r.conj(a), r.conj(s))).collect();
        let ring = FiniteRing::from_tables(
            format!("{}[S^-1]", r.label()),
            add,
            mul,
            conj,
            cls(r.zero(), r.one()),
            cls(r.one(), r.one()),
        )?;
        Ok(LocalizedRing {
            base,
            set,
            ring: Arc::new(ring),
            class,
            reps,
        })
    }

    pub fn base(&self) -> &Arc<FiniteRing> {
        &self.base
    }

    pub fn multiplicative_set(&self) -> MultiplicativeSet {
        self.set
    }

    /// The ring `S⁻¹R`.
    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.ring.order()
    }

    /// The class of `r/s`, or `None` when `s ∉ S`.
    pub fn class(&self, r: Elem, s: Elem) -> Option<Elem> {
        let order = self.base.order();
        if (r as usize) >= order || (s as usize) >= order {
            return None;
        }
        self.class[r as usize * order + s as usize]
    }

    /// `f(r) = r/1`.
    pub fn map(&self, r: Elem) -> Elem {
        self.class(r, self.base.one()).expect("element of the base ring")
    }

    /// A pair `(r, s)` representing the class.
    pub fn representative(&self, c: Elem) -> (Elem, Elem) {
        self.reps[c as usize]
    }

    /// `S⁻¹X = {x/s : x ∈ X, s ∈ S}`.
    pub fn image(&self, x: ElementSet) -> ElementSet {
        x.iter()
            .flat_map(|a| self.set.elements().iter().map(move |s| (a, s)))
            .map(|(a, s)| self.class(a, s).expect("s ∈ S"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6() -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(6).unwrap())
    }

    fn loc(s: &[Elem]) -> LocalizedRing {
        let r = z6();
        let set = MultiplicativeSet::new(&r, s.iter().copied().collect()).unwrap();
        LocalizedRing::new(r, set).unwrap()
    }

    #[test]
    fn orders_over_z6() {
        assert_eq!(loc(&[1, 3, 5]).order(), 2);
        assert_eq!(loc(&[1, 2, 4]).order(), 3);
        assert_eq!(loc(&[1, 5]).order(), 6);
        assert_eq!(loc(&[1]).order(), 6);
    }

    #[test]
    fn map_is_a_homomorphism_and_s_becomes_units() {
        for s in [&[1, 3, 5][..], &[1, 2, 4], &[1, 5], &[1]] {
            let l = loc(s);
            let (r, m) = (l.base().clone(), l.ring().clone());
            for a in r.elements() {
                for b in r.elements() {
                    assert_eq!(l.map(r.add(a, b)), m.add(l.map(a), l.map(b)));
                    assert_eq!(l.map(r.mul(a, b)), m.mul(l.map(a), l.map(b)));
                }
                assert_eq!(l.map(r.conj(a)), m.conj(l.map(a)));
            }
            assert_eq!(l.map(r.one()), m.one());
            for t in s {
                assert!(m.is_unit(l.map(*t)));
            }
        }
    }

    #[test]
    fn image_of_ideals() {
        let l = loc(&[1, 3, 5]);
        assert_eq!(l.image(ElementSet::from([0, 3])), l.ring().all());
        assert_eq!(l.image(ElementSet::from([0, 2, 4])).len(), 1);
    }
}
