//! Finite rings with involution, stored as dense operation tables.

use std::collections::VecDeque;
use std::fmt;

use super::{Elem, ElementSet, RingError};

/// Rings are limited to this many elements so that every table stays small
/// and element subsets fit in a single machine word.
pub const MAX_ORDER: usize = 64;

/// A finite associative unital ring with an involution `r -> r̄`.
///
/// Elements are the indices `0..order`. All tables are row-major
/// `order x order` arrays.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRing {
    label: String,
    order: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    conj: Vec<Elem>,
    inverse: Vec<Option<Elem>>,
    zero: Elem,
    one: Elem,
    commutative: bool,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

impl FiniteRing {
    /// Builds a ring from raw tables, checking every ring and involution
    /// axiom exhaustively.
    pub fn from_tables(
        label: impl Into<String>,
        add: Vec<Elem>,
        mul: Vec<Elem>,
        conj: Vec<Elem>,
        zero: Elem,
        one: Elem,
    ) -> Result<Self, RingError> {
        let order = conj.len();
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(RingError::OrderOutOfRange { order });
        }
        if add.len() != order * order || mul.len() != order * order {
            return Err(RingError::TableShape { order });
        }
        if [&add, &mul, &conj]
            .iter()
            .any(|t| t.iter().any(|&x| x as usize >= order))
            || zero as usize >= order
            || one as usize >= order
        {
            return Err(RingError::TableShape { order });
        }

        let mut neg = vec![0; order];
        for a in 0..order {
            match (0..order).find(|&b| add[a * order + b] == zero) {
                Some(b) => neg[a] = b as Elem,
                None => {
                    return Err(RingError::Axiom {
                        axiom: "additive inverse",
                        witness: format!("{a} has no negative"),
                    })
                }
            }
        }

        let mut ring = FiniteRing {
            label: label.into(),
            order,
            add,
            mul,
            neg,
            conj,
            inverse: vec![None; order],
            zero,
            one,
            commutative: false,
        };
        if let Some((axiom, witness)) = ring.ring_violations().into_iter().next() {
            return Err(RingError::Axiom { axiom, witness });
        }
        if let Some((axiom, witness)) = ring.involution_violations().into_iter().next() {
            return Err(RingError::Involution { axiom, witness });
        }
        ring.commutative = ring
            .elements()
            .all(|a| ring.elements().all(|b| ring.mul(a, b) == ring.mul(b, a)));
        for a in 0..order as Elem {
            ring.inverse[a as usize] = ring
                .elements()
                .find(|&b| ring.mul(a, b) == one && ring.mul(b, a) == one);
        }
        Ok(ring)
    }

    /// `Z/m` with the identity involution.
    pub fn zmod(m: usize) -> Result<Self, RingError> {
        if !(2..=MAX_ORDER).contains(&m) {
            return Err(RingError::OrderOutOfRange { order: m });
        }
        let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Elem> {
            (0..m * m).map(|k| f(k / m, k % m) as Elem).collect()
        };
        let add = table(&|a, b| (a + b) % m);
        let mul = table(&|a, b| (a * b) % m);
        let conj = (0..m as Elem).collect();
        Self::from_tables(format!("Z/{m}"), add, mul, conj, 0, 1)
    }

    /// `(Z/m)[x]/(x² + bx + c)` with conjugation `x -> -b - x`.
    ///
    /// The element `u + v·x` has index `u + m·v`.
    pub fn quadratic(m: usize, b: usize, c: usize) -> Result<Self, RingError> {
        let order = m.saturating_mul(m);
        if m < 2 || order > MAX_ORDER {
            return Err(RingError::OrderOutOfRange { order });
        }
        let (b, c) = (b % m, c % m);
        let split = |k: usize| (k % m, k / m);
        let join = |u: usize, v: usize| (u % m + m * (v % m)) as Elem;
        let mut add = Vec::with_capacity(order * order);
        let mut mul = Vec::with_capacity(order * order);
        for p in 0..order {
            for q in 0..order {
                let ((u1, v1), (u2, v2)) = (split(p), split(q));
                add.push(join(u1 + u2, v1 + v2));
                // x² = -b·x - c
                let vv = v1 * v2 % m;
                let u = u1 * u2 + (m - c) * vv;
                let v = u1 * v2 + u2 * v1 + (m - b) * vv;
                mul.push(join(u, v));
            }
        }
        // u + v·x  ->  (u - v·b) - v·x
        let conj = (0..order)
            .map(|k| {
                let (u, v) = split(k);
                join(u + (m - v * b % m), m - v)
            })
            .collect();
        Self::from_tables(format!("(Z/{m})[x]/(x^2+{b}x+{c})"), add, mul, conj, 0, 1)
    }

    /// `Z/m × Z/m` with the swap involution `(a, b) -> (b, a)`.
    ///
    /// The pair `(a, b)` has index `a + m·b`.
    pub fn product_swap(m: usize) -> Result<Self, RingError> {
        if !(2..=8).contains(&m) {
            return Err(RingError::OrderOutOfRange { order: m * m });
        }
        let order = m * m;
        let split = |k: usize| (k % m, k / m);
        let join = |a: usize, b: usize| (a % m + m * (b % m)) as Elem;
        let mut add = Vec::with_capacity(order * order);
        let mut mul = Vec::with_capacity(order * order);
        for p in 0..order {
            for q in 0..order {
                let ((a1, b1), (a2, b2)) = (split(p), split(q));
                add.push(join(a1 + a2, b1 + b2));
                mul.push(join(a1 * a2, b1 * b2));
            }
        }
        let conj = (0..order)
            .map(|k| {
                let (a, b) = split(k);
                join(b, a)
            })
            .collect();
        let one = join(1, 1);
        Self::from_tables(format!("Z/{m} x Z/{m} (swap)"), add, mul, conj, 0, one)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.order as Elem
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn conj(&self, a: Elem) -> Elem {
        self.conj[a as usize]
    }

    /// Product of a sequence, multiplied left to right.
    pub fn product(&self, factors: &[Elem]) -> Elem {
        factors.iter().fold(self.one, |acc, &x| self.mul(acc, x))
    }

    /// Two-sided inverse, if `a` is a unit.
    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        self.inverse[a as usize]
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.inverse[a as usize].is_some()
    }

    pub fn center(&self) -> ElementSet {
        self.elements()
            .filter(|&z| self.elements().all(|r| self.mul(z, r) == self.mul(r, z)))
            .collect()
    }

    pub fn is_central(&self, a: Elem) -> bool {
        self.elements().all(|r| self.mul(a, r) == self.mul(r, a))
    }

    /// Every violated ring axiom, each with one witness.
    pub fn ring_violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let els: Vec<Elem> = self.elements().collect();
        let mut first = |axiom: &'static str, found: Option<String>| {
            if let Some(w) = found {
                out.push((axiom, w));
            }
        };
        if self.zero == self.one {
            first("1 != 0", Some("zero and one coincide".into()));
        }
        let pairs = || els.iter().flat_map(|&a| els.iter().map(move |&b| (a, b)));
        let triples =
            || pairs().flat_map(|(a, b)| els.iter().map(move |&c| (a, b, c)));
        first(
            "additive commutativity",
            pairs()
                .find(|&(a, b)| self.add(a, b) != self.add(b, a))
                .map(|(a, b)| format!("{a}+{b}")),
        );
        first(
            "additive identity",
            els.iter()
                .find(|&&a| self.add(a, self.zero) != a)
                .map(|a| format!("{a}+0")),
        );
        first(
            "multiplicative identity",
            els.iter()
                .find(|&&a| self.mul(a, self.one) != a || self.mul(self.one, a) != a)
                .map(|a| format!("{a}*1")),
        );
        first(
            "additive associativity",
            triples()
                .find(|&(a, b, c)| self.add(self.add(a, b), c) != self.add(a, self.add(b, c)))
                .map(|(a, b, c)| format!("({a},{b},{c})")),
        );
        first(
            "multiplicative associativity",
            triples()
                .find(|&(a, b, c)| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)))
                .map(|(a, b, c)| format!("({a},{b},{c})")),
        );
        first(
            "distributivity",
            triples()
                .find(|&(a, b, c)| {
                    self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                        || self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c))
                })
                .map(|(a, b, c)| format!("({a},{b},{c})")),
        );
        out
    }

    /// Every violated involution law, each with one witness.
    pub fn involution_violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        for a in self.elements() {
            if self.conj(self.conj(a)) != a {
                out.push(("involution is not of order two", format!("r={a}")));
                break;
            }
        }
        'add: for a in self.elements() {
            for b in self.elements() {
                if self.conj(self.add(a, b)) != self.add(self.conj(a), self.conj(b)) {
                    out.push(("involution is not additive", format!("r={a}, s={b}")));
                    break 'add;
                }
            }
        }
        'mul: for a in self.elements() {
            for b in self.elements() {
                if self.conj(self.mul(a, b)) != self.mul(self.conj(b), self.conj(a)) {
                    out.push(("involution is not anti-multiplicative", format!("r={a}, s={b}")));
                    break 'mul;
                }
            }
        }
        out
    }

    /// Additive subgroup generated by `gens`.
    pub fn additive_closure(&self, gens: ElementSet) -> ElementSet {
        let mut set = ElementSet::singleton(self.zero);
        let mut queue: VecDeque<Elem> = gens.iter().collect();
        let seeds: Vec<Elem> = gens.iter().collect();
        while let Some(x) = queue.pop_front() {
            if !set.insert(x) {
                continue;
            }
            for &g in &seeds {
                let y = self.add(x, g);
                if !set.contains(y) {
                    queue.push_back(y);
                }
            }
        }
        // finite additive group: closure under adding generators already
        // yields negatives
        set
    }

    pub fn is_additive_subgroup(&self, set: ElementSet) -> bool {
        set.contains(self.zero)
            && set
                .iter()
                .all(|a| set.iter().all(|b| set.contains(self.add(a, b))) && set.contains(self.neg(a)))
    }

    /// Smallest two-sided ideal containing `gens`.
    pub fn ideal_closure(&self, gens: ElementSet) -> ElementSet {
        let mut current = self.additive_closure(gens);
        loop {
            let mut expanded = current;
            for x in current {
                for r in self.elements() {
                    expanded.insert(self.mul(r, x));
                    expanded.insert(self.mul(x, r));
                }
            }
            let next = self.additive_closure(expanded);
            if next == current {
                return current;
            }
            current = next;
        }
    }

    pub fn is_ideal(&self, set: ElementSet) -> bool {
        self.is_additive_subgroup(set)
            && set.iter().all(|x| {
                self.elements()
                    .all(|r| set.contains(self.mul(r, x)) && set.contains(self.mul(x, r)))
            })
    }

    pub fn conj_set(&self, set: ElementSet) -> ElementSet {
        set.iter().map(|x| self.conj(x)).collect()
    }

    pub fn is_involution_invariant(&self, set: ElementSet) -> bool {
        self.conj_set(set) == set
    }

    /// The ideal generated by `x` and `x̄`.
    pub fn involution_ideal(&self, x: Elem) -> ElementSet {
        self.ideal_closure(ElementSet::from([x, self.conj(x)]))
    }

    /// All additive subgroups `H` with `lower ⊆ H ⊆ upper`, where `lower`
    /// and `upper` are themselves additive subgroups, in canonical order.
    pub fn subgroups_between(&self, lower: ElementSet, upper: ElementSet) -> Vec<ElementSet> {
        if !lower.is_subset(upper) {
            return Vec::new();
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([lower]);
        seen.insert(lower.bits());
        while let Some(h) = queue.pop_front() {
            out.push(h);
            for g in upper.difference(h) {
                let next = self.additive_closure(h.union(ElementSet::singleton(g)));
                if seen.insert(next.bits()) {
                    queue.push_back(next);
                }
            }
        }
        out.sort_by(ElementSet::canonical_cmp);
        out
    }

    /// All two-sided ideals `I` with `Ī = I`, in canonical order.
    pub fn involution_invariant_ideals(&self) -> Vec<ElementSet> {
        self.subgroups_between(ElementSet::singleton(self.zero), self.all())
            .into_iter()
            .filter(|&s| self.is_ideal(s) && self.is_involution_invariant(s))
            .collect()
    }
}
