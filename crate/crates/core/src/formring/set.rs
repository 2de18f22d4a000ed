use std::cmp::Ordering;
use std::fmt;

use super::Elem;

/// A subset of the elements of a finite ring, stored as a bitmask over
/// element indices. Rings are capped at 64 elements, so one word suffices.
///
/// Iteration is always in increasing index order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const fn empty() -> Self {
        ElementSet(0)
    }

    pub fn singleton(x: Elem) -> Self {
        ElementSet(1u64 << x)
    }

    /// All indices `0..order`.
    pub fn full(order: usize) -> Self {
        if order >= 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << order) - 1)
        }
    }

    pub const fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, x: Elem) -> bool {
        x < 64 && self.0 & (1u64 << x) != 0
    }

    pub fn insert(&mut self, x: Elem) -> bool {
        let fresh = !self.contains(x);
        self.0 |= 1u64 << x;
        fresh
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ElementSet) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElementSet) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElementSet) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<Elem> {
        self.iter().collect()
    }

    /// Deterministic ordering used for reported lists: by size, then by the
    /// sorted element list.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.to_vec().cmp(&other.to_vec()))
    }
}

impl FromIterator<Elem> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut s = ElementSet::empty();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl<const N: usize> From<[Elem; N]> for ElementSet {
    fn from(xs: [Elem; N]) -> Self {
        xs.into_iter().collect()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = Elem;

    fn next(&mut self) -> Option<Elem> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(x as Elem)
    }
}

impl IntoIterator for ElementSet {
    type Item = Elem;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterates_in_index_order() {
        let s = ElementSet::from([5, 0, 63, 2]);
        assert_eq!(s.to_vec(), vec![0, 2, 5, 63]);
        assert_eq!(s.len(), 4);
        assert_eq!(s.to_string(), "{0,2,5,63}");
    }

    #[test]
    fn full_set_edge_sizes() {
        assert_eq!(ElementSet::full(64).len(), 64);
        assert_eq!(ElementSet::full(1).to_vec(), vec![0]);
    }

    #[test]
    fn canonical_order_is_size_first() {
        let a = ElementSet::from([3]);
        let b = ElementSet::from([0, 1]);
        assert_eq!(a.canonical_cmp(&b), Ordering::Less);
        let c = ElementSet::from([0, 2]);
        assert_eq!(b.canonical_cmp(&c), Ordering::Less);
    }
}
