use std::sync::Arc;

use smallvec::SmallVec;

use super::{Matrix, OmegaIndex, UnitaryError};
use crate::formring::{Elem, FiniteRing, FormRing};

/// Packed row-major entry list of a matrix; see [`UnitaryContext::key`].
pub type Key = SmallVec<[u64; 2]>;

/// Largest `|R|^{dim}` for which invertibility over a noncommutative ring and
/// the definitional q check are decided by sweeping every vector.
const VECTOR_SWEEP_LIMIT: usize = 1_000_000;

/// How [`UnitaryContext::is_unitary`] decides membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Preservation of `h` and `q`.
    Definition,
    /// The entry law for `σ⁻¹` plus column lengths in `Λ`.
    Entries,
    /// The block formula for `σ⁻¹` plus the `AH_n` conditions.
    Blocks,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Definition, Method::Entries, Method::Blocks];
}

/// A form ring together with a rank `n`; all matrix operations of the
/// unitary group live here.
#[derive(Debug, Clone)]
pub struct UnitaryContext {
    form_ring: Arc<FormRing>,
    n: usize,
    bits: u32,
    per_word: usize,
    words: usize,
    gf2: bool,
}

pub(crate) fn mat_mul(ring: &FiniteRing, a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.dim();
    let zero = ring.zero();
    let mut out = Matrix::filled(d, zero);
    for r in 0..d {
        for k in 0..d {
            let x = a.get(r, k);
            if x == zero {
                continue;
            }
            for c in 0..d {
                let y = b.get(k, c);
                if y != zero {
                    let v = ring.add(out.get(r, c), ring.mul(x, y));
                    out.set(r, c, v);
                }
            }
        }
    }
    out
}

impl UnitaryContext {
    pub fn new(form_ring: Arc<FormRing>, n: usize) -> Result<Self, UnitaryError> {
        if !(1..=8).contains(&n) {
            return Err(UnitaryError::Rank(n));
        }
        let ring = form_ring.ring();
        let order = ring.order();
        let bits = usize::BITS - (order - 1).leading_zeros();
        let bits = bits.max(1);
        let per_word = 64 / bits as usize;
        let dim = 2 * n;
        let words = (dim * dim).div_ceil(per_word);
        let gf2 = order == 2 && ring.zero() == 0 && ring.one() == 1 && dim * dim <= 64;
        Ok(UnitaryContext {
            form_ring,
            n,
            bits,
            per_word,
            words,
            gf2,
        })
    }

    pub fn form_ring(&self) -> &FormRing {
        &self.form_ring
    }

    pub fn form_ring_arc(&self) -> &Arc<FormRing> {
        &self.form_ring
    }

    pub fn ring(&self) -> &FiniteRing {
        self.form_ring.ring()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn index(&self, value: i32) -> Result<OmegaIndex, UnitaryError> {
        OmegaIndex::new(value, self.n)
    }

    /// `1, …, n, -n, …, -1`.
    pub fn indices(&self) -> impl Iterator<Item = OmegaIndex> + '_ {
        (0..self.dim()).map(|p| OmegaIndex::at(p, self.n))
    }

    /// `λ^{(ε(j) - ε(i))/2}`.
    pub fn lambda_between(&self, i: OmegaIndex, j: OmegaIndex) -> Elem {
        self.form_ring.lambda_pow((j.eps() - i.eps()) / 2)
    }

    pub fn check_matrix(&self, m: &Matrix) -> Result<(), UnitaryError> {
        if m.dim() != self.dim() {
            return Err(UnitaryError::Shape {
                expected: self.dim(),
                found: m.dim(),
            });
        }
        let order = self.ring().order();
        match m.data().iter().find(|&&x| x as usize >= order) {
            Some(&entry) => Err(UnitaryError::Entry { entry, order }),
            None => Ok(()),
        }
    }

    pub fn check_vector(&self, v: &[Elem]) -> Result<(), UnitaryError> {
        if v.len() != self.dim() {
            return Err(UnitaryError::VectorLength {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let order = self.ring().order();
        match v.iter().find(|&&x| x as usize >= order) {
            Some(&entry) => Err(UnitaryError::Entry { entry, order }),
            None => Ok(()),
        }
    }

    pub fn identity(&self) -> Matrix {
        let ring = self.ring();
        Matrix::from_fn(self.dim(), |r, c| if r == c { ring.one() } else { ring.zero() })
    }

    pub fn is_identity(&self, m: &Matrix) -> bool {
        let ring = self.ring();
        let d = m.dim();
        (0..d).all(|r| {
            (0..d).all(|c| m.get(r, c) == if r == c { ring.one() } else { ring.zero() })
        })
    }

    /// The entry `σ_{ij}`.
    pub fn at(&self, m: &Matrix, i: OmegaIndex, j: OmegaIndex) -> Elem {
        m.get(i.idx(self.n), j.idx(self.n))
    }

    /// The matrix unit `e^{ij}` scaled by `x`, added onto `m`.
    pub(crate) fn add_unit(&self, m: &mut Matrix, i: OmegaIndex, j: OmegaIndex, x: Elem) {
        let (r, c) = (i.idx(self.n), j.idx(self.n));
        let v = self.ring().add(m.get(r, c), x);
        m.set(r, c, v);
    }

    pub fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        mat_mul(self.ring(), a, b)
    }

    pub fn product(&self, factors: &[&Matrix]) -> Matrix {
        factors
            .iter()
            .fold(self.identity(), |acc, m| self.mul(&acc, m))
    }

    /// `σ'` with `σ'_{ij} = λ^{(ε(j)-ε(i))/2} conj(σ_{-j,-i})`; this is
    /// `σ⁻¹` whenever `σ` is unitary.
    pub fn entry_law_inverse(&self, m: &Matrix) -> Matrix {
        let ring = self.ring();
        let n = self.n;
        Matrix::from_fn(self.dim(), |r, c| {
            let (i, j) = (OmegaIndex::at(r, n), OmegaIndex::at(c, n));
            let x = ring.conj(self.at(m, j.neg(), i.neg()));
            ring.mul(self.lambda_between(i, j), x)
        })
    }

    /// `[a, b] = a b a⁻¹ b⁻¹` for unitary `a`, `b`.
    pub fn commutator(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let ai = self.entry_law_inverse(a);
        let bi = self.entry_law_inverse(b);
        self.product(&[a, b, &ai, &bi])
    }

    /// `ʰg = h g h⁻¹` for unitary `h`.
    pub fn conjugate(&self, h: &Matrix, g: &Matrix) -> Matrix {
        let hi = self.entry_law_inverse(h);
        self.product(&[h, g, &hi])
    }

    pub fn basis_vector(&self, i: OmegaIndex) -> Vec<Elem> {
        let ring = self.ring();
        let mut v = vec![ring.zero(); self.dim()];
        v[i.idx(self.n)] = ring.one();
        v
    }

    /// `σ v`.
    pub fn apply(&self, m: &Matrix, v: &[Elem]) -> Vec<Elem> {
        let ring = self.ring();
        (0..self.dim())
            .map(|r| {
                (0..self.dim()).fold(ring.zero(), |acc, c| {
                    ring.add(acc, ring.mul(m.get(r, c), v[c]))
                })
            })
            .collect()
    }

    fn f_raw(&self, v: &[Elem], w: &[Elem]) -> Elem {
        let ring = self.ring();
        let d = self.dim();
        (0..self.n).fold(ring.zero(), |acc, k| {
            // coordinate i at position i-1, coordinate -i at position 2n - i
            ring.add(acc, ring.mul(ring.conj(v[k]), w[d - 1 - k]))
        })
    }

    fn h_raw(&self, v: &[Elem], w: &[Elem]) -> Elem {
        let ring = self.ring();
        let lam = self.form_ring.lambda();
        ring.add(self.f_raw(v, w), ring.mul(lam, ring.conj(self.f_raw(w, v))))
    }

    /// `f(v, w) = Σ_{i=1}^n v̄_i w_{-i}`.
    pub fn form_f(&self, v: &[Elem], w: &[Elem]) -> Result<Elem, UnitaryError> {
        self.check_vector(v)?;
        self.check_vector(w)?;
        Ok(self.f_raw(v, w))
    }

    /// `h(v, w) = f(v, w) + λ conj(f(w, v))`.
    pub fn form_h(&self, v: &[Elem], w: &[Elem]) -> Result<Elem, UnitaryError> {
        self.check_vector(v)?;
        self.check_vector(w)?;
        Ok(self.h_raw(v, w))
    }

    /// The length `|v| = f(v, v)`; `q(v)` is its class modulo `Λ`.
    pub fn length(&self, v: &[Elem]) -> Result<Elem, UnitaryError> {
        self.check_vector(v)?;
        Ok(self.f_raw(v, v))
    }

    /// Whether `a` and `b` represent the same class modulo `subgroup`.
    pub fn congruent(&self, a: Elem, b: Elem, subgroup: crate::formring::ElementSet) -> bool {
        subgroup.contains(self.ring().sub(a, b))
    }

    /// `|σ_{*j}| = Σ_{i=1}^n conj(σ_{ij}) σ_{-i,j}`.
    pub fn column_length(&self, m: &Matrix, j: OmegaIndex) -> Elem {
        let ring = self.ring();
        let c = j.idx(self.n);
        let d = self.dim();
        (0..self.n).fold(ring.zero(), |acc, k| {
            ring.add(acc, ring.mul(ring.conj(m.get(k, c)), m.get(d - 1 - k, c)))
        })
    }

    fn determinant(&self, m: &Matrix) -> Elem {
        let ring = self.ring();
        let d = m.dim();
        let mut dp = vec![ring.zero(); 1 << d];
        dp[0] = ring.one();
        for mask in 0usize..(1 << d) {
            let acc = dp[mask];
            if acc == ring.zero() {
                continue;
            }
            let r = mask.count_ones() as usize;
            if r == d {
                continue;
            }
            for c in 0..d {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let x = m.get(r, c);
                if x == ring.zero() {
                    continue;
                }
                let mut term = ring.mul(acc, x);
                if (mask >> (c + 1)).count_ones() % 2 == 1 {
                    term = ring.neg(term);
                }
                let next = mask | (1 << c);
                dp[next] = ring.add(dp[next], term);
            }
        }
        dp[(1 << d) - 1]
    }

    /// Invertibility over `R`: a unit determinant for commutative rings,
    /// trivial kernel of `v -> σv` otherwise.
    pub fn is_invertible(&self, m: &Matrix) -> Result<bool, UnitaryError> {
        self.check_matrix(m)?;
        let ring = self.ring();
        if ring.is_commutative() {
            return Ok(ring.is_unit(self.determinant(m)));
        }
        let d = self.dim();
        let order = ring.order();
        if order.checked_pow(d as u32).is_none_or(|s| s > VECTOR_SWEEP_LIMIT) {
            return Err(UnitaryError::Undecidable { dim: d, order });
        }
        let mut v = vec![ring.zero(); d];
        let mut first = true;
        loop {
            if !first && self.apply(m, &v).iter().all(|&x| x == ring.zero()) {
                return Ok(false);
            }
            first = false;
            if !odometer(&mut v, order) {
                return Ok(true);
            }
        }
    }

    /// `a ∈ AH_n(R, Λ)`: `a = -λ a*` and every diagonal entry lies in `Λ`.
    pub fn in_ah(&self, a: &Matrix) -> bool {
        let ring = self.ring();
        let lam = self.form_ring.lambda();
        let lp = self.form_ring.form_parameter();
        let k = a.dim();
        (0..k).all(|i| lp.contains(a.get(i, i)))
            && (0..k).all(|i| {
                (0..k).all(|j| a.get(i, j) == ring.neg(ring.mul(lam, ring.conj(a.get(j, i)))))
            })
    }

    fn star(&self, a: &Matrix) -> Matrix {
        let ring = self.ring();
        Matrix::from_fn(a.dim(), |r, c| ring.conj(a.get(c, r)))
    }

    fn flip(&self, a: &Matrix) -> Matrix {
        let k = a.dim();
        Matrix::from_fn(k, |r, c| a.get(k - 1 - r, k - 1 - c))
    }

    fn flip_rows(&self, a: &Matrix) -> Matrix {
        let k = a.dim();
        Matrix::from_fn(k, |r, c| a.get(k - 1 - r, c))
    }

    fn flip_cols(&self, a: &Matrix) -> Matrix {
        let k = a.dim();
        Matrix::from_fn(k, |r, c| a.get(r, k - 1 - c))
    }

    fn scale(&self, x: Elem, a: &Matrix) -> Matrix {
        let ring = self.ring();
        Matrix::from_fn(a.dim(), |r, c| ring.mul(x, a.get(r, c)))
    }

    fn blocks(&self, m: &Matrix) -> [Matrix; 4] {
        let n = self.n;
        [m.block(0, 0, n), m.block(0, n, n), m.block(n, 0, n), m.block(n, n, n)]
    }

    /// `[[p d* p, λ̄ p b* p], [λ p c* p, p a* p]]` for `σ = [[a, b], [c, d]]`,
    /// with `p` the antidiagonal permutation matrix.
    pub fn block_inverse(&self, m: &Matrix) -> Matrix {
        let [a, b, c, d] = self.blocks(m);
        let lam = self.form_ring.lambda();
        let lam_bar = self.ring().conj(lam);
        Matrix::from_blocks(
            &self.flip(&self.star(&d)),
            &self.scale(lam_bar, &self.flip(&self.star(&b))),
            &self.scale(lam, &self.flip(&self.star(&c))),
            &self.flip(&self.star(&a)),
        )
    }

    fn unitary_by_blocks(&self, m: &Matrix) -> bool {
        let ring = self.ring();
        let [a, b, c, d] = self.blocks(m);
        let apc = mat_mul(ring, &self.star(&a), &self.flip_rows(&c));
        let bpd = mat_mul(ring, &self.star(&b), &self.flip_rows(&d));
        self.is_identity(&self.mul(&self.block_inverse(m), m)) && self.in_ah(&apc) && self.in_ah(&bpd)
    }

    fn unitary_by_entries(&self, m: &Matrix) -> bool {
        let lp = self.form_ring.form_parameter();
        self.is_identity(&self.mul(&self.entry_law_inverse(m), m))
            && self.indices().all(|j| lp.contains(self.column_length(m, j)))
    }

    fn unitary_by_definition(&self, m: &Matrix) -> bool {
        let ring = self.ring();
        let d = self.dim();
        let cols: Vec<Vec<Elem>> = (0..d).map(|c| m.column(c)).collect();
        for a in 0..d {
            for b in 0..d {
                let (ea, eb) = (
                    self.basis_vector(OmegaIndex::at(a, self.n)),
                    self.basis_vector(OmegaIndex::at(b, self.n)),
                );
                if self.h_raw(&cols[a], &cols[b]) != self.h_raw(&ea, &eb) {
                    return false;
                }
            }
        }
        let lp = self.form_ring.form_parameter();
        let order = ring.order();
        let small = order
            .checked_pow(d as u32)
            .is_some_and(|s| s <= VECTOR_SWEEP_LIMIT);
        if !small {
            return cols.iter().all(|c| lp.contains(self.f_raw(c, c)));
        }
        // Sweep every u, keeping σu up to date as single coordinates change.
        let mut u = vec![ring.zero(); d];
        let mut su = vec![ring.zero(); d];
        loop {
            if !lp.contains(ring.sub(self.f_raw(&su, &su), self.f_raw(&u, &u))) {
                return false;
            }
            let before = u.clone();
            if !odometer(&mut u, order) {
                return true;
            }
            for k in 0..d {
                if u[k] != before[k] {
                    let delta = ring.sub(u[k], before[k]);
                    for (r, s) in su.iter_mut().enumerate() {
                        *s = ring.add(*s, ring.mul(cols[k][r], delta));
                    }
                }
            }
        }
    }

    /// Membership in `U_2n(R, Λ)`. A singular matrix is an error, not `false`.
    pub fn is_unitary(&self, m: &Matrix, method: Method) -> Result<bool, UnitaryError> {
        if !self.is_invertible(m)? {
            return Err(UnitaryError::Singular);
        }
        Ok(match method {
            Method::Definition => self.unitary_by_definition(m),
            Method::Entries => self.unitary_by_entries(m),
            Method::Blocks => self.unitary_by_blocks(m),
        })
    }

    /// The block-formula inverse of a unitary matrix.
    pub fn unitary_inverse(&self, m: &Matrix) -> Result<Matrix, UnitaryError> {
        if !self.is_unitary(m, Method::Entries)? {
            return Err(UnitaryError::NotUnitary);
        }
        Ok(self.block_inverse(m))
    }

    /// Switches between the basis orders `(e_1..e_n, e_{-1}..e_{-n})` and
    /// `(e_1..e_n, e_{-n}..e_{-1})`: `[[a, b], [c, d]] -> [[a, bp], [pc, pdp]]`.
    pub fn convert_basis(&self, m: &Matrix) -> Matrix {
        let [a, b, c, d] = self.blocks(m);
        Matrix::from_blocks(&a, &self.flip_cols(&b), &self.flip_rows(&c), &self.flip(&d))
    }

    /// Canonical packed encoding: entries in row-major order, each in
    /// `⌈log₂|R|⌉` bits, filled from the low end of each word.
    pub fn key(&self, m: &Matrix) -> Key {
        let mut key: Key = SmallVec::from_elem(0, self.words);
        for (k, &x) in m.data().iter().enumerate() {
            let (w, s) = (k / self.per_word, (k % self.per_word) as u32 * self.bits);
            key[w] |= (x as u64) << s;
        }
        key
    }

    pub fn from_key(&self, key: &Key) -> Matrix {
        let d = self.dim();
        let mask = (1u64 << self.bits) - 1;
        let data = (0..d * d)
            .map(|k| {
                let (w, s) = (k / self.per_word, (k % self.per_word) as u32 * self.bits);
                ((key[w] >> s) & mask) as Elem
            })
            .collect();
        Matrix::new(d, data).expect("key length")
    }

    pub fn identity_key(&self) -> Key {
        self.key(&self.identity())
    }

    pub fn key_mul(&self, a: &Key, b: &Key) -> Key {
        if self.gf2 {
            let d = self.dim();
            let mask = (1u64 << d) - 1;
            let (a, b) = (a[0], b[0]);
            let mut out = 0u64;
            for r in 0..d {
                let mut bits = (a >> (r * d)) & mask;
                let mut acc = 0u64;
                while bits != 0 {
                    let c = bits.trailing_zeros() as usize;
                    acc ^= (b >> (c * d)) & mask;
                    bits &= bits - 1;
                }
                out |= acc << (r * d);
            }
            return SmallVec::from_elem(out, 1);
        }
        self.key(&self.mul(&self.from_key(a), &self.from_key(b)))
    }

    /// Inverse of a unitary element given by its key.
    pub fn key_inv(&self, a: &Key) -> Key {
        if self.gf2 {
            // over Z/2 the entry law is the antitranspose
            let d = self.dim();
            let x = a[0];
            let mut out = 0u64;
            for r in 0..d {
                for c in 0..d {
                    if x >> ((d - 1 - c) * d + (d - 1 - r)) & 1 == 1 {
                        out |= 1 << (r * d + c);
                    }
                }
            }
            return SmallVec::from_elem(out, 1);
        }
        self.key(&self.entry_law_inverse(&self.from_key(a)))
    }

    /// `[a, b]` on keys.
    pub fn key_commutator(&self, a: &Key, b: &Key) -> Key {
        let ab = self.key_mul(a, b);
        let ba = self.key_mul(b, a);
        self.key_mul(&ab, &self.key_inv(&ba))
    }

    /// `h g h⁻¹` on keys.
    pub fn key_conjugate(&self, h: &Key, g: &Key) -> Key {
        self.key_mul(&self.key_mul(h, g), &self.key_inv(h))
    }
}

/// Advances `v` to the next vector in mixed-radix order; `false` after the
/// last one.
pub(crate) fn odometer(v: &mut [Elem], order: usize) -> bool {
    for x in v.iter_mut() {
        if (*x as usize) + 1 < order {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formring::ElementSet;

    fn ctx(m: usize, lambda: Elem, lp: &[Elem], n: usize) -> UnitaryContext {
        let r = Arc::new(FiniteRing::zmod(m).unwrap());
        let fr = FormRing::new(r, lambda, lp.iter().copied().collect()).unwrap();
        UnitaryContext::new(Arc::new(fr), n).unwrap()
    }

    #[test]
    fn forms_on_basis() {
        let c = ctx(2, 1, &[0, 1], 3);
        let e1 = c.basis_vector(c.index(1).unwrap());
        let em1 = c.basis_vector(c.index(-1).unwrap());
        assert_eq!(c.form_f(&e1, &em1).unwrap(), 1);
        assert_eq!(c.form_f(&em1, &e1).unwrap(), 0);
        assert_eq!(c.form_h(&em1, &e1).unwrap(), 1);
        let zero = vec![0; 6];
        assert_eq!(c.length(&zero).unwrap(), 0);
        assert!(c.form_f(&zero[..5], &zero).is_err());
    }

    #[test]
    fn h_on_basis_pairs() {
        let c = ctx(4, 3, &[0, 1, 2, 3], 3);
        for i in c.indices() {
            for j in c.indices() {
                let h = c.form_h(&c.basis_vector(i), &c.basis_vector(j)).unwrap();
                let want = match (i.value() == -j.value(), i.eps()) {
                    (true, 1) => 1,
                    (true, _) => 3,
                    _ => 0,
                };
                assert_eq!(h, want, "h(e_{i}, e_{j})");
            }
        }
    }

    #[test]
    fn ah_examples() {
        let c = ctx(4, 1, &[0, 2], 3);
        assert!(c.in_ah(&Matrix::filled(3, 0)));
        let d2 = Matrix::from_fn(3, |r, col| if r == col { 2 } else { 0 });
        assert!(c.in_ah(&d2));
        let d1 = Matrix::from_fn(3, |r, col| if r == col { 1 } else { 0 });
        assert!(!c.in_ah(&d1));
    }

    #[test]
    fn singular_matrix_is_an_error() {
        let c = ctx(2, 1, &[0, 1], 3);
        let z = Matrix::filled(6, 0);
        for m in Method::ALL {
            assert_eq!(c.is_unitary(&z, m), Err(UnitaryError::Singular));
        }
        assert_eq!(c.is_unitary(&c.identity(), Method::Definition), Ok(true));
    }

    #[test]
    fn missing_compensating_entry() {
        let c = ctx(2, 1, &[0], 3);
        let mut m = c.identity();
        m.set(0, 1, 1);
        for method in Method::ALL {
            assert_eq!(c.is_unitary(&m, method), Ok(false), "{method:?}");
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let r = FiniteRing::zmod(6).unwrap();
        let fr = FormRing::new(Arc::new(r), 1, ElementSet::from([0])).unwrap();
        let c = UnitaryContext::new(Arc::new(fr), 1).unwrap();
        let m = Matrix::from_rows(&[vec![2, 5], vec![3, 1]]).unwrap();
        // 2·1 - 5·3 = -13 = 5 mod 6
        assert_eq!(c.determinant(&m), 5);
        assert!(c.is_invertible(&m).unwrap());
    }

    #[test]
    fn key_round_trip_and_fast_paths() {
        let c = ctx(2, 1, &[0, 1], 3);
        let mut a = c.identity();
        a.set(0, 1, 1);
        a.set(4, 5, 1);
        let mut b = c.identity();
        b.set(2, 3, 1);
        let (ka, kb) = (c.key(&a), c.key(&b));
        assert_eq!(c.from_key(&ka), a);
        assert_eq!(c.from_key(&c.key_mul(&ka, &kb)), c.mul(&a, &b));
        assert_eq!(c.from_key(&c.key_inv(&ka)), c.entry_law_inverse(&a));

        let c4 = ctx(4, 1, &[0, 2], 3);
        let m = Matrix::from_fn(6, |r, col| ((r * 7 + col * 3) % 4) as Elem);
        assert_eq!(c4.from_key(&c4.key(&m)), m);
    }

    #[test]
    fn convert_basis_is_involutive() {
        let c = ctx(4, 1, &[0, 2], 3);
        let m = Matrix::from_fn(6, |r, col| ((r * 5 + col) % 4) as Elem);
        assert_eq!(c.convert_basis(&c.convert_basis(&m)), m);
        assert_eq!(c.convert_basis(&c.identity()), c.identity());
        let mut b = Matrix::filled(6, 0);
        b.set(0, 3, 1);
        let conv = c.convert_basis(&b);
        assert_eq!(conv.get(0, 5), 1);
    }
}
