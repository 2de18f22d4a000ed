use std::fmt;

use crate::formring::Elem;

/// A square matrix of ring element indices, stored row-major.
///
/// Equality and hashing compare the row-major entry list, so two matrices are
/// equal exactly when every entry agrees.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    dim: usize,
    data: Vec<Elem>,
}

impl Matrix {
    /// Returns `None` if `data` does not have `dim²` entries.
    pub fn new(dim: usize, data: Vec<Elem>) -> Option<Self> {
        (data.len() == dim * dim).then_some(Matrix { dim, data })
    }

    pub fn filled(dim: usize, value: Elem) -> Self {
        Matrix {
            dim,
            data: vec![value; dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Matrix { dim, data }
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Matrix {
            dim,
            data: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.dim + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    /// The `k x k` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, k: usize) -> Matrix {
        Matrix::from_fn(k, |r, c| self.get(r0 + r, c0 + c))
    }

    /// Assembles `[[a, b], [c, d]]` from four equal-size square blocks.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        let k = a.dim;
        Matrix::from_fn(2 * k, |r, col| {
            let blk = match (r < k, col < k) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk.get(r % k, col % k)
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, row) in self.to_rows().iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{row:?}")?;
        }
        f.write_str("]")
    }
}
