use num_traits::Zero;

use super::{dot, zeros, Rat};

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Self { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, zeros(rows * cols))
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = Rat::from_integer(1.into());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.entry_mut(j, i) = self.entry(i, j).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "mul_vec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul_mat dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.entry(k, j);
                    *out.entry_mut(i, j) += add;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|a| a * c).collect())
    }

    /// Horizontal stack [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = self.row(i).to_vec();
            row.extend_from_slice(other.row(i));
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self::new(self.rows + other.rows, self.cols, data)
    }
}

/// Reduced row echelon form; returns the pivot column of each pivot row.
fn rref_in_place(m: &mut RatMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..m.cols() {
        if pivot_row >= m.rows() {
            break;
        }
        let Some(r) = (pivot_row..m.rows()).find(|&r| !m.entry(r, col).is_zero()) else {
            continue;
        };
        if r != pivot_row {
            for j in 0..m.cols() {
                let tmp = m.entry(r, j).clone();
                *m.entry_mut(r, j) = m.entry(pivot_row, j).clone();
                *m.entry_mut(pivot_row, j) = tmp;
            }
        }
        let piv = m.entry(pivot_row, col).clone();
        for j in col..m.cols() {
            let v = m.entry(pivot_row, j).clone() / &piv;
            *m.entry_mut(pivot_row, j) = v;
        }
        for r2 in 0..m.rows() {
            if r2 == pivot_row || m.entry(r2, col).is_zero() {
                continue;
            }
            let factor = m.entry(r2, col).clone();
            for j in col..m.cols() {
                let sub = &factor * m.entry(pivot_row, j);
                *m.entry_mut(r2, j) -= sub;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    pivots
}

/// Exact rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    let mut work = m.clone();
    rref_in_place(&mut work).len()
}

/// Exact basis of the null space of `m`; empty iff the kernel is trivial.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let mut work = m.clone();
    let pivots = rref_in_place(&mut work);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = zeros(m.cols());
        v[f] = Rat::from_integer(1.into());
        for (pr, &pc) in pivots.iter().enumerate() {
            v[pc] = -work.entry(pr, f).clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves A x = b exactly. Returns a particular solution, or None when the
/// system is inconsistent.
pub fn solve_linear(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), b.len());
    let rhs = RatMatrix::new(b.len(), 1, b.to_vec());
    let mut aug = a.hstack(&rhs);
    let pivots = rref_in_place(&mut aug);
    if pivots.contains(&a.cols()) {
        return None; // pivot in the rhs column: inconsistent
    }
    let mut x = zeros(a.cols());
    for (pr, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.entry(pr, a.cols()).clone();
    }
    Some(x)
}
