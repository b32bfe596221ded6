//! Fixed-capacity dense matrices for dimension 2 and 3.
//!
//! Every matrix in this crate is at most 3×3, so a stack array with an
//! explicit active dimension is enough and keeps the Monte Carlo loops
//! allocation free. Unused entries are always zero.

use serde::{Deserialize, Serialize};

/// Largest supported dimension.
pub const MAX_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat {
    dim: usize,
    a: [[f64; MAX_DIM]; MAX_DIM],
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} unsupported");
        Mat { dim, a: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Mat::zeros(dim);
        for i in 0..dim {
            m.a[i][i] = 1.0;
        }
        m
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut m = Mat::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), dim, "row {i} has wrong length");
            m.a[i][..dim].copy_from_slice(r);
        }
        m
    }

    pub fn from_2x2(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat::from_rows(&[&[a11, a12], &[a21, a22]])
    }

    /// Symmetric 2×2 matrix `[[a11, a12], [a12, a22]]`.
    pub fn sym2(a11: f64, a12: f64, a22: f64) -> Self {
        Mat::from_2x2(a11, a12, a12, a22)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.dim && j < self.dim);
        self.a[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.dim && j < self.dim);
        self.a[i][j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Mat::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.a[j][i] = self.a[i][j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.a[i][k] * other.a[k][j];
                }
                out.a[i][j] = s;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> [f64; MAX_DIM] {
        let mut out = [0.0; MAX_DIM];
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = (0..self.dim).map(|k| self.a[i][k] * v[k]).sum();
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = *self;
        for row in out.a.iter_mut().take(self.dim) {
            for x in row.iter_mut().take(self.dim) {
                *x *= c;
            }
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.a[i][j] -= other.a[i][j];
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.a[i][i]).sum()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Mat) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut s = 0.0;
        for i in 0..self.dim {
            for k in 0..self.dim {
                s += self.a[i][k] * other.a[k][i];
            }
        }
        s
    }

    /// Determinant of the leading `k × k` block.
    pub fn leading_minor(&self, k: usize) -> f64 {
        let a = &self.a;
        match k {
            1 => a[0][0],
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            3 => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
            _ => panic!("minor of order {k} unsupported"),
        }
    }

    pub fn det(&self) -> f64 {
        self.leading_minor(self.dim)
    }

    /// Inverse by the adjugate; `None` when the determinant is zero or not finite.
    pub fn inverse(&self) -> Option<Mat> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let a = &self.a;
        let mut inv = Mat::zeros(self.dim);
        match self.dim {
            1 => inv.a[0][0] = 1.0 / a[0][0],
            2 => {
                inv.a[0][0] = a[1][1] / det;
                inv.a[0][1] = -a[0][1] / det;
                inv.a[1][0] = -a[1][0] / det;
                inv.a[1][1] = a[0][0] / det;
            }
            3 => {
                for i in 0..3 {
                    for j in 0..3 {
                        // cofactor of (j, i) gives the adjugate entry (i, j)
                        let (r0, r1) = others(j);
                        let (c0, c1) = others(i);
                        let minor = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
                        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                        inv.a[i][j] = sign * minor / det;
                    }
                }
            }
            _ => unreachable!(),
        }
        Some(inv)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.a[i][j] == self.a[j][i]))
    }

    /// Replaces both off-diagonal halves by their average, making the matrix
    /// exactly symmetric.
    pub fn symmetrized(&self) -> Mat {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..i {
                let m = 0.5 * (self.a[i][j] + self.a[j][i]);
                out.a[i][j] = m;
                out.a[j][i] = m;
            }
        }
        out
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut m: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m = m.max((self.a[i][j] - other.a[i][j]).abs());
            }
        }
        m
    }

    pub fn frobenius_diff(&self, other: &Mat) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += (self.a[i][j] - other.a[i][j]).powi(2);
            }
        }
        s.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.a[i][j].is_finite()))
    }
}

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Solves the symmetric system `m x = rhs` for `m` of order 1 or 2 given
/// by its entries. Returns `None` when singular.
pub(crate) fn solve_small(m: &[[f64; 2]; 2], rhs: [f64; 2], k: usize) -> Option<[f64; 2]> {
    match k {
        0 => Some([0.0, 0.0]),
        1 => (m[0][0] != 0.0).then(|| [rhs[0] / m[0][0], 0.0]),
        2 => {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det == 0.0 {
                return None;
            }
            Some([
                (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
                (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
            ])
        }
        _ => None,
    }
}
