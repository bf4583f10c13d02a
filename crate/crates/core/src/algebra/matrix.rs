use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use super::scalar::{Field, Ring};
use crate::{Error, Result};

/// Dense row-major matrix over a ring.
///
/// Shape mismatches in the arithmetic operators are programming errors and
/// panic. Use [`Matrix::matmul`] where the shapes come from user input.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn row_vector(v: Vec<R>) -> Self {
        Matrix { rows: 1, cols: v.len(), data: v }
    }

    pub fn column_vector(v: Vec<R>) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v }
    }

    pub fn scalar(x: R) -> Self {
        Matrix { rows: 1, cols: 1, data: vec![x] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[R] {
        &self.data
    }

    pub fn into_data(self) -> Vec<R> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_c64(&self) -> Matrix<Complex64> {
        self.map(Ring::to_c64)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    /// Largest entrywise magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Ring::magnitude).fold(0.0, f64::max)
    }

    /// Exact equality for exact scalars, entrywise tolerance otherwise.
    pub fn near(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape() && self.data.iter().zip(&other.data).all(|(a, b)| a.near(b, tol))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, as a plain vector.
    pub fn left_apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.rows, "vector length must equal row count");
        let mut out = vec![R::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = &self.data[i * self.cols + j];
                if !a.is_zero() {
                    *o = o.clone() + vi.clone() * a.clone();
                }
            }
        }
        out
    }

    /// Matrix times column vector, as a plain vector.
    pub fn right_apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(R::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = other.shape();
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            let a = &self.data[(i / r2) * self.cols + j / c2];
            if a.is_zero() {
                return R::zero();
            }
            a.clone() * other.data[(i % r2) * c2 + j % c2].clone()
        })
    }

    pub fn trace(&self) -> R {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).fold(R::zero(), |acc, i| acc + self.data[i * self.cols + i].clone())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Top-left `r x c` block.
    pub fn block(&self, r: usize, c: usize) -> Self {
        assert!(r <= self.rows && c <= self.cols, "block larger than matrix");
        Self::from_fn(r, c, |i, j| self[(i, j)].clone())
    }

    /// Smallest `m <= max_m` with `A^(m+1) = A^m`, together with `A^m`.
    pub fn power_stabilize(&self, max_m: usize, tol: f64) -> Option<(usize, Self)> {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut cur = Self::identity(self.rows);
        for m in 0..=max_m {
            let next = &cur * self;
            if next.near(&cur, tol) {
                return Some((m, cur));
            }
            cur = next;
        }
        None
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Self>, rows: usize, cols: usize) -> Self {
        items.into_iter().fold(Self::zeros(rows, cols), |acc, m| &acc + m)
    }
}

impl<F: Field> Matrix<F> {
    /// In-place Gauss-Jordan reduction; returns the pivot columns.
    ///
    /// Exact scalars take the first nonzero pivot. Floats use partial
    /// pivoting and treat magnitudes below `tol` as zero.
    pub fn reduce_rows(&mut self, tol: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let pick = if F::EXACT {
                (r..self.rows).find(|&i| !self[(i, c)].is_zero())
            } else {
                (r..self.rows)
                    .map(|i| (i, self[(i, c)].magnitude()))
                    .filter(|&(_, m)| m > tol)
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(i, _)| i)
            };
            let Some(p) = pick else { continue };
            self.swap_rows(p, r);
            let inv = self[(r, c)].try_inv().expect("pivot is nonzero");
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    self[(i, j)] = self[(i, j)].clone() - factor.clone() * self[(r, j)].clone();
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.clone().reduce_rows(tol).len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self, tol: f64) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.reduce_rows(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); self.cols];
                x[f] = F::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = -m[(r, f)].clone();
                }
                x
            })
            .collect()
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let pick = if F::EXACT {
                (c..n).find(|&i| !m[(i, c)].is_zero())
            } else {
                (c..n)
                    .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()))
                    .filter(|&i| !m[(i, c)].is_zero())
            };
            let Some(p) = pick else { return F::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            let inv = pivot.try_inv().expect("pivot is nonzero");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    m[(i, j)] = m[(i, j)].clone() - factor.clone() * m[(c, j)].clone();
                }
            }
        }
        det
    }

    /// Solves `A X = B` for square nonsingular `A`.
    pub fn solve(&self, rhs: &Self, tol: f64) -> Option<Self> {
        assert!(self.is_square() && rhs.rows == self.rows, "solve shape mismatch");
        let n = self.rows;
        let mut aug = Self::from_fn(n, n + rhs.cols, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - n)].clone()
            }
        });
        let pivots = aug.reduce_rows(tol);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, rhs.cols, |i, j| aug[(i, n + j)].clone()))
    }

    pub fn inverse(&self, tol: f64) -> Option<Self> {
        self.solve(&Self::identity(self.rows), tol)
    }
}

impl<R> Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R> IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Ring> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, other: &Matrix<R>) -> Matrix<R> {
        self.matmul(other).expect("matrix product shape mismatch")
    }
}

impl<R: Ring> Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<R: Ring> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<R: Ring> Neg for &Matrix<R> {
    type Output = Matrix<R>;
    fn neg(self) -> Matrix<R> {
        self.map(|x| -x.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()).unwrap()
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = qm(&[&[1, 2], &[3, 4]]);
        let b = qm(&[&[0, 1]]);
        let k = a.kron(&b);
        assert_eq!(k.shape(), (2, 4));
        assert_eq!(k, qm(&[&[0, 1, 0, 2], &[0, 3, 0, 4]]));
    }

    #[test]
    fn stabilization_examples() {
        let proj = qm(&[&[1, 0], &[0, 0]]);
        assert_eq!(proj.power_stabilize(10, 0.0).unwrap().0, 1);
        let nil = qm(&[&[0, 1], &[0, 0]]);
        let (m, p) = nil.power_stabilize(10, 0.0).unwrap();
        assert_eq!(m, 2);
        assert!(p.is_zero());
        assert_eq!(Matrix::<BigRational>::identity(3).power_stabilize(4, 0.0).unwrap().0, 0);
        assert!(qm(&[&[2]]).power_stabilize(20, 0.0).is_none());
    }

    #[test]
    fn det_rank_kernel() {
        let a = qm(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert!(a.det().is_zero());
        assert_eq!(a.rank(0.0), 2);
        let k = a.kernel(0.0);
        assert_eq!(k.len(), 1);
        assert!(a.right_apply(&k[0]).iter().all(Ring::is_zero));
        let b = qm(&[&[2, 1], &[1, 1]]);
        assert_eq!(b.det(), q(1, 1));
        assert_eq!(&b * &b.inverse(0.0).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn float_solve() {
        let a = Matrix::from_rows(vec![vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let b = Matrix::column_vector(vec![1.0, 2.0]);
        let x = a.solve(&b, 1e-14).unwrap();
        assert!((&a * &x).near(&b, 1e-12));
    }
}
