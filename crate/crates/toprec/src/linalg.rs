//! Small dense matrices over an exact ring.

use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::coeff::{Rational, Scalar};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, Error> {
        if self.cols != rhs.rows {
            return Err(Error::invalid(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx].add_mul(a, &rhs[(k, j)]);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::invalid("shape mismatch in matrix sum"));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(r)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Inverse of `I − N` for nilpotent `N`, computed as the finite geometric
    /// series. Fails if `N` is not nilpotent.
    pub fn unipotent_inverse(&self) -> Result<Self, Error> {
        if !self.is_square() {
            return Err(Error::invalid("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let nil = Self::identity(n).add(&self.neg())?;
        let mut term = Self::identity(n);
        let mut sum = Self::identity(n);
        for _ in 0..n {
            term = term.mul(&nil)?;
            if term.is_zero() {
                return Ok(sum);
            }
            sum = sum.add(&term)?;
        }
        if term.mul(&nil)?.is_zero() {
            Ok(sum)
        } else {
            Err(Error::invalid("matrix is not unipotent"))
        }
    }
}

impl Matrix<Rational> {
    /// Gauss–Jordan inverse over ℚ.
    pub fn inverse(&self) -> Result<Self, Error> {
        if !self.is_square() {
            return Err(Error::invalid("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or_else(|| Error::invalid("singular matrix"))?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let da = &factor * &a[(col, j)];
                    let di = &factor * &inv[(col, j)];
                    a[(r, j)] -= da;
                    inv[(r, j)] -= di;
                }
            }
        }
        Ok(inv)
    }

    pub fn lift<S: Scalar>(&self) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().cloned().map(S::from_rational).collect(),
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        assert!(i < self.rows && j < self.cols, "matrix index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        assert!(i < self.rows && j < self.cols, "matrix index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn inverse_of_small_matrix() {
        let m = Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(1)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv, Matrix::from_rows(vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]).unwrap());
        let singular = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn unipotent_series() {
        let m = Matrix::from_rows(vec![
            vec![int(1), rat(1, 2), int(3)],
            vec![int(0), int(1), int(-1)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        let inv = m.unipotent_inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
        let not_unipotent = Matrix::from_rows(vec![vec![int(2)]]).unwrap();
        assert!(not_unipotent.unipotent_inverse().is_err());
    }

    proptest! {
        #[test]
        fn inverse_round_trip(entries in proptest::collection::vec(-5i64..6, 9)) {
            let m = Matrix::from_fn(3, 3, |i, j| int(entries[3 * i + j]));
            if let Ok(inv) = m.inverse() {
                prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
                prop_assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(3));
            }
        }
    }
}
