use super::{vec_add, Matrix, Scalar};
use crate::error::{Error, Result};

/// The map `x ↦ x·M + b` on row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap<T> {
    pub m: Matrix<T>,
    pub b: Vec<T>,
}

impl<T: Scalar> AffineMap<T> {
    pub fn new(m: Matrix<T>, b: Vec<T>) -> Result<Self> {
        if !m.is_square() || m.cols() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "affine map with {}x{} matrix and translation of length {}",
                m.rows(),
                m.cols(),
                b.len()
            )));
        }
        Ok(AffineMap { m, b })
    }

    pub fn linear(m: Matrix<T>) -> Self {
        let d = m.rows();
        AffineMap { m, b: vec![T::zero(); d] }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        vec_add(&self.m.left_mul(x), &self.b)
    }

    pub fn iterate(&self, x: &[T], k: u64) -> Vec<T> {
        (0..k).fold(x.to_vec(), |y, _| self.apply(&y))
    }

    /// `[[M, 0], [b, 1]]`, so that `(x, 1)·H = (x·M + b, 1)`.
    pub fn homogenize(&self) -> Matrix<T> {
        let d = self.dim();
        Matrix::from_fn(d + 1, d + 1, |i, j| match (i < d, j < d) {
            (true, true) => self.m[(i, j)].clone(),
            (true, false) => T::zero(),
            (false, true) => self.b[j].clone(),
            (false, false) => T::one(),
        })
    }

    /// `T^k` as an affine map.
    pub fn power(&self, k: u64) -> Self {
        let h = self.homogenize().pow(k);
        let d = self.dim();
        AffineMap {
            m: Matrix::from_fn(d, d, |i, j| h[(i, j)].clone()),
            b: (0..d).map(|j| h[(d, j)].clone()).collect(),
        }
    }
}
