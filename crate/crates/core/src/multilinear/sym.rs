//! Symmetric 2-tensors `h = Σ h_ij e^i∘e^j` with `e^i∘e^j` the symmetrized product.

use num_traits::{One, Zero};

use super::linalg::Matrix;
use crate::error::{AlgebraError, Result};
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    dim: usize,
    entries: Vec<Vec<Rational>>,
}

impl SymTensor {
    pub fn zero(dim: usize) -> Self {
        SymTensor { dim, entries: vec![vec![Rational::zero(); dim]; dim] }
    }

    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(AlgebraError::NotSymmetric);
        }
        Ok(SymTensor { dim: m.rows(), entries: m.to_rows() })
    }

    pub fn diag(d: &[Rational]) -> Self {
        let mut s = Self::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            s.entries[i][i] = x.clone();
        }
        s
    }

    /// `e^i∘e^j`: entry 1 on the diagonal, ½ in both off-diagonal slots.
    pub fn product(dim: usize, i: usize, j: usize) -> Self {
        let mut s = Self::zero(dim);
        if i == j {
            s.entries[i - 1][i - 1] = Rational::one();
        } else {
            s.entries[i - 1][j - 1] = rat(1, 2);
            s.entries[j - 1][i - 1] = rat(1, 2);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `h_ij` with 1-based indices.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i - 1][j - 1]
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).fold(Rational::zero(), |a, i| a + &self.entries[i][i])
    }

    pub fn add(&self, o: &SymTensor) -> SymTensor {
        let mut s = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                s.entries[i][j] += &o.entries[i][j];
            }
        }
        s
    }

    pub fn scale(&self, q: &Rational) -> SymTensor {
        SymTensor { dim: self.dim, entries: self.entries.iter().map(|r| r.iter().map(|x| x * q).collect()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_zero())
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.entries)
    }

    /// Coordinates on the upper triangle `(i ≤ j)`, row by row.
    pub fn to_coords(&self) -> Vec<Rational> {
        let mut v = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                v.push(self.entries[i][j].clone());
            }
        }
        v
    }

    /// A basis of the traceless symmetric tensors: `e^i∘e^j (i<j)` and `e^i∘e^i − e^n∘e^n`.
    pub fn traceless_basis(dim: usize) -> Vec<SymTensor> {
        let mut out = Vec::new();
        for i in 1..=dim {
            for j in i + 1..=dim {
                out.push(Self::product(dim, i, j));
            }
        }
        for i in 1..dim {
            out.push(Self::product(dim, i, i).add(&Self::product(dim, dim, dim).scale(&-Rational::one())));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn traceless_basis_has_27_elements() {
        let b = SymTensor::traceless_basis(7);
        assert_eq!(b.len(), 27);
        assert!(b.iter().all(|h| h.trace().is_zero()));
        let m = Matrix::from_cols(&b.iter().map(|h| h.to_coords()).collect::<Vec<_>>(), 28);
        assert_eq!(m.rank(), 27);
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(SymTensor::from_matrix(&Matrix::from_i64(&[&[0, 1], &[0, 0]])).is_err());
    }
}
