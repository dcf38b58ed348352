//! Dense exact matrices over the rationals, row reduction, and a solver with parameter right-hand sides.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::expr::Coeff;
use crate::rational::Rational;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_cols(cols: &[Vec<Rational>], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(&rows.iter().map(|r| r.iter().map(|&x| crate::rational::int(x)).collect()).collect::<Vec<_>>())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |a, i| a + self.get(i, i))
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * q).collect() }
    }

    /// Product skipping zero entries; the action matrices involved are very sparse.
    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let nz: Vec<Vec<usize>> =
            (0..o.rows).map(|k| (0..o.cols).filter(|&j| !o.get(k, j).is_zero()).collect()).collect();
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in &nz[k] {
                    let v = a * o.get(k, j);
                    out.data[i * o.cols + j] += v;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "shape mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let a = self.get(i, j);
                        if !a.is_zero() {
                            acc += a * x;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    pub fn apply_coeff<C: Coeff>(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols, "shape mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = C::zero_coeff();
                for (j, x) in v.iter().enumerate() {
                    acc.axpy(self.get(i, j), x);
                }
                acc
            })
            .collect()
    }

    /// Commutator `[self, o]`.
    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let cols = blocks[0].cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "column mismatch in vstack");
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        self.rref_with(|_, _, _| {})
    }

    // `hook(kind, a, b)` mirrors row operations: 0 swap(a,b), 1 scale(a by pivot⁻¹), 2 row a -= f·row b.
    fn rref_with<F: FnMut(u8, usize, (usize, Rational))>(&mut self, mut hook: F) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
                hook(0, p, (r, Rational::zero()));
            }
            let inv = Rational::one() / self.get(r, c).clone();
            if !inv.is_one() {
                for j in c..self.cols {
                    let v = self.get(r, j) * &inv;
                    self.set(r, j, v);
                }
                hook(1, r, (r, inv));
            }
            let nz: Vec<usize> = (c..self.cols).filter(|&j| !self.get(r, j).is_zero()).collect();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for &j in &nz {
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
                hook(2, i, (r, f));
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// Basis of `{y : yᵀ·self = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<Rational>> {
        self.transpose().nullspace()
    }

    /// Independent columns spanning the column space.
    pub fn column_basis(&self) -> Vec<Vec<Rational>> {
        let pivots = self.clone().rref();
        pivots.iter().map(|&c| self.col(c)).collect()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(AlgebraError::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(AlgebraError::Singular);
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// Orthogonal projector onto the span of `vectors` (which must be independent).
    pub fn projector_onto(vectors: &[Vec<Rational>], n: usize) -> Result<Matrix> {
        if vectors.is_empty() {
            return Ok(Matrix::zeros(n, n));
        }
        let b = Matrix::from_cols(vectors, n);
        let g = b.transpose().mul(&b);
        let gi = g.inverse().map_err(|_| AlgebraError::RankDeficient { rank: b.rank(), expected: vectors.len() })?;
        Ok(b.mul(&gi).mul(&b.transpose()))
    }

    /// Projector onto the span of arbitrary (possibly dependent) vectors.
    pub fn projector_onto_span(vectors: &[Vec<Rational>], n: usize) -> Matrix {
        if vectors.is_empty() {
            return Matrix::zeros(n, n);
        }
        let basis = Matrix::from_cols(vectors, n).column_basis();
        Self::projector_onto(&basis, n).expect("independent basis")
    }

    /// Projector onto the intersection of the images of orthogonal projectors.
    pub fn intersect_projectors(ps: &[&Matrix]) -> Matrix {
        let n = ps[0].rows;
        let id = Matrix::identity(n);
        let comps: Vec<Matrix> = ps.iter().map(|p| id.sub(p)).collect();
        let refs: Vec<&Matrix> = comps.iter().collect();
        let stacked = Matrix::vstack(&refs);
        Self::projector_onto(&stacked.nullspace(), n).expect("nullspace basis is independent")
    }

    /// Basis of the `lambda`-eigenspace.
    pub fn eigenspace(&self, lambda: &Rational) -> Vec<Vec<Rational>> {
        self.sub(&Matrix::identity(self.rows).scale(lambda)).nullspace()
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(crate::rational::format_rational).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut a = Matrix::from_rows(m);
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else { return Rational::zero() };
        if p != c {
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
            }
            d = -d;
        }
        let piv = a.get(c, c).clone();
        d *= &piv;
        for r in c + 1..n {
            let f = a.get(r, c) / &piv;
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = a.get(r, j) - &f * a.get(c, j);
                a.set(r, j, v);
            }
        }
    }
    d
}

/// Outcome of [`solve_exact`].
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome<C: Coeff> {
    Solved(Solution<C>),
    /// `residual` is a combination of the right-hand side forced to vanish but not identically zero.
    Inconsistent { rank: usize, residual: C },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<C: Coeff> {
    pub rank: usize,
    pub particular: Vec<C>,
    pub nullspace: Vec<Vec<Rational>>,
    /// Right-hand-side combinations that must vanish for solvability (always zero for a solved system).
    pub compatibility: Vec<C>,
}

impl<C: Coeff> SolveOutcome<C> {
    pub fn unique(self) -> Result<Vec<C>> {
        match self {
            SolveOutcome::Solved(s) if s.nullspace.is_empty() => Ok(s.particular),
            SolveOutcome::Solved(s) => {
                Err(AlgebraError::Underdetermined { rank: s.rank, unknowns: s.particular.len() })
            }
            SolveOutcome::Inconsistent { .. } => Err(AlgebraError::Inconsistent),
        }
    }
}

/// Solves `a·x = b` exactly, `b` carrying any coefficient type (constants or parameter expressions).
pub fn solve_exact<C: Coeff>(a: &Matrix, b: &[C]) -> SolveOutcome<C> {
    assert_eq!(a.rows, b.len(), "right-hand side length must equal row count");
    let mut m = a.clone();
    let mut rhs: Vec<C> = b.to_vec();
    let pivots = m.rref_with(|kind, i, (r, f)| match kind {
        0 => rhs.swap(i, r),
        1 => rhs[i] = rhs[i].scale(&f),
        _ => {
            let t = rhs[r].scale(&f);
            rhs[i] = rhs[i].sub(&t);
        }
    });
    let rank = pivots.len();
    if let Some(bad) = rhs[rank..].iter().find(|c| !c.is_zero_coeff()) {
        return SolveOutcome::Inconsistent { rank, residual: bad.clone() };
    }
    let mut x = vec![C::zero_coeff(); a.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = rhs[r].clone();
    }
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); a.cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, f).clone();
            }
            v
        })
        .collect();
    SolveOutcome::Solved(Solution { rank, particular: x, nullspace, compatibility: rhs[rank..].to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ParamExpr;
    use crate::rational::int;

    #[test]
    fn identity_solve() {
        let b = vec![ParamExpr::atom("x"), ParamExpr::atom("y"), ParamExpr::constant(int(3))];
        let x = solve_exact(&Matrix::identity(3), &b).unique().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn rank_deficient() {
        let a = Matrix::from_i64(&[&[1, 1], &[2, 2]]);
        match solve_exact(&a, &[int(1), int(2)]) {
            SolveOutcome::Solved(s) => {
                assert_eq!(s.rank, 1);
                assert_eq!(s.nullspace.len(), 1);
                assert_eq!(a.apply(&s.particular), vec![int(1), int(2)]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(solve_exact(&a, &[int(1), int(3)]), SolveOutcome::Inconsistent { .. }));
    }

    #[test]
    fn projectors_and_inverse() {
        let p = Matrix::projector_onto(&[vec![int(1), int(1), int(0)]], 3).unwrap();
        assert!(p.is_idempotent());
        assert!(p.is_symmetric());
        assert_eq!(p.rank(), 1);
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.mul(&a.inverse().unwrap()), Matrix::identity(2));
        assert_eq!(det(&a.to_rows()), int(1));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }
}
