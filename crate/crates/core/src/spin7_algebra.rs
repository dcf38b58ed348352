//! The Spin(7) structure on ℝ⁸: the Cayley 4-form, its coefficient table, the
//! splittings Λ² = Λ²₇ ⊕ Λ²₂₁ and Λ³ = Λ³₈ ⊕ Λ³₄₈, and the Cayley-plane test.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::g2_algebra::{permutations, require_rank};
use crate::multilinear::index::perm_sign;
use crate::multilinear::lie::{action_matrix, annihilator, operator_matrix, so_basis, span_dim, trace_pairing};
use crate::multilinear::linalg::det;
use crate::multilinear::{Form, Matrix};
use crate::rational::{int, Rational};

pub const DIM: usize = 8;

pub fn e(indices: &[usize]) -> Form {
    Form::e(DIM, indices)
}

/// `e¹²³⁴ + (e¹²+e³⁴)(e⁵⁶+e⁷⁸) + (e¹³−e²⁴)(e⁵⁷−e⁶⁸) + (−e¹⁴−e²³)(e⁵⁸+e⁶⁷) + e⁵⁶⁷⁸`.
pub fn standard_cayley_form() -> Form {
    let pair = |s1: i64, a: [usize; 2], s2: i64, b: [usize; 2]| e(&a).scale_int(s1).add(&e(&b).scale_int(s2));
    e(&[1, 2, 3, 4])
        .add(&pair(1, [1, 2], 1, [3, 4]).wedge(&pair(1, [5, 6], 1, [7, 8])))
        .add(&pair(1, [1, 3], -1, [2, 4]).wedge(&pair(1, [5, 7], -1, [6, 8])))
        .add(&pair(-1, [1, 4], -1, [2, 3]).wedge(&pair(1, [5, 8], 1, [6, 7])))
        .add(&e(&[5, 6, 7, 8]))
}

#[derive(Debug, Clone)]
pub struct Spin7ProjectorSet {
    pub p2_7: Matrix,
    pub p2_21: Matrix,
    pub p3_8: Matrix,
    pub p3_48: Matrix,
}

impl Spin7ProjectorSet {
    pub fn all(&self) -> [(&'static str, &Matrix, usize); 4] {
        [("L2_7", &self.p2_7, 2), ("L2_21", &self.p2_21, 2), ("L3_8", &self.p3_8, 3), ("L3_48", &self.p3_48, 3)]
    }
}

#[derive(Debug)]
pub struct Spin7Structure {
    pub phi0: Form,
    table: Vec<i8>,
    projectors: OnceLock<Spin7ProjectorSet>,
    algebra: OnceLock<Vec<Matrix>>,
}

static STANDARD: OnceLock<Spin7Structure> = OnceLock::new();

fn idx4(i: usize, j: usize, k: usize, l: usize) -> usize {
    (((i - 1) * DIM + j - 1) * DIM + k - 1) * DIM + l - 1
}

impl Spin7Structure {
    pub fn standard() -> &'static Spin7Structure {
        STANDARD.get_or_init(|| Spin7Structure::from_phi(standard_cayley_form()).expect("standard form is valid"))
    }

    pub fn from_phi(phi: Form) -> Result<Spin7Structure> {
        if phi.dim() != DIM {
            return Err(AlgebraError::DimMismatch(phi.dim(), DIM));
        }
        if phi.grade() != 4 {
            return Err(AlgebraError::GradeMismatch(phi.grade(), 4));
        }
        let mut table = vec![0i8; DIM.pow(4)];
        for (m, c) in phi.terms() {
            let c = if c.is_one() { 1 } else if (-c).is_one() { -1 } else { 0 };
            for p in permutations(&m.indices()) {
                table[idx4(p[0], p[1], p[2], p[3])] = (c * perm_sign(&p)) as i8;
            }
        }
        Ok(Spin7Structure { phi0: phi, table, projectors: OnceLock::new(), algebra: OnceLock::new() })
    }

    /// `Φ_ijkl`, 1-based.
    pub fn coeff(&self, i: usize, j: usize, k: usize, l: usize) -> Result<i32> {
        for x in [i, j, k, l] {
            if x == 0 || x > DIM {
                return Err(AlgebraError::IndexOutOfRange { index: x, dim: DIM });
            }
        }
        Ok(self.table[idx4(i, j, k, l)] as i32)
    }

    /// `(1/24) Φ_ijkl e^{ijkl}` rebuilt from the table.
    pub fn phi_from_table(&self) -> Form {
        let mut f = Form::zero(DIM, 4);
        for (n, &c) in self.table.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (i, j, k, l) = (n / 512 + 1, (n / 64) % 8 + 1, (n / 8) % 8 + 1, n % 8 + 1);
            f.axpy(&(int(c as i64) / int(24)), &e(&[i, j, k, l]));
        }
        f
    }

    pub fn is_self_dual(&self) -> bool {
        self.phi0.hodge() == self.phi0
    }

    /// Matrix of `β ↦ ∗(Φ ∧ β)` on Λ².
    pub fn lambda2_operator(&self) -> Matrix {
        operator_matrix(DIM, 2, 2, |b| self.phi0.wedge(b).hodge())
    }

    pub fn projectors(&self) -> &Spin7ProjectorSet {
        self.projectors.get_or_init(|| {
            let op = self.lambda2_operator();
            let p2_7 = Matrix::projector_onto_span(&op.eigenspace(&int(3)), 28);
            let p2_21 = Matrix::projector_onto_span(&op.eigenspace(&int(-1)), 28);
            let eight: Vec<Vec<Rational>> =
                (1..=DIM).map(|i| self.phi0.wedge(&e(&[i])).hodge().to_coords()).collect();
            let p3_8 = Matrix::projector_onto_span(&eight, 56);
            let wedge = operator_matrix(DIM, 3, 7, |g| g.wedge(&self.phi0));
            let p3_48 = Matrix::projector_onto_span(&wedge.nullspace(), 56);
            Spin7ProjectorSet { p2_7, p2_21, p3_8, p3_48 }
        })
    }

    /// `(part7, part21)`.
    pub fn project_lambda2(&self, beta: &Form) -> Result<(Form, Form)> {
        check(beta, 2)?;
        let p = self.projectors();
        let v = beta.to_coords();
        Ok((Form::from_coords(DIM, 2, &p.p2_7.apply(&v)), Form::from_coords(DIM, 2, &p.p2_21.apply(&v))))
    }

    /// `(part8, part48)`.
    pub fn project_lambda3(&self, gamma: &Form) -> Result<(Form, Form)> {
        check(gamma, 3)?;
        let p = self.projectors();
        let v = gamma.to_coords();
        Ok((Form::from_coords(DIM, 3, &p.p3_8.apply(&v)), Form::from_coords(DIM, 3, &p.p3_48.apply(&v))))
    }

    pub fn in_lambda3_48(&self, gamma: &Form) -> bool {
        gamma.wedge(&self.phi0).is_zero()
    }

    /// Basis of 𝔰𝔭𝔦𝔫(7) = {X ∈ 𝔰𝔬(8) : X·Φ = 0}.
    pub fn lie_algebra(&self) -> &[Matrix] {
        self.algebra.get_or_init(|| annihilator(&self.phi0))
    }

    /// Cayley iff `Φ(b₁,b₂,b₃,b₄)² = det(⟨bᵢ,bⱼ⟩)`.
    pub fn is_cayley(&self, vs: &[Vec<Rational>]) -> Result<bool> {
        require_rank(vs, 4)?;
        let v = self.phi0.evaluate(vs)?;
        let gram: Vec<Vec<Rational>> = vs
            .iter()
            .map(|a| vs.iter().map(|b| a.iter().zip(b).fold(Rational::zero(), |s, (x, y)| s + x * y)).collect())
            .collect();
        Ok(&v * &v == det(&gram))
    }

    /// `P(X·β) = X·P(β)` for every projector and generator.
    pub fn equivariance_failures(&self, algebra: &[Matrix]) -> Vec<String> {
        let mut bad = Vec::new();
        for (a, x) in algebra.iter().enumerate() {
            let r = [action_matrix(x, DIM, 2), action_matrix(x, DIM, 3)];
            for (name, p, k) in self.projectors().all() {
                if r[k - 2].mul(p) != p.mul(&r[k - 2]) {
                    bad.push(format!("{name} vs generator {}", a + 1));
                }
            }
        }
        bad
    }
}

fn check(f: &Form, grade: usize) -> Result<()> {
    if f.dim() != DIM {
        return Err(AlgebraError::DimMismatch(f.dim(), DIM));
    }
    if f.grade() != grade {
        return Err(AlgebraError::GradeMismatch(f.grade(), grade));
    }
    Ok(())
}

/// The printed pattern `(γ₁..γ₇) ↦ 8×8`: entry `(i, j)` is `sign·γ_a`, stored as `(a, sign)`; `a = 0` on the diagonal.
pub const GAMMA_PATTERN: [[(usize, i8); 8]; 8] = [
    [(0, 0), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1)],
    [(1, -1), (0, 0), (3, 1), (2, -1), (5, 1), (4, -1), (7, 1), (6, -1)],
    [(2, -1), (3, -1), (0, 0), (1, 1), (6, 1), (7, -1), (4, -1), (5, 1)],
    [(3, -1), (2, 1), (1, -1), (0, 0), (7, -1), (6, -1), (5, 1), (4, 1)],
    [(4, -1), (5, -1), (6, -1), (7, 1), (0, 0), (1, 1), (2, 1), (3, -1)],
    [(5, -1), (4, 1), (7, 1), (6, 1), (1, -1), (0, 0), (3, -1), (2, -1)],
    [(6, -1), (7, -1), (4, 1), (5, -1), (2, -1), (3, 1), (0, 0), (1, 1)],
    [(7, -1), (6, 1), (5, -1), (4, -1), (3, 1), (2, 1), (1, -1), (0, 0)],
];

/// The inclusion ℝ⁷ → 𝔰𝔬(8) complementing 𝔰𝔭𝔦𝔫(7).
#[derive(Debug, Clone, Copy, Default)]
pub struct GammaEmbedding8;

impl GammaEmbedding8 {
    pub fn apply(&self, v: &[Rational]) -> Result<Matrix> {
        if v.len() != 7 {
            return Err(AlgebraError::DimMismatch(v.len(), 7));
        }
        let mut m = Matrix::zeros(DIM, DIM);
        for (i, row) in GAMMA_PATTERN.iter().enumerate() {
            for (j, &(a, s)) in row.iter().enumerate() {
                if a != 0 {
                    m.set(i, j, &v[a - 1] * int(s as i64));
                }
            }
        }
        Ok(m)
    }

    pub fn image_basis(&self) -> Vec<Matrix> {
        (1..=7).map(|a| self.apply(&crate::multilinear::unit(7, a)).unwrap()).collect()
    }

    pub fn complements_spin7(&self) -> bool {
        let g = Spin7Structure::standard().lie_algebra();
        let img = self.image_basis();
        let orth = img.iter().all(|x| g.iter().all(|y| trace_pairing(x, y).is_zero()));
        let mut all = g.to_vec();
        all.extend(img);
        orth && span_dim(&all) == so_basis(DIM).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::unit;

    #[test]
    fn table_and_self_duality() {
        let s = Spin7Structure::standard();
        assert!(s.is_self_dual());
        assert_eq!(s.phi_from_table(), s.phi0);
        assert_eq!(s.coeff(1, 2, 3, 4).unwrap(), 1);
        assert_eq!(s.coeff(5, 6, 7, 8).unwrap(), 1);
        assert_eq!(s.coeff(2, 1, 3, 4).unwrap(), -1);
        assert_eq!(s.phi0.terms().len(), 14);
        assert_eq!(s.phi0.norm_sq(), int(14));
    }

    #[test]
    fn projector_ranks_and_examples() {
        let s = Spin7Structure::standard();
        let p = s.projectors();
        assert_eq!([p.p2_7.rank(), p.p2_21.rank(), p.p3_8.rank(), p.p3_48.rank()], [7, 21, 8, 48]);
        let (p7, _) = s.project_lambda2(&e(&[1, 2]).sub(&e(&[3, 4]))).unwrap();
        assert!(p7.is_zero());
        let sd = e(&[1, 2]).add(&e(&[3, 4])).add(&e(&[5, 6])).add(&e(&[7, 8]));
        let (_, p21) = s.project_lambda2(&sd).unwrap();
        assert!(p21.is_zero());
        let (_, p48) = s.project_lambda3(&s.phi0.wedge(&e(&[1])).hodge()).unwrap();
        assert!(p48.is_zero());
    }

    #[test]
    fn lie_algebra_and_embedding() {
        let s = Spin7Structure::standard();
        assert_eq!(s.lie_algebra().len(), 21);
        assert!(s.equivariance_failures(s.lie_algebra()).is_empty());
        assert!(GammaEmbedding8.complements_spin7());
    }

    #[test]
    fn cayley_planes() {
        let s = Spin7Structure::standard();
        let span = |ix: [usize; 4]| ix.map(|i| unit(8, i)).to_vec();
        assert!(s.is_cayley(&span([1, 2, 3, 4])).unwrap());
        assert!(s.is_cayley(&span([5, 6, 7, 8])).unwrap());
        assert!(!s.is_cayley(&span([1, 2, 3, 5])).unwrap());
        // a rotated Cayley plane: e1+e2 spans with non-unit lengths
        let mut v = span([1, 2, 3, 4]);
        v[0] = unit(8, 1).iter().zip(unit(8, 2)).map(|(a, b)| a + b).collect();
        assert!(s.is_cayley(&v).unwrap());
        assert!(s.is_cayley(&span([1, 1, 3, 4])).is_err());
    }
}
