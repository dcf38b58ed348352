//! The G₂ structure on ℝ⁷: the associative 3-form, ε-tables, the irreducible
//! splittings of Λ² and Λ³, the maps `i`/`j`, the cross product and calibration tests.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::multilinear::index::perm_sign;
use crate::multilinear::lie::{action_matrix, annihilator, operator_matrix};
use crate::multilinear::{sharp, Form, Matrix, SymTensor};
use crate::rational::{int, Rational};

pub const DIM: usize = 7;

/// The seven terms of the standard associative form, `(i, j, k, sign)`.
pub const PHI0_TERMS: [(usize, usize, usize, i64); 7] =
    [(1, 2, 3, 1), (1, 4, 5, 1), (1, 6, 7, 1), (2, 4, 6, 1), (2, 5, 7, -1), (3, 4, 7, -1), (3, 5, 6, -1)];

pub fn e(indices: &[usize]) -> Form {
    Form::e(DIM, indices)
}

pub fn standard_phi() -> Form {
    let mut f = Form::zero(DIM, 3);
    for (i, j, k, s) in PHI0_TERMS {
        f.axpy(&int(s), &e(&[i, j, k]));
    }
    f
}

/// Eigenspace projectors for the G₂-irreducible pieces, in lex coordinates.
#[derive(Debug, Clone)]
pub struct G2ProjectorSet {
    pub p2_7: Matrix,
    pub p2_14: Matrix,
    pub p3_1: Matrix,
    pub p3_7: Matrix,
    pub p3_27: Matrix,
}

impl G2ProjectorSet {
    pub fn all(&self) -> [(&'static str, &Matrix, usize); 5] {
        [
            ("L2_7", &self.p2_7, 2),
            ("L2_14", &self.p2_14, 2),
            ("L3_1", &self.p3_1, 3),
            ("L3_7", &self.p3_7, 3),
            ("L3_27", &self.p3_27, 3),
        ]
    }
}

#[derive(Debug)]
pub struct G2Structure {
    pub phi0: Form,
    pub star_phi0: Form,
    eps3: [[[i8; DIM]; DIM]; DIM],
    eps4: Vec<i8>,
    projectors: OnceLock<G2ProjectorSet>,
    algebra: OnceLock<Vec<Matrix>>,
}

fn eps_table3(phi: &Form) -> [[[i8; DIM]; DIM]; DIM] {
    let mut t = [[[0i8; DIM]; DIM]; DIM];
    for (m, c) in phi.terms() {
        let idx = m.indices();
        let c = if c.is_one() { 1 } else if (-c).is_one() { -1 } else { 0 };
        for p in permutations(&idx) {
            t[p[0] - 1][p[1] - 1][p[2] - 1] = (c * perm_sign(&p)) as i8;
        }
    }
    t
}

fn eps_table4(psi: &Form) -> Vec<i8> {
    let mut t = vec![0i8; DIM.pow(4)];
    for (m, c) in psi.terms() {
        let idx = m.indices();
        let c = if c.is_one() { 1 } else if (-c).is_one() { -1 } else { 0 };
        for p in permutations(&idx) {
            t[(((p[0] - 1) * DIM + p[1] - 1) * DIM + p[2] - 1) * DIM + p[3] - 1] = (c * perm_sign(&p)) as i8;
        }
    }
    t
}

pub(crate) fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

static STANDARD: OnceLock<G2Structure> = OnceLock::new();

impl G2Structure {
    pub fn standard() -> &'static G2Structure {
        STANDARD.get_or_init(|| G2Structure::from_phi(standard_phi()).expect("standard form is valid"))
    }

    /// Builds the tables from an arbitrary 3-form with unit coefficients. Used for fault injection.
    pub fn from_phi(phi: Form) -> Result<G2Structure> {
        if phi.dim() != DIM {
            return Err(AlgebraError::DimMismatch(phi.dim(), DIM));
        }
        if phi.grade() != 3 {
            return Err(AlgebraError::GradeMismatch(phi.grade(), 3));
        }
        let star = phi.hodge();
        Ok(G2Structure {
            eps3: eps_table3(&phi),
            eps4: eps_table4(&star),
            phi0: phi,
            star_phi0: star,
            projectors: OnceLock::new(),
            algebra: OnceLock::new(),
        })
    }

    pub fn epsilon3(&self, i: usize, j: usize, k: usize) -> Result<i32> {
        for x in [i, j, k] {
            if x == 0 || x > DIM {
                return Err(AlgebraError::IndexOutOfRange { index: x, dim: DIM });
            }
        }
        Ok(self.eps3[i - 1][j - 1][k - 1] as i32)
    }

    pub fn epsilon4(&self, i: usize, j: usize, k: usize, l: usize) -> Result<i32> {
        for x in [i, j, k, l] {
            if x == 0 || x > DIM {
                return Err(AlgebraError::IndexOutOfRange { index: x, dim: DIM });
            }
        }
        Ok(self.eps4[(((i - 1) * DIM + j - 1) * DIM + k - 1) * DIM + l - 1] as i32)
    }

    /// Unchecked 1-based ε lookup for inner loops.
    pub fn eps(&self, i: usize, j: usize, k: usize) -> i64 {
        self.eps3[i - 1][j - 1][k - 1] as i64
    }

    pub fn eps4(&self, i: usize, j: usize, k: usize, l: usize) -> i64 {
        self.eps4[(((i - 1) * DIM + j - 1) * DIM + k - 1) * DIM + l - 1] as i64
    }

    /// `(1/6) ε_ijk e^{ijk}` rebuilt from the table.
    pub fn phi_from_table(&self) -> Form {
        let mut f = Form::zero(DIM, 3);
        for i in 1..=DIM {
            for j in 1..=DIM {
                for k in 1..=DIM {
                    let c = self.eps(i, j, k);
                    if c != 0 && i != j && j != k && i != k {
                        f.axpy(&(int(c) / int(6)), &e(&[i, j, k]));
                    }
                }
            }
        }
        f
    }

    /// `(1/24) ε_ijkl e^{ijkl}` rebuilt from the table.
    pub fn star_phi_from_table(&self) -> Form {
        let mut f = Form::zero(DIM, 4);
        for i in 1..=DIM {
            for j in 1..=DIM {
                for k in 1..=DIM {
                    for l in 1..=DIM {
                        let c = self.eps4(i, j, k, l);
                        if c != 0 {
                            f.axpy(&(int(c) / int(24)), &e(&[i, j, k, l]));
                        }
                    }
                }
            }
        }
        f
    }

    /// Matrix of `β ↦ ∗(φ ∧ β)` on Λ².
    pub fn lambda2_operator(&self) -> Matrix {
        operator_matrix(DIM, 2, 2, |b| self.phi0.wedge(b).hodge())
    }

    pub fn projectors(&self) -> &G2ProjectorSet {
        self.projectors.get_or_init(|| self.build_projectors())
    }

    fn build_projectors(&self) -> G2ProjectorSet {
        let op = self.lambda2_operator();
        let p2_7 = Matrix::projector_onto_span(&op.eigenspace(&int(2)), 21);
        let p2_14 = Matrix::projector_onto_span(&op.eigenspace(&int(-1)), 21);
        let p3_1 = Matrix::projector_onto_span(&[self.phi0.to_coords()], 35);
        let seven: Vec<Vec<Rational>> =
            (1..=DIM).map(|i| e(&[i]).wedge(&self.phi0).hodge().to_coords()).collect();
        let p3_7 = Matrix::projector_onto_span(&seven, 35);
        // Λ³₂₇ = {γ : γ∧φ = 0, γ∧∗φ = 0}
        let a = operator_matrix(DIM, 3, 6, |g| g.wedge(&self.phi0));
        let b = operator_matrix(DIM, 3, 7, |g| g.wedge(&self.star_phi0));
        let p3_27 = Matrix::projector_onto_span(&Matrix::vstack(&[&a, &b]).nullspace(), 35);
        G2ProjectorSet { p2_7, p2_14, p3_1, p3_7, p3_27 }
    }

    /// `(part7, part14)`.
    pub fn project_lambda2(&self, beta: &Form) -> Result<(Form, Form)> {
        check(beta, 2)?;
        let p = self.projectors();
        let v = beta.to_coords();
        Ok((Form::from_coords(DIM, 2, &p.p2_7.apply(&v)), Form::from_coords(DIM, 2, &p.p2_14.apply(&v))))
    }

    /// `(part1, part7, part27)`.
    pub fn project_lambda3(&self, gamma: &Form) -> Result<(Form, Form, Form)> {
        check(gamma, 3)?;
        let p = self.projectors();
        let v = gamma.to_coords();
        Ok((
            Form::from_coords(DIM, 3, &p.p3_1.apply(&v)),
            Form::from_coords(DIM, 3, &p.p3_7.apply(&v)),
            Form::from_coords(DIM, 3, &p.p3_27.apply(&v)),
        ))
    }

    pub fn in_lambda3_27(&self, gamma: &Form) -> bool {
        gamma.wedge(&self.phi0).is_zero() && gamma.wedge(&self.star_phi0).is_zero()
    }

    /// `i(h) = ε_ikl h_ij e^{jkl}` on traceless symmetric tensors.
    pub fn map_i(&self, h: &SymTensor) -> Result<Form> {
        if h.dim() != DIM {
            return Err(AlgebraError::DimMismatch(h.dim(), DIM));
        }
        if !h.trace().is_zero() {
            return Err(AlgebraError::NonzeroTrace);
        }
        Ok(self.map_i_unchecked(h))
    }

    /// The same formula without the trace check (it sends the identity to a multiple of φ).
    pub fn map_i_unchecked(&self, h: &SymTensor) -> Form {
        let mut out = Form::zero(DIM, 3);
        for i in 1..=DIM {
            for j in 1..=DIM {
                let hij = h.get(i, j);
                if hij.is_zero() {
                    continue;
                }
                for k in 1..=DIM {
                    for l in 1..=DIM {
                        let c = self.eps(i, k, l);
                        if c != 0 && j != k && j != l {
                            out.axpy(&(hij * int(c)), &e(&[j, k, l]));
                        }
                    }
                }
            }
        }
        out
    }

    /// `j(γ)(v, w) = ∗(ι_vφ ∧ ι_wφ ∧ γ)` on Λ³₂₇.
    pub fn map_j(&self, gamma: &Form) -> Result<SymTensor> {
        check(gamma, 3)?;
        if !self.in_lambda3_27(gamma) {
            return Err(AlgebraError::OutsideModule("Λ³₂₇".into()));
        }
        Ok(self.map_j_unchecked(gamma))
    }

    pub fn map_j_unchecked(&self, gamma: &Form) -> SymTensor {
        let contractions: Vec<Form> = (1..=DIM).map(|i| self.phi0.interior_basis(i)).collect();
        let mut m = Matrix::zeros(DIM, DIM);
        for v in 0..DIM {
            for w in v..DIM {
                let top = contractions[v].wedge(&contractions[w]).wedge(gamma).hodge();
                let x = top.coeff(crate::multilinear::MultiIndex::EMPTY);
                m.set(v, w, x.clone());
                m.set(w, v, x);
            }
        }
        SymTensor::from_matrix(&m).expect("symmetric by construction")
    }

    /// Basis of 𝔤₂ = {X ∈ 𝔰𝔬(7) : X·φ = 0}.
    pub fn lie_algebra(&self) -> &[Matrix] {
        self.algebra.get_or_init(|| annihilator(&self.phi0))
    }

    /// `u × v = (ι_v ι_u φ)♯`.
    pub fn cross(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        if u.len() != DIM || v.len() != DIM {
            return Err(AlgebraError::DimMismatch(u.len().max(v.len()), DIM));
        }
        Ok(sharp(&self.phi0.interior(u)?.interior(v)?))
    }

    /// Associative iff `u × v` lies in the span of a basis pair `u, v`.
    pub fn is_associative(&self, vs: &[Vec<Rational>]) -> Result<bool> {
        require_rank(vs, 3)?;
        let basis = Matrix::from_rows(vs).transpose().column_basis();
        let w = self.cross(&basis[0], &basis[1])?;
        let mut ext = vs.to_vec();
        ext.push(w);
        Ok(Matrix::from_rows(&ext).rank() == 3)
    }

    /// Coassociative iff φ vanishes on the span.
    pub fn is_coassociative(&self, vs: &[Vec<Rational>]) -> Result<bool> {
        require_rank(vs, 4)?;
        for a in 0..4 {
            for b in a + 1..4 {
                for c in b + 1..4 {
                    if !self.phi0.evaluate(&[vs[a].clone(), vs[b].clone(), vs[c].clone()])?.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `⟨X,Y⟩ vol = (1/6) ι_Xφ ∧ ι_Yφ ∧ φ` for all coordinate pairs.
    pub fn metric_identity_holds(&self) -> bool {
        let vol = Form::vol(DIM);
        (1..=DIM).all(|x| {
            (1..=DIM).all(|y| {
                let lhs = self.phi0.interior_basis(x).wedge(&self.phi0.interior_basis(y)).wedge(&self.phi0);
                let rhs = if x == y { vol.scale_int(6) } else { Form::zero(DIM, 7) };
                lhs == rhs
            })
        })
    }

    /// `P(X·β) = X·P(β)` for every projector and every 𝔤₂ basis element.
    pub fn equivariance_failures(&self, algebra: &[Matrix]) -> Vec<String> {
        let mut bad = Vec::new();
        let acts: Vec<[Matrix; 2]> =
            algebra.iter().map(|x| [action_matrix(x, DIM, 2), action_matrix(x, DIM, 3)]).collect();
        for (name, p, k) in self.projectors().all() {
            for (a, m) in acts.iter().enumerate() {
                let r = &m[k - 2];
                if r.mul(p) != p.mul(r) {
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

pub(crate) fn require_rank(vs: &[Vec<Rational>], k: usize) -> Result<()> {
    if vs.len() != k {
        return Err(AlgebraError::Shape(format!("expected {k} spanning vectors, got {}", vs.len())));
    }
    let r = Matrix::from_rows(vs).rank();
    if r != k {
        return Err(AlgebraError::RankDeficient { rank: r, expected: k });
    }
    Ok(())
}

/// Identity matrix as a symmetric tensor, scaled.
pub fn scalar_tensor(q: Rational) -> SymTensor {
    SymTensor::diag(&vec![q; DIM])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::unit;

    #[test]
    fn epsilon_values() {
        let g = G2Structure::standard();
        assert_eq!(g.epsilon3(1, 2, 3).unwrap(), 1);
        assert_eq!(g.epsilon3(3, 4, 7).unwrap(), -1);
        assert_eq!(g.epsilon3(2, 1, 3).unwrap(), -1);
        assert!(g.epsilon3(0, 1, 2).is_err());
        assert_eq!(g.phi_from_table(), g.phi0);
        assert_eq!(g.star_phi_from_table(), g.star_phi0);
    }

    #[test]
    fn star_phi_and_volume() {
        let g = G2Structure::standard();
        let expected = e(&[4, 5, 6, 7])
            .add(&e(&[2, 3]).wedge(&e(&[4, 5]).add(&e(&[6, 7]))))
            .add(&e(&[1, 3]).wedge(&e(&[4, 6]).neg().add(&e(&[5, 7]))))
            .add(&e(&[1, 2]).wedge(&e(&[4, 7]).neg().sub(&e(&[5, 6]))));
        assert_eq!(g.star_phi0, expected);
        assert_eq!(g.phi0.wedge(&g.star_phi0), Form::vol(7).scale_int(7));
        assert!(g.metric_identity_holds());
    }

    #[test]
    fn contractions() {
        let g = G2Structure::standard();
        assert_eq!(g.phi0.interior_basis(1), e(&[2, 3]).add(&e(&[4, 5])).add(&e(&[6, 7])));
        assert_eq!(g.phi0.interior_basis(4), e(&[1, 5]).neg().sub(&e(&[2, 6])).add(&e(&[3, 7])));
        assert_eq!(g.phi0.norm_sq(), int(7));
    }

    #[test]
    fn cross_and_calibration() {
        let g = G2Structure::standard();
        assert_eq!(g.cross(&unit(7, 1), &unit(7, 2)).unwrap(), unit(7, 3));
        assert!(g.cross(&unit(7, 1), &unit(7, 1)).unwrap().iter().all(|x| x.is_zero()));
        assert!(g.is_associative(&[unit(7, 1), unit(7, 2), unit(7, 3)]).unwrap());
        assert!(!g.is_associative(&[unit(7, 1), unit(7, 2), unit(7, 4)]).unwrap());
        assert!(g.is_coassociative(&[unit(7, 4), unit(7, 5), unit(7, 6), unit(7, 7)]).unwrap());
        assert!(g.is_associative(&[unit(7, 1), unit(7, 1), unit(7, 3)]).is_err());
    }
}
