//! SO(4)-refined splittings of Λ¹, Λ², Sym² and Λ³ on ℝ⁷ relative to an
//! associative/coassociative split `V = A♯ ⊕ C♯`, the explicit bases, and the
//! normalized isometries ♮, †, ‡.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::expr::Coeff;
use crate::g2_algebra::{e, G2Structure, DIM};
use crate::multilinear::lie::{action_matrix, operator_matrix, preserving};
use crate::multilinear::{Form, Matrix, Multivector, SymTensor};
use crate::rational::{int, squarefree_split, Rational, Surd};

pub const A_IDX: [usize; 3] = [1, 2, 3];
pub const C_IDX: [usize; 4] = [4, 5, 6, 7];

/// An adapted frame, given by its coframe matrix: `f^i = Σ_j m[i][j] e^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitFrame {
    coframe: Vec<Vec<Rational>>,
}

impl SplitFrame {
    pub fn standard() -> Self {
        SplitFrame { coframe: Matrix::identity(DIM).to_rows() }
    }

    /// Accepts an orthogonal matrix preserving φ whose first three frame vectors span an associative plane.
    pub fn from_matrix(m: Vec<Vec<Rational>>) -> Result<Self> {
        let mm = Matrix::from_rows(&m);
        if mm.rows() != DIM || mm.cols() != DIM {
            return Err(AlgebraError::Shape("a split frame needs a 7x7 matrix".into()));
        }
        if mm.mul(&mm.transpose()) != Matrix::identity(DIM) {
            return Err(AlgebraError::Invariant("frame matrix is not orthogonal".into()));
        }
        let g2 = G2Structure::standard();
        if g2.phi0.substitute(&m) != g2.phi0 {
            return Err(AlgebraError::Invariant("frame does not preserve the associative form".into()));
        }
        if !g2.is_associative(&m[..3])? || !g2.is_coassociative(&m[3..])? {
            return Err(AlgebraError::Invariant("frame is not adapted to an associative split".into()));
        }
        Ok(SplitFrame { coframe: m })
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.coframe
    }

    /// Rewrites a form written in frame coordinates in the standard coordinates.
    pub fn transport(&self, f: &Form) -> Form {
        f.substitute(&self.coframe)
    }

    fn transport_matrix(&self, k: usize) -> Matrix {
        operator_matrix(DIM, k, k, |b| self.transport(b))
    }

    pub fn is_standard(&self) -> bool {
        Matrix::from_rows(&self.coframe) == Matrix::identity(DIM)
    }
}

/// The explicit refined bases, in frame coordinates.
#[derive(Debug, Clone)]
pub struct RefinedBasisG2 {
    pub upsilon: [Form; 3],
    pub omega: [Form; 3],
    pub gamma: [Form; 3],
    pub delta: [Form; 8],
    pub phi_a: Form,
    pub phi_c: Form,
    pub kappa: [Form; 5],
    pub lambda: [[Form; 3]; 3],
    pub mu: [Form; 8],
    pub nu: [Form; 4],
    pub e0: SymTensor,
}

fn sum(fs: &[Form]) -> Form {
    fs.iter().skip(1).fold(fs[0].clone(), |a, b| a.add(b))
}

/// `∗_A` on `A`: `e¹ ↦ e²³`, `e² ↦ e³¹`, `e³ ↦ e¹²`.
pub fn star_a(p: usize) -> Form {
    e(&[p]).hodge_within(&A_IDX).expect("A-covector")
}

pub fn upsilon(p: usize) -> Form {
    match p {
        1 => e(&[4, 5]).add(&e(&[6, 7])),
        2 => e(&[4, 6]).sub(&e(&[5, 7])),
        3 => e(&[4, 7]).add(&e(&[5, 6])).neg(),
        _ => panic!("p in 1..=3"),
    }
}

pub fn omega(p: usize) -> Form {
    match p {
        1 => e(&[4, 5]).sub(&e(&[6, 7])),
        2 => e(&[4, 6]).add(&e(&[5, 7])),
        3 => e(&[4, 7]).sub(&e(&[5, 6])),
        _ => panic!("p in 1..=3"),
    }
}

fn pair(s1: i64, a: [usize; 2], s2: i64, b: [usize; 2]) -> Form {
    e(&a).scale_int(s1).add(&e(&b).scale_int(s2))
}

fn triple(s1: i64, a: [usize; 3], s2: i64, b: [usize; 3]) -> Form {
    e(&a).scale_int(s1).add(&e(&b).scale_int(s2))
}

/// The (Λ²₁₄)₁,₃ basis. The fourth element is the one reproducing the solved torsion blocks.
pub fn delta(d: usize) -> Form {
    match d {
        1 => pair(1, [1, 7], 1, [2, 4]),
        2 => pair(1, [1, 6], 1, [2, 5]),
        3 => pair(-1, [1, 5], 1, [2, 6]),
        4 => pair(-1, [1, 4], 1, [2, 7]),
        5 => pair(1, [1, 6], 1, [3, 4]),
        6 => pair(-1, [1, 7], 1, [3, 5]),
        7 => pair(-1, [1, 4], 1, [3, 6]),
        8 => pair(1, [1, 5], 1, [3, 7]),
        _ => panic!("delta index in 1..=8"),
    }
}

/// The fourth (Λ²₁₄)₁,₃ element as printed, a verbatim copy of the seventh.
pub fn delta4_printed() -> Form {
    pair(-1, [1, 4], 1, [3, 6])
}

/// The element orthogonal to the other seven, for comparison.
pub fn delta4_orthogonal() -> Form {
    e(&[1, 4]).sub(&e(&[2, 7]).scale_int(2)).add(&e(&[3, 6]))
}

pub fn kappa(a: usize) -> Form {
    let w = |p: usize, q: usize| e(&[p]).wedge(&upsilon(q));
    match a {
        1 => w(1, 2).add(&w(2, 1)),
        2 => w(1, 3).add(&w(3, 1)),
        3 => w(2, 3).add(&w(3, 2)),
        4 => w(1, 1).sub(&w(2, 2)),
        5 => w(2, 2).sub(&w(3, 3)),
        _ => panic!("kappa index in 1..=5"),
    }
}

/// The first (Λ³₂₇)₀,₄ element as printed, `e¹∧Υ₂ − e²∧Υ₁`; it lies in (Λ³₇)_A.
pub fn kappa1_printed() -> Form {
    e(&[1]).wedge(&upsilon(2)).sub(&e(&[2]).wedge(&upsilon(1)))
}

pub fn mu(d: usize) -> Form {
    match d {
        1 => triple(1, [2, 3, 7], 1, [3, 1, 4]),
        2 => triple(1, [2, 3, 6], 1, [3, 1, 5]),
        3 => triple(-1, [2, 3, 5], 1, [3, 1, 6]),
        4 => triple(-1, [2, 3, 4], 1, [3, 1, 7]),
        5 => triple(1, [2, 3, 6], 1, [1, 2, 4]),
        6 => triple(-1, [2, 3, 7], 1, [1, 2, 5]),
        7 => triple(-1, [2, 3, 4], 1, [1, 2, 6]),
        8 => triple(1, [2, 3, 5], 1, [1, 2, 7]),
        _ => panic!("mu index in 1..=8"),
    }
}

/// `s`: formally replaces `e^i ∧ e^j` (i < j) by `e^i ∘ e^j` on `A ⊗ C`.
pub fn s_map(beta: &Form) -> Result<SymTensor> {
    if beta.grade() != 2 || beta.dim() != DIM {
        return Err(AlgebraError::GradeMismatch(beta.grade(), 2));
    }
    let mut h = SymTensor::zero(DIM);
    for (m, c) in beta.terms() {
        let idx = m.indices();
        let (p, a) = (idx[0], idx[1]);
        if !(A_IDX.contains(&p) && C_IDX.contains(&a)) {
            return Err(AlgebraError::OutsideModule("A ⊗ C".into()));
        }
        h = h.add(&SymTensor::product(DIM, p, a).scale(c));
    }
    Ok(h)
}

pub fn e0() -> SymTensor {
    SymTensor::diag(&[int(4), int(4), int(4), int(-3), int(-3), int(-3), int(-3)])
}

impl RefinedBasisG2 {
    /// The bases written in the standard frame.
    pub fn standard() -> Self {
        let g2 = G2Structure::standard();
        let up = [upsilon(1), upsilon(2), upsilon(3)];
        let phi_c = sum(&[e(&[1]).wedge(&up[0]), e(&[2]).wedge(&up[1]), e(&[3]).wedge(&up[2])]);
        let nu = [4, 5, 6, 7].map(|a| g2.map_i_unchecked(&s_map(&g2.phi0.interior_basis(a)).expect("A⊗C")));
        RefinedBasisG2 {
            gamma: [1, 2, 3].map(|p| star_a(p).scale_int(2).sub(&upsilon(p))),
            upsilon: up,
            omega: [omega(1), omega(2), omega(3)],
            delta: [1, 2, 3, 4, 5, 6, 7, 8].map(delta),
            phi_a: e(&[1, 2, 3]),
            phi_c,
            kappa: [1, 2, 3, 4, 5].map(kappa),
            lambda: [1, 2, 3].map(|p| [1, 2, 3].map(|q| e(&[p]).wedge(&omega(q)))),
            mu: [1, 2, 3, 4, 5, 6, 7, 8].map(mu),
            nu,
            e0: e0(),
        }
    }

    /// `6φ_A − φ_C`.
    pub fn phi00(&self) -> Form {
        self.phi_a.scale_int(6).sub(&self.phi_c)
    }

    pub fn transported(&self, frame: &SplitFrame) -> Self {
        let t = |f: &Form| frame.transport(f);
        RefinedBasisG2 {
            upsilon: self.upsilon.clone().map(|f| t(&f)),
            omega: self.omega.clone().map(|f| t(&f)),
            gamma: self.gamma.clone().map(|f| t(&f)),
            delta: self.delta.clone().map(|f| t(&f)),
            phi_a: t(&self.phi_a),
            phi_c: t(&self.phi_c),
            kappa: self.kappa.clone().map(|f| t(&f)),
            lambda: self.lambda.clone().map(|r| r.map(|f| t(&f))),
            mu: self.mu.clone().map(|f| t(&f)),
            nu: self.nu.clone().map(|f| t(&f)),
            e0: self.e0.clone(),
        }
    }

    /// Families with their target component label, for membership checks.
    pub fn families(&self) -> Vec<(&'static str, &'static str, Vec<Form>)> {
        vec![
            ("Gamma", "p14A", self.gamma.to_vec()),
            ("Delta", "p14_13", self.delta.to_vec()),
            ("Omega", "p14_20", self.omega.to_vec()),
            ("6phiA-phiC", "p27_00", vec![self.phi00()]),
            ("kappa", "p27_04", self.kappa.to_vec()),
            ("lambda", "p27_22", self.lambda.iter().flatten().cloned().collect()),
            ("mu", "p27_13", self.mu.to_vec()),
            ("nu", "p27_C", self.nu.to_vec()),
        ]
    }
}

pub const LABELS2: [&str; 5] = ["p7A", "p7C", "p14A", "p14_13", "p14_20"];
pub const LABELS3: [&str; 8] = ["p1", "p7A", "p7C", "p27_00", "p27_04", "p27_22", "p27_13", "p27_C"];

/// Projectors and bases for one split frame.
#[derive(Debug, Clone)]
pub struct So4Refinement {
    pub frame: SplitFrame,
    pub basis: RefinedBasisG2,
    pub proj2: [Matrix; 5],
    pub proj3: [Matrix; 8],
    /// Coordinate projectors in the frame: Λ²(A)⊕Λ²(C), A⊗C, Λ²₊(C), Λ²₋(C).
    pub bidegree2: [Matrix; 4],
}

static STANDARD: OnceLock<So4Refinement> = OnceLock::new();

fn span_proj(fs: &[Form], n: usize) -> Matrix {
    Matrix::projector_onto_span(&fs.iter().map(|f| f.to_coords()).collect::<Vec<_>>(), n)
}

impl So4Refinement {
    pub fn standard() -> &'static So4Refinement {
        STANDARD.get_or_init(|| Self::build_standard().expect("standard refinement is consistent"))
    }

    fn build_standard() -> Result<So4Refinement> {
        let g2 = G2Structure::standard();
        let p = g2.projectors();
        let basis = RefinedBasisG2::standard();
        let coord2 = |keep: &dyn Fn(&[usize]) -> bool| {
            let fs: Vec<Form> = Form::basis(DIM, 2)
                .into_iter()
                .filter(|b| keep(&b.terms().keys().next().unwrap().indices()))
                .collect();
            span_proj(&fs, 21)
        };
        let in_a = |i: usize| i <= 3;
        let pure = coord2(&|ix| in_a(ix[0]) == in_a(ix[1]));
        let mixed = coord2(&|ix| in_a(ix[0]) != in_a(ix[1]));
        let a2 = coord2(&|ix| in_a(ix[0]) && in_a(ix[1]));
        let plus_c = span_proj(&basis.upsilon, 21);
        let minus_c = span_proj(&basis.omega, 21);
        let a2_plus = a2.add(&plus_c);
        let proj2 = [
            Matrix::intersect_projectors(&[&p.p2_7, &pure]),
            Matrix::intersect_projectors(&[&p.p2_7, &mixed]),
            Matrix::intersect_projectors(&[&p.p2_14, &a2_plus]),
            Matrix::intersect_projectors(&[&p.p2_14, &mixed]),
            Matrix::intersect_projectors(&[&p.p2_14, &minus_c]),
        ];
        let seven = |idx: &[usize]| -> Vec<Form> { idx.iter().map(|&i| e(&[i]).wedge(&g2.phi0).hodge()).collect() };
        let imap = |hs: &[SymTensor]| -> Vec<Form> { hs.iter().map(|h| g2.map_i_unchecked(h)).collect() };
        let mut sym0_a = Vec::new();
        let mut sym0_c = Vec::new();
        for (blk, out) in [(&A_IDX[..], &mut sym0_a), (&C_IDX[..], &mut sym0_c)] {
            for (x, &i) in blk.iter().enumerate() {
                for &j in &blk[x + 1..] {
                    out.push(SymTensor::product(DIM, i, j));
                }
            }
            let last = *blk.last().unwrap();
            for &i in &blk[..blk.len() - 1] {
                out.push(SymTensor::product(DIM, i, i).add(&SymTensor::product(DIM, last, last).scale(&-Rational::one())));
            }
        }
        let mixed_sym: Vec<SymTensor> =
            A_IDX.iter().flat_map(|&p| C_IDX.iter().map(move |&a| SymTensor::product(DIM, p, a))).collect();
        let p27_c = span_proj(&basis.nu, 35);
        let p27_mixed = span_proj(&imap(&mixed_sym), 35);
        let proj3 = [
            p.p3_1.clone(),
            span_proj(&seven(&A_IDX), 35),
            span_proj(&seven(&C_IDX), 35),
            span_proj(&imap(&[e0()]), 35),
            span_proj(&imap(&sym0_a), 35),
            span_proj(&imap(&sym0_c), 35),
            p27_mixed.sub(&p27_c),
            p27_c,
        ];
        let r = So4Refinement {
            frame: SplitFrame::standard(),
            basis,
            proj2,
            proj3,
            bidegree2: [pure, mixed, plus_c, minus_c],
        };
        r.check_bases()?;
        Ok(r)
    }

    /// The refinement for another adapted frame, by conjugating the standard projectors.
    pub fn for_frame(frame: SplitFrame) -> Result<So4Refinement> {
        let std = Self::standard();
        if frame.is_standard() {
            return Ok(std.clone());
        }
        let r2 = frame.transport_matrix(2);
        let r3 = frame.transport_matrix(3);
        let (r2t, r3t) = (r2.transpose(), r3.transpose());
        let conj2 = |m: &Matrix| r2.mul(m).mul(&r2t);
        let conj3 = |m: &Matrix| r3.mul(m).mul(&r3t);
        let r = So4Refinement {
            basis: std.basis.transported(&frame),
            proj2: std.proj2.clone().map(|m| conj2(&m)),
            proj3: std.proj3.clone().map(|m| conj3(&m)),
            bidegree2: std.bidegree2.clone().map(|m| conj2(&m)),
            frame,
        };
        r.check_bases()?;
        Ok(r)
    }

    fn check_bases(&self) -> Result<()> {
        for (name, label, fs) in self.basis.families() {
            for (k, f) in fs.iter().enumerate() {
                let comps = if f.grade() == 2 { self.refine2(f)?.to_vec() } else { self.refine3(f)?.to_vec() };
                for (l, c) in comps {
                    if (l == label) != !c.is_zero() || (l == label && &c != f) {
                        return Err(AlgebraError::OutsideModule(format!("{name}[{}] expected in {label}", k + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank2(&self) -> [usize; 5] {
        self.proj2.clone().map(|m| m.rank())
    }

    pub fn rank3(&self) -> [usize; 8] {
        self.proj3.clone().map(|m| m.rank())
    }

    /// Coordinate split of a 1-form into its `A` and `C` parts (frame coordinates).
    pub fn refine1(&self, alpha: &Form) -> Result<(Form, Form)> {
        if alpha.grade() != 1 || alpha.dim() != DIM {
            return Err(AlgebraError::GradeMismatch(alpha.grade(), 1));
        }
        let v = alpha.to_coords();
        let rows = self.frame.matrix();
        let mut a = Form::zero(DIM, 1);
        let mut c = Form::zero(DIM, 1);
        for (i, row) in rows.iter().enumerate() {
            let f = Form::one_form(row);
            let x = row.iter().zip(&v).fold(Rational::zero(), |s, (p, q)| s + p * q);
            if i < 3 {
                a.axpy(&x, &f);
            } else {
                c.axpy(&x, &f);
            }
        }
        Ok((a, c))
    }

    pub fn refine2(&self, beta: &Form) -> Result<Refined<5>> {
        check(beta, 2)?;
        let v = beta.to_coords();
        Ok(Refined(std::array::from_fn(|k| (LABELS2[k], Form::from_coords(DIM, 2, &self.proj2[k].apply(&v))))))
    }

    pub fn refine3(&self, gamma: &Form) -> Result<Refined<8>> {
        check(gamma, 3)?;
        let v = gamma.to_coords();
        Ok(Refined(std::array::from_fn(|k| (LABELS3[k], Form::from_coords(DIM, 3, &self.proj3[k].apply(&v))))))
    }

    pub fn projector(&self, label: &str, grade: usize) -> Option<&Matrix> {
        match grade {
            2 => LABELS2.iter().position(|l| *l == label).map(|k| &self.proj2[k]),
            3 => LABELS3.iter().position(|l| *l == label).map(|k| &self.proj3[k]),
            _ => None,
        }
    }

    /// Component of a form with arbitrary coefficients.
    pub fn component<C: Coeff>(&self, f: &Multivector<C>, label: &str) -> Result<Multivector<C>> {
        let p = self.projector(label, f.grade()).ok_or_else(|| AlgebraError::Parse(format!("no component {label}")))?;
        Ok(Multivector::from_coords(DIM, f.grade(), &p.apply_coeff(&f.to_coords())))
    }

    pub fn in_component<C: Coeff>(&self, f: &Multivector<C>, label: &str) -> Result<bool> {
        Ok(&self.component(f, label)? == f)
    }

    /// `L(α) = ι_{α♯}φ`, `L_A`, `L_C` and `W = 2L_A − L_C` on an `A`-covector (standard frame).
    pub fn l_maps(&self, alpha: &Form) -> Result<LMaps> {
        let (a, c) = self.refine1(alpha)?;
        if !c.is_zero() {
            return Err(AlgebraError::OutsideModule("A".into()));
        }
        let g2 = G2Structure::standard();
        let l = g2.phi0.interior(&a.to_coords())?;
        let la = self.frame_bidegree(&l, true);
        let lc = l.sub(&la);
        let w = la.scale_int(2).sub(&lc);
        Ok(LMaps { l, l_a: la, l_c: lc, w })
    }

    // Part of a Λ²(A)⊕Λ²(C) form lying in Λ²(A).
    fn frame_bidegree(&self, f: &Form, a_part: bool) -> Form {
        let rows = self.frame.matrix();
        let a_proj = span_proj(
            &[(0, 1), (0, 2), (1, 2)].map(|(i, j)| Form::one_form(&rows[i]).wedge(&Form::one_form(&rows[j]))),
            21,
        );
        let part = Form::from_coords(DIM, 2, &a_proj.apply(&f.to_coords()));
        if a_part {
            part
        } else {
            f.sub(&part)
        }
    }

    /// `♮ : (Λ²₁₄)_A → A♯`, `β ↦ √6 (W⁻¹β)♯`.
    pub fn iso_natural<C: Coeff>(&self, beta: &Multivector<C>) -> Result<RadicalVec<C>> {
        if !self.in_component(beta, "p14A")? {
            return Err(AlgebraError::OutsideModule("(Λ²₁₄)_A".into()));
        }
        // W(e^p) = Γ_p and ‖Γ_p‖² = 6
        let coeffs = self.frame_vector(|p| beta.inner_form(&self.basis.gamma[p]).map(|c| c.scale(&Rational::new(1.into(), 6.into()))), 3)?;
        Ok(RadicalVec { coeffs, root: 6 })
    }

    /// `† : (Λ³₂₇)₀,₀ → ℝ` with `[i(E₀)]† = 4√42`.
    pub fn iso_dagger<C: Coeff>(&self, gamma: &Multivector<C>) -> Result<RadicalVec<C>> {
        if !self.in_component(gamma, "p27_00")? {
            return Err(AlgebraError::OutsideModule("(Λ³₂₇)₀,₀".into()));
        }
        let g2 = G2Structure::standard();
        let ie0 = self.frame.transport(&g2.map_i_unchecked(&e0()));
        // γ = t·i(E₀) ↦ 4√42·t
        let t = gamma.inner_form(&ie0)?.scale(&(Rational::one() / ie0.norm_sq()));
        Ok(RadicalVec { coeffs: vec![t.scale(&int(4))], root: 42 })
    }

    /// `‡ : (Λ³₂₇)_C → C♯`, inverse of `X ↦ (1/(2√3)) (i∘s)(ι_Xφ)`.
    pub fn iso_ddagger<C: Coeff>(&self, gamma: &Multivector<C>) -> Result<RadicalVec<C>> {
        if !self.in_component(gamma, "p27_C")? {
            return Err(AlgebraError::OutsideModule("(Λ³₂₇)_C".into()));
        }
        // γ = Σ m_α ν_α ↦ 2√3 Σ m_α e_α, ‖ν_α‖² = 12
        let coeffs = self.frame_vector(
            |a| gamma.inner_form(&self.basis.nu[a - 3]).map(|c| c.scale(&Rational::new(1.into(), 6.into()))),
            4,
        )?;
        Ok(RadicalVec { coeffs, root: 3 })
    }

    // Σ_k coef(k)·f_k for the frame vectors of A (n=3) or C (n=4), as standard coordinates.
    fn frame_vector<C: Coeff, F: Fn(usize) -> Result<C>>(&self, coef: F, n: usize) -> Result<Vec<C>> {
        let rows = self.frame.matrix();
        let offset = if n == 3 { 0 } else { 3 };
        let mut out = vec![C::zero_coeff(); DIM];
        for k in 0..n {
            let c = coef(k + offset)?;
            for (j, x) in rows[k + offset].iter().enumerate() {
                out[j].axpy(x, &c);
            }
        }
        Ok(out)
    }

    /// Commutation failures of the refined projectors with a set of generators.
    pub fn equivariance_failures(&self, algebra: &[Matrix]) -> Vec<String> {
        let mut bad = Vec::new();
        for (a, x) in algebra.iter().enumerate() {
            let r2 = action_matrix(x, DIM, 2);
            let r3 = action_matrix(x, DIM, 3);
            for (k, p) in self.proj2.iter().enumerate() {
                if r2.mul(p) != p.mul(&r2) {
                    bad.push(format!("{} vs generator {}", LABELS2[k], a + 1));
                }
            }
            for (k, p) in self.proj3.iter().enumerate() {
                if r3.mul(p) != p.mul(&r3) {
                    bad.push(format!("{} vs generator {}", LABELS3[k], a + 1));
                }
            }
        }
        bad
    }
}

/// `L`, `L_A`, `L_C`, `W` evaluated on one covector.
#[derive(Debug, Clone, PartialEq)]
pub struct LMaps {
    pub l: Form,
    pub l_a: Form,
    pub l_c: Form,
    pub w: Form,
}

/// Labeled components of a refined splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct Refined<const N: usize>(pub [(&'static str, Form); N]);

impl<const N: usize> Refined<N> {
    pub fn get(&self, label: &str) -> Option<&Form> {
        self.0.iter().find(|(l, _)| *l == label).map(|(_, f)| f)
    }

    pub fn to_vec(&self) -> Vec<(&'static str, Form)> {
        self.0.to_vec()
    }

    pub fn nonzero_labels(&self) -> Vec<&'static str> {
        self.0.iter().filter(|(_, f)| !f.is_zero()).map(|(l, _)| *l).collect()
    }

    pub fn total(&self) -> Form {
        self.0.iter().skip(1).fold(self.0[0].1.clone(), |a, (_, f)| a.add(f))
    }
}

/// A vector `√root · coeffs` (a scalar when it has one entry).
#[derive(Debug, Clone, PartialEq)]
pub struct RadicalVec<C: Coeff> {
    pub coeffs: Vec<C>,
    pub root: u64,
}

impl<C: Coeff> RadicalVec<C> {
    /// Multiplies by a surd, merging the radicals.
    pub fn mul_surd(&self, s: &Surd) -> RadicalVec<C> {
        let (sq, f) = squarefree_split(self.root * s.root);
        let q = &s.rat * int(sq as i64);
        RadicalVec { coeffs: self.coeffs.iter().map(|c| c.scale(&q)).collect(), root: f }
    }

    /// The coefficients, if no radical remains.
    pub fn rational(&self) -> Option<&[C]> {
        (self.root == 1).then_some(&self.coeffs[..])
    }
}

impl RadicalVec<Rational> {
    pub fn norm_sq(&self) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |a, c| a + c * c) * int(self.root as i64)
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

/// Basis of 𝔰𝔬(4) = {X ∈ 𝔤₂ : X·A♯ ⊆ A♯}.
pub fn so4_stabilizer() -> Vec<Matrix> {
    preserving(G2Structure::standard().lie_algebra(), &A_IDX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn ranks_and_examples() {
        let r = So4Refinement::standard();
        assert_eq!(r.rank2(), [3, 4, 3, 8, 3]);
        assert_eq!(r.rank3(), [1, 3, 4, 1, 5, 9, 8, 4]);
        let g2 = G2Structure::standard();
        assert_eq!(r.refine2(&g2.phi0.interior_basis(1)).unwrap().nonzero_labels(), vec!["p7A"]);
        assert_eq!(r.refine2(&omega(2)).unwrap().nonzero_labels(), vec!["p14_20"]);
        assert_eq!(r.refine3(&g2.phi0).unwrap().nonzero_labels(), vec!["p1"]);
        assert_eq!(r.refine3(&kappa(3)).unwrap().nonzero_labels(), vec!["p27_04"]);
        assert_eq!(r.refine3(&kappa1_printed()).unwrap().nonzero_labels(), vec!["p7A"]);
        let (a, c) = r.refine1(&e(&[1]).add(&e(&[5]))).unwrap();
        assert_eq!((a, c), (e(&[1]), e(&[5])));
    }

    #[test]
    fn norms() {
        let b = RefinedBasisG2::standard();
        assert_eq!(b.gamma[0], e(&[2, 3]).scale_int(2).sub(&e(&[4, 5])).sub(&e(&[6, 7])));
        assert_eq!(b.phi00().norm_sq(), int(42));
        assert!(b.nu.iter().all(|n| n.norm_sq() == int(12)));
        assert!(b.kappa.iter().all(|n| n.norm_sq() == int(4)));
        assert_eq!(delta(4).inner(&delta(7)).unwrap(), int(1));
        assert_eq!(b.nu[0], e(&[1, 2, 7]).neg().sub(&e(&[1, 3, 6])).add(&e(&[2, 3, 5])).sub(&e(&[5, 6, 7]).scale_int(3)));
    }

    #[test]
    fn s_map_example() {
        let beta = e(&[1, 5]).neg().sub(&e(&[2, 6])).add(&e(&[3, 7]));
        let h = s_map(&beta).unwrap();
        assert_eq!(h.get(1, 5), &rat(-1, 2));
        assert_eq!(h.get(7, 3), &rat(1, 2));
        assert!(s_map(&e(&[1, 2])).is_err());
    }

    #[test]
    fn isometries() {
        let r = So4Refinement::standard();
        let b = &r.basis;
        let n = r.iso_natural(&b.gamma[0].scale_int(12)).unwrap();
        assert_eq!(n.root, 6);
        assert_eq!(n.coeffs[0], int(12));
        assert_eq!(n.norm_sq(), b.gamma[0].scale_int(12).norm_sq());
        let d = r.iso_dagger(&b.phi00().scale_int(12)).unwrap();
        assert_eq!((d.coeffs[0].clone(), d.root), (int(12), 42));
        let dd = r.iso_ddagger(&b.nu[0].scale_int(6)).unwrap();
        assert_eq!((dd.coeffs[3].clone(), dd.root), (int(12), 3));
        assert!(r.iso_dagger(&b.nu[0]).is_err());
    }

    fn span_of(fs: &[Form], k: usize) -> Matrix {
        span_proj(fs, crate::multilinear::index::binom(7, k))
    }

    #[test]
    fn alternative_descriptions() {
        let r = So4Refinement::standard();
        let b = &r.basis;
        // A ⊗ Λ²₋(C) is the (2,2) piece
        let a_minus: Vec<Form> = b.lambda.iter().flatten().cloned().collect();
        assert_eq!(span_of(&a_minus, 3), r.proj3[5]);
        // ∗_A applied to the A-factor of the (1,3) piece of Λ²₁₄
        let star_delta: Vec<Form> = (1..=8)
            .map(|d| {
                let mut out = Form::zero(7, 3);
                for (m, c) in delta(d).terms() {
                    let ix = m.indices();
                    out = out.add(&star_a(ix[0]).wedge(&e(&[ix[1]])).scale(c));
                }
                out
            })
            .collect();
        assert_eq!(span_of(&star_delta, 3), r.proj3[6]);
        // L_C on traceless Sym²(A) and on Λ²(A)
        let lc = |p: usize, q: usize| e(&[p]).wedge(&upsilon(q));
        let sym0 = vec![
            lc(1, 2).add(&lc(2, 1)),
            lc(1, 3).add(&lc(3, 1)),
            lc(2, 3).add(&lc(3, 2)),
            lc(1, 1).sub(&lc(3, 3)),
            lc(2, 2).sub(&lc(3, 3)),
        ];
        assert_eq!(span_of(&sym0, 3), r.proj3[4]);
        let anti = vec![lc(1, 2).sub(&lc(2, 1)), lc(1, 3).sub(&lc(3, 1)), lc(2, 3).sub(&lc(3, 2))];
        assert_eq!(span_of(&anti, 3), r.proj3[1]);
        // W sends e^p to Γ_p, L_A is ∗_A
        let m = r.l_maps(&e(&[2])).unwrap();
        assert_eq!(m.w, b.gamma[1]);
        assert_eq!(m.l_a, star_a(2));
        assert_eq!(m.l_c, upsilon(2));
        // Λ²₋(C) sits inside Λ²₁₄
        let g2 = G2Structure::standard();
        assert!(b.omega.iter().all(|o| g2.project_lambda2(o).unwrap().1 == *o));
    }

    #[test]
    fn stabilizer_dimension() {
        assert_eq!(so4_stabilizer().len(), 6);
    }

    #[test]
    fn nonstandard_frame() {
        // a signed permutation in G₂ cycling e₁ → e₂ → e₃
        let perm = [2, 3, 1, 4, 6, 7, 5];
        let signs = [1, 1, 1, 1, 1, -1, -1];
        let m: Vec<Vec<Rational>> = (0..7)
            .map(|i| (0..7).map(|j| if j + 1 == perm[i] { int(signs[i]) } else { int(0) }).collect())
            .collect();
        let f = SplitFrame::from_matrix(m).unwrap();
        let r = So4Refinement::for_frame(f).unwrap();
        assert_eq!(r.rank3(), [1, 3, 4, 1, 5, 9, 8, 4]);
        let bad = Matrix::from_i64(&[&[0, 1, 0, 0, 0, 0, 0], &[1, 0, 0, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0, 0], &[0, 0, 0, 1, 0, 0, 0], &[0, 0, 0, 0, 1, 0, 0], &[0, 0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 0, 1]]);
        assert!(SplitFrame::from_matrix(bad.to_rows()).is_err());
    }
}
