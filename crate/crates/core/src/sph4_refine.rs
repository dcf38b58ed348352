//! Spin^h(4)-refined decompositions of Λ² and Λ³ on ℝ⁸ relative to the Cayley
//! split `K♯ = span(e₁..e₄)`, `L♯ = span(e₅..e₈)`, the adapted bases, and the `†` isometry.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::expr::Coeff;
use crate::multilinear::lie::{action_matrix, casimir, preserving, sub_algebra, trace_pairing};
use crate::multilinear::{Form, Matrix, Multivector};
use crate::rational::{int, Rational};
use crate::so4_refine::{RadicalVec, Refined};
use crate::spin7_algebra::{e, Spin7Structure, DIM};

pub const K_IDX: [usize; 4] = [1, 2, 3, 4];
pub const L_IDX: [usize; 4] = [5, 6, 7, 8];

fn pair(s1: i64, a: [usize; 2], s2: i64, b: [usize; 2]) -> Form {
    e(&a).scale_int(s1).add(&e(&b).scale_int(s2))
}

pub fn theta(p: usize) -> Form {
    [pair(1, [1, 2], -1, [3, 4]), pair(1, [1, 3], 1, [2, 4]), pair(1, [1, 4], -1, [2, 3])][p - 1].clone()
}

pub fn gamma(p: usize) -> Form {
    [pair(1, [1, 2], 1, [3, 4]), pair(1, [1, 3], -1, [2, 4]), pair(-1, [1, 4], -1, [2, 3])][p - 1].clone()
}

pub fn omega(p: usize) -> Form {
    [pair(1, [5, 6], -1, [7, 8]), pair(1, [5, 7], 1, [6, 8]), pair(-1, [5, 8], 1, [6, 7])][p - 1].clone()
}

pub fn upsilon(p: usize) -> Form {
    [pair(1, [5, 6], 1, [7, 8]), pair(1, [5, 7], -1, [6, 8]), pair(1, [5, 8], 1, [6, 7])][p - 1].clone()
}

/// `υ_i = ι_{e_i}Φ₀`.
pub fn contraction(i: usize) -> Form {
    Spin7Structure::standard().phi0.interior_basis(i)
}

/// `∗_K e^p` or `∗_L e^r`, the Hodge star inside the block containing `i`.
pub fn star_block(i: usize) -> Form {
    let block = if i <= 4 { K_IDX } else { L_IDX };
    e(&[i]).hodge_within(&block).expect("index lies in its block")
}

/// `ρ_i = υ_i − 7 ∗_K e_i` (i ≤ 4) or `υ_i − 7 ∗_L e_i` (i ≥ 5).
pub fn rho(i: usize) -> Form {
    contraction(i).sub(&star_block(i).scale_int(7))
}

fn ew(i: usize, f: &Form) -> Form {
    e(&[i]).wedge(f)
}

// Σ c·e^i∧f for (c, i, f).
fn lin(terms: &[(i64, usize, Form)]) -> Form {
    terms.iter().fold(Form::zero(DIM, 3), |acc, (c, i, f)| acc.add(&ew(*i, f).scale_int(*c)))
}

pub fn mu(a: usize) -> Form {
    let t = theta;
    match a {
        1 => lin(&[(2, 5, t(3)), (2, 6, t(2))]),
        2 => lin(&[(-2, 5, t(2)), (2, 6, t(3))]),
        3 => lin(&[(2, 5, t(1))]),
        4 => lin(&[(2, 6, t(1))]),
        5 => lin(&[(-2, 5, t(3)), (2, 6, t(2))]),
        6 => lin(&[(-2, 5, t(2)), (-2, 6, t(3))]),
        7 => lin(&[(2, 7, t(3)), (-2, 8, t(2))]),
        8 => lin(&[(-2, 7, t(2)), (-2, 8, t(3))]),
        9 => lin(&[(2, 7, t(1))]),
        10 => lin(&[(-2, 8, t(1))]),
        11 => lin(&[(-2, 7, t(3)), (-2, 8, t(2))]),
        12 => lin(&[(-2, 7, t(2)), (2, 8, t(3))]),
        _ => panic!("mu index in 1..=12"),
    }
}

pub fn nu(a: usize) -> Form {
    let o = omega;
    match a {
        1 => lin(&[(-2, 1, o(3)), (2, 2, o(2))]),
        2 => lin(&[(2, 1, o(2)), (2, 2, o(3))]),
        3 => lin(&[(2, 3, o(3)), (-2, 4, o(2))]),
        4 => lin(&[(-2, 3, o(2)), (-2, 4, o(3))]),
        5 => lin(&[(2, 3, o(3)), (2, 4, o(2))]),
        6 => lin(&[(-2, 3, o(2)), (2, 4, o(3))]),
        7 => lin(&[(2, 1, o(3)), (2, 2, o(2))]),
        8 => lin(&[(-2, 1, o(2)), (2, 2, o(3))]),
        9 => lin(&[(-2, 1, o(1))]),
        10 => lin(&[(2, 2, o(1))]),
        11 => lin(&[(2, 3, o(1))]),
        12 => lin(&[(-2, 4, o(1))]),
        _ => panic!("nu index in 1..=12"),
    }
}

pub fn lambda(i: usize) -> Form {
    let g = gamma;
    match i {
        1 => lin(&[(3, 5, g(3)), (3, 6, g(2))]),
        2 => lin(&[(-3, 5, g(2)), (3, 6, g(3))]),
        3 => lin(&[(2, 5, g(1)), (1, 7, g(3)), (-1, 8, g(2))]),
        4 => lin(&[(2, 6, g(1)), (-1, 7, g(2)), (-1, 8, g(3))]),
        5 => lin(&[(-1, 5, g(3)), (1, 6, g(2)), (2, 7, g(1))]),
        6 => lin(&[(-1, 5, g(2)), (-1, 6, g(3)), (-2, 8, g(1))]),
        7 => lin(&[(-3, 7, g(3)), (-3, 8, g(2))]),
        8 => lin(&[(-3, 7, g(2)), (3, 8, g(3))]),
        _ => panic!("lambda index in 1..=8"),
    }
}

/// The sixth member uses `e²∧Υ₁`; see [`kappa6_printed`].
pub fn kappa(j: usize) -> Form {
    let u = upsilon;
    match j {
        1 => lin(&[(-3, 1, u(3)), (3, 2, u(2))]),
        2 => lin(&[(3, 1, u(2)), (3, 2, u(3))]),
        3 => lin(&[(3, 3, u(3)), (-3, 4, u(2))]),
        4 => lin(&[(-3, 3, u(2)), (-3, 4, u(3))]),
        5 => lin(&[(-2, 1, u(1)), (1, 3, u(3)), (1, 4, u(2))]),
        6 => lin(&[(2, 2, u(1)), (-1, 3, u(2)), (1, 4, u(3))]),
        7 => lin(&[(1, 1, u(3)), (1, 2, u(2)), (2, 3, u(1))]),
        8 => lin(&[(-1, 1, u(2)), (1, 2, u(3)), (-2, 4, u(1))]),
        _ => panic!("kappa index in 1..=8"),
    }
}

/// `2e¹∧Υ₁ − e³∧Υ₂ + e⁴∧Υ₃`, the form with `e¹` in place of `e²`. It is not in Λ³₄₈.
pub fn kappa6_printed() -> Form {
    lin(&[(2, 1, upsilon(1)), (-1, 3, upsilon(2)), (1, 4, upsilon(3))])
}

/// All adapted forms for the standard Cayley split.
#[derive(Debug, Clone)]
pub struct RefinedBasisSpin7 {
    pub theta: Vec<Form>,
    pub gamma: Vec<Form>,
    pub omega: Vec<Form>,
    pub upsilon: Vec<Form>,
    /// `υ_i`, i = 1..8
    pub contraction: Vec<Form>,
    /// `ρ_i`, i = 1..8
    pub rho: Vec<Form>,
    pub mu: Vec<Form>,
    pub nu: Vec<Form>,
    pub lambda: Vec<Form>,
    pub kappa: Vec<Form>,
}

impl RefinedBasisSpin7 {
    pub fn standard() -> Self {
        let r = |n: usize, f: fn(usize) -> Form| (1..=n).map(f).collect::<Vec<_>>();
        RefinedBasisSpin7 {
            theta: r(3, theta),
            gamma: r(3, gamma),
            omega: r(3, omega),
            upsilon: r(3, upsilon),
            contraction: r(8, contraction),
            rho: r(8, rho),
            mu: r(12, mu),
            nu: r(12, nu),
            lambda: r(8, lambda),
            kappa: r(8, kappa),
        }
    }

    /// `(name, component label, forms)` for every family with a single home component.
    pub fn families(&self) -> Vec<(&'static str, &'static str, Vec<Form>)> {
        let gm: Vec<Form> = (0..3).map(|k| self.gamma[k].sub(&self.upsilon[k])).collect();
        let gp: Vec<Form> = (0..3).map(|k| self.gamma[k].add(&self.upsilon[k])).collect();
        vec![
            ("Theta", "p21_200", self.theta.clone()),
            ("Omega", "p21_002", self.omega.clone()),
            ("Gamma-Upsilon", "p21_020", gm),
            ("Gamma+Upsilon", "p7_020", gp),
            ("upsilon_K", "p8K", self.contraction[..4].to_vec()),
            ("upsilon_L", "p8L", self.contraction[4..].to_vec()),
            ("rho_K", "p48K", self.rho[..4].to_vec()),
            ("rho_L", "p48L", self.rho[4..].to_vec()),
            ("mu", "p48_211", self.mu.clone()),
            ("nu", "p48_112", self.nu.clone()),
            ("lambda", "p48_031", self.lambda.clone()),
            ("kappa", "p48_130", self.kappa.clone()),
        ]
    }
}

pub const LABELS2: [&str; 6] = ["p7_020", "p7_101", "p21_200", "p21_020", "p21_002", "p21_121"];
pub const LABELS3: [&str; 8] = ["p8K", "p8L", "p48K", "p48L", "p48_031", "p48_211", "p48_130", "p48_112"];

/// Highest-weight labels `(p, q, r)` of the Λ³ components, in [`LABELS3`] order.
pub const WEIGHTS3: [(u32, u32, u32); 8] =
    [(1, 1, 0), (0, 1, 1), (1, 1, 0), (0, 1, 1), (0, 3, 1), (2, 1, 1), (1, 3, 0), (1, 1, 2)];
pub const WEIGHTS2: [(u32, u32, u32); 6] = [(0, 2, 0), (1, 0, 1), (2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 2, 1)];

/// `(p+1)(q+1)(r+1)`, defined when `p + q + r` is even.
pub fn rep_dim(p: u32, q: u32, r: u32) -> Result<usize> {
    if !(p + q + r).is_multiple_of(2) {
        return Err(AlgebraError::Invariant(format!("V({p},{q},{r}) has odd weight sum and is not a real module")));
    }
    Ok(((p + 1) * (q + 1) * (r + 1)) as usize)
}

/// Basis of {X ∈ 𝔰𝔭𝔦𝔫(7) : X·K♯ ⊆ K♯}.
pub fn sph4_stabilizer() -> Vec<Matrix> {
    preserving(Spin7Structure::standard().lie_algebra(), &K_IDX)
}

fn block_is_zero(x: &Matrix, idx: &[usize]) -> Vec<Rational> {
    idx.iter().flat_map(|&i| idx.iter().map(move |&j| x.get(i - 1, j - 1).clone())).collect()
}

/// The three su(2) ideals: acting on K only, diagonally on both, on L only.
pub fn stabilizer_factors() -> [Vec<Matrix>; 3] {
    static F: OnceLock<[Vec<Matrix>; 3]> = OnceLock::new();
    F.get_or_init(|| {
        let st = sph4_stabilizer();
        let k_only = sub_algebra(&st, |x| block_is_zero(x, &L_IDX));
        let l_only = sub_algebra(&st, |x| block_is_zero(x, &K_IDX));
        let mut ends = k_only.clone();
        ends.extend(l_only.iter().cloned());
        let mid = sub_algebra(&st, |x| ends.iter().map(|y| trace_pairing(x, y)).collect());
        [k_only, mid, l_only]
    })
    .clone()
}

/// Casimir operators of the three factors on a representation, with the scale fixing `V_p ↦ p(p+2)`.
pub struct FactorCasimirs {
    pub ops: [Matrix; 3],
    scale: [Rational; 3],
}

impl FactorCasimirs {
    /// `rep(X)` gives the representation matrix of a stabilizer element.
    pub fn new<F: Fn(&Matrix) -> Matrix>(rep: F) -> FactorCasimirs {
        let factors = stabilizer_factors();
        let ops: [Matrix; 3] = std::array::from_fn(|i| {
            let r: Vec<Matrix> = factors[i].iter().map(&rep).collect();
            casimir(&factors[i], &r)
        });
        // calibrate on 1-forms: e¹ spans part of V₁,₁,₀ and e⁵ of V₀,₁,₁
        let scale = std::array::from_fn(|i| {
            let probe = if i == 2 { 5 } else { 1 };
            let r: Vec<Matrix> = factors[i].iter().map(|x| action_matrix(x, DIM, 1)).collect();
            casimir(&factors[i], &r).get(probe - 1, probe - 1).clone() / int(3)
        });
        FactorCasimirs { ops, scale }
    }

    fn eigenvalue(&self, i: usize, p: u32) -> Rational {
        &self.scale[i] * int((p * (p + 2)) as i64)
    }

    /// Vectors with the given joint weight that also satisfy `constraints · v = 0`.
    pub fn joint_space(&self, w: (u32, u32, u32), constraints: Option<&Matrix>) -> Vec<Vec<Rational>> {
        let n = self.ops[0].rows();
        let id = Matrix::identity(n);
        let ws = [w.0, w.1, w.2];
        let mut blocks: Vec<Matrix> = (0..3).map(|i| self.ops[i].sub(&id.scale(&self.eigenvalue(i, ws[i])))).collect();
        if let Some(c) = constraints {
            blocks.push(c.clone());
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Matrix::vstack(&refs).nullspace()
    }

    /// All weights up to `max` occurring, with multiplicity-space dimension.
    pub fn decompose(&self, max: u32, constraints: Option<&Matrix>) -> Vec<((u32, u32, u32), usize)> {
        let mut out = Vec::new();
        for p in 0..=max {
            for q in 0..=max {
                for r in 0..=max {
                    if (p + q + r) % 2 == 1 {
                        continue;
                    }
                    let d = self.joint_space((p, q, r), constraints).len();
                    if d > 0 {
                        out.push(((p, q, r), d));
                    }
                }
            }
        }
        out
    }
}

/// Projectors and bases for the standard Cayley split.
#[derive(Debug, Clone)]
pub struct Sph4Refinement {
    pub basis: RefinedBasisSpin7,
    pub proj2: [Matrix; 6],
    pub proj3: [Matrix; 8],
    /// Λ²₊(K), Λ²₋(K), K⊗L, Λ²₊(L), Λ²₋(L)
    pub blocks2: [Matrix; 5],
}

fn span_proj(fs: &[Form], n: usize) -> Matrix {
    Matrix::projector_onto_span(&fs.iter().map(|f| f.to_coords()).collect::<Vec<_>>(), n)
}

impl Sph4Refinement {
    pub fn standard() -> &'static Sph4Refinement {
        static S: OnceLock<Sph4Refinement> = OnceLock::new();
        S.get_or_init(|| Self::build().expect("standard Cayley refinement is consistent"))
    }

    fn build() -> Result<Sph4Refinement> {
        let s7 = Spin7Structure::standard();
        let p = s7.projectors();
        let basis = RefinedBasisSpin7::standard();
        let mixed: Vec<Form> = K_IDX.iter().flat_map(|&i| L_IDX.iter().map(move |&j| e(&[i, j]))).collect();
        let blocks2 = [
            span_proj(&basis.gamma, 28),
            span_proj(&basis.theta, 28),
            span_proj(&mixed, 28),
            span_proj(&basis.upsilon, 28),
            span_proj(&basis.omega, 28),
        ];
        let plus = blocks2[0].add(&blocks2[3]);
        let proj2 = [
            Matrix::intersect_projectors(&[&p.p2_7, &plus]),
            Matrix::intersect_projectors(&[&p.p2_7, &blocks2[2]]),
            Matrix::intersect_projectors(&[&p.p2_21, &blocks2[1]]),
            Matrix::intersect_projectors(&[&p.p2_21, &plus]),
            Matrix::intersect_projectors(&[&p.p2_21, &blocks2[4]]),
            Matrix::intersect_projectors(&[&p.p2_21, &blocks2[2]]),
        ];
        let cas = FactorCasimirs::new(|x| action_matrix(x, DIM, 3));
        let id = Matrix::identity(56);
        let not8 = id.sub(&p.p3_8);
        let not48 = id.sub(&p.p3_48);
        let proj3: [Matrix; 8] = std::array::from_fn(|k| {
            let outside = if k < 2 { &not8 } else { &not48 };
            Matrix::projector_onto_span(&cas.joint_space(WEIGHTS3[k], Some(outside)), 56)
        });
        let r = Sph4Refinement { basis, proj2, proj3, blocks2 };
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

    pub fn rank2(&self) -> [usize; 6] {
        self.proj2.clone().map(|m| m.rank())
    }

    pub fn rank3(&self) -> [usize; 8] {
        self.proj3.clone().map(|m| m.rank())
    }

    pub fn refine2(&self, beta: &Form) -> Result<Refined<6>> {
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

    pub fn component<C: Coeff>(&self, f: &Multivector<C>, label: &str) -> Result<Multivector<C>> {
        let p = self.projector(label, f.grade()).ok_or_else(|| AlgebraError::Parse(format!("no component {label}")))?;
        Ok(Multivector::from_coords(DIM, f.grade(), &p.apply_coeff(&f.to_coords())))
    }

    pub fn in_component<C: Coeff>(&self, f: &Multivector<C>, label: &str) -> Result<bool> {
        Ok(&self.component(f, label)? == f)
    }

    /// `† : (Λ³₄₈)_L → L♯`, inverse of `e_r ↦ ρ_r/√42`; returns 8 standard coordinates times `√42`.
    pub fn iso_dagger<C: Coeff>(&self, gamma: &Multivector<C>) -> Result<RadicalVec<C>> {
        if !self.in_component(gamma, "p48L")? {
            return Err(AlgebraError::OutsideModule("(Λ³₄₈)_L".into()));
        }
        let rho = &self.basis.rho[4..];
        let gram = Matrix::from_rows(
            &rho.iter().map(|a| rho.iter().map(|b| a.inner(b).unwrap()).collect()).collect::<Vec<_>>(),
        );
        let rhs: Vec<C> = rho.iter().map(|r| gamma.inner_form(r)).collect::<Result<_>>()?;
        let d = gram.inverse()?.apply_coeff(&rhs);
        let mut coeffs = vec![C::zero_coeff(); DIM];
        for (k, &r) in L_IDX.iter().enumerate() {
            coeffs[r - 1] = d[k].clone();
        }
        Ok(RadicalVec { coeffs, root: 42 })
    }

    /// `(Λ²₂₁)₂,₀,₀ = Λ²₋(K)` and `(Λ²₂₁)₀,₀,₂ = Λ²₋(L)` as projector equalities.
    pub fn lambda2_identifications(&self) -> (bool, bool) {
        (self.proj2[2] == self.blocks2[1], self.proj2[4] == self.blocks2[4])
    }

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

fn check(f: &Form, grade: usize) -> Result<()> {
    if f.dim() != DIM {
        return Err(AlgebraError::DimMismatch(f.dim(), DIM));
    }
    if f.grade() != grade {
        return Err(AlgebraError::GradeMismatch(f.grade(), grade));
    }
    Ok(())
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    let y = b.get(k, l);
                    if !y.is_zero() {
                        m.set(i * b.rows() + k, j * b.cols() + l, x * y);
                    }
                }
            }
        }
    }
    m
}

fn sub_block(x: &Matrix, idx: &[usize]) -> Matrix {
    Matrix::from_rows(&idx.iter().map(|&i| idx.iter().map(|&j| x.get(i - 1, j - 1).clone()).collect()).collect::<Vec<_>>())
}

/// Exact decomposition of `Sym²(K) ⊗ L` against a listed decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionAudit {
    pub computed: Vec<((u32, u32, u32), usize)>,
    pub computed_total: usize,
    pub listed: Vec<(u32, u32, u32)>,
    pub listed_total: usize,
}

impl DimensionAudit {
    pub fn consistent(&self) -> bool {
        self.computed_total == self.listed_total
            && self.listed.len() == self.computed.len()
            && self.listed.iter().all(|w| self.computed.iter().any(|(c, _)| c == w))
    }
}

/// The summands `V₂,₃,₁ ⊕ V₀,₃,₁ ⊕ V₂,₁,₁ ⊕ L` listed for the second fundamental form of a Cayley plane.
pub const SFF_LISTED: [(u32, u32, u32); 4] = [(2, 3, 1), (0, 3, 1), (2, 1, 1), (0, 1, 1)];

/// Decomposes `Sym²(K) ⊗ L` (dimension 40) under the stabilizer and compares with [`SFF_LISTED`].
pub fn sym2k_tensor_l_audit() -> Result<DimensionAudit> {
    let id4 = Matrix::identity(4);
    let rep = |x: &Matrix| {
        let xk = sub_block(x, &K_IDX);
        let xl = sub_block(x, &L_IDX);
        kron(&kron(&xk, &id4), &id4).add(&kron(&kron(&id4, &xk), &id4)).add(&kron(&kron(&id4, &id4), &xl))
    };
    let cas = FactorCasimirs::new(rep);
    // v[i][j][r] = v[j][i][r]
    let mut rows = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for r in 0..4 {
                let mut row = vec![Rational::zero(); 64];
                row[(i * 4 + j) * 4 + r] = Rational::one();
                row[(j * 4 + i) * 4 + r] = -Rational::one();
                rows.push(row);
            }
        }
    }
    let antisym = Matrix::from_rows(&rows);
    let computed = cas.decompose(4, Some(&antisym));
    let computed_total = computed.iter().map(|(_, d)| d).sum();
    let listed_total = SFF_LISTED.iter().map(|&(p, q, r)| rep_dim(p, q, r)).sum::<Result<usize>>()?;
    Ok(DimensionAudit { computed, computed_total, listed: SFF_LISTED.to_vec(), listed_total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_and_identifications() {
        let r = Sph4Refinement::standard();
        assert_eq!(r.rank2(), [3, 4, 3, 3, 3, 12]);
        assert_eq!(r.rank3(), [4, 4, 4, 4, 8, 12, 8, 12]);
        assert_eq!(r.rank3()[2..].iter().sum::<usize>(), 48);
        assert_eq!(r.lambda2_identifications(), (true, true));
        for (k, &(p, q, w)) in WEIGHTS3.iter().enumerate() {
            assert_eq!(rep_dim(p, q, w).unwrap(), r.rank3()[k]);
        }
        for (k, &(p, q, w)) in WEIGHTS2.iter().enumerate() {
            assert_eq!(rep_dim(p, q, w).unwrap(), r.rank2()[k]);
        }
    }

    #[test]
    fn norms() {
        let b = RefinedBasisSpin7::standard();
        let n = |fs: &[Form]| fs.iter().map(|f| f.norm_sq()).collect::<Vec<_>>();
        assert!(n(&b.rho).iter().all(|x| *x == int(42)));
        assert_eq!(n(&b.mu), [16, 16, 8, 8, 16, 16, 16, 16, 8, 8, 16, 16].map(int));
        assert_eq!(n(&b.nu), [16, 16, 16, 16, 16, 16, 16, 16, 8, 8, 8, 8].map(int));
        assert_eq!(n(&b.lambda), [36, 36, 12, 12, 12, 12, 36, 36].map(int));
        assert_eq!(n(&b.kappa), [36, 36, 36, 36, 12, 12, 12, 12].map(int));
    }

    #[test]
    fn printed_kappa6_is_outside() {
        let r = Sph4Refinement::standard();
        let k = kappa6_printed();
        assert!(!Spin7Structure::standard().in_lambda3_48(&k));
        assert!(!r.in_component(&k, "p48_130").unwrap());
        assert!(r.in_component(&kappa(6), "p48_130").unwrap());
    }

    #[test]
    fn refine3_examples() {
        let r = Sph4Refinement::standard();
        assert_eq!(r.refine3(&contraction(1)).unwrap().nonzero_labels(), ["p8K"]);
        assert_eq!(r.refine3(&kappa(1)).unwrap().nonzero_labels(), ["p48_130"]);
        let f = e(&[1, 2, 3]);
        assert_eq!(r.refine3(&f).unwrap().total(), f);
        assert_eq!(r.refine2(&e(&[1, 5])).unwrap().total(), e(&[1, 5]));
    }

    #[test]
    fn dagger() {
        let r = Sph4Refinement::standard();
        let d = r.iso_dagger(&rho(5).scale_int(16)).unwrap();
        assert_eq!(d.root, 42);
        assert_eq!(d.coeffs[4], int(16));
        assert_eq!(d.norm_sq(), rho(5).scale_int(16).norm_sq());
        assert_eq!(r.iso_dagger(&rho(6)).unwrap().norm_sq(), int(42));
        assert!(r.iso_dagger(&rho(1)).is_err());
    }

    #[test]
    fn stabilizer() {
        assert_eq!(sph4_stabilizer().len(), 9);
        assert!(stabilizer_factors().iter().all(|f| f.len() == 3));
        let r = Sph4Refinement::standard();
        assert!(r.equivariance_failures(&sph4_stabilizer()).is_empty());
        assert!(rep_dim(1, 0, 0).is_err());
    }

    #[test]
    fn second_fundamental_form_carrier() {
        let a = sym2k_tensor_l_audit().unwrap();
        assert_eq!(a.computed_total, 40);
        assert_eq!(a.computed, vec![((0, 1, 1), 4), ((2, 1, 1), 12), ((2, 3, 1), 24)]);
        assert_eq!(a.listed_total, 48);
        assert!(!a.consistent());
    }
}
