//! Refined torsion of a Spin(7)-structure relative to a Cayley split: the 56
//! coefficients, the forms `τ₁, τ₃` they assemble into, the structure-equation
//! system for the 7×8 matrix `T`, and the mean curvature of the adapted Cayley plane.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::{AlgebraError, Result};
use crate::expr::{Coeff, ParamExpr};
use crate::golden::{BlockComparison, PrintedBlocks};
use crate::multilinear::json::{param_matrix_from_json, param_matrix_to_json};
use crate::multilinear::lie::apply_derivation;
use crate::multilinear::{solve_exact, Form, Matrix, Multivector, ParamForm};
use crate::rational::{int, rat, Rational, Surd};
use crate::sph4_refine::{Sph4Refinement, K_IDX, L_IDX};
use crate::spin7_algebra::{e, Spin7Structure, DIM, GAMMA_PATTERN};

/// The 56 refined coefficients: `A, C` over `1..=4`, `B, D` over `5..=8`,
/// `E, F` over `1..=12`, `X, Y` over `1..=8`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RefinedTorsionSpin7 {
    pub a: [ParamExpr; 4],
    pub b: [ParamExpr; 4],
    pub c: [ParamExpr; 4],
    pub d: [ParamExpr; 4],
    pub e: [ParamExpr; 12],
    pub f: [ParamExpr; 12],
    pub x: [ParamExpr; 8],
    pub y: [ParamExpr; 8],
}

// (family, first index, length)
const FAMILIES: [(&str, usize, usize); 8] =
    [("A", 1, 4), ("B", 5, 4), ("C", 1, 4), ("D", 5, 4), ("E", 1, 12), ("F", 1, 12), ("X", 1, 8), ("Y", 1, 8)];

impl RefinedTorsionSpin7 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbolic() -> Self {
        let mut rt = Self::zero();
        for n in Self::slot_names() {
            *rt.slot_mut(&n).expect("known slot") = ParamExpr::atom(&n);
        }
        rt
    }

    pub fn slot_names() -> Vec<String> {
        FAMILIES.iter().flat_map(|(f, lo, n)| (*lo..lo + n).map(move |i| format!("{f}{i}"))).collect()
    }

    fn family(&self, fam: &str) -> Option<&[ParamExpr]> {
        Some(match fam {
            "A" => &self.a,
            "B" => &self.b,
            "C" => &self.c,
            "D" => &self.d,
            "E" => &self.e,
            "F" => &self.f,
            "X" => &self.x,
            "Y" => &self.y,
            _ => return None,
        })
    }

    fn family_mut(&mut self, fam: &str) -> Option<&mut [ParamExpr]> {
        Some(match fam {
            "A" => &mut self.a,
            "B" => &mut self.b,
            "C" => &mut self.c,
            "D" => &mut self.d,
            "E" => &mut self.e,
            "F" => &mut self.f,
            "X" => &mut self.x,
            "Y" => &mut self.y,
            _ => return None,
        })
    }

    fn locate(name: &str) -> Option<(&'static str, usize)> {
        let cut = name.find(|c: char| c.is_ascii_digit())?;
        let (f, d) = name.split_at(cut);
        let idx: usize = d.parse().ok()?;
        let (fam, lo, n) = FAMILIES.iter().find(|(x, _, _)| *x == f)?;
        (idx >= *lo && idx < lo + n).then(|| (*fam, idx - lo))
    }

    pub fn slot(&self, name: &str) -> Option<&ParamExpr> {
        let (f, k) = Self::locate(name)?;
        self.family(f).map(|v| &v[k])
    }

    pub fn slot_mut(&mut self, name: &str) -> Option<&mut ParamExpr> {
        let (f, k) = Self::locate(name)?;
        self.family_mut(f).map(|v| &mut v[k])
    }

    pub fn with(mut self, name: &str, value: impl Into<ParamExpr>) -> Result<Self> {
        *self.slot_mut(name).ok_or_else(|| AlgebraError::Parse(format!("unknown refined torsion slot {name}")))? =
            value.into();
        Ok(self)
    }

    pub fn slots(&self) -> Vec<(String, ParamExpr)> {
        Self::slot_names().into_iter().map(|n| (n.clone(), self.slot(&n).unwrap().clone())).collect()
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut rt = Self::zero();
        for n in Self::slot_names() {
            *rt.slot_mut(&n).unwrap() = ParamExpr::constant(rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)));
        }
        rt
    }

    pub fn as_map(&self) -> BTreeMap<String, ParamExpr> {
        self.slots().into_iter().collect()
    }

    /// Nonzero families, by name.
    pub fn nonzero_families(&self) -> Vec<&'static str> {
        FAMILIES
            .iter()
            .filter(|(f, _, _)| self.family(f).unwrap().iter().any(|x| !x.is_zero_coeff()))
            .map(|(f, _, _)| *f)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("structure".into(), json!("spin7"));
        for (f, _, _) in FAMILIES {
            let v = self.family(f).unwrap();
            m.insert(f.into(), Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect()));
        }
        Value::Object(m)
    }

    /// Reads the JSON form; missing families default to zero, extra keys are rejected.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| AlgebraError::Parse("refined torsion must be a JSON object".into()))?;
        match obj.get("structure") {
            Some(s) if s != "spin7" => return Err(AlgebraError::Parse(format!("expected structure \"spin7\", got {s}"))),
            _ => {}
        }
        let mut rt = Self::zero();
        for (k, val) in obj {
            if k == "structure" {
                continue;
            }
            let (_, _, n) =
                FAMILIES.iter().find(|(f, _, _)| f == k).ok_or_else(|| AlgebraError::Parse(format!("unknown key {k:?}")))?;
            let arr = val
                .as_array()
                .filter(|a| a.len() == *n)
                .ok_or_else(|| AlgebraError::Parse(format!("{k} must have {n} entries")))?;
            let dst = rt.family_mut(k).unwrap();
            for (slot, x) in dst.iter_mut().zip(arr) {
                *slot = ParamExpr::from_json(x)?;
            }
        }
        Ok(rt)
    }
}

/// `τ₁` and `τ₃` with coefficients in `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionFormsSpin7<C: Coeff> {
    pub tau1: Multivector<C>,
    pub tau3: Multivector<C>,
}

/// The 7×8 matrix `T` with `γ_a = T_ai ω^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionMatrixSpin7 {
    pub entries: Vec<Vec<ParamExpr>>,
}

impl TorsionMatrixSpin7 {
    pub fn zero() -> Self {
        TorsionMatrixSpin7 { entries: vec![vec![ParamExpr::default(); DIM]; 7] }
    }

    /// 1-based access.
    pub fn get(&self, a: usize, i: usize) -> &ParamExpr {
        &self.entries[a - 1][i - 1]
    }

    pub fn to_json(&self) -> Value {
        param_matrix_to_json(&self.entries)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let entries = param_matrix_from_json(v)?;
        if entries.len() != 7 || entries.iter().any(|r| r.len() != DIM) {
            return Err(AlgebraError::Shape("T must be 7x8".into()));
        }
        Ok(TorsionMatrixSpin7 { entries })
    }

    pub fn substitute(&self, values: &BTreeMap<String, ParamExpr>) -> Self {
        TorsionMatrixSpin7 {
            entries: self.entries.iter().map(|r| r.iter().map(|x| x.substitute(|k| values.get(k).cloned())).collect()).collect(),
        }
    }

    fn flat(&self) -> Vec<ParamExpr> {
        self.entries.iter().flatten().cloned().collect()
    }
}

/// `τ₁ = 32A_p e^p + 32B_r e^r`, `τ₃ = 16C_qρ_q + 16D_sρ_s + 8E μ + 8F ν + 8X λ + 8Y κ`.
pub fn assemble_refined_spin7(rt: &RefinedTorsionSpin7) -> Result<TorsionFormsSpin7<ParamExpr>> {
    let b = &Sph4Refinement::standard().basis;
    let mut t1: Vec<(ParamExpr, Form)> = Vec::new();
    for k in 0..4 {
        t1.push((rt.a[k].scale(&int(32)), e(&[K_IDX[k]])));
        t1.push((rt.b[k].scale(&int(32)), e(&[L_IDX[k]])));
    }
    let mut t3: Vec<(ParamExpr, Form)> = Vec::new();
    for k in 0..4 {
        t3.push((rt.c[k].scale(&int(16)), b.rho[k].clone()));
        t3.push((rt.d[k].scale(&int(16)), b.rho[k + 4].clone()));
    }
    for k in 0..12 {
        t3.push((rt.e[k].scale(&int(8)), b.mu[k].clone()));
        t3.push((rt.f[k].scale(&int(8)), b.nu[k].clone()));
    }
    for k in 0..8 {
        t3.push((rt.x[k].scale(&int(8)), b.lambda[k].clone()));
        t3.push((rt.y[k].scale(&int(8)), b.kappa[k].clone()));
    }
    let comb = |grade: usize, parts: &[(ParamExpr, Form)]| {
        let refs: Vec<(ParamExpr, &Form)> = parts.iter().map(|(c, f)| (c.clone(), f)).collect();
        ParamForm::combination(DIM, grade, &refs)
    };
    let forms = TorsionFormsSpin7 { tau1: comb(1, &t1), tau3: comb(3, &t3) };
    let p = Spin7Structure::standard().projectors();
    if p.p3_48.apply_coeff(&forms.tau3.to_coords()) != forms.tau3.to_coords() {
        return Err(AlgebraError::OutsideModule("Λ³₄₈".into()));
    }
    Ok(forms)
}

/// `dω_i = −2 Σ_j (γ-pattern)_ij ∧ ω^j` with `γ_a = Σ_n t(a, n) ω^n`.
fn d_coframe(t: &dyn Fn(usize, usize) -> Rational) -> Vec<Form> {
    (1..=DIM)
        .map(|i| {
            let mut acc = Form::zero(DIM, 2);
            for j in 1..=DIM {
                let (a, s) = GAMMA_PATTERN[i - 1][j - 1];
                if a == 0 {
                    continue;
                }
                for n in 1..=DIM {
                    let tan = t(a, n);
                    if !tan.is_zero() && n != j {
                        acc.axpy(&(tan * int(-2 * s as i64)), &e(&[n, j]));
                    }
                }
            }
            acc
        })
        .collect()
}

/// `dΦ` for a rational 7×8 matrix `T`.
pub fn exterior_derivative(t: &Matrix) -> Form {
    let dom = d_coframe(&|a, n| t.get(a - 1, n - 1).clone());
    apply_derivation(&Spin7Structure::standard().phi0, &dom, true)
}

/// Generators of 𝔰𝔭𝔦𝔫(7) whose connection terms `dω = −θ∧ω` (with `θ = X ⊗ e^n`) fail to cancel in `dΦ`.
pub fn theta_cancellation_failures() -> Vec<String> {
    let s7 = Spin7Structure::standard();
    let mut bad = Vec::new();
    for (k, x) in s7.lie_algebra().iter().enumerate() {
        for n in 1..=DIM {
            let dom: Vec<Form> = (1..=DIM)
                .map(|i| {
                    let mut acc = Form::zero(DIM, 2);
                    for j in 1..=DIM {
                        let c = x.get(i - 1, j - 1);
                        if !c.is_zero() && n != j {
                            acc.axpy(&(-c.clone()), &e(&[n, j]));
                        }
                    }
                    acc
                })
                .collect();
            if !apply_derivation(&s7.phi0, &dom, true).is_zero() {
                bad.push(format!("generator {} with coframe {n}", k + 1));
            }
        }
    }
    bad
}

/// `τ₁∧Φ + ∗τ₃`.
pub fn structure_rhs(forms: &TorsionFormsSpin7<ParamExpr>) -> ParamForm {
    let s7 = Spin7Structure::standard();
    forms.tau1.wedge_form(&s7.phi0).unwrap().add(&forms.tau3.hodge())
}

/// The 56 coefficients of `dΦ` in the 56 unknowns `T_ai` (row-major).
#[derive(Debug, Clone)]
pub struct StructureSystemSpin7 {
    pub matrix: Matrix,
    pub rhs: Vec<ParamExpr>,
}

impl StructureSystemSpin7 {
    pub fn equations(&self) -> usize {
        self.matrix.rows()
    }

    pub fn unknowns(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

pub fn build_structure_system_spin7() -> StructureSystemSpin7 {
    let mut cols = Vec::with_capacity(56);
    for a in 1..=7 {
        for n in 1..=DIM {
            let mut t = Matrix::zeros(7, DIM);
            t.set(a - 1, n - 1, Rational::one());
            cols.push(exterior_derivative(&t).to_coords());
        }
    }
    let matrix = Matrix::from_cols(&cols, 56);
    let forms = assemble_refined_spin7(&RefinedTorsionSpin7::symbolic()).expect("symbolic assembly");
    StructureSystemSpin7 { matrix, rhs: structure_rhs(&forms).to_coords() }
}

#[derive(Debug)]
pub struct SolvedSystemSpin7 {
    pub system: StructureSystemSpin7,
    pub t_symbolic: TorsionMatrixSpin7,
    /// `vec(T) = forward · rt` in canonical slot order.
    pub forward: Matrix,
    pub inverse: Matrix,
}

pub fn solved_system_spin7() -> &'static SolvedSystemSpin7 {
    static S: OnceLock<SolvedSystemSpin7> = OnceLock::new();
    S.get_or_init(|| {
        let system = build_structure_system_spin7();
        let sol = solve_exact(&system.matrix, &system.rhs).unique().expect("the structure system has a unique solution");
        let t_symbolic = TorsionMatrixSpin7 { entries: sol.chunks(DIM).map(|r| r.to_vec()).collect() };
        let names = RefinedTorsionSpin7::slot_names();
        let mut forward = Matrix::zeros(56, names.len());
        for (r, x) in sol.iter().enumerate() {
            for (c, n) in names.iter().enumerate() {
                forward.set(r, c, x.coeff_of(n));
            }
        }
        let inverse = forward.inverse().expect("refined torsion and T determine each other");
        SolvedSystemSpin7 { system, t_symbolic, forward, inverse }
    })
}

pub fn solve_t_spin7(rt: &RefinedTorsionSpin7) -> TorsionMatrixSpin7 {
    solved_system_spin7().t_symbolic.substitute(&rt.as_map())
}

/// Solves the system afresh for one input.
pub fn solve_t_spin7_direct(rt: &RefinedTorsionSpin7) -> Result<TorsionMatrixSpin7> {
    let sys = &solved_system_spin7().system;
    let map = rt.as_map();
    let rhs: Vec<ParamExpr> = sys.rhs.iter().map(|x| x.substitute(|k| map.get(k).cloned())).collect();
    let sol = solve_exact(&sys.matrix, &rhs).unique()?;
    Ok(TorsionMatrixSpin7 { entries: sol.chunks(DIM).map(|r| r.to_vec()).collect() })
}

pub fn refined_from_t_spin7(t: &TorsionMatrixSpin7) -> RefinedTorsionSpin7 {
    let v = solved_system_spin7().inverse.apply_coeff(&t.flat());
    let mut rt = RefinedTorsionSpin7::zero();
    for (n, x) in RefinedTorsionSpin7::slot_names().iter().zip(v) {
        *rt.slot_mut(n).unwrap() = x;
    }
    rt
}

pub fn compare_printed_blocks_spin7() -> BlockComparison {
    let t = &solved_system_spin7().t_symbolic;
    PrintedBlocks::spin7().compare(|a, i| t.get(a, i).clone())
}

/// `τ₁, τ₃` read off `dΦ` for a given `T`: `τ₁ = (1/7) Σ ⟨dΦ, e^i∧Φ⟩ e^i`, `τ₃ = −∗(dΦ − τ₁∧Φ)`.
pub fn tau_from_t_spin7(t: &TorsionMatrixSpin7) -> TorsionFormsSpin7<ParamExpr> {
    let s7 = Spin7Structure::standard();
    let sys = &solved_system_spin7().system;
    let d = ParamForm::from_coords(DIM, 5, &sys.matrix.apply_coeff(&t.flat()));
    let mut tau1 = ParamForm::zero(DIM, 1);
    for i in 1..=DIM {
        let c = d.inner_form(&e(&[i]).wedge(&s7.phi0)).unwrap().scale(&rat(1, 7));
        tau1 = tau1.add(&ParamForm::monomial(DIM, &[i], c));
    }
    let rest = d.sub(&tau1.wedge_form(&s7.phi0).unwrap());
    TorsionFormsSpin7 { tau1, tau3: rest.hodge().neg() }
}

/// `H = −(τ₁)_L♯ − (√42/7) [(τ₃)_L]†` for the Cayley plane `span(e₁..e₄)`; equals `(−32B_r − 96D_r) e_r`.
pub fn mean_curvature_cayley(rt: &RefinedTorsionSpin7) -> Result<Vec<ParamExpr>> {
    let r = Sph4Refinement::standard();
    let forms = assemble_refined_spin7(rt)?;
    let t1l: Vec<ParamExpr> =
        (1..=DIM).map(|i| if L_IDX.contains(&i) { forms.tau1.get(&[i]) } else { ParamExpr::default() }).collect();
    let dag = r.iso_dagger(&r.component(&forms.tau3, "p48L")?)?.mul_surd(&Surd::new(rat(-1, 7), 42));
    let v = dag.rational().ok_or_else(|| AlgebraError::Invariant("radical did not cancel".into()))?;
    Ok(t1l.iter().zip(v).map(|(a, b)| a.neg().add(b)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CayleyMinimalityReport {
    /// All 56 coefficients vanish, i.e. `dΦ = 0`.
    pub torsion_free: bool,
    /// The adapted Cayley plane has `H = 0`.
    pub adapted_cayley_minimal: bool,
    /// Every Cayley plane is minimal exactly in the torsion-free case.
    pub all_cayleys_minimal: bool,
    pub nonzero_families: Vec<&'static str>,
}

pub fn cayley_minimality(rt: &RefinedTorsionSpin7) -> Result<CayleyMinimalityReport> {
    let nonzero = rt.nonzero_families();
    let torsion_free = nonzero.is_empty();
    Ok(CayleyMinimalityReport {
        torsion_free,
        adapted_cayley_minimal: mean_curvature_cayley(rt)?.iter().all(|x| x.is_zero_coeff()),
        all_cayleys_minimal: torsion_free,
        nonzero_families: nonzero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn only(name: &str) -> RefinedTorsionSpin7 {
        RefinedTorsionSpin7::zero().with(name, ParamExpr::constant(int(1))).unwrap()
    }

    #[test]
    fn slots_and_json() {
        assert_eq!(RefinedTorsionSpin7::slot_names().len(), 56);
        let rt = RefinedTorsionSpin7::symbolic();
        assert_eq!(RefinedTorsionSpin7::from_json(&rt.to_json()).unwrap(), rt);
        assert!(RefinedTorsionSpin7::from_json(&json!({"Q": [1]})).is_err());
        assert!(RefinedTorsionSpin7::from_json(&json!({"A": [1, 2]})).is_err());
        assert!(RefinedTorsionSpin7::zero().with("B9", ParamExpr::default()).is_err());
        assert!(RefinedTorsionSpin7::zero().slot("B4").is_none());
    }

    #[test]
    fn assembly() {
        let z = assemble_refined_spin7(&RefinedTorsionSpin7::zero()).unwrap();
        assert!(z.tau1.is_zero() && z.tau3.is_zero());
        let d = assemble_refined_spin7(&only("D5")).unwrap();
        assert_eq!(d.tau3, ParamForm::from_form(&crate::sph4_refine::rho(5).scale_int(16)));
        let x = assemble_refined_spin7(&only("X1")).unwrap();
        assert_eq!(x.tau3, ParamForm::from_form(&crate::sph4_refine::lambda(1).scale_int(8)));
    }

    #[test]
    fn system_and_theta() {
        let s = solved_system_spin7();
        assert_eq!((s.system.equations(), s.system.unknowns(), s.system.rank()), (56, 56, 56));
        assert!(theta_cancellation_failures().is_empty());
        let t = &s.t_symbolic;
        assert_eq!(t.get(1, 1), &ParamExpr::parse("2 Y5 - 4 C2 + A2").unwrap());
        assert_eq!(t.get(4, 1), &ParamExpr::parse("-2 E12 + E4 + 3 D5 + B5").unwrap());
        assert_eq!(solve_t_spin7(&RefinedTorsionSpin7::zero()), TorsionMatrixSpin7::zero());
    }

    #[test]
    fn printed_blocks() {
        let c = compare_printed_blocks_spin7();
        assert_eq!(c.checked, 56);
        assert!(c.diffs.is_empty(), "{:?}", c.diffs);
    }

    #[test]
    fn roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let rt = RefinedTorsionSpin7::random(&mut rng);
            let t = solve_t_spin7(&rt);
            assert_eq!(solve_t_spin7_direct(&rt).unwrap(), t);
            assert_eq!(refined_from_t_spin7(&t), rt);
            assert_eq!(tau_from_t_spin7(&t), assemble_refined_spin7(&rt).unwrap());
        }
    }

    #[test]
    fn mean_curvature() {
        let h = mean_curvature_cayley(&RefinedTorsionSpin7::symbolic()).unwrap();
        for r in L_IDX {
            assert_eq!(h[r - 1], ParamExpr::parse(&format!("-32 B{r} - 96 D{r}")).unwrap());
        }
        assert!(h[..4].iter().all(|x| x.is_zero_coeff()));
        let m = cayley_minimality(&only("E1")).unwrap();
        assert!(m.adapted_cayley_minimal && !m.torsion_free);
        assert!(cayley_minimality(&RefinedTorsionSpin7::zero()).unwrap().all_cayleys_minimal);
        let b = mean_curvature_cayley(&only("B5")).unwrap();
        assert_eq!(b[4], ParamExpr::constant(int(-32)));
    }
}
