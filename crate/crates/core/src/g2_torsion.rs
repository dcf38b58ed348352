//! Refined torsion of a G₂-structure relative to an associative split: the 49
//! coefficients, the torsion forms they assemble into, the linear system
//! relating them to the connection matrix `T`, and the mean curvature of the
//! adapted associative and coassociative planes.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::{AlgebraError, Result};
use crate::expr::{Coeff, ParamExpr};
use crate::g2_algebra::{e, G2Structure, DIM};
use crate::golden::{BlockComparison, PrintedBlocks};
use crate::multilinear::json::param_matrix_to_json;
use crate::multilinear::lie::{apply_derivation, so_basis, span_dim, trace_pairing};
use crate::multilinear::{solve_exact, Form, Matrix, Multivector, ParamForm};
use crate::rational::{int, rat, Rational, Surd};
use crate::so4_refine::{So4Refinement, A_IDX, C_IDX};

/// The 49 refined torsion coefficients. Index ranges follow the basis labels:
/// `A, C, E` over `1..=3`, `B, M` over `4..=7`, `D, L` over `1..=8`, `G` over `1..=5`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RefinedTorsionG2 {
    pub tau0: ParamExpr,
    pub a: [ParamExpr; 3],
    pub b: [ParamExpr; 4],
    pub c: [ParamExpr; 3],
    pub d: [ParamExpr; 8],
    pub e: [ParamExpr; 3],
    pub f: ParamExpr,
    pub g: [ParamExpr; 5],
    pub j: [[ParamExpr; 3]; 3],
    pub l: [ParamExpr; 8],
    pub m: [ParamExpr; 4],
}

// (family, first index, length)
const FAMILIES: [(&str, usize, usize); 9] =
    [("A", 1, 3), ("B", 4, 4), ("C", 1, 3), ("D", 1, 8), ("E", 1, 3), ("G", 1, 5), ("L", 1, 8), ("M", 4, 4), ("J", 1, 9)];

impl RefinedTorsionG2 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Every slot set to the atom of its own name.
    pub fn symbolic() -> Self {
        let mut rt = Self::zero();
        for n in Self::slot_names() {
            *rt.slot_mut(&n).expect("known slot") = ParamExpr::atom(&n);
        }
        rt
    }

    /// Slot names in canonical order: `tau0, A1..A3, B4..B7, C1..C3, D1..D8, E1..E3, F, G1..G5, J11..J33, L1..L8, M4..M7`.
    pub fn slot_names() -> Vec<String> {
        let mut out = vec!["tau0".to_string()];
        let fam = |out: &mut Vec<String>, f: &str, lo: usize, n: usize| out.extend((lo..lo + n).map(|i| format!("{f}{i}")));
        fam(&mut out, "A", 1, 3);
        fam(&mut out, "B", 4, 4);
        fam(&mut out, "C", 1, 3);
        fam(&mut out, "D", 1, 8);
        fam(&mut out, "E", 1, 3);
        out.push("F".into());
        fam(&mut out, "G", 1, 5);
        for p in 1..=3 {
            for q in 1..=3 {
                out.push(format!("J{p}{q}"));
            }
        }
        fam(&mut out, "L", 1, 8);
        fam(&mut out, "M", 4, 4);
        out
    }

    pub fn slot(&self, name: &str) -> Option<&ParamExpr> {
        if name == "tau0" {
            return Some(&self.tau0);
        }
        if name == "F" {
            return Some(&self.f);
        }
        let (fam, idx) = split_name(name)?;
        if fam == "J" {
            let (p, q) = (idx / 10, idx % 10);
            return ((1..=3).contains(&p) && (1..=3).contains(&q)).then(|| &self.j[p - 1][q - 1]);
        }
        let (_, lo, n) = FAMILIES.iter().find(|(f, _, _)| *f == fam)?;
        if idx < *lo || idx >= lo + n {
            return None;
        }
        let k = idx - lo;
        Some(match fam {
            "A" => &self.a[k],
            "B" => &self.b[k],
            "C" => &self.c[k],
            "D" => &self.d[k],
            "E" => &self.e[k],
            "G" => &self.g[k],
            "L" => &self.l[k],
            "M" => &self.m[k],
            _ => return None,
        })
    }

    pub fn slot_mut(&mut self, name: &str) -> Option<&mut ParamExpr> {
        if name == "tau0" {
            return Some(&mut self.tau0);
        }
        if name == "F" {
            return Some(&mut self.f);
        }
        let (fam, idx) = split_name(name)?;
        if fam == "J" {
            let (p, q) = (idx / 10, idx % 10);
            return if (1..=3).contains(&p) && (1..=3).contains(&q) { Some(&mut self.j[p - 1][q - 1]) } else { None };
        }
        let (_, lo, n) = FAMILIES.iter().find(|(f, _, _)| *f == fam)?;
        if idx < *lo || idx >= lo + n {
            return None;
        }
        let k = idx - lo;
        Some(match fam {
            "A" => &mut self.a[k],
            "B" => &mut self.b[k],
            "C" => &mut self.c[k],
            "D" => &mut self.d[k],
            "E" => &mut self.e[k],
            "G" => &mut self.g[k],
            "L" => &mut self.l[k],
            "M" => &mut self.m[k],
            _ => return None,
        })
    }

    /// Sets one slot; unknown names are an error.
    pub fn with(mut self, name: &str, value: impl Into<ParamExpr>) -> Result<Self> {
        *self.slot_mut(name).ok_or_else(|| AlgebraError::Parse(format!("unknown refined torsion slot {name}")))? =
            value.into();
        Ok(self)
    }

    pub fn slots(&self) -> Vec<(String, ParamExpr)> {
        Self::slot_names().into_iter().map(|n| (n.clone(), self.slot(&n).unwrap().clone())).collect()
    }

    /// Random small rational values in every slot.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut rt = Self::zero();
        for n in Self::slot_names() {
            let q = rat(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            *rt.slot_mut(&n).unwrap() = ParamExpr::constant(q);
        }
        rt
    }

    pub fn substitute(&self, values: &BTreeMap<String, ParamExpr>) -> Self {
        let mut out = self.clone();
        for n in Self::slot_names() {
            let s = out.slot_mut(&n).unwrap();
            *s = s.substitute(|k| values.get(k).cloned());
        }
        out
    }

    /// Slot values as a map, for substituting into expressions in the slot atoms.
    pub fn as_map(&self) -> BTreeMap<String, ParamExpr> {
        self.slots().into_iter().collect()
    }

    pub fn to_json(&self) -> Value {
        let s = |x: &ParamExpr| Value::String(x.to_string());
        let mut m = Map::new();
        m.insert("structure".into(), json!("g2"));
        m.insert("tau0".into(), s(&self.tau0));
        m.insert("F".into(), s(&self.f));
        for (name, v) in [("A", &self.a[..]), ("B", &self.b), ("C", &self.c), ("D", &self.d), ("E", &self.e), ("G", &self.g), ("L", &self.l), ("M", &self.m)] {
            m.insert(name.into(), Value::Array(v.iter().map(s).collect()));
        }
        m.insert("J".into(), Value::Array(self.j.iter().map(|r| Value::Array(r.iter().map(s).collect())).collect()));
        Value::Object(m)
    }

    /// Reads the JSON form; missing families default to zero, extra keys are rejected.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| AlgebraError::Parse("refined torsion must be a JSON object".into()))?;
        if let Some(s) = obj.get("structure") {
            if s != "g2" {
                return Err(AlgebraError::Parse(format!("expected structure \"g2\", got {s}")));
            }
        }
        let mut rt = Self::zero();
        for (k, val) in obj {
            match k.as_str() {
                "structure" => {}
                "tau0" | "F" => *rt.slot_mut(k).unwrap() = ParamExpr::from_json(val)?,
                "J" => {
                    let rows = val.as_array().filter(|r| r.len() == 3).ok_or_else(|| AlgebraError::Parse("J must be 3x3".into()))?;
                    for (p, row) in rows.iter().enumerate() {
                        let row = row.as_array().filter(|r| r.len() == 3).ok_or_else(|| AlgebraError::Parse("J must be 3x3".into()))?;
                        for (q, x) in row.iter().enumerate() {
                            rt.j[p][q] = ParamExpr::from_json(x)?;
                        }
                    }
                }
                fam => {
                    let (_, lo, n) = FAMILIES
                        .iter()
                        .find(|(f, _, _)| *f == fam && fam != "J")
                        .ok_or_else(|| AlgebraError::Parse(format!("unknown key {fam:?}")))?;
                    let arr = val
                        .as_array()
                        .filter(|a| a.len() == *n)
                        .ok_or_else(|| AlgebraError::Parse(format!("{fam} must have {n} entries")))?;
                    for (k, x) in arr.iter().enumerate() {
                        *rt.slot_mut(&format!("{fam}{}", lo + k)).unwrap() = ParamExpr::from_json(x)?;
                    }
                }
            }
        }
        Ok(rt)
    }
}

fn split_name(name: &str) -> Option<(&str, usize)> {
    let cut = name.find(|c: char| c.is_ascii_digit())?;
    let (f, d) = name.split_at(cut);
    Some((f, d.parse().ok()?))
}

/// `τ₀, τ₁, τ₂, τ₃` with coefficients in `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionForms<C: Coeff> {
    pub tau0: C,
    pub tau1: Multivector<C>,
    pub tau2: Multivector<C>,
    pub tau3: Multivector<C>,
}

impl TorsionForms<ParamExpr> {
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> TorsionForms<Rational> {
        TorsionForms {
            tau0: self.tau0.eval(values),
            tau1: self.tau1.eval(values),
            tau2: self.tau2.eval(values),
            tau3: self.tau3.eval(values),
        }
    }
}

/// The 7×7 matrix `T` with `γ_i = T_ij ω^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionMatrixG2 {
    pub entries: Vec<Vec<ParamExpr>>,
}

impl TorsionMatrixG2 {
    pub fn zero() -> Self {
        TorsionMatrixG2 { entries: vec![vec![ParamExpr::default(); DIM]; DIM] }
    }

    pub fn from_rational(m: &Matrix) -> Result<Self> {
        if m.rows() != DIM || m.cols() != DIM {
            return Err(AlgebraError::Shape("T must be 7x7".into()));
        }
        Ok(TorsionMatrixG2 {
            entries: m.to_rows().into_iter().map(|r| r.into_iter().map(ParamExpr::constant).collect()).collect(),
        })
    }

    /// 1-based access.
    pub fn get(&self, i: usize, j: usize) -> &ParamExpr {
        &self.entries[i - 1][j - 1]
    }

    pub fn trace(&self) -> ParamExpr {
        (1..=DIM).fold(ParamExpr::default(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn to_json(&self) -> Value {
        param_matrix_to_json(&self.entries)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let entries = crate::multilinear::json::param_matrix_from_json(v)?;
        if entries.len() != DIM || entries.iter().any(|r| r.len() != DIM) {
            return Err(AlgebraError::Shape("T must be 7x7".into()));
        }
        Ok(TorsionMatrixG2 { entries })
    }

    pub fn substitute(&self, values: &BTreeMap<String, ParamExpr>) -> Self {
        TorsionMatrixG2 {
            entries: self.entries.iter().map(|r| r.iter().map(|x| x.substitute(|k| values.get(k).cloned())).collect()).collect(),
        }
    }

    fn flat(&self) -> Vec<ParamExpr> {
        self.entries.iter().flatten().cloned().collect()
    }
}

/// Builds `τ₀..τ₃` from the refined coefficients in the standard split frame.
pub fn assemble_refined(rt: &RefinedTorsionG2) -> Result<TorsionForms<ParamExpr>> {
    let b = &So4Refinement::standard().basis;
    let mut t1: Vec<(ParamExpr, Form)> = Vec::new();
    for (k, &p) in A_IDX.iter().enumerate() {
        t1.push((rt.a[k].scale(&int(6)), e(&[p])));
    }
    for (k, &a) in C_IDX.iter().enumerate() {
        t1.push((rt.b[k].scale(&int(6)), e(&[a])));
    }
    let mut t2: Vec<(ParamExpr, Form)> = Vec::new();
    for k in 0..3 {
        t2.push((rt.c[k].scale(&int(12)), b.gamma[k].clone()));
        t2.push((rt.e[k].scale(&int(12)), b.omega[k].clone()));
    }
    for k in 0..8 {
        t2.push((rt.d[k].scale(&int(12)), b.delta[k].clone()));
    }
    let mut t3: Vec<(ParamExpr, Form)> = vec![(rt.f.scale(&int(12)), b.phi00())];
    for k in 0..5 {
        t3.push((rt.g[k].scale(&int(6)), b.kappa[k].clone()));
    }
    for p in 0..3 {
        for q in 0..3 {
            t3.push((rt.j[p][q].scale(&int(12)), b.lambda[p][q].clone()));
        }
    }
    for k in 0..8 {
        t3.push((rt.l[k].scale(&int(12)), b.mu[k].clone()));
    }
    for k in 0..4 {
        t3.push((rt.m[k].scale(&int(6)), b.nu[k].clone()));
    }
    let comb = |grade: usize, parts: &[(ParamExpr, Form)]| {
        let refs: Vec<(ParamExpr, &Form)> = parts.iter().map(|(c, f)| (c.clone(), f)).collect();
        ParamForm::combination(DIM, grade, &refs)
    };
    let forms = TorsionForms { tau0: rt.tau0.clone(), tau1: comb(1, &t1), tau2: comb(2, &t2), tau3: comb(3, &t3) };
    let p = G2Structure::standard().projectors();
    if p.p2_14.apply_coeff(&forms.tau2.to_coords()) != forms.tau2.to_coords() {
        return Err(AlgebraError::OutsideModule("Λ²₁₄".into()));
    }
    if p.p3_27.apply_coeff(&forms.tau3.to_coords()) != forms.tau3.to_coords() {
        return Err(AlgebraError::OutsideModule("Λ³₂₇".into()));
    }
    Ok(forms)
}

/// The first structure equation, expanded: 35 equations from `dφ` and 21 from `d∗φ`,
/// linear in the 49 entries `T_ij` (row-major), with right-hand side in the refined atoms.
#[derive(Debug, Clone)]
pub struct StructureSystem {
    pub matrix: Matrix,
    pub rhs: Vec<ParamExpr>,
}

impl StructureSystem {
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

/// `dω_i` for the unit connection matrix with a single `T_kn = 1`: `dω_i = −2 ε_ijk γ_k ∧ ω^j`.
fn d_coframe(g2: &G2Structure, t: &dyn Fn(usize, usize) -> Rational) -> Vec<Form> {
    (1..=DIM)
        .map(|i| {
            let mut acc = Form::zero(DIM, 2);
            for j in 1..=DIM {
                for k in 1..=DIM {
                    let c = g2.eps(i, j, k);
                    if c == 0 {
                        continue;
                    }
                    for n in 1..=DIM {
                        let tkn = t(k, n);
                        if !tkn.is_zero() && n != j {
                            acc.axpy(&(tkn * int(-2 * c)), &e(&[n, j]));
                        }
                    }
                }
            }
            acc
        })
        .collect()
}

/// `(dφ, d∗φ)` for a rational connection matrix.
pub fn exterior_derivatives(t: &Matrix) -> (Form, Form) {
    let g2 = G2Structure::standard();
    let dom = d_coframe(g2, &|k, n| t.get(k - 1, n - 1).clone());
    (apply_derivation(&g2.phi0, &dom, true), apply_derivation(&g2.star_phi0, &dom, true))
}

/// The right-hand sides `τ₀∗φ + 3τ₁∧φ + ∗τ₃` and `4τ₁∧∗φ + τ₂∧φ`.
pub fn structure_rhs(forms: &TorsionForms<ParamExpr>) -> (ParamForm, ParamForm) {
    let g2 = G2Structure::standard();
    let four = ParamForm::from_form(&g2.star_phi0)
        .map_coeffs(|c| forms.tau0.scale(&c.constant))
        .add(&forms.tau1.wedge_form(&g2.phi0).unwrap().scale(&int(3)))
        .add(&forms.tau3.hodge());
    let five = forms.tau1.wedge_form(&g2.star_phi0).unwrap().scale(&int(4)).add(&forms.tau2.wedge_form(&g2.phi0).unwrap());
    (four, five)
}

pub fn build_structure_system() -> StructureSystem {
    let mut cols = Vec::with_capacity(DIM * DIM);
    for k in 1..=DIM {
        for n in 1..=DIM {
            let mut t = Matrix::zeros(DIM, DIM);
            t.set(k - 1, n - 1, Rational::one());
            let (d4, d5) = exterior_derivatives(&t);
            let mut col = d4.to_coords();
            col.extend(d5.to_coords());
            cols.push(col);
        }
    }
    let matrix = Matrix::from_cols(&cols, 56);
    let forms = assemble_refined(&RefinedTorsionG2::symbolic()).expect("symbolic assembly");
    let (four, five) = structure_rhs(&forms);
    let mut rhs = four.to_coords();
    rhs.extend(five.to_coords());
    StructureSystem { matrix, rhs }
}

/// The structure system solved once in the symbolic refined atoms.
#[derive(Debug)]
pub struct SolvedSystemG2 {
    pub system: StructureSystem,
    pub t_symbolic: TorsionMatrixG2,
    /// `vec(T) = forward · rt` in canonical slot order.
    pub forward: Matrix,
    pub inverse: Matrix,
}

static SOLVED: OnceLock<SolvedSystemG2> = OnceLock::new();

pub fn solved_system() -> &'static SolvedSystemG2 {
    SOLVED.get_or_init(|| {
        let system = build_structure_system();
        let sol = solve_exact(&system.matrix, &system.rhs).unique().expect("the structure system has a unique solution");
        let t_symbolic = TorsionMatrixG2 { entries: sol.chunks(DIM).map(|r| r.to_vec()).collect() };
        let names = RefinedTorsionG2::slot_names();
        let mut forward = Matrix::zeros(DIM * DIM, names.len());
        for (r, x) in sol.iter().enumerate() {
            for (c, n) in names.iter().enumerate() {
                forward.set(r, c, x.coeff_of(n));
            }
        }
        let inverse = forward.inverse().expect("refined torsion and T determine each other");
        SolvedSystemG2 { system, t_symbolic, forward, inverse }
    })
}

/// The unique `T` solving the structure equation for the given refined torsion.
pub fn solve_t(rt: &RefinedTorsionG2) -> TorsionMatrixG2 {
    solved_system().t_symbolic.substitute(&rt.as_map())
}

/// Solves the system afresh for one input, without the cached symbolic solution.
pub fn solve_t_direct(rt: &RefinedTorsionG2) -> Result<TorsionMatrixG2> {
    let sys = &solved_system().system;
    let map = rt.as_map();
    let rhs: Vec<ParamExpr> = sys.rhs.iter().map(|x| x.substitute(|k| map.get(k).cloned())).collect();
    let sol = solve_exact(&sys.matrix, &rhs).unique()?;
    Ok(TorsionMatrixG2 { entries: sol.chunks(DIM).map(|r| r.to_vec()).collect() })
}

/// `ε_αβp T_βp` (sum over `β ∈ C`, `p ∈ A`) in the solved symbolic `T`, for `α ∈ 4..=7`.
pub fn cross_relation(alpha: usize) -> ParamExpr {
    let g2 = G2Structure::standard();
    let t = &solved_system().t_symbolic;
    let mut s = ParamExpr::default();
    for b in C_IDX {
        for p in A_IDX {
            s = s.add(&t.get(b, p).scale(&int(g2.eps(alpha, b, p))));
        }
    }
    s
}

/// The antisymmetric C-block combinations
/// `−(T45 − T54) − (T67 − T76)`, `(T57 − T75) − (T46 − T64)`, `(T47 − T74) + (T56 − T65)`.
pub fn c_block_relation(p: usize) -> ParamExpr {
    let t = &solved_system().t_symbolic;
    let a = |i: usize, j: usize| t.get(i, j).sub(t.get(j, i));
    match p {
        1 => a(4, 5).add(&a(6, 7)).neg(),
        2 => a(5, 7).sub(&a(4, 6)),
        3 => a(4, 7).add(&a(5, 6)),
        _ => panic!("p in 1..=3"),
    }
}

/// The refined coefficients of a connection matrix.
pub fn refined_from_t(t: &TorsionMatrixG2) -> RefinedTorsionG2 {
    let s = solved_system();
    let v = s.inverse.apply_coeff(&t.flat());
    let mut rt = RefinedTorsionG2::zero();
    for (n, x) in RefinedTorsionG2::slot_names().iter().zip(v) {
        *rt.slot_mut(n).unwrap() = x;
    }
    rt
}

/// The solved `T` block-compared with the printed display.
pub fn compare_printed_blocks() -> BlockComparison {
    let t = &solved_system().t_symbolic;
    PrintedBlocks::g2().compare(|i, j| t.get(i, j).clone())
}

/// Torsion forms read off `T` directly:
/// `τ₀ = (24/7) tr T`, `τ₁ = ε_ijk T_ij e^k`, `τ₂ = 4T_ij e^{ij} − ε_ijkl T_ij e^{kl}`,
/// `τ₃ = −(3/2) ε_ikl (T_ij + T_ji) e^{jkl} + (18/7) tr T φ`.
pub fn bryant_tau_from_t(t: &TorsionMatrixG2) -> TorsionForms<ParamExpr> {
    let g2 = G2Structure::standard();
    let tr = t.trace();
    let mut tau1 = ParamForm::zero(DIM, 1);
    let mut tau2 = ParamForm::zero(DIM, 2);
    let mut tau3 = ParamForm::zero(DIM, 3);
    for i in 1..=DIM {
        for j in 1..=DIM {
            let tij = t.get(i, j);
            if i != j {
                tau2 = tau2.add(&ParamForm::monomial(DIM, &[i, j], tij.scale(&int(4))));
            }
            let sym = tij.add(t.get(j, i)).scale(&rat(-3, 2));
            for k in 1..=DIM {
                let c = g2.eps(i, j, k);
                if c != 0 {
                    tau1 = tau1.add(&ParamForm::monomial(DIM, &[k], tij.scale(&int(c))));
                }
                for l in 1..=DIM {
                    let c4 = g2.eps4(i, j, k, l);
                    if c4 != 0 {
                        tau2 = tau2.add(&ParamForm::monomial(DIM, &[k, l], tij.scale(&int(-c4))));
                    }
                    let c3 = g2.eps(i, k, l);
                    if c3 != 0 && j != k && j != l {
                        tau3 = tau3.add(&ParamForm::monomial(DIM, &[j, k, l], sym.scale(&int(c3))));
                    }
                }
            }
        }
    }
    let phi = ParamForm::from_form(&g2.phi0).map_coeffs(|c| tr.scale(&(&c.constant * rat(18, 7))));
    TorsionForms { tau0: tr.scale(&rat(24, 7)), tau1, tau2, tau3: tau3.add(&phi) }
}

/// `3F + τ₀/24`; it vanishes exactly when the structure admits coassociative planes compatible with the split.
pub fn coassoc_obstruction(rt: &RefinedTorsionG2) -> ParamExpr {
    rt.f.scale(&int(3)).add(&rt.tau0.scale(&rat(1, 24)))
}

/// `τ₀ + (√42/7)·[(τ₃)₀,₀]†`, computed through the isometry; equals `24·(3F + τ₀/24)`.
pub fn coassoc_obstruction_via_dagger(rt: &RefinedTorsionG2) -> Result<ParamExpr> {
    let r = So4Refinement::standard();
    let forms = assemble_refined(rt)?;
    let part = r.component(&forms.tau3, "p27_00")?;
    let d = r.iso_dagger(&part)?.mul_surd(&Surd::new(rat(1, 7), 42));
    let v = d.rational().ok_or_else(|| AlgebraError::Invariant("radical did not cancel".into()))?;
    Ok(forms.tau0.add(&v[0]))
}

/// The rational factor `c` with `T44 + T55 + T66 + T77 = c·(3F + τ₀/24)`.
pub fn coassoc_trace_factor() -> Result<Rational> {
    let t = &solved_system().t_symbolic;
    let s = (4..=7).fold(ParamExpr::default(), |acc, i| acc.add(t.get(i, i)));
    let base = coassoc_obstruction(&RefinedTorsionG2::symbolic());
    let c = s.coeff_of("F") / base.coeff_of("F");
    if s == base.scale(&c) {
        Ok(c)
    } else {
        Err(AlgebraError::Invariant(format!("coassociative trace {s} is not a multiple of {base}")))
    }
}

fn split_tau1(tau1: &ParamForm, idx: &[usize]) -> Vec<ParamExpr> {
    (1..=DIM).map(|i| if idx.contains(&i) { tau1.get(&[i]) } else { ParamExpr::default() }).collect()
}

/// `H = −3 (τ₁)_C♯ − (√3/2) [(τ₃)_C]‡` for the associative plane `span(e₁, e₂, e₃)`; equals `−18(B_α + M_α) e_α`.
pub fn mean_curvature_associative(rt: &RefinedTorsionG2) -> Result<Vec<ParamExpr>> {
    let r = So4Refinement::standard();
    let forms = assemble_refined(rt)?;
    let t1c = split_tau1(&forms.tau1, &C_IDX);
    let dd = r.iso_ddagger(&r.component(&forms.tau3, "p27_C")?)?.mul_surd(&Surd::new(rat(-1, 2), 3));
    let v = dd.rational().ok_or_else(|| AlgebraError::Invariant("radical did not cancel".into()))?;
    Ok(t1c.iter().zip(v).map(|(a, b)| a.scale(&int(-3)).add(b)).collect())
}

/// `H = −4 (τ₁)_A♯ + (√6/3) [(τ₂)_A]♮` for the coassociative plane `span(e₄..e₇)`; equals `(−24A_p + 24C_p) e_p`.
pub fn mean_curvature_coassociative(rt: &RefinedTorsionG2) -> Result<Vec<ParamExpr>> {
    let r = So4Refinement::standard();
    let forms = assemble_refined(rt)?;
    let t1a = split_tau1(&forms.tau1, &A_IDX);
    let nat = r.iso_natural(&r.component(&forms.tau2, "p14A")?)?.mul_surd(&Surd::new(rat(1, 3), 6));
    let v = nat.rational().ok_or_else(|| AlgebraError::Invariant("radical did not cancel".into()))?;
    Ok(t1a.iter().zip(v).map(|(a, b)| a.scale(&int(-4)).add(b)).collect())
}

/// Which torsion components vanish, and what that says about the adapted planes.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalityReport {
    /// `τ₁ = τ₃ = 0`, i.e. `dφ = τ₀ ∗φ`: every associative is minimal.
    pub associatives_minimal: bool,
    /// `τ₁ = τ₂ = 0`, i.e. `d∗φ = 0`: every coassociative is minimal.
    pub coassociatives_minimal: bool,
    /// The adapted associative plane has `H = 0`.
    pub adapted_associative_minimal: bool,
    /// The adapted coassociative plane has `H = 0`.
    pub adapted_coassociative_minimal: bool,
    /// Sum of the Gray–Hervella classes with nonzero component, or `"parallel"`.
    pub class: String,
}

pub fn minimality_class(rt: &RefinedTorsionG2) -> Result<MinimalityReport> {
    fn zero(xs: &[ParamExpr]) -> bool {
        xs.iter().all(|x| x.is_zero_coeff())
    }
    let j: Vec<ParamExpr> = rt.j.iter().flatten().cloned().collect();
    let t0 = zero(std::slice::from_ref(&rt.tau0));
    let t1 = zero(&rt.a) && zero(&rt.b);
    let t2 = zero(&rt.c) && zero(&rt.d) && zero(&rt.e);
    let t3 = rt.f.is_zero_coeff() && zero(&rt.g) && zero(&j) && zero(&rt.l) && zero(&rt.m);
    let names: Vec<&str> = [(t0, "W1"), (t1, "W7"), (t2, "W14"), (t3, "W27")]
        .iter()
        .filter(|(z, _)| !z)
        .map(|(_, n)| *n)
        .collect();
    Ok(MinimalityReport {
        associatives_minimal: t1 && t3,
        coassociatives_minimal: t1 && t2,
        adapted_associative_minimal: mean_curvature_associative(rt)?.iter().all(|x| x.is_zero_coeff()),
        adapted_coassociative_minimal: mean_curvature_coassociative(rt)?.iter().all(|x| x.is_zero_coeff()),
        class: if names.is_empty() { "parallel".into() } else { names.join(" + ") },
    })
}

/// `v ↦ (ε_ijk v_k)`, the complement of 𝔤₂ in 𝔰𝔬(7).
#[derive(Debug, Clone, Copy, Default)]
pub struct GammaEmbedding;

impl GammaEmbedding {
    pub fn apply(&self, v: &[Rational]) -> Result<Matrix> {
        if v.len() != DIM {
            return Err(AlgebraError::DimMismatch(v.len(), DIM));
        }
        let g2 = G2Structure::standard();
        let mut m = Matrix::zeros(DIM, DIM);
        for i in 1..=DIM {
            for j in 1..=DIM {
                let s = (1..=DIM).fold(Rational::zero(), |acc, k| acc + &v[k - 1] * int(g2.eps(i, j, k)));
                m.set(i - 1, j - 1, s);
            }
        }
        Ok(m)
    }

    pub fn image_basis(&self) -> Vec<Matrix> {
        (1..=DIM).map(|k| self.apply(&crate::multilinear::unit(DIM, k)).unwrap()).collect()
    }

    /// Image orthogonal to 𝔤₂ under the trace pairing, and the two together span 𝔰𝔬(7).
    pub fn complements_g2(&self) -> bool {
        let g = G2Structure::standard().lie_algebra();
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
    use rand::SeedableRng;

    fn only(name: &str) -> RefinedTorsionG2 {
        RefinedTorsionG2::zero().with(name, ParamExpr::constant(int(1))).unwrap()
    }

    #[test]
    fn slots() {
        let names = RefinedTorsionG2::slot_names();
        assert_eq!(names.len(), 49);
        let rt = RefinedTorsionG2::symbolic();
        assert_eq!(rt.slot("J23"), Some(&ParamExpr::atom("J23")));
        assert_eq!(rt.slot("B7"), Some(&ParamExpr::atom("B7")));
        assert!(rt.slot("B3").is_none());
        let back = RefinedTorsionG2::from_json(&rt.to_json()).unwrap();
        assert_eq!(back, rt);
    }

    #[test]
    fn assembly() {
        let z = assemble_refined(&RefinedTorsionG2::zero()).unwrap();
        assert!(z.tau1.is_zero() && z.tau2.is_zero() && z.tau3.is_zero());
        let f = assemble_refined(&only("F")).unwrap();
        let b = &So4Refinement::standard().basis;
        assert_eq!(f.tau3, ParamForm::from_form(&b.phi00().scale_int(12)));
        let c = assemble_refined(&only("C1")).unwrap();
        assert_eq!(c.tau2, ParamForm::from_form(&b.gamma[0].scale_int(12)));
    }

    #[test]
    fn system_shape_and_solution() {
        let s = solved_system();
        assert_eq!((s.system.equations(), s.system.unknowns(), s.system.rank()), (56, 49, 49));
        let t = solve_t(&only("tau0"));
        for i in 1..=7 {
            for j in 1..=7 {
                let want = if i == j { ParamExpr::constant(rat(1, 24)) } else { ParamExpr::default() };
                assert_eq!(t.get(i, j), &want);
            }
        }
        let ts = &s.t_symbolic;
        let anti = ts.get(2, 1).sub(ts.get(1, 2)).scale(&rat(1, 2));
        assert_eq!(anti, ParamExpr::parse("-(A3 + 2C3)").unwrap());
    }

    #[test]
    fn cross_product_relation() {
        let g2 = G2Structure::standard();
        let t = &solved_system().t_symbolic;
        for a in 4..=7 {
            let mut s = ParamExpr::default();
            for b in 4..=7 {
                for p in 1..=3 {
                    s = s.add(&t.get(b, p).scale(&int(g2.eps(a, b, p))));
                }
            }
            // the mean-curvature computation needs +3; the stated relation carries the opposite sign
            assert_eq!(s, ParamExpr::parse(&format!("3B{a} + 3M{a}")).unwrap());
            assert_eq!(s, cross_relation(a));
        }
    }

    #[test]
    fn c_block_relations() {
        let sym = RefinedTorsionG2::symbolic();
        for p in 1..=3 {
            let want = sym.a[p - 1].sub(&sym.c[p - 1]).scale(&int(-4));
            assert_eq!(c_block_relation(p), want);
        }
    }

    #[test]
    fn roundtrip_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let rt = RefinedTorsionG2::random(&mut rng);
            let t = solve_t(&rt);
            assert_eq!(solve_t_direct(&rt).unwrap(), t);
            assert_eq!(bryant_tau_from_t(&t), assemble_refined(&rt).unwrap());
            assert_eq!(refined_from_t(&t), rt);
        }
    }

    #[test]
    fn bryant_identity() {
        let t = TorsionMatrixG2::from_rational(&Matrix::identity(7)).unwrap();
        assert_eq!(bryant_tau_from_t(&t).tau0, ParamExpr::constant(int(24)));
    }

    #[test]
    fn obstruction() {
        assert_eq!(coassoc_obstruction(&only("tau0")), ParamExpr::constant(rat(1, 24)));
        let rt = only("F").with("tau0", ParamExpr::constant(int(-72))).unwrap();
        assert!(coassoc_obstruction(&rt).is_zero_coeff());
        let sym = RefinedTorsionG2::symbolic();
        assert_eq!(coassoc_obstruction_via_dagger(&sym).unwrap(), coassoc_obstruction(&sym).scale(&int(24)));
        assert_eq!(coassoc_trace_factor().unwrap(), int(4));
    }

    #[test]
    fn mean_curvatures() {
        let sym = RefinedTorsionG2::symbolic();
        let h = mean_curvature_associative(&sym).unwrap();
        for a in 4..=7 {
            assert_eq!(h[a - 1], ParamExpr::parse(&format!("-18B{a} - 18M{a}")).unwrap());
        }
        let h = mean_curvature_coassociative(&sym).unwrap();
        for p in 1..=3 {
            assert_eq!(h[p - 1], ParamExpr::parse(&format!("-24A{p} + 24C{p}")).unwrap());
        }
        assert_eq!(mean_curvature_associative(&only("B4")).unwrap()[3], ParamExpr::constant(int(-18)));
    }

    #[test]
    fn minimality() {
        let r = minimality_class(&only("tau0")).unwrap();
        assert!(r.associatives_minimal && r.coassociatives_minimal);
        assert_eq!(r.class, "W1");
        let r = minimality_class(&only("D2")).unwrap();
        assert!(r.associatives_minimal && !r.coassociatives_minimal);
        assert!(!minimality_class(&only("G1")).unwrap().associatives_minimal);
    }

    #[test]
    fn embedding() {
        assert!(GammaEmbedding.complements_g2());
    }

    #[test]
    fn printed_blocks() {
        let cmp = compare_printed_blocks();
        assert_eq!(cmp.checked, 9 + 9 + 12 + 12 + 16 + 16);
        assert_eq!(cmp.diffs.len(), 2);
        assert!(cmp.is_clean_modulo_allowlist());
    }
}
