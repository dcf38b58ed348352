//! Verification suites. Every identity the crate reproduces becomes one named check; known misprints in the
//! reference formulas are recorded as `documented-typo` with the derived correction instead of failing.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{AlgebraError, Result};
use crate::expr::{Coeff, ParamExpr};
use crate::frame_relations::{CombinationStatus, DerivationReport, Family};
use crate::g2_algebra::{self, G2Structure};
use crate::g2_torsion::{self as g2t, RefinedTorsionG2};
use crate::golden::PrintedBlocks;
use crate::multilinear::{pretty, sampled_comass, unit, Form, Matrix, SymTensor};
use crate::rational::{int, rat, Rational};
use crate::so4_refine::{self as so4, RefinedBasisG2, So4Refinement};
use crate::sph4_refine::{self as sph4, RefinedBasisSpin7, Sph4Refinement};
use crate::spin7_algebra::{self, GammaEmbedding8, Spin7Structure};
use crate::spin7_torsion::{self as s7t, RefinedTorsionSpin7};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const RANDOM_PLANES: usize = 100;
pub const ROUNDTRIPS: usize = 20;
pub const COMASS_SAMPLES: usize = 10_000;
pub const COMASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    DocumentedTypo,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DocumentedTypo => "documented-typo",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    /// The derived correction, for documented typos.
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub documented_typo: usize,
}

impl Totals {
    pub fn total(&self) -> usize {
        self.pass + self.fail + self.documented_typo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    G2,
    Spin7,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::G2 => "g2",
            Suite::Spin7 => "spin7",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "g2" => Ok(Suite::G2),
            "spin7" => Ok(Suite::Spin7),
            "all" => Ok(Suite::All),
            _ => Err(AlgebraError::Parse(format!("unknown suite {s:?} (expected g2, spin7 or all)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Replaces the model 3-form in the G₂ algebra checks. Used for fault injection.
    pub g2_form: Option<Form>,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { g2_form: None, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn totals(&self) -> Totals {
        let mut t = Totals::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
                Status::DocumentedTypo => t.documented_typo += 1,
            }
        }
        t
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }

    pub fn documented_typos(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::DocumentedTypo).collect()
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn success(&self) -> bool {
        self.totals().fail == 0
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.success() {
            0
        } else {
            1
        }
    }

    /// Deterministic: elapsed time is left out so identical builds give identical bytes.
    pub fn to_json(&self) -> Value {
        let t = self.totals();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = json!({"id": c.id, "status": c.status.as_str(), "expected": c.expected, "actual": c.actual});
                if let Some(n) = &c.note {
                    v["note"] = json!(n);
                }
                v
            })
            .collect();
        json!({
            "suite": self.suite.name(),
            "checks": checks,
            "totals": {"pass": t.pass, "fail": t.fail, "documented_typo": t.documented_typo, "total": t.total()},
            "ok": self.success(),
        })
    }

    pub fn to_text(&self, quiet: bool) -> String {
        let mut s = String::new();
        for c in &self.checks {
            if quiet && c.status == Status::Pass {
                continue;
            }
            s.push_str(&format!("[{:>15}] {}", c.status.as_str(), c.id));
            if c.status != Status::Pass {
                s.push_str(&format!("\n    expected: {}\n    actual:   {}", c.expected, c.actual));
                if let Some(n) = &c.note {
                    s.push_str(&format!("\n    note:     {n}"));
                }
            }
            s.push('\n');
        }
        let t = self.totals();
        s.push_str(&format!(
            "suite {}: {} checks, {} pass, {} fail, {} documented-typo ({:.1}s)\n",
            self.suite.name(),
            t.total(),
            t.pass,
            t.fail,
            t.documented_typo,
            self.elapsed.as_secs_f64()
        ));
        s
    }
}

/// What a misprint check found: whether the derived correction holds and the printed form is wrong.
struct Finding {
    confirmed: bool,
    printed: String,
    derived: String,
    note: String,
}

#[derive(Default)]
struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, id: &str, ok: bool, expected: impl fmt::Display, actual: impl fmt::Display) {
        self.checks.push(Check {
            id: id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected: expected.to_string(),
            actual: actual.to_string(),
            note: None,
        });
    }

    fn run<F: FnOnce() -> Result<(bool, String, String)>>(&mut self, id: &str, f: F) {
        match f() {
            Ok((ok, e, a)) => self.push(id, ok, e, a),
            Err(err) => self.push(id, false, "no error", format!("error: {err}")),
        }
    }

    fn typo<F: FnOnce() -> Result<Finding>>(&mut self, id: &str, f: F) {
        match f() {
            Ok(fd) => self.checks.push(Check {
                id: id.into(),
                status: if fd.confirmed { Status::DocumentedTypo } else { Status::Fail },
                expected: fd.printed,
                actual: fd.derived,
                note: Some(fd.note),
            }),
            Err(err) => self.push(id, false, "no error", format!("error: {err}")),
        }
    }
}

fn yes_no(b: bool) -> String {
    if b { "true" } else { "false" }.into()
}

fn list(xs: &[String]) -> String {
    if xs.is_empty() {
        "none".into()
    } else {
        xs.join("; ")
    }
}

fn ranks_string(xs: &[(&str, usize)]) -> String {
    xs.iter().map(|(n, r)| format!("{n}:{r}")).collect::<Vec<_>>().join(" ")
}

fn random_frame<R: Rng>(rng: &mut R, dim: usize, k: usize) -> Vec<Vec<Rational>> {
    loop {
        let vs: Vec<Vec<Rational>> = (0..k).map(|_| (0..dim).map(|_| int(rng.gen_range(-5..=5))).collect()).collect();
        if Matrix::from_rows(&vs).rank() == k {
            return vs;
        }
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let mut rec = Recorder::default();
    if matches!(suite, Suite::G2 | Suite::All) {
        let custom = opts.g2_form.clone().map(G2Structure::from_phi);
        match custom {
            Some(Ok(g)) => g2_algebra_checks(&mut rec, &g, opts.seed),
            Some(Err(e)) => rec.push("g2.form", false, "a 3-form on R^7", format!("error: {e}")),
            None => g2_algebra_checks(&mut rec, G2Structure::standard(), opts.seed),
        }
        so4_checks(&mut rec);
        g2_torsion_checks(&mut rec, opts.seed);
        for family in [Family::Associative, Family::Coassociative] {
            frame_checks(&mut rec, family);
        }
    }
    if matches!(suite, Suite::Spin7 | Suite::All) {
        spin7_algebra_checks(&mut rec, opts.seed);
        sph4_checks(&mut rec);
        spin7_torsion_checks(&mut rec, opts.seed);
        frame_checks(&mut rec, Family::Cayley);
    }
    VerificationReport { suite, checks: rec.checks, elapsed: start.elapsed() }
}

fn delta(i: usize, j: usize) -> i64 {
    (i == j) as i64
}

fn g2_algebra_checks(rec: &mut Recorder, g2: &G2Structure, seed: u64) {
    const N: usize = g2_algebra::DIM;
    rec.push(
        "g2.epsilon.table",
        g2.phi_from_table() == g2.phi0 && g2.star_phi_from_table() == g2.star_phi0,
        "tables rebuild the 3-form and its dual",
        yes_no(g2.phi_from_table() == g2.phi0 && g2.star_phi_from_table() == g2.star_phi0),
    );
    let mut bad = Vec::new();
    for i in 1..=N {
        for l in 1..=N {
            let s: i64 = (1..=N).flat_map(|j| (1..=N).map(move |k| (j, k))).map(|(j, k)| g2.eps(i, j, k) * g2.eps(l, j, k)).sum();
            if s != 6 * delta(i, l) {
                bad.push(format!("({i},{l}) -> {s}"));
            }
        }
    }
    rec.push("g2.epsilon.contraction", bad.is_empty(), "sum_jk e_ijk e_ljk = 6 delta_il", list(&bad));
    let mut bad = Vec::new();
    'outer: for i in 1..=N {
        for j in 1..=N {
            for a in 1..=N {
                for b in 1..=N {
                    let lhs: i64 = (1..=N).map(|k| g2.eps(i, j, k) * g2.eps(a, b, k)).sum();
                    let rhs = delta(i, a) * delta(j, b) - delta(i, b) * delta(j, a) + g2.eps4(i, j, a, b);
                    if lhs != rhs {
                        bad.push(format!("({i}{j}|{a}{b})"));
                        if bad.len() >= 5 {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    rec.push(
        "g2.epsilon.quadratic",
        bad.is_empty(),
        "e_ijk e_abk = d_ia d_jb - d_ib d_ja + e_ijab",
        list(&bad),
    );
    let top = g2.phi0.wedge(&g2.star_phi0);
    rec.push("g2.phi_wedge_star", top == Form::vol(N).scale_int(7), "7 vol", pretty(&top));
    rec.push("g2.metric_identity", g2.metric_identity_holds(), "true", yes_no(g2.metric_identity_holds()));

    let p = g2.projectors();
    let ranks: Vec<(&str, usize)> = p.all().iter().map(|(n, m, _)| (*n, m.rank())).collect();
    let want = [("L2_7", 7), ("L2_14", 14), ("L3_1", 1), ("L3_7", 7), ("L3_27", 27)];
    rec.push("g2.projectors.ranks", ranks == want, ranks_string(&want), ranks_string(&ranks));
    let idem = p.all().iter().all(|(_, m, _)| m.is_idempotent());
    let sum2 = p.p2_7.add(&p.p2_14) == Matrix::identity(21);
    let sum3 = p.p3_1.add(&p.p3_7).add(&p.p3_27) == Matrix::identity(35);
    rec.push(
        "g2.projectors.complete",
        idem && sum2 && sum3,
        "idempotent, summing to the identity",
        format!("idempotent={idem} sum2={sum2} sum3={sum3}"),
    );
    let alg = g2.lie_algebra();
    rec.push("g2.lie_algebra.dim", alg.len() == 14, 14, alg.len());
    let fails = g2.equivariance_failures(alg);
    rec.push("g2.equivariance", fails.is_empty() && !alg.is_empty(), "none", list(&fails));

    let mut bad = Vec::new();
    let basis = SymTensor::traceless_basis(N);
    for (k, h) in basis.iter().enumerate() {
        if g2.map_j_unchecked(&g2.map_i_unchecked(h)) != h.scale(&int(8)) {
            bad.push(format!("basis element {}", k + 1));
        }
    }
    rec.push(
        "g2.j_after_i",
        bad.is_empty() && basis.len() == 27,
        "8 Id on 27 traceless basis elements",
        format!("{} elements, failures: {}", basis.len(), list(&bad)),
    );

    rec.run("g2.calibration.adapted", || {
        let a = g2.is_associative(&[unit(N, 1), unit(N, 2), unit(N, 3)])?;
        let c = g2.is_coassociative(&[unit(N, 4), unit(N, 5), unit(N, 6), unit(N, 7)])?;
        Ok((a && c, "associative=true coassociative=true".into(), format!("associative={a} coassociative={c}")))
    });
    rec.run("g2.calibration.random", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rejected = (0, 0);
        for _ in 0..RANDOM_PLANES {
            if !g2.is_associative(&random_frame(&mut rng, N, 3))? {
                rejected.0 += 1;
            }
            if !g2.is_coassociative(&random_frame(&mut rng, N, 4))? {
                rejected.1 += 1;
            }
        }
        let ok = rejected == (RANDOM_PLANES, RANDOM_PLANES);
        Ok((ok, format!("{RANDOM_PLANES}/{RANDOM_PLANES} rejected"), format!("{}/{} 3-planes, {}/{} 4-planes", rejected.0, RANDOM_PLANES, rejected.1, RANDOM_PLANES)))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = sampled_comass(&g2.phi0, COMASS_SAMPLES, &mut rng);
    rec.push("g2.comass", m <= 1.0 + COMASS_TOLERANCE, format!("<= 1 + {COMASS_TOLERANCE:e}"), format!("{m:.12}"));
}

fn so4_checks(rec: &mut Recorder) {
    let r = So4Refinement::standard();
    let want2 = [3, 4, 3, 8, 3];
    let want3 = [1, 3, 4, 1, 5, 9, 8, 4];
    let fmt = |labels: &[&str], rs: &[usize]| {
        ranks_string(&labels.iter().zip(rs).map(|(l, r)| (*l, *r)).collect::<Vec<_>>())
    };
    rec.push(
        "so4.ranks",
        r.rank2() == want2 && r.rank3() == want3,
        format!("{} | {}", fmt(&so4::LABELS2, &want2), fmt(&so4::LABELS3, &want3)),
        format!("{} | {}", fmt(&so4::LABELS2, &r.rank2()), fmt(&so4::LABELS3, &r.rank3())),
    );
    let stab = so4::so4_stabilizer();
    rec.push("so4.stabilizer.dim", stab.len() == 6, 6, stab.len());
    let fails = r.equivariance_failures(&stab);
    rec.push("so4.equivariance", fails.is_empty(), "none", list(&fails));
    rec.run("so4.basis_membership", || {
        let mut bad = Vec::new();
        for (name, label, forms) in RefinedBasisG2::standard().families() {
            for (k, f) in forms.iter().enumerate() {
                if !r.in_component(f, label)? {
                    bad.push(format!("{name}[{}] not in {label}", k + 1));
                }
            }
        }
        Ok((bad.is_empty(), "every basis form in its component".into(), list(&bad)))
    });
    let b = RefinedBasisG2::standard();
    let lambda: Vec<Form> = b.lambda.iter().flatten().cloned().collect();
    let table: Vec<(&str, Vec<Form>, i64)> = vec![
        ("Gamma", b.gamma.to_vec(), 6),
        ("Delta", b.delta.to_vec(), 2),
        ("Omega", b.omega.to_vec(), 2),
        ("mu", b.mu.to_vec(), 2),
        ("kappa", b.kappa.to_vec(), 4),
        ("6phiA-phiC", vec![b.phi00()], 42),
        ("nu", b.nu.to_vec(), 12),
        ("lambda", lambda, 2),
    ];
    let expected: Vec<String> = table.iter().map(|(n, _, v)| format!("{n}:{v}")).collect();
    let actual: Vec<String> = table
        .iter()
        .map(|(n, fs, _)| {
            let mut norms: Vec<String> = fs.iter().map(|f| f.norm_sq().to_string()).collect();
            norms.dedup();
            format!("{n}:{}", norms.join("/"))
        })
        .collect();
    rec.push("so4.norms", expected == actual, expected.join(" "), actual.join(" "));

    rec.typo("so4.delta4", || {
        let printed = so4::delta4_printed();
        let fixed = so4::delta(4);
        let span = Matrix::from_rows(&(1..=8).map(|d| so4::delta(d).to_coords()).collect::<Vec<_>>()).rank();
        Ok(Finding {
            confirmed: printed == so4::delta(7) && fixed != printed && r.in_component(&fixed, "p14_13")? && span == 8,
            printed: format!("Delta4 = {} (a copy of Delta7)", pretty(&printed)),
            derived: format!("Delta4 = {}", pretty(&fixed)),
            note: "the printed fourth element repeats the seventh; the replacement completes an 8-element basis of the (1,3) summand and reproduces the solved torsion blocks".into(),
        })
    });
    rec.typo("so4.kappa1", || {
        let printed = so4::kappa1_printed();
        let fixed = so4::kappa(1);
        Ok(Finding {
            confirmed: !r.in_component(&printed, "p27_04")? && r.in_component(&fixed, "p27_04")?,
            printed: format!("kappa1 = {}", pretty(&printed)),
            derived: format!("kappa1 = {}", pretty(&fixed)),
            note: "the printed form lies in the 7-dimensional A-summand, not in the (0,4) summand".into(),
        })
    });
}

fn g2_torsion_checks(rec: &mut Recorder, seed: u64) {
    let sys = g2t::build_structure_system();
    rec.push(
        "g2t.system.rank",
        sys.equations() == 56 && sys.unknowns() == 49 && sys.rank() == 49,
        "56x49, rank 49",
        format!("{}x{}, rank {}", sys.equations(), sys.unknowns(), sys.rank()),
    );
    let cmp = g2t::compare_printed_blocks();
    let documented = cmp.diffs.iter().filter(|d| d.documented.is_some()).count();
    for d in &cmp.diffs {
        let id = format!("g2t.blocks.{} ({},{})", d.block, d.row, d.col);
        match &d.documented {
            Some(t) => rec.checks.push(Check {
                id,
                status: Status::DocumentedTypo,
                expected: d.printed.to_string(),
                actual: d.derived.to_string(),
                note: Some(t.note.clone()),
            }),
            None => rec.push(&id, false, &d.printed, &d.derived),
        }
    }
    rec.push(
        "g2t.blocks",
        cmp.is_clean_modulo_allowlist() && documented <= 5,
        "all entries agree modulo at most 5 documented misprints",
        format!("{} entries checked, {} documented, {} undocumented", cmp.checked, documented, cmp.undocumented().len()),
    );
    rec.typo("g2t.blocks.t57_label", || {
        let t = &g2t::solved_system().t_symbolic;
        let derived = t.get(5, 7).sub(t.get(7, 5)).scale(&rat(1, 2));
        let block = PrintedBlocks::g2()
            .blocks
            .into_iter()
            .find(|b| b.name == "C antisymmetric")
            .ok_or_else(|| AlgebraError::Invariant("C antisymmetric block missing".into()))?;
        let (i, j) = (
            block.rows.iter().position(|&x| x == 5).unwrap_or(0),
            block.cols.iter().position(|&x| x == 7).unwrap_or(0),
        );
        let printed_rhs = block.entries[i][j].clone();
        let literal = t.get(5, 7).sub(t.get(5, 7));
        Ok(Finding {
            confirmed: literal.is_zero_coeff() && !derived.is_zero_coeff() && derived == printed_rhs,
            printed: format!("(T57 - T57)/2 = {printed_rhs}"),
            derived: format!("(T57 - T75)/2 = {derived}"),
            note: "the left-hand label is identically zero as printed; the antisymmetric entry it stands for matches the printed right-hand side".into(),
        })
    });
    rec.typo("g2t.cross_relation", || {
        let mut derived = Vec::new();
        let mut confirmed = true;
        for a in 4..=7 {
            let got = g2t::cross_relation(a);
            let bm = ParamExpr::parse(&format!("B{a} + M{a}"))?;
            confirmed &= got == bm.scale(&int(3)) && got != bm.scale(&int(-3));
            derived.push(format!("row {a}: {got}"));
        }
        Ok(Finding {
            confirmed,
            printed: "eps_abp T_bp = -3(B_a + M_a)".into(),
            derived: derived.join("; "),
            note: "the solved system gives +3(B_a + M_a); the mean curvature -18(B_a + M_a) is unaffected".into(),
        })
    });
    rec.run("g2t.c_block_relation", || {
        let mut bad = Vec::new();
        for p in 1..=3 {
            let want = ParamExpr::parse(&format!("-4A{p} + 4C{p}"))?;
            let got = g2t::c_block_relation(p);
            if got != want {
                bad.push(format!("row {p}: {got}"));
            }
        }
        Ok((bad.is_empty(), "-4(A_p - C_p) for p = 1, 2, 3".into(), list(&bad)))
    });
    rec.typo("g2t.trace_factor", || {
        let c = g2t::coassoc_trace_factor()?;
        Ok(Finding {
            confirmed: c == int(4),
            printed: "T44 + T55 + T66 + T77 = 3F + tau0/24".into(),
            derived: format!("T44 + T55 + T66 + T77 = {c}(3F + tau0/24)"),
            note: "the scale factor 4 agrees with the printed diagonal C-block; the zero set is unchanged".into(),
        })
    });
    rec.run("g2t.roundtrip", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bad = 0;
        for _ in 0..ROUNDTRIPS {
            let rt = RefinedTorsionG2::random(&mut rng);
            let t = g2t::solve_t(&rt);
            if g2t::bryant_tau_from_t(&t) != g2t::assemble_refined(&rt)? || g2t::refined_from_t(&t) != rt {
                bad += 1;
            }
        }
        Ok((bad == 0, format!("{ROUNDTRIPS} exact roundtrips"), format!("{} exact, {bad} mismatched", ROUNDTRIPS - bad)))
    });
    let back = g2t::refined_from_t(&g2t::solved_system().t_symbolic);
    rec.push("g2t.bijection", back == RefinedTorsionG2::symbolic(), "refined -> T -> refined is the identity", yes_no(back == RefinedTorsionG2::symbolic()));
    rec.push(
        "g2t.gamma_embedding",
        g2t::GammaEmbedding.complements_g2(),
        "complements g2 in so(7)",
        yes_no(g2t::GammaEmbedding.complements_g2()),
    );
    rec.run("curvature.assoc.closed_form", || {
        let h = g2t::mean_curvature_associative(&RefinedTorsionG2::symbolic())?;
        closed_form_agrees(Family::Associative, &h)
    });
    rec.run("curvature.coassoc.closed_form", || {
        let h = g2t::mean_curvature_coassociative(&RefinedTorsionG2::symbolic())?;
        closed_form_agrees(Family::Coassociative, &h)
    });
    rec.run("obstruction.dagger", || {
        let sym = RefinedTorsionG2::symbolic();
        let via = g2t::coassoc_obstruction_via_dagger(&sym)?;
        let base = g2t::coassoc_obstruction(&sym);
        Ok((via == base.scale(&int(24)), format!("24({base})"), via.to_string()))
    });
    rec.run("obstruction.verdicts", || {
        let np = RefinedTorsionG2::zero().with("tau0", ParamExpr::constant(int(1)))?;
        let balanced = RefinedTorsionG2::zero().with("tau0", ParamExpr::constant(int(-72)))?.with("F", ParamExpr::constant(int(1)))?;
        let a = !g2t::coassoc_obstruction(&np).is_zero_coeff();
        let b = g2t::coassoc_obstruction(&balanced).is_zero_coeff();
        let c = g2t::coassoc_obstruction(&RefinedTorsionG2::zero()).is_zero_coeff();
        Ok((
            a && b && c,
            "nearly parallel obstructed; tau0=-72,F=1 and zero unobstructed".into(),
            format!("nearly_parallel_obstructed={a} balanced_unobstructed={b} zero_unobstructed={c}"),
        ))
    });
}

fn closed_form_agrees(family: Family, h: &[ParamExpr]) -> Result<(bool, String, String)> {
    let normal = family.normal();
    let mut bad = Vec::new();
    for (k, x) in h.iter().enumerate() {
        let want = if normal.contains(&(k + 1)) {
            crate::frame_relations::closed_form_h(family, k + 1)
        } else {
            ParamExpr::default()
        };
        if *x != want {
            bad.push(format!("H{} = {x}", k + 1));
        }
    }
    let first = normal[0];
    Ok((
        bad.is_empty(),
        format!("H{first} = {} and similarly", crate::frame_relations::closed_form_h(family, first)),
        if bad.is_empty() { format!("H{first} = {}", h[first - 1]) } else { list(&bad) },
    ))
}

fn frame_checks(rec: &mut Recorder, family: Family) {
    let name = family.name();
    let report = match DerivationReport::derive(family) {
        Ok(r) => r,
        Err(e) => {
            rec.push(&format!("frames.{name}"), false, "derivation succeeds", format!("error: {e}"));
            return;
        }
    };
    let n = report.relations.len();
    let rank = report.relations.rank();
    let want = report.expected_count();
    rec.push(&format!("frames.{name}.relations"), n == want && rank == want, format!("{want} independent"), format!("{n}, rank {rank}"));
    if family != Family::Coassociative {
        let mut fails = report.theta_failures.clone();
        fails.extend(report.gamma_failures.iter().cloned());
        rec.push(&format!("frames.{name}.connection_blocks"), fails.is_empty(), "none", list(&fails));
    }
    if family == Family::Cayley {
        rec.push("frames.cayley.s_only", report.s_only == 8, 8, report.s_only);
    }
    if family != Family::Cayley {
        let p = &report.printed;
        rec.push(&format!("frames.{name}.printed"), p.mismatches.is_empty(), "every printed relation derived", list(&p.mismatches));
        for (k, cell) in p.relocated.iter().enumerate() {
            rec.checks.push(Check {
                id: format!("frames.{name}.printed.layout.{}", k + 1),
                status: Status::DocumentedTypo,
                expected: "cell in the row of its pair".into(),
                actual: cell.clone(),
                note: Some("the relation is correct but printed in the row of another pair".into()),
            });
        }
    }
    for (k, (c, st)) in report.combinations.iter().enumerate() {
        let id = format!("frames.{name}.combination.{}", k + 1);
        match st {
            CombinationStatus::Implied => rec.push(&id, true, format!("{} = {}", c.lhs, c.rhs), "implied"),
            CombinationStatus::NotImplied => rec.push(&id, false, format!("{} = {}", c.lhs, c.rhs), "not implied"),
            CombinationStatus::ImpliedAfterCorrection(note) => {
                let (l, r, _) = c.correction.clone().expect("correction present");
                rec.checks.push(Check {
                    id,
                    status: Status::DocumentedTypo,
                    expected: format!("{} = {}", c.lhs, c.rhs),
                    actual: format!("{l} = {r}"),
                    note: Some(note.clone()),
                })
            }
        }
    }
    let bad: Vec<String> =
        report.mean_curvature.iter().filter(|h| !h.matches()).map(|h| format!("H{} = {}", h.index, h.refined)).collect();
    let curvature = match family {
        Family::Associative => "assoc",
        Family::Coassociative => "coassoc",
        Family::Cayley => "cayley",
    };
    rec.push(
        &format!("curvature.{curvature}.frame_derivation"),
        bad.is_empty() && !report.mean_curvature.is_empty(),
        "matches the closed form, no connection terms left",
        if bad.is_empty() { format!("{} components agree", report.mean_curvature.len()) } else { list(&bad) },
    );
    if let Some(o) = &report.obstruction {
        let base = g2t::coassoc_obstruction(&RefinedTorsionG2::symbolic());
        rec.push(
            "obstruction.frame_derivation",
            o.refined == base.scale(&o.factor) && !o.factor.is_zero_coeff(),
            format!("a nonzero multiple of {base}"),
            format!("{} = {}({base})", o.refined, o.factor),
        );
    }
}

fn spin7_algebra_checks(rec: &mut Recorder, seed: u64) {
    const N: usize = spin7_algebra::DIM;
    let s = Spin7Structure::standard();
    rec.push("spin7.table", s.phi_from_table() == s.phi0, "table rebuilds the 4-form", yes_no(s.phi_from_table() == s.phi0));
    rec.push("spin7.self_dual", s.is_self_dual(), "true", yes_no(s.is_self_dual()));
    let p = s.projectors();
    let ranks: Vec<(&str, usize)> = p.all().iter().map(|(n, m, _)| (*n, m.rank())).collect();
    let want = [("L2_7", 7), ("L2_21", 21), ("L3_8", 8), ("L3_48", 48)];
    rec.push("spin7.projectors.ranks", ranks == want, ranks_string(&want), ranks_string(&ranks));
    let idem = p.all().iter().all(|(_, m, _)| m.is_idempotent());
    let sum2 = p.p2_7.add(&p.p2_21) == Matrix::identity(28);
    let sum3 = p.p3_8.add(&p.p3_48) == Matrix::identity(56);
    rec.push(
        "spin7.projectors.complete",
        idem && sum2 && sum3,
        "idempotent, summing to the identity",
        format!("idempotent={idem} sum2={sum2} sum3={sum3}"),
    );
    let alg = s.lie_algebra();
    rec.push("spin7.lie_algebra.dim", alg.len() == 21, 21, alg.len());
    let fails = s.equivariance_failures(alg);
    rec.push("spin7.equivariance", fails.is_empty(), "none", list(&fails));
    rec.push("spin7.gamma_embedding", GammaEmbedding8.complements_spin7(), "complements spin(7) in so(8)", yes_no(GammaEmbedding8.complements_spin7()));
    rec.run("spin7.calibration.adapted", || {
        let k = s.is_cayley(&(1..=4).map(|i| unit(N, i)).collect::<Vec<_>>())?;
        let l = s.is_cayley(&(5..=8).map(|i| unit(N, i)).collect::<Vec<_>>())?;
        let off = s.is_cayley(&[unit(N, 1), unit(N, 2), unit(N, 3), unit(N, 5)])?;
        Ok((k && l && !off, "K and L Cayley, span(e1,e2,e3,e5) not".into(), format!("K={k} L={l} e1235={off}")))
    });
    rec.run("spin7.calibration.random", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rejected = 0;
        for _ in 0..RANDOM_PLANES {
            if !s.is_cayley(&random_frame(&mut rng, N, 4))? {
                rejected += 1;
            }
        }
        Ok((rejected == RANDOM_PLANES, format!("{RANDOM_PLANES}/{RANDOM_PLANES} rejected"), format!("{rejected}/{RANDOM_PLANES}")))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = sampled_comass(&s.phi0, COMASS_SAMPLES, &mut rng);
    rec.push("spin7.comass", m <= 1.0 + COMASS_TOLERANCE, format!("<= 1 + {COMASS_TOLERANCE:e}"), format!("{m:.12}"));
}

fn sph4_checks(rec: &mut Recorder) {
    let r = Sph4Refinement::standard();
    let want2 = [3, 4, 3, 3, 3, 12];
    let want3 = [4, 4, 4, 4, 8, 12, 8, 12];
    let fmt = |labels: &[&str], rs: &[usize]| {
        ranks_string(&labels.iter().zip(rs).map(|(l, r)| (*l, *r)).collect::<Vec<_>>())
    };
    rec.push(
        "sph4.ranks",
        r.rank2() == want2 && r.rank3() == want3,
        format!("{} | {}", fmt(&sph4::LABELS2, &want2), fmt(&sph4::LABELS3, &want3)),
        format!("{} | {}", fmt(&sph4::LABELS2, &r.rank2()), fmt(&sph4::LABELS3, &r.rank3())),
    );
    let stab = sph4::sph4_stabilizer();
    rec.push("sph4.stabilizer.dim", stab.len() == 9, 9, stab.len());
    let fails = r.equivariance_failures(&stab);
    rec.push("sph4.equivariance", fails.is_empty(), "none", list(&fails));
    rec.run("sph4.basis_membership", || {
        let mut bad = Vec::new();
        for (name, label, forms) in RefinedBasisSpin7::standard().families() {
            for (k, f) in forms.iter().enumerate() {
                if !r.in_component(f, label)? {
                    bad.push(format!("{name}[{}] not in {label}", k + 1));
                }
            }
        }
        Ok((bad.is_empty(), "every basis form in its component".into(), list(&bad)))
    });
    let ids = r.lambda2_identifications();
    rec.push("sph4.lambda2_identifications", ids == (true, true), "(true, true)", format!("{ids:?}"));
    let norms: Vec<String> = RefinedBasisSpin7::standard().rho.iter().map(|f| f.norm_sq().to_string()).collect();
    rec.push("sph4.rho_norms", norms.iter().all(|n| n == "42"), "42 for all eight", norms.join(" "));
    rec.typo("sph4.kappa6", || {
        let printed = sph4::kappa6_printed();
        let fixed = sph4::kappa(6);
        Ok(Finding {
            confirmed: !r.in_component(&printed, "p48_130")? && r.in_component(&fixed, "p48_130")?,
            printed: format!("kappa6 = {}", pretty(&printed)),
            derived: format!("kappa6 = {}", pretty(&fixed)),
            note: "the printed form has e1 where e2 belongs and is not in the 48-dimensional module".into(),
        })
    });
    rec.typo("sph4.lambda2_121_basis", || {
        let rank = r.rank2()[5];
        Ok(Finding {
            confirmed: rank == 12 && sph4::rep_dim(1, 2, 1)? == 12,
            printed: "the listed basis for the (1,2,1) summand repeats the previous item".into(),
            derived: format!("(1,2,1) summand of rank {rank}, taken as the complement of the other pieces of the 21"),
            note: "no explicit basis is needed; the projector is the complement within the 21-dimensional module".into(),
        })
    });
    rec.typo("sph4.second_fundamental_form_dimension", || {
        let a = sph4::sym2k_tensor_l_audit()?;
        let computed: Vec<String> = a.computed.iter().map(|((p, q, w), d)| format!("V{p}{q}{w}:{d}")).collect();
        let listed: Vec<String> = a.listed.iter().map(|(p, q, w)| format!("V{p}{q}{w}")).collect();
        Ok(Finding {
            confirmed: !a.consistent() && a.computed_total == 40,
            printed: format!("{} (total {})", listed.join(" + "), a.listed_total),
            derived: format!("{} (total {})", computed.join(" + "), a.computed_total),
            note: "Sym2(K) tensor L has dimension 40; the listed summands add to 48".into(),
        })
    });
}

fn spin7_torsion_checks(rec: &mut Recorder, seed: u64) {
    let sys = s7t::build_structure_system_spin7();
    rec.push(
        "s7t.system.rank",
        sys.equations() == 56 && sys.unknowns() == 56 && sys.rank() == 56,
        "56x56, rank 56",
        format!("{}x{}, rank {}", sys.equations(), sys.unknowns(), sys.rank()),
    );
    let fails = s7t::theta_cancellation_failures();
    rec.push("s7t.theta_cancellation", fails.is_empty(), "none", list(&fails));
    let cmp = s7t::compare_printed_blocks_spin7();
    let diffs: Vec<String> =
        cmp.diffs.iter().map(|d| format!("{} ({},{}): {} vs {}", d.block, d.row, d.col, d.printed, d.derived)).collect();
    rec.push(
        "s7t.blocks",
        cmp.diffs.is_empty(),
        "all entries agree",
        format!("{} entries checked, differences: {}", cmp.checked, list(&diffs)),
    );
    rec.run("s7t.roundtrip", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bad = 0;
        for _ in 0..ROUNDTRIPS {
            let rt = RefinedTorsionSpin7::random(&mut rng);
            let t = s7t::solve_t_spin7(&rt);
            if s7t::tau_from_t_spin7(&t) != s7t::assemble_refined_spin7(&rt)? || s7t::refined_from_t_spin7(&t) != rt {
                bad += 1;
            }
        }
        Ok((bad == 0, format!("{ROUNDTRIPS} exact roundtrips"), format!("{} exact, {bad} mismatched", ROUNDTRIPS - bad)))
    });
    let back = s7t::refined_from_t_spin7(&s7t::solved_system_spin7().t_symbolic);
    rec.push("s7t.bijection", back == RefinedTorsionSpin7::symbolic(), "refined -> T -> refined is the identity", yes_no(back == RefinedTorsionSpin7::symbolic()));
    rec.run("curvature.cayley.closed_form", || {
        let h = s7t::mean_curvature_cayley(&RefinedTorsionSpin7::symbolic())?;
        closed_form_agrees(Family::Cayley, &h)
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("g2".parse::<Suite>().unwrap(), Suite::G2);
        assert!("g3".parse::<Suite>().is_err());
    }

    #[test]
    fn g2_suite_is_green() {
        let r = run(Suite::G2, &VerifyOptions::default());
        let f: Vec<_> = r.failures().iter().map(|c| format!("{} | {} | {}", c.id, c.expected, c.actual)).collect();
        assert!(f.is_empty(), "{f:#?}");
        for id in ["so4.delta4", "g2t.blocks.A antisymmetric (1,2)", "g2t.trace_factor", "g2t.blocks.t57_label"] {
            assert_eq!(r.get(id).map(|c| c.status), Some(Status::DocumentedTypo), "{id}");
        }
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn spin7_suite_is_green() {
        let r = run(Suite::Spin7, &VerifyOptions::default());
        let f: Vec<_> = r.failures().iter().map(|c| format!("{} | {} | {}", c.id, c.expected, c.actual)).collect();
        assert!(f.is_empty(), "{f:#?}");
        assert_eq!(r.get("sph4.second_fundamental_form_dimension").unwrap().status, Status::DocumentedTypo);
    }

    #[test]
    fn corrupted_form_fails() {
        let mut phi = g2_algebra::standard_phi();
        phi = phi.sub(&g2_algebra::e(&[1, 2, 3]).scale_int(2));
        let r = run(Suite::G2, &VerifyOptions { g2_form: Some(phi), ..Default::default() });
        assert_eq!(r.exit_code(), 1);
        let ids: Vec<&str> = r.failures().iter().map(|c| c.id.as_str()).collect();
        assert!(ids.contains(&"g2.epsilon.quadratic"), "{ids:?}");
        assert!(ids.contains(&"g2.projectors.ranks"), "{ids:?}");
    }

    #[test]
    fn json_is_deterministic() {
        let a = run(Suite::Spin7, &VerifyOptions::default());
        let b = run(Suite::Spin7, &VerifyOptions::default());
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
        assert_eq!(a.to_json()["totals"]["total"], json!(a.checks.len()));
        let mut ids: Vec<&str> = a.checks.iter().map(|c| c.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), a.checks.len());
    }
}
