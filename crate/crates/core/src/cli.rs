//! Command-line front end. Every command writes canonical JSON (sorted keys, rational strings) and returns
//! an exit code: 0 success, 1 verification failure, 2 input error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{AlgebraError, Result};
use crate::expr::{Coeff, ParamExpr};
use crate::g2_algebra::G2Structure;
use crate::g2_torsion::{self as g2t, RefinedTorsionG2, TorsionMatrixG2};
use crate::multilinear::json::{form_from_json, form_to_json};
use crate::multilinear::Form;
use crate::rational::Rational;
use crate::so4_refine::{So4Refinement, SplitFrame};
use crate::sph4_refine::Sph4Refinement;
use crate::spin7_algebra::Spin7Structure;
use crate::spin7_torsion::{self as s7t, RefinedTorsionSpin7, TorsionMatrixSpin7};
use crate::verify::{self, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "calibrated-torsion", version, about = "Exact torsion and mean-curvature computations for G2 and Spin(7) structures")]
pub struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Suppress human-readable output.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Structure {
    G2,
    Spin7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    G2,
    Spin7,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::G2 => Suite::G2,
            SuiteArg::Spin7 => Suite::Spin7,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Assoc,
    Coassoc,
    Cayley,
}

impl Kind {
    fn structure(self) -> Structure {
        match self {
            Kind::Assoc | Kind::Coassoc => Structure::G2,
            Kind::Cayley => Structure::Spin7,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Use this 3-form (multivector JSON) in place of the model form for the G2 algebra checks.
        #[arg(long, value_name = "PATH")]
        g2_form: Option<PathBuf>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
    /// Split a 2- or 3-form into its refined components.
    Decompose {
        #[arg(long, value_enum, default_value = "g2")]
        structure: Structure,
        form: PathBuf,
        /// A 7x7 adapted frame (rows of rationals), G2 only.
        #[arg(long, value_name = "PATH")]
        split: Option<PathBuf>,
    },
    /// Solve for the intrinsic torsion matrix from refined torsion.
    Torsion {
        #[arg(long, value_enum, default_value = "g2")]
        structure: Structure,
        refined: PathBuf,
    },
    /// Recover refined torsion from an intrinsic torsion matrix.
    TorsionInvert {
        #[arg(long, value_enum, default_value = "g2")]
        structure: Structure,
        matrix: PathBuf,
    },
    /// Mean curvature of the adapted calibrated plane.
    Curvature {
        #[arg(value_enum)]
        kind: Kind,
        refined: PathBuf,
        #[arg(long, value_enum)]
        structure: Option<Structure>,
    },
    /// Residual of the coassociative obstruction.
    Obstruction { refined: PathBuf },
}

/// Parses the arguments and runs; the return value is the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| AlgebraError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| AlgebraError::Parse(format!("{}: {e}", path.display())))
}

/// Canonical bytes: pretty-printed, keys sorted by the map type, trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// JSON goes to `--json` if given (with `summary` on stdout), otherwise to stdout.
fn emit(cli: &Cli, v: &Value, summary: &str) -> Result<()> {
    match &cli.json {
        Some(p) => {
            fs::write(p, render(v)).map_err(|e| AlgebraError::Parse(format!("{}: {e}", p.display())))?;
            if !cli.quiet && !summary.is_empty() {
                println!("{summary}");
            }
        }
        None if !cli.quiet => print!("{}", render(v)),
        None => {}
    }
    Ok(())
}

fn exprs(xs: &[ParamExpr]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Verify { suite, g2_form, seed } => {
            let g2_form = match g2_form {
                Some(p) => Some(form_from_json::<Rational>(&read_json(p)?)?),
                None => None,
            };
            let report = verify::run((*suite).into(), &VerifyOptions { g2_form, seed: *seed });
            if let Some(p) = &cli.json {
                fs::write(p, render(&report.to_json())).map_err(|e| AlgebraError::Parse(format!("{}: {e}", p.display())))?;
            }
            if !cli.quiet {
                print!("{}", report.to_text(false));
            } else if !report.success() {
                eprint!("{}", report.to_text(true));
            }
            Ok(report.exit_code())
        }
        Command::Decompose { structure, form, split } => {
            let f: Form = form_from_json(&read_json(form)?)?;
            let v = decompose(*structure, &f, split.as_deref())?;
            let nonzero: Vec<String> = v["components"]
                .as_object()
                .map(|m| m.iter().filter(|(_, c)| c["norm_sq"] != json!("0")).map(|(k, _)| k.clone()).collect())
                .unwrap_or_default();
            emit(cli, &v, &format!("nonzero components: {}", nonzero.join(", ")))?;
            Ok(EXIT_OK)
        }
        Command::Torsion { structure, refined } => {
            let input = read_json(refined)?;
            let v = match structure {
                Structure::G2 => g2t::solve_t(&RefinedTorsionG2::from_json(&input)?).to_json(),
                Structure::Spin7 => s7t::solve_t_spin7(&RefinedTorsionSpin7::from_json(&input)?).to_json(),
            };
            emit(cli, &v, "")?;
            Ok(EXIT_OK)
        }
        Command::TorsionInvert { structure, matrix } => {
            let input = read_json(matrix)?;
            let v = match structure {
                Structure::G2 => g2t::refined_from_t(&TorsionMatrixG2::from_json(&input)?).to_json(),
                Structure::Spin7 => s7t::refined_from_t_spin7(&TorsionMatrixSpin7::from_json(&input)?).to_json(),
            };
            emit(cli, &v, "")?;
            Ok(EXIT_OK)
        }
        Command::Curvature { kind, refined, structure } => {
            if let Some(s) = structure {
                if *s != kind.structure() {
                    return Err(AlgebraError::Parse(format!("{kind:?} planes need the {:?} structure", kind.structure())));
                }
            }
            let input = read_json(refined)?;
            let v = curvature(*kind, &input)?;
            emit(cli, &v, &format!("H = {}", v["H"]))?;
            Ok(EXIT_OK)
        }
        Command::Obstruction { refined } => {
            let rt = RefinedTorsionG2::from_json(&read_json(refined)?)?;
            let residual = g2t::coassoc_obstruction(&rt);
            let verdict = if residual.is_zero_coeff() { "UNOBSTRUCTED" } else { "OBSTRUCTED" };
            let v = json!({
                "residual": residual.to_string(),
                "constraint": "3F + tau0/24",
                "verdict": verdict,
            });
            emit(cli, &v, &format!("{verdict} (residual {residual})"))?;
            Ok(EXIT_OK)
        }
    }
}

fn component_json(f: &Form) -> Value {
    json!({"form": form_to_json(f), "norm_sq": f.norm_sq().to_json()})
}

pub fn decompose(structure: Structure, f: &Form, split: Option<&Path>) -> Result<Value> {
    let (dim, name) = match structure {
        Structure::G2 => (7, "g2"),
        Structure::Spin7 => (8, "spin7"),
    };
    if f.dim() != dim {
        return Err(AlgebraError::DimMismatch(f.dim(), dim));
    }
    if !(2..=3).contains(&f.grade()) {
        return Err(AlgebraError::Parse(format!("decompose takes a 2- or 3-form, got grade {}", f.grade())));
    }
    let mut components = serde_json::Map::new();
    let mut coarse = serde_json::Map::new();
    match structure {
        Structure::G2 => {
            let owned;
            let r = match split {
                Some(p) => {
                    owned = So4Refinement::for_frame(SplitFrame::from_matrix(read_frame(&read_json(p)?)?)?)?;
                    &owned
                }
                None => So4Refinement::standard(),
            };
            let parts = if f.grade() == 2 { r.refine2(f)?.to_vec() } else { r.refine3(f)?.to_vec() };
            for (l, c) in parts {
                components.insert(l.into(), component_json(&c));
            }
            let g2 = G2Structure::standard();
            if f.grade() == 2 {
                let (a, b) = g2.project_lambda2(f)?;
                coarse.insert("L2_7".into(), component_json(&a));
                coarse.insert("L2_14".into(), component_json(&b));
            } else {
                let (a, b, c) = g2.project_lambda3(f)?;
                coarse.insert("L3_1".into(), component_json(&a));
                coarse.insert("L3_7".into(), component_json(&b));
                coarse.insert("L3_27".into(), component_json(&c));
            }
        }
        Structure::Spin7 => {
            if split.is_some() {
                return Err(AlgebraError::Parse("--split applies to the g2 structure only".into()));
            }
            let r = Sph4Refinement::standard();
            let parts = if f.grade() == 2 { r.refine2(f)?.to_vec() } else { r.refine3(f)?.to_vec() };
            for (l, c) in parts {
                components.insert(l.into(), component_json(&c));
            }
            let s = Spin7Structure::standard();
            if f.grade() == 2 {
                let (a, b) = s.project_lambda2(f)?;
                coarse.insert("L2_7".into(), component_json(&a));
                coarse.insert("L2_21".into(), component_json(&b));
            } else {
                let (a, b) = s.project_lambda3(f)?;
                coarse.insert("L3_8".into(), component_json(&a));
                coarse.insert("L3_48".into(), component_json(&b));
            }
        }
    }
    Ok(json!({
        "structure": name,
        "grade": f.grade(),
        "norm_sq": f.norm_sq().to_json(),
        "components": components,
        "coarse": coarse,
    }))
}

/// Either a bare 7x7 array or `{"frame": [...]}`; entries are rational strings or integers.
fn read_frame(v: &Value) -> Result<Vec<Vec<Rational>>> {
    let rows = v.get("frame").unwrap_or(v).as_array().ok_or_else(|| AlgebraError::Parse("frame must be a list of rows".into()))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| AlgebraError::Parse("frame row must be a list".into()))?
                .iter()
                .map(Rational::from_json)
                .collect()
        })
        .collect()
}

pub fn curvature(kind: Kind, input: &Value) -> Result<Value> {
    match kind {
        Kind::Assoc | Kind::Coassoc => {
            let rt = RefinedTorsionG2::from_json(input)?;
            let h = if kind == Kind::Assoc {
                g2t::mean_curvature_associative(&rt)?
            } else {
                g2t::mean_curvature_coassociative(&rt)?
            };
            let m = g2t::minimality_class(&rt)?;
            Ok(json!({
                "kind": if kind == Kind::Assoc { "assoc" } else { "coassoc" },
                "H": exprs(&h),
                "minimality": {
                    "adapted_plane_minimal": if kind == Kind::Assoc { m.adapted_associative_minimal } else { m.adapted_coassociative_minimal },
                    "associatives_minimal": m.associatives_minimal,
                    "coassociatives_minimal": m.coassociatives_minimal,
                    "torsion_class": m.class,
                },
            }))
        }
        Kind::Cayley => {
            let rt = RefinedTorsionSpin7::from_json(input)?;
            let h = s7t::mean_curvature_cayley(&rt)?;
            let m = s7t::cayley_minimality(&rt)?;
            Ok(json!({
                "kind": "cayley",
                "H": exprs(&h),
                "minimality": {
                    "adapted_plane_minimal": m.adapted_cayley_minimal,
                    "cayleys_minimal": m.all_cayleys_minimal,
                    "torsion_free": m.torsion_free,
                    "nonzero_families": m.nonzero_families,
                },
            }))
        }
    }
}
