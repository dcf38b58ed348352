//! Runs every verification suite and prints the findings that differ from the printed formulas.

use calibrated_torsion::verify::{run, Suite, VerifyOptions};

fn main() {
    let report = run(Suite::All, &VerifyOptions::default());
    print!("{}", report.to_text(true));
    std::process::exit(report.exit_code());
}
