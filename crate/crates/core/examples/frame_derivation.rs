//! Rederives the adapted-frame relations and the mean curvature for one family of calibrated planes.
//!
//! cargo run --example frame_derivation -- cayley

use calibrated_torsion::frame_relations::{DerivationReport, Family};

fn main() -> calibrated_torsion::Result<()> {
    let family: Family = std::env::args().nth(1).as_deref().unwrap_or("assoc").parse()?;
    let report = DerivationReport::derive(family)?;
    print!("{}", report.to_text());
    Ok(())
}
