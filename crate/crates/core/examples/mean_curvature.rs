//! Mean curvature of the adapted associative, coassociative and Cayley planes in terms of refined torsion.

use calibrated_torsion::g2_torsion::{self, RefinedTorsionG2};
use calibrated_torsion::spin7_torsion::{self, RefinedTorsionSpin7};
use calibrated_torsion::Coeff;

fn show(name: &str, h: &[calibrated_torsion::ParamExpr]) {
    println!("{name}:");
    for (i, x) in h.iter().enumerate() {
        if !x.is_zero_coeff() {
            println!("  H{} = {x}", i + 1);
        }
    }
}

fn main() -> calibrated_torsion::Result<()> {
    let g = RefinedTorsionG2::symbolic();
    show("associative", &g2_torsion::mean_curvature_associative(&g)?);
    show("coassociative", &g2_torsion::mean_curvature_coassociative(&g)?);
    show("Cayley", &spin7_torsion::mean_curvature_cayley(&RefinedTorsionSpin7::symbolic())?);

    let rt = RefinedTorsionG2::zero().with("E2", calibrated_torsion::ParamExpr::parse("1")?)?;
    let m = g2_torsion::minimality_class(&rt)?;
    println!("\nonly E2: class {}, coassociatives minimal {}", m.class, m.coassociatives_minimal);
    Ok(())
}
