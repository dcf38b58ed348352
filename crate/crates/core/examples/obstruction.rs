//! Which torsion allows coassociative planes adapted to the split.

use calibrated_torsion::g2_torsion::{self, RefinedTorsionG2};
use calibrated_torsion::ParamExpr;

fn main() -> calibrated_torsion::Result<()> {
    let cases = [
        ("nearly parallel", RefinedTorsionG2::zero().with("tau0", ParamExpr::parse("1")?)?),
        ("tau0 = -72, F = 1", RefinedTorsionG2::zero().with("tau0", ParamExpr::parse("-72")?)?.with("F", ParamExpr::parse("1")?)?),
        ("torsion free", RefinedTorsionG2::zero()),
    ];
    for (name, rt) in cases {
        let r = g2_torsion::coassoc_obstruction(&rt);
        println!("{name:>18}: residual {r:<6} via dagger {}", g2_torsion::coassoc_obstruction_via_dagger(&rt)?);
    }
    println!("trace of the C-block = {} (3F + tau0/24)", g2_torsion::coassoc_trace_factor()?);
    Ok(())
}
