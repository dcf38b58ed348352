//! Refined torsion to the intrinsic torsion matrix and back, for both structures.

use calibrated_torsion::g2_torsion::{self, RefinedTorsionG2};
use calibrated_torsion::spin7_torsion::{self, RefinedTorsionSpin7};
use calibrated_torsion::ParamExpr;
use rand::SeedableRng;

fn main() -> calibrated_torsion::Result<()> {
    let sys = g2_torsion::build_structure_system();
    println!("G2 system: {} equations, {} unknowns, rank {}", sys.equations(), sys.unknowns(), sys.rank());

    let rt = RefinedTorsionG2::zero().with("tau0", ParamExpr::parse("1")?)?;
    let t = g2_torsion::solve_t(&rt);
    println!("tau0 = 1 gives T11 = {}, trace {}", t.get(1, 1), t.trace());

    let t = &g2_torsion::solved_system().t_symbolic;
    println!("symbolic T45 = {}", t.get(4, 5));

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let rt = RefinedTorsionG2::random(&mut rng);
    let back = g2_torsion::refined_from_t(&g2_torsion::solve_t(&rt));
    println!("random G2 roundtrip exact: {}", back == rt);

    let rt = RefinedTorsionSpin7::random(&mut rng);
    let t = spin7_torsion::solve_t_spin7(&rt);
    println!("random Spin(7) roundtrip exact: {}", spin7_torsion::refined_from_t_spin7(&t) == rt);
    println!("tau from T matches: {}", spin7_torsion::tau_from_t_spin7(&t) == spin7_torsion::assemble_refined_spin7(&rt)?);
    Ok(())
}
