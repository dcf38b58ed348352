//! Spin(7) modules of forms on R^8 and their refinement under the stabilizer of a Cayley plane.

use calibrated_torsion::multilinear::pretty;
use calibrated_torsion::sph4_refine::{self, Sph4Refinement};
use calibrated_torsion::spin7_algebra::{e, Spin7Structure};

fn main() -> calibrated_torsion::Result<()> {
    let s = Spin7Structure::standard();
    println!("Phi = {}", pretty(&s.phi0));
    for (name, p, _) in s.projectors().all() {
        println!("{name}: rank {}", p.rank());
    }
    println!("spin(7) has dimension {}", s.lie_algebra().len());

    let r = Sph4Refinement::standard();
    println!("\nrefined ranks: {:?} {:?}", r.rank2(), r.rank3());
    let f = e(&[1, 2, 5]).add(&e(&[6, 7, 8]));
    for (label, part) in r.refine3(&f)?.to_vec() {
        if !part.is_zero() {
            println!("  {label}: {}", pretty(&part));
        }
    }
    let audit = sph4_refine::sym2k_tensor_l_audit()?;
    println!("\nSym2(K) x L: {:?}, total {}", audit.computed, audit.computed_total);
    Ok(())
}
