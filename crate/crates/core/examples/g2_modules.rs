//! Splits forms on R^7 into G2 modules and then into the finer pieces fixed by an associative plane.

use calibrated_torsion::g2_algebra::{e, G2Structure};
use calibrated_torsion::multilinear::{pretty, SymTensor};
use calibrated_torsion::so4_refine::{RefinedBasisG2, So4Refinement};

fn main() -> calibrated_torsion::Result<()> {
    let g2 = G2Structure::standard();
    for (name, p, _) in g2.projectors().all() {
        println!("{name}: rank {}", p.rank());
    }

    let beta = e(&[1, 2]).add(&e(&[4, 7]));
    let (b7, b14) = g2.project_lambda2(&beta)?;
    println!("\nbeta = {}\n  7-part:  {}\n  14-part: {}", pretty(&beta), pretty(&b7), pretty(&b14));

    let h = SymTensor::product(7, 1, 2);
    let gamma = g2.map_i(&h)?;
    println!("\ni(e1 o e2) = {}", pretty(&gamma));
    println!("j(i(h)) = 8h: {}", g2.map_j(&gamma)? == h.scale(&calibrated_torsion::rational::int(8)));

    let r = So4Refinement::standard();
    println!("\nrefined ranks: {:?} {:?}", r.rank2(), r.rank3());
    for (label, part) in r.refine3(&e(&[1, 4, 5]))?.to_vec() {
        if !part.is_zero() {
            println!("  e145 has {label} part {}", pretty(&part));
        }
    }
    for (name, label, forms) in RefinedBasisG2::standard().families() {
        println!("{name:>11} in {label:<7} |.|^2 = {}", forms[0].norm_sq());
    }
    Ok(())
}
