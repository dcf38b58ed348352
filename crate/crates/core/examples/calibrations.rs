//! Calibrated planes of the model forms and a sampled comass estimate.

use calibrated_torsion::g2_algebra::G2Structure;
use calibrated_torsion::multilinear::{sampled_comass, unit};
use calibrated_torsion::spin7_algebra::Spin7Structure;
use rand::SeedableRng;

fn main() -> calibrated_torsion::Result<()> {
    let g2 = G2Structure::standard();
    let span = |dim: usize, idx: &[usize]| idx.iter().map(|&i| unit(dim, i)).collect::<Vec<_>>();
    println!("span(e1,e2,e3) associative:   {}", g2.is_associative(&span(7, &[1, 2, 3]))?);
    println!("span(e1,e2,e4) associative:   {}", g2.is_associative(&span(7, &[1, 2, 4]))?);
    println!("span(e4..e7) coassociative:   {}", g2.is_coassociative(&span(7, &[4, 5, 6, 7]))?);
    println!("e1 x e2 = {:?}", g2.cross(&unit(7, 1), &unit(7, 2))?.iter().map(|x| x.to_string()).collect::<Vec<_>>());

    let s = Spin7Structure::standard();
    println!("span(e1..e4) Cayley:          {}", s.is_cayley(&span(8, &[1, 2, 3, 4]))?);
    println!("span(e1,e2,e3,e5) Cayley:     {}", s.is_cayley(&span(8, &[1, 2, 3, 5]))?);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    println!("sampled comass of phi: {:.9}", sampled_comass(&g2.phi0, 10_000, &mut rng));
    println!("sampled comass of Phi: {:.9}", sampled_comass(&s.phi0, 10_000, &mut rng));
    Ok(())
}
