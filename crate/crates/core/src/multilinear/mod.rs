//! Exterior and symmetric algebra over ℝ⁷ / ℝ⁸ with an exact linear-algebra kernel.

pub mod form;
pub mod index;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod sym;

pub use form::{pretty, Form, Multivector, ParamForm};
pub use index::MultiIndex;
pub use linalg::{solve_exact, Matrix, Solution, SolveOutcome};
pub use sym::SymTensor;

use crate::rational::Rational;

/// `♯`: coordinates of a 1-form as a vector (orthonormal frame).
pub fn sharp(alpha: &Form) -> Vec<Rational> {
    assert_eq!(alpha.grade(), 1, "sharp takes a 1-form");
    alpha.to_coords()
}

/// `♭`: the 1-form dual to a vector.
pub fn flat(x: &[Rational]) -> Form {
    Form::one_form(x)
}

/// Unit coordinate vector `e_i` (1-based).
pub fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::from_integer(0.into()); dim];
    v[i - 1] = Rational::from_integer(1.into());
    v
}

/// Largest `|f(v₁..v_k)|` over `samples` random orthonormal k-frames (Gram–Schmidt on uniform vectors).
pub fn sampled_comass<R: rand::Rng>(f: &Form, samples: usize, rng: &mut R) -> f64 {
    let (n, k) = (f.dim(), f.grade());
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(k);
        while frame.len() < k {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for u in &frame {
                let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-6 {
                frame.push(v.into_iter().map(|a| a / norm).collect());
            }
        }
        best = best.max(f.evaluate_f64(&frame).abs());
    }
    best
}
