//! Exact multilinear algebra for G₂- and Spin(7)-structures.
//!
//! The crate models the calibration forms on ℝ⁷ and ℝ⁸, their irreducible
//! decompositions under G₂, Spin(7) and the stabilizers of calibrated planes,
//! the refined intrinsic torsion of such structures, and closed-form mean
//! curvature of associative, coassociative and Cayley planes. All arithmetic
//! is over the rationals; square roots appear only as [`rational::Surd`]s.

pub mod cli;
pub mod error;
pub mod expr;
pub mod frame_relations;
pub mod g2_algebra;
pub mod g2_torsion;
pub mod golden;
pub mod multilinear;
pub mod rational;
pub mod so4_refine;
pub mod sph4_refine;
pub mod spin7_algebra;
pub mod spin7_torsion;
pub mod verify;

pub use error::{AlgebraError, Result};
pub use expr::{Coeff, ParamExpr};
pub use multilinear::{Form, Matrix, MultiIndex, Multivector, ParamForm, SymTensor};
pub use rational::{Rational, Surd};
