//! Algebraic automorphic forms on a definite quaternion algebra and their
//! Hecke operators.

pub mod coeff;
pub mod degeneracy;
pub mod eigen;
pub mod hecke;
pub mod space;

pub use coeff::{CoeffAction, SymPadic, TrivialRat};
pub use eigen::{eigensystems, EigenSystem, Eigenvalue};
pub use hecke::{hecke_operator, pairing_gram, u_p_operator, HeckeLabel, HeckeMatrix};
pub use space::{
    build_space_padic, build_space_rational, class_set_for, AutFormSpace, ClassicalWeight, LevelSpec, PadicSpace,
    RationalSpace,
};
