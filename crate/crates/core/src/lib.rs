//! Automorphic forms on definite quaternion algebras over Q: Brandt-style
//! Hecke operators at classical weights, truncated overconvergent models,
//! U_p slopes, and old/new level-raising computations.

pub mod arith;
pub mod autoforms;
pub mod error;
pub mod levelraising;
pub mod overconvergent;
pub mod quaternion;
pub mod serde_rat;

pub use error::{Error, Result};
