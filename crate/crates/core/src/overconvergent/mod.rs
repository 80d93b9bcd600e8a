//! Truncated overconvergent forms: p-adic weights, the M_1 action on
//! functions and distributions, U_p slopes, and unipotent fixed points.

pub mod action;
pub mod colex;
pub mod up;
pub mod weight;

pub use action::{
    classical_subspace_check, dual_action, monoid_action, ActionMatrix, TruncatedDual, TruncatedSpace,
};
pub use colex::{colex_fixed_points, ColexResult};
pub use up::{
    char_series, char_series_slopes, classical_up_matrix, unit_eigenvalues_mod_p, up_matrix, SlopeReport, UpMatrix,
};
pub use weight::{MonoidElt, UnitChar, WeightChar};
