//! Fixed functionals of a unipotent translation on truncated dual spaces.

use serde::{Deserialize, Serialize};

use super::action::{monomials, translation_rat};
use crate::arith::linalg::{identity, kernel, mat_sub};
use crate::arith::rat::{rat, Rat};
use crate::arith::ring::RatField;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColexResult {
    pub g: usize,
    pub n: usize,
    /// Multi-indices labelling the dual basis τ^l.
    pub indices: Vec<Vec<usize>>,
    /// Kernel vectors in the τ^l coordinates.
    #[serde(with = "crate::serde_rat::mat")]
    pub basis: Vec<Vec<Rat>>,
    /// Every kernel vector vanishes off total degree N.
    pub boundary_only: bool,
}

impl ColexResult {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of (γ − 1) on functionals of degree ≤ N in g variables, for
/// γ = [[1, p^N'], [0, 1]]. Computed exactly over Q.
pub fn colex_fixed_points(g: usize, n: usize, p: u64, n_prime: u32) -> Result<ColexResult> {
    if g == 0 || n_prime == 0 {
        return Err(Error::Input("need g ≥ 1 and N' ≥ 1".into()));
    }
    let b = rat(p as i64).pow(n_prime as i32);
    let t = translation_rat(g, n, &b).transpose();
    let k = kernel(&RatField, &mat_sub(&RatField, &t, &identity(&RatField, t.rows)));
    let indices = monomials(g, n);
    let basis: Vec<Vec<Rat>> = (0..k.cols).map(|c| k.col(c)).collect();
    let boundary_only = basis
        .iter()
        .all(|v| v.iter().zip(&indices).all(|(x, l)| x == &rat(0) || l.iter().sum::<usize>() == n));
    Ok(ColexResult { g, n, indices, basis, boundary_only })
}
