//! Coefficient modules: the trivial module over Q and Sym^n of the standard
//! representation through a splitting at p, with its dual.

use std::fmt::Debug;

use crate::arith::linalg::{
    identity, inverse, is_zero_mat, kernel, mat_add, mat_mul, mat_sub, rref, saturated_image, zeros, Mat,
};
use crate::arith::rat::Rat;
use crate::arith::ring::{RatField, Ring, Zpm};
use crate::error::{Error, Result};
use crate::quaternion::{LocalSplitting, QuatAlgebra, QuatElt};

/// A right action of D^× (through p-adic data where needed). Matrices act on
/// coordinate columns, so R(xy) = R(y)·R(x).
pub trait CoeffAction: Clone + Debug {
    type R: Ring;
    fn ring(&self) -> &Self::R;
    fn dim(&self) -> usize;
    fn matrix(&self, alg: &QuatAlgebra, y: &QuatElt) -> Result<Mat<<Self::R as Ring>::Elem>>;
    /// The contragredient module μ·γ = μ∘(·γ⁻¹).
    fn dual(&self) -> Self;
    /// Basis (columns) of the vectors fixed by every matrix in `mats`, with a
    /// coordinate map (rows) that inverts it on the fixed space.
    fn invariants(&self, mats: &[Mat<<Self::R as Ring>::Elem>]) -> Result<(Mat<<Self::R as Ring>::Elem>, Mat<<Self::R as Ring>::Elem>)>;
    /// Embed a rational scalar (used for 1/|Γ_i| and similar).
    fn scalar(&self, x: &Rat) -> Result<<Self::R as Ring>::Elem> {
        self.ring().from_rat(x)
    }
}

/// Weight 2 over Q: every element acts trivially.
#[derive(Clone, Debug, Default)]
pub struct TrivialRat;

impl CoeffAction for TrivialRat {
    type R = RatField;
    fn ring(&self) -> &RatField {
        &RatField
    }
    fn dim(&self) -> usize {
        1
    }
    fn matrix(&self, _alg: &QuatAlgebra, _y: &QuatElt) -> Result<Mat<Rat>> {
        Ok(identity(&RatField, 1))
    }
    fn dual(&self) -> Self {
        TrivialRat
    }
    fn invariants(&self, mats: &[Mat<Rat>]) -> Result<(Mat<Rat>, Mat<Rat>)> {
        field_invariants(&RatField, self.dim(), mats)
    }
}

/// Sym^n with (f·γ)(z) = (cz+d)^n f((az+b)/(cz+d)), γ = φ_p(y) mod p^m.
#[derive(Clone, Debug)]
pub struct SymPadic {
    pub z: Zpm,
    pub n: usize,
    pub splitting: LocalSplitting,
    pub dual: bool,
}

impl SymPadic {
    pub fn new(z: Zpm, n: usize, splitting: LocalSplitting) -> Self {
        assert_eq!(z.p(), splitting.s);
        assert!(splitting.m >= z.prec());
        SymPadic { z, n, splitting, dual: false }
    }
}

/// Coefficients (ascending) of the product of polynomials over a ring.
fn poly_mul<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    out
}

/// Matrix of γ = [[a, b], [c, d]] on polynomials of degree ≤ n, column t
/// holding (az+b)^t (cz+d)^(n-t).
pub fn sym_matrix<R: Ring>(r: &R, n: usize, g: [R::Elem; 4]) -> Mat<R::Elem> {
    let [a, b, c, d] = g;
    let lin1 = vec![b.clone(), a.clone()];
    let lin2 = vec![d.clone(), c.clone()];
    let mut pow1 = vec![vec![r.one()]];
    let mut pow2 = vec![vec![r.one()]];
    for t in 1..=n {
        pow1.push(poly_mul(r, &pow1[t - 1], &lin1));
        pow2.push(poly_mul(r, &pow2[t - 1], &lin2));
    }
    let mut m = Mat::from_fn(n + 1, n + 1, |_, _| r.zero());
    for t in 0..=n {
        let col = poly_mul(r, &pow1[t], &pow2[n - t]);
        for (s, x) in col.into_iter().enumerate() {
            m.set(s, t, x);
        }
    }
    m
}

impl CoeffAction for SymPadic {
    type R = Zpm;
    fn ring(&self) -> &Zpm {
        &self.z
    }
    fn dim(&self) -> usize {
        self.n + 1
    }
    fn matrix(&self, alg: &QuatAlgebra, y: &QuatElt) -> Result<Mat<u64>> {
        let sp = self.splitting.reduce(self.z.prec());
        if self.dual {
            let img = sp.image(&alg.inv(y)?)?;
            Ok(sym_matrix(&self.z, self.n, img).transpose())
        } else {
            let img = sp.image(y)?;
            Ok(sym_matrix(&self.z, self.n, img))
        }
    }
    fn dual(&self) -> Self {
        SymPadic { dual: !self.dual, ..self.clone() }
    }
    fn invariants(&self, mats: &[Mat<u64>]) -> Result<(Mat<u64>, Mat<u64>)> {
        // The averaging sum has the invariants as its rational image; its
        // saturation is the integral invariant lattice.
        let mut acc = zeros(&self.z, self.dim(), self.dim());
        for m in mats {
            acc = mat_add(&self.z, &acc, m);
        }
        let (basis, coords) = saturated_image(&self.z, &acc);
        for m in mats {
            let moved = mat_sub(&self.z, &mat_mul(&self.z, m, &basis), &basis);
            if !is_zero_mat(&self.z, &moved) {
                return Err(Error::Precision("invariant lattice not fixed at working precision".into()));
            }
        }
        Ok((basis, coords))
    }
}

/// Fixed vectors over a field, with a left inverse built from pivot rows.
pub fn field_invariants<R: Ring>(r: &R, dim: usize, mats: &[Mat<R::Elem>]) -> Result<(Mat<R::Elem>, Mat<R::Elem>)> {
    let id = identity(r, dim);
    let mut rows = Vec::new();
    for m in mats {
        let d = mat_sub(r, m, &id);
        for i in 0..dim {
            rows.push(d.row(i));
        }
    }
    let basis = if rows.is_empty() { id.clone() } else { kernel(r, &Mat::from_rows(rows)) };
    if basis.cols == 0 {
        return Ok((basis, Mat::from_fn(0, dim, |_, _| r.zero())));
    }
    let (_, piv) = rref(r, &basis.transpose());
    let sq = Mat::from_fn(basis.cols, basis.cols, |i, j| basis.get(piv[i], j).clone());
    let inv = inverse(r, &sq).ok_or_else(|| Error::Internal("singular pivot block".into()))?;
    let sel = Mat::from_fn(basis.cols, dim, |i, j| if piv[i] == j { r.one() } else { r.zero() });
    Ok((basis.clone(), mat_mul(r, &inv, &sel)))
}
