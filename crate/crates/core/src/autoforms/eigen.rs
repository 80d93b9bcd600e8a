//! Simultaneous generalized eigenspaces of commuting operators over Q.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::hecke::{HeckeLabel, HeckeMatrix};
use crate::arith::linalg::{identity, kernel, mat_add, mat_mul, mat_pow, mat_scale, solve, zeros, Mat};
use crate::arith::poly::{char_poly, UniPoly};
use crate::arith::rat::{rat, to_string_rat, Rat};
use crate::arith::ring::RatField;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigenvalue {
    Rational(Rat),
    /// A root of this factor of the characteristic polynomial (ascending
    /// coefficients) having no rational roots.
    Factor(Vec<Rat>),
}

impl Eigenvalue {
    pub fn rational(&self) -> Option<&Rat> {
        match self {
            Eigenvalue::Rational(a) => Some(a),
            Eigenvalue::Factor(_) => None,
        }
    }

    fn json(&self) -> Value {
        match self {
            Eigenvalue::Rational(a) => Value::String(to_string_rat(a)),
            Eigenvalue::Factor(f) => json!({"factor": f.iter().map(to_string_rat).collect::<Vec<_>>()}),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<(HeckeLabel, Eigenvalue)>,
    pub multiplicity: usize,
    /// Columns spanning the joint generalized eigenspace.
    pub basis: Mat<Rat>,
}

impl EigenSystem {
    pub fn get(&self, label: HeckeLabel) -> Option<&Eigenvalue> {
        self.values.iter().find(|(l, _)| *l == label).map(|(_, v)| v)
    }

    pub fn rational(&self, label: HeckeLabel) -> Option<Rat> {
        self.get(label).and_then(|v| v.rational().cloned())
    }

    pub fn is_rational(&self) -> bool {
        self.values.iter().all(|(_, v)| v.rational().is_some())
    }

    pub fn to_json(&self) -> Value {
        let vals: serde_json::Map<String, Value> = self.values.iter().map(|(l, v)| (l.to_string(), v.json())).collect();
        json!({"eigenvalues": vals, "multiplicity": self.multiplicity})
    }
}

/// Matrix of an operator on the invariant subspace spanned by `basis`.
pub fn restrict(t: &Mat<Rat>, basis: &Mat<Rat>) -> Result<Mat<Rat>> {
    solve(&RatField, basis, &mat_mul(&RatField, t, basis))
        .ok_or_else(|| Error::Internal("subspace is not stable under the operator".into()))
}

/// Largest absolute value an eigenvalue of the operator can have at weight k.
pub fn eigen_bound(label: HeckeLabel, k: u32, p: u64) -> u64 {
    match label {
        HeckeLabel::T(l) => l.pow(k - 1) + l.pow(k - 2),
        HeckeLabel::S(l) => l.pow(k - 2),
        HeckeLabel::U => p.pow(k - 1),
    }
}

fn divide_linear(f: &UniPoly<Rat>, a: &Rat) -> UniPoly<Rat> {
    let n = f.coeffs.len() - 1;
    let mut q = vec![Rat::zero(); n];
    let mut carry = Rat::zero();
    for i in (0..n).rev() {
        carry = &f.coeffs[i + 1] + &carry * a;
        q[i] = carry.clone();
    }
    UniPoly::new(&RatField, q)
}

/// Integer roots in [-bound, bound] with multiplicities, and the cofactor.
pub fn integer_roots(f: &UniPoly<Rat>, bound: u64) -> (Vec<(Rat, usize)>, UniPoly<Rat>) {
    let mut g = f.clone();
    let mut out = Vec::new();
    let b = bound as i64;
    for a in -b..=b {
        let x = rat(a);
        let mut e = 0;
        while g.degree().unwrap_or(0) > 0 && g.eval(&RatField, &x).is_zero() {
            g = divide_linear(&g, &x);
            e += 1;
        }
        if e > 0 {
            out.push((x, e));
        }
    }
    (out, g)
}

fn poly_of_matrix(f: &UniPoly<Rat>, a: &Mat<Rat>) -> Mat<Rat> {
    let r = &RatField;
    let mut acc = zeros(r, a.rows, a.cols);
    for c in f.coeffs.iter().rev() {
        acc = mat_add(r, &mat_mul(r, &acc, a), &mat_scale(r, c, &identity(r, a.rows)));
    }
    acc
}

/// Joint generalized eigenspaces of pairwise commuting operators, split
/// operator by operator. Eigenvalues are searched among integers bounded by
/// `bounds[i]`; what remains of each characteristic polynomial is kept as a
/// single factor block.
pub fn rational_eigensystems(ops: &[(HeckeLabel, Mat<Rat>)], bounds: &[u64]) -> Result<Vec<EigenSystem>> {
    let r = &RatField;
    let dim = ops.first().map_or(0, |(_, m)| m.rows);
    let mut systems = vec![EigenSystem { values: vec![], multiplicity: dim, basis: identity(r, dim) }];
    for ((label, t), &bound) in ops.iter().zip(bounds) {
        let mut next = Vec::new();
        for sys in systems {
            let a = restrict(t, &sys.basis)?;
            let f = char_poly(r, &a);
            let (roots, rest) = integer_roots(&f, bound);
            let mut pieces: Vec<(Eigenvalue, Mat<Rat>)> = Vec::new();
            for (x, e) in roots {
                let shifted = mat_add(r, &a, &mat_scale(r, &-x.clone(), &identity(r, a.rows)));
                pieces.push((Eigenvalue::Rational(x), kernel(r, &mat_pow(r, &shifted, e as u64))));
            }
            if rest.degree().unwrap_or(0) > 0 {
                pieces.push((Eigenvalue::Factor(rest.coeffs.clone()), kernel(r, &poly_of_matrix(&rest, &a))));
            }
            for (v, k) in pieces {
                let mut values = sys.values.clone();
                values.push((*label, v));
                next.push(EigenSystem { values, multiplicity: k.cols, basis: mat_mul(r, &sys.basis, &k) });
            }
        }
        systems = next;
    }
    Ok(systems)
}

/// Eigensystems of Hecke matrices on a weight-k space, with the default
/// bounds.
pub fn eigensystems(ops: &[HeckeMatrix<Rat>]) -> Result<Vec<EigenSystem>> {
    let labeled: Vec<(HeckeLabel, Mat<Rat>)> = ops.iter().map(|h| (h.label, h.matrix.clone())).collect();
    let bounds: Vec<u64> = ops.iter().map(|h| eigen_bound(h.label, h.weight.k, h.level.p)).collect();
    rational_eigensystems(&labeled, &bounds)
}

/// Largest absolute value of an entry.
pub fn max_abs(m: &Mat<Rat>) -> Rat {
    m.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}
