//! Search for an ℓ-new eigensystem congruent to a given old one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::oldnew::OldNewData;
use super::raise::{raise_hypothesis, Valuation};
use crate::arith::linalg::{
    identity, inverse, kernel, mat_mul, mat_pow, mat_sub, rank, saturated_image, scalar, solve, unit_kernel, Mat,
};
use crate::arith::rat::{is_prime, padic_val, rat, rat_mod, to_string_rat, Rat};
use crate::arith::ring::{RatField, Ring, Zpm};
use crate::autoforms::coeff::TrivialRat;
use crate::autoforms::eigen::{eigen_bound, rational_eigensystems, restrict};
use crate::autoforms::hecke::{hecke_operator, u_ell_operator, HeckeLabel};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A rational eigensystem of ker(i†).
    Exact,
    /// A nonzero joint generalized eigenspace mod p inside an integral
    /// structure of ker(i†).
    ModP,
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub p: u64,
    pub m: u32,
    pub kind: WitnessKind,
    pub labels: Vec<String>,
    pub old: Vec<String>,
    /// New eigenvalues (exact witnesses) or their residues mod p.
    pub new: Vec<String>,
    pub valuations: Vec<Valuation>,
    pub new_dim: usize,
    pub u_ell: Option<String>,
    /// Whether U_ℓ on the witness reduces to a root of X² − T_ℓX + ℓS_ℓ of
    /// the old system.
    pub u_ell_matches_root: Option<bool>,
}

/// Basis (columns) of ker(i†) over Q.
pub fn ell_new_subspace(d: &OldNewData<TrivialRat>) -> Mat<Rat> {
    kernel(&RatField, &d.idag_matrix())
}

/// Primes v ≤ bound not dividing the level of V or p.
pub fn test_primes(d: &OldNewData<TrivialRat>, bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&v| is_prime(v) && d.v.level.is_good(v)).collect()
}

/// Columns of an integral basis of the span of `k` that stays linearly
/// independent mod p.
fn p_saturate(k: &Mat<Rat>, p: u64) -> Mat<Rat> {
    let mut cols: Vec<Vec<Rat>> = (0..k.cols)
        .map(|j| {
            let c = k.col(j);
            let den = c.iter().fold(BigInt::from(1), |a, x| a.lcm(x.denom()));
            let g = c.iter().fold(BigInt::zero(), |a, x| a.gcd(&(x * Rat::from_integer(den.clone())).to_integer()));
            c.iter().map(|x| x * Rat::new(den.clone(), g.clone())).collect()
        })
        .collect();
    let z = Zpm::new(p, 1).unwrap();
    loop {
        let m = Mat::from_cols(&cols, k.rows);
        let red = m.map(|x| rat_mod(x, p).unwrap());
        let ker = unit_kernel(&z, &red);
        if ker.cols == 0 {
            return m;
        }
        let c = ker.col(0);
        let j = c.iter().position(|x| *x != 0).unwrap();
        let mut v = vec![Rat::zero(); k.rows];
        for (i, ci) in c.iter().enumerate() {
            let ci = z.lift_signed(*ci) as i64;
            for (a, b) in v.iter_mut().zip(&cols[i]) {
                *a += b * rat(ci);
            }
        }
        cols[j] = v.iter().map(|x| x / rat(p as i64)).collect();
    }
}

/// Looks for an eigensystem in ker(i†) agreeing with `old` modulo p^m at
/// every T_v for v ≤ v_bound prime to the level and p. `old` must contain
/// T_v for those v and T_ℓ, S_ℓ at the auxiliary prime.
pub fn witness_search(
    d: &OldNewData<TrivialRat>,
    old: &[(HeckeLabel, Rat)],
    p: u64,
    m: u32,
    v_bound: u64,
) -> Result<Option<CongruenceReport>> {
    let r = &RatField;
    let n = ell_new_subspace(d);
    if n.cols == 0 {
        return Ok(None);
    }
    let primes = test_primes(d, v_bound);
    let lookup = |l: HeckeLabel| {
        old.iter().find(|(x, _)| *x == l).map(|(_, a)| a.clone()).ok_or_else(|| Error::Input(format!("old system lacks {l}")))
    };
    let old_vals: Vec<Rat> = primes.iter().map(|&v| lookup(HeckeLabel::T(v))).collect::<Result<_>>()?;
    let roots = raise_hypothesis(&lookup(HeckeLabel::T(d.ell))?, &lookup(HeckeLabel::S(d.ell))?, d.ell, p)?.roots_mod_p;
    let ops: Vec<(HeckeLabel, Mat<Rat>)> = primes
        .iter()
        .map(|&v| Ok((HeckeLabel::T(v), restrict(&hecke_operator(&d.v, HeckeLabel::T(v))?.matrix, &n)?)))
        .collect::<Result<_>>()?;
    let u_new = restrict(&u_ell_operator(&d.v, d.ell)?, &n)?;
    let labels: Vec<String> = primes.iter().map(|v| format!("T{v}")).collect();
    let old_str: Vec<String> = old_vals.iter().map(to_string_rat).collect();

    let bounds: Vec<u64> = primes.iter().map(|&v| eigen_bound(HeckeLabel::T(v), 2, p)).collect();
    for sys in rational_eigensystems(&ops, &bounds)? {
        if !sys.is_rational() {
            continue;
        }
        let new: Vec<Rat> = sys.values.iter().map(|(_, v)| v.rational().unwrap().clone()).collect();
        let vals: Vec<Valuation> = new
            .iter()
            .zip(&old_vals)
            .map(|(a, b)| match padic_val(&(a - b), p).unwrap() {
                None => Valuation::Infinite,
                Some(e) => Valuation::Exact(e.max(0) as u32),
            })
            .collect();
        if vals.iter().all(|v| *v >= Valuation::Exact(m) || *v == Valuation::Infinite) {
            let ue = restrict(&u_new, &sys.basis)?;
            let u = ue.get(0, 0).clone();
            let uniform = ue == scalar(r, ue.rows, &u);
            let matches = uniform.then(|| rat_mod(&u, p).map_or(false, |x| roots.contains(&x)));
            return Ok(Some(CongruenceReport {
                p,
                m,
                kind: WitnessKind::Exact,
                labels,
                old: old_str,
                new: new.iter().map(to_string_rat).collect(),
                valuations: vals,
                new_dim: sys.multiplicity,
                u_ell: uniform.then(|| to_string_rat(&u)),
                u_ell_matches_root: matches,
            }));
        }
    }
    if m > 1 {
        return Ok(None);
    }
    // Deligne–Serre: a nonzero joint eigenspace mod p lifts to an eigensystem
    // in characteristic zero congruent to it.
    let z = Zpm::new(p, 1)?;
    let sat = p_saturate(&n, p);
    let c = solve(r, &n, &sat).ok_or_else(|| Error::Internal("saturation left the new subspace".into()))?;
    let cinv = inverse(r, &c).ok_or_else(|| Error::Internal("singular saturation".into()))?;
    let red = |a: &Mat<Rat>| -> Result<Mat<u64>> {
        let x = mat_mul(r, &cinv, &mat_mul(r, a, &c));
        let data = x.data.iter().map(|e| rat_mod(e, p).ok_or_else(|| Error::Internal("non-integral restriction".into()))).collect::<Result<Vec<_>>>()?;
        Ok(Mat { rows: x.rows, cols: x.cols, data })
    };
    let mut basis = identity(&z, sat.cols);
    let mut coords = identity(&z, sat.cols);
    let big = sat.cols as u64;
    for ((_, t), a) in ops.iter().zip(&old_vals) {
        let tm = mat_mul(&z, &coords, &mat_mul(&z, &red(t)?, &basis));
        let shifted = mat_sub(&z, &tm, &scalar(&z, tm.rows, &z.from_rat(a)?));
        let ker = kernel(&z, &mat_pow(&z, &shifted, big));
        if ker.cols == 0 {
            return Ok(None);
        }
        let (kb, kc) = saturated_image(&z, &ker);
        basis = mat_mul(&z, &basis, &kb);
        coords = mat_mul(&z, &kc, &coords);
    }
    let um = mat_mul(&z, &coords, &mat_mul(&z, &red(&u_new)?, &basis));
    let u_vals: Vec<u64> = (0..p).filter(|&x| rank(&z, &mat_sub(&z, &um, &scalar(&z, um.rows, &x))) < um.rows).collect();
    Ok(Some(CongruenceReport {
        p,
        m,
        kind: WitnessKind::ModP,
        labels,
        old: old_str,
        new: old_vals.iter().map(|a| rat_mod(a, p).map_or("?".into(), |x| x.to_string())).collect(),
        valuations: vec![Valuation::AtLeast(1); primes.len()],
        new_dim: basis.cols,
        u_ell: Some(format!("{u_vals:?}")),
        u_ell_matches_root: Some(u_vals.iter().any(|x| roots.contains(x))),
    }))
}
