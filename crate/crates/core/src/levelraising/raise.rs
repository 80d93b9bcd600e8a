//! The level-raising quantity T_ℓ² − (ℓ+1)²S_ℓ and its valuation along an
//! ordinary family.

use serde::Serialize;

use crate::arith::linalg::{mat_mul, mat_pow, mat_sub, saturated_image, scalar, smith, unit_kernel, Mat};
use crate::arith::rat::{padic_val, rat, rat_mod, to_string_rat, Rat};
use crate::arith::ring::{Ring, Zpm};
use crate::autoforms::eigen::eigensystems;
use crate::autoforms::hecke::{hecke_operator, HeckeLabel};
use crate::autoforms::space::{build_space_padic, build_space_rational, ClassicalWeight, LevelSpec};
use crate::error::{Error, Result};
use crate::quaternion::ClassSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Exact(u32),
    /// Zero at the working precision.
    AtLeast(u32),
    Infinite,
}

#[derive(Clone, Debug, Serialize)]
pub struct RaiseData {
    pub ell: u64,
    pub p: u64,
    pub value: String,
    pub valuation: Valuation,
    /// X² − T_ℓX + ℓS_ℓ, ascending.
    pub hecke_poly: [String; 3],
    /// Roots of the Hecke polynomial mod p when the valuation is positive.
    pub roots_mod_p: Vec<u64>,
}

fn roots_mod_p(c: [i128; 3], p: u64) -> Vec<u64> {
    let pi = p as i128;
    (0..p).filter(|&x| (c[0] + c[1] * x as i128 + c[2] * (x as i128) * (x as i128)).rem_euclid(pi) == 0).collect()
}

/// Exact version for rational eigenvalues.
pub fn raise_hypothesis(t: &Rat, s: &Rat, ell: u64, p: u64) -> Result<RaiseData> {
    let l1 = rat(ell as i64 + 1);
    let d = t * t - &l1 * &l1 * s;
    let valuation = match padic_val(&d, p)? {
        None => Valuation::Infinite,
        Some(v) => Valuation::Exact(v.max(0) as u32),
    };
    let c0 = rat(ell as i64) * s;
    let roots = if valuation != Valuation::Exact(0) {
        let red = |x: &Rat| rat_mod(x, p).map(|r| r as i128);
        match (red(&c0), red(t)) {
            (Some(a), Some(b)) => roots_mod_p([a, -b, 1], p),
            _ => vec![],
        }
    } else {
        vec![]
    };
    Ok(RaiseData {
        ell,
        p,
        value: to_string_rat(&d),
        valuation,
        hecke_poly: [to_string_rat(&c0), to_string_rat(&-t.clone()), "1".into()],
        roots_mod_p: roots,
    })
}

/// Version for eigenvalues known modulo p^m.
pub fn raise_hypothesis_mod(z: &Zpm, t: u64, s: u64, ell: u64) -> RaiseData {
    let l1 = z.from_i64(ell as i64 + 1);
    let d = z.sub(&z.mul(&t, &t), &z.mul(&z.mul(&l1, &l1), &s));
    let valuation = match z.valuation(&d) {
        Some(v) => Valuation::Exact(v),
        None => Valuation::AtLeast(z.prec()),
    };
    let c0 = z.mul(&z.from_i64(ell as i64), &s);
    let roots = if valuation != Valuation::Exact(0) {
        roots_mod_p([c0 as i128, -(t as i128), 1], z.p())
    } else {
        vec![]
    };
    RaiseData {
        ell,
        p: z.p(),
        value: z.lift_signed(d).to_string(),
        valuation,
        hecke_poly: [z.lift_signed(c0).to_string(), (-z.lift_signed(t)).to_string(), "1".into()],
        roots_mod_p: roots,
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub q: u64,
    /// Eichler level of the seed; its p-part becomes α (at least 1).
    pub level: u64,
    pub p: u64,
    pub ell: u64,
    pub weights: Vec<u32>,
    pub prec: u32,
    pub branch_primes: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub k: u32,
    /// Rank of the ordinary part congruent to the seed.
    pub rank: usize,
    /// Valuations of T_ℓ² − (ℓ+1)²S_ℓ on that part (one per elementary
    /// divisor when the rank exceeds 1).
    pub valuations: Vec<Valuation>,
    pub ambiguous: bool,
    pub t_ell: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub q: u64,
    pub tame_level: u64,
    pub p: u64,
    pub alpha: u32,
    pub ell: u64,
    pub prec: u32,
    pub branch_primes: Vec<u64>,
    /// Seed eigenvalues a_v at weight 2 for the branch primes, then U_p.
    pub seed: Vec<(String, String)>,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn valuation(&self, k: u32) -> Option<Valuation> {
        self.rows.iter().find(|r| r.k == k && r.rank == 1).and_then(|r| r.valuations.first().copied())
    }
}

/// Level of the scan: tame part of `level` with α = max(1, v_p(level)).
pub fn scan_level(q: u64, level: u64, p: u64) -> Result<LevelSpec> {
    let mut lv = LevelSpec::from_level(q, level, p)?;
    lv.alpha = lv.alpha.max(1);
    Ok(lv)
}

/// The weight-2 cuspidal p-ordinary systems with rational eigenvalues.
pub fn ordinary_seeds(lv: LevelSpec, classes: &ClassSet, branch: &[u64]) -> Result<Vec<Vec<(HeckeLabel, Rat)>>> {
    let sp = build_space_rational(lv, classes)?;
    let mut ops = Vec::new();
    for &v in branch {
        ops.push(hecke_operator(&sp, HeckeLabel::T(v))?);
    }
    ops.push(hecke_operator(&sp, HeckeLabel::U)?);
    let mut out = Vec::new();
    for sys in eigensystems(&ops)? {
        if !sys.is_rational() {
            continue;
        }
        let vals: Vec<(HeckeLabel, Rat)> = sys.values.iter().map(|(l, v)| (*l, v.rational().unwrap().clone())).collect();
        let up = &vals.last().unwrap().1;
        let unit = padic_val(up, lv.p)? == Some(0);
        let eis = vals.iter().all(|(l, a)| match l {
            HeckeLabel::T(v) => *a == rat(*v as i64 + 1),
            _ => true,
        });
        if unit && !eis {
            out.push(vals);
        }
    }
    Ok(out)
}

/// Matrix of `a` on the submodule with basis columns `b` and coordinate
/// rows `c`.
fn restrict_mod(z: &Zpm, a: &Mat<u64>, b: &Mat<u64>, c: &Mat<u64>) -> Mat<u64> {
    mat_mul(z, c, &mat_mul(z, a, b))
}

/// Valuations of T_ℓ² − (ℓ+1)²S_ℓ on the ordinary branch through a weight-2
/// seed, across the weights in the configuration.
pub fn hida_slice_scan(cfg: &ScanConfig, classes: &ClassSet) -> Result<ScanReport> {
    let lv = scan_level(cfg.q, cfg.level, cfg.p)?;
    if !lv.is_good(cfg.ell) {
        return Err(Error::Input(format!("ℓ = {} must not divide {}", cfg.ell, cfg.q * lv.m * cfg.p)));
    }
    let branch: Vec<u64> = cfg.branch_primes.iter().copied().filter(|&v| lv.is_good(v) && v != cfg.ell).collect();
    if branch.is_empty() {
        return Err(Error::Input("no usable branch primes".into()));
    }
    let seeds = ordinary_seeds(lv, classes, &branch)?;
    let seed = seeds.first().ok_or_else(|| {
        Error::Input(format!("no p-ordinary cuspidal weight-2 system with rational eigenvalues at level {}", lv.eichler_level()))
    })?;
    let mut rows = Vec::new();
    for &k in &cfg.weights {
        let z = Zpm::new(cfg.p, cfg.prec)?;
        let sp = build_space_padic(lv, ClassicalWeight::new(k)?, cfg.prec, classes)?;
        let op = |l: HeckeLabel| hecke_operator(&sp, l).map(|h| h.matrix);
        let big = (cfg.prec as u64) * (sp.dim as u64).max(1);
        let (mut basis, mut coords) = saturated_image(&z, &mat_pow(&z, &op(HeckeLabel::U)?, big));
        for (l, a) in seed.iter().filter(|(l, _)| matches!(l, HeckeLabel::T(_))) {
            let t = restrict_mod(&z, &op(*l)?, &basis, &coords);
            let shifted = mat_sub(&z, &t, &scalar(&z, t.rows, &z.from_rat(a)?));
            let ker = unit_kernel(&z, &mat_pow(&z, &shifted, big));
            let (kb, kc) = saturated_image(&z, &ker);
            basis = mat_mul(&z, &basis, &kb);
            coords = mat_mul(&z, &kc, &coords);
        }
        let rank = basis.cols;
        let t = restrict_mod(&z, &op(HeckeLabel::T(cfg.ell))?, &basis, &coords);
        let s = restrict_mod(&z, &op(HeckeLabel::S(cfg.ell))?, &basis, &coords);
        let (valuations, t_ell) = if rank == 1 {
            let r = raise_hypothesis_mod(&z, *t.get(0, 0), *s.get(0, 0), cfg.ell);
            (vec![r.valuation], Some(z.lift_signed(*t.get(0, 0)).to_string()))
        } else {
            let l1 = z.from_i64(cfg.ell as i64 + 1);
            let d = mat_sub(&z, &mat_mul(&z, &t, &t), &mat_mul(&z, &scalar(&z, rank, &z.mul(&l1, &l1)), &s));
            let sm = smith(&z, &d);
            let mut v: Vec<Valuation> = sm.vals.iter().map(|&e| Valuation::Exact(e)).collect();
            v.resize(rank, Valuation::AtLeast(cfg.prec));
            (v, None)
        };
        rows.push(ScanRow { k, rank, valuations, ambiguous: rank != 1 || seeds.len() > 1, t_ell });
    }
    Ok(ScanReport {
        q: cfg.q,
        tame_level: lv.m,
        p: cfg.p,
        alpha: lv.alpha,
        ell: cfg.ell,
        prec: cfg.prec,
        branch_primes: branch,
        seed: seed.iter().map(|(l, a)| (l.to_string(), to_string_rat(a))).collect(),
        rows,
    })
}
