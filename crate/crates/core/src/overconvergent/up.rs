//! U_p on truncated overconvergent forms and its characteristic series.

use serde::{Deserialize, Serialize};

use super::action::{monoid_action, TruncatedSpace};
use super::weight::{MonoidElt, WeightChar};
use crate::arith::linalg::{mat_mul, zeros, Mat};
use crate::arith::newton::{hensel_slope_factor, newton_polygon_partial, NewtonPolygon};
use crate::arith::padic::PadicApprox;
use crate::arith::poly::{fredholm_poly, UniPoly};
use crate::arith::rat::{int_val, rat, Rat};
use crate::arith::ring::{Ring, Zpm};
use crate::autoforms::hecke::u_lattices;
use crate::autoforms::space::{build_space_rational, LevelSpec};
use crate::error::{Error, Result};
use crate::quaternion::{local_splitting, ClassSet};

/// B = Ũ·diag(P_i·W/w_i) where Ũ is U_p on ⊕_i A (no invariance imposed),
/// P_i = Σ_{u ∈ Γ_i} u and W = lcm w_i. On Γ-invariant vectors B acts as
/// W·U_p, and det(1 − T·U_p) = det(1 − (T/W)·B).
#[derive(Clone, Debug)]
pub struct UpMatrix {
    pub z: Zpm,
    pub matrix: Mat<u64>,
    pub scale: u64,
    /// Truncation degree N (dimension per class is N+1).
    pub n: usize,
    pub h: usize,
}

impl UpMatrix {
    /// A bare matrix with no projector scaling.
    pub fn from_matrix(z: Zpm, matrix: Mat<u64>) -> Self {
        let n = matrix.rows.saturating_sub(1);
        UpMatrix { z, matrix, scale: 1, n, h: 1 }
    }

    /// Valuation of the projector scale W.
    pub fn scale_val(&self) -> u32 {
        int_val(&self.scale.into(), self.z.p())
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn add_block(z: &Zpm, out: &mut Mat<u64>, r0: usize, c0: usize, blk: &Mat<u64>) {
    for r in 0..blk.rows {
        for c in 0..blk.cols {
            let cur = *out.get(r0 + r, c0 + c);
            out.set(r0 + r, c0 + c, z.add(&cur, blk.get(r, c)));
        }
    }
}

/// Assemble U_p at level (q, M·p) on functions of degree ≤ N with
/// coefficients mod p^m. `act` gives the matrix of an element of M_1.
fn assemble_up(
    level: LevelSpec,
    classes: &ClassSet,
    z: &Zpm,
    dim: usize,
    mut act: impl FnMut(&MonoidElt) -> Result<Mat<u64>>,
) -> Result<(Mat<u64>, Vec<Mat<u64>>, Vec<u64>)> {
    if level.alpha != 1 {
        return Err(Error::Level("overconvergent U_p is implemented for α = 1".into()));
    }
    let space = build_space_rational(level, classes)?;
    let cs = &space.classes;
    let alg = &cs.algebra;
    let m = z.prec();
    let sp = local_splitting(alg, &cs.maximal, level.p, m)?;
    let h = cs.h();
    let mut ut = zeros(z, h * dim, h * dim);
    let mut projs = Vec::with_capacity(h);
    let mut ws = Vec::with_capacity(h);
    for (i, ci) in cs.classes.iter().enumerate() {
        for jl in u_lattices(&space, ci, level.p, 1)? {
            let (j, y) = cs.identify(&jl)?;
            let g = MonoidElt::from_residues(level.p, m, sp.image(&y)?)?;
            add_block(z, &mut ut, i * dim, j * dim, &act(&g)?);
        }
        let mut proj = zeros(z, dim, dim);
        for u in &ci.units {
            let g = MonoidElt::from_residues(level.p, m, sp.image(u)?)?;
            add_block(z, &mut proj, 0, 0, &act(&g)?);
        }
        projs.push(proj);
        ws.push(ci.units.len() as u64);
    }
    Ok((ut, projs, ws))
}

fn scaled(z: &Zpm, ut: &Mat<u64>, projs: &[Mat<u64>], ws: &[u64], dim: usize) -> (Mat<u64>, u64) {
    let w = ws.iter().fold(1, |a, &b| lcm(a, b));
    let h = projs.len();
    let mut diag = zeros(z, h * dim, h * dim);
    for (i, (p, wi)) in projs.iter().zip(ws).enumerate() {
        let c = z.from_i64((w / wi) as i64);
        let blk = Mat::from_fn(dim, dim, |r, s| z.mul(&c, p.get(r, s)));
        add_block(z, &mut diag, i * dim, i * dim, &blk);
    }
    (mat_mul(z, ut, &diag), w)
}

/// U_p on the truncated weight-κ space at level (q, M·p).
pub fn up_matrix(level: LevelSpec, weight: &WeightChar, n: usize, m: u32, classes: &ClassSet) -> Result<UpMatrix> {
    if weight.p != level.p {
        return Err(Error::Input("weight and level use different primes".into()));
    }
    let space = TruncatedSpace::new(weight.clone(), n, m)?;
    let z = space.ring();
    let (ut, projs, ws) = assemble_up(level, classes, &z, n + 1, |g| Ok(monoid_action(&space, g)?.matrix))?;
    let (matrix, scale) = scaled(&z, &ut, &projs, &ws, n + 1);
    Ok(UpMatrix { z, matrix, scale, n, h: projs.len() })
}

/// Same assembly with the Sym^(k-2) action on polynomials of degree ≤ k−2.
pub fn classical_up_matrix(level: LevelSpec, k: u32, m: u32, classes: &ClassSet) -> Result<UpMatrix> {
    let z = Zpm::new(level.p, m)?;
    let nk = (k - 2) as usize;
    let (ut, projs, ws) = assemble_up(level, classes, &z, nk + 1, |g| {
        Ok(crate::autoforms::coeff::sym_matrix(&z, nk, g.reduce(m).e))
    })?;
    let (matrix, scale) = scaled(&z, &ut, &projs, &ws, nk + 1);
    Ok(UpMatrix { z, matrix, scale, n: nk, h: projs.len() })
}

/// Lower bounds for v(c_j(B)): by Cauchy–Binet each j×j minor is divisible
/// by p to the sum of its row valuations, so c_j is divisible by p to the sum
/// of the j smallest. Row r of U_p is divisible by p^r, which makes this
/// grow quadratically.
fn row_hodge_bounds(up: &UpMatrix) -> Vec<i64> {
    let z = &up.z;
    let m = z.prec();
    let mut rows: Vec<u32> = (0..up.matrix.rows)
        .map(|i| (0..up.matrix.cols).map(|j| z.valuation(up.matrix.get(i, j)).unwrap_or(m).min(m)).min().unwrap_or(m))
        .collect();
    rows.sort();
    let mut acc = 0i64;
    let mut out = vec![0];
    for r in rows {
        acc += r as i64;
        out.push(acc);
    }
    out
}

/// Coefficients of det(1 − T·U_p), i.e. those of det(1 − T·B) divided by W^j.
pub fn char_series(up: &UpMatrix) -> Vec<PadicApprox> {
    let z = &up.z;
    let p = z.p();
    let hodge = row_hodge_bounds(up);
    let f = fredholm_poly(z, &up.matrix);
    let vw = up.scale_val() as i64;
    let wunit = up.scale / p.pow(vw as u32);
    let winv = z.inv(&(wunit % z.modulus())).expect("unit part of W");
    (0..=up.matrix.rows)
        .map(|j| {
            let c = f.coeff(z, j);
            let a = PadicApprox::from_residue(c, p, z.prec());
            match (a.v, a.u) {
                (Some(v), Some(u)) => {
                    let u = z.mul(&u, &z.pow(&winv, j as u64));
                    PadicApprox { p, m: a.m, v: Some(v - vw * j as i64), u: Some(u % p.pow(a.m)) }
                }
                _ => {
                    let lower = (z.prec() as i64).max(hodge[j]) - vw * j as i64;
                    PadicApprox { p, m: lower.max(0) as u32, v: None, u: None }
                }
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub polygon: NewtonPolygon,
    /// Slopes below this bound are trusted, min(m/2, (N+1)/2) − v_p(W).
    #[serde(with = "crate::serde_rat")]
    pub reliable_below: Rat,
}

impl SlopeReport {
    /// (slope, multiplicity) for segments that are hull-certified and below
    /// the reliability bound.
    pub fn certified(&self) -> Vec<(Rat, usize)> {
        self.polygon
            .segments
            .iter()
            .filter(|s| s.certified && s.slope < self.reliable_below)
            .map(|s| (s.slope.clone(), s.mult))
            .collect()
    }

    pub fn multiplicity_of(&self, slope: &Rat) -> usize {
        self.certified().iter().filter(|(s, _)| s == slope).map(|(_, d)| d).sum()
    }
}

/// Newton polygon of the characteristic series with a reliability bound.
pub fn char_series_slopes(up: &UpMatrix) -> Result<SlopeReport> {
    let coeffs = char_series(up);
    let polygon = newton_polygon_partial(&coeffs)?;
    let m = up.z.prec() as i64;
    let bound = rat(m.min(up.n as i64 + 1)) / rat(2) - rat(up.scale_val() as i64);
    Ok(SlopeReport { polygon, reliable_below: bound })
}

/// The slope-0 factor Π(1 − λT) of the characteristic series over Z/p^m;
/// needs W prime to p.
pub fn unit_root_factor(up: &UpMatrix) -> Result<UniPoly<u64>> {
    if up.scale_val() > 0 {
        return Err(Error::Precision("projector scale is divisible by p".into()));
    }
    let z = &up.z;
    let winv = z.inv(&(up.scale % z.modulus())).expect("W is a unit");
    let f = fredholm_poly(z, &up.matrix);
    let g = UniPoly::new(z, f.coeffs.iter().enumerate().map(|(j, c)| z.mul(c, &z.pow(&winv, j as u64))).collect());
    let (q, _, _) = hensel_slope_factor(z, &g, &Rat::from_integer(0.into()))?;
    Ok(q)
}

/// Residues mod p of the unit eigenvalues λ. The characteristic series is
/// integral and its slope-0 part of degree d is congruent mod p to its
/// truncation at degree d, so only c_0..c_d are needed mod p.
pub fn unit_eigenvalues_mod_p(up: &UpMatrix) -> Result<Vec<u64>> {
    let coeffs = char_series(up);
    let report = char_series_slopes(up)?;
    let zero = Rat::from_integer(0.into());
    let first = report.polygon.segments.first();
    let d = match first {
        Some(s) if s.slope == zero && s.certified => s.mult,
        Some(s) if s.slope > zero => 0,
        _ => return Err(Error::Precision("slope-0 part is not resolved".into())),
    };
    let p = up.z.p();
    let mut red = Vec::with_capacity(d + 1);
    for (j, c) in coeffs.iter().take(d + 1).enumerate() {
        if c.abs_prec() < 1 {
            return Err(Error::Precision(format!("coefficient {j} is not known mod p")));
        }
        red.push(match (c.v, c.u) {
            (Some(0), Some(u)) => u % p,
            (Some(v), _) if v > 0 => 0,
            (None, _) => 0,
            _ => return Err(Error::Internal(format!("coefficient {j} is not integral"))),
        });
    }
    let fp = Zpm::new(p, 1)?;
    let qb = UniPoly::new(&fp, red);
    Ok((1..p).filter(|&lam| qb.eval(&fp, &fp.inv(&lam).unwrap()) == 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::linalg::Mat;

    #[test]
    fn scalar_slope() {
        let z = Zpm::new(3, 6).unwrap();
        let up = UpMatrix::from_matrix(z, Mat::from_rows(vec![vec![18]]));
        let r = char_series_slopes(&up).unwrap();
        assert_eq!(r.polygon.slopes(), vec![(rat(2), 1)]);
    }
}
