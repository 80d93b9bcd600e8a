//! Newton polygons of Fredholm-type polynomials and slope factorization.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::padic::PadicApprox;
use super::poly::UniPoly;
use super::rat::{rat, Rat};
use super::ring::{Ring, Zpm};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "crate::serde_rat")]
    pub slope: Rat,
    pub mult: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Slope multiset as (slope, multiplicity) pairs.
    pub fn slopes(&self) -> Vec<(Rat, usize)> {
        self.segments.iter().map(|s| (s.slope.clone(), s.mult)).collect()
    }

    pub fn certified(&self) -> Vec<(Rat, usize)> {
        self.segments.iter().filter(|s| s.certified).map(|s| (s.slope.clone(), s.mult)).collect()
    }

    pub fn multiplicity_of(&self, slope: &Rat) -> usize {
        self.segments.iter().filter(|s| &s.slope == slope).map(|s| s.mult).sum()
    }
}

enum Pt {
    Known(i64, Rat),
    Bound(i64, Rat),
}

fn points(coeffs: &[PadicApprox]) -> Vec<Pt> {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| match c.v {
            Some(v) => Pt::Known(i as i64, rat(v)),
            None => Pt::Bound(i as i64, rat(c.abs_prec())),
        })
        .collect()
}

/// Lower convex hull of (i, v(a_i)); slopes are read left to right, so a
/// segment of slope s and length d means d reciprocal roots of valuation s.
/// Segments are flagged uncertified when a coefficient that is zero at
/// working precision could still pull the hull below them.
pub fn newton_polygon_partial(coeffs: &[PadicApprox]) -> Result<NewtonPolygon> {
    let pts = points(coeffs);
    let known: Vec<(i64, Rat)> = pts
        .iter()
        .filter_map(|p| match p {
            Pt::Known(i, v) => Some((*i, v.clone())),
            _ => None,
        })
        .collect();
    if known.is_empty() {
        return Err(Error::Precision("all coefficients vanish at working precision".into()));
    }
    let mut hull: Vec<(i64, Rat)> = Vec::new();
    for pt in &known {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // drop the middle point when it lies on or above the chord
            let lhs = (y2 - y1) * rat(pt.0 - x1);
            let rhs = (&pt.1 - y1) * rat(x2 - x1);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt.clone());
    }
    let mut segments: Vec<Segment> = Vec::new();
    let mut ok = true;
    for w in hull.windows(2) {
        let (x1, y1) = &w[0];
        let (x2, y2) = &w[1];
        let slope = (y2 - y1) / rat(x2 - x1);
        for p in &pts {
            if let Pt::Bound(i, b) = p {
                if *b < y1 + &slope * rat(i - x1) {
                    ok = false;
                }
            }
        }
        segments.push(Segment { slope, mult: (x2 - x1) as usize, certified: ok });
    }
    Ok(NewtonPolygon { segments })
}

/// Newton polygon of a polynomial with unit constant term; any vertex that
/// cannot be resolved at working precision is an error.
pub fn newton_polygon(coeffs: &[PadicApprox]) -> Result<NewtonPolygon> {
    match coeffs.first().and_then(|c| c.v) {
        Some(0) => {}
        _ => return Err(Error::Input("constant term must be a p-adic unit".into())),
    }
    let np = newton_polygon_partial(coeffs)?;
    let mut idx = 0;
    for s in &np.segments {
        if !s.certified {
            return Err(Error::Precision(format!("hull vertex after index {idx} is not resolved")));
        }
        idx += s.mult;
    }
    let last_known = coeffs.iter().rposition(|c| c.v.is_some()).unwrap();
    if let Some(bad) = (last_known + 1..coeffs.len()).next() {
        return Err(Error::Precision(format!("coefficient {bad} is zero at working precision")));
    }
    Ok(np)
}

/// Coefficient data of a polynomial over Z/p^m.
pub fn padic_coeffs(z: &Zpm, f: &UniPoly<u64>) -> Vec<PadicApprox> {
    f.coeffs.iter().map(|&c| PadicApprox::from_residue(c, z.p(), z.prec())).collect()
}

/// Factor f = Q·S over Z/p^m with Q carrying the reciprocal roots of slope
/// <= bound and S the rest, both normalized to constant term 1. Returns the
/// precision exponent m' to which the factorization is certified.
pub fn hensel_slope_factor(
    z: &Zpm,
    f: &UniPoly<u64>,
    bound: &Rat,
) -> Result<(UniPoly<u64>, UniPoly<u64>, u32)> {
    let np = newton_polygon(&padic_coeffs(z, f))?;
    let d: usize = np.segments.iter().filter(|s| &s.slope <= bound).map(|s| s.mult).sum();
    let has_positive_below = np.segments.iter().any(|s| s.slope > Rat::zero() && &s.slope <= bound);
    if has_positive_below {
        return Err(Error::Input("slope bounds covering positive slopes are not supported".into()));
    }
    if bound < &Rat::zero() && np.segments.iter().any(|s| s.slope == Rat::zero()) {
        return Err(Error::FactorizationUndefined(format!("bound {bound} cuts through slope 0")));
    }
    let p = z.p();
    let fp = Zpm::new(p, 1)?;
    let red = |g: &UniPoly<u64>| UniPoly::new(&fp, g.coeffs.iter().map(|c| c % p).collect());
    let mut q = red(f);
    if q.degree() != Some(d) {
        return Err(Error::Internal("unit part of the reduction has the wrong degree".into()));
    }
    q = UniPoly::new(z, q.coeffs.clone());
    let mut s = UniPoly::one(z);
    let qbar = red(&q);
    for k in 1..z.prec() {
        let e = f.sub(z, &q.mul(z, &s));
        let pk = p.pow(k);
        if e.coeffs.iter().any(|c| c % pk != 0) {
            return Err(Error::Internal("Hensel step lost divisibility".into()));
        }
        let eps = UniPoly::new(&fp, e.coeffs.iter().map(|c| (c / pk) % p).collect());
        let (t, r) = divmod(&fp, &eps, &qbar)?;
        let lift = |g: &UniPoly<u64>| UniPoly::new(z, g.coeffs.iter().map(|c| z.mul(c, &pk)).collect());
        q = q.add(z, &lift(&r));
        s = s.add(z, &lift(&t));
    }
    let c0 = q.coeff(z, 0);
    let c0inv = z.inv(&c0).ok_or_else(|| Error::Internal("non-unit constant term".into()))?;
    let q = UniPoly::new(z, q.coeffs.iter().map(|c| z.mul(c, &c0inv)).collect());
    let s = UniPoly::new(z, s.coeffs.iter().map(|c| z.mul(c, &c0)).collect());
    Ok((q, s, z.prec()))
}

/// Euclidean division by a polynomial with unit leading coefficient.
pub fn divmod<R: Ring>(
    r: &R,
    a: &UniPoly<R::Elem>,
    b: &UniPoly<R::Elem>,
) -> Result<(UniPoly<R::Elem>, UniPoly<R::Elem>)> {
    let db = b.degree().ok_or_else(|| Error::Input("division by zero polynomial".into()))?;
    let lead_inv = r
        .inv(&b.coeffs[db])
        .ok_or_else(|| Error::Input("divisor leading coefficient is not a unit".into()))?;
    let mut rem = a.coeffs.clone();
    let mut quo = vec![r.zero(); rem.len().saturating_sub(db).max(1)];
    while rem.len() > db && !rem.is_empty() {
        let top = rem.len() - 1;
        let c = r.mul(&rem[top], &lead_inv);
        let shift = top - db;
        for (i, bc) in b.coeffs.iter().enumerate() {
            rem[shift + i] = r.sub(&rem[shift + i], &r.mul(&c, bc));
        }
        quo[shift] = c;
        rem.pop();
    }
    Ok((UniPoly::new(r, quo), UniPoly::new(r, rem)))
}
