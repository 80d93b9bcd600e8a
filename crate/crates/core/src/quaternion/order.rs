//! Maximal and Eichler orders, and explicit splittings at split primes.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::algebra::{aux_prime_for, rat_sqrt, QuatAlgebra, QuatElt};
use super::lattice::Lattice;
use crate::arith::padic::sqrt_mod_prime_power;
use crate::arith::rat::{is_prime, prime_factors, rat, rat_frac, rat_mod, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order {
    pub lattice: Lattice,
    /// Eichler level; 1 for a maximal order.
    pub level: u64,
}

impl Order {
    pub fn basis(&self) -> Vec<QuatElt> {
        self.lattice.basis()
    }
}

impl QuatAlgebra {
    /// |det(trd(e_r e_s))| = disc², returned as disc.
    pub fn discriminant(&self, l: &Lattice) -> Rat {
        let b = l.basis();
        let m: Vec<Vec<Rat>> =
            (0..4).map(|r| (0..4).map(|s| self.trd(&self.mul(&b[r], &b[s]))).collect()).collect();
        let d = det4(&m);
        rat_sqrt(&d.abs()).expect("discriminant is a square")
    }

    /// Basis products stay in the lattice, 1 is in it, and norms and traces
    /// of basis elements are integral.
    pub fn is_order(&self, l: &Lattice) -> bool {
        let b = l.basis();
        l.contains(&QuatElt::one())
            && b.iter().all(|x| self.nrd(x).is_integer() && self.trd(x).is_integer())
            && b.iter().all(|x| b.iter().all(|y| l.contains(&self.mul(x, y))))
    }
}

fn det4(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut d = Rat::zero();
    for c in 0..n {
        let minor: Vec<Vec<Rat>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect()).collect();
        let t = &m[0][c] * det4(&minor);
        if c % 2 == 0 {
            d += t;
        } else {
            d -= t;
        }
    }
    d
}

fn q4(c: [(i64, i64); 4]) -> QuatElt {
    QuatElt(c.iter().map(|&(n, d)| rat_frac(n, d)).collect())
}

/// A maximal order of discriminant q, from the standard bases per q mod 8.
pub fn maximal_order(alg: &QuatAlgebra) -> Result<Order> {
    let q = alg.q;
    let gens = match q {
        2 => vec![q4([(1, 1), (0, 1), (0, 1), (0, 1)]), q4([(0, 1), (1, 1), (0, 1), (0, 1)]), q4([(0, 1), (0, 1), (1, 1), (0, 1)]), q4([(1, 2), (1, 2), (1, 2), (1, 2)])],
        _ if q % 4 == 3 => vec![q4([(1, 1), (0, 1), (0, 1), (0, 1)]), q4([(0, 1), (1, 1), (0, 1), (0, 1)]), q4([(1, 2), (0, 1), (1, 2), (0, 1)]), q4([(0, 1), (1, 2), (0, 1), (1, 2)])],
        _ if q % 8 == 5 => vec![q4([(1, 2), (0, 1), (1, 2), (1, 2)]), q4([(0, 1), (1, 4), (1, 2), (1, 4)]), q4([(0, 1), (0, 1), (1, 1), (0, 1)]), q4([(0, 1), (0, 1), (0, 1), (1, 1)])],
        _ => {
            let r = aux_prime_for(q).unwrap() as i64;
            let c = (0..r).find(|c| (c * c * q as i64 + 1) % r == 0).ok_or_else(|| Error::Internal("no c with r | c²q+1".into()))?;
            vec![q4([(1, 2), (0, 1), (1, 2), (0, 1)]), q4([(0, 1), (1, 2), (0, 1), (1, 2)]), q4([(0, 1), (0, 1), (1, r), (c, r)]), q4([(0, 1), (0, 1), (0, 1), (1, 1)])]
        }
    };
    let lattice = Lattice::from_gens(&gens)?;
    if !alg.is_order(&lattice) || alg.discriminant(&lattice) != rat(q as i64) {
        return Err(Error::Internal(format!("maximal order for q={q} failed its checks")));
    }
    Ok(Order { lattice, level: 1 })
}

/// Images of 1, i, j, k in M_2(Z/s^m), entries row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSplitting {
    pub s: u64,
    pub m: u32,
    pub images: [[u64; 4]; 4],
}

impl LocalSplitting {
    pub fn modulus(&self) -> u64 {
        self.s.pow(self.m)
    }

    /// Image of an s-integral element.
    pub fn image(&self, x: &QuatElt) -> Result<[u64; 4]> {
        let md = self.modulus();
        let mut out = [0u64; 4];
        for (c, img) in x.0.iter().zip(self.images.iter()) {
            let r = rat_mod(c, md).ok_or_else(|| Error::Input(format!("{x:?} is not {}-integral", self.s)))?;
            for t in 0..4 {
                out[t] = ((out[t] as u128 + r as u128 * img[t] as u128) % md as u128) as u64;
            }
        }
        Ok(out)
    }

    pub fn reduce(&self, m: u32) -> LocalSplitting {
        let md = self.s.pow(m);
        let mut images = self.images;
        for row in images.iter_mut() {
            for x in row.iter_mut() {
                *x %= md;
            }
        }
        LocalSplitting { s: self.s, m, images }
    }
}

pub fn mat2_mul(a: &[u64; 4], b: &[u64; 4], md: u64) -> [u64; 4] {
    let mm = md as u128;
    let f = |x: u64, y: u64, z: u64, w: u64| ((x as u128 * y as u128 + z as u128 * w as u128) % mm) as u64;
    [f(a[0], b[0], a[1], b[2]), f(a[0], b[1], a[1], b[3]), f(a[2], b[0], a[3], b[2]), f(a[2], b[1], a[3], b[3])]
}

pub fn mat2_det(a: &[u64; 4], md: u64) -> u64 {
    let mm = md as u128;
    ((a[0] as u128 * a[3] as u128 % mm + mm - a[1] as u128 * a[2] as u128 % mm) % mm) as u64
}

/// Splitting at an odd prime s ≠ q: i ↦ [[0,1],[a,0]], j ↦ [[u,v],[-av,-u]]
/// with u² - a v² = b. The smallest v admitting a unit u is used and u is
/// the Hensel lift of the smallest residue root, so the construction is
/// compatible across precisions.
pub fn local_splitting(alg: &QuatAlgebra, order: &Order, s: u64, m: u32) -> Result<LocalSplitting> {
    if s == alg.q {
        return Err(Error::RamifiedPlace(s));
    }
    if s == 2 || !is_prime(s) {
        return Err(Error::Input(format!("splitting needs an odd prime, got {s}")));
    }
    let md = s.checked_pow(m).filter(|&x| x < 1 << 62).ok_or_else(|| Error::Precision(format!("{s}^{m} too large")))?;
    let a = (alg.a as i128).rem_euclid(md as i128) as u64;
    let b = (alg.b as i128).rem_euclid(md as i128) as u64;
    let mm = md as u128;
    let mut found = None;
    for v in 0..s {
        let t = ((b as u128 + a as u128 * (v * v) as u128) % mm) as u64;
        if t % s == 0 {
            continue;
        }
        if let Some(u) = sqrt_mod_prime_power(t, s, m) {
            found = Some((u, v));
            break;
        }
    }
    let (u, v) = found.ok_or_else(|| Error::Internal(format!("no splitting found at {s}")))?;
    let neg = |x: u64| (md - x % md) % md;
    let one = [1, 0, 0, 1];
    let i = [0, 1, a, 0];
    let j = [u, v, neg((a as u128 * v as u128 % mm) as u64), neg(u)];
    let k = mat2_mul(&i, &j, md);
    let sp = LocalSplitting { s, m, images: [one, i, j, k] };
    for e in order.basis() {
        let img = sp.image(&e)?;
        let n = rat_mod(&alg.nrd(&e), md).unwrap();
        if mat2_det(&img, md) != n {
            return Err(Error::Internal("splitting does not preserve norms".into()));
        }
    }
    Ok(sp)
}

/// Suborder of elements whose image at each prime of `level` is upper
/// triangular modulo the prime power.
pub fn eichler_order(alg: &QuatAlgebra, order: &Order, level: u64, splittings: &[LocalSplitting]) -> Result<Order> {
    if level % alg.q == 0 {
        return Err(Error::Input(format!("level {level} is not prime to {}", alg.q)));
    }
    let mut lat = order.lattice.clone();
    for (s, e) in prime_factors(level) {
        let sp = splittings
            .iter()
            .find(|sp| sp.s == s && sp.m >= e)
            .ok_or_else(|| Error::Input(format!("missing splitting at {s} to precision {e}")))?
            .reduce(e);
        let md = s.pow(e);
        let lower: Vec<u64> = lat.basis().iter().map(|b| sp.image(b).map(|im| im[2])).collect::<Result<_>>()?;
        lat = lat.sublattice_mod(&[lower], md);
    }
    let out = Order { lattice: lat, level: order.level * level };
    let disc = alg.discriminant(&out.lattice);
    if !alg.is_order(&out.lattice) || disc != rat((alg.q * out.level) as i64) {
        return Err(Error::Internal(format!("Eichler order of level {level} has discriminant {disc}")));
    }
    Ok(out)
}

/// Convenience: the Eichler order of level `level` inside the standard
/// maximal order, with splittings built on demand.
pub fn standard_eichler(alg: &QuatAlgebra, level: u64) -> Result<(Order, Order)> {
    let max = maximal_order(alg)?;
    let mut sps = Vec::new();
    for (s, e) in prime_factors(level) {
        if s == 2 {
            return Err(Error::Input("Eichler level must be odd".into()));
        }
        sps.push(local_splitting(alg, &max, s, e)?);
    }
    let eich = if level == 1 { max.clone() } else { eichler_order(alg, &max, level, &sps)? };
    Ok((max, eich))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::algebra::build_algebra;

    #[test]
    fn discriminants() {
        for q in [2u64, 3, 5, 7, 11, 13, 17, 41] {
            let alg = build_algebra(q).unwrap();
            let o = maximal_order(&alg).unwrap();
            assert_eq!(alg.discriminant(&o.lattice), rat(q as i64));
        }
        let alg = build_algebra(5).unwrap();
        for (lvl, d) in [(3u64, 15i64), (39, 195), (9, 45), (1, 5)] {
            let (_, e) = standard_eichler(&alg, lvl).unwrap();
            assert_eq!(alg.discriminant(&e.lattice), rat(d));
        }
    }

    #[test]
    fn splitting_relations() {
        let alg = build_algebra(5).unwrap();
        let o = maximal_order(&alg).unwrap();
        let sp = local_splitting(&alg, &o, 3, 4).unwrap();
        let md = 81;
        let [_, i, j, k] = sp.images;
        assert_eq!(mat2_mul(&i, &i, md), [79, 0, 0, 79]);
        assert_eq!(mat2_mul(&j, &j, md), [76, 0, 0, 76]);
        assert_eq!(mat2_mul(&i, &j, md), k);
        assert_eq!(local_splitting(&alg, &o, 5, 2), Err(Error::RamifiedPlace(5)));
        let lo = local_splitting(&alg, &o, 3, 2).unwrap();
        assert_eq!(sp.reduce(2), lo);
    }
}
