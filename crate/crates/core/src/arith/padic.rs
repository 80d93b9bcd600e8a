//! Finite-precision p-adic numbers p^v * u known modulo p^(v+m).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::rat::{is_prime, mod_inv, padic_val, rat_mod, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicApprox {
    pub p: u64,
    pub m: u32,
    /// `None` is +infinity: zero at working precision.
    pub v: Option<i64>,
    pub u: Option<u64>,
}

fn pow(p: u64, m: u32) -> u64 {
    p.checked_pow(m).expect("p-adic modulus overflow")
}

impl PadicApprox {
    pub fn zero(p: u64, m: u32) -> Self {
        PadicApprox { p, m, v: None, u: None }
    }

    /// Build from valuation and unit; the unit is reduced modulo p^m.
    pub fn new(p: u64, m: u32, v: i64, u: u64) -> Result<Self> {
        let u = u % pow(p, m);
        if u % p == 0 {
            return Err(Error::Input(format!("{u} is not a {p}-adic unit")));
        }
        Ok(PadicApprox { p, m, v: Some(v), u: Some(u) })
    }

    pub fn from_rat(x: &Rat, p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        match padic_val(x, p)? {
            None => Ok(Self::zero(p, m)),
            Some(v) => {
                let scale = Rat::from_integer(num_bigint::BigInt::from(p)).pow(-v as i32);
                let unit = x * scale;
                let u = rat_mod(&unit, pow(p, m)).expect("unit part is p-integral");
                Self::new(p, m, v, u)
            }
        }
    }

    /// Residue class in Z/p^prec of an integral element with absolute precision
    /// at least `prec`.
    pub fn from_residue(r: u64, p: u64, prec: u32) -> Self {
        let r = r % pow(p, prec);
        if r == 0 {
            return Self::zero(p, prec);
        }
        let mut v = 0u32;
        let mut x = r;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        PadicApprox { p, m: prec - v, v: Some(v as i64), u: Some(x) }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_none()
    }

    /// Absolute precision v + m (the value is known mod p^that); for zero
    /// the relative precision is also the absolute one.
    pub fn abs_prec(&self) -> i64 {
        match self.v {
            Some(v) => v + self.m as i64,
            None => self.m as i64,
        }
    }

    /// Residue modulo p^k of an integral value, k <= abs_prec.
    pub fn residue(&self, k: u32) -> Result<u64> {
        if (k as i64) > self.abs_prec() {
            return Err(Error::Precision(format!(
                "residue mod {}^{k} needs more than {} digits",
                self.p,
                self.abs_prec()
            )));
        }
        match (self.v, self.u) {
            (Some(v), Some(u)) => {
                if v < 0 {
                    return Err(Error::Input("value is not integral".into()));
                }
                if v as u32 >= k {
                    return Ok(0);
                }
                let md = pow(self.p, k) as u128;
                Ok((pow(self.p, v as u32) as u128 * u as u128 % md) as u64)
            }
            _ => Ok(0),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        let m = self.m.min(o.m);
        match (self.v, o.v) {
            (Some(a), Some(b)) => {
                let md = pow(self.p, m) as u128;
                let u = (self.u.unwrap() as u128 * o.u.unwrap() as u128 % md) as u64;
                PadicApprox { p: self.p, m, v: Some(a + b), u: Some(u) }
            }
            _ => {
                let v = self.v.unwrap_or(0).max(0) + o.v.unwrap_or(0).max(0);
                Self::zero(self.p, m + v as u32)
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match (self.v, self.u) {
            (Some(v), Some(u)) => Ok(PadicApprox {
                p: self.p,
                m: self.m,
                v: Some(-v),
                u: Some(mod_inv(u, pow(self.p, self.m)).unwrap()),
            }),
            _ => Err(Error::Precision("inverting a value indistinguishable from 0".into())),
        }
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.v, self.u) {
            (Some(v), Some(u)) => write!(f, "{}^{}*{} + O({}^{})", self.p, v, u, self.p, v + self.m as i64),
            _ => write!(f, "O({}^{})", self.p, self.m),
        }
    }
}

/// Square root of a p-adic unit by Hensel lifting. The root returned is the
/// lift of the smallest residue root mod p, so it is stable across precisions.
pub fn padic_sqrt(x: &PadicApprox) -> Result<PadicApprox> {
    let p = x.p;
    if p == 2 {
        return Err(Error::Input("p = 2 is not supported".into()));
    }
    let (v, u) = match (x.v, x.u) {
        (Some(0), Some(u)) => (0, u),
        _ => return Err(Error::Input("square root needs a p-adic unit".into())),
    };
    let s = sqrt_mod_prime_power(u, p, x.m).ok_or(Error::NoSquareRoot { value: u % p, p })?;
    PadicApprox::new(p, x.m, v, s)
}

/// Smallest-residue square root of a unit `u` modulo p^m, lifted by Newton.
pub fn sqrt_mod_prime_power(u: u64, p: u64, m: u32) -> Option<u64> {
    let r = u % p;
    let s0 = (1..p).find(|&s| s * s % p == r)?;
    let mut s = s0 as u128;
    let mut k = 1;
    while k < m {
        k = (2 * k).min(m);
        let md = pow(p, k) as u128;
        let f = (s * s + md - (u as u128 % md)) % md;
        let inv2s = mod_inv((2 * s % md) as u64, md as u64)? as u128;
        s = (s + md - f * inv2s % md) % md;
    }
    Some((s % pow(p, m) as u128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_examples() {
        let s = padic_sqrt(&PadicApprox::new(5, 3, 0, 4).unwrap()).unwrap();
        assert!(s.u == Some(2) || s.u == Some(123));
        let s = padic_sqrt(&PadicApprox::new(7, 2, 0, 2).unwrap()).unwrap();
        let u = s.u.unwrap();
        assert_eq!(u * u % 49, 2);
        assert!(u % 7 == 3 || u % 7 == 4);
        assert_eq!(
            padic_sqrt(&PadicApprox::new(5, 3, 0, 2).unwrap()),
            Err(Error::NoSquareRoot { value: 2, p: 5 })
        );
    }

    #[test]
    fn from_rat_splits_valuation() {
        let x = PadicApprox::from_rat(&super::super::rat::rat(-192), 3, 4).unwrap();
        assert_eq!(x.v, Some(1));
        assert_eq!(x.u, Some((81 - 64) as u64));
        assert_eq!(x.residue(2).unwrap(), (-192i64).rem_euclid(9) as u64);
    }
}
