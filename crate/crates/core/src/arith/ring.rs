//! Coefficient rings used by the linear algebra: exact rationals and the
//! fixed-point model of Z_p as Z/p^m.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::rat::{mod_inv, rat_mod, Rat};
use crate::error::{Error, Result};

pub trait Ring: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn from_rat(&self, x: &Rat) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Inverse of a unit; `None` for non-units.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Pivot quality. `None` for zero; for a field every nonzero element is `Some(0)`.
    fn valuation(&self, a: &Self::Elem) -> Option<u32>;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatField;

impl Ring for RatField {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::from_integer(1.into())
    }
    fn from_i64(&self, x: i64) -> Rat {
        Rat::from_integer(x.into())
    }
    fn from_rat(&self, x: &Rat) -> Result<Rat> {
        Ok(x.clone())
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Rat) -> Option<Rat> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn valuation(&self, a: &Rat) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(0)
        }
    }
}

/// Z/p^m, standing in for Z_p at absolute precision m. Elements are residues
/// in [0, p^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zpm {
    p: u64,
    m: u32,
    modulus: u64,
}

impl Zpm {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if p < 2 || m == 0 {
            return Err(Error::Input(format!("bad p-adic ring p={p}, m={m}")));
        }
        let mut modulus: u64 = 1;
        for _ in 0..m {
            modulus = modulus
                .checked_mul(p)
                .filter(|&x| x < (1u64 << 62))
                .ok_or_else(|| Error::Precision(format!("{p}^{m} exceeds 2^62")))?;
        }
        Ok(Zpm { p, m, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn prec(&self) -> u32 {
        self.m
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Largest precision with p^m < 2^62.
    pub fn max_prec(p: u64) -> u32 {
        let mut m = 0;
        let mut x: u64 = 1;
        while let Some(y) = x.checked_mul(p).filter(|&y| y < (1u64 << 62)) {
            x = y;
            m += 1;
        }
        m
    }

    pub fn from_big(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap()
    }

    /// Symmetric lift in (-p^m/2, p^m/2].
    pub fn lift_signed(&self, a: u64) -> i128 {
        if a > self.modulus / 2 {
            a as i128 - self.modulus as i128
        } else {
            a as i128
        }
    }

    /// Reduce to a lower precision.
    pub fn reduce_to(&self, a: u64, m: u32) -> u64 {
        a % self.p.pow(m.min(self.m))
    }

    pub fn div_p_pow(&self, a: u64, k: u32) -> u64 {
        a / self.p.pow(k)
    }
}

impl Ring for Zpm {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn from_i64(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.modulus as i128) as u64
    }
    fn from_rat(&self, x: &Rat) -> Result<u64> {
        rat_mod(x, self.modulus).ok_or_else(|| {
            Error::Precision(format!("{x} is not {}-integral", self.p))
        })
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            None
        } else {
            mod_inv(*a, self.modulus)
        }
    }
    fn valuation(&self, a: &u64) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let mut v = 0;
        let mut x = *a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }
}
