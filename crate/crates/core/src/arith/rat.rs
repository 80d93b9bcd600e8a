//! Exact rationals and small-integer number theory helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// Valuation of a nonzero big integer at `p`.
pub fn int_val(x: &BigInt, p: u64) -> u32 {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` stands for +infinity (x = 0).
pub fn padic_val(x: &Rat, p: u64) -> Result<Option<i64>> {
    if !is_prime(p) {
        return Err(Error::Input(format!("{p} is not prime")));
    }
    if x.is_zero() {
        return Ok(None);
    }
    Ok(Some(
        int_val(x.numer(), p) as i64 - int_val(x.denom(), p) as i64,
    ))
}

/// Residue of `x` modulo `modulus` when the denominator is invertible.
pub fn rat_mod(x: &Rat, modulus: u64) -> Option<u64> {
    let m = BigInt::from(modulus);
    let d = x.denom().mod_floor(&m);
    let dinv = mod_inverse_big(&d, &m)?;
    let n = x.numer().mod_floor(&m);
    ((n * dinv).mod_floor(&m)).to_u64()
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128 % m as u128;
    let mm = m as u128;
    let mut bb = b as u128 % mm;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    b = r as u64;
    b
}

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = egcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Legendre symbol (a/p) for odd prime p.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn to_string_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Input(format!("bad rational {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d.is_zero() {
                return Err(Error::Input("zero denominator".into()));
            }
            Ok(Rat::new(parse(n)?, d))
        }
        None => Ok(Rat::from_integer(parse(s)?)),
    }
}

pub fn abs_rat(x: &Rat) -> Rat {
    x.abs()
}

/// Floor of a rational as a BigInt.
pub fn floor_rat(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil_rat(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_val(&rat(-192), 3).unwrap(), Some(1));
        assert_eq!(padic_val(&rat(1), 3).unwrap(), Some(0));
        assert_eq!(padic_val(&rat(0), 5).unwrap(), None);
        assert_eq!(padic_val(&rat_frac(5, 27), 3).unwrap(), Some(-3));
        assert!(padic_val(&rat(4), 6).is_err());
    }

    #[test]
    fn residues() {
        assert_eq!(rat_mod(&rat_frac(1, 2), 9), Some(5));
        assert_eq!(rat_mod(&rat_frac(1, 3), 9), None);
        assert_eq!(mod_inv(2, 9), Some(5));
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(2, 5), -1);
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_factors(195), vec![(3, 1), (5, 1), (13, 1)]);
        assert_eq!(prime_factors(192), vec![(2, 6), (3, 1)]);
    }
}
