//! Quaternion algebras (a, b)_Q and their elements.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rat::{is_prime, legendre, prime_factors, rat, Rat};
use crate::error::{Error, Result};

/// Quaternion algebra with i² = a, j² = b, k = ij, ramified at {q, ∞}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatAlgebra {
    pub a: i64,
    pub b: i64,
    pub q: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuatElt(#[serde(with = "crate::serde_rat::vec")] pub Vec<Rat>);

impl QuatElt {
    pub fn new(c: [Rat; 4]) -> Self {
        QuatElt(c.to_vec())
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        QuatElt(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn scalar(x: Rat) -> Self {
        QuatElt(vec![x, Rat::zero(), Rat::zero(), Rat::zero()])
    }

    pub fn zero() -> Self {
        Self::scalar(Rat::zero())
    }

    pub fn one() -> Self {
        Self::scalar(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn conj(&self) -> Self {
        QuatElt(vec![self.0[0].clone(), -&self.0[1], -&self.0[2], -&self.0[3]])
    }

    pub fn scale(&self, s: &Rat) -> Self {
        QuatElt(self.0.iter().map(|x| x * s).collect())
    }

    /// Least common denominator of the coordinates.
    pub fn denom(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

impl Add for &QuatElt {
    type Output = QuatElt;
    fn add(self, o: &QuatElt) -> QuatElt {
        QuatElt((0..4).map(|i| &self.0[i] + &o.0[i]).collect())
    }
}

impl Sub for &QuatElt {
    type Output = QuatElt;
    fn sub(self, o: &QuatElt) -> QuatElt {
        QuatElt((0..4).map(|i| &self.0[i] - &o.0[i]).collect())
    }
}

impl Neg for &QuatElt {
    type Output = QuatElt;
    fn neg(self) -> QuatElt {
        QuatElt(self.0.iter().map(|x| -x).collect())
    }
}

impl QuatAlgebra {
    pub fn mul(&self, x: &QuatElt, y: &QuatElt) -> QuatElt {
        let a = rat(self.a);
        let b = rat(self.b);
        let ab = &a * &b;
        let (x, y) = (&x.0, &y.0);
        let r0 = &x[0] * &y[0] + &a * &x[1] * &y[1] + &b * &x[2] * &y[2] - &ab * &x[3] * &y[3];
        let r1 = &x[0] * &y[1] + &x[1] * &y[0] - &b * &x[2] * &y[3] + &b * &x[3] * &y[2];
        let r2 = &x[0] * &y[2] + &x[2] * &y[0] + &a * &x[1] * &y[3] - &a * &x[3] * &y[1];
        let r3 = &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1];
        QuatElt(vec![r0, r1, r2, r3])
    }

    pub fn nrd(&self, x: &QuatElt) -> Rat {
        let x = &x.0;
        let a = rat(self.a);
        let b = rat(self.b);
        &x[0] * &x[0] - &a * &x[1] * &x[1] - &b * &x[2] * &x[2] + &a * &b * &x[3] * &x[3]
    }

    pub fn trd(&self, x: &QuatElt) -> Rat {
        &x.0[0] * rat(2)
    }

    pub fn inv(&self, x: &QuatElt) -> Result<QuatElt> {
        let n = self.nrd(x);
        if n.is_zero() {
            return Err(Error::Input("zero has no inverse".into()));
        }
        Ok(x.conj().scale(&n.recip()))
    }

    /// Bilinear form attached to nrd: (x, y) -> trd(x ȳ) / 2.
    pub fn bilinear(&self, x: &QuatElt, y: &QuatElt) -> Rat {
        self.mul(x, &y.conj()).0[0].clone()
    }

    /// Hilbert symbol (a, b)_v at a prime v, or at infinity when v = 0.
    pub fn hilbert(&self, v: u64) -> i32 {
        hilbert_symbol(self.a, self.b, v)
    }

    /// Finite primes where the algebra ramifies.
    pub fn ramified_primes(&self) -> Vec<u64> {
        let mut cands: Vec<u64> = vec![2];
        for x in [self.a, self.b] {
            for (p, _) in prime_factors(x.unsigned_abs()) {
                cands.push(p);
            }
        }
        cands.sort_unstable();
        cands.dedup();
        cands.into_iter().filter(|&v| self.hilbert(v) == -1).collect()
    }

    pub fn is_definite(&self) -> bool {
        self.hilbert(0) == -1
    }
}

fn split_p(x: i64, p: u64) -> (u32, i64) {
    let mut e = 0;
    let mut y = x;
    while y % p as i64 == 0 {
        y /= p as i64;
        e += 1;
    }
    (e, y)
}

/// Hilbert symbol of nonzero integers at the prime `v` (v = 0 is infinity).
pub fn hilbert_symbol(a: i64, b: i64, v: u64) -> i32 {
    assert!(a != 0 && b != 0);
    if v == 0 {
        return if a < 0 && b < 0 { -1 } else { 1 };
    }
    let (al, u) = split_p(a, v);
    let (be, w) = split_p(b, v);
    if v == 2 {
        let eps = |x: i64| (x.rem_euclid(4) == 3) as i32;
        let omega = |x: i64| {
            let r = x.rem_euclid(8);
            (r == 3 || r == 5) as i32
        };
        let e = eps(u) * eps(w) + al as i32 * omega(w) + be as i32 * omega(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let eps = ((v - 1) / 2) as i64 % 2;
    let mut s = if (al as i64 * be as i64 * eps) % 2 == 0 { 1 } else { -1 };
    if be % 2 == 1 {
        s *= legendre(u, v);
    }
    if al % 2 == 1 {
        s *= legendre(w, v);
    }
    s
}

/// Smallest prime r ≡ 3 mod 4 with (q / r) = -1.
fn aux_prime(q: u64) -> u64 {
    (3..)
        .step_by(4)
        .find(|&r| is_prime(r) && legendre(q as i64, r) == -1)
        .unwrap()
}

/// A presentation of the definite algebra ramified exactly at {q, ∞}.
pub fn build_algebra(q: u64) -> Result<QuatAlgebra> {
    if !is_prime(q) {
        return Err(Error::Input(format!("{q} is not prime")));
    }
    let qi = q as i64;
    let (a, b) = match q {
        2 => (-1, -1),
        _ if q % 4 == 3 => (-1, -qi),
        _ if q % 8 == 5 => (-2, -qi),
        _ => (-qi, -(aux_prime(q) as i64)),
    };
    let alg = QuatAlgebra { a, b, q };
    if alg.ramified_primes() != vec![q] || !alg.is_definite() {
        return Err(Error::Internal(format!("presentation ({a},{b}) is not ramified at {{{q}, inf}}")));
    }
    Ok(alg)
}

/// The auxiliary prime used for q ≡ 1 mod 8, exposed for order construction.
pub fn aux_prime_for(q: u64) -> Option<u64> {
    (q % 8 == 1).then(|| aux_prime(q))
}

/// Integer square root of a nonnegative rational square, if it is one.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rat::new(n, d))
}

pub fn rat_to_i64(x: &Rat) -> Option<i64> {
    x.is_integer().then(|| x.numer().to_i64()).flatten()
}
