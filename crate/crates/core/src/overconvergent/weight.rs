//! p-adic weights κ = (n, v) and the monoid M_1.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::padic::PadicApprox;
use crate::arith::rat::{is_prime, mod_pow, rat, Rat};
use crate::arith::ring::{Ring, Zpm};
use crate::error::{Error, Result};

/// A character t ↦ τ(t)^i·⟨t⟩^s of Z_p^×.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitChar {
    pub i: u64,
    pub s: PadicApprox,
}

impl UnitChar {
    fn trivial(p: u64, m: u32) -> Self {
        UnitChar { i: 0, s: PadicApprox::zero(p, m) }
    }

    /// t ↦ t^e for an integer e.
    pub fn power(p: u64, e: i64) -> Result<Self> {
        let prec = Zpm::max_prec(p);
        Ok(UnitChar { i: e.rem_euclid(p as i64 - 1) as u64, s: PadicApprox::from_rat(&rat(e), p, prec)? })
    }

    /// Integer representative of s, correct modulo p^(abs_prec).
    fn exponent(&self) -> BigInt {
        match (self.s.v, self.s.u) {
            (Some(v), Some(u)) => BigInt::from(self.s.p).pow(v as u32) * BigInt::from(u),
            _ => BigInt::zero(),
        }
    }

    fn check_prec(&self, m: u32) -> Result<()> {
        if self.s.abs_prec() < m as i64 {
            return Err(Error::Precision(format!(
                "weight exponent known mod p^{} but p^{m} is needed",
                self.s.abs_prec()
            )));
        }
        Ok(())
    }

    /// Value at a unit t of Z/p^m.
    pub fn eval(&self, z: &Zpm, t: u64) -> Result<u64> {
        let p = z.p();
        if t % p == 0 {
            return Err(Error::Input(format!("{t} is not a {p}-adic unit")));
        }
        self.check_prec(z.prec())?;
        let md = z.modulus();
        let tau = teichmuller(z, t);
        let one_unit = z.mul(&t, &z.inv(&tau).expect("Teichmüller lift is a unit"));
        // ⟨t⟩ has order dividing p^(m-1)
        let ord = BigInt::from(md / p);
        let e = (self.exponent() % &ord + &ord) % &ord;
        let a = mod_pow(tau, self.i % (p - 1), md);
        let b = mod_pow(one_unit, e.to_u64().unwrap(), md);
        Ok(z.mul(&a, &b))
    }
}

/// Teichmüller representative of t modulo p^m.
pub fn teichmuller(z: &Zpm, t: u64) -> u64 {
    let p = z.p();
    let mut x = t % z.modulus();
    for _ in 1..z.prec() {
        x = z.pow(&x, p);
    }
    x
}

/// κ = (n, v) with n a character of Z_p^× and v a character of Q_p^×
/// normalized by v(p) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightChar {
    pub p: u64,
    pub n: UnitChar,
    pub v: UnitChar,
    /// Set when κ comes from a classical weight (k, w).
    pub classical: Option<(u32, u32)>,
}

impl WeightChar {
    /// n(a) = a^(k-2), v(b) = b^((w-k)/2).
    pub fn classical(p: u64, k: u32, w: u32) -> Result<Self> {
        check_p(p)?;
        if k < 2 || w < k || (w - k) % 2 != 0 {
            return Err(Error::Input(format!("({k}, {w}) is not a classical weight")));
        }
        Ok(WeightChar {
            p,
            n: UnitChar::power(p, k as i64 - 2)?,
            v: UnitChar::power(p, (w - k) as i64 / 2)?,
            classical: Some((k, w)),
        })
    }

    /// n(t) = τ(t)^i⟨t⟩^s with v trivial.
    pub fn new(p: u64, i: u64, s: &Rat) -> Result<Self> {
        check_p(p)?;
        let prec = Zpm::max_prec(p);
        let s = PadicApprox::from_rat(s, p, prec)?;
        if s.v.is_some_and(|v| v < 0) {
            return Err(Error::Input("weight exponent must be p-integral".into()));
        }
        Ok(WeightChar { p, n: UnitChar { i: i % (p - 1), s }, v: UnitChar::trivial(p, prec), classical: None })
    }

    pub fn k(&self) -> Option<u32> {
        self.classical.map(|(k, _)| k)
    }

    /// Integer representative of the exponent s of n.
    pub fn exponent(&self) -> BigInt {
        self.n.exponent()
    }

    /// v(x) for x = p^e·u.
    pub fn v_eval(&self, z: &Zpm, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::Input("v is undefined at 0".into()));
        }
        let mut u = x;
        while u % z.p() == 0 {
            u /= z.p();
        }
        self.v.eval(z, u)
    }
}

fn check_p(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Input(format!("{p} must be an odd prime")));
    }
    Ok(())
}

/// [[a, b], [c, d]] with entries modulo p^m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidElt {
    pub p: u64,
    pub m: u32,
    pub e: [u64; 4],
}

impl MonoidElt {
    pub fn new(p: u64, m: u32, e: [i64; 4]) -> Result<Self> {
        let z = Zpm::new(p, m)?;
        let g = MonoidElt { p, m, e: e.map(|x| z.from_i64(x)) };
        g.check(1)?;
        Ok(g)
    }

    pub fn from_residues(p: u64, m: u32, e: [u64; 4]) -> Result<Self> {
        let md = p.pow(m);
        let g = MonoidElt { p, m, e: e.map(|x| x % md) };
        g.check(1)?;
        Ok(g)
    }

    pub fn identity(p: u64, m: u32) -> Self {
        MonoidElt { p, m, e: [1, 0, 0, 1] }
    }

    /// Membership in M_α: p^α | c, p ∤ d, det ≠ 0 (at working precision).
    pub fn check(&self, alpha: u32) -> Result<()> {
        let [a, b, c, d] = self.e;
        let md = self.p.pow(self.m);
        let fail = |reason: String| Err(Error::MonoidMembership { alpha, reason });
        if alpha > self.m || c % self.p.pow(alpha) != 0 {
            return fail(format!("p^{alpha} does not divide c = {c}"));
        }
        if d % self.p == 0 {
            return fail(format!("p divides d = {d}"));
        }
        let det = ((a as u128 * d as u128 + (md - b) as u128 * c as u128) % md as u128) as u64;
        if det == 0 {
            return fail("determinant vanishes at working precision".into());
        }
        Ok(())
    }

    pub fn det(&self) -> u64 {
        let z = self.ring();
        let [a, b, c, d] = self.e;
        z.sub(&z.mul(&a, &d), &z.mul(&b, &c))
    }

    pub fn ring(&self) -> Zpm {
        Zpm::new(self.p, self.m).expect("valid modulus")
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.m.min(o.m);
        let md = self.p.pow(m);
        MonoidElt { p: self.p, m, e: crate::quaternion::order::mat2_mul(&self.e, &o.e, md) }
    }

    pub fn reduce(&self, m: u32) -> Self {
        let md = self.p.pow(m);
        MonoidElt { p: self.p, m, e: self.e.map(|x| x % md) }
    }
}

/// C(σ, r) for an integer σ, exactly.
pub(crate) fn binomials(sigma: &BigInt, upto: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(upto + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for r in 1..=upto {
        c = c * (sigma - BigInt::from(r - 1)) / BigInt::from(r);
        out.push(c.clone());
    }
    out
}
