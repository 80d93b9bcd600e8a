//! Finite test for very-Eisenstein systems: T_v = ψ(v)(v+1) (and S_v = ψ(v)²
//! when S_v is given) for a character ψ = χ·N^j, χ of finite order with values
//! in μ_{p−1}.

use serde::Serialize;

use num_integer::Integer;

use crate::arith::rat::{is_prime, mod_inv, mod_pow, prime_factors, rat_mod, Rat};
use crate::error::{Error, Result};

/// Hecke eigenvalues modulo p^m at good primes.
#[derive(Clone, Debug)]
pub struct ModSystem {
    pub p: u64,
    pub m: u32,
    pub t: Vec<(u64, u64)>,
    pub s: Vec<(u64, u64)>,
}

impl ModSystem {
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.m)
    }

    /// Reduce rational eigenvalues; fails when one is not p-integral.
    pub fn from_rational(p: u64, m: u32, t: &[(u64, Rat)], s: &[(u64, Rat)]) -> Result<Self> {
        let md = p.pow(m);
        let red = |xs: &[(u64, Rat)]| -> Result<Vec<(u64, u64)>> {
            xs.iter()
                .map(|(v, a)| rat_mod(a, md).map(|r| (*v, r)).ok_or_else(|| Error::Input(format!("eigenvalue at {v} is not {p}-integral"))))
                .collect()
        };
        Ok(ModSystem { p, m, t: red(t)?, s: red(s)? })
    }
}

#[derive(Clone, Debug)]
pub struct EisensteinConfig {
    pub conductor_bound: u64,
    pub twist_bound: i64,
    /// v must be prime to these (the level, p and ℓ).
    pub excluded: Vec<u64>,
    /// Only v ≡ one of `split_classes` mod `split_modulus` are used.
    pub split_modulus: u64,
    pub split_classes: Vec<u64>,
    pub min_primes: usize,
}

impl Default for EisensteinConfig {
    fn default() -> Self {
        EisensteinConfig {
            conductor_bound: 12,
            twist_bound: 2,
            excluded: vec![],
            split_modulus: 1,
            split_classes: vec![0],
            min_primes: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    VeryEisenstein,
    Not,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterData {
    pub modulus: u64,
    /// Values χ(v) mod p^m on the tested primes.
    pub values: Vec<(u64, u64)>,
    pub twist: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EisensteinFlag {
    pub verdict: Verdict,
    pub witness: Option<CharacterData>,
    pub excluded: Vec<u64>,
    pub primes_tested: Vec<u64>,
    pub p: u64,
    pub m: u32,
}

/// Smallest primitive root modulo an odd prime power.
fn primitive_root(l: u64, e: u32) -> u64 {
    let md = l.pow(e);
    let phi = md / l * (l - 1);
    let fac: Vec<u64> = prime_factors(phi).into_iter().map(|(f, _)| f).collect();
    (2..md).find(|&g| g.gcd(&l) == 1 && fac.iter().all(|&f| mod_pow(g, phi / f, md) != 1)).unwrap()
}

/// Generators of (Z/N)^× with their orders, one cyclic factor at a time.
fn generators(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (l, e) in prime_factors(n) {
        let le = l.pow(e);
        let rest = n / le;
        // Lift a generator mod ℓ^e to one that is 1 mod the rest by CRT.
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                return g % n;
            }
            let inv = mod_inv(rest % le, le).unwrap();
            let x = ((g + le - 1) % le) * inv % le;
            (1 + rest * x) % n
        };
        if l == 2 {
            if e >= 2 {
                out.push((lift(le - 1), 2));
            }
            if e >= 3 {
                out.push((lift(5), le / 4));
            }
        } else {
            out.push((lift(primitive_root(l, e)), le / l * (l - 1)));
        }
    }
    out
}

/// Exponent vector of x in terms of the generators, by exhaustive search.
fn discrete_log(x: u64, n: u64, gens: &[(u64, u64)]) -> Vec<u64> {
    let mut idx = vec![0u64; gens.len()];
    loop {
        let val = gens.iter().zip(&idx).fold(1 % n, |acc, ((g, _), &k)| acc * mod_pow(*g, k, n) % n);
        if val == x % n {
            return idx;
        }
        let mut i = 0;
        loop {
            idx[i] += 1;
            if idx[i] < gens[i].1 {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Teichmüller lift of a primitive root mod p, a generator of μ_{p−1} in Z/p^m.
fn teichmuller_generator(p: u64, m: u32) -> u64 {
    let md = p.pow(m);
    let g = primitive_root(p, 1);
    mod_pow(g, p.pow(m - 1), md)
}

fn usable_primes(sys: &ModSystem, cfg: &EisensteinConfig) -> Vec<u64> {
    sys.t
        .iter()
        .map(|(v, _)| *v)
        .filter(|&v| is_prime(v) && v != sys.p && cfg.excluded.iter().all(|&x| x % v != 0))
        .filter(|&v| cfg.split_classes.contains(&(v % cfg.split_modulus)))
        .collect()
}

pub fn very_eisenstein_flag(sys: &ModSystem, cfg: &EisensteinConfig) -> EisensteinFlag {
    let primes = usable_primes(sys, cfg);
    let md = sys.modulus();
    let d = sys.p - 1;
    let zeta = teichmuller_generator(sys.p, sys.m);
    let mut flag = EisensteinFlag {
        verdict: Verdict::Not,
        witness: None,
        excluded: cfg.excluded.clone(),
        primes_tested: primes.clone(),
        p: sys.p,
        m: sys.m,
    };
    if primes.len() < cfg.min_primes {
        flag.verdict = Verdict::Inconclusive;
        return flag;
    }
    let tval = |v: u64| sys.t.iter().find(|(x, _)| *x == v).map(|(_, a)| *a);
    let sval = |v: u64| sys.s.iter().find(|(x, _)| *x == v).map(|(_, a)| *a);
    for n in 1..=cfg.conductor_bound {
        let tested: Vec<u64> = primes.iter().copied().filter(|&v| n % v != 0).collect();
        if tested.len() < cfg.min_primes {
            continue;
        }
        let gens = generators(n);
        let logs: Vec<Vec<u64>> = tested.iter().map(|&v| discrete_log(v, n, &gens)).collect();
        // Each generator of order o maps to ζ^a with a·o ≡ 0 mod p−1.
        let choices: Vec<Vec<u64>> =
            gens.iter().map(|(_, o)| (0..d).filter(|a| (a * o) % d == 0).collect()).collect();
        let mut pick = vec![0usize; gens.len()];
        'chars: loop {
            let chi: Vec<u64> = logs
                .iter()
                .map(|lg| {
                    let e: u64 = lg.iter().zip(&pick).zip(&choices).map(|((k, &i), c)| k * c[i]).sum();
                    mod_pow(zeta, e % d, md)
                })
                .collect();
            for j in -cfg.twist_bound..=cfg.twist_bound {
                let ok = tested.iter().zip(&chi).all(|(&v, &c)| {
                    let vj = if j >= 0 { mod_pow(v, j as u64, md) } else { mod_inv(mod_pow(v, (-j) as u64, md), md).unwrap() };
                    let psi = c * vj % md;
                    let t_ok = tval(v) == Some(psi * ((v + 1) % md) % md);
                    let s_ok = sval(v).map_or(true, |s| s == psi * psi % md);
                    t_ok && s_ok
                });
                if ok {
                    flag.verdict = Verdict::VeryEisenstein;
                    flag.witness = Some(CharacterData { modulus: n, values: tested.iter().copied().zip(chi.clone()).collect(), twist: j });
                    flag.primes_tested = tested;
                    return flag;
                }
            }
            let mut i = 0;
            loop {
                if i == pick.len() {
                    break 'chars;
                }
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }
    flag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_span_unit_group() {
        for n in 1..80u64 {
            let gens = generators(n);
            let order: u64 = gens.iter().map(|(_, o)| o).product();
            let phi = (1..=n).filter(|x| x.gcd(&n) == 1).count() as u64;
            assert_eq!(order, phi, "N={n}");
            for x in (1..=n).filter(|x| x.gcd(&n) == 1) {
                let lg = discrete_log(x, n, &gens);
                assert!(lg.iter().zip(&gens).all(|(k, (_, o))| k < o));
            }
        }
    }

    #[test]
    fn teichmuller_has_order_p_minus_1() {
        for p in [3u64, 5, 7, 11] {
            let z = teichmuller_generator(p, 4);
            let md = p.pow(4);
            assert_eq!(mod_pow(z, p - 1, md), 1);
            assert!((1..p - 1).all(|k| mod_pow(z, k, md) != 1));
        }
    }
}
