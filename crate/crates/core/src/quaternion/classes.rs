//! Left ideal classes of a definite Eichler order.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::algebra::{QuatAlgebra, QuatElt};
use super::ideals::{inverse, neighbors, principalize_with, right_order, theta_key, unit_group};
use super::lattice::Lattice;
use super::order::Order;
use crate::arith::rat::{is_prime, padic_val, prime_factors, rat, to_string_rat, Rat};
use crate::error::{Error, Result};

pub const CLASSSET_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealClass {
    pub lattice: Lattice,
    #[serde(with = "crate::serde_rat")]
    pub norm: Rat,
    pub inverse: Lattice,
    pub theta: [usize; 3],
    pub units: Vec<QuatElt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSet {
    pub version: u32,
    pub algebra: QuatAlgebra,
    pub maximal: Order,
    pub order: Order,
    pub neighbor_prime: u64,
    pub classes: Vec<IdealClass>,
}

/// Σ 2/|Γ_i| = (q-1)/12 · Π_{ℓ^e || M} ℓ^{e-1}(ℓ+1).
pub fn mass(q: u64, level: u64) -> Rat {
    let mut m = rat(q as i64 - 1) / rat(12);
    for (l, e) in prime_factors(level) {
        m *= rat((l.pow(e - 1) * (l + 1)) as i64);
    }
    m
}

impl IdealClass {
    pub fn new(alg: &QuatAlgebra, order: &Order, lattice: Lattice) -> Self {
        let norm = alg.lattice_norm(&order.lattice, &lattice);
        let inv = inverse(alg, order, &lattice);
        let theta = theta_key(alg, order, &lattice);
        let units = unit_group(alg, &right_order(alg, order, &lattice));
        IdealClass { lattice, norm, inverse: inv, theta, units }
    }

    pub fn unit_order(&self) -> usize {
        self.units.len()
    }
}

impl ClassSet {
    pub fn h(&self) -> usize {
        self.classes.len()
    }

    pub fn unit_orders(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.unit_order()).collect()
    }

    pub fn mass_sum(&self) -> Rat {
        self.classes.iter().map(|c| rat(2) / rat(c.unit_order() as i64)).sum()
    }

    pub fn mass_ok(&self) -> bool {
        self.mass_sum() == mass(self.algebra.q, self.order.level)
    }

    /// Class index j and y with J = I_j·y for a left ideal J of the order.
    pub fn identify(&self, j: &Lattice) -> Result<(usize, QuatElt)> {
        let alg = &self.algebra;
        let nj = alg.lattice_norm(&self.order.lattice, j);
        let th = theta_key(alg, &self.order, j);
        for (idx, c) in self.classes.iter().enumerate() {
            if c.theta != th {
                continue;
            }
            if let Some(y) = principalize_with(alg, &c.inverse, &(&nj / &c.norm), j) {
                return Ok((idx, y));
            }
        }
        Err(Error::Internal("lattice matches no class representative; class set incomplete".into()))
    }

    /// Equivalent representatives whose norms are prime to p, so that every
    /// I_i is O_p at p.
    pub fn adapted_to(&self, p: u64) -> Result<ClassSet> {
        let alg = &self.algebra;
        let mut out = self.clone();
        for c in out.classes.iter_mut() {
            if padic_val(&c.norm, p)? == Some(0) {
                continue;
            }
            // x ∈ I⁻¹ with nrd(I x) prime to p makes I x ⊆ O with I_p x = O_p.
            let inv = c.inverse.clone();
            let ninv = c.norm.recip();
            let mut bound = rat(2);
            let mut found = None;
            while found.is_none() {
                let mut cands: Vec<QuatElt> = alg
                    .short_vectors(&inv, &(&ninv * &bound))
                    .into_iter()
                    .filter(|(_, n)| padic_val(&(n * &c.norm), p).ok().flatten() == Some(0))
                    .map(|(x, _)| x)
                    .collect();
                cands.sort_by(|a, b| (alg.nrd(a), &a.0).cmp(&(alg.nrd(b), &b.0)));
                found = cands.into_iter().next();
                bound *= rat(2);
                if bound > rat(1 << 20) {
                    return Err(Error::Internal(format!("could not move class away from {p}")));
                }
            }
            let x = found.unwrap();
            *c = IdealClass::new(alg, &self.order, alg.lattice_mul_elt(&c.lattice, &x));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("class sets serialize")
    }

    pub fn from_json(s: &str) -> Result<ClassSet> {
        let cs: ClassSet = serde_json::from_str(s).map_err(|e| Error::Input(format!("bad class set JSON: {e}")))?;
        if cs.version != CLASSSET_FORMAT_VERSION {
            return Err(Error::Input(format!("class set format {} is not {}", cs.version, CLASSSET_FORMAT_VERSION)));
        }
        Ok(cs)
    }
}

/// Representatives of the left ideal classes, found by walking the ℓ-neighbor
/// graph for the smallest prime ℓ ∤ qM until the mass formula is met.
pub fn left_ideal_classes(alg: &QuatAlgebra, maximal: &Order, order: &Order, prime_bound: u64) -> Result<ClassSet> {
    let qm = alg.q * order.level;
    let target = mass(alg.q, order.level);
    let primes: Vec<u64> = (2..=prime_bound).filter(|&l| is_prime(l) && qm % l != 0).collect();
    let mut last = None;
    for &ell in &primes {
        let mut classes = vec![IdealClass::new(alg, order, order.lattice.clone())];
        let mut cs = ClassSet {
            version: CLASSSET_FORMAT_VERSION,
            algebra: alg.clone(),
            maximal: maximal.clone(),
            order: order.clone(),
            neighbor_prime: ell,
            classes: Vec::new(),
        };
        let mut reached: Rat = rat(2) / rat(classes[0].unit_order() as i64);
        let mut head = 0;
        while reached < target && head < classes.len() {
            let cur = classes[head].lattice.clone();
            head += 1;
            for nb in neighbors(alg, maximal, order, &cur, ell)? {
                cs.classes = classes.clone();
                if cs.identify(&nb).is_ok() {
                    continue;
                }
                let c = IdealClass::new(alg, order, nb);
                reached += rat(2) / rat(c.unit_order() as i64);
                classes.push(c);
                if reached >= target {
                    break;
                }
            }
        }
        cs.classes = classes;
        if reached == target {
            return Ok(cs);
        }
        last = Some((cs.h(), reached));
    }
    let (found, reached) = last.unwrap_or((0, Rat::zero()));
    Err(Error::IncompleteClassSet { found, reached: to_string_rat(&reached), target: to_string_rat(&target) })
}
