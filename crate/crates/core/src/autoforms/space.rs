//! Spaces of automorphic forms ⊕_i L^{Γ_i} at Eichler level M·p^α.

use serde::{Deserialize, Serialize};

use super::coeff::{CoeffAction, SymPadic, TrivialRat};
use crate::arith::linalg::{mat_mul, Mat};
use crate::arith::rat::{is_prime, Rat};
use crate::arith::ring::{Ring, Zpm};
use crate::error::{Error, Result};
use crate::quaternion::order::standard_eichler;
use crate::quaternion::{build_algebra, left_ideal_classes, local_splitting, ClassSet};

/// Tame Eichler level M, working prime p and p-level exponent α.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelSpec {
    pub q: u64,
    pub m: u64,
    pub p: u64,
    pub alpha: u32,
}

impl LevelSpec {
    pub fn new(q: u64, m: u64, p: u64, alpha: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Input(format!("q = {q} is not prime")));
        }
        if !is_prime(p) || p == 2 {
            return Err(Error::Input(format!("working prime must be an odd prime, got {p}")));
        }
        if m == 0 || (q * m) % p == 0 || m % q == 0 {
            return Err(Error::Level(format!("need p ∤ qM and q ∤ M (q={q}, M={m}, p={p})")));
        }
        Ok(LevelSpec { q, m, p, alpha })
    }

    /// Split an Eichler level N into its prime-to-p part and α = v_p(N).
    pub fn from_level(q: u64, level: u64, p: u64) -> Result<Self> {
        let mut m = level;
        let mut alpha = 0;
        while m % p == 0 && m > 0 {
            m /= p;
            alpha += 1;
        }
        Self::new(q, m, p, alpha)
    }

    pub fn eichler_level(&self) -> u64 {
        self.m * self.p.pow(self.alpha)
    }

    /// Whether ℓ is prime to qMp, as required for T_ℓ and S_ℓ.
    pub fn is_good(&self, ell: u64) -> bool {
        is_prime(ell) && (self.q * self.m * self.p) % ell != 0
    }

    pub fn with_m(&self, m: u64) -> Result<Self> {
        Self::new(self.q, m, self.p, self.alpha)
    }
}

/// Weight (k, w); the coefficient module is Sym^(k-2) with S_ℓ = ℓ^(k-2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalWeight {
    pub k: u32,
    pub w: u32,
}

impl ClassicalWeight {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Input(format!("weight k = {k} must be at least 2")));
        }
        Ok(ClassicalWeight { k, w: k })
    }

    pub fn n(&self) -> usize {
        (self.k - 2) as usize
    }
}

/// Invariant basis (columns) of one class and the coordinate map onto it.
#[derive(Clone, Debug)]
pub struct Block<E> {
    pub basis: Mat<E>,
    pub coords: Mat<E>,
}

#[derive(Clone, Debug)]
pub struct AutFormSpace<A: CoeffAction> {
    pub level: LevelSpec,
    pub weight: ClassicalWeight,
    pub classes: ClassSet,
    pub coeff: A,
    pub blocks: Vec<Block<<A::R as Ring>::Elem>>,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

pub type RationalSpace = AutFormSpace<TrivialRat>;
pub type PadicSpace = AutFormSpace<SymPadic>;

impl<A: CoeffAction> AutFormSpace<A> {
    pub fn ring(&self) -> &A::R {
        self.coeff.ring()
    }

    pub fn h(&self) -> usize {
        self.classes.h()
    }

    pub fn unit_orders(&self) -> Vec<usize> {
        self.classes.unit_orders()
    }

    /// Same class data with the contragredient coefficients.
    pub fn dual_space(&self) -> Result<Self> {
        Self::with_coeff(self.level, self.weight, &self.classes, self.coeff.dual())
    }

    pub fn with_coeff(level: LevelSpec, weight: ClassicalWeight, classes: &ClassSet, coeff: A) -> Result<Self> {
        if classes.order.level != level.eichler_level() || classes.algebra.q != level.q {
            return Err(Error::Level("class set does not match the level".into()));
        }
        let classes = classes.adapted_to(level.p)?;
        let alg = &classes.algebra;
        let mut blocks = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for c in &classes.classes {
            let mats: Vec<_> = c.units.iter().map(|u| coeff.matrix(alg, u)).collect::<Result<_>>()?;
            let (basis, coords) = coeff.invariants(&mats)?;
            offsets.push(dim);
            dim += basis.cols;
            blocks.push(Block { basis, coords });
        }
        Ok(AutFormSpace { level, weight, classes, coeff, blocks, offsets, dim })
    }

    /// Value f(d_i) ∈ L of a coordinate vector.
    pub fn value_at(&self, f: &[<A::R as Ring>::Elem], i: usize) -> Vec<<A::R as Ring>::Elem> {
        let b = &self.blocks[i];
        let c: Vec<_> = f[self.offsets[i]..self.offsets[i] + b.basis.cols].to_vec();
        crate::arith::linalg::mat_vec(self.ring(), &b.basis, &c)
    }

    /// Block (i, j) contribution coords_i · R · basis_j.
    pub fn transport(&self, i: usize, r: &Mat<<A::R as Ring>::Elem>, src: &Block<<A::R as Ring>::Elem>) -> Mat<<A::R as Ring>::Elem> {
        let ring = self.ring();
        mat_mul(ring, &self.blocks[i].coords, &mat_mul(ring, r, &src.basis))
    }
}

/// Class set of the Eichler order of the given level, by neighbor search.
pub fn class_set_for(q: u64, level: u64) -> Result<ClassSet> {
    let alg = build_algebra(q)?;
    let (max, ord) = standard_eichler(&alg, level)?;
    left_ideal_classes(&alg, &max, &ord, 100)
}

/// Weight-2 space with exact rational coefficients.
pub fn build_space_rational(level: LevelSpec, classes: &ClassSet) -> Result<RationalSpace> {
    AutFormSpace::with_coeff(level, ClassicalWeight::new(2)?, classes, TrivialRat)
}

/// Space with Sym^(k-2) coefficients over Z/p^prec.
pub fn build_space_padic(level: LevelSpec, weight: ClassicalWeight, prec: u32, classes: &ClassSet) -> Result<PadicSpace> {
    let z = Zpm::new(level.p, prec)?;
    let sp = local_splitting(&classes.algebra, &classes.maximal, level.p, prec)?;
    AutFormSpace::with_coeff(level, weight, classes, SymPadic::new(z, weight.n(), sp))
}

/// 1/|Γ_i| as a ring element; fails when p divides |Γ_i| in the p-adic model.
pub fn inverse_unit_order<A: CoeffAction>(space: &AutFormSpace<A>, i: usize) -> Result<<A::R as Ring>::Elem> {
    let w = space.classes.classes[i].unit_order() as i64;
    space.coeff.scalar(&(Rat::from_integer(1.into()) / Rat::from_integer(w.into()))).map_err(|_| {
        Error::Precision(format!("|Γ_{i}| = {w} is not invertible in the coefficient ring"))
    })
}
