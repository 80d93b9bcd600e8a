//! Hecke operators by the ideal method: every coset of a double coset is a
//! sublattice J of a class representative I_i, written as J = I_j·y with
//! (Tf)(d_i) = Σ_J f(d_j)·y.

use std::fmt;

use serde_json::{json, Value};

use super::coeff::CoeffAction;
use super::space::{inverse_unit_order, AutFormSpace, ClassicalWeight, LevelSpec};
use crate::arith::linalg::{mat_add, mat_mul, zeros, Mat};
use crate::arith::rat::{rat, to_string_rat, Rat};
use crate::arith::ring::{RatField, Ring, Zpm};
use crate::error::{Error, Result};
use crate::quaternion::classes::IdealClass;
use crate::quaternion::ideals::{local_frame, local_images, neighbors};
use crate::quaternion::{local_splitting, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeckeLabel {
    T(u64),
    S(u64),
    U,
}

impl fmt::Display for HeckeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeckeLabel::T(l) => write!(f, "T{l}"),
            HeckeLabel::S(l) => write!(f, "S{l}"),
            HeckeLabel::U => write!(f, "U"),
        }
    }
}

impl std::str::FromStr for HeckeLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Input(format!("unknown operator label {s:?}"));
        match s.chars().next() {
            Some('T') | Some('t') => s[1..].parse().map(HeckeLabel::T).map_err(|_| bad()),
            Some('S') | Some('s') => s[1..].parse().map(HeckeLabel::S).map_err(|_| bad()),
            Some('U') | Some('u') => Ok(HeckeLabel::U),
            _ => Err(bad()),
        }
    }
}

/// JSON form of ring elements: rationals as strings, p-adics as {p, m, v, u}.
pub trait JsonElem: Ring {
    fn elem_json(&self, x: &Self::Elem) -> Value;
}

impl JsonElem for RatField {
    fn elem_json(&self, x: &Rat) -> Value {
        Value::String(to_string_rat(x))
    }
}

impl JsonElem for Zpm {
    fn elem_json(&self, x: &u64) -> Value {
        let a = crate::arith::padic::PadicApprox::from_residue(*x, self.p(), self.prec());
        json!({"p": a.p, "m": a.m, "v": a.v, "u": a.u})
    }
}

#[derive(Clone, Debug)]
pub struct HeckeMatrix<E> {
    pub label: HeckeLabel,
    pub level: LevelSpec,
    pub weight: ClassicalWeight,
    pub matrix: Mat<E>,
}

impl<E: Clone> HeckeMatrix<E> {
    pub fn to_json<R: JsonElem<Elem = E>>(&self, r: &R) -> Value {
        let rows: Vec<Value> =
            (0..self.matrix.rows).map(|i| Value::Array(self.matrix.row(i).iter().map(|x| r.elem_json(x)).collect())).collect();
        json!({
            "operator": self.label.to_string(),
            "level": {"q": self.level.q, "M": self.level.m, "p": self.level.p, "alpha": self.level.alpha},
            "weight": {"k": self.weight.k, "w": self.weight.w},
            "matrix": rows,
        })
    }
}

/// Matrix of f ↦ (d_i ↦ Σ_{J ∈ lattices(i)} f(J)) from `source` to `target`.
/// The lattices attached to target class i must be left ideals for the
/// source order.
pub fn assemble<A: CoeffAction>(
    target: &AutFormSpace<A>,
    source: &AutFormSpace<A>,
    mut lattices: impl FnMut(usize, &IdealClass) -> Result<Vec<Lattice>>,
) -> Result<Mat<<A::R as Ring>::Elem>> {
    let ring = target.ring();
    let alg = &source.classes.algebra;
    let mut out = zeros(ring, target.dim, source.dim);
    for (i, ci) in target.classes.classes.iter().enumerate() {
        let rows = target.blocks[i].basis.cols;
        if rows == 0 {
            continue;
        }
        let mut acc: Vec<Mat<_>> = source.blocks.iter().map(|b| zeros(ring, source.coeff.dim(), b.basis.cols)).collect();
        for jl in lattices(i, ci)? {
            let (j, y) = source.classes.identify(&jl)?;
            let r = source.coeff.matrix(alg, &y)?;
            acc[j] = mat_add(ring, &acc[j], &mat_mul(ring, &r, &source.blocks[j].basis));
        }
        for (j, a) in acc.iter().enumerate() {
            let blk = mat_mul(ring, &target.blocks[i].coords, a);
            for r in 0..blk.rows {
                for c in 0..blk.cols {
                    out.set(target.offsets[i] + r, source.offsets[j] + c, blk.get(r, c).clone());
                }
            }
        }
    }
    Ok(out)
}

fn check_good<A: CoeffAction>(space: &AutFormSpace<A>, ell: u64) -> Result<()> {
    if !space.level.is_good(ell) {
        return Err(Error::Level(format!("ℓ = {ell} must be a prime not dividing qMp")));
    }
    Ok(())
}

/// The ℓ+1 sublattices of I_i making up the cosets of [Uη_ℓU].
pub fn t_lattices<A: CoeffAction>(space: &AutFormSpace<A>, ci: &IdealClass, ell: u64) -> Result<Vec<Lattice>> {
    let cs = &space.classes;
    neighbors(&cs.algebra, &cs.maximal, &cs.order, &ci.lattice, ell)
}

/// The s sublattices of I_i making up [Uη_sU] at a prime s with U₀(s^e)
/// level structure, with local components [[s, 0], [s^e·k, 1]], k mod s.
pub fn u_lattices<A: CoeffAction>(space: &AutFormSpace<A>, ci: &IdealClass, s: u64, e: u32) -> Result<Vec<Lattice>> {
    let md = s.pow(e + 1);
    let se = s.pow(e);
    let cs = &space.classes;
    let sp = local_splitting(&cs.algebra, &cs.maximal, s, e + 1)?;
    let g = local_frame(&cs.algebra, &cs.order, &ci.lattice, s)?;
    let imgs = local_images(&cs.algebra, &sp, &ci.lattice, &g)?;
    Ok((0..s)
        .map(|k| {
            let c0: Vec<u64> = imgs.iter().map(|m| (se * m[0]) % md).collect();
            let c1: Vec<u64> = imgs.iter().map(|m| (m[2] + md - (se * k % md) * m[3] % md) % md).collect();
            ci.lattice.sublattice_mod(&[c0, c1], md)
        })
        .collect())
}

/// U_ℓ at a prime ℓ exactly dividing the tame level M.
pub fn u_ell_operator<A: CoeffAction>(space: &AutFormSpace<A>, ell: u64) -> Result<Mat<<A::R as Ring>::Elem>> {
    let m = space.level.m;
    if m % ell != 0 || (m / ell) % ell == 0 || ell == space.level.p {
        return Err(Error::Level(format!("{ell} must divide the tame level exactly once")));
    }
    assemble(space, space, |_, ci| u_lattices(space, ci, ell, 1))
}

pub fn hecke_operator<A: CoeffAction>(
    space: &AutFormSpace<A>,
    label: HeckeLabel,
) -> Result<HeckeMatrix<<A::R as Ring>::Elem>> {
    let matrix = match label {
        HeckeLabel::T(ell) => {
            check_good(space, ell)?;
            assemble(space, space, |_, ci| t_lattices(space, ci, ell))?
        }
        HeckeLabel::S(ell) => {
            check_good(space, ell)?;
            assemble(space, space, |_, ci| Ok(vec![ci.lattice.scale(&rat(ell as i64))]))?
        }
        HeckeLabel::U => {
            if space.level.alpha == 0 {
                return Err(Error::Level("U_p needs p-level exponent α ≥ 1".into()));
            }
            assemble(space, space, |_, ci| u_lattices(space, ci, space.level.p, space.level.alpha))?
        }
    };
    Ok(HeckeMatrix { label, level: space.level, weight: space.weight, matrix })
}

pub fn u_p_operator<A: CoeffAction>(space: &AutFormSpace<A>) -> Result<HeckeMatrix<<A::R as Ring>::Elem>> {
    hecke_operator(space, HeckeLabel::U)
}

/// [Uη_ℓ⁻¹U] on the dual space: the cosets (1/ℓ)·J for the T_ℓ lattices J.
pub fn dual_t_operator<A: CoeffAction>(dual: &AutFormSpace<A>, ell: u64) -> Result<Mat<<A::R as Ring>::Elem>> {
    check_good(dual, ell)?;
    let s = Rat::new(1.into(), (ell as i64).into());
    assemble(dual, dual, |_, ci| Ok(t_lattices(dual, ci, ell)?.into_iter().map(|l| l.scale(&s)).collect()))
}

/// Gram matrix of ⟨f, λ⟩ = Σ_i w_i⁻¹ ⟨f(d_i), λ(d_i)⟩ between a space (rows)
/// and its dual (columns).
pub fn pairing_gram<A: CoeffAction>(space: &AutFormSpace<A>, dual: &AutFormSpace<A>) -> Result<Mat<<A::R as Ring>::Elem>> {
    let ring = space.ring();
    let mut g = zeros(ring, space.dim, dual.dim);
    for i in 0..space.h() {
        let winv = inverse_unit_order(space, i)?;
        let b = &space.blocks[i].basis;
        let bd = &dual.blocks[i].basis;
        let blk = mat_mul(ring, &b.transpose(), bd);
        for r in 0..blk.rows {
            for c in 0..blk.cols {
                g.set(space.offsets[i] + r, dual.offsets[i] + c, ring.mul(&winv, blk.get(r, c)));
            }
        }
    }
    Ok(g)
}
