//! Degeneracy operators between a level U and the level V = U ∩ U₀(ℓ), and
//! the adjointness of ⟨ , ⟩ under [UgV] and [Vg⁻¹U].

use super::coeff::CoeffAction;
use super::hecke::{assemble, dual_t_operator, hecke_operator, pairing_gram, HeckeLabel};
use super::space::AutFormSpace;
use crate::arith::linalg::{mat_mul, mat_sub, Mat};
use crate::arith::rat::Rat;
use crate::arith::ring::Ring;
use crate::error::{Error, Result};
use crate::quaternion::classes::IdealClass;
use crate::quaternion::ideals::{local_frame, local_images, neighbors, projective_line};
use crate::quaternion::{local_splitting, Lattice};

type Elem<A> = <<A as CoeffAction>::R as Ring>::Elem;

fn check_pair<A: CoeffAction>(u: &AutFormSpace<A>, v: &AutFormSpace<A>, ell: u64) -> Result<()> {
    let (lu, lv) = (u.level, v.level);
    if lu.q != lv.q || lu.p != lv.p || lu.alpha != lv.alpha || lv.m != lu.m * ell || !lu.is_good(ell) {
        return Err(Error::Level(format!("level {} is not level {} times a good prime {ell}", lv.eichler_level(), lu.eichler_level())));
    }
    Ok(())
}

/// Images φ_ℓ(x g⁻¹) mod ℓ of the basis of a class representative.
fn images_at<A: CoeffAction>(space: &AutFormSpace<A>, ci: &IdealClass, ell: u64) -> Result<Vec<[u64; 4]>> {
    let cs = &space.classes;
    let sp = local_splitting(&cs.algebra, &cs.maximal, ell, 1)?;
    let g = local_frame(&cs.algebra, &cs.order, &ci.lattice, ell)?;
    local_images(&cs.algebra, &sp, &ci.lattice, &g)
}

fn column<F: Fn(&[u64; 4]) -> u64>(imgs: &[[u64; 4]], f: F) -> Vec<u64> {
    imgs.iter().map(f).collect()
}

/// [U1V]: f ↦ (d_a ↦ f(O_U·I_a)).
pub fn up_one<A: CoeffAction>(u: &AutFormSpace<A>, v: &AutFormSpace<A>, ell: u64) -> Result<Mat<Elem<A>>> {
    check_pair(u, v, ell)?;
    let alg = &u.classes.algebra;
    let ou = &u.classes.order.lattice;
    assemble(v, u, |_, ci| Ok(vec![alg.lattice_mul(ou, &ci.lattice)]))
}

/// [Uη_ℓV] with η_ℓ = diag(ℓ, 1): the sublattice of I_a whose local first
/// column vanishes mod ℓ.
pub fn up_eta<A: CoeffAction>(u: &AutFormSpace<A>, v: &AutFormSpace<A>, ell: u64) -> Result<Mat<Elem<A>>> {
    check_pair(u, v, ell)?;
    assemble(v, u, |_, ci| {
        let imgs = images_at(v, ci, ell)?;
        Ok(vec![ci.lattice.sublattice_mod(&[column(&imgs, |m| m[0])], ell)])
    })
}

/// [V1U]: the ℓ+1 left O_V-submodules of index ℓ in I_i.
pub fn down_one<A: CoeffAction>(v: &AutFormSpace<A>, u: &AutFormSpace<A>, ell: u64) -> Result<Mat<Elem<A>>> {
    check_pair(u, v, ell)?;
    assemble(u, v, |_, ci| {
        let imgs = images_at(u, ci, ell)?;
        Ok(projective_line(ell)
            .into_iter()
            .map(|(w0, w1)| ci.lattice.sublattice_mod(&[column(&imgs, |m| (m[2] * w0 + m[3] * w1) % ell)], ell))
            .collect())
    })
}

/// [Vη_ℓ⁻¹U]: the lattices I_i + ℓ⁻¹{x : φ(x g⁻¹) ≡ e₁·wᵗ up to scalars}.
pub fn down_eta_inv<A: CoeffAction>(v: &AutFormSpace<A>, u: &AutFormSpace<A>, ell: u64) -> Result<Mat<Elem<A>>> {
    check_pair(u, v, ell)?;
    let inv = Rat::new(1.into(), (ell as i64).into());
    assemble(u, v, |_, ci| {
        let imgs = images_at(u, ci, ell)?;
        Ok(projective_line(ell)
            .into_iter()
            .map(|(w0, w1)| {
                let conds = [
                    column(&imgs, |m| m[2]),
                    column(&imgs, |m| m[3]),
                    column(&imgs, |m| (m[0] * ((ell - w1) % ell) + m[1] * w0) % ell),
                ];
                ci.lattice.sum(&ci.lattice.sublattice_mod(&conds, ell).scale(&inv))
            })
            .collect())
    })
}

/// [Uη_vV] for a prime v prime to the level of V: the v-neighbors of O_U·I_a.
pub fn up_hecke<A: CoeffAction>(u: &AutFormSpace<A>, v: &AutFormSpace<A>, ell: u64, vprime: u64) -> Result<Mat<Elem<A>>> {
    check_pair(u, v, ell)?;
    if !v.level.is_good(vprime) {
        return Err(Error::Level(format!("{vprime} divides the level of V")));
    }
    let cs = &u.classes;
    let ou = &cs.order.lattice;
    assemble(v, u, |_, ci| {
        let j: Lattice = cs.algebra.lattice_mul(ou, &ci.lattice);
        neighbors(&cs.algebra, &cs.maximal, &cs.order, &j, vprime)
    })
}

/// Double coset labels g for adjointness between levels U ⊃ V.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegLabel {
    One,
    /// η_ℓ at the prime ℓ separating U and V.
    EtaEll,
    /// η_v at a prime v prime to the level of V.
    Eta(u64),
}

/// A = [UgV] on forms and B = [Vg⁻¹U] on dual forms.
pub fn degeneracy_pair<A: CoeffAction>(
    u: &AutFormSpace<A>,
    v: &AutFormSpace<A>,
    ud: &AutFormSpace<A>,
    vd: &AutFormSpace<A>,
    ell: u64,
    g: DegLabel,
) -> Result<(Mat<Elem<A>>, Mat<Elem<A>>)> {
    let ring = u.ring();
    Ok(match g {
        DegLabel::One => (up_one(u, v, ell)?, down_one(vd, ud, ell)?),
        DegLabel::EtaEll => (up_eta(u, v, ell)?, down_eta_inv(vd, ud, ell)?),
        DegLabel::Eta(w) => {
            let a = up_hecke(u, v, ell, w)?;
            let b = mat_mul(ring, &down_one(vd, ud, ell)?, &dual_t_operator(vd, w)?);
            (a, b)
        }
    })
}

/// Aᵗ·G_V − G_U·B, which vanishes exactly when ⟨f|[UgV], λ⟩ = ⟨f, λ|[Vg⁻¹U]⟩.
pub fn adjointness_residual<A: CoeffAction>(
    u: &AutFormSpace<A>,
    v: &AutFormSpace<A>,
    ell: u64,
    g: DegLabel,
) -> Result<Mat<Elem<A>>> {
    let ring = u.ring();
    let (ud, vd) = (u.dual_space()?, v.dual_space()?);
    let (a, b) = degeneracy_pair(u, v, &ud, &vd, ell, g)?;
    let gu = pairing_gram(u, &ud)?;
    let gv = pairing_gram(v, &vd)?;
    Ok(mat_sub(ring, &mat_mul(ring, &a.transpose(), &gv), &mat_mul(ring, &gu, &b)))
}

/// G⁻¹-free form of the Hecke adjointness: T_ℓᵗ·G − G·T_ℓ* on one level.
pub fn hecke_adjointness_residual<A: CoeffAction>(u: &AutFormSpace<A>, ell: u64) -> Result<Mat<Elem<A>>> {
    let ring = u.ring();
    let ud = u.dual_space()?;
    let t = hecke_operator(u, HeckeLabel::T(ell))?.matrix;
    let td = dual_t_operator(&ud, ell)?;
    let g = pairing_gram(u, &ud)?;
    Ok(mat_sub(ring, &mat_mul(ring, &t.transpose(), &g), &mat_mul(ring, &g, &td)))
}
