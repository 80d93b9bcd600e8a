//! The maps i(f, g) = f|[U1V] + g|[Uη_ℓV] and i†(f) = (f|[V1U], f|[Vη_ℓ⁻¹U])
//! and the block identities for i†i and j†j.

use crate::arith::linalg::{identity, mat_mul, mat_scale, mat_sub, zeros, Mat};
use crate::arith::rat::Rat;
use crate::arith::ring::Ring;
use crate::autoforms::coeff::CoeffAction;
use crate::autoforms::degeneracy::{down_eta_inv, down_one, up_eta, up_one};
use crate::autoforms::hecke::{assemble, dual_t_operator, hecke_operator, pairing_gram, HeckeLabel};
use crate::autoforms::space::AutFormSpace;
use crate::error::Result;

type Elem<A> = <<A as CoeffAction>::R as Ring>::Elem;

#[derive(Clone, Debug)]
pub struct OldNewData<A: CoeffAction> {
    pub u: AutFormSpace<A>,
    pub v: AutFormSpace<A>,
    pub ell: u64,
    /// [U1V] and [Uη_ℓV], each dim V × dim U.
    pub i: [Mat<Elem<A>>; 2],
    /// [V1U] and [Vη_ℓ⁻¹U], each dim U × dim V.
    pub idag: [Mat<Elem<A>>; 2],
    pub t: Mat<Elem<A>>,
    pub s: Mat<Elem<A>>,
}

/// 2×2 block matrix acting on the right on row pairs (f, g): entry (r, c)
/// sends the r-th summand to the c-th.
pub type Block2<E> = [[Mat<E>; 2]; 2];

impl<A: CoeffAction> OldNewData<A> {
    pub fn i_matrix(&self) -> Mat<Elem<A>> {
        Mat::blocks(&[vec![self.i[0].clone(), self.i[1].clone()]])
    }

    pub fn idag_matrix(&self) -> Mat<Elem<A>> {
        Mat::blocks(&[vec![self.idag[0].clone()], vec![self.idag[1].clone()]])
    }

    pub fn ring(&self) -> &A::R {
        self.u.ring()
    }
}

pub fn build_oldnew<A: CoeffAction>(u: AutFormSpace<A>, v: AutFormSpace<A>, ell: u64) -> Result<OldNewData<A>> {
    let i = [up_one(&u, &v, ell)?, up_eta(&u, &v, ell)?];
    let idag = [down_one(&v, &u, ell)?, down_eta_inv(&v, &u, ell)?];
    let t = hecke_operator(&u, HeckeLabel::T(ell))?.matrix;
    let s = hecke_operator(&u, HeckeLabel::S(ell))?.matrix;
    Ok(OldNewData { u, v, ell, i, idag, t, s })
}

fn right_blocks<R: Ring>(r: &R, down: &[Mat<R::Elem>; 2], up: &[Mat<R::Elem>; 2]) -> Block2<R::Elem> {
    let e = |row: usize, col: usize| mat_mul(r, &down[col], &up[row]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// i†i in the right-action block form.
pub fn compose_block<A: CoeffAction>(d: &OldNewData<A>) -> Block2<Elem<A>> {
    right_blocks(d.ring(), &d.idag, &d.i)
}

/// The predicted i†i = [[ℓ+1, S⁻¹T], [T, ℓ+1]].
pub fn expected_block<A: CoeffAction>(d: &OldNewData<A>) -> Result<Block2<Elem<A>>> {
    let r = d.ring();
    let n = d.u.dim;
    let l1 = mat_scale(r, &r.from_i64(d.ell as i64 + 1), &identity(r, n));
    let sinv_t = mat_mul(r, &s_inverse(&d.u, d.ell)?, &d.t);
    Ok([[l1.clone(), sinv_t], [d.t.clone(), l1]])
}

/// S_ℓ⁻¹ = [Uϖ_ℓ⁻¹U], computed from the lattices ℓ⁻¹·I_i.
fn s_inverse<A: CoeffAction>(u: &AutFormSpace<A>, ell: u64) -> Result<Mat<Elem<A>>> {
    let inv = Rat::new(1.into(), (ell as i64).into());
    assemble(u, u, |_, ci| Ok(vec![ci.lattice.scale(&inv)]))
}

/// j†j on the dual spaces, with the prediction [[ℓ+1, T*], [S*⁻¹T*, ℓ+1]]
/// where T* = [Uη_ℓ⁻¹U] and S* = [Uϖ_ℓ⁻¹U] act on L*.
pub fn dual_blocks<A: CoeffAction>(d: &OldNewData<A>) -> Result<(Block2<Elem<A>>, Block2<Elem<A>>)> {
    let r = d.ring();
    let (ud, vd) = (d.u.dual_space()?, d.v.dual_space()?);
    let j = [up_one(&ud, &vd, d.ell)?, up_eta(&ud, &vd, d.ell)?];
    let jdag = [down_one(&vd, &ud, d.ell)?, down_eta_inv(&vd, &ud, d.ell)?];
    let got = right_blocks(r, &jdag, &j);
    let tstar = dual_t_operator(&ud, d.ell)?;
    let s_star_inv = hecke_operator(&ud, HeckeLabel::S(d.ell))?.matrix;
    let l1 = mat_scale(r, &r.from_i64(d.ell as i64 + 1), &identity(r, ud.dim));
    let expect = [[l1.clone(), tstar.clone()], [mat_mul(r, &s_star_inv, &tstar), l1]];
    Ok((got, expect))
}

/// Residual (i†i)ᵀ-adjointness: ⟨i†i x, y⟩ = ⟨x, j†j y⟩ on L² × L*².
pub fn gram_adjoint_residual<A: CoeffAction>(d: &OldNewData<A>) -> Result<Mat<Elem<A>>> {
    let r = d.ring();
    let ud = d.u.dual_space()?;
    let g = pairing_gram(&d.u, &ud)?;
    let g2 = Mat::blocks(&[
        vec![g.clone(), zeros(r, g.rows, g.cols)],
        vec![zeros(r, g.rows, g.cols), g],
    ]);
    let ii = mat_mul(r, &d.idag_matrix(), &d.i_matrix());
    let (jj, _) = dual_blocks(d)?;
    let jj = column_form(r, &jj);
    Ok(mat_sub(r, &mat_mul(r, &ii.transpose(), &g2), &mat_mul(r, &g2, &jj)))
}

/// The column-convention matrix of a right-action block form.
pub fn column_form<R: Ring>(_r: &R, b: &Block2<R::Elem>) -> Mat<R::Elem> {
    Mat::blocks(&[vec![b[0][0].clone(), b[1][0].clone()], vec![b[0][1].clone(), b[1][1].clone()]])
}
