//! Left ideals of an order: inverses, right orders, units, equivalence and
//! local frames used to describe sublattices by congruence conditions.

use num_traits::{One, ToPrimitive};

use super::algebra::{QuatAlgebra, QuatElt};
use super::lattice::Lattice;
use super::order::{local_splitting, LocalSplitting, Order};
use crate::arith::rat::{padic_val, rat, Rat};
use crate::error::{Error, Result};

/// I⁻¹ = Ī / nrd(I).
pub fn inverse(alg: &QuatAlgebra, order: &Order, i: &Lattice) -> Lattice {
    let n = alg.lattice_norm(&order.lattice, i);
    i.conj().scale(&n.recip())
}

/// O_R(I) = I⁻¹ I.
pub fn right_order(alg: &QuatAlgebra, order: &Order, i: &Lattice) -> Lattice {
    alg.lattice_mul(&inverse(alg, order, i), i)
}

/// Elements of reduced norm 1 in an order lattice (its full unit group,
/// since the algebra is definite).
pub fn unit_group(alg: &QuatAlgebra, o: &Lattice) -> Vec<QuatElt> {
    let mut u: Vec<QuatElt> = alg
        .short_vectors(o, &Rat::one())
        .into_iter()
        .filter(|(_, n)| n.is_one())
        .map(|(x, _)| x)
        .collect();
    u.sort_by(|a, b| a.0.cmp(&b.0));
    u
}

/// Some x with J = I·x, when I and J are in the same right class.
pub fn principalize(alg: &QuatAlgebra, order: &Order, i: &Lattice, j: &Lattice) -> Option<QuatElt> {
    let ni = alg.lattice_norm(&order.lattice, i);
    let nj = alg.lattice_norm(&order.lattice, j);
    principalize_with(alg, &inverse(alg, order, i), &(nj / ni), j)
}

/// As [`principalize`] with I⁻¹ and the target norm nrd(J)/nrd(I) given.
pub fn principalize_with(alg: &QuatAlgebra, i_inv: &Lattice, target: &Rat, j: &Lattice) -> Option<QuatElt> {
    let l = alg.lattice_mul(i_inv, j);
    let mut cands: Vec<QuatElt> =
        alg.short_vectors(&l, target).into_iter().filter(|(_, n)| n == target).map(|(x, _)| x).collect();
    cands.sort_by(|a, b| a.0.cmp(&b.0));
    cands.into_iter().next()
}

/// An element g ∈ I with nrd(g)/nrd(I) prime to ℓ, so that I ⊗ Z_ℓ = O_ℓ·g.
pub fn local_frame(alg: &QuatAlgebra, order: &Order, i: &Lattice, ell: u64) -> Result<QuatElt> {
    let n = alg.lattice_norm(&order.lattice, i);
    let mut bound = rat(2);
    for _ in 0..12 {
        let mut cands: Vec<QuatElt> = alg
            .short_vectors(i, &(&n * &bound))
            .into_iter()
            .filter(|(_, nx)| padic_val(&(nx / &n), ell).ok().flatten() == Some(0))
            .map(|(x, _)| x)
            .collect();
        if !cands.is_empty() {
            cands.sort_by(|a, b| (alg.nrd(a), &a.0).cmp(&(alg.nrd(b), &b.0)));
            return Ok(cands.swap_remove(0));
        }
        bound *= rat(2);
    }
    Err(Error::Internal(format!("no local generator at {ell} found")))
}

/// Images φ_ℓ(b g⁻¹) of the basis of I, where g is a local generator. These
/// identify I/ℓ^m I with M_2(Z/ℓ^m) as left modules over the maximal order.
pub fn local_images(
    alg: &QuatAlgebra,
    sp: &LocalSplitting,
    i: &Lattice,
    frame: &QuatElt,
) -> Result<Vec<[u64; 4]>> {
    let ginv = alg.inv(frame)?;
    i.basis().iter().map(|b| sp.image(&alg.mul(b, &ginv))).collect()
}

/// Points of P¹(F_ℓ) as (w0, w1): (1, t) for t < ℓ, then (0, 1).
pub fn projective_line(ell: u64) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = (0..ell).map(|t| (1, t)).collect();
    v.push((0, 1));
    v
}

/// The ℓ+1 left sublattices of index ℓ² in a left ideal of an order that is
/// maximal at ℓ: J_w = {x : φ(x g⁻¹)·w ≡ 0 mod ℓ}.
pub fn neighbors(alg: &QuatAlgebra, maximal: &Order, order: &Order, i: &Lattice, ell: u64) -> Result<Vec<Lattice>> {
    if ell == 2 {
        return neighbors_by_search(alg, order, i, ell);
    }
    let sp = local_splitting(alg, maximal, ell, 1)?;
    let g = local_frame(alg, order, i, ell)?;
    let imgs = local_images(alg, &sp, i, &g)?;
    Ok(projective_line(ell)
        .into_iter()
        .map(|(w0, w1)| {
            let c0: Vec<u64> = imgs.iter().map(|m| (m[0] * w0 + m[1] * w1) % ell).collect();
            let c1: Vec<u64> = imgs.iter().map(|m| (m[2] * w0 + m[3] * w1) % ell).collect();
            i.sublattice_mod(&[c0, c1], ell)
        })
        .collect())
}

/// Same sublattices found without a splitting, by scanning I/ℓI for
/// elements y whose submodule O·y + ℓI has index ℓ².
pub fn neighbors_by_search(alg: &QuatAlgebra, order: &Order, i: &Lattice, ell: u64) -> Result<Vec<Lattice>> {
    let ob = order.basis();
    let ib = i.basis();
    let l = ell as i64;
    let mut seen: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut out = Vec::new();
    let total = l.pow(4);
    for code in 1..total {
        let c: Vec<i64> = (0..4).map(|r| (code / l.pow(r)) % l).collect();
        let mut y = QuatElt::zero();
        for r in 0..4 {
            if c[r] != 0 {
                y = &y + &ib[r].scale(&rat(c[r]));
            }
        }
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for e in &ob {
            let co = i.coords(&alg.mul(e, &y));
            rows.push(co.iter().map(|x| crate::arith::rat::rat_mod(x, ell).unwrap()).collect());
        }
        let key = row_space_key(rows, ell);
        if key.len() != 2 || seen.contains(&key) {
            continue;
        }
        seen.push(key.clone());
        let mut gens: Vec<QuatElt> = ib.iter().map(|b| b.scale(&rat(l))).collect();
        for row in &key {
            let mut x = QuatElt::zero();
            for r in 0..4 {
                if row[r] != 0 {
                    x = &x + &ib[r].scale(&rat(row[r] as i64));
                }
            }
            gens.push(x);
        }
        out.push((key, Lattice::from_gens(&gens)?));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    if out.len() != ell as usize + 1 {
        return Err(Error::Internal(format!("found {} neighbors at {ell}", out.len())));
    }
    Ok(out.into_iter().map(|(_, x)| x).collect())
}

/// Reduced row echelon basis over F_ℓ, used as a canonical key.
fn row_space_key(mut rows: Vec<Vec<u64>>, ell: u64) -> Vec<Vec<u64>> {
    let ncols = rows[0].len();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| rows[k][c] % ell != 0) else { continue };
        rows.swap(r, p);
        let inv = crate::arith::rat::mod_inv(rows[r][c], ell).unwrap();
        for x in rows[r].iter_mut() {
            *x = *x * inv % ell;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                let pr = rows[r].clone();
                for (x, y) in rows[k].iter_mut().zip(pr.iter()) {
                    *x = (*x + ell * ell - f * y % ell) % ell;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Theta-type class invariant: counts of x with nrd(x) = t·nrd(I), t ≤ 3.
pub fn theta_key(alg: &QuatAlgebra, order: &Order, i: &Lattice) -> [usize; 3] {
    let n = alg.lattice_norm(&order.lattice, i);
    let mut out = [0; 3];
    for (_, nx) in alg.short_vectors(i, &(&n * rat(3))) {
        let t = nx / &n;
        if let Some(ti) = t.is_integer().then(|| t.to_integer().to_usize()).flatten() {
            if (1..=3).contains(&ti) {
                out[ti - 1] += 1;
            }
        }
    }
    out
}
