//! Truncated function spaces on the unit polydisc and the M_1 action.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::weight::{binomials, MonoidElt, WeightChar};
use crate::arith::linalg::{Mat, zeros};
use crate::arith::rat::Rat;
use crate::arith::ring::{RatField, Ring, Zpm};
use crate::autoforms::coeff::sym_matrix;
use crate::error::{Error, Result};

/// Functions Σ c_j z^j with |j| ≤ N in g variables, coefficients mod p^m.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSpace {
    pub weight: WeightChar,
    pub n: usize,
    pub m: u32,
    pub g: usize,
}

/// Functionals τ^l with ⟨z^j, τ^l⟩ = δ_{j,l}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedDual {
    pub space: TruncatedSpace,
}

impl TruncatedSpace {
    pub fn new(weight: WeightChar, n: usize, m: u32) -> Result<Self> {
        Self::with_vars(weight, n, m, 1)
    }

    pub fn with_vars(weight: WeightChar, n: usize, m: u32, g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::Input("need at least one variable".into()));
        }
        Zpm::new(weight.p, m)?;
        Ok(TruncatedSpace { weight, n, m, g })
    }

    pub fn ring(&self) -> Zpm {
        Zpm::new(self.weight.p, self.m).expect("checked in constructor")
    }

    pub fn dim(&self) -> usize {
        monomials(self.g, self.n).len()
    }

    pub fn monomials(&self) -> Vec<Vec<usize>> {
        monomials(self.g, self.n)
    }

    pub fn dual(&self) -> TruncatedDual {
        TruncatedDual { space: self.clone() }
    }
}

/// Multi-indices of total degree ≤ n, ordered by degree and then
/// colexicographically.
pub fn monomials(g: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(g: usize, total: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
        if cur.len() == g - 1 {
            let used: usize = cur.iter().sum();
            let mut v = cur.clone();
            v.push(total - used);
            out.push(v);
            return;
        }
        let used: usize = cur.iter().sum();
        for a in 0..=total - used {
            cur.push(a);
            rec(g, total, out, cur);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=n {
        let mut layer = Vec::new();
        rec(g, d, &mut layer, &mut Vec::new());
        layer.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        out.extend(layer);
    }
    out
}

/// Matrix of f ↦ f·γ on the monomial basis, with per-column precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrix {
    pub matrix: Mat<u64>,
    /// Column j is valid modulo p^prec[j] as an operator on the truncated
    /// space: the discarded tail of z^j·γ has valuation ≥ N+1−j.
    pub prec: Vec<u32>,
}

/// (f·γ)(z) = n(cz+d)·v(det γ)·f((az+b)/(cz+d)) on monomials z^0..z^N.
/// Column t is (az+b)^t·d^(-t)·(1+xz)^(s-t)·n(d)·v(det γ), x = c/d.
pub fn monoid_action(space: &TruncatedSpace, g: &MonoidElt) -> Result<ActionMatrix> {
    if space.g != 1 {
        return Err(Error::Input("the monoid action is implemented for one variable".into()));
    }
    if g.p != space.weight.p {
        return Err(Error::Input("matrix and weight live at different primes".into()));
    }
    if g.m < space.m {
        return Err(Error::Precision(format!("matrix known mod p^{} but p^{} is needed", g.m, space.m)));
    }
    g.check(1)?;
    let z = space.ring();
    let n = space.n;
    let [a, b, c, d] = g.reduce(space.m).e;
    let dinv = z.inv(&d).expect("d is a unit");
    let x = z.mul(&c, &dinv);
    let scale = z.mul(&space.weight.n.eval(&z, d)?, &space.weight.v_eval(&z, g.reduce(space.m).det())?);
    let s = space.weight.exponent();
    let xpow: Vec<u64> = (0..=n).map(|r| z.pow(&x, r as u64)).collect();
    let mut mat = zeros(&z, n + 1, n + 1);
    let mut lin = vec![z.one()];
    let mut dpow = z.one();
    for t in 0..=n {
        let sigma = &s - BigInt::from(t);
        let series: Vec<u64> = binomials(&sigma, n)
            .iter()
            .zip(&xpow)
            .map(|(cb, xp)| z.mul(&z.from_big(cb), xp))
            .collect();
        let col_scale = z.mul(&scale, &dpow);
        for (i, li) in lin.iter().enumerate() {
            for (r, sr) in series.iter().enumerate().take(n + 1 - i) {
                let cur = *mat.get(i + r, t);
                mat.set(i + r, t, z.add(&cur, &z.mul(&col_scale, &z.mul(li, sr))));
            }
        }
        // (az+b)^(t+1) and d^(-(t+1))
        let mut next = vec![z.zero(); lin.len() + 1];
        for (i, li) in lin.iter().enumerate() {
            next[i] = z.add(&next[i], &z.mul(li, &b));
            next[i + 1] = z.add(&next[i + 1], &z.mul(li, &a));
        }
        lin = next;
        dpow = z.mul(&dpow, &dinv);
    }
    let prec = (0..=n).map(|t| space.m.min((n + 1 - t) as u32)).collect();
    Ok(ActionMatrix { matrix: mat, prec })
}

/// Dual action: the transpose of the function-side action, so that
/// ⟨A·f, μ⟩ = ⟨f, Aᵀ·μ⟩. For several variables only the unipotent
/// [[1, b], [0, 1]] is supported, acting by translation in each variable.
pub fn dual_action(dual: &TruncatedDual, g: &MonoidElt) -> Result<ActionMatrix> {
    let sp = &dual.space;
    if sp.g == 1 {
        let a = monoid_action(sp, g)?;
        return Ok(ActionMatrix { matrix: a.matrix.transpose(), prec: a.prec });
    }
    let [a, b, c, d] = g.e;
    if a != 1 || c != 0 || d != 1 {
        return Err(Error::Input("only unipotent matrices act on several variables".into()));
    }
    if sp.weight.n.i != 0 || sp.weight.exponent() != BigInt::from(0) {
        return Err(Error::Input("several-variable dual action needs the trivial weight".into()));
    }
    let z = sp.ring();
    let t = translation(&z, sp.g, sp.n, &(b % z.modulus()));
    Ok(ActionMatrix { prec: vec![sp.m; t.rows], matrix: t.transpose() })
}

/// Matrix of f(z) ↦ f(z_1 + b, ..., z_g + b) on monomials of degree ≤ n.
pub fn translation<R: Ring>(r: &R, g: usize, n: usize, b: &R::Elem) -> Mat<R::Elem> {
    let mons = monomials(g, n);
    let index: std::collections::HashMap<Vec<usize>, usize> =
        mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    // one-variable expansions (z+b)^j = Σ C(j,i) b^(j-i) z^i
    let mut pascal = vec![vec![r.one()]];
    for j in 1..=n {
        let prev = &pascal[j - 1];
        let mut row = vec![r.zero(); j + 1];
        for (i, c) in prev.iter().enumerate() {
            row[i] = r.add(&row[i], &r.mul(c, b));
            row[i + 1] = r.add(&row[i + 1], c);
        }
        pascal.push(row);
    }
    let mut out = Mat::from_fn(mons.len(), mons.len(), |_, _| r.zero());
    for (col, j) in mons.iter().enumerate() {
        // all l ≤ j componentwise
        let mut terms: Vec<(Vec<usize>, R::Elem)> = vec![(Vec::new(), r.one())];
        for &jv in j {
            let mut next = Vec::new();
            for (l, c) in &terms {
                for (i, pc) in pascal[jv].iter().enumerate() {
                    let mut l2 = l.clone();
                    l2.push(i);
                    next.push((l2, r.mul(c, pc)));
                }
            }
            terms = next;
        }
        for (l, c) in terms {
            let row = index[&l];
            let cur = out.get(row, col).clone();
            out.set(row, col, r.add(&cur, &c));
        }
    }
    out
}

/// Rational translation matrix, used for exact kernel computations.
pub fn translation_rat(g: usize, n: usize, b: &Rat) -> Mat<Rat> {
    translation(&RatField, g, n, b)
}

/// Compares the classical block of the action with Sym^(k-2) and checks that
/// polynomials of degree ≤ k−2 are preserved. Returns the largest p-adic
/// precision deficit seen over the generators, 0 meaning exact agreement mod p^m.
pub fn classical_subspace_check(space: &TruncatedSpace, gens: &[MonoidElt]) -> Result<u32> {
    let k = space
        .weight
        .k()
        .ok_or_else(|| Error::Input("classical subspace check needs a classical weight".into()))?;
    let nk = (k - 2) as usize;
    if space.n < nk {
        return Err(Error::Input(format!("truncation {} is below k-2 = {nk}", space.n)));
    }
    let z = space.ring();
    let mut worst = 0;
    for g in gens {
        let act = monoid_action(space, g)?;
        let gr = g.reduce(space.m);
        let mut sym = sym_matrix(&z, nk, gr.e);
        // (cz+d)^n f((az+b)/(cz+d)) in increasing z-degree; twist by v(det)
        let vd = space.weight.v_eval(&z, gr.det())?;
        for i in 0..=nk {
            for j in 0..=nk {
                let e = z.mul(sym.get(i, j), &vd);
                sym.set(i, j, e);
            }
        }
        for j in 0..=nk {
            for i in 0..=space.n {
                let want = if i <= nk { *sym.get(i, j) } else { 0 };
                let got = *act.matrix.get(i, j);
                if got != want {
                    let diff = z.sub(&got, &want);
                    let v = z.valuation(&diff).unwrap_or(space.m);
                    worst = worst.max(space.m - v);
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::linalg::{identity, mat_mul};

    fn sp(k: u32, n: usize, m: u32) -> TruncatedSpace {
        TruncatedSpace::new(WeightChar::classical(3, k, k).unwrap(), n, m).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let s = sp(4, 6, 5);
        let a = monoid_action(&s, &MonoidElt::identity(3, 5)).unwrap();
        assert_eq!(a.matrix, identity(&s.ring(), 7));
    }

    #[test]
    fn translation_at_weight_two_is_pascal() {
        let s = sp(2, 5, 6);
        let g = MonoidElt::new(3, 6, [1, 1, 0, 1]).unwrap();
        let a = monoid_action(&s, &g).unwrap();
        let want = translation(&s.ring(), 1, 5, &1);
        assert_eq!(a.matrix, want);
        assert_eq!(*a.matrix.get(2, 4), 6);
    }

    #[test]
    fn right_action_composition() {
        let s = TruncatedSpace::new(WeightChar::new(5, 2, &Rat::new(7.into(), 3.into())).unwrap(), 8, 6).unwrap();
        let z = s.ring();
        let g1 = MonoidElt::new(5, 6, [2, 3, 10, 7]).unwrap();
        let g2 = MonoidElt::new(5, 6, [1, -4, 25, 3]).unwrap();
        let a1 = monoid_action(&s, &g1).unwrap();
        let a2 = monoid_action(&s, &g2).unwrap();
        let a12 = monoid_action(&s, &g1.mul(&g2)).unwrap();
        let prod = mat_mul(&z, &a2.matrix, &a1.matrix);
        for j in 0..=8 {
            let md = 5u64.pow(a12.prec[j]);
            for i in 0..=8 {
                assert_eq!(prod.get(i, j) % md, a12.matrix.get(i, j) % md, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn classical_block_matches_sym() {
        let s = sp(4, 7, 5);
        let gens = [
            MonoidElt::new(3, 5, [1, 0, 3, 1]).unwrap(),
            MonoidElt::new(3, 5, [2, 5, 6, 7]).unwrap(),
            MonoidElt::new(3, 5, [3, 0, 0, 1]).unwrap(),
        ];
        assert_eq!(classical_subspace_check(&s, &gens).unwrap(), 0);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(1, 6).len(), 7);
        assert_eq!(monomials(2, 3).len(), 10);
        assert_eq!(monomials(3, 2).len(), 10);
    }
}
