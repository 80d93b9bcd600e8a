//! Full-rank Z-lattices in a quaternion algebra, kept in Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::algebra::{rat_sqrt, QuatAlgebra, QuatElt};
use crate::arith::linalg::hnf;
use crate::arith::rat::Rat;
use crate::error::{Error, Result};

/// Lattice spanned by rows/den, rows in HNF with den minimal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    pub den: BigInt,
    pub rows: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn from_gens(gens: &[QuatElt]) -> Result<Self> {
        let den = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(&g.denom()));
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.0.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let h = hnf(&rows);
        if h.len() != 4 {
            return Err(Error::Input(format!("generators span rank {} < 4", h.len())));
        }
        Ok(Self::normalized(den, h))
    }

    fn normalized(den: BigInt, rows: Vec<Vec<BigInt>>) -> Self {
        let mut g = den.clone();
        for r in &rows {
            for x in r {
                g = g.gcd(x);
            }
        }
        if g.is_one() {
            return Lattice { den, rows };
        }
        Lattice { den: &den / &g, rows: rows.iter().map(|r| r.iter().map(|x| x / &g).collect()).collect() }
    }

    pub fn basis(&self) -> Vec<QuatElt> {
        self.rows
            .iter()
            .map(|r| QuatElt(r.iter().map(|x| Rat::new(x.clone(), self.den.clone())).collect()))
            .collect()
    }

    /// Coordinates of x in the basis (rational in general).
    pub fn coords(&self, x: &QuatElt) -> Vec<Rat> {
        let d = Rat::from_integer(self.den.clone());
        let target: Vec<Rat> = x.0.iter().map(|c| c * &d).collect();
        let mut c = vec![Rat::zero(); 4];
        for col in 0..4 {
            let mut s = target[col].clone();
            for r in 0..col {
                s -= &c[r] * Rat::from_integer(self.rows[r][col].clone());
            }
            c[col] = s / Rat::from_integer(self.rows[col][col].clone());
        }
        c
    }

    pub fn contains(&self, x: &QuatElt) -> bool {
        self.coords(x).iter().all(|c| c.is_integer())
    }

    pub fn contains_lattice(&self, o: &Lattice) -> bool {
        o.basis().iter().all(|b| self.contains(b))
    }

    /// Covolume relative to Z⟨1, i, j, k⟩.
    pub fn covolume(&self) -> Rat {
        let mut d = BigInt::one();
        for (i, r) in self.rows.iter().enumerate() {
            d *= &r[i];
        }
        Rat::new(d.abs(), self.den.pow(4))
    }

    pub fn scale(&self, s: &Rat) -> Lattice {
        let gens: Vec<QuatElt> = self.basis().iter().map(|b| b.scale(s)).collect();
        Lattice::from_gens(&gens).unwrap()
    }

    pub fn conj(&self) -> Lattice {
        let gens: Vec<QuatElt> = self.basis().iter().map(|b| b.conj()).collect();
        Lattice::from_gens(&gens).unwrap()
    }

    pub fn sum(&self, o: &Lattice) -> Lattice {
        let mut gens = self.basis();
        gens.extend(o.basis());
        Lattice::from_gens(&gens).unwrap()
    }

    /// Sublattice of elements whose coordinates satisfy the congruences
    /// Σ_r c_r·cond[t][r] ≡ 0 mod `modulus` for every row t.
    pub fn sublattice_mod(&self, cond: &[Vec<u64>], modulus: u64) -> Lattice {
        let basis = self.basis();
        let mut gens: Vec<QuatElt> = basis.iter().map(|b| b.scale(&Rat::from_integer(modulus.into()))).collect();
        for v in kernel_mod(cond, modulus) {
            let mut x = QuatElt::zero();
            for (r, c) in v.iter().enumerate() {
                if *c != 0 {
                    x = &x + &basis[r].scale(&Rat::from_integer(BigInt::from(*c)));
                }
            }
            gens.push(x);
        }
        Lattice::from_gens(&gens).unwrap()
    }
}

/// Generators of {c ∈ (Z/n)^4 : cond·c ≡ 0}, lifted to integers.
fn kernel_mod(cond: &[Vec<u64>], n: u64) -> Vec<Vec<u64>> {
    // Integer kernel of [cond | n·I] restricted to the first 4 coordinates,
    // computed from the HNF of the relation lattice.
    let t = cond.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for r in 0..4 {
        let mut row = vec![BigInt::zero(); 4 + t];
        for (k, c) in cond.iter().enumerate() {
            row[k] = BigInt::from(c[r] % n);
        }
        row[t + r] = BigInt::one();
        rows.push(row);
    }
    for k in 0..t {
        let mut row = vec![BigInt::zero(); 4 + t];
        row[k] = BigInt::from(n);
        rows.push(row);
    }
    let h = hnf(&rows);
    h.into_iter()
        .filter(|r| r[..t].iter().all(|x| x.is_zero()))
        .map(|r| r[t..].iter().map(|x| x.mod_floor(&BigInt::from(n)).to_u64().unwrap()).collect())
        .collect()
}

impl QuatAlgebra {
    pub fn lattice_mul(&self, x: &Lattice, y: &Lattice) -> Lattice {
        let (bx, by) = (x.basis(), y.basis());
        let mut gens = Vec::with_capacity(16);
        for u in &bx {
            for v in &by {
                gens.push(self.mul(u, v));
            }
        }
        Lattice::from_gens(&gens).unwrap()
    }

    pub fn lattice_mul_elt(&self, x: &Lattice, e: &QuatElt) -> Lattice {
        let gens: Vec<QuatElt> = x.basis().iter().map(|b| self.mul(b, e)).collect();
        Lattice::from_gens(&gens).unwrap()
    }

    pub fn elt_mul_lattice(&self, e: &QuatElt, x: &Lattice) -> Lattice {
        let gens: Vec<QuatElt> = x.basis().iter().map(|b| self.mul(e, b)).collect();
        Lattice::from_gens(&gens).unwrap()
    }

    /// Gram matrix of the norm form in the lattice basis: nrd(Σ c_r b_r) = cᵀ G c.
    pub fn norm_gram(&self, x: &Lattice) -> Vec<Vec<Rat>> {
        let b = x.basis();
        (0..4).map(|r| (0..4).map(|s| self.bilinear(&b[r], &b[s])).collect()).collect()
    }

    /// All nonzero lattice vectors with nrd ≤ bound, with their norms.
    pub fn short_vectors(&self, x: &Lattice, bound: &Rat) -> Vec<(QuatElt, Rat)> {
        let g = self.norm_gram(x);
        let den = g.iter().flatten().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let dr = Rat::from_integer(den.clone());
        let gi: Vec<Vec<i128>> =
            g.iter().map(|r| r.iter().map(|v| (v * &dr).to_integer().to_i128().unwrap()).collect()).collect();
        let bi = (bound * &dr).floor().to_integer().to_i128().unwrap();
        let basis = x.basis();
        enumerate(&gi, bi)
            .into_iter()
            .map(|(c, n)| {
                let mut e = QuatElt::zero();
                for (r, cr) in c.iter().enumerate() {
                    if *cr != 0 {
                        e = &e + &basis[r].scale(&Rat::from_integer(BigInt::from(*cr)));
                    }
                }
                (e, Rat::new(BigInt::from(n), den.clone()))
            })
            .collect()
    }

    /// Reduced norm of a locally principal lattice relative to an order:
    /// [O : I] = nrd(I)^2.
    pub fn lattice_norm(&self, order: &Lattice, x: &Lattice) -> Rat {
        rat_sqrt(&(x.covolume() / order.covolume())).expect("index is a square")
    }
}

/// Fincke–Pohst enumeration of integer vectors with cᵀGc ≤ bound (G integral,
/// positive definite). Candidate ranges come from a floating-point Cholesky
/// factorization with slack; every returned vector is checked exactly.
pub fn enumerate(g: &[Vec<i128>], bound: i128) -> Vec<(Vec<i64>, i128)> {
    let n = g.len();
    let t = lll_gram(g);
    let gr: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| t[a][i] * g[a][b] * t[b][j]).sum()).collect())
        .collect();
    enumerate_reduced(&gr, bound)
        .into_iter()
        .map(|(c, v)| ((0..n).map(|i| (0..n).map(|j| t[i][j] * c[j] as i128).sum::<i128>() as i64).collect(), v))
        .collect()
}

/// LLL reduction (δ = 3/4) of a positive definite integral Gram matrix.
/// Returns T with the columns of T spanning the same lattice, reduced. The
/// transform is exact; Gram–Schmidt data is kept in floating point, which only
/// affects the quality of the reduction.
pub fn lll_gram(g: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = g.len();
    let mut t: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let gram = |t: &Vec<Vec<i128>>, i: usize, j: usize| -> f64 {
        let mut s = 0f64;
        for a in 0..n {
            for b in 0..n {
                s += (t[a][i] * t[b][j]) as f64 * g[a][b] as f64;
            }
        }
        s
    };
    let gso = |t: &Vec<Vec<i128>>| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0f64; n]; n];
        let mut bn = vec![0f64; n];
        for i in 0..n {
            for j in 0..i {
                let mut m = gram(t, i, j);
                for k in 0..j {
                    m -= mu[i][k] * mu[j][k] * bn[k];
                }
                mu[i][j] = m / bn[j];
            }
            let mut b = gram(t, i, i);
            for k in 0..i {
                b -= mu[i][k] * mu[i][k] * bn[k];
            }
            bn[i] = b;
        }
        (mu, bn)
    };
    let mut k = 1;
    let mut steps = 0;
    while k < n && steps < 10_000 {
        steps += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&t);
            if mu[k][j].abs() > 0.5 {
                let r = mu[k][j].round() as i128;
                for row in t.iter_mut() {
                    row[k] -= r * row[j];
                }
            }
        }
        let (mu, bn) = gso(&t);
        if bn[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1] {
            k += 1;
        } else {
            for row in t.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
        }
    }
    t
}

fn enumerate_reduced(g: &[Vec<i128>], bound: i128) -> Vec<(Vec<i64>, i128)> {
    let n = g.len();
    let mut q = vec![vec![0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            q[i][j] = g[i][j] as f64;
        }
    }
    // LDLᵀ in the form Q(x) = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)^2
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let slack = 1e-7 * (bound as f64).abs() + 1e-6;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    rec(n, n - 1, &q, bound as f64 + slack, 0.0, &mut x, &mut out, g, bound);
    out
}

#[allow(clippy::too_many_arguments)]
fn rec(
    n: usize,
    i: usize,
    q: &[Vec<f64>],
    bound: f64,
    used: f64,
    x: &mut Vec<i64>,
    out: &mut Vec<(Vec<i64>, i128)>,
    g: &[Vec<i128>],
    ibound: i128,
) {
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let rem = bound - used;
    if rem < 0.0 {
        return;
    }
    let w = (rem / q[i][i]).sqrt();
    let lo = (center - w).ceil() as i64;
    let hi = (center + w).floor() as i64;
    for v in lo..=hi {
        x[i] = v;
        let t = v as f64 - center;
        let u = used + q[i][i] * t * t;
        if i == 0 {
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            let mut val: i128 = 0;
            for r in 0..n {
                for s in 0..n {
                    val += g[r][s] * x[r] as i128 * x[s] as i128;
                }
            }
            if val <= ibound {
                out.push((x.clone(), val));
            }
        } else {
            rec(n, i - 1, q, bound, u, x, out, g, ibound);
        }
    }
    x[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_z4() {
        let g: Vec<Vec<i128>> = (0..4).map(|i| (0..4).map(|j| (i == j) as i128).collect()).collect();
        assert_eq!(enumerate(&g, 1).len(), 8);
        assert_eq!(enumerate(&g, 2).len(), 8 + 24);
    }

    #[test]
    fn kernel_mod_index() {
        let l = Lattice::from_gens(&[
            QuatElt::from_ints([1, 0, 0, 0]),
            QuatElt::from_ints([0, 1, 0, 0]),
            QuatElt::from_ints([0, 0, 1, 0]),
            QuatElt::from_ints([0, 0, 0, 1]),
        ])
        .unwrap();
        let s = l.sublattice_mod(&[vec![1, 2, 0, 0], vec![0, 0, 1, 1]], 5);
        assert_eq!(s.covolume(), Rat::from_integer(25.into()));
    }
}
