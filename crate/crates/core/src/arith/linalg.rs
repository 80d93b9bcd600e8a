//! Dense matrices over a [`Ring`], Gaussian elimination over fields, Smith
//! normal form over Z/p^m and Hermite normal form over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ring::{Ring, Zpm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<E> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Mat { rows: r, cols: c, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: E) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<E> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn from_cols(cols: &[Vec<E>], rows: usize) -> Self {
        Mat::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn submatrix(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Self {
        Mat::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Mat::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Mat<F> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Block matrix from a grid of equally shaped rows of blocks.
    pub fn blocks(grid: &[Vec<Mat<E>>]) -> Self {
        let heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        let rows = heights.iter().sum();
        let cols = widths.iter().sum();
        let mut data = Vec::with_capacity(rows * cols);
        for (bi, brow) in grid.iter().enumerate() {
            for i in 0..heights[bi] {
                for b in brow {
                    data.extend_from_slice(&b.data[i * b.cols..(i + 1) * b.cols]);
                }
            }
        }
        Mat { rows, cols, data }
    }
}

pub fn zeros<R: Ring>(r: &R, rows: usize, cols: usize) -> Mat<R::Elem> {
    Mat::from_fn(rows, cols, |_, _| r.zero())
}

pub fn identity<R: Ring>(r: &R, n: usize) -> Mat<R::Elem> {
    Mat::from_fn(n, n, |i, j| if i == j { r.one() } else { r.zero() })
}

pub fn scalar<R: Ring>(r: &R, n: usize, x: &R::Elem) -> Mat<R::Elem> {
    Mat::from_fn(n, n, |i, j| if i == j { x.clone() } else { r.zero() })
}

pub fn mat_mul<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!(a.cols, b.rows, "shape mismatch in product");
    let mut out = zeros(r, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if r.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let t = r.mul(x, b.get(k, j));
                let idx = i * b.cols + j;
                out.data[idx] = r.add(&out.data[idx], &t);
            }
        }
    }
    out
}

pub fn mat_vec<R: Ring>(r: &R, a: &Mat<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            let mut s = r.zero();
            for (j, x) in v.iter().enumerate() {
                s = r.add(&s, &r.mul(a.get(i, j), x));
            }
            s
        })
        .collect()
}

pub fn mat_add<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Mat::from_fn(a.rows, a.cols, |i, j| r.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_sub<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Mat::from_fn(a.rows, a.cols, |i, j| r.sub(a.get(i, j), b.get(i, j)))
}

pub fn mat_scale<R: Ring>(r: &R, x: &R::Elem, a: &Mat<R::Elem>) -> Mat<R::Elem> {
    a.map(|y| r.mul(x, y))
}

pub fn is_zero_mat<R: Ring>(r: &R, a: &Mat<R::Elem>) -> bool {
    a.data.iter().all(|x| r.is_zero(x))
}

pub fn mat_pow<R: Ring>(r: &R, a: &Mat<R::Elem>, mut e: u64) -> Mat<R::Elem> {
    let mut out = identity(r, a.rows);
    let mut b = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            out = mat_mul(r, &out, &b);
        }
        b = mat_mul(r, &b, &b);
        e >>= 1;
    }
    out
}

/// Reduce a matrix over Z/p^m to a lower precision ring.
pub fn reduce_mat(from: &Zpm, to: &Zpm, a: &Mat<u64>) -> Mat<u64> {
    assert_eq!(from.p(), to.p());
    a.map(|x| from.reduce_to(*x, to.prec()))
}

/// Row echelon data over a field: the reduced matrix and pivot columns.
pub fn rref<R: Ring>(r: &R, a: &Mat<R::Elem>) -> (Mat<R::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&i| r.inv(m.get(i, col)).is_some()) else {
            continue;
        };
        m.swap_rows(row, pr);
        let inv = r.inv(m.get(row, col)).unwrap();
        for j in 0..m.cols {
            let x = r.mul(m.get(row, j), &inv);
            m.set(row, j, x);
        }
        for i in 0..m.rows {
            if i == row || r.is_zero(m.get(i, col)) {
                continue;
            }
            let f = m.get(i, col).clone();
            for j in 0..m.cols {
                let x = r.sub(m.get(i, j), &r.mul(&f, m.get(row, j)));
                m.set(i, j, x);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

pub fn rank<R: Ring>(r: &R, a: &Mat<R::Elem>) -> usize {
    rref(r, a).1.len()
}

/// Basis (as columns) of the right kernel {x : a x = 0} over a field.
pub fn kernel<R: Ring>(r: &R, a: &Mat<R::Elem>) -> Mat<R::Elem> {
    let (m, pivots) = rref(r, a);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    let mut cols = Vec::new();
    for &f in &free {
        let mut v = vec![r.zero(); a.cols];
        v[f] = r.one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = r.neg(m.get(i, f));
        }
        cols.push(v);
    }
    Mat::from_cols(&cols, a.cols)
}

/// Inverse over a field, `None` when singular.
pub fn inverse<R: Ring>(r: &R, a: &Mat<R::Elem>) -> Option<Mat<R::Elem>> {
    assert!(a.is_square());
    let n = a.rows;
    if n == 0 {
        return Some(a.clone());
    }
    let aug = Mat::blocks(&[vec![a.clone(), identity(r, n)]]);
    let (m, pivots) = rref(r, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.submatrix(0, n, n, n))
}

/// Solve a x = b (b given as columns) over a field; `None` if inconsistent.
pub fn solve<R: Ring>(r: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Option<Mat<R::Elem>> {
    let aug = Mat::blocks(&[vec![a.clone(), b.clone()]]);
    let (m, pivots) = rref(r, &aug);
    if pivots.iter().any(|&c| c >= a.cols) {
        return None;
    }
    let mut x = zeros(r, a.cols, b.cols);
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(pc, j, m.get(i, a.cols + j).clone());
        }
    }
    Some(x)
}

/// Determinant over a field by elimination.
pub fn det<R: Ring>(r: &R, a: &Mat<R::Elem>) -> R::Elem {
    assert!(a.is_square());
    let mut m = a.clone();
    let n = m.rows;
    let mut d = r.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !r.is_zero(m.get(i, c))) else {
            return r.zero();
        };
        if pr != c {
            m.swap_rows(pr, c);
            d = r.neg(&d);
        }
        let piv = m.get(c, c).clone();
        d = r.mul(&d, &piv);
        let inv = r.inv(&piv).expect("det over a non-field");
        for i in c + 1..n {
            let f = r.mul(m.get(i, c), &inv);
            if r.is_zero(&f) {
                continue;
            }
            for j in c..n {
                let x = r.sub(m.get(i, j), &r.mul(&f, m.get(c, j)));
                m.set(i, j, x);
            }
        }
    }
    d
}

/// Smith form L·A·R = D over Z/p^m with L, R invertible. Diagonal entries
/// are normalized to p^e; `vals` holds e for each pivot, in order.
#[derive(Clone, Debug)]
pub struct Smith {
    pub l: Mat<u64>,
    pub linv: Mat<u64>,
    pub r: Mat<u64>,
    pub vals: Vec<u32>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.vals.len()
    }

    /// Number of pivots that are units (rank of A mod p).
    pub fn unit_rank(&self) -> usize {
        self.vals.iter().take_while(|&&v| v == 0).count()
    }
}

pub fn smith(z: &Zpm, a: &Mat<u64>) -> Smith {
    let mut m = a.clone();
    let mut l = identity(z, a.rows);
    let mut linv = identity(z, a.rows);
    let mut r = identity(z, a.cols);
    let mut vals = Vec::new();
    let n = a.rows.min(a.cols);
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..m.rows {
            for j in k..m.cols {
                if let Some(v) = z.valuation(m.get(i, j)) {
                    if best.map_or(true, |b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
            if best.map_or(false, |b| b.0 == 0) {
                break;
            }
        }
        let Some((e, pi, pj)) = best else { break };
        m.swap_rows(k, pi);
        l.swap_rows(k, pi);
        linv.swap_cols(k, pi);
        m.swap_cols(k, pj);
        r.swap_cols(k, pj);
        let pe = z.p().pow(e);
        let unit = z.div_p_pow(*m.get(k, k), e);
        let uinv = z.inv(&unit).expect("normalized pivot is a unit");
        for j in 0..m.cols {
            let x = z.mul(m.get(k, j), &uinv);
            m.set(k, j, x);
        }
        for j in 0..l.cols {
            let x = z.mul(l.get(k, j), &uinv);
            l.set(k, j, x);
        }
        for i in 0..linv.rows {
            let x = z.mul(linv.get(i, k), &unit);
            linv.set(i, k, x);
        }
        for i in 0..m.rows {
            if i == k || z.is_zero(m.get(i, k)) {
                continue;
            }
            let t = m.get(i, k) / pe;
            for j in 0..m.cols {
                let x = z.sub(m.get(i, j), &z.mul(&t, m.get(k, j)));
                m.set(i, j, x);
            }
            for j in 0..l.cols {
                let x = z.sub(l.get(i, j), &z.mul(&t, l.get(k, j)));
                l.set(i, j, x);
            }
            for row in 0..linv.rows {
                let x = z.add(linv.get(row, k), &z.mul(&t, linv.get(row, i)));
                linv.set(row, k, x);
            }
        }
        for j in 0..m.cols {
            if j == k || z.is_zero(m.get(k, j)) {
                continue;
            }
            let t = m.get(k, j) / pe;
            for i in 0..m.rows {
                let x = z.sub(m.get(i, j), &z.mul(&t, m.get(i, k)));
                m.set(i, j, x);
            }
            for i in 0..r.rows {
                let x = z.sub(r.get(i, j), &z.mul(&t, r.get(i, k)));
                r.set(i, j, x);
            }
        }
        vals.push(e);
    }
    Smith { l, linv, r, vals }
}

/// Basis (columns) of the saturation of the column span of `a` in (Z/p^m)^n,
/// i.e. the Z_p-lattice (a Q_p) ∩ Z_p^n truncated mod p^m, together with
/// the coordinate map (rows) onto that basis.
pub fn saturated_image(z: &Zpm, a: &Mat<u64>) -> (Mat<u64>, Mat<u64>) {
    let s = smith(z, a);
    let r = s.rank();
    (s.linv.submatrix(0, a.rows, 0, r), s.l.submatrix(0, r, 0, a.rows))
}

/// Free kernel of `a` over Z/p^m: columns spanning {x : a x ≡ 0} modulo the
/// torsion from pivots of positive valuation. Exact when all pivots are units.
pub fn unit_kernel(z: &Zpm, a: &Mat<u64>) -> Mat<u64> {
    let s = smith(z, a);
    let r = s.rank();
    s.r.submatrix(0, a.cols, r, a.cols - r)
}

/// Row-style Hermite normal form over Z: nonzero rows, upper triangular,
/// positive pivots, entries above pivots reduced into [0, pivot).
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out_row = 0;
    for col in 0..n {
        if out_row >= m.len() {
            break;
        }
        loop {
            let mut piv: Option<usize> = None;
            for i in out_row..m.len() {
                if !m[i][col].is_zero() && piv.map_or(true, |p| m[i][col].abs() < m[p][col].abs()) {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            m.swap(out_row, p);
            let mut done = true;
            for i in out_row + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[out_row][col]);
                let pr = m[out_row].clone();
                for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                    *x -= &q * y;
                }
                if !m[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if out_row < m.len() && !m[out_row][col].is_zero() {
            if m[out_row][col].is_negative() {
                for x in m[out_row].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pr = m[out_row].clone();
            for i in 0..out_row {
                let q = m[i][col].div_floor(&pr[col]);
                if !q.is_zero() {
                    for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                        *x -= &q * y;
                    }
                }
            }
            out_row += 1;
        }
    }
    m.truncate(out_row);
    m.retain(|r| r.iter().any(|x| !x.is_zero()));
    m
}

/// Absolute determinant of a square integer matrix via its HNF.
pub fn int_det_abs(rows: &[Vec<BigInt>]) -> BigInt {
    let h = hnf(rows);
    if h.len() < rows.len() {
        return BigInt::zero();
    }
    let mut d = BigInt::one();
    for (i, r) in h.iter().enumerate() {
        d *= &r[i];
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;
    use crate::arith::ring::RatField;

    #[test]
    fn kernel_and_inverse() {
        let f = RatField;
        let a = Mat::from_rows(vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]]);
        let k = kernel(&f, &a);
        assert_eq!(k.cols, 2);
        assert!(is_zero_mat(&f, &mat_mul(&f, &a, &k)));
        let b = Mat::from_rows(vec![vec![rat(2), rat(1)], vec![rat(7), rat(4)]]);
        let bi = inverse(&f, &b).unwrap();
        assert_eq!(mat_mul(&f, &b, &bi), identity(&f, 2));
        assert_eq!(det(&f, &b), rat(1));
    }

    #[test]
    fn smith_reconstructs() {
        let z = Zpm::new(3, 5).unwrap();
        let a = Mat::from_rows(vec![vec![3, 6, 9], vec![1, 2, 4], vec![9, 18, 27]]);
        let s = smith(&z, &a);
        let d = mat_mul(&z, &mat_mul(&z, &s.l, &a), &s.r);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j && i < s.rank() { 3u64.pow(s.vals[i]) } else { 0 };
                assert_eq!(*d.get(i, j), expect);
            }
        }
        assert_eq!(mat_mul(&z, &s.l, &s.linv), identity(&z, 3));
        assert_eq!(s.vals, vec![0, 1]);
    }

    #[test]
    fn hnf_basic() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let h = hnf(&[b(&[2, 0]), b(&[0, 3]), b(&[4, 3])]);
        assert_eq!(h, vec![b(&[2, 0]), b(&[0, 3])]);
        assert_eq!(int_det_abs(&[b(&[2, 1]), b(&[1, 3])]), BigInt::from(5));
    }
}
