//! Dense univariate polynomials and division-free characteristic polynomials.

use super::linalg::Mat;
use super::ring::Ring;

/// Coefficients in ascending degree; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly<E> {
    pub coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> UniPoly<E> {
    pub fn new<R: Ring<Elem = E>>(r: &R, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().map_or(false, |c| r.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn one<R: Ring<Elem = E>>(r: &R) -> Self {
        UniPoly { coeffs: vec![r.one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff<R: Ring<Elem = E>>(&self, r: &R, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| r.zero())
    }

    pub fn mul<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly { coeffs: vec![] };
        }
        let mut c = vec![r.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = r.add(&c[i + j], &r.mul(a, b));
            }
        }
        Self::new(r, c)
    }

    pub fn add<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(r, (0..n).map(|i| r.add(&self.coeff(r, i), &o.coeff(r, i))).collect())
    }

    pub fn sub<R: Ring<Elem = E>>(&self, r: &R, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(r, (0..n).map(|i| r.sub(&self.coeff(r, i), &o.coeff(r, i))).collect())
    }

    pub fn eval<R: Ring<Elem = E>>(&self, r: &R, x: &E) -> E {
        let mut acc = r.zero();
        for c in self.coeffs.iter().rev() {
            acc = r.add(&r.mul(&acc, x), c);
        }
        acc
    }

    /// x^n f(1/x) for n = len - 1 (reverses the coefficient list).
    pub fn reversed<R: Ring<Elem = E>>(&self, r: &R, n: usize) -> Self {
        let mut c: Vec<E> = (0..=n).map(|i| self.coeff(r, i)).collect();
        c.reverse();
        Self::new(r, c)
    }

    pub fn map<R2: Ring>(&self, r2: &R2, f: impl Fn(&E) -> R2::Elem) -> UniPoly<R2::Elem> {
        UniPoly::new(r2, self.coeffs.iter().map(f).collect())
    }

    /// Truncate to terms of degree < n.
    pub fn truncate<R: Ring<Elem = E>>(&self, r: &R, n: usize) -> Self {
        Self::new(r, self.coeffs.iter().take(n).cloned().collect())
    }
}

/// det(X·I − M) by Berkowitz's algorithm, which uses only ring operations.
pub fn char_poly<R: Ring>(r: &R, m: &Mat<R::Elem>) -> UniPoly<R::Elem> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows;
    // descending coefficients of the running characteristic polynomial
    let mut p: Vec<R::Elem> = vec![r.one()];
    for k in 1..=n {
        let a = m.get(k - 1, k - 1).clone();
        let mut col = vec![r.one(), r.neg(&a)];
        let mut v: Vec<R::Elem> = (0..k - 1).map(|i| m.get(i, k - 1).clone()).collect();
        for _ in 0..k.saturating_sub(1) {
            let mut s = r.zero();
            for (j, x) in v.iter().enumerate() {
                s = r.add(&s, &r.mul(m.get(k - 1, j), x));
            }
            col.push(r.neg(&s));
            let nv: Vec<R::Elem> = (0..k - 1)
                .map(|i| {
                    let mut t = r.zero();
                    for (j, x) in v.iter().enumerate() {
                        t = r.add(&t, &r.mul(m.get(i, j), x));
                    }
                    t
                })
                .collect();
            v = nv;
        }
        let mut q = vec![r.zero(); k + 1];
        for (i, qi) in q.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate() {
                if i >= j {
                    *qi = r.add(qi, &r.mul(&col[i - j], pj));
                }
            }
        }
        p = q;
    }
    p.reverse();
    UniPoly::new(r, p)
}

/// det(I − T·M), the reciprocal form used for slopes.
pub fn fredholm_poly<R: Ring>(r: &R, m: &Mat<R::Elem>) -> UniPoly<R::Elem> {
    char_poly(r, m).reversed(r, m.rows)
}
