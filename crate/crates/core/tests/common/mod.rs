#![allow(dead_code)]

use quatforms::arith::rat::Rat;
use quatforms::quaternion::order::standard_eichler;
use quatforms::quaternion::{build_algebra, left_ideal_classes, ClassSet};

pub fn classes(q: u64, level: u64) -> ClassSet {
    let alg = build_algebra(q).unwrap();
    let (max, ord) = standard_eichler(&alg, level).unwrap();
    left_ideal_classes(&alg, &max, &ord, 60).unwrap()
}

/// a_p = p + 1 - #E(F_p) for y² + a1xy + a3y = x³ + a2x² + a4x + a6, by
/// counting affine solutions.
pub fn ap_by_counting(c: [i64; 5], p: i64) -> i64 {
    let [a1, a2, a3, a4, a6] = c;
    let md = |x: i64| x.rem_euclid(p);
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            let l = md(y * y + a1 * x * y + a3 * y);
            let r = md(x * x * x + a2 * x * x + a4 * x + a6);
            if l == r {
                n += 1;
            }
        }
    }
    p + 1 - n
}

/// y² + xy + y = x³ + x² − 10x − 10, conductor 15.
pub const E15: [i64; 5] = [1, 1, 1, -10, -10];
/// y² + xy = x³ − 4x − 1, conductor 21.
pub const E21: [i64; 5] = [1, 0, 0, -4, -1];

/// q-expansion coefficients a_1..a_n of Π (1 − q^m)^{e_m·…} products of the
/// form q^s Π_d Π_m (1 − q^{dm})^{r_d}.
pub fn eta_product(parts: &[(usize, i64)], shift: usize, n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    for &(d, r) in parts {
        for m in 1.. {
            if d * m > n {
                break;
            }
            let step = d * m;
            for _ in 0..r.unsigned_abs() {
                if r > 0 {
                    for i in (step..=n).rev() {
                        c[i] -= c[i - step];
                    }
                } else {
                    for i in step..=n {
                        c[i] += c[i - step];
                    }
                }
            }
        }
    }
    let mut out = vec![0i64; n + 1];
    for i in shift..=n {
        out[i] = c[i - shift];
    }
    out
}

/// Coefficients of the weight-4 newform of level 5, (η(z)η(5z))⁴.
pub fn level5_weight4(n: usize) -> Vec<i64> {
    eta_product(&[(1, 4), (5, 4)], 1, n)
}

pub fn r(n: i64) -> Rat {
    Rat::from_integer(n.into())
}
