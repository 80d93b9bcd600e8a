mod common;

use common::{ap_by_counting, classes, E15};
use quatforms::arith::linalg::{identity, mat_mul, Mat};
use quatforms::arith::newton::newton_polygon_partial;
use quatforms::arith::poly::fredholm_poly;
use quatforms::arith::rat::{rat, Rat};
use quatforms::arith::ring::Zpm;
use quatforms::autoforms::{build_space_padic, hecke_operator, ClassicalWeight, HeckeLabel, LevelSpec};
use quatforms::overconvergent::action::translation_rat;
use quatforms::overconvergent::*;

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn dual_unipotent_pattern() {
    let (p, n, np) = (3u64, 6usize, 1u32);
    let sp = TruncatedSpace::new(WeightChar::classical(3, 2, 2).unwrap(), n, 10).unwrap();
    let g = MonoidElt::new(3, 10, [1, 3, 0, 1]).unwrap();
    let d = dual_action(&sp.dual(), &g).unwrap();
    // ⟨T^i, τ^N·γ⟩ = C(i, N)·(p^N')^(i−N); only i = N survives below degree N+1
    for i in 0..=n {
        let want = if i >= n { binom(i as u64, n as u64) * p.pow(np * (i - n) as u32) } else { 0 };
        assert_eq!(*d.matrix.get(i, n), want);
    }
    // ⟨T^N, τ^l·γ⟩ = C(N, l)·p^(N−l) read along row N
    for l in 0..=n {
        assert_eq!(*d.matrix.get(n, l), binom(n as u64, l as u64) * p.pow((n - l) as u32));
    }
    let id = dual_action(&sp.dual(), &MonoidElt::identity(3, 10)).unwrap();
    assert_eq!(id.matrix, identity(&sp.ring(), n + 1));
}

#[test]
fn pairing_compatibility() {
    let sp = TruncatedSpace::new(WeightChar::classical(5, 6, 6).unwrap(), 9, 6).unwrap();
    let z = sp.ring();
    let g = MonoidElt::new(5, 6, [3, 7, 15, 2]).unwrap();
    let a = monoid_action(&sp, &g).unwrap().matrix;
    let d = dual_action(&sp.dual(), &g).unwrap().matrix;
    let f = Mat::from_rows((0..10).map(|i| vec![(i * i + 3) as u64]).collect());
    let mu = Mat::from_rows((0..10).map(|i| vec![(7 * i + 1) as u64]).collect());
    let lhs = mat_mul(&z, &mat_mul(&z, &a, &f).transpose(), &mu);
    let rhs = mat_mul(&z, &f.transpose(), &mat_mul(&z, &d, &mu));
    assert_eq!(lhs, rhs);
}

#[test]
fn colex_dimensions() {
    for (g, n, want) in [(1usize, 6usize, 1usize), (2, 3, 4), (3, 2, 6)] {
        let r = colex_fixed_points(g, n, 3, 1).unwrap();
        assert_eq!(r.dim(), want, "g={g} N={n}");
        assert!(r.boundary_only);
    }
}

#[test]
fn colex_against_brute_force_rank() {
    // rank of (γ − 1) over Q by fraction-free elimination on the matrix itself
    for (g, n) in [(1usize, 6usize), (2, 3), (3, 2), (2, 5)] {
        let t = translation_rat(g, n, &rat(9));
        let dim = t.rows;
        let mut rows: Vec<Vec<Rat>> = (0..dim)
            .map(|i| (0..dim).map(|j| t.get(j, i) - if i == j { rat(1) } else { rat(0) }).collect())
            .collect();
        let mut rank = 0;
        for c in 0..dim {
            if let Some(piv) = (rank..dim).find(|&r| rows[r][c] != rat(0)) {
                rows.swap(rank, piv);
                for r in 0..dim {
                    if r != rank && rows[r][c] != rat(0) {
                        let f = &rows[r][c] / &rows[rank][c];
                        let pr = rows[rank].clone();
                        for (x, y) in rows[r].iter_mut().zip(pr) {
                            *x -= &f * y;
                        }
                    }
                }
                rank += 1;
            }
        }
        let r = colex_fixed_points(g, n, 3, 2).unwrap();
        assert_eq!(r.dim(), dim - rank);
    }
}

#[test]
fn classical_block_k10() {
    let sp = TruncatedSpace::new(WeightChar::classical(3, 10, 10).unwrap(), 14, 8).unwrap();
    let gens: Vec<_> = [[1, 1, 0, 1], [1, 0, 3, 1], [3, 0, 0, 1], [1, 0, 0, 2], [4, -5, 21, 8]]
        .iter()
        .map(|e| MonoidElt::new(3, 8, *e).unwrap())
        .collect();
    assert_eq!(classical_subspace_check(&sp, &gens).unwrap(), 0);
}

#[test]
fn weight_two_slopes_at_level_15() {
    let cs = classes(5, 3);
    let lv = LevelSpec::new(5, 1, 3, 1).unwrap();
    let w = WeightChar::classical(3, 2, 2).unwrap();
    let a = char_series_slopes(&up_matrix(lv, &w, 10, 10, &cs).unwrap()).unwrap();
    let b_up = up_matrix(lv, &w, 15, 15, &cs).unwrap();
    let b = char_series_slopes(&b_up).unwrap();
    assert!(a.polygon.segments.iter().all(|s| s.slope >= rat(0)));
    let cl = classical_up_matrix(lv, 2, 10, &cs).unwrap();
    let ord = char_series_slopes(&cl).unwrap().polygon.multiplicity_of(&rat(0));
    assert_eq!(ord, 1);
    assert_eq!(a.multiplicity_of(&rat(0)), ord);
    let lim = a.reliable_below.clone().min(b.reliable_below.clone());
    let below = |r: &SlopeReport| r.certified().into_iter().filter(|(s, _)| s < &lim).collect::<Vec<_>>();
    assert_eq!(below(&a), below(&b));
    let a3 = ap_by_counting(E15, 3);
    let want = (a3.rem_euclid(3)) as u64;
    assert!(unit_eigenvalues_mod_p(&b_up).unwrap().contains(&want));
}

#[test]
fn classical_control_weight_4() {
    let cs = classes(5, 3);
    let lv = LevelSpec::new(5, 1, 3, 1).unwrap();
    let (k, m, n) = (4u32, 8u32, 10usize);
    let w = WeightChar::classical(3, k, k).unwrap();
    let oc = up_matrix(lv, &w, n, m, &cs).unwrap();
    let cl = classical_up_matrix(lv, k, m, &cs).unwrap();
    let nk = (k - 1) as usize;
    for bi in 0..oc.h {
        for bj in 0..oc.h {
            for r in 0..=n {
                for c in 0..nk {
                    let got = *oc.matrix.get(bi * (n + 1) + r, bj * (n + 1) + c);
                    let want = if r < nk { *cl.matrix.get(bi * nk + r, bj * nk + c) } else { 0 };
                    assert_eq!(got, want, "block ({bi},{bj}) entry ({r},{c})");
                }
            }
        }
    }
    // the assembled classical operator has the slopes of U_p from autoforms
    let sp = build_space_padic(lv, ClassicalWeight::new(k).unwrap(), m, &cs).unwrap();
    let u = hecke_operator(&sp, HeckeLabel::U).unwrap().matrix;
    let z = Zpm::new(3, m).unwrap();
    let f = fredholm_poly(&z, &u);
    let coeffs: Vec<_> = f.coeffs.iter().map(|&c| quatforms::arith::padic::PadicApprox::from_residue(c, 3, m)).collect();
    let want = newton_polygon_partial(&coeffs).unwrap();
    let got = char_series_slopes(&cl).unwrap();
    let lim = got.reliable_below.clone();
    let fil = |v: Vec<(Rat, usize)>| v.into_iter().filter(|(s, _)| s < &lim).collect::<Vec<_>>();
    assert!(!fil(got.certified()).is_empty());
    assert_eq!(fil(got.certified()), fil(want.certified()));
    // classical slopes below k−1 occur in the truncated series
    let ocs = char_series_slopes(&oc).unwrap();
    for (s, d) in fil(got.certified()) {
        if s < rat(k as i64 - 1) {
            assert!(ocs.polygon.multiplicity_of(&s) >= d, "slope {s}");
        }
    }
}

#[test]
fn up_rows_are_divisible_by_p_to_the_degree() {
    let cs = classes(5, 3);
    let lv = LevelSpec::new(5, 1, 3, 1).unwrap();
    for w in [WeightChar::classical(3, 2, 2).unwrap(), WeightChar::new(3, 0, &rat(5)).unwrap()] {
        let up = up_matrix(lv, &w, 12, 12, &cs).unwrap();
        let md = |r: usize| 3u64.pow((r as u32).min(12));
        for i in 0..up.matrix.rows {
            let r = i % (up.n + 1);
            assert!((0..up.matrix.cols).all(|j| up.matrix.get(i, j) % md(r) == 0), "row {i}");
        }
    }
}
