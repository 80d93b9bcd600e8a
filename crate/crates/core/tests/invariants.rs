mod common;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use common::classes;
use proptest::prelude::*;
use quatforms::arith::linalg::{det, mat_mul, smith};
use quatforms::arith::rat::{is_prime, Rat};
use quatforms::arith::ring::RatField;
use quatforms::autoforms::{build_space_padic, build_space_rational, hecke_operator, pairing_gram, ClassicalWeight, HeckeLabel, LevelSpec};
use quatforms::overconvergent::{classical_subspace_check, colex_fixed_points, dual_action, monoid_action, MonoidElt, TruncatedSpace, WeightChar};
use quatforms::quaternion::ClassSet;

/// (q, Eichler level) pairs the suites run on.
const LEVELS: [(u64, u64); 6] = [(2, 1), (3, 1), (5, 1), (5, 3), (7, 3), (13, 1)];

fn cached(q: u64, n: u64) -> ClassSet {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), ClassSet>>> = OnceLock::new();
    let m = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut g = m.lock().unwrap();
    g.entry((q, n)).or_insert_with(|| classes(q, n)).clone()
}

fn good_primes(bad: u64, avoid: u64) -> Vec<u64> {
    (2..40).filter(|&l| is_prime(l) && bad % l != 0 && l != avoid).collect()
}

#[test]
fn mass_formula() {
    for (q, n) in LEVELS.iter().chain([(5, 39), (11, 1), (2, 3)].iter()) {
        let cs = cached(*q, *n);
        assert!(cs.mass_ok(), "q={q} N={n}: {} classes", cs.h());
    }
}

fn gamma(p: u64, m: u32) -> impl Strategy<Value = MonoidElt> {
    (-50i64..50, -50i64..50, -20i64..20, -50i64..50)
        .prop_filter_map("not in M_1", move |(a, b, c, d)| MonoidElt::new(p, m, [a, b, c * p as i64, d]).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hecke_operators_commute(idx in 0usize..LEVELS.len(), a in 0usize..6, b in 0usize..6) {
        let (q, n) = LEVELS[idx];
        let p = (3..).find(|&l| is_prime(l) && (q * n) % l != 0).unwrap();
        let sp = build_space_rational(LevelSpec::from_level(q, n, p).unwrap(), &cached(q, n)).unwrap();
        let ls = good_primes(q * n, p);
        let t1 = hecke_operator(&sp, HeckeLabel::T(ls[a])).unwrap().matrix;
        let t2 = hecke_operator(&sp, HeckeLabel::T(ls[b])).unwrap().matrix;
        prop_assert_eq!(mat_mul(&RatField, &t1, &t2), mat_mul(&RatField, &t2, &t1));
    }

    #[test]
    fn hecke_operators_commute_weight_4(a in 0usize..4, b in 0usize..4) {
        let cs = cached(5, 3);
        let sp = build_space_padic(LevelSpec::from_level(5, 3, 7).unwrap(), ClassicalWeight::new(4).unwrap(), 3, &cs).unwrap();
        let z = sp.ring().clone();
        let ls = good_primes(15, 7);
        let t1 = hecke_operator(&sp, HeckeLabel::T(ls[a])).unwrap().matrix;
        let t2 = hecke_operator(&sp, HeckeLabel::T(ls[b])).unwrap().matrix;
        prop_assert_eq!(mat_mul(&z, &t1, &t2), mat_mul(&z, &t2, &t1));
    }

    #[test]
    fn pairing_is_nondegenerate(idx in 0usize..LEVELS.len(), k in prop::sample::select(vec![2u32, 4, 6])) {
        let (q, n) = LEVELS[idx];
        let cs = cached(q, n);
        if k == 2 {
            let p = (3..).find(|&l| is_prime(l) && (q * n) % l != 0).unwrap();
            let sp = build_space_rational(LevelSpec::from_level(q, n, p).unwrap(), &cs).unwrap();
            let g = pairing_gram(&sp, &sp.dual_space().unwrap()).unwrap();
            prop_assert_ne!(det(&RatField, &g), Rat::from_integer(0.into()));
        } else {
            let p = (5..).find(|&l| is_prime(l) && (q * n) % l != 0 && cs.unit_orders().iter().all(|&w| w as u64 % l != 0)).unwrap();
            let sp = build_space_padic(LevelSpec::from_level(q, n, p).unwrap(), ClassicalWeight::new(k).unwrap(), 3, &cs).unwrap();
            let g = pairing_gram(&sp, &sp.dual_space().unwrap()).unwrap();
            let z = sp.ring().clone();
            prop_assert_eq!(smith(&z, &g).unit_rank(), sp.dim);
        }
    }

    #[test]
    fn monoid_action_is_a_right_action(
        (p, g1, g2) in prop::sample::select(vec![3u64, 5, 7]).prop_flat_map(|p| (Just(p), gamma(p, 6), gamma(p, 6))),
        i2 in 0u64..3,
        s in -30i64..30,
    ) {
        let w = WeightChar::new(p, 2 * i2, &Rat::from_integer(s.into())).unwrap();
        let sp = TruncatedSpace::new(w, 9, 6).unwrap();
        let z = sp.ring();
        let a1 = monoid_action(&sp, &g1).unwrap();
        let a2 = monoid_action(&sp, &g2).unwrap();
        let a12 = monoid_action(&sp, &g1.mul(&g2)).unwrap();
        let prod = mat_mul(&z, &a2.matrix, &a1.matrix);
        for j in 0..=9 {
            let md = p.pow(a12.prec[j]);
            for r in 0..=9 {
                prop_assert_eq!(prod.get(r, j) % md, a12.matrix.get(r, j) % md);
            }
        }
        let d = dual_action(&sp.dual(), &g1).unwrap();
        prop_assert_eq!(d.matrix, a1.matrix.transpose());
    }

    #[test]
    fn classical_subspace_is_stable(k in 2u32..13, g in gamma(5, 6)) {
        let sp = TruncatedSpace::new(WeightChar::classical(5, k, k).unwrap(), 14, 6).unwrap();
        prop_assert_eq!(classical_subspace_check(&sp, &[g]).unwrap(), 0);
    }

    #[test]
    fn colex_kernel_is_the_boundary(g in 1usize..4, n in 0usize..9, np in 1u32..3) {
        let r = colex_fixed_points(g, n, 3, np).unwrap();
        let want = (0..g as u64 - 1).fold(1u64, |acc, i| acc * (n as u64 + 1 + i) / (i + 1));
        prop_assert_eq!(r.dim() as u64, want);
        prop_assert!(r.boundary_only);
    }
}
