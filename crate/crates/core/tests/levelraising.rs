mod common;

use common::*;
use quatforms::arith::linalg::{det, is_zero_mat};
use quatforms::arith::ring::RatField;
use quatforms::autoforms::space::{build_space_padic, build_space_rational, ClassicalWeight, LevelSpec};
use quatforms::levelraising::oldnew::{dual_blocks, gram_adjoint_residual};
use quatforms::levelraising::{build_oldnew, compose_block, expected_block, Valuation};

#[test]
fn block_identity_weight_2() {
    for q in [5u64, 7] {
        let (cu, cv) = (classes(q, 3), classes(q, 39));
        let u = build_space_rational(LevelSpec::new(q, 3, 11, 0).unwrap(), &cu).unwrap();
        let v = build_space_rational(LevelSpec::new(q, 39, 11, 0).unwrap(), &cv).unwrap();
        let d = build_oldnew(u, v, 13).unwrap();
        assert_eq!(compose_block(&d), expected_block(&d).unwrap(), "q={q}");
        let (got, want) = dual_blocks(&d).unwrap();
        assert_eq!(got, want);
        assert!(is_zero_mat(&RatField, &gram_adjoint_residual(&d).unwrap()));
        let ii = quatforms::arith::linalg::mat_mul(&RatField, &d.idag_matrix(), &d.i_matrix());
        eprintln!("q={q} det(i†i) = {} dim V = {}", det(&RatField, &ii), d.v.dim);
    }
}

#[test]
fn block_identity_weight_4() {
    let (cu, cv) = (classes(5, 3), classes(5, 39));
    let k = ClassicalWeight::new(4).unwrap();
    let u = build_space_padic(LevelSpec::new(5, 3, 7, 0).unwrap(), k, 4, &cu).unwrap();
    let v = build_space_padic(LevelSpec::new(5, 39, 7, 0).unwrap(), k, 4, &cv).unwrap();
    let d = build_oldnew(u, v, 13).unwrap();
    assert_eq!(compose_block(&d), expected_block(&d).unwrap());
    let (got, want) = dual_blocks(&d).unwrap();
    assert_eq!(got, want);
    assert!(is_zero_mat(d.ring(), &gram_adjoint_residual(&d).unwrap()));
}

#[test]
fn hida_scans() {
    use quatforms::levelraising::{hida_slice_scan, ScanConfig};
    for (q, ws) in [(5u64, vec![2u32, 4, 10]), (7, vec![2, 4, 6, 8, 10])] {
        let cs = classes(q, 3);
        let cfg = ScanConfig { q, level: 3, p: 3, ell: 13, weights: ws, prec: 8, branch_primes: vec![2, 7, 11] };
        let rep = hida_slice_scan(&cfg, &cs).unwrap();
        eprintln!("{}", serde_json::to_string(&rep).unwrap());
        if q == 5 {
            let vals: Vec<_> = [2, 4, 10].iter().map(|&k| rep.valuation(k)).collect();
            assert_eq!(vals, vec![Some(Valuation::Exact(1)), Some(Valuation::Exact(2)), Some(Valuation::Exact(3))]);
            assert_eq!(rep.rows[0].t_ell.as_deref(), Some(ap_by_counting(E15, 13).to_string().as_str()));
            // The weight-4 member is the ordinary stabilization of the level-5 newform.
            let a13: i64 = rep.rows[1].t_ell.as_ref().unwrap().parse().unwrap();
            assert_eq!((a13 - level5_weight4(13)[13]).rem_euclid(3i64.pow(8)), 0);
        } else {
            assert!(rep.rows.iter().all(|r| r.valuations == vec![Valuation::Exact(1)]));
        }
    }
}

#[test]
fn witness_at_195() {
    use quatforms::autoforms::HeckeLabel;
    use quatforms::levelraising::witness::test_primes;
    use quatforms::levelraising::{ell_new_subspace, witness_search};
    let (cu, cv) = (classes(5, 3), classes(5, 39));
    let u = build_space_rational(LevelSpec::from_level(5, 3, 3).unwrap(), &cu).unwrap();
    let v = build_space_rational(LevelSpec::from_level(5, 39, 3).unwrap(), &cv).unwrap();
    let d = build_oldnew(u, v, 13).unwrap();
    assert_eq!(compose_block(&d), expected_block(&d).unwrap());
    let n = ell_new_subspace(&d);
    eprintln!("dim V {} dim new {}", d.v.dim, n.cols);
    let mut old: Vec<(HeckeLabel, quatforms::arith::rat::Rat)> =
        test_primes(&d, 50).iter().map(|&p| (HeckeLabel::T(p), r(ap_by_counting(E15, p as i64)))).collect();
    old.push((HeckeLabel::T(13), r(ap_by_counting(E15, 13))));
    old.push((HeckeLabel::S(13), r(1)));
    let w = witness_search(&d, &old, 3, 1, 50).unwrap();
    eprintln!("{}", serde_json::to_string(&w).unwrap());
    assert!(w.is_some());
}

mod eisenstein {
    use super::common::*;
    use quatforms::arith::rat::{primes_up_to, Rat};
    use quatforms::levelraising::{very_eisenstein_flag, EisensteinConfig, ModSystem, Verdict};

    fn sys(t: impl Fn(u64) -> Rat, s: impl Fn(u64) -> Rat) -> ModSystem {
        let ps: Vec<u64> = primes_up_to(50).into_iter().filter(|&v| 195 % v != 0).collect();
        let tv: Vec<_> = ps.iter().map(|&v| (v, t(v))).collect();
        let sv: Vec<_> = ps.iter().map(|&v| (v, s(v))).collect();
        ModSystem::from_rational(3, 4, &tv, &sv).unwrap()
    }

    fn cfg() -> EisensteinConfig {
        EisensteinConfig { excluded: vec![195], ..Default::default() }
    }

    #[test]
    fn constants_are_flagged_with_trivial_character() {
        let f = very_eisenstein_flag(&sys(|v| r(v as i64 + 1), |_| r(1)), &cfg());
        assert_eq!(f.verdict, Verdict::VeryEisenstein);
        let w = f.witness.unwrap();
        assert_eq!((w.modulus, w.twist), (1, 0));
    }

    #[test]
    fn inverse_cyclotomic_system_is_flagged() {
        let f = very_eisenstein_flag(&sys(|v| r(1) + r(1) / r(v as i64), |v| r(1) / r((v * v) as i64)), &cfg());
        assert_eq!(f.verdict, Verdict::VeryEisenstein);
        assert_eq!(f.witness.unwrap().twist, -1);
    }

    #[test]
    fn quadratic_twist_is_found() {
        let chi = |v: u64| if v % 4 == 1 { 1 } else { -1 };
        let f = very_eisenstein_flag(&sys(|v| r(chi(v) * (v as i64 + 1)), |_| r(1)), &cfg());
        assert_eq!(f.verdict, Verdict::VeryEisenstein);
        assert_eq!(f.witness.unwrap().modulus, 4);
    }

    #[test]
    fn level_15_cusp_form_is_not_flagged() {
        let f = very_eisenstein_flag(&sys(|v| r(ap_by_counting(E15, v as i64)), |_| r(1)), &cfg());
        assert_eq!(f.verdict, Verdict::Not);
    }

    #[test]
    fn too_few_primes_is_inconclusive() {
        let s = ModSystem { p: 3, m: 2, t: vec![(2, 3), (7, 8)], s: vec![] };
        assert_eq!(very_eisenstein_flag(&s, &cfg()).verdict, Verdict::Inconclusive);
    }
}
