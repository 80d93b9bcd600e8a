mod common;

use common::*;
use quatforms::arith::linalg::is_zero_mat;
use quatforms::autoforms::degeneracy::{adjointness_residual, hecke_adjointness_residual, DegLabel};
use quatforms::autoforms::space::{build_space_padic, build_space_rational, ClassicalWeight, LevelSpec};

#[test]
fn adjointness_weight_2() {
    let (cu, cv) = (classes(5, 3), classes(5, 39));
    let u = build_space_rational(LevelSpec::new(5, 3, 7, 0).unwrap(), &cu).unwrap();
    let v = build_space_rational(LevelSpec::new(5, 39, 7, 0).unwrap(), &cv).unwrap();
    assert!(is_zero_mat(u.ring(), &hecke_adjointness_residual(&u, 2).unwrap()));
    for g in [DegLabel::One, DegLabel::EtaEll, DegLabel::Eta(2)] {
        let res = adjointness_residual(&u, &v, 13, g).unwrap();
        assert!(is_zero_mat(u.ring(), &res), "{g:?}");
    }
}

#[test]
fn adjointness_weight_4() {
    let (cu, cv) = (classes(5, 3), classes(5, 39));
    let k = ClassicalWeight::new(4).unwrap();
    let u = build_space_padic(LevelSpec::new(5, 3, 7, 0).unwrap(), k, 3, &cu).unwrap();
    let v = build_space_padic(LevelSpec::new(5, 39, 7, 0).unwrap(), k, 3, &cv).unwrap();
    assert!(is_zero_mat(u.ring(), &hecke_adjointness_residual(&u, 2).unwrap()));
    for g in [DegLabel::One, DegLabel::EtaEll, DegLabel::Eta(2)] {
        let res = adjointness_residual(&u, &v, 13, g).unwrap();
        assert!(is_zero_mat(u.ring(), &res), "{g:?}");
    }
}
