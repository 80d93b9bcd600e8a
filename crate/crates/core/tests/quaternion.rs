use quatforms::arith::rat::rat;
use quatforms::quaternion::order::standard_eichler;
use quatforms::quaternion::{build_algebra, left_ideal_classes, mass};

fn classes(q: u64, m: u64) -> quatforms::quaternion::ClassSet {
    let alg = build_algebra(q).unwrap();
    let (max, ord) = standard_eichler(&alg, m).unwrap();
    left_ideal_classes(&alg, &max, &ord, 50).unwrap()
}

#[test]
fn hurwitz_class_set() {
    let cs = classes(2, 1);
    assert_eq!(cs.h(), 1);
    assert_eq!(cs.unit_orders(), vec![24]);
    assert!(cs.mass_ok());
}

#[test]
fn level_15_and_21_have_two_classes() {
    for q in [5, 7] {
        let cs = classes(q, 3);
        assert_eq!(cs.h(), 2, "q={q}");
        assert!(cs.mass_ok());
    }
    let cs = classes(5, 3);
    let mut w = cs.unit_orders();
    w.sort();
    assert_eq!(w, vec![2, 6]);
}

#[test]
fn level_195_mass() {
    let cs = classes(5, 39);
    assert_eq!(cs.mass_sum(), mass(5, 39));
    assert_eq!(mass(5, 39), rat(56) / rat(3));
    eprintln!("h(5,39) = {} units {:?}", cs.h(), cs.unit_orders());
}
