mod common;

use common::p1;
use monozeta::algebra::DenomFactor;
use monozeta::motivic::zeta_motivic;
use monozeta::SemigroupData;

#[test]
fn cleared_numerator_of_4_6_13() {
    let s: SemigroupData = "4,6,13".parse().unwrap();
    let cleared = zeta_motivic(&s).total_global.cleared();
    assert_eq!(cleared.shift, 47);
    assert_eq!(
        cleared.factors,
        vec![DenomFactor::new(2, 1), DenomFactor::new(8, 6), DenomFactor::new(37, 26)]
    );
    assert_eq!(cleared.numerator.div_l_minus_one().unwrap(), p1());
}

#[test]
fn cleared_shape_of_8_12_26_53() {
    let s: SemigroupData = "8,12,26,53".parse().unwrap();
    let cleared = zeta_motivic(&s).total_global.cleared();
    assert_eq!(cleared.shift, 299);
    assert_eq!(
        cleared.factors,
        vec![
            DenomFactor::new(3, 1),
            DenomFactor::new(11, 6),
            DenomFactor::new(50, 26),
            DenomFactor::new(235, 106)
        ]
    );
    let p2 = cleared.numerator.div_l_minus_one().unwrap();
    assert_eq!(p2.degree(), Some(137));
}
