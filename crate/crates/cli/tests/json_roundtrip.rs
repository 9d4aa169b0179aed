//! Round-trip tests for the JSON exchange formats.

use diffalg_cli::json::{
    diffpoly_from_json, diffpoly_to_json, finmodule_from_json, finmodule_to_json,
    gmrep_from_json, gmrep_to_json, laurent_from_json, laurent_to_json, mat_from_json,
    mat_to_json, quotelem_from_json, quotelem_to_json, QuotElemJson,
};
use diffalg_core::actions::NilArray;
use diffalg_core::classify::synthesize_gm;
use diffalg_core::matrix::Mat;
use diffalg_core::modules::{construct_ud, three_layer_example};
use diffalg_core::quotient::{quot_equal, QuotElem, QuotRing};
use diffalg_core::rat::rat;
use diffalg_core::var::names;
use diffalg_core::{DiffPoly, RatFunc};

#[test]
fn diffpoly_round_trip() {
    let c = |i, j, o| DiffPoly::var(names::c(i, j, o));
    let p = c(1, 1, 1)
        .mul(&c(2, 2, 0))
        .scale(&RatFunc::t())
        .sub(&c(1, 2, 0).pow(2).scale(&RatFunc::from_rational(rat(3, 7))));
    let j = diffpoly_to_json(&p);
    // serde round trip as well as structural round trip
    let text = serde_json::to_string(&j).unwrap();
    let back = diffpoly_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(p, back);
}

#[test]
fn quotelem_round_trip_and_validation() {
    let c = |i, j, o| DiffPoly::var(names::c(i, j, o));
    let e = QuotElem::new(QuotRing::A, c(1, 1, 0).mul(&c(2, 2, 1))).unwrap();
    let j = quotelem_to_json(&e);
    let back = quotelem_from_json(&j).unwrap();
    assert!(quot_equal(&e, &back));

    let bad = QuotElemJson {
        ring: "C".to_string(),
        rep: vec![],
    };
    assert!(quotelem_from_json(&bad).is_err());
}

#[test]
fn finmodule_round_trip_preserves_structure() {
    for m in [construct_ud(2).unwrap(), three_layer_example()] {
        let j = finmodule_to_json(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back = finmodule_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.dim(), m.dim());
        for i in 0..m.dim() {
            for k in 0..m.dim() {
                assert!(quot_equal(back.entry(i, k), m.entry(i, k)));
            }
        }
    }
}

#[test]
fn gmrep_round_trip() {
    let e12 = Mat::from_fn(3, 3, |i, j| {
        if j == i + 1 {
            RatFunc::from_int(2)
        } else {
            RatFunc::zero()
        }
    });
    let nil = NilArray::new(2, 3, [((1, 0), e12.clone()), ((2, 1), e12.mul(&e12))]).unwrap();
    let rep = synthesize_gm(2, &[(vec![1, -2], nil)]);
    let j = gmrep_to_json(&rep);
    let text = serde_json::to_string(&j).unwrap();
    let back = gmrep_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.n(), rep.n());
    assert_eq!(back.dim(), rep.dim());
    for (ra, rb) in rep.matrix().iter().zip(back.matrix()) {
        for (a, b) in ra.iter().zip(rb) {
            assert_eq!(a, b);
        }
    }
    // a variable outside the declared factors is rejected
    let mut j2 = gmrep_to_json(&rep);
    j2.n = 1;
    assert!(gmrep_from_json(&j2).is_err());
}

#[test]
fn laurent_negative_exponent_rules() {
    let rep = synthesize_gm(1, &[(vec![-1], NilArray::empty(1, 1))]);
    let p = &rep.matrix()[0][0];
    let j = laurent_to_json(p);
    assert_eq!(&laurent_from_json(&j).unwrap(), p);
    // a derivative factor with a negative exponent is invalid
    let mut bad = j.clone();
    if let Some(t) = bad.first_mut() {
        t.mono[0].1 = 1;
        t.mono[0].2 = -1;
        assert!(laurent_from_json(&bad).is_err());
    }
}

#[test]
fn mat_round_trip() {
    let m = Mat::from_fn(2, 3, |i, j| {
        RatFunc::t().pow(i as i64).mul(&RatFunc::from_int(j as i64 + 1))
    });
    let back = mat_from_json(&mat_to_json(&m)).unwrap();
    assert_eq!(back, m);
    assert!(mat_from_json(&vec![]).is_err());
}
