use std::time::Instant;

use jumploci_core::elliptic::*;
use jumploci_core::fixtures;
use jumploci_core::tcone::Verdict;

#[test]
fn conf_pipeline() {
    let t = Instant::now();
    let v1 = fixtures::tori("conf_e_star_2_v1").unwrap();
    let r = conf_e_pipeline(&v1).unwrap();
    println!("{}", serde_json::to_string_pretty(&r).unwrap());
    assert_eq!(r.verdict(), Verdict::NonFormal);
    assert!(r.all_checks_pass(), "{:?}", r.checks);
    println!("pipeline {:?}", t.elapsed());
}

#[test]
fn boolean_is_tensor_power() {
    let m = elliptic_model(&fixtures::elliptic("boolean2").unwrap()).unwrap();
    let e = elliptic_model(&fixtures::elliptic("e_star").unwrap()).unwrap();
    let t = e.tensor(&e);
    assert_eq!(m.dims(), t.dims());
    for i in 0..m.top_degree() {
        assert_eq!(m.differential(i).rank(), t.differential(i).rank());
    }
    assert!(m.validate().is_empty());
}
