use jumploci_core::fixtures;
use jumploci_core::fox::{alexander_matrix, linear_names, linearized_alexander_matrix, linearized_r1_ideal, v1_ideal, GroupPresentation};
use jumploci_core::tcone::{rational_quadric_test, QuadricVerdict, TorusLocus, TranslatedTorus};
use jumploci_symbolic::{Ideal, LaurentPoly, MultiPoly, Rational};

fn poly(s: &str, names: &[String]) -> MultiPoly {
    MultiPoly::parse(s, names).unwrap()
}

#[test]
fn toy_group() {
    let p = fixtures::group("toy").unwrap();
    let i = v1_ideal(&p).unwrap();
    let names = p.torus_names().unwrap();
    assert!(i.variety_eq(&Ideal::new(names.clone(), vec![poly("t1 - 1", &names)])));
    assert!(linearized_r1_ideal(&p).unwrap().is_zero_ideal());
}

#[test]
fn mobius_group() {
    let p = fixtures::group("mobius").unwrap();
    let n = p.torus_names().unwrap();
    let a = alexander_matrix(&p).unwrap();
    let want = [LaurentPoly::from_poly(&poly("1 - t2^2", &n)), LaurentPoly::from_poly(&poly("t1*t2 + t1 - t2 - 1", &n))];
    assert_eq!(a, vec![want.to_vec()]);
    // {1} together with the order-2 translate {t2 = -1}
    let locus = TorusLocus::new(
        2,
        vec![TranslatedTorus::new(2, vec![vec![0, 1]], vec![Rational::new(1, 2)]).unwrap()],
        vec![vec![Rational::zero(), Rational::zero()]],
    )
    .unwrap();
    assert_eq!(locus.tori().len(), 1);
    assert_eq!(locus.points().len(), 1);
    let one = Ideal::new(n.clone(), vec![poly("t1 - 1", &n), poly("t2 - 1", &n)]);
    let oracle = one.product(&locus.tori()[0].ideal(&n));
    assert!(v1_ideal(&p).unwrap().variety_eq(&oracle));
}

#[test]
fn trefoil() {
    let p = fixtures::group("trefoil").unwrap();
    let n = p.torus_names().unwrap();
    assert_eq!(v1_ideal(&p).unwrap(), Ideal::new(n.clone(), vec![poly("t1^2 - t1 + 1", &n)]));
}

#[test]
fn torus_and_free_groups() {
    let z2 = fixtures::group("torus").unwrap();
    assert_eq!(z2.betti1().unwrap(), 2);
    let n = z2.torus_names().unwrap();
    let one = Ideal::new(n.clone(), vec![poly("t1 - 1", &n), poly("t2 - 1", &n)]);
    assert!(v1_ideal(&z2).unwrap().variety_eq(&one));
    let f2 = fixtures::group("free").unwrap();
    assert!(v1_ideal(&f2).unwrap().is_zero_ideal());
}

#[test]
fn four_generator_group() {
    let p = fixtures::group("four_generator").unwrap();
    let z = linear_names(4);
    let m = linearized_alexander_matrix(&p).unwrap();
    let want = vec![
        vec!["-z2", "z1", "0", "0"],
        vec!["-z4", "2*z3", "-2*z2", "z1"],
        vec!["z3", "-z4", "-z1", "z2"],
    ];
    for (r, row) in want.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            assert_eq!(m.get(r, c), &poly(e, &z), "entry ({r}, {c})");
        }
    }
    let q = poly("z1^2 - 2*z2^2", &z);
    let r = linearized_r1_ideal(&p).unwrap();
    assert!(r.variety_eq(&Ideal::new(z.clone(), vec![q.clone()])));
    assert_eq!(rational_quadric_test(&q, &z).unwrap(), QuadricVerdict::IrreducibleOverQ);
}

#[test]
fn parse_errors_carry_positions() {
    let e = GroupPresentation::parse("gens: x y; rel: x q").unwrap_err();
    assert!(e.to_string().contains("position"), "{e}");
}
