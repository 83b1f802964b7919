use std::collections::BTreeMap;

use jumploci_core::jump_loci::{AffineLocus, LinearSubspace};
use jumploci_core::tcone::{
    classical_tcone, exp_tcone_hypersurface, exp_tcone_tori, tangent_cone_formula_check, z_names, TorusLocus,
    TranslatedTorus, Verdict, DEFAULT_MAX_PARTITION_SUPPORT,
};
use jumploci_symbolic::{Ideal, LaurentPoly, MultiPoly, Rational};

fn q(v: i64) -> Rational {
    Rational::from_int(v)
}

fn laurent(s: &str, n: usize) -> LaurentPoly {
    let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    LaurentPoly::parse(s, &names).unwrap()
}

/// z ∈ τ₁(V(f)) iff Σ c e^{λ⟨m,z⟩} vanishes identically: group terms by ⟨m,z⟩.
fn in_exp_cone(f: &LaurentPoly, z: &[i64]) -> bool {
    let mut groups: BTreeMap<i64, Rational> = BTreeMap::new();
    for (m, c) in f.terms() {
        let k: i64 = m.iter().zip(z).map(|(a, b)| *a as i64 * b).sum();
        let e = groups.entry(k).or_insert_with(Rational::zero);
        *e = &*e + c;
    }
    groups.values().all(|c| c.is_zero())
}

fn grid(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p| (-r..=r).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

#[test]
fn two_lines_inside_a_hyperplane() {
    let f = laurent("t2 - t1*t3 + t1 - t3", 3);
    let tau = exp_tcone_hypersurface(&f, DEFAULT_MAX_PARTITION_SUPPORT).unwrap();
    let expected = vec![
        LinearSubspace::from_i64(3, &[&[0, 1, 0], &[0, 0, 1]]),
        LinearSubspace::from_i64(3, &[&[1, 0, -1], &[0, 1, -2]]),
    ];
    assert_eq!(tau.len(), 2);
    for e in &expected {
        assert!(tau.contains(e), "{e:?} missing from {tau:?}");
    }
    for z in grid(3, 3) {
        let zq: Vec<Rational> = z.iter().map(|&v| q(v)).collect();
        assert_eq!(tau.iter().any(|s| s.contains_point(&zq)), in_exp_cone(&f, &z), "{z:?}");
    }
    let names = z_names(3);
    let tc = classical_tcone(&[f.clone()], &names).unwrap();
    // oracle: lowest form of f(1 + z)
    let lowest = f.normalized_poly().translate(&[q(1), q(1), q(1)]).lowest_form();
    assert!(tc.pieces()[0].variety_eq(&Ideal::new(names.clone(), vec![lowest])));
    assert!(tc.pieces()[0].variety_eq(&Ideal::new(names.clone(), vec![MultiPoly::parse("z2 - 2*z3", &names).unwrap()])));
    let tau_locus = AffineLocus::from_subspaces(names.clone(), &tau);
    assert!(tau_locus.contained_in(&tc).is_ok());
    assert!(tc.contained_in(&tau_locus).is_err());
}

#[test]
fn hypersurface_not_through_one() {
    assert!(exp_tcone_hypersurface(&laurent("t1 - 2", 1), 12).unwrap().is_empty());
    assert!(classical_tcone(&[laurent("t1 - 2", 1)], &z_names(1)).unwrap().is_empty());
}

#[test]
fn subtorus_cone() {
    let tau = exp_tcone_hypersurface(&laurent("t1*t2 - 1", 2), 12).unwrap();
    assert_eq!(tau, vec![LinearSubspace::from_i64(2, &[&[1, 1]])]);
}

#[test]
fn support_bound_enforced() {
    let terms: Vec<String> = (0..13).map(|k| format!("t1^{k}")).collect();
    let f = laurent(&terms.join(" + "), 1);
    assert!(exp_tcone_hypersurface(&f, 12).is_err());
}

#[test]
fn toy_group_is_not_formal() {
    let v = TorusLocus::new(2, vec![TranslatedTorus::subtorus(2, vec![vec![1, 0]]).unwrap()], vec![]).unwrap();
    let r = AffineLocus::whole(z_names(2));
    let rep = tangent_cone_formula_check(&v, None, &r).unwrap();
    assert_eq!(rep.verdict, Verdict::NonFormal);
    assert_eq!(exp_tcone_tori(&v), vec![LinearSubspace::from_i64(2, &[&[1, 0]])]);
}

#[test]
fn knot_pattern_is_consistent() {
    let sixth = Rational::new(1, 6);
    let v = TorusLocus::new(1, vec![], vec![vec![q(0)], vec![sixth.clone()], vec![-sixth]]).unwrap();
    let r = AffineLocus::new(z_names(1), vec![Ideal::new(z_names(1), vec![MultiPoly::var(1, 0)])]);
    let rep = tangent_cone_formula_check(&v, Some(&r), &r).unwrap();
    assert_eq!(rep.verdict, Verdict::ConsistentWithFormality);
}
