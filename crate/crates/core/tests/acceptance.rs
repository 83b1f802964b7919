//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use jumploci_core::arrangements::{find_3nets, r1_arrangement, rank2_flats, DEFAULT_MAX_ARRANGEMENT_SIZE};
use jumploci_core::cdga::FiniteCdga;
use jumploci_core::elliptic::conf_e_pipeline;
use jumploci_core::fixtures;
use jumploci_core::fox::{
    alexander_matrix, fox_derivative, linearized_r1_ideal, linear_names, v1_ideal, FreeGroupRingElt, Word,
};
use jumploci_core::jump_loci::{
    compare_model_cohomology, compare_res_supports, resonance_locus, resonance_of_cohomology, support_locus, AffineLocus,
    LinearSubspace, SupportVariant,
};
use jumploci_core::tcone::{
    classical_tcone, exp_tcone_hypersurface, grid_witness, rational_quadric_test, z_names, QuadricVerdict, TorusLocus,
    TranslatedTorus, Verdict, DEFAULT_MAX_PARTITION_SUPPORT,
};
use jumploci_symbolic::{
    determinantal_ideal, tangent_cone_ideal, Ideal, LaurentPoly, Monomial, MultiPoly, PolyMatrix, Rational,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn q(v: i64) -> Rational {
    Rational::from_int(v)
}

fn poly(s: &str, names: &[String]) -> MultiPoly {
    MultiPoly::parse(s, names).expect("valid polynomial")
}

fn locus(names: &[String], pieces: &[&[&str]]) -> AffineLocus {
    AffineLocus::new(
        names.to_vec(),
        pieces.iter().map(|p| Ideal::new(names.to_vec(), p.iter().map(|g| poly(g, names)).collect())).collect(),
    )
}

fn matrix_is(m: &PolyMatrix, want: &[&[&str]], names: &[String]) -> Outcome {
    ensure((m.nrows(), m.ncols()) == (want.len(), want[0].len()), format!("shape {}x{}", m.nrows(), m.ncols()))?;
    for (r, row) in want.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            ensure(m.get(r, c) == &poly(e, names), format!("entry ({r}, {c}) is {}", m.get(r, c).display(names)))?;
        }
    }
    Ok(())
}

fn origin(n: usize) -> LinearSubspace {
    LinearSubspace::homogeneous(n, (0..n).map(|i| (0..n).map(|j| q(i64::from(i == j))).collect()).collect())
}

fn criterion1() -> Outcome {
    let a = fixtures::cdga("lambda_ab_dba").map_err(err)?;
    let x = a.h1_names();
    ensure(resonance_locus(&a, 1).map_err(err)?.variety_eq(&locus(&x, &[&["x"], &["x - 1"]])), "R¹ ≠ {0, 1}")?;
    let v1 = support_locus(&a, 1, SupportVariant::Homological).map_err(err)?;
    ensure(v1.variety_eq(&locus(&x, &[&["x - 1"]])), "Ṽ₁ ≠ {1}")?;
    let v1c = support_locus(&a, 1, SupportVariant::Cohomological).map_err(err)?;
    ensure(v1c.variety_eq(&locus(&x, &[&["x"]])), "Ṽ¹ ≠ {0}")?;
    let p = a.universal_complex().chain().homology_presentation(1).map_err(err)?;
    ensure(p.generators == 1, "H₁ needs one generator")?;
    let rel = Ideal::new(x.clone(), p.relations.row(0).to_vec());
    let want = Ideal::new(x.clone(), vec![poly("x - 1", &x)]);
    ensure(rel.contains_ideal(&want) && want.contains_ideal(&rel), "H₁ ≇ S/(x − 1)")
}

fn criterion2() -> Outcome {
    let a = fixtures::cdga("heisenberg").map_err(err)?;
    let u = a.universal_complex();
    let n = u.names.clone();
    matrix_is(&u.boundary(2), &[&["y", "0", "0"], &["-x", "0", "0"], &["1", "-x", "-y"]], &n).map_err(|e| format!("∂₂: {e}"))?;
    matrix_is(&u.boundary(1), &[&["x", "y", "0"]], &n).map_err(|e| format!("∂₁: {e}"))?;
    ensure(resonance_locus(&a, 1).map_err(err)?.variety_eq(&locus(&n, &[&["x", "y"]])), "R¹(A) ≠ {0}")?;
    ensure(resonance_of_cohomology(&a, 1).map_err(err)?.is_whole(), "R¹(H) ≠ ℂ²")?;
    let inc = compare_model_cohomology(&a, 1).map_err(err)?;
    ensure(inc.strict && inc.point.is_some(), "strict inclusion not reported")
}

fn criterion3() -> Outcome {
    for n in 1..=4 {
        let a = fixtures::cdga(&format!("exterior_{n}")).map_err(err)?;
        let names = a.h1_names();
        let zero = AffineLocus::from_subspaces(names.clone(), &[origin(n)]);
        for i in 1..=n {
            let v = support_locus(&a, i, SupportVariant::Homological).map_err(err)?;
            ensure(v.is_empty(), format!("Ṽ_{i} of exterior_{n} is not empty"))?;
            ensure(resonance_locus(&a, i).map_err(err)?.variety_eq(&zero), format!("R^{i} of exterior_{n} ≠ {{0}}"))?;
        }
    }
    Ok(())
}

fn fixture_cdgas() -> Result<Vec<(String, FiniteCdga)>, String> {
    fixtures::cdga_names().into_iter().map(|n| fixtures::cdga(n).map(|a| (n.to_string(), a)).map_err(err)).collect()
}

fn criterion4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, a) in fixture_cdgas()? {
        let u = a.universal_complex();
        for _ in 0..50 {
            let p: Vec<Rational> = (0..u.nvars()).map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
            let s = u.specialize(&p).map_err(err)?;
            let d = a.aomoto_at(&p).map_err(err)?;
            ensure(s.maps == d.maps, format!("{name}: specialization differs at {p:?}"))?;
        }
    }
    Ok(())
}

fn criterion5() -> Outcome {
    for (name, a) in fixture_cdgas()? {
        let c = compare_res_supports(&a, 1).map_err(err)?;
        ensure(c.equal, format!("{name}: {:?}", c.witness))?;
    }
    Ok(())
}

fn criterion6() -> Outcome {
    let a = fixtures::arrangement("braid").map_err(err)?;
    let triples: Vec<String> = rank2_flats(&a)
        .into_iter()
        .filter(|f| f.multiplicity() >= 3)
        .map(|f| f.hyperplanes.iter().map(|&i| a.labels()[i].as_str()).collect())
        .collect();
    ensure(triples == ["124", "135", "236", "456"], format!("flats {triples:?}"))?;
    let r = r1_arrangement(&a, DEFAULT_MAX_ARRANGEMENT_SIZE).map_err(err)?;
    ensure(r.is_certified(), format!("{:?}", r.certificate))?;
    ensure(r.components.len() == 5 && r.components.iter().all(|c| c.dim == 2), "expected five planes")?;
    let locals = r.components.iter().filter(|c| c.kind == "local").count();
    let nets: Vec<&str> = r.components.iter().filter(|c| c.kind == "essential-net").map(|c| c.label.as_str()).collect();
    ensure(locals == 4 && nets == ["(16|25|34)"], format!("nets {nets:?}"))?;
    ensure(find_3nets(&a, DEFAULT_MAX_ARRANGEMENT_SIZE).map_err(err)?.len() == 1, "extra nets")
}

fn criterion7() -> Outcome {
    let t: Vec<String> = (1..=3).map(|i| format!("t{i}")).collect();
    let f = LaurentPoly::parse("t2 - t1*t3 + t1 - t3", &t).map_err(err)?;
    let tau = exp_tcone_hypersurface(&f, DEFAULT_MAX_PARTITION_SUPPORT).map_err(err)?;
    let lines = [LinearSubspace::from_i64(3, &[&[0, 1, 0], &[0, 0, 1]]), LinearSubspace::from_i64(3, &[&[1, 0, -1], &[0, 1, -2]])];
    ensure(tau.len() == 2 && lines.iter().all(|l| tau.contains(l)), format!("τ₁ = {tau:?}"))?;
    // oracle: in_exp_cone on a grid, grouping terms by ⟨m, z⟩
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                let z = [a, b, c];
                let mut groups: BTreeMap<i64, Rational> = BTreeMap::new();
                for (m, coef) in f.terms() {
                    let k: i64 = m.iter().zip(&z).map(|(x, y)| *x as i64 * y).sum();
                    let e = groups.entry(k).or_insert_with(Rational::zero);
                    *e = &*e + coef;
                }
                let zq: Vec<Rational> = z.iter().map(|&v| q(v)).collect();
                ensure(groups.values().all(|v| v.is_zero()) == tau.iter().any(|s| s.contains_point(&zq)), format!("grid point {z:?}"))?;
            }
        }
    }
    let names = z_names(3);
    let tc = classical_tcone(&[f.clone()], &names).map_err(err)?;
    let lowest = f.normalized_poly().translate(&[q(1), q(1), q(1)]).lowest_form();
    ensure(lowest == poly("z2 - 2*z3", &names) || lowest == poly("-z2 + 2*z3", &names), "lowest form oracle")?;
    ensure(tc.variety_eq(&locus(&names, &[&["z2 - 2*z3"]])), "TC₁ ≠ {z2 = 2 z3}")?;
    let tau_locus = AffineLocus::from_subspaces(names.clone(), &tau);
    ensure(tau_locus.contained_in(&tc).is_ok(), "τ₁ ⊄ TC₁")?;
    ensure(tc.contained_in(&tau_locus).is_err() && grid_witness(&tc, &tau_locus).is_some(), "inclusion not strict")
}

fn criterion8() -> Outcome {
    let toy = fixtures::group("toy").map_err(err)?;
    let tn = toy.torus_names().map_err(err)?;
    ensure(v1_ideal(&toy).map_err(err)?.variety_eq(&Ideal::new(tn.clone(), vec![poly("t1 - 1", &tn)])), "toy: V ≠ {t1 = 1}")?;

    let four = fixtures::group("four_generator").map_err(err)?;
    let z = linear_names(4);
    let quad = poly("z1^2 - 2*z2^2", &z);
    ensure(linearized_r1_ideal(&four).map_err(err)?.variety_eq(&Ideal::new(z.clone(), vec![quad.clone()])), "four-generator quadric")?;
    ensure(rational_quadric_test(&quad, &z).map_err(err)? == QuadricVerdict::IrreducibleOverQ, "quadric splits over ℚ")?;

    let mob = fixtures::group("mobius").map_err(err)?;
    let mn = mob.torus_names().map_err(err)?;
    let translate = TranslatedTorus::new(2, vec![vec![0, 1]], vec![Rational::new(1, 2)]).map_err(err)?;
    let l = TorusLocus::new(2, vec![translate], vec![vec![q(0), q(0)]]).map_err(err)?;
    ensure(l.tori().len() == 1 && l.points().len() == 1 && !l.tori()[0].passes_through_one(), "torus locus shape")?;
    let one = Ideal::new(mn.clone(), vec![poly("t1 - 1", &mn), poly("t2 - 1", &mn)]);
    let oracle = one.product(&l.tori()[0].ideal(&mn));
    ensure(v1_ideal(&mob).map_err(err)?.variety_eq(&oracle), "Möbius: V(E₁) ≠ {1} ∪ {t2 = −1}")?;
    ensure(alexander_matrix(&mob).map_err(err)?.len() == 1, "Möbius Alexander matrix shape")?;

    let tref = fixtures::group("trefoil").map_err(err)?;
    let n = tref.torus_names().map_err(err)?;
    ensure(v1_ideal(&tref).map_err(err)? == Ideal::new(n.clone(), vec![poly("t1^2 - t1 + 1", &n)]), "trefoil ideal")
}

fn criterion9() -> Outcome {
    let v1 = fixtures::tori("conf_e_star_2_v1").map_err(err)?;
    let r = conf_e_pipeline(&v1).map_err(err)?;
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
    ensure(failed.is_empty(), format!("failed checks {failed:?}"))?;
    ensure(r.verdict() == Verdict::NonFormal && r.formality.certificate.is_some(), "verdict is not NON-FORMAL")
}

fn run_prop<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn criterion10() -> Outcome {
    // Fox fundamental identity on 100 random words
    let word = prop::collection::vec((0usize..3, any::<bool>()), 0..=14)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, i)| (g, if i { -1i8 } else { 1 }))));
    run_prop(100, word, |w| {
        let one = FreeGroupRingElt::word(Word::empty());
        let mut lhs = FreeGroupRingElt::zero();
        for j in 0..3 {
            let xj = FreeGroupRingElt::word(Word::from_letters([(j, 1i8)])).sub(&one);
            lhs = lhs.add(&fox_derivative(&w, j).mul(&xj));
        }
        prop_assert_eq!(lhs, FreeGroupRingElt::word(w).sub(&one));
        Ok(())
    })
    .map_err(|e| format!("Fox identity: {e}"))?;

    // determinantal ideals are invariant under row and column permutations
    let names: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    let lin = prop::collection::vec(-2i64..=2, 3);
    let mat = prop::collection::vec(prop::collection::vec(lin, 3), 3);
    let perm = Just(vec![0usize, 1, 2]).prop_shuffle();
    run_prop(40, (mat, 1usize..=3, perm.clone(), perm), |(rows, k, rp, cp)| {
        let entries: Vec<Vec<MultiPoly>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|cs| {
                        cs.iter().enumerate().fold(MultiPoly::zero(3), |p, (j, &c)| &p + &MultiPoly::var(3, j).scale(&q(c)))
                    })
                    .collect()
            })
            .collect();
        let m = PolyMatrix::from_rows_with_cols(3, entries, 3);
        let a = determinantal_ideal(&m, k, &names).unwrap();
        let b = determinantal_ideal(&m.permute(&rp, &cp), k, &names).unwrap();
        prop_assert!(a.contains_ideal(&b) && b.contains_ideal(&a));
        Ok(())
    })
    .map_err(|e| format!("determinantal invariance: {e}"))?;

    // τ₁ is unchanged by multiplying f by a monomial
    let laurent = prop::collection::vec((prop::collection::vec(-2i32..=2, 3), -2i64..=2), 1..=5)
        .prop_map(|ts| LaurentPoly::from_terms(3, ts.into_iter().map(|(e, c)| (e, q(c)))));
    run_prop(60, (laurent, prop::collection::vec(-3i32..=3, 3)), |(f, s)| {
        if f.is_zero() {
            return Ok(());
        }
        let mut a = exp_tcone_hypersurface(&f, 12).unwrap();
        let mut b = exp_tcone_hypersurface(&f.shift(&s), 12).unwrap();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        Ok(())
    })
    .map_err(|e| format!("τ₁ scaling: {e}"))?;

    // tangent cones at the origin are homogeneous
    let term = (prop::collection::vec(0u32..=3, 3), -3i64..=3);
    let p = prop::collection::vec(term, 1..=4)
        .prop_map(|ts| MultiPoly::from_terms(3, ts.into_iter().filter(|(e, _)| e.iter().any(|&x| x > 0)).map(|(e, c)| (Monomial::from_exps(&e), q(c)))));
    run_prop(40, prop::collection::vec(p, 1..=2), |gens| {
        let i = Ideal::new(names.clone(), gens);
        let tc = tangent_cone_ideal(&i, &[q(0), q(0), q(0)]).unwrap();
        prop_assert!(tc.is_homogeneous());
        Ok(())
    })
    .map_err(|e| format!("tangent cone homogeneity: {e}"))?;

    // R¹(A ⊗ B) = R¹(A) × 0 ∪ 0 × R¹(B) for zero differentials
    let algs: Vec<FiniteCdga> = vec![
        fixtures::cdga("exterior_1").map_err(err)?,
        fixtures::cdga("exterior_2").map_err(err)?,
        fixtures::cdga("heisenberg").map_err(err)?.cohomology_algebra(),
        fixtures::cdga("lambda_ab_dba").map_err(err)?.cohomology_algebra(),
        jumploci_core::arrangements::os_algebra(&fixtures::arrangement("pencil3").map_err(err)?, 2).map_err(err)?,
    ];
    for a in &algs {
        for b in &algs {
            let t = a.tensor(b);
            let r = resonance_locus(&t, 1).map_err(err)?;
            let names = r.names().to_vec();
            let total = names.len();
            let embed = |l: &AffineLocus, offset: usize| {
                let k = l.nvars();
                let images: Vec<MultiPoly> = (0..k).map(|j| MultiPoly::var(total, offset + j)).collect();
                let pieces = l
                    .pieces()
                    .iter()
                    .map(|p| {
                        let mut g: Vec<MultiPoly> = p.gens().iter().map(|f| f.substitute(&images)).collect();
                        g.extend((0..total).filter(|&v| v < offset || v >= offset + k).map(|v| MultiPoly::var(total, v)));
                        Ideal::new(names.clone(), g)
                    })
                    .collect();
                AffineLocus::new(names.clone(), pieces)
            };
            let ra = resonance_locus(a, 1).map_err(err)?;
            let rb = resonance_locus(b, 1).map_err(err)?;
            let oracle = embed(&ra, 0).union(&embed(&rb, a.betti(1)));
            ensure(r.variety_eq(&oracle), "tensor resonance")?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, f64, fn() -> Outcome); 10] = [
        ("Λ(a,b), db = ba: R¹, Ṽ₁, Ṽ¹, H₁ presentation", 1.0, criterion1),
        ("Heisenberg: universal complex, R¹(A) = {0}, R¹(H) = ℂ², strict", 1.0, criterion2),
        ("Koszul exactness for exterior algebras, n ≤ 4", 5.0, criterion3),
        ("specialization of the universal complex, 50 points per fixture", 10.0, criterion4),
        ("resonance and support loci agree up to degree 1", 30.0, criterion5),
        ("braid arrangement: four flats, five certified planes", 60.0, criterion6),
        ("τ₁ two lines, TC₁ hyperplane, strict inclusion", 1.0, criterion7),
        ("Fox calculus: toy, four-generator, Möbius, trefoil", 5.0, criterion8),
        ("Conf(E*,2) pipeline: NON-FORMAL", 60.0, criterion9),
        ("property suites", 60.0, criterion10),
    ];
    let mut failures = 0;
    for (i, (desc, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let elapsed = t.elapsed();
        let within = elapsed <= Duration::from_secs_f64(*limit);
        let line = match (&outcome, within) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over the {limit} s limit)"),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !(outcome.is_ok() && within) {
            failures += 1;
        }
        println!("criterion {:>2}: {line} [{:.3} s / {limit} s] {desc}", i + 1, elapsed.as_secs_f64());
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
