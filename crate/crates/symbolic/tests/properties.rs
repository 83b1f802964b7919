use jumploci_symbolic::*;
use proptest::prelude::*;

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| Rational::new(a, b))
}

fn poly(n: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -4i64..=4), 0..=max_terms).prop_map(move |ts| {
        MultiPoly::from_terms(n, ts.into_iter().map(|(e, c)| (Monomial::from_exps(&e), Rational::from_int(c))))
    })
}

fn linear(n: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(-2i64..=2, n).prop_map(move |cs| {
        let mut p = MultiPoly::zero(n);
        for (j, c) in cs.into_iter().enumerate() {
            p = &p + &MultiPoly::var(n, j).scale(&Rational::from_int(c));
        }
        p
    })
}

fn linear_matrix(n: usize, rows: usize, cols: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(prop::collection::vec(linear(n), cols), rows)
        .prop_map(move |r| PolyMatrix::from_rows_with_cols(n, r, cols))
}

fn same_ideal(a: &Ideal, b: &Ideal) -> bool {
    a.contains_ideal(b) && b.contains_ideal(a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &(&Rational::one() / &a), Rational::one());
        }
    }

    #[test]
    fn polynomial_ring_axioms(p in poly(3, 4, 2), q in poly(3, 4, 2), r in poly(3, 3, 2)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        let pt = [Rational::new(1, 2), Rational::from_int(-1), Rational::from_int(3)];
        prop_assert_eq!((&p * &q).eval(&pt), &p.eval(&pt) * &q.eval(&pt));
    }

    #[test]
    fn display_parse_round_trip(p in poly(3, 5, 3)) {
        let n = names(3);
        let s = p.display(&n).to_string();
        prop_assert_eq!(MultiPoly::parse(&s, &n).unwrap(), p);
    }

    #[test]
    fn groebner_basis_reduces_generators(gens in prop::collection::vec(poly(3, 3, 2), 1..=3), h in poly(3, 3, 2)) {
        let gb = groebner_basis(3, &gens, MonomialOrder::GrevLex);
        for g in &gens {
            prop_assert!(gb.reduce(g).is_zero());
            prop_assert!(gb.contains(&(g * &h)));
        }
        let r = gb.reduce(&h);
        prop_assert_eq!(gb.reduce(&r), r.clone());
        // h ≡ r modulo the ideal
        prop_assert!(gb.contains(&(&h - &r)));
    }

    #[test]
    fn determinantal_ideals_are_permutation_invariant(
        m in linear_matrix(3, 3, 3),
        k in 1usize..=3,
        rp in Just(vec![0usize, 1, 2]).prop_shuffle(),
        cp in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let n = names(3);
        let a = determinantal_ideal(&m, k, &n).unwrap();
        let b = determinantal_ideal(&m.permute(&rp, &cp), k, &n).unwrap();
        prop_assert!(same_ideal(&a, &b));
        let c = fitting_style_ideal(&m, k, &n).unwrap();
        prop_assert!(same_ideal(&a, &c));
    }

    #[test]
    fn syzygies_are_in_the_kernel(m in linear_matrix(3, 2, 3), cp in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let k = syzygy_basis(&m);
        prop_assert!(m.mul(&k).unwrap().is_zero());
        // a run on permuted columns generates the same module
        let k2 = syzygy_basis(&m.permute(&[0, 1], &cp));
        let mut inv = vec![0usize; 3];
        for (i, &c) in cp.iter().enumerate() {
            inv[c] = i;
        }
        let k2 = k2.permute(&inv, &(0..k2.ncols()).collect::<Vec<_>>());
        prop_assert!(m.mul(&k2).unwrap().is_zero());
        let span = ColumnSpan::new(&k);
        for c in k2.columns() {
            prop_assert!(span.contains(&c));
        }
    }

    #[test]
    fn radical_membership_matches_points(
        p1 in prop::collection::vec(-3i64..=3, 3),
        p2 in prop::collection::vec(-3i64..=3, 3),
        a in poly(3, 3, 1),
        vanish in any::<bool>(),
    ) {
        // V(m_{p1} · m_{p2}) = {p1, p2}, so f ∈ √I iff f(p1) = f(p2) = 0
        let n = names(3);
        let q = |p: &[i64]| -> Vec<Rational> { p.iter().map(|&v| Rational::from_int(v)).collect() };
        let (q1, q2) = (q(&p1), q(&p2));
        let i = Ideal::point(n.clone(), &q1).product(&Ideal::point(n.clone(), &q2));
        let x = MultiPoly::var(3, 0);
        let f = if vanish {
            let c1 = MultiPoly::constant(3, q1[0].clone());
            let c2 = MultiPoly::constant(3, q2[0].clone());
            &a * &(&(&x - &c1) * &(&x - &c2))
        } else {
            a.clone()
        };
        let oracle = f.eval(&q1).is_zero() && f.eval(&q2).is_zero();
        prop_assert_eq!(i.radical_contains(&f), oracle);
    }

    #[test]
    fn tangent_cones_are_homogeneous(gens in prop::collection::vec(poly(3, 3, 3), 1..=2)) {
        // drop constant terms so the origin lies on the variety
        let gens: Vec<MultiPoly> = gens
            .into_iter()
            .map(|g| &g - &MultiPoly::constant(3, g.constant_term()))
            .collect();
        let n = names(3);
        let i = Ideal::new(n.clone(), gens.clone());
        let origin = vec![Rational::zero(); 3];
        let tc = tangent_cone_ideal(&i, &origin).unwrap();
        prop_assert!(tc.is_homogeneous());
        if gens.len() == 1 && !gens[0].is_zero() {
            let want = Ideal::new(n, vec![gens[0].lowest_form()]);
            prop_assert!(same_ideal(&tc, &want));
        }
    }

    #[test]
    fn smith_form_is_a_valid_decomposition(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..=4)) {
        let s = smith_normal_form_i64(&rows);
        let to_q = |m: &[Vec<num_bigint::BigInt>]| {
            QMatrix::from_rows_with_cols(
                m.iter().map(|r| r.iter().map(|v| Rational::from_int(i64::try_from(v).unwrap())).collect()).collect(),
                m.first().map_or(0, |r| r.len()),
            )
        };
        let m = to_q(&rows.iter().map(|r| r.iter().map(|&v| num_bigint::BigInt::from(v)).collect()).collect::<Vec<_>>());
        let prod = to_q(&s.p).mul(&m).unwrap().mul(&to_q(&s.q)).unwrap();
        prop_assert_eq!(prod, to_q(&s.d));
        prop_assert_eq!(to_q(&s.p).determinant().abs(), Rational::one());
        prop_assert_eq!(to_q(&s.q).determinant().abs(), Rational::one());
        let d = s.divisors_i64();
        for w in d.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
    }
}
