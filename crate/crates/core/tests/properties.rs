use jumploci_core::arrangements::{os_algebra, rank2_flats, Cyclo3, HyperplaneArrangement};
use jumploci_core::cdga::FiniteCdga;
use jumploci_core::fixtures;
use jumploci_core::fox::{fox_derivative, FreeGroupRingElt, Word};
use jumploci_core::jump_loci::{resonance_locus, AffineLocus};
use jumploci_core::tcone::exp_tcone_hypersurface;
use jumploci_symbolic::{Ideal, LaurentPoly, MultiPoly, Rational};
use proptest::prelude::*;

fn word(max_len: usize, ngens: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..ngens, prop::bool::ANY), 0..=max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, inv)| (g, if inv { -1i8 } else { 1 }))))
}

fn zero_differential_algebras() -> Vec<FiniteCdga> {
    vec![
        fixtures::cdga("exterior_1").unwrap(),
        fixtures::cdga("exterior_2").unwrap(),
        os_algebra(&fixtures::arrangement("pencil3").unwrap(), 2).unwrap(),
        fixtures::cdga("heisenberg").unwrap().cohomology_algebra(),
        fixtures::cdga("lambda_ab_dba").unwrap().cohomology_algebra(),
    ]
}

/// `V(I)` embedded in `ℚ^{n+m}` on the first `n` (or last `n`) coordinates,
/// with the other coordinates set to zero.
fn embed(l: &AffineLocus, total: usize, offset: usize, names: &[String]) -> AffineLocus {
    let n = l.nvars();
    let images: Vec<MultiPoly> = (0..n).map(|j| MultiPoly::var(total, offset + j)).collect();
    let zeros: Vec<MultiPoly> = (0..total).filter(|k| *k < offset || *k >= offset + n).map(|k| MultiPoly::var(total, k)).collect();
    let pieces = l
        .pieces()
        .iter()
        .map(|p| {
            let mut g: Vec<MultiPoly> = p.gens().iter().map(|f| f.substitute(&images)).collect();
            g.extend(zeros.iter().cloned());
            Ideal::new(names.to_vec(), g)
        })
        .collect();
    AffineLocus::new(names.to_vec(), pieces)
}

fn laurent(n: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..=2, n), -2i64..=2), 1..=5)
        .prop_map(move |ts| LaurentPoly::from_terms(n, ts.into_iter().map(|(e, c)| (e, Rational::from_int(c)))))
}

fn cyclo() -> impl Strategy<Value = Cyclo3> {
    (-4i64..=4, -4i64..=4).prop_map(|(a, b)| Cyclo3::new(Rational::from_int(a), Rational::from_int(b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// `Σⱼ (∂w/∂xⱼ)(xⱼ − 1) = w − 1`.
    #[test]
    fn fox_fundamental_identity(w in word(12, 3)) {
        let one = FreeGroupRingElt::word(Word::empty());
        let mut lhs = FreeGroupRingElt::zero();
        for j in 0..3 {
            let xj = FreeGroupRingElt::word(Word::from_letters([(j, 1i8)])).sub(&one);
            lhs = lhs.add(&fox_derivative(&w, j).mul(&xj));
        }
        prop_assert_eq!(lhs, FreeGroupRingElt::word(w.clone()).sub(&one));
    }

    #[test]
    fn fox_derivative_of_product(u in word(6, 2), v in word(6, 2)) {
        // ∂(uv) = ∂u + u ∂v
        for j in 0..2 {
            let lhs = fox_derivative(&u.concat(&v), j);
            let rhs = fox_derivative(&u, j).add(&FreeGroupRingElt::word(u.clone()).mul(&fox_derivative(&v, j)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tau1_is_invariant_under_monomial_scaling(f in laurent(3), s in prop::collection::vec(-3i32..=3, 3)) {
        prop_assume!(!f.is_zero());
        let mut a = exp_tcone_hypersurface(&f, 12).unwrap();
        let mut b = exp_tcone_hypersurface(&f.shift(&s), 12).unwrap();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn tau1_scaling_by_constants(f in laurent(2), c in 1i64..=5) {
        prop_assume!(!f.is_zero());
        let mut a = exp_tcone_hypersurface(&f, 12).unwrap();
        let mut b = exp_tcone_hypersurface(&f.scale(&Rational::from_int(-c)), 12).unwrap();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cyclo3_field_axioms(a in cyclo(), b in cyclo(), c in cyclo()) {
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        if !a.is_zero() {
            prop_assert_eq!(a.clone() * a.inverse(), Cyclo3::rational(Rational::one()));
        }
    }

    /// `dim A² = Σ_X (|X| − 1)` over rank-2 flats.
    #[test]
    fn os_algebras_validate(forms in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 3..=6)) {
        let refs: Vec<&[i64]> = forms.iter().map(|f| f.as_slice()).collect();
        let Ok(a) = HyperplaneArrangement::from_i64(3, &refs) else { return Ok(()) };
        let os = os_algebra(&a, 2).unwrap();
        prop_assert!(os.validate().is_empty());
        prop_assert_eq!(os.dim(1), a.len());
        let b2: usize = rank2_flats(&a).iter().map(|f| f.multiplicity() - 1).sum();
        prop_assert_eq!(os.dim(2), b2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// For zero differentials, `R¹(A ⊗ B) = R¹(A) × 0 ∪ 0 × R¹(B)`.
    #[test]
    fn tensor_resonance(i in 0usize..5, j in 0usize..5) {
        let algs = zero_differential_algebras();
        let (a, b) = (&algs[i], &algs[j]);
        let t = a.tensor(b);
        prop_assert!(t.validate().is_empty());
        let r = resonance_locus(&t, 1).unwrap();
        let names = r.names().to_vec();
        let total = names.len();
        prop_assert_eq!(total, a.betti(1) + b.betti(1));
        let ra = resonance_locus(a, 1).unwrap();
        let rb = resonance_locus(b, 1).unwrap();
        let oracle = embed(&ra, total, 0, &names).union(&embed(&rb, total, a.betti(1), &names));
        prop_assert!(r.variety_eq(&oracle));
    }

    /// The universal complex evaluated at a point is the Aomoto complex there.
    #[test]
    fn specialization(k in 0usize..3, coords in prop::collection::vec((-5i64..=5, 1i64..=3), 4)) {
        let a = fixtures::cdga(["lambda_ab_dba", "heisenberg", "conf_e_star_2"][k]).unwrap();
        let n = a.universal_complex().nvars();
        let p: Vec<Rational> = coords.iter().take(n).map(|&(x, y)| Rational::new(x, y)).collect();
        let s = a.universal_complex().specialize(&p).unwrap();
        let direct = a.aomoto_at(&p).unwrap();
        prop_assert_eq!(s.maps, direct.maps);
    }
}
