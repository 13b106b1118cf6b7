use std::sync::Arc;

use mvtensor::bridge::{gamma, gamma_hom, lambda, GroupMap, UnitGroup};
use mvtensor::terms::{term_function_on_grid, Term};
use mvtensor::{
    chain, check_axioms, commutativity_witness, generate_subalgebra, has_infinitesimal, iso_check,
    spectral_decomposition, tensor, FiniteAlgebra, PointFunction, PointSet, Rational01, Signature,
};
use proptest::prelude::*;

fn rational(max_den: u64) -> impl Strategy<Value = Rational01> {
    (1..=max_den).prop_flat_map(|d| (0..=d).prop_map(move |k| Rational01::ratio(k, d)))
}

/// Small MV algebras generated by one or two random functions on one or two points.
fn small_algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (1usize..=2).prop_flat_map(|w| {
        prop::collection::vec(prop::collection::vec(rational(4), w), 1..=2).prop_map(move |gens| {
            let pts = PointSet::new((0..w).map(|i| format!("q{i}"))).unwrap();
            let gens: Vec<PointFunction> =
                gens.into_iter().map(|v| PointFunction::new(pts.clone(), v).unwrap()).collect();
            generate_subalgebra(&pts, &gens, Signature::Mv, 10_000).unwrap()
        })
    })
}

fn term(k: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::Zero), Just(Term::One), (0..k).prop_map(Term::Var)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::Neg(Box::new(t))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Oplus(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Odot(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Prod(Box::new(a), Box::new(b))),
            (rational(3), inner).prop_map(|(r, t)| Term::Scal(r, Box::new(t))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_algebras_satisfy_the_axioms(alg in small_algebra()) {
        let report = check_axioms(&alg, Signature::Mv);
        prop_assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
        prop_assert!(has_infinitesimal(&alg).is_none());
    }

    #[test]
    fn spectrum_determines_size(alg in small_algebra()) {
        let orders = spectral_decomposition(&alg).unwrap().orders();
        let size: usize = orders.iter().map(|&n| n as usize + 1).product();
        prop_assert_eq!(size, alg.len());
    }

    #[test]
    fn lambda_inverts_gamma(factors in prop::collection::vec(1u64..=5, 1..=3)) {
        let g = UnitGroup::new(factors).unwrap();
        let l = lambda(&gamma(&g)).unwrap();
        prop_assert_eq!(l.group.factor_multiset(), g.factor_multiset());
        prop_assert!(l.iso.is_bijective());
    }

    #[test]
    fn gamma_of_chain_inclusions_composes(a in 1u64..=3, b in 1u64..=3, c in 1u64..=3) {
        let (g1, g2, g3) = (UnitGroup::new(vec![a]).unwrap(), UnitGroup::new(vec![a * b]).unwrap(), UnitGroup::new(vec![a * b * c]).unwrap());
        let h = GroupMap::new(g1.clone(), g2.clone(), vec![g1.generator(0)]).unwrap();
        let k = GroupMap::new(g2, g3, vec![vec![num_rational::Ratio::new(1, (a * b) as i64)]]).unwrap();
        let composite = gamma_hom(&h.then(&k).unwrap()).unwrap();
        prop_assert_eq!(composite, gamma_hom(&h).unwrap().then(&gamma_hom(&k).unwrap()).unwrap());
    }

    #[test]
    fn tensor_commutes(n in 1u64..=4, m in 1u64..=4) {
        let (a, b) = (Arc::new(chain(n)), Arc::new(chain(m)));
        prop_assert!(commutativity_witness(&a, &b, 1000).unwrap().is_bijective());
        let t = tensor(&a, &b, 1000).unwrap();
        prop_assert!(iso_check(&t.algebra, &Arc::new(chain(n * m))).is_some());
    }

    #[test]
    fn grid_tabulation_matches_evaluation(t in term(2), d in 1u64..=4) {
        let tab = term_function_on_grid(&t, 2, d).unwrap();
        let pts = tab.domain().clone();
        for p in 0..pts.len() {
            let x: Vec<Rational01> = pts.coords(p).into_iter().map(|c| Rational01::ratio(c as u64, d)).collect();
            prop_assert_eq!(tab.at(p), t.eval(&x));
        }
    }

    #[test]
    fn printed_terms_parse_back(t in term(3)) {
        let back = mvtensor::terms::parse_term(&t.to_string(), Signature::Fmv, 3).unwrap();
        prop_assert_eq!(back, t);
    }
}
