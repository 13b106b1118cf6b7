//! Independent oracles for closure sizes and chain laws.

use std::collections::BTreeSet;
use std::sync::Arc;

use mvtensor::bridge::{gamma, UnitGroup};
use mvtensor::{chain, spectral_decomposition, tensor, FiniteAlgebra, PointFunction, PointSet, Rational01};
use num_rational::Ratio;

type R = Ratio<u64>;

/// Closure of a single value under truncated sum and complement, by plain fixpoint.
fn naive_chain_closure(step: R) -> BTreeSet<R> {
    let one = R::from_integer(1);
    let mut set: BTreeSet<R> = [R::from_integer(0), one, step].into();
    loop {
        let mut next = set.clone();
        for &x in &set {
            next.insert(one - x);
            for &y in &set {
                next.insert((x + y).min(one));
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

fn single_point_values(alg: &FiniteAlgebra) -> BTreeSet<R> {
    (0..alg.len()).map(|i| R::new(alg.values(i)[0].num(), alg.values(i)[0].den())).collect()
}

#[test]
fn chain_tensor_matches_naive_closure() {
    for n in 1..=6u64 {
        for m in 1..=6u64 {
            let t = tensor(&Arc::new(chain(n)), &Arc::new(chain(m)), 10_000).unwrap();
            assert_eq!(single_point_values(&t.algebra), naive_chain_closure(R::new(1, n * m)), "Ł{n} ⊗ Ł{m}");
        }
    }
}

#[test]
fn products_of_chains_have_product_size() {
    for factors in [vec![1], vec![2, 3], vec![1, 1, 1], vec![4, 2], vec![5, 1, 3]] {
        let expected: usize = factors.iter().map(|&n| n as usize + 1).product();
        let g = gamma(&UnitGroup::new(factors.clone()).unwrap());
        assert_eq!(g.len(), expected, "{factors:?}");
        let mut sorted = factors.clone();
        sorted.sort_unstable();
        assert_eq!(spectral_decomposition(&g).unwrap().orders(), sorted);
    }
}

/// `∏ Ł_{nᵢ} ⊗ ∏ Ł_{mⱼ} ≅ ∏ Ł_{nᵢ mⱼ}`.
#[test]
fn tensor_of_products_distributes() {
    let cases = [(vec![2, 1], vec![3]), (vec![1, 2], vec![2, 1]), (vec![2, 3], vec![1, 1])];
    for (fa, fb) in cases {
        let a = Arc::new(gamma(&UnitGroup::new(fa.clone()).unwrap()));
        let b = Arc::new(gamma(&UnitGroup::new(fb.clone()).unwrap()));
        let t = tensor(&a, &b, 20_000).unwrap();
        let mut expected: Vec<u64> = fa.iter().flat_map(|n| fb.iter().map(move |m| n * m)).collect();
        expected.sort_unstable();
        assert_eq!(spectral_decomposition(&t.algebra).unwrap().orders(), expected, "{fa:?} ⊗ {fb:?}");
        let size: usize = expected.iter().map(|&k| k as usize + 1).product();
        assert_eq!(t.algebra.len(), size);
    }
}

#[test]
fn diagonal_generator_spans_one_chain() {
    let pts = PointSet::new(["a", "b"]).unwrap();
    let half = Rational01::ratio(1, 2);
    let g = PointFunction::new(pts.clone(), vec![half, half]).unwrap();
    let alg = mvtensor::generate_subalgebra(&pts, &[g], mvtensor::Signature::Mv, 100).unwrap();
    assert_eq!(alg.len(), 3);
    assert_eq!(spectral_decomposition(&alg).unwrap().orders(), vec![2]);
}
