use charfluct::algebra::{AlgebraElement, PartialPermutation};
use charfluct::num::rat;
use proptest::prelude::*;

fn cycles_of(support: &[usize], images: &[usize]) -> Vec<Vec<usize>> {
    let image = |x: usize| images[support.iter().position(|&s| s == x).unwrap()];
    let mut seen = vec![false; support.len()];
    let mut out = Vec::new();
    for (i, &start) in support.iter().enumerate() {
        if seen[i] {
            continue;
        }
        let mut cycle = vec![start];
        seen[i] = true;
        let mut x = image(start);
        while x != start {
            seen[support.iter().position(|&s| s == x).unwrap()] = true;
            cycle.push(x);
            x = image(x);
        }
        out.push(cycle);
    }
    out
}

fn partial_permutation(ground: usize) -> impl Strategy<Value = PartialPermutation> {
    proptest::sample::subsequence((1..=ground).collect::<Vec<_>>(), 0..=ground)
        .prop_flat_map(|support| (Just(support.clone()), Just(support).prop_shuffle()))
        .prop_map(|(support, images)| PartialPermutation::from_cycles(support.clone(), &cycles_of(&support, &images)).unwrap())
}

fn element(ground: usize) -> impl Strategy<Value = AlgebraElement> {
    proptest::collection::vec((partial_permutation(ground), -3i64..=3), 0..4).prop_map(|terms| {
        let mut x = AlgebraElement::zero();
        for (p, c) in terms {
            x.add_term(p, rat(c));
        }
        x
    })
}

proptest! {
    #[test]
    fn products_are_associative(a in element(5), b in element(5), c in element(5)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.disjoint_mul(&b).disjoint_mul(&c), a.disjoint_mul(&b.disjoint_mul(&c)));
    }

    #[test]
    fn composition_never_vanishes(a in partial_permutation(6), b in partial_permutation(6)) {
        let c = a.compose(&b);
        let mut support = a.support();
        support.extend(b.support());
        support.sort_unstable();
        support.dedup();
        prop_assert_eq!(c.support(), support);
        let product = AlgebraElement::from_term(a.clone(), rat(1)).mul(&AlgebraElement::from_term(b.clone(), rat(1)));
        prop_assert!(!product.is_zero());
    }

    #[test]
    fn disjoint_product_vanishes_on_overlap(a in partial_permutation(6), b in partial_permutation(6)) {
        let product = AlgebraElement::from_term(a.clone(), rat(1)).disjoint_mul(&AlgebraElement::from_term(b.clone(), rat(1)));
        let overlap = a.support().iter().any(|x| b.support().contains(x));
        prop_assert_eq!(product.is_zero(), overlap);
        if !overlap {
            prop_assert_eq!(product, AlgebraElement::from_term(a.compose(&b), rat(1)));
        }
    }

    #[test]
    fn canonical_json_round_trips(a in element(6)) {
        let json = a.to_canonical_json();
        prop_assert_eq!(AlgebraElement::from_canonical_json(&json).unwrap(), a);
    }
}
