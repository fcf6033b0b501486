use charfluct::algebra::AlgebraElement;
use charfluct::conjugacy::{genus, on_consecutive_ranges, product_expansion, sigma_pi, ExpansionMode};
use charfluct::partition::{enumerate_partitions, SetPartition};
use proptest::prelude::*;

/// Lists of partitions of the given sizes, laid out on consecutive intervals.
fn factor_lists(sizes: &[usize]) -> Vec<Vec<SetPartition>> {
    let mut lists: Vec<Vec<SetPartition>> = vec![Vec::new()];
    for &n in sizes {
        let parts = enumerate_partitions(n).unwrap();
        lists = lists.into_iter().flat_map(|l| parts.iter().map(move |p| [l.clone(), vec![p.clone()]].concat())).collect();
    }
    lists.into_iter().map(|l| on_consecutive_ranges(&l)).collect()
}

fn size_lists(total: usize, factors: usize) -> Vec<Vec<usize>> {
    if factors == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (1..=total).flat_map(|a| size_lists(total - a, factors - 1).into_iter().map(move |rest| [vec![a], rest].concat())).collect()
}

fn expansion_sum(sigmas: &[SetPartition], q: usize) -> AlgebraElement {
    sigmas.iter().fold(AlgebraElement::zero(), |acc, s| acc.add(&sigma_pi(s, q)))
}

fn check_products(list: &[SetPartition], q: usize) {
    let product = list.iter().fold(AlgebraElement::one(), |acc, p| acc.mul(&sigma_pi(p, q)));
    let full = product_expansion(list, ExpansionMode::Full).unwrap();
    assert_eq!(product, expansion_sum(&full, q), "{list:?} at q = {q}");
    let disjoint = list.iter().fold(AlgebraElement::one(), |acc, p| acc.disjoint_mul(&sigma_pi(p, q)));
    let single = product_expansion(list, ExpansionMode::Disjoint).unwrap();
    assert_eq!(single.len(), 1);
    assert_eq!(disjoint, sigma_pi(&single[0], q), "{list:?} at q = {q}");
}

#[test]
fn genus_matches_degree_for_eight_points() {
    for n in 1..=8 {
        for pi in enumerate_partitions(n).unwrap().iter() {
            genus(pi).unwrap_or_else(|e| panic!("{pi}: {e}"));
        }
    }
}

#[test]
fn product_expansion_matches_brute_force_small() {
    for total in 2..=5 {
        for factors in 2..=3 {
            for sizes in size_lists(total, factors) {
                for list in factor_lists(&sizes) {
                    for q in 1..=total + 1 {
                        check_products(&list, q);
                    }
                }
            }
        }
    }
}

#[test]
fn conditional_expansion_raises_genus() {
    let mut checked = 0;
    for total in 2..=8 {
        for factors in 2..=3 {
            for sizes in size_lists(total, factors) {
                for list in factor_lists(&sizes) {
                    let bound: usize = list.iter().map(|p| genus(p).unwrap()).sum::<usize>() + factors - 1;
                    for sigma in product_expansion(&list, ExpansionMode::ConditionalCumulant).unwrap() {
                        let g = genus(&sigma).unwrap();
                        assert!(g >= bound, "{list:?}: {sigma} has genus {g} < {bound}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 3000, "{checked}");
}

#[test]
fn overlapping_ranges_are_rejected() {
    let a: SetPartition = "{1,2}".parse().unwrap();
    let b: SetPartition = "{2,3}".parse().unwrap();
    assert!(product_expansion(&[a.clone(), b], ExpansionMode::Full).is_err());
    let gap: SetPartition = "{4}".parse().unwrap();
    assert!(product_expansion(&[a, gap], ExpansionMode::Full).is_err());
}

fn random_list() -> impl Strategy<Value = Vec<SetPartition>> {
    (3usize..=8)
        .prop_flat_map(|total| (1..total).prop_map(move |a| vec![a, total - a]))
        .prop_flat_map(|sizes| {
            let choices: Vec<_> = sizes.iter().map(|&n| proptest::sample::select(enumerate_partitions(n).unwrap().to_vec())).collect();
            choices
        })
        .prop_map(|list| on_consecutive_ranges(&list))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]
    #[test]
    fn product_expansion_matches_brute_force_sampled(list in random_list()) {
        let total: usize = list.iter().map(SetPartition::size).sum();
        check_products(&list, total.min(8));
    }
}
