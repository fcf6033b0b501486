use charfluct::conjugacy::{explicit_cycle_type, is_degenerate, on_consecutive_ranges, CycleTypeIndex, SigmaCombination};
use charfluct::cumulants::{conditional_cumulant, cumulants_to_moment, moments_to_cumulants, natural_cumulant, Scalars};
use charfluct::diagnostics::expectation_fn;
use charfluct::models::RepresentationModel;
use charfluct::num::{frac, rat, Rational};
use charfluct::partition::{enumerate_partitions, SetPartition};
use proptest::prelude::*;

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |m| (0..n).filter(|i| m & (1 << i) != 0).collect())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(a, b)| frac(a, b))
}

fn combination() -> impl Strategy<Value = SigmaCombination> {
    let types = ["1", "2", "3", "1+1", "2+1"];
    proptest::collection::vec((proptest::sample::select(types.to_vec()), -3i64..=3), 1..3).prop_map(|terms| {
        let mut x = SigmaCombination::zero();
        for (k, c) in terms {
            x.add_term(k.parse().unwrap(), rat(c));
        }
        x
    })
}

proptest! {
    #[test]
    fn moment_cumulant_round_trip(n in 1usize..=6, values in proptest::collection::vec(small_rational(), 64)) {
        let mask = |s: &[usize]| s.iter().fold(0usize, |m, &i| m | (1 << i));
        let table = moments_to_cumulants(n, |s| values[mask(s)].clone(), &Scalars).unwrap();
        for s in subsets(n) {
            prop_assert_eq!(cumulants_to_moment(&table, &s, &Scalars).unwrap(), values[mask(&s)].clone());
        }
    }

    #[test]
    fn natural_cumulants_are_symmetric_and_multilinear(
        x in combination(), y in combination(), z in combination(), a in -3i64..=3, b in -3i64..=3,
    ) {
        let model = RepresentationModel::tensor_fixed(2).unwrap();
        let e = expectation_fn(&model, 6);
        let k = |args: &[SigmaCombination]| natural_cumulant(args, &e).unwrap();
        let xyz = k(&[x.clone(), y.clone(), z.clone()]);
        prop_assert_eq!(&xyz, &k(&[z.clone(), x.clone(), y.clone()]));
        prop_assert_eq!(&xyz, &k(&[y.clone(), z.clone(), x.clone()]));
        let mixed = x.scale(&rat(a)).add(&y.scale(&rat(b)));
        prop_assert_eq!(k(&[mixed, z.clone()]), rat(a) * k(&[x, z.clone()]) + rat(b) * k(&[y, z]));
    }
}

#[test]
fn conditional_cumulants_lose_two_degrees_per_factor() {
    let mut checked = 0;
    for total in 2..=8usize {
        for first in 1..total {
            let lists: Vec<Vec<SetPartition>> = if total - first >= 2 {
                // three factors as well
                (1..total - first)
                    .flat_map(|second| {
                        let third = total - first - second;
                        triples(first, second, third)
                    })
                    .chain(pairs(first, total - first))
                    .collect()
            } else {
                pairs(first, total - first)
            };
            for list in lists {
                if list.iter().any(is_degenerate) {
                    continue;
                }
                let bound: usize = list.iter().map(|p| explicit_cycle_type(p).unwrap().degree()).sum::<usize>() + 2 - 2 * list.len();
                let k = conditional_cumulant(&list).unwrap();
                assert!(k.degree().is_none_or(|d| d <= bound), "{list:?}: degree {:?} > {bound}", k.degree());
                checked += 1;
            }
        }
    }
    assert!(checked > 150, "{checked}");
}

fn pairs(a: usize, b: usize) -> Vec<Vec<SetPartition>> {
    let (pa, pb) = (enumerate_partitions(a).unwrap(), enumerate_partitions(b).unwrap());
    pa.iter().flat_map(|x| pb.iter().map(move |y| on_consecutive_ranges(&[x.clone(), y.clone()]))).collect()
}

fn triples(a: usize, b: usize, c: usize) -> Vec<Vec<SetPartition>> {
    let pc = enumerate_partitions(c).unwrap();
    pairs(a, b)
        .into_iter()
        .flat_map(|l| pc.iter().map(move |z| on_consecutive_ranges(&[l[0].clone(), l[1].clone(), z.clone()])))
        .collect()
}

#[test]
fn conditional_cumulant_of_cycle_classes_matches_worked_examples() {
    use charfluct::cumulants::conditional_cumulant_classes;
    let k = |a: &str, b: &str| conditional_cumulant_classes(&[a.parse().unwrap(), b.parse().unwrap()]).unwrap();
    assert_eq!(k("1", "1+1"), SigmaCombination::basis(CycleTypeIndex::ones(2)).scale(&rat(2)));
    assert_eq!(k("1", "1"), SigmaCombination::basis(CycleTypeIndex::ones(1)));
}
