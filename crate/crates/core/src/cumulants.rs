//! Classical cumulants by partition inversion, and the three cumulant species attached to
//! the group product, the disjoint product and the identity map between them.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::conjugacy::{
    on_consecutive_ranges, partition_for, product_expansion, sigma_pi_combination, CycleTypeIndex, ExpansionMode,
    SigmaCombination,
};
use crate::error::{Error, Result};
use crate::num::{factorial, falling_rat, Rational};
use crate::partition::{enumerate_partitions, SetPartition, UnionFind};

/// Ring operations used by the moment-cumulant inversion.
pub trait CumulantAlgebra<T> {
    fn zero(&self) -> T;
    fn add(&self, a: &T, b: &T) -> T;
    fn mul(&self, a: &T, b: &T) -> T;
    fn scale(&self, a: &T, c: &Rational) -> T;
}

/// Ordinary rational arithmetic.
pub struct Scalars;

impl CumulantAlgebra<Rational> for Scalars {
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn scale(&self, a: &Rational, c: &Rational) -> Rational {
        a * c
    }
}

/// Σ-basis combinations multiplied with the disjoint product.
pub struct DisjointSigma;

impl CumulantAlgebra<SigmaCombination> for DisjointSigma {
    fn zero(&self) -> SigmaCombination {
        SigmaCombination::zero()
    }
    fn add(&self, a: &SigmaCombination, b: &SigmaCombination) -> SigmaCombination {
        a.add(b)
    }
    fn mul(&self, a: &SigmaCombination, b: &SigmaCombination) -> SigmaCombination {
        a.disjoint_mul(b)
    }
    fn scale(&self, a: &SigmaCombination, c: &Rational) -> SigmaCombination {
        a.scale(c)
    }
}

/// Cumulants of every nonempty sub-family of `n` arguments, keyed by index subset.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantTable<T> {
    n: usize,
    values: HashMap<u32, T>,
}

impl<T> CumulantTable<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cumulant of the arguments at the given (0-based) positions, in any order.
    pub fn get(&self, indices: &[usize]) -> &T {
        &self.values[&mask(indices)]
    }

    /// Cumulant of all `n` arguments.
    pub fn full(&self) -> &T {
        &self.values[&((1u32 << self.n) - 1)]
    }
}

fn mask(indices: &[usize]) -> u32 {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

fn members(m: u32) -> Vec<usize> {
    (0..32).filter(|i| m & (1 << i) != 0).collect()
}

/// `(-1)^{b-1} (b-1)!`, the Möbius function of the partition lattice from `π` to the top.
pub fn moebius_weight(blocks: usize) -> Rational {
    let w = Rational::from_integer(factorial(blocks - 1));
    if blocks.is_multiple_of(2) {
        -w
    } else {
        w
    }
}

/// Solves `m(S) = Σ_{π ∈ Π(S)} Π_{B ∈ π} k(B)` for all nonempty subsets `S` of `{0..n-1}`.
///
/// `moment` receives the sorted positions of a subset.
pub fn moments_to_cumulants<T: Clone, A: CumulantAlgebra<T>>(
    n: usize,
    mut moment: impl FnMut(&[usize]) -> T,
    algebra: &A,
) -> Result<CumulantTable<T>> {
    if n == 0 || n > 12 {
        return Err(Error::TooLarge(n));
    }
    let mut moments: HashMap<u32, T> = HashMap::new();
    for m in 1u32..(1 << n) {
        moments.insert(m, moment(&members(m)));
    }
    let mut values = HashMap::new();
    for m in 1u32..(1 << n) {
        let elems = members(m);
        let mut acc = algebra.zero();
        for pi in enumerate_partitions(elems.len())?.iter() {
            let mut term: Option<T> = None;
            for b in pi.blocks() {
                let bm = b.iter().fold(0u32, |acc, &i| acc | (1 << elems[i - 1]));
                term = Some(match term {
                    None => moments[&bm].clone(),
                    Some(t) => algebra.mul(&t, &moments[&bm]),
                });
            }
            acc = algebra.add(&acc, &algebra.scale(&term.unwrap(), &moebius_weight(pi.num_blocks())));
        }
        values.insert(m, acc);
    }
    Ok(CumulantTable { n, values })
}

/// The forward sum `Σ_π Π_B k(B)` over partitions of the given positions.
pub fn cumulants_to_moment<T: Clone, A: CumulantAlgebra<T>>(table: &CumulantTable<T>, indices: &[usize], algebra: &A) -> Result<T> {
    let mut acc = algebra.zero();
    for pi in enumerate_partitions(indices.len())?.iter() {
        let mut term: Option<T> = None;
        for b in pi.blocks() {
            let sub: Vec<usize> = b.iter().map(|&i| indices[i - 1]).collect();
            let k = table.get(&sub);
            term = Some(match term {
                None => k.clone(),
                Some(t) => algebra.mul(&t, k),
            });
        }
        acc = algebra.add(&acc, &term.unwrap());
    }
    Ok(acc)
}

/// Classical cumulant of the given order for a single scalar variable with moments
/// `moments[j] = E X^j` (`moments[0]` is ignored).
pub fn univariate_cumulant(moments: &[Rational], order: usize) -> Result<Rational> {
    let table = moments_to_cumulants(order, |s| moments[s.len()].clone(), &Scalars)?;
    Ok(table.full().clone())
}

/// `E(Σ_k)` for a model at a fixed `q`.
pub type SigmaExpectation<'a> = dyn Fn(&CycleTypeIndex) -> Rational + 'a;

fn evaluate(x: &SigmaCombination, expectation: &SigmaExpectation<'_>) -> Rational {
    x.evaluate(expectation)
}

/// Natural cumulant `k(x_1, ..., x_n)` with moments `E(x_{i_1} ... x_{i_m})` (group product).
pub fn natural_cumulant(args: &[SigmaCombination], expectation: &SigmaExpectation<'_>) -> Result<Rational> {
    let table = moments_to_cumulants(
        args.len(),
        |s| {
            let prod = s.iter().fold(SigmaCombination::one(), |acc, &i| acc.mul(&args[i]));
            evaluate(&prod, expectation)
        },
        &Scalars,
    )?;
    Ok(table.full().clone())
}

/// Disjoint cumulant `k•(x_1, ..., x_n)` with moments `E(x_{i_1} • ... • x_{i_m})`.
pub fn disjoint_cumulant(args: &[SigmaCombination], expectation: &SigmaExpectation<'_>) -> Result<Rational> {
    Ok(disjoint_cumulant_table(args, expectation)?.full().clone())
}

pub fn disjoint_cumulant_table(args: &[SigmaCombination], expectation: &SigmaExpectation<'_>) -> Result<CumulantTable<Rational>> {
    moments_to_cumulants(
        args.len(),
        |s| {
            let prod = s.iter().fold(SigmaCombination::one(), |acc, &i| acc.disjoint_mul(&args[i]));
            evaluate(&prod, expectation)
        },
        &Scalars,
    )
}

/// Conditional cumulant `k^id(Σ_{π_1}, ..., Σ_{π_n})` from the connected part of the product
/// expansion. Factors are relabelled onto consecutive ranges.
pub fn conditional_cumulant(factors: &[SetPartition]) -> Result<SigmaCombination> {
    let laid_out = on_consecutive_ranges(factors);
    let sigmas = product_expansion(&laid_out, ExpansionMode::ConditionalCumulant)?;
    Ok(sigmas.iter().fold(SigmaCombination::zero(), |acc, s| acc.add(&sigma_pi_combination(s))))
}

/// `k^id(Σ_{k_1}, ..., Σ_{k_n})` through [`conditional_cumulant`].
pub fn conditional_cumulant_classes(ks: &[CycleTypeIndex]) -> Result<SigmaCombination> {
    let parts: Vec<SetPartition> = ks.iter().map(|k| partition_for(k, 0)).collect();
    conditional_cumulant(&parts)
}

/// All conditional cumulants of the arguments by inverting the algebra-valued moments
/// `x_{i_1} ... x_{i_m}` (group product) with respect to the disjoint product.
pub fn conditional_cumulants_by_inversion(args: &[SigmaCombination]) -> Result<CumulantTable<SigmaCombination>> {
    moments_to_cumulants(
        args.len(),
        |s| s.iter().fold(SigmaCombination::one(), |acc, &i| acc.mul(&args[i])),
        &DisjointSigma,
    )
}

/// Natural cumulant of all arguments assembled from conditional cumulants and disjoint
/// cumulants: `k(x_1..x_n) = Σ_π k•[k^id(x_i : i ∈ B) : B ∈ π]`.
pub fn brillinger_compose(k_id: &CumulantTable<SigmaCombination>, expectation: &SigmaExpectation<'_>) -> Result<Rational> {
    let n = k_id.n();
    let mut total = Rational::zero();
    for pi in enumerate_partitions(n)?.iter() {
        let args: Vec<SigmaCombination> = pi
            .blocks()
            .iter()
            .map(|b| k_id.get(&b.iter().map(|i| i - 1).collect::<Vec<_>>()).clone())
            .collect();
        total += disjoint_cumulant(&args, expectation)?;
    }
    Ok(total)
}

/// Partitions `π` of `{1..Σ sizes}` whose join with the consecutive intervals of the given
/// sizes is the one-block partition.
pub fn leonov_shiryaev_partitions(block_sizes: &[usize]) -> Result<Vec<SetPartition>> {
    let n: usize = block_sizes.iter().sum();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut interval_of = Vec::with_capacity(n);
    for (j, &s) in block_sizes.iter().enumerate() {
        interval_of.extend(std::iter::repeat_n(j, s));
    }
    let groups = block_sizes.iter().filter(|&&s| s > 0).count();
    Ok(enumerate_partitions(n)?
        .iter()
        .filter(|pi| {
            let mut uf = UnionFind::new(block_sizes.len());
            for b in pi.blocks() {
                for &x in &b[1..] {
                    uf.union(interval_of[b[0] - 1], interval_of[x - 1]);
                }
            }
            uf.components() - (block_sizes.len() - groups) == 1
        })
        .cloned()
        .collect())
}

/// Normalized character of a product of disjoint cycles with the given lengths at fixed `q`.
pub type CycleCharacter<'a> = dyn Fn(&CycleTypeIndex) -> Rational + 'a;

/// Disjoint cumulant `k•(Σ_{l_1}, ..., Σ_{l_n})` through the double sum over pairs of
/// partitions whose join is the one-block partition: natural cumulants of fixed disjoint
/// cycles times disjoint cumulants of `Σ_{1..1}` (whose moments are falling factorials).
pub fn disjoint_cumulant_of_cycles(lengths: &[usize], q: usize, character: &CycleCharacter<'_>) -> Result<Rational> {
    let n = lengths.len();
    let cycle_cumulants = moments_to_cumulants(
        n,
        |s| {
            let k = CycleTypeIndex::new(s.iter().map(|&i| lengths[i]).collect()).expect("positive lengths");
            character(&k.nontrivial())
        },
        &Scalars,
    )?;
    let ones_cumulants = moments_to_cumulants(n, |s| falling_rat(q, s.iter().map(|&i| lengths[i]).sum()), &Scalars)?;
    let partitions = enumerate_partitions(n)?;
    let one = SetPartition::one_block(n);
    let mut total = Rational::zero();
    for p1 in partitions.iter() {
        let k1 = partition_product(p1, &cycle_cumulants);
        if k1.is_zero() {
            continue;
        }
        for p2 in partitions.iter() {
            if p1.join(p2) == one {
                total += &k1 * partition_product(p2, &ones_cumulants);
            }
        }
    }
    Ok(total)
}

fn partition_product(pi: &SetPartition, table: &CumulantTable<Rational>) -> Rational {
    pi.blocks().iter().fold(Rational::one(), |acc, b| acc * table.get(&b.iter().map(|i| i - 1).collect::<Vec<_>>()))
}

/// Compositions of `n` into exactly `r` positive parts, lexicographic.
pub fn compositions(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if r == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in 1..=n.saturating_sub(r - 1) {
            cur.push(a);
            rec(n - a, r - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, r, &mut Vec::new(), &mut out);
    out
}

/// Top-degree part of `k^id(Σ_{l1}, Σ_{l2})`: the sum over `r` and pairs of compositions
/// `a ⊨ l1`, `b ⊨ l2` with `r` parts of `(l1 l2 / r) Σ_{a_1+b_1-1, ..., a_r+b_r-1}`.
pub fn conditional_covariance_top_degree(l1: usize, l2: usize) -> SigmaCombination {
    let mut out = SigmaCombination::zero();
    for r in 1..=l1.min(l2) {
        let weight = Rational::new(((l1 * l2) as i64).into(), (r as i64).into());
        for a in compositions(l1, r) {
            for b in compositions(l2, r) {
                let rows = a.iter().zip(&b).map(|(x, y)| x + y - 1).collect();
                out.add_term(CycleTypeIndex::new(rows).unwrap(), weight.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{falling, frac, rat};

    fn ct(s: &str) -> CycleTypeIndex {
        s.parse().unwrap()
    }

    fn basis(s: &str) -> SigmaCombination {
        SigmaCombination::basis(ct(s))
    }

    #[test]
    fn second_cumulant_is_covariance() {
        let m = |s: &[usize]| match s {
            [0] => rat(2),
            [1] => rat(3),
            [0, 1] => rat(10),
            _ => unreachable!(),
        };
        let t = moments_to_cumulants(2, m, &Scalars).unwrap();
        assert_eq!(*t.full(), rat(4));
        assert_eq!(*t.get(&[1]), rat(3));
    }

    #[test]
    fn constants_have_no_higher_cumulants() {
        for n in 2..=5 {
            let t = moments_to_cumulants(n, |s| rat(3).pow(s.len() as i32), &Scalars).unwrap();
            assert!(t.full().is_zero());
        }
    }

    #[test]
    fn univariate_gaussian_and_bernoulli() {
        // standard normal moments 0, 1, 0, 3
        let m = [rat(1), rat(0), rat(1), rat(0), rat(3)];
        assert_eq!(univariate_cumulant(&m, 2).unwrap(), rat(1));
        assert!(univariate_cumulant(&m, 4).unwrap().is_zero());
        // Bernoulli(1/2): k3 = 0, k4 = -1/8
        let b = [rat(1), frac(1, 2), frac(1, 2), frac(1, 2), frac(1, 2)];
        assert!(univariate_cumulant(&b, 3).unwrap().is_zero());
        assert_eq!(univariate_cumulant(&b, 4).unwrap(), frac(-1, 8));
    }

    #[test]
    fn conditional_cumulant_examples() {
        let two = SigmaCombination::basis(ct("1+1")).scale(&rat(2));
        assert_eq!(conditional_cumulant_classes(&[ct("1"), ct("1+1")]).unwrap(), two);
        assert_eq!(conditional_cumulant_classes(&[ct("1"), ct("1")]).unwrap(), basis("1"));
        assert_eq!(conditional_cumulant_classes(&[ct("3")]).unwrap(), basis("3"));
    }

    #[test]
    fn conditional_cumulant_two_routes_agree() {
        let cases = [vec!["1", "1"], vec!["2", "2"], vec!["2", "3"], vec!["1", "2", "2"], vec!["2", "2", "2"], vec!["1+1", "2"]];
        for case in cases {
            let ks: Vec<CycleTypeIndex> = case.iter().map(|s| ct(s)).collect();
            let args: Vec<SigmaCombination> = ks.iter().cloned().map(SigmaCombination::basis).collect();
            let inverted = conditional_cumulants_by_inversion(&args).unwrap();
            assert_eq!(*inverted.full(), conditional_cumulant_classes(&ks).unwrap(), "{case:?}");
        }
    }

    #[test]
    fn top_degree_of_conditional_covariance() {
        for l1 in 1..=5 {
            for l2 in 1..=(6 - l1) {
                let k = conditional_cumulant_classes(&[CycleTypeIndex::cycle(l1), CycleTypeIndex::cycle(l2)]).unwrap();
                assert!(k.degree().unwrap() <= l1 + l2);
                assert_eq!(k.degree_part(l1 + l2), conditional_covariance_top_degree(l1, l2), "({l1},{l2})");
            }
        }
    }

    #[test]
    fn leonov_shiryaev_examples() {
        let ones = leonov_shiryaev_partitions(&[1, 1]).unwrap();
        assert_eq!(ones, vec!["{1,2}".parse().unwrap()]);
        let mut got: Vec<String> = leonov_shiryaev_partitions(&[2, 1]).unwrap().iter().map(ToString::to_string).collect();
        got.sort();
        assert_eq!(got, vec!["{1,2,3}", "{1,3|2}", "{1|2,3}"]);
        for pi in leonov_shiryaev_partitions(&[2, 1, 2]).unwrap() {
            let merges: usize = pi.blocks().iter().map(|b| b.len() - 1).sum();
            assert!(merges >= 2);
        }
    }

    #[test]
    fn falling_factorial_classes_have_no_mixed_cumulants() {
        // Σ_{1^l} = q↓l times the identity: a constant
        let q = 7;
        let e = |k: &CycleTypeIndex| if k.nontrivial().is_empty() { falling_rat(q, k.size()) } else { rat(0) };
        for l in 1..=3 {
            let x = SigmaCombination::basis(CycleTypeIndex::ones(l));
            assert_eq!(natural_cumulant(std::slice::from_ref(&x), &e).unwrap(), Rational::from_integer(falling(q, l)));
            let y = SigmaCombination::basis(CycleTypeIndex::ones(2));
            assert!(natural_cumulant(&[x.clone(), y.clone()], &e).unwrap().is_zero());
            assert!(natural_cumulant(&[x.clone(), y, x], &e).unwrap().is_zero());
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(5, 3).len(), 6);
        assert!(compositions(2, 3).is_empty());
    }
}
