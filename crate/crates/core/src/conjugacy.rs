//! Normalized conjugacy class indicators `Σ_k`, partition-indexed classes `Σ_π`, fat
//! partitions, winding numbers and genus.
//!
//! Two representations of central elements coexist:
//!
//! - brute-force [`AlgebraElement`]s at a fixed `q`, built literally from injective fillings
//!   ([`sigma`]) or from products of `J`-matrix entries ([`sigma_pi`]);
//! - [`SigmaCombination`], a `q`-independent rational combination of `Σ_k`, whose group
//!   product is computed through [`product_expansion`] and [`explicit_cycle_type`].
//!
//! The test-suite checks that the two agree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraElement, PartialPermutation};
use crate::error::{Error, Result};
use crate::num::{factorial, falling, Rational};
use crate::partition::{SetPartition, UnionFind};

/// Row lengths `k_1 >= ... >= k_m >= 1` of a normalized conjugacy class indicator.
///
/// Rows of length one are significant: `Σ_{1,1}` and `Σ_1` are different elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CycleTypeIndex(Vec<usize>);

impl CycleTypeIndex {
    pub fn new(mut rows: Vec<usize>) -> Result<Self> {
        if rows.contains(&0) {
            return Err(Error::Parse("cycle type rows must be positive".into()));
        }
        rows.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleTypeIndex(rows))
    }

    /// The empty index; `Σ_∅` is the unit.
    pub fn empty() -> Self {
        CycleTypeIndex(Vec::new())
    }

    pub fn cycle(l: usize) -> Self {
        assert!(l >= 1);
        CycleTypeIndex(vec![l])
    }

    /// `(1, ..., 1)` with `k` rows.
    pub fn ones(k: usize) -> Self {
        CycleTypeIndex(vec![1; k])
    }

    pub fn rows(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of cells `Σ k_i`.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// `Σ (k_i + 1)`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|k| k + 1).sum()
    }

    /// Minimal number of transpositions for a permutation of this cycle type.
    pub fn transposition_length(&self) -> usize {
        self.0.iter().map(|k| k - 1).sum()
    }

    /// Rows of length at least two.
    pub fn nontrivial(&self) -> CycleTypeIndex {
        CycleTypeIndex(self.0.iter().copied().filter(|&k| k >= 2).collect())
    }

    /// Number of support points moved by a permutation of this type.
    pub fn moved_points(&self) -> usize {
        self.0.iter().filter(|&&k| k >= 2).sum()
    }

    /// Concatenation of rows: `Σ_k • Σ_l = Σ_{k ∪ l}`.
    pub fn union(&self, other: &CycleTypeIndex) -> CycleTypeIndex {
        let mut rows = self.0.clone();
        rows.extend_from_slice(&other.0);
        rows.sort_unstable_by(|a, b| b.cmp(a));
        CycleTypeIndex(rows)
    }

    /// Multiplicity with which each partial permutation of this cycle type occurs in `Σ_k`:
    /// `(Π k_j) · Π_m (number of rows equal to m)!`.
    pub fn filling_multiplicity(&self) -> BigInt {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        let mut prod = BigInt::one();
        for &k in &self.0 {
            prod *= BigInt::from(k);
            *counts.entry(k).or_default() += 1;
        }
        counts.values().fold(prod, |acc, &m| acc * factorial(m))
    }

    /// Completion to a partition of `q` by rows of length one (with `q >= size`).
    pub fn padded(&self, q: usize) -> Vec<usize> {
        let mut rows = self.nontrivial().0;
        rows.extend(std::iter::repeat_n(1, q - self.moved_points()));
        rows
    }
}

impl fmt::Display for CycleTypeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for CycleTypeIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(CycleTypeIndex::empty());
        }
        let rows = s
            .split('+')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad cycle type `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        CycleTypeIndex::new(rows)
    }
}

// ---------------------------------------------------------------------------------------------
// Brute-force constructions at fixed q
// ---------------------------------------------------------------------------------------------

/// `Σ_k` at `q`: the sum over all injective fillings of the rows by `{1..q}`, each filling
/// read as a product of disjoint cycles with support equal to the filled cells.
pub fn sigma(k: &CycleTypeIndex, q: usize) -> AlgebraElement {
    assert!(q < 64, "brute-force construction limited to q < 64");
    let r = k.size();
    if r > q {
        return AlgebraElement::zero();
    }
    let mut counts: HashMap<PartialPermutation, i64> = HashMap::new();
    let mut filling = vec![0u32; r];
    fill(0, 0u64, q, &mut filling, &mut |cells| {
        let mut pairs = Vec::with_capacity(r);
        let mut start = 0;
        for &len in k.rows() {
            let row = &cells[start..start + len];
            for i in 0..len {
                pairs.push((row[i], row[(i + 1) % len]));
            }
            start += len;
        }
        pairs.sort_unstable();
        *counts.entry(PartialPermutation::from_sorted_pairs(pairs)).or_default() += 1;
    });
    AlgebraElement::from_counts(counts)
}

fn fill(pos: usize, used: u64, q: usize, cells: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if pos == cells.len() {
        visit(cells);
        return;
    }
    for v in 1..=q {
        if used & (1 << v) == 0 {
            cells[pos] = v as u32;
            fill(pos + 1, used | (1 << v), q, cells, visit);
        }
    }
}

/// Number of partial permutations of cycle type `k` with support inside `{1..q}`.
pub fn class_size(k: &CycleTypeIndex, q: usize) -> BigInt {
    falling(q, k.size()) / k.filling_multiplicity()
}

/// Writes a central element as `Σ c_k Σ_k` at `q`.
///
/// Fails with [`Error::NotCentral`] when the element is not constant on the partial
/// permutations of each cycle type inside `{1..q}`.
pub fn decompose_sigma_basis(x: &AlgebraElement, q: usize) -> Result<SigmaCombination> {
    let mut by_type: BTreeMap<CycleTypeIndex, (Rational, BigInt)> = BTreeMap::new();
    for (p, c) in x.terms() {
        if p.support().iter().any(|&s| s > q) {
            return Err(Error::NotCentral(format!("support of {p} leaves {{1..{q}}}")));
        }
        let t = CycleTypeIndex(p.cycle_type());
        match by_type.get_mut(&t) {
            Some((c0, n)) => {
                if c0 != c {
                    return Err(Error::NotCentral(format!("unequal coefficients on cycle type {t}")));
                }
                *n += 1;
            }
            None => {
                by_type.insert(t, (c.clone(), BigInt::one()));
            }
        }
    }
    let mut out = SigmaCombination::zero();
    for (t, (c, n)) in by_type {
        if n != class_size(&t, q) {
            return Err(Error::NotCentral(format!("cycle type {t} covered {n} times, class has {}", class_size(&t, q))));
        }
        out.add_term(t.clone(), c / Rational::from_integer(t.filling_multiplicity()));
    }
    Ok(out)
}

/// `Σ_π` at `q`: sum over sequences `p ~ π` with `p_l = q + 1` of the `J`-matrix products
/// `J_{p1 p2} J_{p2 p3} ... J_{pl p1}`, each term a partial permutation supported on
/// `{p_1..p_l} \ {q+1}`. The ground set of `π` is relabelled onto `{1..l}` in order.
pub fn sigma_pi(pi: &SetPartition, q: usize) -> AlgebraElement {
    assert!(q < 64, "brute-force construction limited to q < 64");
    let pi = pi.standardize();
    let l = pi.size();
    if l == 0 {
        return AlgebraElement::zero();
    }
    let labels = pi.labels();
    let last_block = labels[l - 1];
    let free_blocks: Vec<usize> = (0..pi.num_blocks()).filter(|&b| b != last_block).collect();
    let marker = (q + 1) as u32;
    let mut counts: HashMap<PartialPermutation, i64> = HashMap::new();
    let mut values = vec![0u32; free_blocks.len()];
    let mut block_value = vec![marker; pi.num_blocks()];
    fill(0, 0u64, q, &mut values, &mut |vals| {
        for (b, v) in free_blocks.iter().zip(vals) {
            block_value[*b] = *v;
        }
        let p: Vec<u32> = labels.iter().map(|&b| block_value[b]).collect();
        // diagonal entries of J vanish
        if (0..l).any(|i| p[i] == p[(i + 1) % l]) {
            return;
        }
        let mut support: Vec<u32> = p.iter().copied().filter(|&x| x != marker).collect();
        support.sort_unstable();
        support.dedup();
        // the product t_1 t_2 ... t_l acts on x as t_1(t_2(...t_l(x)))
        let pairs = support
            .iter()
            .map(|&x| {
                let mut y = x;
                for i in (0..l).rev() {
                    let (a, b) = (p[i], p[(i + 1) % l]);
                    if a == marker || b == marker {
                        continue;
                    }
                    if y == a {
                        y = b;
                    } else if y == b {
                        y = a;
                    }
                }
                (x, y)
            })
            .collect();
        *counts.entry(PartialPermutation::from_sorted_pairs(pairs)).or_default() += 1;
    });
    AlgebraElement::from_counts(counts)
}

// ---------------------------------------------------------------------------------------------
// Fat partitions, winding numbers, genus
// ---------------------------------------------------------------------------------------------

/// Pair partition of `{1, 1', ..., n, n'}` tracing the boundary of the blocks of a partition.
///
/// Stored as the pairs `(a', b)`: every primed point is matched with exactly one unprimed one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatPartition {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl FatPartition {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The bijection `a' ↦ b` as a lookup table indexed by `a`.
    pub fn as_map(&self) -> Vec<usize> {
        let mut map = vec![0; self.n + 1];
        for &(a, b) in &self.pairs {
            map[a] = b;
        }
        map
    }
}

impl fmt::Display for FatPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{{{a}',{b}}}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Pairs `{π'_{s,t}, π_{s,t+1}}` with the cyclic successor inside each sorted block.
/// The partition is relabelled onto `{1..n}` first.
pub fn fat_partition(pi: &SetPartition) -> FatPartition {
    let pi = pi.standardize();
    let mut pairs = Vec::with_capacity(pi.size());
    for block in pi.blocks() {
        for (t, &a) in block.iter().enumerate() {
            pairs.push((a, block[(t + 1) % block.len()]));
        }
    }
    FatPartition { n: pi.size(), pairs }
}

/// Direction in which the cycles of `π_fat ∘ c` are walked around the circle.
///
/// Only [`Winding::Clockwise`] is correct; the other exists so verification suites can prove
/// they detect a sign error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Winding {
    #[default]
    Clockwise,
    Counterclockwise,
}

/// Cycles of `π_fat ∘ c`, where `c(k) = (k-1)'` cyclically, so `k ↦ succ(k-1)`.
pub fn fat_cycles(pi: &SetPartition) -> Vec<Vec<usize>> {
    let fat = fat_partition(pi);
    let n = fat.n();
    let succ = fat.as_map();
    let perm = |k: usize| succ[if k == 1 { n } else { k - 1 }];
    let mut seen = vec![false; n + 1];
    let mut out = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = perm(start);
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = perm(x);
        }
        out.push(cycle);
    }
    out
}

/// Winding number of a cycle of points on a circle labelled `1..n` counterclockwise, walking
/// from each element to the next. `None` for a step of length zero (a one-element cycle).
pub fn winds(cycle: &[usize], n: usize, direction: Winding) -> Option<usize> {
    let mut total = 0;
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        let step = match direction {
            Winding::Clockwise => (a + n - b) % n,
            Winding::Counterclockwise => (b + n - a) % n,
        };
        if step == 0 {
            return None;
        }
        total += step;
    }
    debug_assert_eq!(total % n, 0);
    Some(total / n)
}

/// Cycle type `k` with `Σ_π = Σ_k`: each cycle `b_s` of `π_fat ∘ c` contributes
/// `|b_s| - (clockwise winds of b_s)`.
///
/// One-element cycles occur exactly when two cyclically adjacent points share a block, in
/// which case `Σ_π = 0`; these are reported as [`Error::DegenerateWinding`].
pub fn explicit_cycle_type(pi: &SetPartition) -> Result<CycleTypeIndex> {
    explicit_cycle_type_with(pi, Winding::Clockwise)
}

pub fn explicit_cycle_type_with(pi: &SetPartition, direction: Winding) -> Result<CycleTypeIndex> {
    let n = pi.size();
    let mut rows = Vec::new();
    for cycle in fat_cycles(pi) {
        let w = winds(&cycle, n, direction).ok_or_else(|| Error::DegenerateWinding(format!("{pi}: fixed point {} of π_fat∘c", cycle[0])))?;
        if w >= cycle.len() {
            return Err(Error::DegenerateWinding(format!("{pi}: cycle {cycle:?} winds {w} times")));
        }
        rows.push(cycle.len() - w);
    }
    CycleTypeIndex::new(rows)
}

/// True when `Σ_π = 0` because two cyclically adjacent points lie in one block.
pub fn is_degenerate(pi: &SetPartition) -> bool {
    let labels = pi.standardize().labels();
    let n = labels.len();
    n == 0 || (0..n).any(|i| labels[i] == labels[(i + 1) % n])
}

/// Genus of the surface glued from the blocks of `π`:
/// `2g = n + 1 - (#blocks) - (#cycles of π_fat ∘ c)`.
///
/// For non-degenerate partitions the identity `deg Σ_π = n - 2g` is checked as well.
pub fn genus(pi: &SetPartition) -> Result<usize> {
    let n = pi.size();
    let cycles = fat_cycles(pi).len();
    let twice = (n + 1) as i64 - pi.num_blocks() as i64 - cycles as i64;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Parity(format!("{pi}: 2g = {twice}")));
    }
    let g = (twice / 2) as usize;
    if !is_degenerate(pi) {
        let deg = explicit_cycle_type(pi)?.degree();
        if deg + 2 * g != n {
            return Err(Error::Parity(format!("{pi}: deg = {deg} but n - 2g = {}", n as i64 - 2 * g as i64)));
        }
    }
    Ok(g)
}

// ---------------------------------------------------------------------------------------------
// Products of partition-indexed classes
// ---------------------------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpansionMode {
    /// `π_1 • ... • π_n`: only the marker points are joined.
    Disjoint,
    /// Every `σ` that keeps each `π_s` intact and joins the markers.
    Full,
    /// As `Full`, restricted to `σ` whose non-marker blocks connect all ranges.
    ConditionalCumulant,
}

/// Partitions `σ` indexing the expansion of `Σ_{π_1} ... Σ_{π_n}` (group product), of
/// `Σ_{π_1} • ... • Σ_{π_n}`, or of the conditional cumulant `k^id(Σ_{π_1}, ..., Σ_{π_n})`.
///
/// Each `π_s` lives on an interval `ρ_s`; the intervals must be consecutive and given in
/// order. The marker of `ρ_s` is its largest point. Output is sorted.
pub fn product_expansion(pis: &[SetPartition], mode: ExpansionMode) -> Result<Vec<SetPartition>> {
    if pis.is_empty() {
        return Ok(Vec::new());
    }
    for (s, p) in pis.iter().enumerate() {
        if p.size() == 0 || !p.is_interval() {
            return Err(Error::OverlappingRanges(format!("factor {s} = {p} is not on an interval")));
        }
        if s > 0 && SetPartition::min(p).unwrap() != SetPartition::max(&pis[s - 1]).unwrap() + 1 {
            return Err(Error::OverlappingRanges(format!("factor {s} = {p} does not follow {}", pis[s - 1])));
        }
    }
    // marker group and the remaining blocks tagged by range
    let mut marker: Vec<usize> = Vec::new();
    let mut others: Vec<(usize, Vec<usize>)> = Vec::new();
    for (s, p) in pis.iter().enumerate() {
        let top = SetPartition::max(p).unwrap();
        for b in p.blocks() {
            if b.contains(&top) {
                marker.extend_from_slice(b);
            } else {
                others.push((s, b.clone()));
            }
        }
    }
    let n = pis.len();
    let mut out = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_ranges: Vec<u64> = Vec::new();
    assign_groups(0, &others, mode, &mut groups, &mut group_ranges, &mut |groups| {
        if mode == ExpansionMode::ConditionalCumulant && n > 1 {
            let mut uf = UnionFind::new(n);
            for g in groups {
                let first = others[g[0]].0;
                for &i in &g[1..] {
                    uf.union(first, others[i].0);
                }
            }
            if uf.components() != 1 {
                return;
            }
        }
        let mut blocks = vec![marker.clone()];
        for g in groups {
            blocks.push(g.iter().flat_map(|&i| others[i].1.iter().copied()).collect());
        }
        out.push(SetPartition::new(blocks).expect("merged blocks are disjoint"));
    });
    out.sort();
    Ok(out)
}

fn assign_groups(
    i: usize,
    others: &[(usize, Vec<usize>)],
    mode: ExpansionMode,
    groups: &mut Vec<Vec<usize>>,
    group_ranges: &mut Vec<u64>,
    emit: &mut impl FnMut(&[Vec<usize>]),
) {
    if i == others.len() {
        emit(groups);
        return;
    }
    let range_bit = 1u64 << others[i].0;
    if mode != ExpansionMode::Disjoint {
        for g in 0..groups.len() {
            if group_ranges[g] & range_bit == 0 {
                groups[g].push(i);
                group_ranges[g] |= range_bit;
                assign_groups(i + 1, others, mode, groups, group_ranges, emit);
                group_ranges[g] &= !range_bit;
                groups[g].pop();
            }
        }
    }
    groups.push(vec![i]);
    group_ranges.push(range_bit);
    assign_groups(i + 1, others, mode, groups, group_ranges, emit);
    groups.pop();
    group_ranges.pop();
}

/// A partition with `Σ_π = Σ_k`: singletons on consecutive intervals of lengths `k_j + 1`
/// whose last points are joined into one block. Starts at `offset + 1`.
pub fn partition_for(k: &CycleTypeIndex, offset: usize) -> SetPartition {
    let mut blocks = Vec::new();
    let mut markers = Vec::new();
    let mut next = offset + 1;
    for &len in k.rows() {
        for _ in 0..len {
            blocks.push(vec![next]);
            next += 1;
        }
        markers.push(next);
        next += 1;
    }
    if !markers.is_empty() {
        blocks.push(markers);
    }
    SetPartition::new(blocks).expect("valid construction")
}

/// `Σ_π` in the `Σ` basis: `Σ_{explicit_cycle_type(π)}`, or zero for degenerate `π`.
pub fn sigma_pi_combination(pi: &SetPartition) -> SigmaCombination {
    match explicit_cycle_type(pi) {
        Ok(k) => SigmaCombination::basis(k),
        Err(_) => SigmaCombination::zero(),
    }
}

/// Lays the partitions out on consecutive intervals starting at 1.
pub fn on_consecutive_ranges(parts: &[SetPartition]) -> Vec<SetPartition> {
    let mut offset = 0;
    parts
        .iter()
        .map(|p| {
            let s = p.standardize().shifted(offset);
            offset += p.size();
            s
        })
        .collect()
}

// ---------------------------------------------------------------------------------------------
// Σ-basis combinations
// ---------------------------------------------------------------------------------------------

/// A rational combination `Σ c_k Σ_k`, independent of `q`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct SigmaCombination {
    terms: BTreeMap<CycleTypeIndex, Rational>,
}

impl SigmaCombination {
    pub fn zero() -> Self {
        SigmaCombination::default()
    }

    pub fn one() -> Self {
        SigmaCombination::basis(CycleTypeIndex::empty())
    }

    pub fn basis(k: CycleTypeIndex) -> Self {
        let mut s = SigmaCombination::zero();
        s.add_term(k, Rational::one());
        s
    }

    pub fn add_term(&mut self, k: CycleTypeIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CycleTypeIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, k: &CycleTypeIndex) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &SigmaCombination) -> SigmaCombination {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SigmaCombination) -> SigmaCombination {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> SigmaCombination {
        if c.is_zero() {
            return SigmaCombination::zero();
        }
        SigmaCombination { terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    /// Disjoint product, `Σ_k • Σ_l = Σ_{k ∪ l}` extended bilinearly.
    pub fn disjoint_mul(&self, other: &SigmaCombination) -> SigmaCombination {
        let mut out = SigmaCombination::zero();
        for (k, a) in &self.terms {
            for (l, b) in &other.terms {
                out.add_term(k.union(l), a * b);
            }
        }
        out
    }

    /// Group product, through the partition expansion of `Σ_{π(k)} Σ_{π(l)}`.
    pub fn mul(&self, other: &SigmaCombination) -> SigmaCombination {
        let mut out = SigmaCombination::zero();
        for (k, a) in &self.terms {
            for (l, b) in &other.terms {
                let c = a * b;
                for (m, x) in sigma_product(k, l).terms() {
                    out.add_term(m.clone(), x * &c);
                }
            }
        }
        out
    }

    /// Largest `deg Σ_k` over the terms; `None` for the zero element.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(CycleTypeIndex::degree).max()
    }

    /// Terms of exactly the given degree.
    pub fn degree_part(&self, d: usize) -> SigmaCombination {
        SigmaCombination { terms: self.terms.iter().filter(|(k, _)| k.degree() == d).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }

    /// Brute-force element of the partial-permutation algebra at `q`.
    pub fn to_algebra(&self, q: usize) -> AlgebraElement {
        self.terms.iter().fold(AlgebraElement::zero(), |acc, (k, c)| acc.add(&sigma(k, q).scale(c)))
    }

    /// Evaluates `Σ c_k f(k)` for a linear functional given on basis elements.
    pub fn evaluate(&self, mut f: impl FnMut(&CycleTypeIndex) -> Rational) -> Rational {
        self.terms.iter().map(|(k, c)| c * f(k)).fold(Rational::zero(), |a, b| a + b)
    }

    /// Largest denominator-free integer check: all coefficients integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Nonnegative integer coefficients only.
    pub fn is_nonnegative_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer() && !c.is_negative())
    }
}

impl fmt::Display for SigmaCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if c.is_one() {
                    format!("Σ[{k}]")
                } else {
                    format!("{}·Σ[{k}]", crate::num::format_rational(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type ProductCache = RwLock<HashMap<(CycleTypeIndex, CycleTypeIndex), SigmaCombination>>;

fn product_cache() -> &'static ProductCache {
    static CACHE: OnceLock<ProductCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Structure constants `Σ_k Σ_l = Σ_m c_m Σ_m` of the group product, memoized.
pub fn sigma_product(k: &CycleTypeIndex, l: &CycleTypeIndex) -> SigmaCombination {
    if k.is_empty() {
        return SigmaCombination::basis(l.clone());
    }
    if l.is_empty() {
        return SigmaCombination::basis(k.clone());
    }
    let key = if k <= l { (k.clone(), l.clone()) } else { (l.clone(), k.clone()) };
    if let Some(v) = product_cache().read().unwrap().get(&key) {
        return v.clone();
    }
    let pk = partition_for(&key.0, 0);
    let pl = partition_for(&key.1, pk.size());
    let sigmas = product_expansion(&[pk, pl], ExpansionMode::Full).expect("consecutive ranges");
    let mut out = SigmaCombination::zero();
    for s in &sigmas {
        out = out.add(&sigma_pi_combination(s));
    }
    product_cache().write().unwrap().insert(key, out.clone());
    out
}

/// Value of `Σ_k` under a normalized character `chi` of `S_q`: `q↓|k| · chi(k)`.
pub fn sigma_expectation(k: &CycleTypeIndex, q: usize, chi: &Rational) -> Rational {
    Rational::from_integer(falling(q, k.size())) * chi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::partition::enumerate_partitions;

    fn ct(s: &str) -> CycleTypeIndex {
        s.parse().unwrap()
    }

    fn sp(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    fn comb(pairs: &[(&str, i64)]) -> SigmaCombination {
        let mut c = SigmaCombination::zero();
        for (k, v) in pairs {
            c.add_term(ct(k), rat(*v));
        }
        c
    }

    /// All cycle types (with one-rows) of total size `r`.
    fn cycle_types_of_size(r: usize) -> Vec<CycleTypeIndex> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<CycleTypeIndex>) {
            if rem == 0 {
                out.push(CycleTypeIndex::new(cur.clone()).unwrap());
                return;
            }
            for k in (1..=rem.min(max)).rev() {
                cur.push(k);
                rec(rem - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(r, r, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn cycle_type_text_and_degree() {
        let k = ct("1+2");
        assert_eq!(k.rows(), &[2, 1]);
        assert_eq!(k.to_string(), "2+1");
        assert_eq!(k.degree(), 5);
        assert_eq!(ct("1+1").degree(), 4);
        assert!("0+1".parse::<CycleTypeIndex>().is_err());
    }

    #[test]
    fn sigma_one_is_sum_of_point_identities() {
        let s = sigma(&ct("1"), 4);
        assert_eq!(s.len(), 4);
        for a in 1..=4 {
            assert_eq!(s.coefficient(&PartialPermutation::identity_on([a])), rat(1));
        }
    }

    #[test]
    fn sigma_vanishes_for_small_q() {
        assert!(sigma(&ct("2+1"), 2).is_zero());
    }

    #[test]
    fn sigma_two_at_three_counts_both_rotations() {
        let s = sigma(&ct("2"), 3);
        assert_eq!(s.len(), 3);
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            let t = PartialPermutation::from_cycles([a, b], &[vec![a, b]]).unwrap();
            assert_eq!(s.coefficient(&t), rat(2));
        }
    }

    /// Oracle for the multiplicity rule: count fillings producing each partial permutation.
    #[test]
    fn multiplicity_rule_matches_brute_force() {
        for r in 1..=6 {
            for k in cycle_types_of_size(r) {
                for q in r..=6 {
                    let s = sigma(&k, q);
                    let z = Rational::from_integer(k.filling_multiplicity());
                    assert!(s.terms().all(|(p, c)| *c == z && CycleTypeIndex(p.cycle_type()) == k), "{k} at {q}");
                    assert_eq!(BigInt::from(s.len()), class_size(&k, q));
                }
            }
        }
    }

    #[test]
    fn decompose_round_trip_and_rejects_noncentral() {
        assert_eq!(decompose_sigma_basis(&sigma(&ct("2"), 5), 5).unwrap(), comb(&[("2", 1)]));
        let lone = AlgebraElement::from_term(PartialPermutation::identity_on([1]), rat(1));
        assert!(matches!(decompose_sigma_basis(&lone, 3), Err(Error::NotCentral(_))));
        let mut skew = sigma(&ct("1"), 3);
        skew.add_term(PartialPermutation::identity_on([2]), rat(1));
        assert!(matches!(decompose_sigma_basis(&skew, 3), Err(Error::NotCentral(_))));
    }

    #[test]
    fn worked_product_sigma1_sigma11() {
        for q in 3..=6 {
            let prod = sigma(&ct("1"), q).mul(&sigma(&ct("1+1"), q));
            assert_eq!(decompose_sigma_basis(&prod, q).unwrap(), comb(&[("1+1+1", 1), ("1+1", 2)]));
        }
    }

    #[test]
    fn sigma2_squared() {
        for q in 4..=5 {
            let prod = sigma(&ct("2"), q).mul(&sigma(&ct("2"), q));
            assert_eq!(decompose_sigma_basis(&prod, q).unwrap(), comb(&[("2+2", 1), ("3", 4), ("1+1", 2)]));
        }
        assert_eq!(sigma_product(&ct("2"), &ct("2")), comb(&[("2+2", 1), ("3", 4), ("1+1", 2)]));
    }

    #[test]
    fn sigma_pi_examples() {
        for q in 3..=5 {
            assert_eq!(sigma_pi(&sp("{1|2}"), q), sigma(&ct("1"), q));
            assert_eq!(sigma_pi(&sp("{1,3|2,4}"), q), sigma(&ct("1"), q));
            assert_eq!(sigma_pi(&sp("{1,3|2|4}"), q), sigma(&ct("1+1"), q));
            assert_eq!(sigma_pi(&sp("{5,7|6|8}"), q), sigma(&ct("1+1"), q));
        }
        assert!(sigma_pi(&sp("{1,2}"), 4).is_zero());
    }

    #[test]
    fn fat_partition_examples() {
        assert_eq!(fat_partition(&sp("{1,3|2,5,7|4|6}")).to_string(), "{1',3},{3',1},{2',5},{5',7},{7',2},{4',4},{6',6}");
        assert_eq!(fat_partition(&sp("{1}")).to_string(), "{1',1}");
        assert_eq!(fat_partition(&sp("{1,2}")).to_string(), "{1',2},{2',1}");
    }

    #[test]
    fn explicit_cycle_type_examples() {
        let running = sp("{1,3|2,5,7|4|6}");
        assert_eq!(fat_cycles(&running), vec![vec![1, 2, 3, 5, 4], vec![6, 7]]);
        assert_eq!(explicit_cycle_type(&running).unwrap(), ct("2+1"));
        assert_eq!(explicit_cycle_type(&sp("{1|2}")).unwrap(), ct("1"));
        assert_eq!(explicit_cycle_type(&sp("{1,3|2,4}")).unwrap(), ct("1"));
        assert_eq!(winds(&[1, 2, 3, 4], 4, Winding::Clockwise), Some(3));
        assert!(matches!(explicit_cycle_type(&sp("{1,2}")), Err(Error::DegenerateWinding(_))));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(&sp("{1,3|2,5,7|4|6}")).unwrap(), 1);
        assert_eq!(genus(&sp("{1,3|2,4}")).unwrap(), 1);
        for n in 1..=7 {
            for p in enumerate_partitions(n).unwrap().iter().filter(|p| p.is_noncrossing()) {
                assert_eq!(genus(p).unwrap(), 0, "{p}");
            }
        }
    }

    #[test]
    fn degenerate_iff_fixed_point_of_fat_permutation() {
        for n in 1..=7 {
            for p in enumerate_partitions(n).unwrap().iter() {
                let fixed = fat_cycles(p).iter().any(|c| c.len() == 1);
                assert_eq!(fixed, is_degenerate(p), "{p}");
                assert_eq!(explicit_cycle_type(p).is_err(), fixed);
            }
        }
    }

    #[test]
    fn sigma_pi_matches_explicit_cycle_type_small() {
        for n in 1..=5 {
            for p in enumerate_partitions(n).unwrap().iter() {
                for q in n..=n + 1 {
                    let brute = sigma_pi(p, q);
                    match explicit_cycle_type(p) {
                        Ok(k) => assert_eq!(brute, sigma(&k, q), "{p} at q={q}"),
                        Err(_) => assert!(brute.is_zero(), "{p}"),
                    }
                }
            }
        }
    }

    #[test]
    fn counterclockwise_convention_is_wrong() {
        let p = sp("{1|2|3}");
        assert_eq!(explicit_cycle_type(&p).unwrap(), ct("2"));
        assert_ne!(explicit_cycle_type_with(&p, Winding::Counterclockwise).unwrap(), ct("2"));
    }

    #[test]
    fn product_expansion_example() {
        let p1 = sp("{1,3|2,4}");
        let p2 = sp("{5,7|6|8}");
        let full = product_expansion(&[p1.clone(), p2.clone()], ExpansionMode::Full).unwrap();
        let mut expected: Vec<SetPartition> =
            ["{1,3|2,4,8|5,7|6}", "{1,3,6|2,4,8|5,7}", "{1,3,5,7|2,4,8|6}"].iter().map(|s| sp(s)).collect();
        expected.sort();
        assert_eq!(full, expected);
        let cond = product_expansion(&[p1.clone(), p2.clone()], ExpansionMode::ConditionalCumulant).unwrap();
        let mut expected_cond: Vec<SetPartition> = ["{1,3,6|2,4,8|5,7}", "{1,3,5,7|2,4,8|6}"].iter().map(|s| sp(s)).collect();
        expected_cond.sort();
        assert_eq!(cond, expected_cond);
        let dis = product_expansion(&[p1, p2], ExpansionMode::Disjoint).unwrap();
        assert_eq!(dis, vec![sp("{1,3|2,4,8|5,7|6}")]);
        // and the Σ-basis reading of the example
        let total = full.iter().fold(SigmaCombination::zero(), |a, s| a.add(&sigma_pi_combination(s)));
        assert_eq!(total, comb(&[("1+1+1", 1), ("1+1", 2)]));
    }

    #[test]
    fn product_expansion_single_factor_and_errors() {
        let p = sp("{1,3|2}");
        for mode in [ExpansionMode::Disjoint, ExpansionMode::Full, ExpansionMode::ConditionalCumulant] {
            assert_eq!(product_expansion(std::slice::from_ref(&p), mode).unwrap(), vec![p.clone()]);
        }
        assert!(matches!(product_expansion(&[sp("{1,2}"), sp("{2,3}")], ExpansionMode::Full), Err(Error::OverlappingRanges(_))));
        assert!(matches!(product_expansion(&[sp("{1,2}"), sp("{4,5}")], ExpansionMode::Full), Err(Error::OverlappingRanges(_))));
    }

    #[test]
    fn canonical_partitions_realize_their_cycle_type() {
        for r in 1..=5 {
            for k in cycle_types_of_size(r) {
                assert_eq!(explicit_cycle_type(&partition_for(&k, 0)).unwrap(), k);
            }
        }
    }

    #[test]
    fn combination_arithmetic() {
        let a = comb(&[("2", 1), ("1", 3)]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.degree(), Some(3));
        assert_eq!(SigmaCombination::zero().degree(), None);
        assert_eq!(a.disjoint_mul(&comb(&[("1", 1)])), comb(&[("2+1", 1), ("1+1", 3)]));
        assert_eq!(a.degree_part(2), comb(&[("1", 3)]));
        assert_eq!(SigmaCombination::one().mul(&a), a);
    }
}
