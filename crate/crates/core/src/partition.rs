//! Set partitions of finite ordered sets of positive integers.
//!
//! Text form is block notation, e.g. `{1,3|2,5,7|4|6}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Largest ground set accepted by [`enumerate_partitions`].
pub const MAX_ENUMERATION: usize = 12;
const MEMO_LIMIT: usize = 10;

/// A partition of a finite set of positive integers into nonempty disjoint blocks.
///
/// Canonical form: every block sorted ascending, blocks ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Parse("empty block".into()));
            }
            for &x in b {
                if x == 0 || !seen.insert(x) {
                    return Err(Error::Parse(format!("point {x} repeated or not positive")));
                }
            }
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { blocks })
    }

    /// All singletons of `{1..n}`.
    pub fn singletons(n: usize) -> Self {
        SetPartition { blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    /// One block `{1..n}`.
    pub fn one_block(n: usize) -> Self {
        if n == 0 {
            return SetPartition { blocks: Vec::new() };
        }
        SetPartition { blocks: vec![(1..=n).collect()] }
    }

    /// Builds the partition of `{1..n}` from block labels, `labels[i]` for point `i + 1`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            map.entry(l).or_default().push(i + 1);
        }
        let mut blocks: Vec<Vec<usize>> = map.into_values().collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        SetPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn ground_set(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        g.sort_unstable();
        g
    }

    pub fn min(&self) -> Option<usize> {
        self.blocks.iter().flatten().copied().min()
    }

    pub fn max(&self) -> Option<usize> {
        self.blocks.iter().flatten().copied().max()
    }

    /// True when the ground set is `{a..b}` for some `a <= b`.
    pub fn is_interval(&self) -> bool {
        let g = self.ground_set();
        g.windows(2).all(|w| w[1] == w[0] + 1)
    }

    pub fn block_of(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        matches!((self.block_of(a), self.block_of(b)), (Some(x), Some(y)) if x == y)
    }

    /// Order-preserving relabelling of the ground set onto `{1..n}`.
    pub fn standardize(&self) -> SetPartition {
        let g = self.ground_set();
        let rank = |x: usize| g.binary_search(&x).unwrap() + 1;
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&x| rank(x)).collect()).collect();
        SetPartition { blocks }
    }

    /// Shifts every point by `offset`.
    pub fn shifted(&self, offset: usize) -> SetPartition {
        SetPartition { blocks: self.blocks.iter().map(|b| b.iter().map(|&x| x + offset).collect()).collect() }
    }

    /// Block label of each point of the ground set, in ground-set order.
    pub fn labels(&self) -> Vec<usize> {
        let g = self.ground_set();
        let mut out = vec![0; g.len()];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[g.binary_search(&x).unwrap()] = bi;
            }
        }
        out
    }

    /// Join `self ∨ other` of two partitions; points missing from one side stay as they are
    /// in the other.
    pub fn join(&self, other: &SetPartition) -> SetPartition {
        let mut all: Vec<Vec<usize>> = self.blocks.clone();
        all.extend(other.blocks.iter().cloned());
        let mut ground: Vec<usize> = all.iter().flatten().copied().collect();
        ground.sort_unstable();
        ground.dedup();
        let idx = |x: usize| ground.binary_search(&x).unwrap();
        let mut uf = UnionFind::new(ground.len());
        for b in &all {
            for w in b.windows(2) {
                uf.union(idx(w[0]), idx(w[1]));
            }
        }
        let labels: Vec<usize> = (0..ground.len()).map(|i| uf.find(i)).collect();
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, l) in labels.into_iter().enumerate() {
            map.entry(l).or_default().push(ground[i]);
        }
        SetPartition::new(map.into_values().collect()).expect("join of valid partitions")
    }

    /// `self <= other` in the refinement order (same ground set assumed).
    pub fn refines(&self, other: &SetPartition) -> bool {
        self.blocks.iter().all(|b| {
            let t = other.block_of(b[0]);
            t.is_some() && b.iter().all(|&x| other.block_of(x) == t)
        })
    }

    /// No two blocks cross when the points are placed on a circle in order.
    pub fn is_noncrossing(&self) -> bool {
        let labels = self.standardize().labels();
        let n = labels.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if labels[a] == labels[c] && labels[b] == labels[d] && labels[a] != labels[b] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{{{}}}", blocks.join("|"))
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|x| x.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("partition `{s}` must be enclosed in braces")))?;
        if inner.trim().is_empty() {
            return Ok(SetPartition { blocks: Vec::new() });
        }
        let blocks = inner
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad point `{x}` in `{s}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SetPartition::new(blocks)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// Number of partitions of an `n`-element set.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Restricted growth strings of length `n`, lexicographic order.
fn restricted_growth(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(bell(n) as usize);
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut a = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        out.push(a.clone());
        // find rightmost position that can be incremented
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            if a[i] <= maxes[i - 1] {
                break;
            }
            i -= 1;
        }
        a[i] += 1;
        maxes[i] = maxes[i - 1].max(a[i]);
        for j in i + 1..n {
            a[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

static MEMO: [OnceLock<Arc<Vec<SetPartition>>>; MEMO_LIMIT + 1] = [const { OnceLock::new() }; MEMO_LIMIT + 1];

/// All `Bell(n)` partitions of `{1..n}` in restricted-growth order (the finest partition
/// first, the one-block partition last). Small sizes are computed once and shared.
pub fn enumerate_partitions(n: usize) -> Result<Arc<Vec<SetPartition>>> {
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge(n));
    }
    let build = || {
        let mut v: Vec<SetPartition> = restricted_growth(n)
            .iter()
            .map(|rgs| SetPartition::from_labels(rgs))
            .collect();
        // restricted-growth order puts the one-block partition first; present finest first
        v.reverse();
        Arc::new(v)
    };
    if n <= MEMO_LIMIT {
        Ok(MEMO[n].get_or_init(build).clone())
    } else {
        Ok(build())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_small() {
        let p1 = enumerate_partitions(1).unwrap();
        assert_eq!(p1.as_slice(), &[SetPartition::singletons(1)]);
        let p2 = enumerate_partitions(2).unwrap();
        assert_eq!(p2.len(), 2);
        assert_eq!(p2[0].to_string(), "{1|2}");
        assert_eq!(p2[1].to_string(), "{1,2}");
        assert_eq!(enumerate_partitions(4).unwrap().len(), 15);
        assert_eq!(enumerate_partitions(0).unwrap().len(), 1);
        assert!(matches!(enumerate_partitions(13), Err(Error::TooLarge(13))));
    }

    #[test]
    fn bell_numbers_match_enumeration() {
        for n in 0..=9 {
            let all = enumerate_partitions(n).unwrap();
            assert_eq!(all.len() as u64, bell(n));
            let distinct: std::collections::BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
        assert_eq!(bell(12), 4_213_597);
    }

    #[test]
    fn text_round_trip() {
        let p: SetPartition = "{1,3|2,5,7|4|6}".parse().unwrap();
        assert_eq!(p.num_blocks(), 4);
        assert_eq!(p.to_string(), "{1,3|2,5,7|4|6}");
        let q: SetPartition = "{ 6 | 4 | 7,2,5 | 3,1 }".parse().unwrap();
        assert_eq!(p, q);
        assert!("{1,1}".parse::<SetPartition>().is_err());
        assert!("1,2".parse::<SetPartition>().is_err());
    }

    #[test]
    fn join_and_refinement() {
        let a: SetPartition = "{1,2|3|4}".parse().unwrap();
        let b: SetPartition = "{1|2,3|4}".parse().unwrap();
        assert_eq!(a.join(&b).to_string(), "{1,2,3|4}");
        assert!(a.refines(&a.join(&b)));
        assert!(!a.join(&b).refines(&a));
    }

    #[test]
    fn standardize_relabels_in_order() {
        let p: SetPartition = "{5,7|6|8}".parse().unwrap();
        assert_eq!(p.standardize().to_string(), "{1,3|2|4}");
    }

    #[test]
    fn noncrossing_detection() {
        assert!("{1,4|2,3}".parse::<SetPartition>().unwrap().is_noncrossing());
        assert!(!"{1,3|2,4}".parse::<SetPartition>().unwrap().is_noncrossing());
        let nc = enumerate_partitions(5).unwrap().iter().filter(|p| p.is_noncrossing()).count();
        assert_eq!(nc, 42); // Catalan(5)
    }
}
