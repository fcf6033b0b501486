//! Permutations, partial permutations and their semigroup algebra.
//!
//! A [`PartialPermutation`] is a pair `(support, word)`: the word is a bijection of the
//! positive integers that is the identity outside the support. Points of the support may be
//! fixed by the word; they still count as cycles of length one. Two products live on the
//! algebra of finite rational combinations of partial permutations:
//!
//! - the group product `(d1, w1)(d2, w2) = (d1 ∪ d2, w1 w2)`, see [`AlgebraElement::mul`];
//! - the disjoint product, equal to the group product when the supports are disjoint and zero
//!   otherwise, see [`AlgebraElement::disjoint_mul`].
//!
//! Composition is right to left: `(a ∘ b)(x) = a(b(x))`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::num::{format_rational, parse_rational, Rational};

/// A permutation of `{1..q}` in one-line form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(q: usize) -> Self {
        Permutation { images: (1..=q as u32).collect() }
    }

    /// `one_line[i]` is the image of `i + 1`.
    pub fn from_one_line(one_line: Vec<usize>) -> Result<Self> {
        let q = one_line.len();
        let mut seen = vec![false; q + 1];
        for &x in &one_line {
            if x == 0 || x > q || seen[x] {
                return Err(Error::Parse(format!("{one_line:?} is not a bijection of 1..{q}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: one_line.into_iter().map(|x| x as u32).collect() })
    }

    pub fn from_cycles(q: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=q).collect();
        let mut used = vec![false; q + 1];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x > q || used[x] {
                    return Err(Error::Parse(format!("bad cycle {cycle:?} for q = {q}")));
                }
                used[x] = true;
                images[x - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_one_line(images)
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    /// `self ∘ other`, applying `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size(), "composing permutations of different sizes");
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize - 1]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.size()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize - 1] = i as u32 + 1;
        }
        Permutation { images: inv }
    }

    /// Cycles including fixed points, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let q = self.size();
        let mut seen = vec![false; q + 1];
        let mut out = Vec::new();
        for start in 1..=q {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Minimal number of transpositions whose product is this permutation.
    pub fn length(&self) -> usize {
        self.size() - self.cycles().len()
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

/// A partial permutation `(support, word)`.
///
/// Stored as the sorted support together with the images of the support points, so that
/// structural equality is equality of partial permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPermutation {
    support: Vec<u32>,
    images: Vec<u32>,
}

impl PartialPermutation {
    /// The identity with the given support; every support point is a cycle of length one.
    pub fn identity_on<I: IntoIterator<Item = usize>>(support: I) -> Self {
        let set: BTreeSet<u32> = support.into_iter().map(|x| x as u32).collect();
        let support: Vec<u32> = set.into_iter().collect();
        PartialPermutation { images: support.clone(), support }
    }

    /// The empty partial permutation, unit of both products.
    pub fn empty() -> Self {
        PartialPermutation { support: Vec::new(), images: Vec::new() }
    }

    /// Builds `(support, word)` from disjoint cycles of the word; the cycles must lie inside
    /// the support.
    pub fn from_cycles<I: IntoIterator<Item = usize>>(support: I, cycles: &[Vec<usize>]) -> Result<Self> {
        let set: BTreeSet<u32> = support.into_iter().map(|x| x as u32).collect();
        if set.contains(&0) {
            return Err(Error::Parse("points are positive integers".into()));
        }
        let support: Vec<u32> = set.into_iter().collect();
        let mut map: HashMap<u32, u32> = HashMap::new();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let x = x as u32;
                let y = cycle[(i + 1) % cycle.len()] as u32;
                if support.binary_search(&x).is_err() {
                    return Err(Error::Parse(format!("cycle point {x} outside the support")));
                }
                if map.insert(x, y).is_some() {
                    return Err(Error::Parse(format!("point {x} appears twice in {cycles:?}")));
                }
            }
        }
        let images = support.iter().map(|x| *map.get(x).unwrap_or(x)).collect();
        Ok(PartialPermutation { support, images })
    }

    /// Builds from `(point, image)` pairs that together form a bijection of their point set.
    pub(crate) fn from_sorted_pairs(pairs: Vec<(u32, u32)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        let (support, images) = pairs.into_iter().unzip();
        PartialPermutation { support, images }
    }

    pub fn support(&self) -> Vec<usize> {
        self.support.iter().map(|&x| x as usize).collect()
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        match self.support.binary_search(&(x as u32)) {
            Ok(i) => self.images[i] as usize,
            Err(_) => x,
        }
    }

    pub fn is_disjoint(&self, other: &PartialPermutation) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.support.len() && j < other.support.len() {
            match self.support[i].cmp(&other.support[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// `self ∘ other`: support is the union, word is the composition (apply `other` first).
    pub fn compose(&self, other: &PartialPermutation) -> PartialPermutation {
        let mut support: Vec<u32> = Vec::with_capacity(self.support.len() + other.support.len());
        let (mut i, mut j) = (0, 0);
        while i < self.support.len() || j < other.support.len() {
            let next = match (self.support.get(i), other.support.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    i += 1;
                    j += 1;
                    a
                }
                (Some(&a), Some(&b)) if a < b => {
                    i += 1;
                    a
                }
                (Some(_), Some(&b)) => {
                    j += 1;
                    b
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, Some(&b)) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            support.push(next);
        }
        let images = support
            .iter()
            .map(|&x| self.apply(other.apply(x as usize)) as u32)
            .collect();
        PartialPermutation { support, images }
    }

    /// Disjoint product: `Some(self ∘ other)` if the supports are disjoint.
    pub fn disjoint_compose(&self, other: &PartialPermutation) -> Option<PartialPermutation> {
        self.is_disjoint(other).then(|| self.compose(other))
    }

    /// Cycles of the word restricted to the support, smallest element first, including
    /// length-one cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.support.len()];
        let mut out = Vec::new();
        for (i, &start) in self.support.iter().enumerate() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            let mut cycle = vec![start as usize];
            let mut x = self.images[i];
            while x != start {
                let k = self.support.binary_search(&x).expect("image inside support");
                seen[k] = true;
                cycle.push(x as usize);
                x = self.images[k];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths sorted descending; they sum to the support size.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Cycle notation with one-cycles shown, e.g. `(1 2)(3)`; `()` for the empty support.
    pub fn cycle_notation(&self) -> String {
        if self.support.is_empty() {
            return "()".into();
        }
        self.cycles()
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(ToString::to_string).collect();
                format!("({})", inner.join(" "))
            })
            .collect()
    }

    /// Parses cycle notation where every support point appears, e.g. `(1 2)(3)`.
    pub fn parse_cycle_notation(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "()" || s.is_empty() {
            return Ok(PartialPermutation::empty());
        }
        let mut cycles = Vec::new();
        for chunk in s.split(')') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("bad cycle notation `{s}`")))?;
            let cycle = body
                .split([' ', ','])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad point `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
        }
        let support: Vec<usize> = cycles.iter().flatten().copied().collect();
        PartialPermutation::from_cycles(support, &cycles)
    }
}

impl fmt::Display for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<String> = self.support.iter().map(ToString::to_string).collect();
        write!(f, "({{{}}}, {})", support.join(","), self.cycle_notation())
    }
}

/// A finite rational linear combination of partial permutations. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: HashMap<PartialPermutation, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    /// The unit of both products: the empty partial permutation.
    pub fn one() -> Self {
        AlgebraElement::from_term(PartialPermutation::empty(), Rational::one())
    }

    pub fn from_term(p: PartialPermutation, c: Rational) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(p, c);
        e
    }

    /// Builds from integer multiplicities, the fast path for class sums.
    pub fn from_counts(counts: HashMap<PartialPermutation, i64>) -> Self {
        let terms = counts
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(p, c)| (p, Rational::from_integer(BigInt::from(c))))
            .collect();
        AlgebraElement { terms }
    }

    pub fn add_term(&mut self, p: PartialPermutation, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(p) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &PartialPermutation) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PartialPermutation, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(p, x)| (p.clone(), x * c)).collect() }
    }

    fn bilinear(&self, other: &AlgebraElement, op: impl Fn(&PartialPermutation, &PartialPermutation) -> Option<PartialPermutation>) -> AlgebraElement {
        // Accumulate integer products separately; almost every coefficient here is an integer.
        let all_integer = self.terms.values().chain(other.terms.values()).all(|c| c.is_integer());
        if all_integer {
            let mut acc: HashMap<PartialPermutation, BigInt> = HashMap::new();
            for (a, ca) in &self.terms {
                for (b, cb) in &other.terms {
                    if let Some(p) = op(a, b) {
                        *acc.entry(p).or_insert_with(BigInt::zero) += ca.numer() * cb.numer();
                    }
                }
            }
            let terms = acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, c)| (p, Rational::from_integer(c)))
                .collect();
            return AlgebraElement { terms };
        }
        let mut out = AlgebraElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(p) = op(a, b) {
                    out.add_term(p, ca * cb);
                }
            }
        }
        out
    }

    /// Group product, extended bilinearly.
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        self.bilinear(other, |a, b| Some(a.compose(b)))
    }

    /// Disjoint product, extended bilinearly.
    pub fn disjoint_mul(&self, other: &AlgebraElement) -> AlgebraElement {
        self.bilinear(other, |a, b| a.disjoint_compose(b))
    }

    /// Canonical JSON form: terms sorted by support then cycle notation, coefficients as `p/q`.
    pub fn to_canonical_json(&self) -> Value {
        let mut rows: Vec<(&PartialPermutation, &Rational)> = self.terms.iter().collect();
        rows.sort_by(|a, b| a.0.support.cmp(&b.0.support).then_with(|| a.0.cycle_notation().cmp(&b.0.cycle_notation())));
        let terms: Vec<Value> = rows
            .into_iter()
            .map(|(p, c)| {
                json!({
                    "support": p.support(),
                    "cycles": p.cycle_notation(),
                    "coefficient": format_rational(c),
                })
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_canonical_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("algebra element json: {m}"));
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))?;
        let mut out = AlgebraElement::zero();
        for t in terms {
            let support: Vec<usize> = t
                .get("support")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing support"))?
                .iter()
                .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad("support entry")))
                .collect::<Result<_>>()?;
            let cycles = t.get("cycles").and_then(Value::as_str).ok_or_else(|| bad("missing cycles"))?;
            let coeff = t.get("coefficient").and_then(Value::as_str).ok_or_else(|| bad("missing coefficient"))?;
            let p = PartialPermutation::parse_cycle_notation(cycles)?;
            if p.support() != support {
                return Err(bad("support does not match cycles"));
            }
            out.add_term(p, parse_rational(coeff)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use proptest::prelude::*;

    fn pp(support: &[usize], cycles: &[&[usize]]) -> PartialPermutation {
        let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        PartialPermutation::from_cycles(support.iter().copied(), &cycles).unwrap()
    }

    #[test]
    fn compose_disjoint_supports_concatenate() {
        let a = pp(&[1, 2], &[&[1, 2]]);
        let b = PartialPermutation::identity_on([3]);
        assert_eq!(a.compose(&b), pp(&[1, 2, 3], &[&[1, 2]]));
    }

    #[test]
    fn compose_involution_keeps_support() {
        let a = pp(&[1, 2], &[&[1, 2]]);
        let c = a.compose(&a);
        assert_eq!(c, PartialPermutation::identity_on([1, 2]));
        assert_eq!(c.support(), vec![1, 2]);
        assert_eq!(c.cycle_type(), vec![1, 1]);
    }

    #[test]
    fn compose_three_cycle_with_transposition() {
        let a = pp(&[1, 2, 3], &[&[1, 2, 3]]);
        let b = pp(&[1, 2], &[&[1, 2]]);
        assert_eq!(a.compose(&b), pp(&[1, 2, 3], &[&[1, 3]]));
    }

    #[test]
    fn disjoint_product_cases() {
        let one = |x| AlgebraElement::from_term(PartialPermutation::identity_on([x]), rat(1));
        assert_eq!(one(1).disjoint_mul(&one(2)), AlgebraElement::from_term(PartialPermutation::identity_on([1, 2]), rat(1)));
        assert!(one(1).disjoint_mul(&one(1)).is_zero());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(pp(&[1, 2, 3], &[&[1, 2]]).cycle_type(), vec![2, 1]);
        assert_eq!(PartialPermutation::empty().cycle_type(), Vec::<usize>::new());
        assert_eq!(pp(&[1, 2, 3, 4, 5], &[&[1, 2, 3], &[4, 5]]).cycle_type(), vec![3, 2]);
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = pp(&[1, 2, 3, 7], &[&[1, 7], &[2, 3]]);
        assert_eq!(p.cycle_notation(), "(1 7)(2 3)");
        let q = pp(&[2, 5], &[]);
        assert_eq!(q.cycle_notation(), "(2)(5)");
        assert_eq!(PartialPermutation::parse_cycle_notation("(1 7)(2 3)").unwrap(), p);
        assert_eq!(PartialPermutation::parse_cycle_notation("()").unwrap(), PartialPermutation::empty());
    }

    #[test]
    fn json_golden() {
        let mut e = AlgebraElement::zero();
        e.add_term(pp(&[1, 2], &[&[1, 2]]), crate::num::frac(1, 2));
        e.add_term(PartialPermutation::identity_on([3]), rat(-2));
        let v = e.to_canonical_json();
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(
            text,
            r#"{"terms":[{"coefficient":"1/2","cycles":"(1 2)","support":[1,2]},{"coefficient":"-2","cycles":"(3)","support":[3]}]}"#
        );
        assert_eq!(AlgebraElement::from_canonical_json(&v).unwrap(), e);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = PartialPermutation::identity_on([1]);
        let mut e = AlgebraElement::from_term(p.clone(), rat(3));
        e.add_term(p, rat(-3));
        assert!(e.is_zero());
        assert!(AlgebraElement::one().scale(&rat(0)).is_zero());
    }

    #[test]
    fn transposition_length_is_subadditive_on_small_groups() {
        for q in 1..=5 {
            let perms = all_permutations(q);
            for a in &perms {
                assert_eq!(a.length(), q - a.cycles().len());
                for b in &perms {
                    assert!(a.compose(b).length() <= a.length() + b.length());
                }
            }
        }
    }

    #[test]
    fn transposition_length_subadditive_s6_sampled() {
        let perms = all_permutations(6);
        for (i, a) in perms.iter().enumerate().step_by(7) {
            for b in perms.iter().skip(i % 5).step_by(11) {
                assert!(a.compose(b).length() <= a.length() + b.length());
            }
        }
    }

    pub(crate) fn all_permutations(q: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Permutation>) {
            if rest.is_empty() {
                out.push(Permutation::from_one_line(prefix.clone()).unwrap());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                prefix.push(x);
                rec(prefix, rest, out);
                prefix.pop();
                rest.insert(i, x);
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut (1..=q).collect(), &mut out);
        out
    }

    fn arb_partial(ground: usize) -> impl Strategy<Value = PartialPermutation> {
        (proptest::collection::vec(any::<bool>(), ground), any::<u64>()).prop_map(move |(mask, seed)| {
            let support: Vec<usize> = (1..=ground).filter(|&i| mask[i - 1]).collect();
            // deterministic shuffle of the support from the seed
            let mut images = support.clone();
            let mut s = seed;
            for i in (1..images.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (s >> 33) as usize % (i + 1);
                images.swap(i, j);
            }
            let pairs = support.iter().zip(images.iter()).map(|(&a, &b)| (a as u32, b as u32)).collect();
            PartialPermutation::from_sorted_pairs(pairs)
        })
    }

    proptest! {
        #[test]
        fn group_product_associative(a in arb_partial(6), b in arb_partial(6), c in arb_partial(6)) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn disjoint_product_associative(a in arb_partial(7), b in arb_partial(7), c in arb_partial(7)) {
            let ea = AlgebraElement::from_term(a, rat(1));
            let eb = AlgebraElement::from_term(b, rat(2));
            let ec = AlgebraElement::from_term(c, rat(3));
            prop_assert_eq!(ea.disjoint_mul(&eb).disjoint_mul(&ec), ea.disjoint_mul(&eb.disjoint_mul(&ec)));
        }

        #[test]
        fn overlap_kills_disjoint_product(a in arb_partial(5), b in arb_partial(5)) {
            let d = AlgebraElement::from_term(a.clone(), rat(1)).disjoint_mul(&AlgebraElement::from_term(b.clone(), rat(1)));
            prop_assert_eq!(d.is_zero(), !a.is_disjoint(&b));
            prop_assert_eq!(a.compose(&b).support_len() >= a.support_len().max(b.support_len()), true);
        }

        #[test]
        fn cycle_type_sums_to_support(a in arb_partial(8)) {
            prop_assert_eq!(a.cycle_type().iter().sum::<usize>(), a.support_len());
        }
    }
}
