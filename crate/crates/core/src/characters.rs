//! Irreducible characters of symmetric groups, central characters and canonical measures.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugacy::CycleTypeIndex;
use crate::diagrams::{diagrams_of_size, YoungDiagram};
use crate::error::{Error, Result};
use crate::num::{factorial, falling_rat, Rational};

/// Largest `q` for which full character tables and canonical measures are computed.
pub const EXACT_CEILING: usize = 14;

/// Environment variable naming the directory of the on-disk character table cache.
pub const CACHE_DIR_ENV: &str = "CHARFLUCT_CACHE_DIR";

const CACHE_VERSION: u32 = 1;

/// `q! / Π hooks`.
pub fn dimension(lambda: &YoungDiagram) -> BigInt {
    let hooks = lambda.hook_lengths().iter().fold(BigInt::one(), |acc, &h| acc * BigInt::from(h));
    factorial(lambda.size()) / hooks
}

type MnCache = RwLock<HashMap<(Vec<usize>, Vec<usize>), BigInt>>;

fn mn_cache() -> &'static MnCache {
    static CACHE: OnceLock<MnCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `χ^λ(ρ)` by border-strip removal. `rho` lists cycle lengths in any order.
pub fn mn_character(lambda: &YoungDiagram, rho: &[usize]) -> Result<BigInt> {
    let total: usize = rho.iter().sum();
    if total != lambda.size() {
        return Err(Error::SizeMismatch(format!("χ^{lambda} evaluated on a class of S_{total}")));
    }
    let mut parts: Vec<usize> = rho.iter().copied().filter(|&r| r > 0).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(mn_rec(lambda.rows(), &parts))
}

fn mn_rec(lambda: &[usize], rho: &[usize]) -> BigInt {
    if rho.is_empty() {
        return BigInt::one();
    }
    if rho[0] == 1 {
        return dimension(&YoungDiagram::new(lambda.to_vec()).expect("valid rows"));
    }
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(v) = mn_cache().read().unwrap().get(&key) {
        return v.clone();
    }
    let r = rho[0];
    let n = lambda.len();
    let beads: Vec<usize> = lambda.iter().enumerate().map(|(i, &l)| l + n - 1 - i).collect();
    let mut total = BigInt::zero();
    for (i, &b) in beads.iter().enumerate() {
        if b < r || beads.contains(&(b - r)) {
            continue;
        }
        let height = beads.iter().filter(|&&c| c > b - r && c < b).count();
        let mut next = beads.clone();
        next[i] = b - r;
        next.sort_unstable_by(|x, y| y.cmp(x));
        let shape: Vec<usize> = next.iter().enumerate().map(|(j, &c)| c - (n - 1 - j)).filter(|&l| l > 0).collect();
        let v = mn_rec(&shape, &rho[1..]);
        if height % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    mn_cache().write().unwrap().insert(key, total.clone());
    total
}

/// `z_ρ = Π_i i^{m_i} m_i!`.
pub fn centralizer_size(rho: &[usize]) -> BigInt {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in rho {
        *counts.entry(r).or_default() += 1;
    }
    counts.iter().fold(BigInt::one(), |acc, (&i, &m)| acc * num_traits::pow(BigInt::from(i), m) * factorial(m))
}

/// Number of permutations of cycle type `ρ` in `S_q`.
pub fn class_size(rho: &[usize]) -> BigInt {
    factorial(rho.iter().sum()) / centralizer_size(rho)
}

/// Full character table of `S_q`: rows indexed by diagrams, columns by cycle types, both in
/// the order of [`diagrams_of_size`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    pub q: usize,
    pub diagrams: Vec<YoungDiagram>,
    pub classes: Vec<Vec<usize>>,
    pub values: Vec<Vec<BigInt>>,
    pub class_sizes: Vec<BigInt>,
}

impl CharacterTable {
    fn compute(q: usize) -> CharacterTable {
        let diagrams = diagrams_of_size(q);
        let classes: Vec<Vec<usize>> = diagrams.iter().map(|d| d.rows().to_vec()).collect();
        let values = diagrams
            .par_iter()
            .map(|l| classes.iter().map(|rho| mn_character(l, rho).expect("sizes agree")).collect())
            .collect();
        let class_sizes = classes.iter().map(|c| class_size(c)).collect();
        CharacterTable { q, diagrams, classes, values, class_sizes }
    }

    pub fn diagram_index(&self, lambda: &YoungDiagram) -> Option<usize> {
        self.diagrams.iter().position(|d| d == lambda)
    }

    pub fn class_index(&self, rho: &[usize]) -> Option<usize> {
        let mut sorted = rho.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        self.classes.iter().position(|c| *c == sorted)
    }

    pub fn dimension(&self, i: usize) -> &BigInt {
        // the identity class is the last column
        &self.values[i][self.classes.len() - 1]
    }
}

#[derive(Serialize, Deserialize)]
struct CachedTable {
    version: u32,
    q: usize,
    diagrams: Vec<String>,
    values: Vec<Vec<String>>,
}

impl CachedTable {
    fn from_table(t: &CharacterTable) -> Self {
        CachedTable {
            version: CACHE_VERSION,
            q: t.q,
            diagrams: t.diagrams.iter().map(ToString::to_string).collect(),
            values: t.values.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect(),
        }
    }

    fn into_table(self, q: usize) -> Option<CharacterTable> {
        if self.version != CACHE_VERSION || self.q != q {
            return None;
        }
        let diagrams = diagrams_of_size(q);
        let names: Vec<String> = diagrams.iter().map(ToString::to_string).collect();
        if names != self.diagrams {
            return None;
        }
        let values = self
            .values
            .iter()
            .map(|row| row.iter().map(|v| v.parse::<BigInt>().ok()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let classes: Vec<Vec<usize>> = diagrams.iter().map(|d| d.rows().to_vec()).collect();
        let class_sizes = classes.iter().map(|c| class_size(c)).collect();
        Some(CharacterTable { q, diagrams, classes, values, class_sizes })
    }
}

fn cache_file(q: usize) -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(|d| PathBuf::from(d).join(format!("character-table-v{CACHE_VERSION}-q{q}.json")))
}

fn read_cached(q: usize) -> Option<CharacterTable> {
    let text = std::fs::read_to_string(cache_file(q)?).ok()?;
    serde_json::from_str::<CachedTable>(&text).ok()?.into_table(q)
}

fn write_cached(t: &CharacterTable) -> Result<()> {
    let Some(path) = cache_file(t.q) else { return Ok(()) };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let text = serde_json::to_string(&CachedTable::from_table(t)).map_err(|e| Error::Io(e.to_string()))?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, &path)?;
    Ok(())
}

type TableCache = RwLock<HashMap<usize, Arc<CharacterTable>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Character table of `S_q` for `q <= EXACT_CEILING`, memoized in memory and, when
/// `CHARFLUCT_CACHE_DIR` is set, on disk.
pub fn character_table(q: usize) -> Result<Arc<CharacterTable>> {
    if q > EXACT_CEILING {
        return Err(Error::ExactBound { q, ceiling: EXACT_CEILING });
    }
    if let Some(t) = table_cache().read().unwrap().get(&q) {
        return Ok(t.clone());
    }
    let table = match read_cached(q) {
        Some(t) => t,
        None => {
            let t = CharacterTable::compute(q);
            write_cached(&t)?;
            t
        }
    };
    let table = Arc::new(table);
    table_cache().write().unwrap().insert(q, table.clone());
    Ok(table)
}

/// `χ^λ(k ∪ 1^{q-|k|}) / dim λ` for a cycle type `k` with `|k| <= q`.
pub fn normalized_character(lambda: &YoungDiagram, k: &CycleTypeIndex) -> Result<Rational> {
    let q = lambda.size();
    if k.moved_points() > q {
        return Err(Error::SizeMismatch(format!("cycle type {k} does not fit in S_{q}")));
    }
    let chi = mn_character(lambda, &k.padded(q))?;
    Ok(Rational::new(chi, dimension(lambda)))
}

/// Scalar by which `Σ_k` acts on the irreducible representation `λ`:
/// `q↓|k| · χ^λ(k ∪ 1^{q-|k|}) / dim λ`, zero when `|k| > q`.
pub fn central_eigenvalue(k: &CycleTypeIndex, lambda: &YoungDiagram) -> Rational {
    let q = lambda.size();
    if k.size() > q {
        return Rational::zero();
    }
    falling_rat(q, k.size()) * normalized_character(lambda, k).expect("fits")
}

/// `Σ_l(λ)` for a single cycle, from the profile corners:
/// `-(1/l) [w^{l+1}] Π_{j=0}^{l-1} Π_i (1-(x_i+j)w) / Π_i (1-(y_i+j)w)`.
///
/// Polynomial in the corners, so it stays cheap for diagrams far beyond the exact ceiling.
pub fn cycle_eigenvalue(l: usize, lambda: &YoungDiagram) -> Rational {
    let p = lambda.profile();
    let order = l + 1;
    let mut series = vec![BigInt::zero(); order + 1];
    series[0] = BigInt::one();
    for j in 0..l as i64 {
        for &x in &p.minima {
            // multiply by (1 - (x + j) w)
            let a = BigInt::from(x + j);
            for d in (1..=order).rev() {
                let t = &series[d - 1] * &a;
                series[d] -= t;
            }
        }
        for &y in &p.maxima {
            // divide by (1 - (y + j) w)
            let a = BigInt::from(y + j);
            for d in 1..=order {
                let t = &series[d - 1] * &a;
                series[d] += t;
            }
        }
    }
    -Rational::new(series[order].clone(), BigInt::from(l))
}

/// Probability measure on diagrams with `q` boxes, all entries exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalMeasure {
    pub q: usize,
    pub probabilities: Vec<(YoungDiagram, Rational)>,
}

impl CanonicalMeasure {
    pub fn probability(&self, lambda: &YoungDiagram) -> Rational {
        self.probabilities.iter().find(|(d, _)| d == lambda).map(|(_, p)| p.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn expectation(&self, mut f: impl FnMut(&YoungDiagram) -> Rational) -> Rational {
        self.probabilities.iter().filter(|(_, p)| !p.is_zero()).fold(Rational::zero(), |acc, (d, p)| acc + p * f(d))
    }

    /// The measure as a distribution over the given support, used by frequency tests.
    pub fn support(&self) -> impl Iterator<Item = &(YoungDiagram, Rational)> {
        self.probabilities.iter().filter(|(_, p)| !p.is_zero())
    }
}

/// `P(λ) = (dim λ / q!) Σ_ρ |C_ρ| χ̂(ρ) χ^λ(ρ)` for a normalized character `χ̂` of a
/// representation of `S_q`, given on nontrivial cycle types.
pub fn canonical_measure(q: usize, character: impl Fn(&CycleTypeIndex) -> Result<Rational>) -> Result<CanonicalMeasure> {
    let table = character_table(q)?;
    let chi_hat: Vec<Rational> = table
        .classes
        .iter()
        .map(|c| character(&CycleTypeIndex::new(c.clone()).expect("positive").nontrivial()))
        .collect::<Result<_>>()?;
    let qf = Rational::from_integer(factorial(q));
    let mut probabilities = Vec::with_capacity(table.diagrams.len());
    let mut total = Rational::zero();
    for (i, lambda) in table.diagrams.iter().enumerate() {
        let inner = table.classes.iter().enumerate().fold(Rational::zero(), |acc, (j, _)| {
            acc + Rational::from_integer(&table.class_sizes[j] * &table.values[i][j]) * &chi_hat[j]
        });
        let p = Rational::from_integer(table.dimension(i).clone()) * inner / &qf;
        if p.is_negative() {
            return Err(Error::NegativeMultiplicity { diagram: lambda.to_string() });
        }
        total += &p;
        probabilities.push((lambda.clone(), p));
    }
    if total != Rational::one() {
        return Err(Error::InvalidModel(format!("canonical measure at q = {q} has total mass {total}")));
    }
    Ok(CanonicalMeasure { q, probabilities })
}

/// Classical cumulant of the random variables `λ ↦ Σ_{k_i}(λ)` under a measure.
pub fn eigenvalue_cumulant(measure: &CanonicalMeasure, args: &[CycleTypeIndex]) -> Result<Rational> {
    let values: Vec<(Rational, Vec<Rational>)> = measure
        .support()
        .map(|(d, p)| (p.clone(), args.iter().map(|k| central_eigenvalue(k, d)).collect()))
        .collect();
    let table = crate::cumulants::moments_to_cumulants(
        args.len(),
        |s| values.iter().fold(Rational::zero(), |acc, (p, v)| acc + s.iter().fold(p.clone(), |x, &i| x * &v[i])),
        &crate::cumulants::Scalars,
    )?;
    Ok(table.full().clone())
}

/// `Σ_λ (dim λ)^2`, which equals `q!`.
pub fn sum_of_squared_dimensions(q: usize) -> BigInt {
    diagrams_of_size(q).iter().map(|d| {
        let x = dimension(d);
        &x * &x
    }).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn yd(s: &str) -> YoungDiagram {
        s.parse().unwrap()
    }

    fn ct(s: &str) -> CycleTypeIndex {
        s.parse().unwrap()
    }

    #[test]
    fn s3_character_table() {
        assert_eq!(mn_character(&yd("2+1"), &[3]).unwrap(), BigInt::from(-1));
        assert_eq!(mn_character(&yd("2+1"), &[2, 1]).unwrap(), BigInt::from(0));
        assert_eq!(mn_character(&yd("1+1+1"), &[2, 1]).unwrap(), BigInt::from(-1));
        assert_eq!(dimension(&yd("2+1")), BigInt::from(2));
        assert!(mn_character(&yd("2+1"), &[2]).is_err());
    }

    #[test]
    fn trivial_character_and_burnside() {
        for q in 1..=10 {
            for d in diagrams_of_size(q) {
                assert_eq!(mn_character(&YoungDiagram::new(vec![q]).unwrap(), d.rows()).unwrap(), BigInt::one());
            }
            assert_eq!(sum_of_squared_dimensions(q), factorial(q));
        }
    }

    #[test]
    fn dimension_matches_identity_column() {
        let t = character_table(7).unwrap();
        for (i, d) in t.diagrams.iter().enumerate() {
            assert_eq!(*t.dimension(i), dimension(d));
        }
    }

    #[test]
    fn column_orthogonality() {
        let t = character_table(6).unwrap();
        let qf = Rational::from_integer(factorial(6));
        for a in 0..t.classes.len() {
            for b in 0..t.classes.len() {
                let s = (0..t.diagrams.len()).fold(BigInt::zero(), |acc, i| acc + &t.values[i][a] * &t.values[i][b]);
                let v = Rational::from_integer(s * &t.class_sizes[a]) / &qf;
                assert_eq!(v, if a == b { rat(1) } else { rat(0) });
            }
        }
    }

    #[test]
    fn central_eigenvalue_examples() {
        for d in diagrams_of_size(5) {
            assert_eq!(central_eigenvalue(&ct("1"), &d), rat(5));
            assert_eq!(central_eigenvalue(&ct("1+1+1"), &d), rat(60));
        }
        assert_eq!(central_eigenvalue(&ct("2"), &yd("2+1")), rat(0));
    }

    #[test]
    fn cycle_eigenvalue_matches_characters() {
        for q in 1..=8 {
            for d in diagrams_of_size(q) {
                for l in 1..=q + 1 {
                    assert_eq!(cycle_eigenvalue(l, &d), central_eigenvalue(&CycleTypeIndex::cycle(l), &d), "{d} l={l}");
                }
            }
        }
    }

    #[test]
    fn measures() {
        let regular = canonical_measure(4, |k| Ok(if k.is_empty() { rat(1) } else { rat(0) })).unwrap();
        for (d, p) in &regular.probabilities {
            let dim = Rational::from_integer(dimension(d));
            assert_eq!(*p, &dim * &dim / rat(24));
        }
        let tensor = canonical_measure(2, |k| Ok(Rational::new(1.into(), BigInt::from(2).pow(k.transposition_length() as u32)))).unwrap();
        assert_eq!(tensor.probability(&yd("2")), crate::num::frac(3, 4));
        assert_eq!(tensor.probability(&yd("1+1")), crate::num::frac(1, 4));
        let single = canonical_measure(5, |k| normalized_character(&yd("3+2"), k)).unwrap();
        assert_eq!(single.probability(&yd("3+2")), rat(1));
        assert!(matches!(canonical_measure(15, |_| Ok(rat(1))), Err(Error::ExactBound { .. })));
        assert!(matches!(canonical_measure(3, |k| Ok(if k.is_empty() { rat(1) } else { rat(-1) })), Err(Error::NegativeMultiplicity { .. })));
    }

    #[test]
    fn disk_cache_round_trip() {
        let t = CharacterTable::compute(5);
        let cached = CachedTable::from_table(&t);
        let text = serde_json::to_string(&cached).unwrap();
        let back: CachedTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_table(5).unwrap(), t);
        let stale = CachedTable { version: CACHE_VERSION + 1, ..CachedTable::from_table(&t) };
        assert!(stale.into_table(5).is_none());
    }
}
