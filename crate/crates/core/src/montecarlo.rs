//! Sampling canonical measures at large `q` and estimating the cumulants of diagram
//! observables.
//!
//! Sample `i` of a batch is drawn from `ChaCha8Rng` seeded with the master seed and set to
//! stream `i`, so a batch does not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::characters::{cycle_eigenvalue, CanonicalMeasure};
use crate::diagrams::YoungDiagram;
use crate::error::{Error, Result};
use crate::models::{predicted_limits, RepresentationModel, SamplerKind};
use crate::num::to_f64;

/// Shape of the RSK insertion tableau of a sequence. Each value bumps the leftmost entry
/// strictly greater than it, so repeated letters stay in one row.
pub fn rsk_shape(sequence: impl IntoIterator<Item = u32>) -> YoungDiagram {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for mut x in sequence {
        let mut placed = false;
        for row in rows.iter_mut() {
            let pos = row.partition_point(|&y| y <= x);
            if pos == row.len() {
                row.push(x);
                placed = true;
                break;
            }
            std::mem::swap(&mut row[pos], &mut x);
        }
        if !placed {
            rows.push(vec![x]);
        }
    }
    YoungDiagram::from_unsorted(rows.iter().map(Vec::len).collect())
}

/// RSK shape of a uniform permutation of `q` letters.
pub fn sample_plancherel<R: Rng + ?Sized>(q: usize, rng: &mut R) -> YoungDiagram {
    let mut perm: Vec<u32> = (0..q as u32).collect();
    perm.shuffle(rng);
    rsk_shape(perm)
}

/// RSK shape of a uniform word of length `q` over an alphabet of size `d`.
pub fn sample_schur_weyl<R: Rng + ?Sized>(q: usize, d: u64, rng: &mut R) -> YoungDiagram {
    assert!(d >= 1, "alphabet must be nonempty");
    let d = u32::try_from(d).expect("alphabet fits in u32");
    rsk_shape((0..q).map(|_| rng.random_range(0..d)))
}

pub fn sample_diagram<R: Rng + ?Sized>(kind: SamplerKind, q: usize, rng: &mut R) -> YoungDiagram {
    match kind {
        SamplerKind::UniformPermutation => sample_plancherel(q, rng),
        SamplerKind::UniformWord { alphabet } => sample_schur_weyl(q, alphabet, rng),
    }
}

/// Generator for sample `index` of a batch with master seed `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A function of a diagram evaluated on every sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    /// Free cumulant `R_m`, `m >= 2`.
    FreeCumulant(usize),
    /// `Σ_l(λ)` for a single cycle of length `l >= 1`.
    Cycle(usize),
    /// `p̃_n`, `n >= 2`.
    PowerSum(u32),
}

impl Observable {
    /// Homogeneous degree in the diagram, which fixes the scaling of the mean.
    pub fn degree(&self) -> usize {
        match *self {
            Observable::FreeCumulant(m) => m,
            Observable::Cycle(l) => l + 1,
            Observable::PowerSum(n) => n as usize,
        }
    }

    pub fn evaluate(&self, lambda: &YoungDiagram) -> f64 {
        match *self {
            Observable::FreeCumulant(m) => to_f64(&lambda.free_cumulants(m)[m]),
            Observable::Cycle(l) => to_f64(&cycle_eigenvalue(l, lambda)),
            Observable::PowerSum(n) => to_f64(&lambda.p_tilde(n)),
        }
    }

    /// Index `l` with `R_{l+1}` or `Σ_l` in the predicted-limit formulas.
    fn limit_index(&self) -> Option<usize> {
        match *self {
            Observable::FreeCumulant(m) => Some(m - 1),
            Observable::Cycle(l) => Some(l),
            Observable::PowerSum(_) => None,
        }
    }

    fn predicted_mean(&self, model: &RepresentationModel) -> Option<f64> {
        match *self {
            Observable::PowerSum(2) => Some(2.0),
            _ => self.limit_index().and_then(|l| predicted_limits(model, &[l]).ok()).map(|x| to_f64(&x)),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::FreeCumulant(m) => write!(f, "R{m}"),
            Observable::Cycle(l) => write!(f, "Sigma{l}"),
            Observable::PowerSum(n) => write!(f, "ptilde{n}"),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown observable `{s}` (expected R<m>, Sigma<l> or ptilde<n>)"));
        let (make, rest): (fn(usize) -> Option<Observable>, &str) = if let Some(r) = s.strip_prefix("Sigma") {
            (|l| (l >= 1).then_some(Observable::Cycle(l)), r)
        } else if let Some(r) = s.strip_prefix("ptilde") {
            (|n| (n >= 2).then_some(Observable::PowerSum(n as u32)), r)
        } else if let Some(r) = s.strip_prefix('R') {
            (|m| (m >= 2).then_some(Observable::FreeCumulant(m)), r)
        } else {
            return Err(bad());
        };
        rest.parse::<usize>().ok().and_then(make).ok_or_else(bad)
    }
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Observable values on `N` independent diagrams from one canonical measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub model: String,
    pub q: usize,
    pub seed: u64,
    pub observables: Vec<Observable>,
    /// `values[i][j]` is observable `j` on sample `i`.
    pub values: Vec<Vec<f64>>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Observable `j` on every sample, multiplied by `scale`.
    pub fn column(&self, j: usize, scale: f64) -> Vec<f64> {
        self.values.iter().map(|v| v[j] * scale).collect()
    }
}

pub fn sample_batch(
    model: &RepresentationModel,
    q: usize,
    n: usize,
    observables: &[Observable],
    seed: u64,
) -> Result<SampleBatch> {
    if n < 2 {
        return Err(Error::InsufficientSamples(format!("a batch needs at least 2 samples, got {n}")));
    }
    let kind = model.sampler(q)?;
    let values = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let lambda = sample_diagram(kind, q, &mut stream_rng(seed, i));
            observables.iter().map(|o| o.evaluate(&lambda)).collect()
        })
        .collect();
    Ok(SampleBatch { model: model.name().into(), q, seed, observables: observables.to_vec(), values })
}

fn central_moments(data: &[f64]) -> (f64, f64, f64, f64) {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in data {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (mean, m2 / n, m3 / n, m4 / n)
}

/// k-statistic of order 1 to 4: unbiased for orders 1 to 3, and for order 4
/// `n²((n+1)m_4 - 3(n-1)m_2²) / ((n-1)(n-2)(n-3))`.
pub fn k_statistic(data: &[f64], order: usize) -> Result<f64> {
    if !(1..=4).contains(&order) {
        return Err(Error::InvalidModel(format!("k-statistics are available for orders 1 to 4, got {order}")));
    }
    if data.len() < 10 * order {
        return Err(Error::InsufficientSamples(format!(
            "order {order} needs at least {} samples, got {}",
            10 * order,
            data.len()
        )));
    }
    let n = data.len() as f64;
    let (mean, m2, m3, m4) = central_moments(data);
    Ok(match order {
        1 => mean,
        2 => n * m2 / (n - 1.0),
        3 => n * n * m3 / ((n - 1.0) * (n - 2.0)),
        _ => n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) / ((n - 1.0) * (n - 2.0) * (n - 3.0)),
    })
}

/// Unbiased sample covariance.
pub fn k_covariance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch(format!("columns of length {} and {}", x.len(), y.len())));
    }
    if x.len() < 20 {
        return Err(Error::InsufficientSamples(format!("covariance needs at least 20 samples, got {}", x.len())));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    Ok(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / (n - 1.0))
}

/// `k_3 / k_2^{3/2}`, zero for a constant observable.
pub fn standardized_skewness(data: &[f64]) -> Result<f64> {
    let k2 = k_statistic(data, 2)?;
    let k3 = k_statistic(data, 3)?;
    Ok(if k2 > 0.0 { k3 / k2.powf(1.5) } else { 0.0 })
}

/// `k_4 / k_2²`, zero for a constant observable.
pub fn excess_kurtosis(data: &[f64]) -> Result<f64> {
    let k2 = k_statistic(data, 2)?;
    let k4 = k_statistic(data, 4)?;
    Ok(if k2 > 0.0 { k4 / (k2 * k2) } else { 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
}

impl Estimate {
    /// `(estimate - target) / stderr`, infinite when the error is zero and the estimate is off.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.estimate - target;
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }
}

/// A statistic of one or more columns together with its bootstrap standard error.
///
/// Resample `b` uses stream `b` of a generator seeded with `seed`.
pub fn bootstrap<F>(columns: &[&[f64]], resamples: usize, seed: u64, statistic: F) -> Result<Estimate>
where
    F: Fn(&[Vec<f64>]) -> Result<f64> + Sync,
{
    let n = columns.first().map_or(0, |c| c.len());
    let owned: Vec<Vec<f64>> = columns.iter().map(|c| c.to_vec()).collect();
    let estimate = statistic(&owned)?;
    if resamples < 2 {
        return Err(Error::InsufficientSamples(format!("bootstrap needs at least 2 resamples, got {resamples}")));
    }
    let replicates: Vec<f64> = (0..resamples as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b);
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            let cols: Vec<Vec<f64>> = columns.iter().map(|c| idx.iter().map(|&i| c[i]).collect()).collect();
            statistic(&cols)
        })
        .collect::<Result<_>>()?;
    let mean = replicates.iter().sum::<f64>() / resamples as f64;
    let var = replicates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (resamples as f64 - 1.0);
    Ok(Estimate { estimate, stderr: var.sqrt() })
}

/// k-statistics of orders `1..=max_order` with bootstrap standard errors.
pub fn k_statistics(data: &[f64], max_order: usize, resamples: usize, seed: u64) -> Result<Vec<Estimate>> {
    (1..=max_order)
        .map(|order| bootstrap(&[data], resamples, seed, |c| k_statistic(&c[0], order)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    /// Mean of `q^{-deg/2} X`.
    Mean,
    /// Variance of `q^{-(deg-1)/2} X`.
    Variance,
    /// Covariance of the two observables, each scaled as for the variance.
    Covariance,
    Skewness,
    ExcessKurtosis,
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::Mean => "mean",
            Statistic::Variance => "variance",
            Statistic::Covariance => "covariance",
            Statistic::Skewness => "skewness",
            Statistic::ExcessKurtosis => "excess-kurtosis",
        })
    }
}

/// One line of a fluctuation report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub model: String,
    pub q: usize,
    /// `R3`, or `R3*R4` for a covariance.
    pub observable: String,
    pub statistic: Statistic,
    pub estimate: f64,
    pub stderr: f64,
    pub predicted: Option<f64>,
    pub n_samples: usize,
    pub seed: u64,
}

impl ReportRow {
    pub fn deviation(&self) -> Option<f64> {
        self.predicted.map(|p| (self.estimate - p).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub samples: usize,
    pub seed: u64,
    pub resamples: usize,
    /// Include covariances between distinct observables.
    pub covariances: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { samples: 4000, seed: 1, resamples: 200, covariances: true }
    }
}

pub const DEFAULT_GRID: [usize; 4] = [100, 400, 900, 1600];

/// Per `q`: scaled means against `c_{l+1}`, scaled variances and covariances against the
/// predicted limits, and the standardized third and fourth cumulants against zero.
///
/// The batch for `q_list[i]` uses seed `options.seed + i`.
pub fn fluctuation_report(
    model: &RepresentationModel,
    q_list: &[usize],
    observables: &[Observable],
    options: &ReportOptions,
) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for (i, &q) in q_list.iter().enumerate() {
        let seed = options.seed.wrapping_add(i as u64);
        let batch = sample_batch(model, q, options.samples, observables, seed)?;
        rows.extend(summarize_batch(model, &batch, options.resamples, options.covariances)?);
    }
    Ok(rows)
}

/// The report rows of one batch.
pub fn summarize_batch(model: &RepresentationModel, batch: &SampleBatch, resamples: usize, covariances: bool) -> Result<Vec<ReportRow>> {
    let q = batch.q as f64;
    let seed = batch.seed;
    let row = |observable: String, statistic, e: Estimate, predicted| ReportRow {
        model: batch.model.clone(),
        q: batch.q,
        observable,
        statistic,
        estimate: e.estimate,
        stderr: e.stderr,
        predicted,
        n_samples: batch.len(),
        seed,
    };
    let fluct: Vec<Vec<f64>> = batch
        .observables
        .iter()
        .enumerate()
        .map(|(j, o)| batch.column(j, q.powf(-(o.degree() as f64 - 1.0) / 2.0)))
        .collect();
    let mut rows = Vec::new();
    for (j, o) in batch.observables.iter().enumerate() {
        let scaled = batch.column(j, q.powf(-(o.degree() as f64) / 2.0));
        let mean = bootstrap(&[&scaled], resamples, seed, |c| k_statistic(&c[0], 1))?;
        rows.push(row(o.to_string(), Statistic::Mean, mean, o.predicted_mean(model)));
        let var = bootstrap(&[&fluct[j]], resamples, seed, |c| k_statistic(&c[0], 2))?;
        rows.push(row(o.to_string(), Statistic::Variance, var, pair_limit(model, o, o)));
        let skew = bootstrap(&[&fluct[j]], resamples, seed, |c| standardized_skewness(&c[0]))?;
        rows.push(row(o.to_string(), Statistic::Skewness, skew, Some(0.0)));
        let kurt = bootstrap(&[&fluct[j]], resamples, seed, |c| excess_kurtosis(&c[0]))?;
        rows.push(row(o.to_string(), Statistic::ExcessKurtosis, kurt, Some(0.0)));
    }
    if covariances {
        for (a, oa) in batch.observables.iter().enumerate() {
            for (b, ob) in batch.observables.iter().enumerate().skip(a + 1) {
                let cov = bootstrap(&[&fluct[a], &fluct[b]], resamples, seed, |c| k_covariance(&c[0], &c[1]))?;
                rows.push(row(format!("{oa}*{ob}"), Statistic::Covariance, cov, pair_limit(model, oa, ob)));
            }
        }
    }
    Ok(rows)
}

fn pair_limit(model: &RepresentationModel, a: &Observable, b: &Observable) -> Option<f64> {
    let (la, lb) = (a.limit_index()?, b.limit_index()?);
    if la == 0 || lb == 0 {
        // R_1 and Σ_... of degree one do not occur; R_2 = q and Σ_1 = q are deterministic
        return None;
    }
    predicted_limits(model, &[la, lb]).ok().map(|x| to_f64(&x))
}

/// Rows with columns `model, q, observable, statistic, estimate, stderr, predicted,
/// n_samples, seed`.
pub fn write_report_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per sample: `q` followed by the raw observable values.
pub fn write_samples_csv<W: Write>(batch: &SampleBatch, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    let header: Vec<String> = std::iter::once("q".to_string()).chain(batch.observables.iter().map(ToString::to_string)).collect();
    w.write_record(&header).map_err(io)?;
    for v in &batch.values {
        let rec: Vec<String> = std::iter::once(batch.q.to_string()).chain(v.iter().map(|x| format!("{x:e}"))).collect();
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Samples that fell outside the support of the exact measure.
    pub outside_support: u64,
}

impl ChiSquareTest {
    pub fn passes(&self, significance: f64) -> bool {
        self.outside_support == 0 && self.p_value > significance
    }
}

/// Pearson test of observed diagram counts against an exact measure. Cells with expected
/// count below 5 are pooled.
pub fn chi_square_test(counts: &BTreeMap<YoungDiagram, u64>, measure: &CanonicalMeasure) -> Result<ChiSquareTest> {
    let total: u64 = counts.values().sum();
    let outside_support = counts.iter().filter(|(d, _)| measure.probability(d) == num_traits::Zero::zero()).map(|(_, c)| *c).sum();
    let mut cells: Vec<(f64, f64)> = measure
        .support()
        .map(|(d, p)| (to_f64(p) * total as f64, counts.get(d).copied().unwrap_or(0) as f64))
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (e, o) in cells {
        acc = (acc.0 + e, acc.1 + o);
        if acc.0 >= 5.0 {
            pooled.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 {
        match pooled.last_mut() {
            Some(last) => *last = (last.0 + acc.0, last.1 + acc.1),
            None => pooled.push(acc),
        }
    }
    if pooled.len() < 2 {
        return Ok(ChiSquareTest { statistic: 0.0, degrees_of_freedom: 0, p_value: 1.0, outside_support });
    }
    let statistic: f64 = pooled.iter().map(|(e, o)| (o - e).powi(2) / e).sum();
    let dof = pooled.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidModel(e.to_string()))?;
    Ok(ChiSquareTest { statistic, degrees_of_freedom: dof, p_value: dist.sf(statistic), outside_support })
}

/// Diagram counts of `n` samples from the model's sampler at `q`.
pub fn sample_counts(model: &RepresentationModel, q: usize, n: usize, seed: u64) -> Result<BTreeMap<YoungDiagram, u64>> {
    let kind = model.sampler(q)?;
    let shapes: Vec<YoungDiagram> =
        (0..n as u64).into_par_iter().map(|i| sample_diagram(kind, q, &mut stream_rng(seed, i))).collect();
    let mut counts = BTreeMap::new();
    for s in shapes {
        *counts.entry(s).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Frequency test of the sampler against the exact canonical measure at `q`.
pub fn validate_sampler(model: &RepresentationModel, q: usize, n: usize, seed: u64) -> Result<ChiSquareTest> {
    let counts = sample_counts(model, q, n, seed)?;
    chi_square_test(&counts, &model.canonical_measure(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> YoungDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn rsk_shapes() {
        assert_eq!(rsk_shape([0]), d("1"));
        assert_eq!(rsk_shape([0, 1, 2]), d("3"));
        assert_eq!(rsk_shape([2, 1, 0]), d("1+1+1"));
        assert_eq!(rsk_shape([1, 0, 2]), d("2+1"));
        assert_eq!(rsk_shape([1, 1, 0]), d("2+1"));
        assert_eq!(rsk_shape([0, 0, 0]), d("3"));
        // 2 4 1 3: rows [1 3] [2 4]
        assert_eq!(rsk_shape([1, 3, 0, 2]), d("2+2"));
    }

    #[test]
    fn trivial_samplers() {
        let mut rng = stream_rng(7, 0);
        assert_eq!(sample_plancherel(1, &mut rng), d("1"));
        for _ in 0..10 {
            assert_eq!(sample_schur_weyl(2, 1, &mut rng), d("2"));
        }
    }

    #[test]
    fn plancherel_two_boxes_is_fair() {
        let counts = sample_counts(&RepresentationModel::Plancherel, 2, 4000, 3).unwrap();
        let two = counts[&d("2")] as f64 / 4000.0;
        assert!((two - 0.5).abs() < 0.03, "{two}");
    }

    #[test]
    fn k_statistics_match_exact_small_sample() {
        let data: Vec<f64> = (1..=40).map(|i| ((i * i) % 7) as f64).collect();
        let n = data.len() as f64;
        let mean = data.iter().sum::<f64>() / n;
        let s2 = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
        assert!((k_statistic(&data, 1).unwrap() - mean).abs() < 1e-12);
        assert!((k_statistic(&data, 2).unwrap() - s2 / (n - 1.0)).abs() < 1e-12);
        let constant = vec![3.5; 50];
        for order in 2..=4 {
            assert_eq!(k_statistic(&constant, order).unwrap(), 0.0);
        }
        let e = k_statistics(&constant, 4, 50, 1).unwrap();
        assert!(e[1..].iter().all(|e| e.estimate == 0.0 && e.stderr == 0.0));
        assert!(matches!(k_statistic(&data[..30], 4), Err(Error::InsufficientSamples(_))));
    }

    #[test]
    fn observable_names_round_trip() {
        for o in [Observable::FreeCumulant(3), Observable::Cycle(2), Observable::PowerSum(4)] {
            assert_eq!(o.to_string().parse::<Observable>().unwrap(), o);
        }
        assert!("R1".parse::<Observable>().is_err());
        assert!("Q3".parse::<Observable>().is_err());
    }

    #[test]
    fn batches_are_reproducible() {
        let obs = [Observable::FreeCumulant(3)];
        let a = sample_batch(&RepresentationModel::Plancherel, 50, 20, &obs, 9).unwrap();
        let b = sample_batch(&RepresentationModel::Plancherel, 50, 20, &obs, 9).unwrap();
        assert_eq!(a, b);
        let c = sample_batch(&RepresentationModel::Plancherel, 50, 20, &obs, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn combinators_have_no_sampler() {
        let m = RepresentationModel::restrict(RepresentationModel::Plancherel, crate::num::frac(1, 4)).unwrap();
        let err = sample_batch(&m, 10, 10, &[Observable::FreeCumulant(2)], 1).unwrap_err();
        assert!(err.to_string().contains("exact mode only"));
    }
}
