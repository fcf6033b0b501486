use crate::config::{resolve, ExperimentConfig, Mode, Overrides};
use crate::output::{csv_with_provenance, json_with_provenance, write_atomic};
use crate::UsageError;
use anyhow::{Context, Result};
use charfluct::characters::eigenvalue_cumulant;
use charfluct::conjugacy::CycleTypeIndex;
use charfluct::diagnostics::{exact_cumulants, factorization_diagnostics, write_diagnostics_csv, DiagnosticRow, Species};
use charfluct::diagrams::write_free_cumulant_csv;
use charfluct::montecarlo::{fluctuation_report, write_report_csv, ReportRow};
use charfluct::num::{format_rational, Rational};
use charfluct::verify::{verify_algebra, verify_cumulants, verify_transition_measures, AlgebraBounds, CumulantBounds, Fault, SuiteReport};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

/// Exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    IdentityFailure,
    StatisticalFailure,
}

fn deadline(seconds: Option<u64>) -> Option<Instant> {
    seconds.map(|s| Instant::now() + Duration::from_secs(s))
}

fn finish_suites(reports: &[SuiteReport], json: Option<&Path>, config: &serde_json::Value) -> Result<Outcome> {
    for r in reports {
        print!("{r}");
    }
    if let Some(path) = json {
        write_atomic(path, &json_with_provenance("verify", config, &reports)?)?;
    }
    let failing: Vec<String> =
        reports.iter().flat_map(|r| r.failing_checks().into_iter().map(move |c| format!("{}/{c}", r.suite))).collect();
    let incomplete = reports.iter().any(|r| r.incomplete);
    if !failing.is_empty() {
        eprintln!("failed checks: {}", failing.join(", "));
    }
    if incomplete {
        eprintln!("run incomplete: a resource bound was reached before every instance ran");
    }
    Ok(if failing.is_empty() && !incomplete { Outcome::Pass } else { Outcome::IdentityFailure })
}

#[derive(Debug, Clone, clap::Args)]
pub struct VerifyAlgebraArgs {
    /// Products Σ_k Σ_l run over cycle types of at most this size
    #[arg(long, default_value_t = AlgebraBounds::default().max_type_size)]
    pub max_type_size: usize,
    #[arg(long, default_value_t = AlgebraBounds::default().max_q)]
    pub max_q: usize,
    /// Set partitions of at most this many points
    #[arg(long, default_value_t = AlgebraBounds::default().max_partition_size)]
    pub max_partition_size: usize,
    /// Set partitions of n points are checked for q = n ..= n + extra_q
    #[arg(long, default_value_t = AlgebraBounds::default().extra_q)]
    pub extra_q: usize,
    /// Stop after this many seconds and report the run as incomplete
    #[arg(long)]
    pub time_limit: Option<u64>,
    /// Machine-readable report
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

pub fn verify_algebra_cmd(args: &VerifyAlgebraArgs) -> Result<Outcome> {
    let fault = args.inject_fault.as_deref().map(str::parse::<Fault>).transpose()?;
    let bounds = AlgebraBounds {
        max_type_size: args.max_type_size,
        max_q: args.max_q,
        max_partition_size: args.max_partition_size,
        extra_q: args.extra_q,
        fault,
        deadline: deadline(args.time_limit),
    };
    let report = verify_algebra(&bounds)?;
    let config = serde_json::json!({
        "max_type_size": args.max_type_size,
        "max_q": args.max_q,
        "max_partition_size": args.max_partition_size,
        "extra_q": args.extra_q,
        "fault": fault,
    });
    finish_suites(&[report], args.json.as_deref(), &config)
}

#[derive(Debug, Clone, clap::Args)]
pub struct VerifyCumulantsArgs {
    /// Cumulants of up to this many arguments
    #[arg(long, default_value_t = CumulantBounds::default().max_order)]
    pub max_order: usize,
    /// Cycle lengths up to this value
    #[arg(long, default_value_t = CumulantBounds::default().max_length)]
    pub max_length: usize,
    #[arg(long, default_value_t = CumulantBounds::default().max_q)]
    pub max_q: usize,
    /// Top-degree check for l1 + l2 up to this value
    #[arg(long, default_value_t = CumulantBounds::default().max_top_degree)]
    pub max_top_degree: usize,
    /// Transition measures of diagrams with at most this many boxes
    #[arg(long, default_value_t = 8)]
    pub measure_q: usize,
    #[arg(long)]
    pub time_limit: Option<u64>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn verify_cumulants_cmd(args: &VerifyCumulantsArgs) -> Result<Outcome> {
    let bounds = CumulantBounds {
        max_order: args.max_order,
        max_length: args.max_length,
        max_q: args.max_q,
        max_top_degree: args.max_top_degree,
        deadline: deadline(args.time_limit),
    };
    let cumulants = verify_cumulants(&bounds)?;
    let dilations = [charfluct::num::rat(2), charfluct::num::rat(3), charfluct::num::frac(1, 2), charfluct::num::frac(5, 7)];
    let measures = verify_transition_measures(args.measure_q, 8, &dilations)?;
    let config = serde_json::json!({
        "max_order": args.max_order,
        "max_length": args.max_length,
        "max_q": args.max_q,
        "max_top_degree": args.max_top_degree,
        "measure_q": args.measure_q,
    });
    finish_suites(&[cumulants, measures], args.json.as_deref(), &config)
}

fn index_sets(q: usize, config: &ExperimentConfig) -> Vec<Vec<usize>> {
    let cycles: Vec<usize> = (1..=config.max_index.min(q)).collect();
    let mut sets: Vec<Vec<usize>> = cycles.iter().map(|&l| vec![l]).collect();
    if config.order == 2 {
        for &a in &cycles {
            for &b in cycles.iter().filter(|&&b| b >= a) {
                sets.push(vec![a, b]);
            }
        }
    }
    sets
}

fn cumulants_csv(config: &ExperimentConfig) -> Result<Vec<u8>> {
    let model = config.build_model()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["q", "species", "indices", "value"])?;
    for &q in &config.q {
        let measure = model.canonical_measure(q)?;
        for ix in index_sets(q, config) {
            let classes: Vec<CycleTypeIndex> = ix.iter().map(|&l| CycleTypeIndex::cycle(l)).collect();
            let text = ix.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            let natural = eigenvalue_cumulant(&measure, &classes)?;
            let disjoint = exact_cumulants(&model, q, &classes, Species::Disjoint)?;
            for (species, v) in [("natural", natural), ("disjoint", disjoint)] {
                w.write_record([q.to_string(), species.into(), text.clone(), format_rational(&v)])?;
            }
        }
    }
    w.into_inner().context("flushing cumulants")
}

fn free_cumulants_csv(config: &ExperimentConfig) -> Result<Vec<u8>> {
    let model = config.build_model()?;
    let n = config.free_cumulant_order;
    let mut rows = Vec::new();
    for &q in &config.q {
        let measure = model.canonical_measure(q)?;
        let mut sums = vec![Rational::zero(); n + 1];
        for (lambda, p) in measure.support() {
            for (m, r) in lambda.free_cumulants(n).iter().enumerate() {
                sums[m] += p * r;
            }
        }
        rows.push((q, sums[2..].iter().map(format_rational).collect::<Vec<_>>()));
    }
    let mut body = Vec::new();
    write_free_cumulant_csv(&rows, &mut body)?;
    Ok(body)
}

fn worst_exact(rows: &[DiagnosticRow]) -> Option<&DiagnosticRow> {
    let last = rows.iter().map(|r| r.q).max()?;
    rows.iter()
        .filter(|r| r.q == last && r.deviation().is_some())
        .max_by(|a, b| a.deviation().unwrap().total_cmp(&b.deviation().unwrap()))
}

pub fn exact_cmd(cli: &Overrides) -> Result<Outcome> {
    let (config, paths) = resolve(Mode::Exact, cli)?;
    config.validate(Mode::Exact)?;
    let model = config.build_model()?;
    let rows = factorization_diagnostics(&model, &config.q, config.order, config.max_index)?;
    let mut body = Vec::new();
    write_diagnostics_csv(&rows, &mut body)?;
    let files = [
        ("diagnostics.csv", body),
        ("cumulants.csv", cumulants_csv(&config)?),
        ("free_cumulants.csv", free_cumulants_csv(&config)?),
    ];
    for (name, body) in &files {
        let path = paths.dir.join(name);
        write_atomic(&path, &csv_with_provenance("exact", &config, body)?)?;
        println!("wrote {}", path.display());
    }
    println!("{} diagnostic rows for model {} at q = {:?}", rows.len(), model.name(), config.q);
    if let Some(r) = worst_exact(&rows) {
        println!(
            "worst deviation at q = {}: condition {} ({}) = {} against {} (|Δ| = {:.4e})",
            r.q,
            r.condition,
            r.indices_text(),
            r.value,
            format_rational(r.predicted.as_ref().expect("filtered on deviation")),
            r.deviation().expect("filtered on deviation"),
        );
    }
    Ok(Outcome::Pass)
}

/// `(estimate - predicted) / stderr`; a zero standard error counts as exact.
fn z_score(r: &ReportRow) -> Option<f64> {
    let p = r.predicted?;
    let d = r.estimate - p;
    Some(if r.stderr > 0.0 {
        d / r.stderr
    } else if d == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(d)
    })
}

pub fn sample_cmd(cli: &Overrides, max_z: Option<f64>) -> Result<Outcome> {
    let (config, paths) = resolve(Mode::Sample, cli)?;
    config.validate(Mode::Sample)?;
    let model = config.build_model()?;
    let observables = config.parsed_observables()?;
    let rows = fluctuation_report(&model, &config.q, &observables, &config.report_options())?;
    let mut body = Vec::new();
    write_report_csv(&rows, &mut body)?;
    let path = paths.dir.join("report.csv");
    write_atomic(&path, &csv_with_provenance("sample", &config, &body)?)?;
    println!("wrote {}", path.display());
    if paths.json {
        let path = paths.dir.join("report.json");
        write_atomic(&path, &json_with_provenance("sample", &config, &rows)?)?;
        println!("wrote {}", path.display());
    }
    let worst = rows.iter().filter_map(|r| z_score(r).map(|z| (r, z))).max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
    let Some((r, z)) = worst else {
        println!("no predicted limits to compare against");
        return Ok(Outcome::Pass);
    };
    println!(
        "worst deviation: q = {} {} {} = {:.5} ± {:.5} against {:.5} (z = {z:.2})",
        r.q,
        r.observable,
        r.statistic,
        r.estimate,
        r.stderr,
        r.predicted.expect("has a z-score"),
    );
    match max_z {
        Some(limit) if z.abs() > limit => {
            eprintln!("statistical check failed: |z| = {:.2} exceeds {limit}", z.abs());
            Ok(Outcome::StatisticalFailure)
        }
        _ => Ok(Outcome::Pass),
    }
}

/// A report row as read back from CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoredRow {
    model: String,
    q: usize,
    observable: String,
    statistic: String,
    estimate: f64,
    stderr: f64,
    predicted: Option<f64>,
    n_samples: usize,
    seed: u64,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ReportMergeArgs {
    /// Report CSV files written by `sample`
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, short)]
    pub output: PathBuf,
    /// Also write the merged rows as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Concatenates reports in the order given, dropping repeated rows. The merged file embeds
/// the configs of its inputs.
pub fn report_merge_cmd(args: &ReportMergeArgs) -> Result<Outcome> {
    let mut rows: Vec<StoredRow> = Vec::new();
    let mut inputs = Vec::new();
    for path in &args.inputs {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        inputs.push(crate::config::embedded_config(&text).unwrap_or(serde_json::Value::Null));
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        for row in reader.deserialize() {
            let row: StoredRow = row.map_err(|e| UsageError(format!("{}: not a report: {e}", path.display())))?;
            if !rows.contains(&row) {
                rows.push(row);
            }
        }
    }
    let config = serde_json::json!({ "inputs": inputs });
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r)?;
    }
    let body = w.into_inner().context("flushing merged report")?;
    write_atomic(&args.output, &csv_with_provenance("report-merge", &config, &body)?)?;
    println!("wrote {} rows from {} reports to {}", rows.len(), args.inputs.len(), args.output.display());
    if let Some(path) = &args.json {
        write_atomic(path, &json_with_provenance("report-merge", &config, &rows)?)?;
        println!("wrote {}", path.display());
    }
    Ok(Outcome::Pass)
}
