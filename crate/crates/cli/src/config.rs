use crate::UsageError;
use anyhow::{bail, Context, Result};
use charfluct::characters::EXACT_CEILING;
use charfluct::models::{ModelSpec, RepresentationModel};
use charfluct::montecarlo::{Observable, ReportOptions, DEFAULT_GRID};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Which command a configuration is resolved for; the defaults differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sample,
}

/// Fully resolved experiment parameters. This is what every output file embeds; the
/// output locations are kept apart so that a rerun into another directory produces the
/// same bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub q: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub observables: Vec<String>,
    pub resamples: usize,
    pub covariances: bool,
    pub max_index: usize,
    pub order: usize,
    pub exact_bound: usize,
    pub free_cumulant_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub dir: PathBuf,
    pub json: bool,
}

/// `p = 0.5` and `p = "1/2"` are both accepted.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn text(&self) -> String {
        match self {
            Number::Int(n) => n.to_string(),
            Number::Float(x) => x.to_string(),
            Number::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Grid {
    List(Vec<usize>),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileModel {
    model: String,
    p: Option<Number>,
    d: Option<u64>,
    shape: Option<String>,
    base: Option<Box<FileModel>>,
    second: Option<Box<FileModel>>,
}

impl FileModel {
    fn spec(&self) -> ModelSpec {
        ModelSpec {
            model: self.model.clone(),
            p: self.p.as_ref().map(Number::text),
            d: self.d,
            shape: self.shape.clone(),
            base: self.base.as_ref().map(|b| Box::new(b.spec())),
            second: self.second.as_ref().map(|b| Box::new(b.spec())),
        }
    }
}

/// The TOML configuration file. Model keys sit at the top level; combinators take
/// their factors from `[base]` and `[second]` tables.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<String>,
    p: Option<Number>,
    d: Option<u64>,
    shape: Option<String>,
    base: Option<FileModel>,
    second: Option<FileModel>,
    q: Option<Grid>,
    samples: Option<usize>,
    seed: Option<u64>,
    observables: Option<Vec<String>>,
    resamples: Option<usize>,
    covariances: Option<bool>,
    max_index: Option<usize>,
    order: Option<usize>,
    exact_bound: Option<usize>,
    free_cumulant_order: Option<usize>,
    out_dir: Option<PathBuf>,
    json: Option<bool>,
}

/// Values given on the command line.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// TOML config file, or an earlier output file whose embedded config is reused
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// plancherel, tensor, irreducible, restrict, induce, outer or tensor-product
    #[arg(long)]
    pub model: Option<String>,
    /// Model parameter, as a decimal or a fraction such as 1/2
    #[arg(long)]
    pub p: Option<String>,
    /// Fixed tensor dimension
    #[arg(long)]
    pub d: Option<u64>,
    /// Shape sequence of the irreducible model: staircase or rectangular
    #[arg(long)]
    pub shape: Option<String>,
    /// Base model (by name, without parameters) for the combinators
    #[arg(long)]
    pub base: Option<String>,
    /// Values of q: a list such as 100,400 or a range such as 4..=12
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated observables: R<m>, Sigma<l>, ptilde<n>
    #[arg(long)]
    pub observables: Option<String>,
    /// Bootstrap resamples per statistic
    #[arg(long)]
    pub resamples: Option<usize>,
    /// Skip covariances between distinct observables
    #[arg(long)]
    pub no_covariances: bool,
    /// Largest cycle length in the exact diagnostics
    #[arg(long)]
    pub max_index: Option<usize>,
    /// Largest cumulant order in the exact diagnostics (1 or 2)
    #[arg(long)]
    pub order: Option<usize>,
    /// Largest q allowed in exact mode
    #[arg(long)]
    pub exact_bound: Option<usize>,
    /// Number of expected free cumulants written by `exact`
    #[arg(long)]
    pub free_cumulant_order: Option<usize>,
    /// Directory for the output files
    #[arg(long, short)]
    pub out_dir: Option<PathBuf>,
    /// Also write JSON reports
    #[arg(long)]
    pub json: bool,
}

pub fn parse_grid(text: &str) -> Result<Vec<usize>> {
    let bad = || UsageError(format!("bad q grid `{text}` (expected 100,400 or 4..=12)"));
    let text = text.trim();
    let grid: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let (inclusive, b) = match b.strip_prefix('=') {
            Some(b) => (true, b),
            None => (false, b),
        };
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if inclusive {
            (a..=b).collect()
        } else {
            (a..b).collect()
        }
    } else {
        text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<std::result::Result<_, _>>()?
    };
    if grid.is_empty() {
        return Err(bad().into());
    }
    Ok(grid)
}

fn defaults(mode: Mode) -> ExperimentConfig {
    let options = ReportOptions::default();
    ExperimentConfig {
        model: ModelSpec::named("plancherel"),
        q: match mode {
            Mode::Exact => (4..=12).collect(),
            Mode::Sample => DEFAULT_GRID.to_vec(),
        },
        samples: options.samples,
        seed: options.seed,
        observables: vec!["R3".into(), "R4".into()],
        resamples: options.resamples,
        covariances: options.covariances,
        max_index: 3,
        order: 2,
        exact_bound: EXACT_CEILING,
        free_cumulant_order: 6,
    }
}

/// Reads the config embedded in an output file written by this tool: the `# config:`
/// line of a CSV, or the `config` field of a JSON report.
pub fn embedded_config(text: &str) -> Option<serde_json::Value> {
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text).ok()?;
        return v.get("config").cloned();
    }
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# config: "))
        .and_then(|json| serde_json::from_str(json).ok())
}

/// Defaults, then the config file (or embedded config), then the command line.
pub fn resolve(mode: Mode, cli: &Overrides) -> Result<(ExperimentConfig, OutputPaths)> {
    let mut config = defaults(mode);
    let mut paths = OutputPaths { dir: PathBuf::from("."), json: false };
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        match embedded_config(&text) {
            Some(v) => {
                config = serde_json::from_value(v)
                    .map_err(|e| UsageError(format!("{}: embedded config is not valid: {e}", path.display())))?;
            }
            None => apply_file(&mut config, &mut paths, &text, path)?,
        }
    }
    apply_cli(&mut config, &mut paths, cli)?;
    Ok((config, paths))
}

fn apply_file(config: &mut ExperimentConfig, paths: &mut OutputPaths, text: &str, path: &Path) -> Result<()> {
    let file: FileConfig = toml::from_str(text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    if let Some(model) = &file.model {
        config.model = FileModel {
            model: model.clone(),
            p: file.p.clone(),
            d: file.d,
            shape: file.shape.clone(),
            base: file.base.clone().map(Box::new),
            second: file.second.clone().map(Box::new),
        }
        .spec();
    } else if file.p.is_some() || file.d.is_some() || file.shape.is_some() || file.base.is_some() || file.second.is_some() {
        return Err(UsageError(format!("{}: model parameters given without `model`", path.display())).into());
    }
    if let Some(q) = &file.q {
        config.q = match q {
            Grid::List(v) => v.clone(),
            Grid::Text(s) => parse_grid(s)?,
        };
    }
    macro_rules! take {
        ($($field:ident),*) => { $( if let Some(v) = file.$field.clone() { config.$field = v; } )* };
    }
    take!(samples, seed, observables, resamples, covariances, max_index, order, exact_bound, free_cumulant_order);
    if let Some(dir) = file.out_dir {
        paths.dir = dir;
    }
    if let Some(json) = file.json {
        paths.json = json;
    }
    Ok(())
}

fn apply_cli(config: &mut ExperimentConfig, paths: &mut OutputPaths, cli: &Overrides) -> Result<()> {
    // a model named on the command line replaces the file's model with all its parameters
    if let Some(model) = &cli.model {
        config.model = ModelSpec::named(model);
    }
    if let Some(p) = &cli.p {
        config.model.p = Some(p.clone());
    }
    if let Some(d) = cli.d {
        config.model.d = Some(d);
    }
    if let Some(shape) = &cli.shape {
        config.model.shape = Some(shape.clone());
    }
    if let Some(base) = &cli.base {
        config.model.base = Some(Box::new(ModelSpec::named(base)));
    }
    if let Some(q) = &cli.q {
        config.q = parse_grid(q)?;
    }
    if let Some(obs) = &cli.observables {
        config.observables = obs.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    }
    macro_rules! take {
        ($($field:ident),*) => { $( if let Some(v) = cli.$field { config.$field = v; } )* };
    }
    take!(samples, seed, resamples, max_index, order, exact_bound, free_cumulant_order);
    if cli.no_covariances {
        config.covariances = false;
    }
    if let Some(dir) = &cli.out_dir {
        paths.dir = dir.clone();
    }
    if cli.json {
        paths.json = true;
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn build_model(&self) -> Result<RepresentationModel> {
        Ok(self.model.build()?)
    }

    pub fn parsed_observables(&self) -> Result<Vec<Observable>> {
        if self.observables.is_empty() {
            bail!(UsageError("no observables given".into()));
        }
        Ok(self.observables.iter().map(|s| s.parse()).collect::<charfluct::Result<_>>()?)
    }

    /// Checks that apply to both modes, plus the exact-mode bound when `mode` is exact.
    pub fn validate(&self, mode: Mode) -> Result<()> {
        let usage = |msg: String| -> Result<()> { Err(UsageError(msg).into()) };
        if self.q.is_empty() || self.q.contains(&0) {
            return usage("q values must be positive".into());
        }
        self.build_model()?;
        match mode {
            Mode::Exact => {
                if self.exact_bound > EXACT_CEILING {
                    return usage(format!("exact_bound {} exceeds the ceiling {EXACT_CEILING}", self.exact_bound));
                }
                if let Some(q) = self.q.iter().find(|&&q| q > self.exact_bound) {
                    return usage(format!("q = {q} exceeds the exact-mode bound {}", self.exact_bound));
                }
                if !(1..=2).contains(&self.order) {
                    return usage(format!("order must be 1 or 2, got {}", self.order));
                }
                if self.max_index == 0 {
                    return usage("max_index must be at least 1".into());
                }
                if self.free_cumulant_order < 2 {
                    return usage("free_cumulant_order must be at least 2".into());
                }
            }
            Mode::Sample => {
                self.parsed_observables()?;
                if self.resamples < 2 {
                    return usage("resamples must be at least 2".into());
                }
            }
        }
        Ok(())
    }

    pub fn report_options(&self) -> ReportOptions {
        ReportOptions { samples: self.samples, seed: self.seed, resamples: self.resamples, covariances: self.covariances }
    }
}
