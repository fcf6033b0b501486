//! Exhaustive small-instance identity suites.
//!
//! Every identity is checked against a brute-force computation in the algebra of partial
//! permutations or under an exact canonical measure.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::characters::eigenvalue_cumulant;
use crate::conjugacy::{
    decompose_sigma_basis, explicit_cycle_type_with, genus, is_degenerate, sigma, sigma_pi, sigma_product, CycleTypeIndex,
    SigmaCombination, Winding,
};
use crate::cumulants::{
    brillinger_compose, conditional_covariance_top_degree, conditional_cumulant_classes, conditional_cumulants_by_inversion,
    disjoint_cumulant, disjoint_cumulant_of_cycles, natural_cumulant,
};
use crate::diagnostics::expectation_fn;
use crate::error::{Error, Result};
use crate::models::RepresentationModel;
use crate::diagrams::diagrams_of_size;
use crate::num::{pow, rat, Rational};
use crate::partition::enumerate_partitions;

/// Deliberate defects used to confirm that the suites catch errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Trace fat cycles counterclockwise when reading off cycle types.
    WindingSign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "winding-sign" => Ok(Fault::WindingSign),
            _ => Err(Error::Parse(format!("unknown fault `{s}`"))),
        }
    }
}

/// One family of identities and the instances where it failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    /// The function or identity under test.
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check { name: name.into(), instances: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    /// Set partitions skipped by the cycle-type comparison because their winding is
    /// degenerate; for these `Σ_π = 0` is checked instead.
    pub degenerate: Vec<String>,
    /// A resource bound was hit before every instance ran.
    pub incomplete: bool,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.into(), checks: Vec::new(), degenerate: Vec::new(), incomplete: false, notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failing_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAILED" };
            writeln!(f, "  {:<40} {:>7} instances  {status}", c.name, c.instances)?;
            for x in c.failures.iter().take(5) {
                writeln!(f, "      {x}")?;
            }
            if c.failures.len() > 5 {
                writeln!(f, "      ... {} more", c.failures.len() - 5)?;
            }
        }
        if !self.degenerate.is_empty() {
            writeln!(f, "  degenerate windings: {}", self.degenerate.len())?;
        }
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        if self.incomplete {
            writeln!(f, "  INCOMPLETE: resource bound reached")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AlgebraBounds {
    /// Products `Σ_k Σ_l` run over `|k|, |l|` up to this size.
    pub max_type_size: usize,
    pub max_q: usize,
    /// Set partitions of up to this many elements, for `q` from `n` to `n + extra_q`.
    pub max_partition_size: usize,
    pub extra_q: usize,
    pub fault: Option<Fault>,
    pub deadline: Option<Instant>,
}

impl Default for AlgebraBounds {
    fn default() -> Self {
        AlgebraBounds { max_type_size: 6, max_q: 6, max_partition_size: 7, extra_q: 2, fault: None, deadline: None }
    }
}

/// Cycle types of every size from 1 to `max`.
pub fn cycle_types_up_to(max: usize) -> Vec<CycleTypeIndex> {
    let mut out = Vec::new();
    for n in 1..=max {
        integer_partitions(n, n, &mut Vec::new(), &mut out);
    }
    out
}

fn integer_partitions(n: usize, largest: usize, current: &mut Vec<usize>, out: &mut Vec<CycleTypeIndex>) {
    if n == 0 {
        out.push(CycleTypeIndex::new(current.clone()).expect("positive rows"));
        return;
    }
    for k in (1..=largest.min(n)).rev() {
        current.push(k);
        integer_partitions(n - k, k, current, out);
        current.pop();
    }
}

fn past(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() > d)
}

/// Group and disjoint products of `Σ`'s, the worked example `Σ_1 Σ_{1,1}`, and
/// `Σ_π = Σ_{explicit cycle type of π}` with the genus-degree relation.
pub fn verify_algebra(bounds: &AlgebraBounds) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("algebra");
    let mut sigmas: HashMap<(CycleTypeIndex, usize), AlgebraElement> = HashMap::new();
    let mut brute = |k: &CycleTypeIndex, q: usize| sigmas.entry((k.clone(), q)).or_insert_with(|| sigma(k, q)).clone();

    let mut group = Check::new("product_expansion(full)");
    let mut disjoint = Check::new("disjoint_product");
    let types = cycle_types_up_to(bounds.max_type_size);
    'pairs: for (i, k) in types.iter().enumerate() {
        for l in &types[i..] {
            let structure = sigma_product(k, l);
            let union = SigmaCombination::basis(k.union(l));
            for q in 1..=bounds.max_q {
                if past(bounds.deadline) {
                    report.incomplete = true;
                    break 'pairs;
                }
                let (a, b) = (brute(k, q), brute(l, q));
                let lhs = a.mul(&b);
                group.record(lhs == structure.to_algebra(q), || format!("Σ_{k} Σ_{l} at q = {q}: expected {structure}"));
                disjoint.record(a.disjoint_mul(&b) == union.to_algebra(q), || format!("Σ_{k} • Σ_{l} at q = {q}"));
            }
        }
    }
    report.checks.push(group);
    report.checks.push(disjoint);

    let mut example = Check::new("worked_example Σ_1 Σ_{1,1}");
    let one = CycleTypeIndex::ones(1);
    let two = CycleTypeIndex::ones(2);
    let expected = SigmaCombination::basis(CycleTypeIndex::ones(3)).add(&SigmaCombination::basis(two.clone()).scale(&rat(2)));
    let product = sigma_product(&one, &two);
    example.record(product == expected, || format!("structure constants give {product}"));
    for q in 1..=bounds.max_q {
        let decomposed = decompose_sigma_basis(&brute(&one, q).mul(&brute(&two, q)), q)?;
        let mut truncated = SigmaCombination::zero();
        for (k, c) in expected.terms().filter(|(k, _)| k.size() <= q) {
            truncated.add_term(k.clone(), c.clone());
        }
        example.record(decomposed == truncated, || format!("brute force at q = {q} gives {decomposed}"));
    }
    report.notes.push(format!("Σ_1 Σ_{{1,1}} = {product}"));
    report.checks.push(example);

    let winding = match bounds.fault {
        Some(Fault::WindingSign) => Winding::Counterclockwise,
        None => Winding::Clockwise,
    };
    let mut explicit = Check::new("explicit_cycle_type");
    let mut vanishing = Check::new("degenerate Σ_π = 0");
    let mut degree = Check::new("genus");
    'partitions: for n in 1..=bounds.max_partition_size {
        for pi in enumerate_partitions(n)?.iter() {
            if past(bounds.deadline) {
                report.incomplete = true;
                break 'partitions;
            }
            let degenerate = is_degenerate(pi);
            if degenerate {
                report.degenerate.push(pi.to_string());
            } else {
                let g = genus(pi);
                let k = explicit_cycle_type_with(pi, winding);
                // genus checks deg Σ_π = n - 2g itself
                degree.record(g.is_ok(), || format!("{pi}: {}", g.as_ref().unwrap_err()));
                for q in n..=n + bounds.extra_q {
                    let actual = sigma_pi(pi, q);
                    match &k {
                        Ok(k) => explicit.record(actual == brute(k, q), || format!("{pi} at q = {q}: explicit type {k}")),
                        Err(e) => explicit.record(false, || format!("{pi}: {e}")),
                    }
                }
                continue;
            }
            for q in n..=n + bounds.extra_q {
                vanishing.record(sigma_pi(pi, q).is_zero(), || format!("{pi} at q = {q}"));
            }
        }
    }
    report.notes.push(format!("{} degenerate partitions checked for Σ_π = 0", report.degenerate.len()));
    report.checks.push(explicit);
    report.checks.push(vanishing);
    report.checks.push(degree);
    Ok(report)
}

#[derive(Debug, Clone, Copy)]
pub struct CumulantBounds {
    pub max_order: usize,
    pub max_length: usize,
    pub max_q: usize,
    /// Top-degree check for `l1 + l2` up to this value.
    pub max_top_degree: usize,
    pub deadline: Option<Instant>,
}

impl Default for CumulantBounds {
    fn default() -> Self {
        CumulantBounds { max_order: 3, max_length: 3, max_q: 8, max_top_degree: 6, deadline: None }
    }
}

/// Models used by the cumulant suite.
pub fn reference_models() -> Vec<RepresentationModel> {
    vec![
        RepresentationModel::Plancherel,
        RepresentationModel::tensor_fixed(2).expect("d > 0"),
        RepresentationModel::tensor_fixed(3).expect("d > 0"),
    ]
}

fn multisets(max_len: usize, max_value: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(start: usize, max_value: usize, remaining: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if remaining == 0 {
            return;
        }
        for v in start..=max_value {
            cur.push(v);
            go(v, max_value, remaining - 1, cur, out);
            cur.pop();
        }
    }
    go(1, max_value, max_len, &mut Vec::new(), &mut out);
    out
}

/// Brillinger composition against the exact natural cumulants, both routes to `k^id`,
/// the cycle formula for `k•`, the worked `k^id` examples and the top-degree term of
/// `k^id(Σ_{l1}, Σ_{l2})`.
pub fn verify_cumulants(bounds: &CumulantBounds) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("cumulants");
    let mut brillinger = Check::new("brillinger_compose");
    let mut group_moments = Check::new("natural_cumulant");
    let mut id_routes = Check::new("conditional_cumulant");
    let mut cycles = Check::new("disjoint_cumulant_of_cycles");
    let arg_lists = multisets(bounds.max_order, bounds.max_length);

    for args in &arg_lists {
        let classes: Vec<CycleTypeIndex> = args.iter().map(|&l| CycleTypeIndex::cycle(l)).collect();
        let sigmas: Vec<SigmaCombination> = classes.iter().cloned().map(SigmaCombination::basis).collect();
        let table = conditional_cumulants_by_inversion(&sigmas)?;
        let direct = conditional_cumulant_classes(&classes)?;
        id_routes.record(&direct == table.full(), || format!("k^id{args:?}: {direct} vs {}", table.full()));
        'models: for model in reference_models() {
            for q in 1..=bounds.max_q {
                if past(bounds.deadline) {
                    report.incomplete = true;
                    break 'models;
                }
                let e = expectation_fn(&model, q);
                let exact = eigenvalue_cumulant(&model.canonical_measure(q)?, &classes)?;
                let composed = brillinger_compose(&table, &e)?;
                let tag = || format!("{} q = {q} {args:?}", model.name());
                brillinger.record(composed == exact, || format!("{}: {composed} vs {exact}", tag()));
                let via_products = natural_cumulant(&sigmas, &e)?;
                group_moments.record(via_products == exact, || format!("{}: {via_products} vs {exact}", tag()));
                // cycle types beyond S_q only occur multiplied by a vanishing falling factorial
                let character = |k: &CycleTypeIndex| if k.size() > q { Rational::zero() } else { model.character(q, k).expect("character oracle") };
                let from_cycles = disjoint_cumulant_of_cycles(args, q, &character)?;
                let from_moments = disjoint_cumulant(&sigmas, &e)?;
                cycles.record(from_cycles == from_moments, || format!("{}: {from_cycles} vs {from_moments}", tag()));
            }
        }
    }

    let mut examples = Check::new("conditional_cumulant examples");
    let one = CycleTypeIndex::ones(1);
    let two = CycleTypeIndex::ones(2);
    let a = conditional_cumulant_classes(&[one.clone(), two.clone()])?;
    examples.record(a == SigmaCombination::basis(two.clone()).scale(&rat(2)), || format!("k^id(Σ_1, Σ_{{1,1}}) = {a}"));
    let b = conditional_cumulant_classes(&[one.clone(), one.clone()])?;
    examples.record(b == SigmaCombination::basis(one), || format!("k^id(Σ_1, Σ_1) = {b}"));

    let mut top = Check::new("conditional_covariance_top_degree");
    for l1 in 1..bounds.max_top_degree {
        for l2 in l1..=bounds.max_top_degree - l1 {
            let k = conditional_cumulant_classes(&[CycleTypeIndex::cycle(l1), CycleTypeIndex::cycle(l2)])?;
            let expected = conditional_covariance_top_degree(l1, l2);
            let actual = k.degree_part(l1 + l2);
            let lower = k.degree().is_none_or(|d| d <= l1 + l2);
            top.record(actual == expected && lower, || format!("({l1},{l2}): {actual} vs {expected}"));
        }
    }
    report.checks.extend([brillinger, group_moments, id_routes, cycles, examples, top]);
    Ok(report)
}

/// Mass, `R_1`, `R_2`, `p̃_2` of every diagram with at most `max_q` boxes, and
/// `R_n(D_c μ) = c^n R_n(μ)` for `n <= max_order` and each dilation factor `c`.
pub fn verify_transition_measures(max_q: usize, max_order: usize, dilations: &[Rational]) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("transition-measures");
    let mut mass = Check::new("transition_measure");
    let mut low = Check::new("free_cumulants");
    let mut power = Check::new("p_tilde");
    let mut dilation = Check::new("dilate");
    for q in 1..=max_q {
        let size = Rational::from_integer(q.into());
        for lambda in diagrams_of_size(q) {
            let mu = lambda.transition_measure();
            mass.record(mu.total_mass() == Rational::one(), || format!("{lambda}: mass {}", mu.total_mass()));
            let r = lambda.free_cumulants(max_order.max(2));
            low.record(r[1].is_zero() && r[2] == size, || format!("{lambda}: R_1 = {}, R_2 = {}", r[1], r[2]));
            let from_measure = mu.free_cumulants(max_order.max(2));
            low.record(from_measure == r, || format!("{lambda}: atoms and power sums disagree"));
            power.record(lambda.p_tilde(2) == &size * rat(2), || format!("{lambda}: p̃_2 = {}", lambda.p_tilde(2)));
            for c in dilations {
                let scaled = mu.dilate(c)?.free_cumulants(max_order);
                let ok = (1..=max_order).all(|n| scaled[n] == pow(c, n as u32) * &from_measure[n]);
                dilation.record(ok, || format!("{lambda} dilated by {c}"));
            }
        }
    }
    report.checks.extend([mass, low, power, dilation]);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_type_enumeration() {
        let counts: Vec<usize> = (1..=6).map(|n| cycle_types_up_to(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 6, 11, 18, 29]);
    }

    #[test]
    fn small_algebra_suite_passes_and_detects_fault() {
        let bounds = AlgebraBounds { max_type_size: 3, max_q: 4, max_partition_size: 4, extra_q: 1, fault: None, deadline: None };
        let report = verify_algebra(&bounds).unwrap();
        assert!(report.passed(), "{report}");
        assert!(!report.degenerate.is_empty());
        let faulty = verify_algebra(&AlgebraBounds { fault: Some(Fault::WindingSign), ..bounds }).unwrap();
        assert_eq!(faulty.failing_checks(), vec!["explicit_cycle_type"]);
    }

    #[test]
    fn small_cumulant_suite_passes() {
        let report = verify_cumulants(&CumulantBounds { max_order: 2, max_length: 2, max_q: 5, max_top_degree: 4, deadline: None }).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn small_transition_measure_suite_passes() {
        let report = verify_transition_measures(5, 6, &[rat(2), crate::num::frac(2, 3)]).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn expired_deadline_marks_incomplete() {
        let bounds = AlgebraBounds { deadline: Some(Instant::now()), ..AlgebraBounds::default() };
        std::thread::sleep(std::time::Duration::from_millis(2));
        assert!(verify_algebra(&bounds).unwrap().incomplete);
    }
}
