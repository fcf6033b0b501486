//! Exact finite-`q` cumulants of a model and the scaled sequences of the four equivalent
//! factorization conditions.

use std::fmt;
use std::io::Write;

use num_traits::Zero;
use serde::Serialize;

use crate::characters::{eigenvalue_cumulant, CanonicalMeasure};
use crate::conjugacy::{CycleTypeIndex, SigmaCombination};
use crate::cumulants::{disjoint_cumulant, moments_to_cumulants, Scalars};
use crate::error::{Error, Result};
use crate::models::{predicted_limits, RepresentationModel};
use crate::num::{format_rational, pow, powi, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Species {
    /// Cumulants of the group-algebra expectation.
    Natural,
    /// Cumulants with respect to the disjoint product.
    Disjoint,
}

/// `k(Σ_{k_1}, ..., Σ_{k_n})` or `k•(Σ_{k_1}, ..., Σ_{k_n})` of a model at `q`.
///
/// Natural cumulants are classical cumulants of `λ ↦ Σ_{k_i}(λ)` under the canonical
/// measure, so `q` is bounded by the exact-mode ceiling.
pub fn exact_cumulants(model: &RepresentationModel, q: usize, args: &[CycleTypeIndex], species: Species) -> Result<Rational> {
    match species {
        Species::Natural => eigenvalue_cumulant(&model.canonical_measure(q)?, args),
        Species::Disjoint => {
            let sigmas: Vec<SigmaCombination> = args.iter().cloned().map(SigmaCombination::basis).collect();
            let e = expectation_fn(model, q);
            disjoint_cumulant(&sigmas, &e)
        }
    }
}

/// `k ↦ E(Σ_k)` for the model at `q`. Panics are impossible for cycle types that fit, and
/// larger ones have expectation zero.
pub fn expectation_fn(model: &RepresentationModel, q: usize) -> impl Fn(&CycleTypeIndex) -> Rational + '_ {
    move |k| model.sigma_expectation(q, k).expect("character oracle failed")
}

/// Classical cumulant `k(σ_1, ..., σ_n)` of the normalized character on disjoint cycles.
pub fn cycle_cumulant(model: &RepresentationModel, q: usize, lengths: &[usize]) -> Result<Rational> {
    if lengths.iter().sum::<usize>() > q {
        return Err(Error::SizeMismatch(format!("cycles {lengths:?} do not fit in S_{q}")));
    }
    let mut failure = None;
    let table = moments_to_cumulants(
        lengths.len(),
        |s| {
            let k = CycleTypeIndex::new(s.iter().map(|&i| lengths[i]).collect()).expect("positive");
            model.character(q, &k).unwrap_or_else(|e| {
                failure = Some(e);
                Rational::zero()
            })
        },
        &Scalars,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(table.full().clone()),
    }
}

/// Classical cumulant of free cumulants `k(R_{m_1}, ..., R_{m_n})` under a measure.
pub fn free_cumulant_cumulant(measure: &CanonicalMeasure, orders: &[usize]) -> Result<Rational> {
    let top = orders.iter().copied().max().unwrap_or(0);
    let values: Vec<(Rational, Vec<Rational>)> = measure
        .support()
        .map(|(d, p)| {
            let r = d.free_cumulants(top);
            (p.clone(), orders.iter().map(|&m| r[m].clone()).collect())
        })
        .collect();
    let table = moments_to_cumulants(
        orders.len(),
        |s| values.iter().fold(Rational::zero(), |acc, (p, v)| acc + s.iter().fold(p.clone(), |x, &i| x * &v[i])),
        &Scalars,
    )?;
    Ok(table.full().clone())
}

/// `base · q^{half_exponent / 2}`, exact whenever the exponent is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledValue {
    pub base: Rational,
    pub q: usize,
    pub half_exponent: i64,
}

impl ScaledValue {
    pub fn exact(&self) -> Option<Rational> {
        (self.half_exponent % 2 == 0).then(|| &self.base * powi(&Rational::from_integer(self.q.into()), self.half_exponent / 2))
    }

    /// `base² · q^{half_exponent}`, always exact.
    pub fn square(&self) -> Rational {
        pow(&self.base, 2) * powi(&Rational::from_integer(self.q.into()), self.half_exponent)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.base) * (self.q as f64).powf(self.half_exponent as f64 / 2.0)
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(x) => write!(f, "{}", format_rational(&x)),
            None if self.base.is_zero() => f.write_str("0"),
            None => write!(f, "{:.12e}", self.to_f64()),
        }
    }
}

/// One scaled quantity of a factorization condition at a given `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosticRow {
    pub q: usize,
    /// 1: cumulants of characters on disjoint cycles; 2: disjoint cumulants of `Σ_l`;
    /// 3: natural cumulants of `Σ_l`; 4: cumulants of free cumulants `R_l`.
    pub condition: u8,
    pub indices: Vec<usize>,
    pub value: ScaledValue,
    pub predicted: Option<Rational>,
}

impl DiagnosticRow {
    pub fn indices_text(&self) -> String {
        self.indices.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }

    /// `|value - predicted|`, when a prediction exists.
    pub fn deviation(&self) -> Option<f64> {
        self.predicted.as_ref().map(|p| (self.value.to_f64() - to_f64(p)).abs())
    }
}

/// Scaled cumulants of orders 1 and `n_max <= 2` for indices up to `max_index`
/// (free cumulant orders up to `max_index + 1`), together with the predicted limits the
/// model supplies.
pub fn factorization_diagnostics(
    model: &RepresentationModel,
    q_list: &[usize],
    n_max: usize,
    max_index: usize,
) -> Result<Vec<DiagnosticRow>> {
    if !(1..=2).contains(&n_max) {
        return Err(Error::InvalidModel(format!("diagnostics support cumulant orders 1 and 2, got {n_max}")));
    }
    let mut rows = Vec::new();
    for &q in q_list {
        let measure = model.canonical_measure(q)?;
        let e = expectation_fn(model, q);
        let cycles: Vec<usize> = (1..=max_index.min(q)).collect();
        let mut index_sets: Vec<Vec<usize>> = cycles.iter().map(|&l| vec![l]).collect();
        if n_max == 2 {
            for &a in &cycles {
                for &b in cycles.iter().filter(|&&b| b >= a) {
                    index_sets.push(vec![a, b]);
                }
            }
        }
        let sum = |ix: &[usize]| ix.iter().sum::<usize>() as i64;
        for ix in &index_sets {
            let n = ix.len() as i64;
            let limit = |f: &dyn Fn() -> Result<Rational>| f().ok();
            // condition 1, on disjoint cycles that fit in S_q
            if sum(ix) <= q as i64 {
                let v = cycle_cumulant(model, q, ix)?;
                let predicted = match ix.as_slice() {
                    [l] => limit(&|| model.limit_constant(l + 1)),
                    [a, b] => limit(&|| model.cycle_covariance_limit(*a, *b)),
                    _ => None,
                };
                let h = sum(ix) - n + 2 * (n - 1);
                rows.push(DiagnosticRow { q, condition: 1, indices: ix.clone(), value: ScaledValue { base: v, q, half_exponent: h }, predicted });
            }
            // conditions 2 and 3
            let h = -(sum(ix) - n + 2);
            let sigmas: Vec<SigmaCombination> = ix.iter().map(|&l| SigmaCombination::basis(CycleTypeIndex::cycle(l))).collect();
            let disjoint = disjoint_cumulant(&sigmas, &e)?;
            let classes: Vec<CycleTypeIndex> = ix.iter().map(|&l| CycleTypeIndex::cycle(l)).collect();
            let natural = eigenvalue_cumulant(&measure, &classes)?;
            let (p2, p3) = match ix.as_slice() {
                [l] => (limit(&|| model.limit_constant(l + 1)), limit(&|| model.limit_constant(l + 1))),
                [a, b] => (limit(&|| model.disjoint_covariance_limit(*a, *b)), limit(&|| predicted_limits(model, &[*a, *b]))),
                _ => (None, None),
            };
            rows.push(DiagnosticRow { q, condition: 2, indices: ix.clone(), value: ScaledValue { base: disjoint, q, half_exponent: h }, predicted: p2 });
            rows.push(DiagnosticRow { q, condition: 3, indices: ix.clone(), value: ScaledValue { base: natural, q, half_exponent: h }, predicted: p3 });
            // condition 4, on free cumulants R_{l+1}
            let orders: Vec<usize> = ix.iter().map(|l| l + 1).collect();
            let v = free_cumulant_cumulant(&measure, &orders)?;
            let h = -(sum(ix) + n - 2 * (n - 1));
            let predicted = match ix.as_slice() {
                [l] => limit(&|| model.limit_constant(l + 1)),
                [a, b] => limit(&|| predicted_limits(model, &[*a, *b])),
                _ => None,
            };
            rows.push(DiagnosticRow { q, condition: 4, indices: orders, value: ScaledValue { base: v, q, half_exponent: h }, predicted });
        }
    }
    Ok(rows)
}

/// Writes rows with columns `q, condition, indices, value, predicted_limit`.
pub fn write_diagnostics_csv<W: Write>(rows: &[DiagnosticRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["q", "condition", "indices", "value", "predicted_limit"]).map_err(io)?;
    for r in rows {
        w.write_record([
            r.q.to_string(),
            r.condition.to_string(),
            r.indices_text(),
            r.value.to_string(),
            r.predicted.as_ref().map(format_rational).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};

    fn ct(s: &str) -> CycleTypeIndex {
        s.parse().unwrap()
    }

    #[test]
    fn plancherel_second_cumulant() {
        let m = RepresentationModel::Plancherel;
        for q in 4..=8 {
            let k = exact_cumulants(&m, q, &[ct("2"), ct("2")], Species::Natural).unwrap();
            assert_eq!(k, rat((2 * q * (q - 1)) as i64));
        }
    }

    #[test]
    fn plancherel_means_vanish() {
        let m = RepresentationModel::Plancherel;
        for q in 2..=8 {
            assert_eq!(exact_cumulants(&m, q, &[ct("1")], Species::Natural).unwrap(), rat(q as i64));
            for l in 2..=q {
                assert_eq!(exact_cumulants(&m, q, &[CycleTypeIndex::cycle(l)], Species::Natural).unwrap(), rat(0));
            }
        }
    }

    #[test]
    fn tensor_cycle_cumulants_factor() {
        let m = RepresentationModel::tensor_fixed(3).unwrap();
        assert_eq!(cycle_cumulant(&m, 8, &[2, 3]).unwrap(), rat(0));
        assert_eq!(cycle_cumulant(&m, 8, &[2, 2, 3]).unwrap(), rat(0));
        assert_eq!(cycle_cumulant(&m, 8, &[3]).unwrap(), frac(1, 9));
    }

    #[test]
    fn scaled_values() {
        let v = ScaledValue { base: rat(3), q: 4, half_exponent: -2 };
        assert_eq!(v.exact(), Some(frac(3, 4)));
        let w = ScaledValue { base: frac(1, 3), q: 9, half_exponent: 1 };
        assert_eq!(w.exact(), None);
        assert_eq!(w.square(), rat(1));
        assert!((w.to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn plancherel_diagnostics_condition_three() {
        let rows = factorization_diagnostics(&RepresentationModel::Plancherel, &[4, 6], 2, 2).unwrap();
        for q in [4usize, 6] {
            let r = rows.iter().find(|r| r.q == q && r.condition == 3 && r.indices == vec![2, 2]).unwrap();
            assert_eq!(r.value.exact().unwrap(), Rational::new((2 * (q as i64 - 1)).into(), (q as i64).into()));
            assert_eq!(r.predicted, Some(rat(2)));
            let r = rows.iter().find(|r| r.q == q && r.condition == 1 && r.indices == vec![2]).unwrap();
            assert_eq!(r.value.exact(), None);
            assert_eq!(r.value.square(), rat(0));
        }
        let mut buf = Vec::new();
        write_diagnostics_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("q,condition,indices,value,predicted_limit\n"));
        assert!(text.contains("4,3,2 2,3/2,2\n"));
    }
}
