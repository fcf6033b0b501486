//! Sequences of representations of `S_q`, given by exact normalized character oracles, and
//! the asymptotic constants predicted for their fluctuations.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::{canonical_measure, normalized_character, CanonicalMeasure};
use crate::conjugacy::CycleTypeIndex;
use crate::cumulants::compositions;
use crate::diagrams::{free_cumulants, YoungDiagram};
use crate::error::{Error, Result};
use crate::num::{binomial, falling, format_rational, parse_rational, pow, round_rational, round_sqrt, sqrt_exact, Rational};

/// Integer sequence `q ↦ r_q` used by the combinators.
#[derive(Clone)]
pub enum SizeRule {
    /// `r_q = round(factor · q)`.
    Scaled(Rational),
    Function(Arc<dyn Fn(usize) -> usize + Send + Sync>),
}

impl SizeRule {
    pub fn at(&self, q: usize) -> usize {
        match self {
            SizeRule::Scaled(f) => round_rational(&(f * Rational::from_integer(q.into()))).to_usize().unwrap_or(0),
            SizeRule::Function(f) => f(q),
        }
    }
}

impl fmt::Debug for SizeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeRule::Scaled(x) => write!(f, "Scaled({})", format_rational(x)),
            SizeRule::Function(_) => write!(f, "Function"),
        }
    }
}

/// Dimension `d_q` of the space `(C^{d_q})^{⊗q}`.
#[derive(Clone)]
pub enum TensorDims {
    /// `d_q = round(√q / p)` for a limit `p > 0`.
    FromLimit(Rational),
    Fixed(u64),
    Function(Arc<dyn Fn(usize) -> u64 + Send + Sync>),
}

impl fmt::Debug for TensorDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorDims::FromLimit(p) => write!(f, "FromLimit({})", format_rational(p)),
            TensorDims::Fixed(d) => write!(f, "Fixed({d})"),
            TensorDims::Function(_) => write!(f, "Function"),
        }
    }
}

/// Free cumulant `R_m` of a limit measure, for `m >= 2`.
pub type LimitCumulants = Arc<dyn Fn(usize) -> Rational + Send + Sync>;

/// How the irreducible model picks `λ_q ⊢ q`.
#[derive(Clone)]
pub enum ShapeSequence {
    /// `(m, m-1, ..., 1)` with the leftover boxes added to the first rows.
    Staircase,
    /// `⌊√q⌋ × ⌊√q⌋` square with the leftover boxes in at most two extra rows.
    Rectangular,
    Custom { generator: Arc<dyn Fn(usize) -> YoungDiagram + Send + Sync>, limit: Option<LimitCumulants> },
}

impl fmt::Debug for ShapeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeSequence::Staircase => write!(f, "Staircase"),
            ShapeSequence::Rectangular => write!(f, "Rectangular"),
            ShapeSequence::Custom { .. } => write!(f, "Custom"),
        }
    }
}

impl ShapeSequence {
    pub fn at(&self, q: usize) -> YoungDiagram {
        match self {
            ShapeSequence::Staircase => {
                let mut m = 0;
                while (m + 1) * (m + 2) / 2 <= q {
                    m += 1;
                }
                let rem = q - m * (m + 1) / 2;
                let rows = (0..m).map(|i| m - i + usize::from(i < rem)).collect();
                YoungDiagram::new(rows).expect("strictly decreasing")
            }
            ShapeSequence::Rectangular => {
                let m = (q as f64).sqrt() as usize;
                let m = (m.saturating_sub(1)..=m + 1).filter(|k| k * k <= q).max().unwrap_or(0);
                let rem = q - m * m;
                let mut rows = vec![m; m];
                if rem > m {
                    rows.push(m);
                    rows.push(rem - m);
                } else {
                    rows.push(rem);
                }
                YoungDiagram::new(rows).expect("weakly decreasing")
            }
            ShapeSequence::Custom { generator, .. } => generator(q),
        }
    }

    /// `R_m` of the limit of the transition measures of `q^{-1/2} λ_q`.
    fn limit_cumulant(&self, m: usize) -> Option<Rational> {
        match self {
            // ½δ_{-1} + ½δ_1
            ShapeSequence::Rectangular => {
                let moments: Vec<Rational> = (0..=m).map(|k| if k % 2 == 0 { Rational::one() } else { Rational::zero() }).collect();
                Some(free_cumulants(&moments)[m].clone())
            }
            // arcsine law on [-√2, √2]: M_{2k} = C(2k, k) / 2^k
            ShapeSequence::Staircase => {
                let moments: Vec<Rational> = (0..=m)
                    .map(|k| {
                        if k % 2 == 0 {
                            Rational::new(binomial(k, k / 2), BigInt::from(2).pow((k / 2) as u32))
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                Some(free_cumulants(&moments)[m].clone())
            }
            ShapeSequence::Custom { limit, .. } => limit.as_ref().map(|f| f(m)),
        }
    }
}

/// A sequence `(ρ_q)` of representations of `S_q`.
#[derive(Clone, Debug)]
pub enum RepresentationModel {
    /// Left-regular representation.
    Plancherel,
    /// `(C^{d_q})^{⊗q}` with `S_q` permuting the factors.
    Tensor(TensorDims),
    Irreducible(ShapeSequence),
    /// `ρ_{r_q}` restricted to `S_q ⊆ S_{r_q}`, `r_q >= q`, `p = lim q / r_q`.
    Restrict { base: Arc<RepresentationModel>, sizes: SizeRule, p: Rational },
    /// `ρ_{r_q}` induced from `S_{r_q}` to `S_q`, `r_q <= q`, `p = lim r_q / q`.
    Induce { base: Arc<RepresentationModel>, sizes: SizeRule, p: Rational },
    /// `ρ¹_{r_q} ∘ ρ²_{q - r_q}`, `p = lim r_q / q`.
    Outer { first: Arc<RepresentationModel>, second: Arc<RepresentationModel>, sizes: SizeRule, p: Rational },
    /// `ρ¹_q ⊗ ρ²_q`.
    TensorProduct { first: Arc<RepresentationModel>, second: Arc<RepresentationModel> },
}

/// How samples of the canonical measure are drawn at large `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    UniformPermutation,
    UniformWord { alphabet: u64 },
}

impl RepresentationModel {
    pub fn plancherel() -> Self {
        RepresentationModel::Plancherel
    }

    /// `d_q = round(√q / p)`.
    pub fn tensor(p: Rational) -> Result<Self> {
        if !p.is_positive() {
            return Err(Error::InvalidModel("tensor model needs p > 0 (p = 0 is the Plancherel limit)".into()));
        }
        Ok(RepresentationModel::Tensor(TensorDims::FromLimit(p)))
    }

    pub fn tensor_fixed(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidModel("d_q must be at least 1".into()));
        }
        Ok(RepresentationModel::Tensor(TensorDims::Fixed(d)))
    }

    pub fn irreducible(shapes: ShapeSequence) -> Self {
        RepresentationModel::Irreducible(shapes)
    }

    /// Restriction from `S_{round(q/p)}`, `0 < p <= 1`.
    pub fn restrict(base: RepresentationModel, p: Rational) -> Result<Self> {
        if !p.is_positive() || p > Rational::one() {
            return Err(Error::InvalidModel(format!("restriction needs 0 < p <= 1, got {}", format_rational(&p))));
        }
        Ok(RepresentationModel::Restrict { base: Arc::new(base), sizes: SizeRule::Scaled(p.recip()), p })
    }

    /// Restriction with an explicit size sequence and the limit `p = lim q / r_q` (possibly 0).
    pub fn restrict_with(base: RepresentationModel, sizes: SizeRule, p: Rational) -> Result<Self> {
        if p.is_negative() || p > Rational::one() {
            return Err(Error::InvalidModel(format!("restriction needs 0 <= p <= 1, got {}", format_rational(&p))));
        }
        Ok(RepresentationModel::Restrict { base: Arc::new(base), sizes, p })
    }

    /// Induction from `S_{round(p q)}`, `0 < p <= 1`.
    pub fn induce(base: RepresentationModel, p: Rational) -> Result<Self> {
        if !p.is_positive() || p > Rational::one() {
            return Err(Error::InvalidModel(format!("induction needs 0 < p <= 1, got {}", format_rational(&p))));
        }
        Ok(RepresentationModel::Induce { base: Arc::new(base), sizes: SizeRule::Scaled(p.clone()), p })
    }

    /// Outer product with `r_q = round(p q)` boxes in the first factor, `0 < p < 1`.
    pub fn outer(first: RepresentationModel, second: RepresentationModel, p: Rational) -> Result<Self> {
        if !p.is_positive() || p >= Rational::one() {
            return Err(Error::InvalidModel(format!("outer product needs 0 < p < 1, got {}", format_rational(&p))));
        }
        Ok(RepresentationModel::Outer { first: Arc::new(first), second: Arc::new(second), sizes: SizeRule::Scaled(p.clone()), p })
    }

    pub fn tensor_product(first: RepresentationModel, second: RepresentationModel) -> Self {
        RepresentationModel::TensorProduct { first: Arc::new(first), second: Arc::new(second) }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RepresentationModel::Plancherel => "plancherel",
            RepresentationModel::Tensor(_) => "tensor",
            RepresentationModel::Irreducible(_) => "irreducible",
            RepresentationModel::Restrict { .. } => "restrict",
            RepresentationModel::Induce { .. } => "induce",
            RepresentationModel::Outer { .. } => "outer",
            RepresentationModel::TensorProduct { .. } => "tensor-product",
        }
    }

    /// `d_q` of the tensor model.
    pub fn tensor_dimension(&self, q: usize) -> Result<u64> {
        let RepresentationModel::Tensor(dims) = self else {
            return Err(Error::InvalidModel(format!("{} has no tensor dimension", self.name())));
        };
        let d = match dims {
            TensorDims::FromLimit(p) => {
                let x = Rational::from_integer(q.into()) / (p * p);
                round_sqrt(&x).to_u64().unwrap_or(0)
            }
            TensorDims::Fixed(d) => *d,
            TensorDims::Function(f) => f(q),
        };
        if d == 0 {
            return Err(Error::InvalidModel(format!("tensor model gives d_q = 0 at q = {q}")));
        }
        Ok(d)
    }

    pub fn sampler(&self, q: usize) -> Result<SamplerKind> {
        match self {
            RepresentationModel::Plancherel => Ok(SamplerKind::UniformPermutation),
            RepresentationModel::Tensor(_) => Ok(SamplerKind::UniformWord { alphabet: self.tensor_dimension(q)? }),
            other => Err(Error::ExactModeOnly(other.name().into())),
        }
    }

    /// Normalized character `χ(π) = tr ρ_q(π) / dim ρ_q` on a permutation whose nontrivial
    /// cycle lengths are the rows of `k` (rows of length one are ignored).
    pub fn character(&self, q: usize, k: &CycleTypeIndex) -> Result<Rational> {
        let k = k.nontrivial();
        let m = k.moved_points();
        if m > q {
            return Err(Error::SizeMismatch(format!("cycle type {k} does not fit in S_{q}")));
        }
        if k.is_empty() {
            return Ok(Rational::one());
        }
        match self {
            RepresentationModel::Plancherel => Ok(Rational::zero()),
            RepresentationModel::Tensor(_) => {
                let d = BigInt::from(self.tensor_dimension(q)?);
                Ok(Rational::new(BigInt::one(), d.pow(k.transposition_length() as u32)))
            }
            RepresentationModel::Irreducible(shapes) => {
                let lambda = shapes.at(q);
                if lambda.size() != q {
                    return Err(Error::InvalidModel(format!("shape generator returned {lambda} for q = {q}")));
                }
                normalized_character(&lambda, &k)
            }
            RepresentationModel::Restrict { base, sizes, .. } => {
                let r = sizes.at(q);
                if r < q {
                    return Err(Error::InvalidModel(format!("restriction needs r_q >= q, got r_{q} = {r}")));
                }
                base.character(r, &k)
            }
            RepresentationModel::Induce { base, sizes, .. } => {
                let r = sizes.at(q);
                if r > q {
                    return Err(Error::InvalidModel(format!("induction needs r_q <= q, got r_{q} = {r}")));
                }
                if m > r {
                    return Ok(Rational::zero());
                }
                let ratio = Rational::new(falling(r, m), falling(q, m));
                Ok(ratio * base.character(r, &k)?)
            }
            RepresentationModel::Outer { first, second, sizes, .. } => {
                let r1 = sizes.at(q);
                if r1 == 0 || r1 >= q {
                    return Err(Error::InvalidModel(format!("outer product needs 0 < r_q < q, got r_{q} = {r1}")));
                }
                let r2 = q - r1;
                let rows = k.rows();
                let mut total = Rational::zero();
                for subset in 0u32..(1 << rows.len()) {
                    let (mut a, mut b) = (Vec::new(), Vec::new());
                    for (i, &l) in rows.iter().enumerate() {
                        if subset & (1 << i) != 0 {
                            a.push(l);
                        } else {
                            b.push(l);
                        }
                    }
                    let (ka, kb) = (CycleTypeIndex::new(a)?, CycleTypeIndex::new(b)?);
                    let (ma, mb) = (ka.moved_points(), kb.moved_points());
                    if ma > r1 || mb > r2 {
                        continue;
                    }
                    let weight = Rational::new(falling(r1, ma) * falling(r2, mb), falling(q, m));
                    total += weight * first.character(r1, &ka)? * second.character(r2, &kb)?;
                }
                Ok(total)
            }
            RepresentationModel::TensorProduct { first, second } => Ok(first.character(q, &k)? * second.character(q, &k)?),
        }
    }

    /// `E(Σ_k) = q↓|k| χ(k)`; zero when `|k| > q`.
    pub fn sigma_expectation(&self, q: usize, k: &CycleTypeIndex) -> Result<Rational> {
        if k.size() > q {
            return Ok(Rational::zero());
        }
        Ok(Rational::from_integer(falling(q, k.size())) * self.character(q, k)?)
    }

    pub fn canonical_measure(&self, q: usize) -> Result<CanonicalMeasure> {
        canonical_measure(q, |k| self.character(q, k))
    }

    /// `c_m = lim E(R_m) q^{-m/2}` for `m >= 2`, when the model determines it.
    pub fn limit_constant(&self, m: usize) -> Result<Rational> {
        assert!(m >= 2);
        let unavailable = || Error::InvalidModel(format!("{} has no predicted constant c_{m}", self.name()));
        let l = (m - 1) as u32;
        match self {
            RepresentationModel::Plancherel | RepresentationModel::TensorProduct { .. } => {
                Ok(if m == 2 { Rational::one() } else { Rational::zero() })
            }
            RepresentationModel::Tensor(TensorDims::FromLimit(p)) => Ok(pow(p, l - 1)),
            RepresentationModel::Tensor(_) => Err(unavailable()),
            RepresentationModel::Irreducible(shapes) => shapes.limit_cumulant(m).ok_or_else(unavailable),
            RepresentationModel::Restrict { base, p, .. } => Ok(pow(&root(p)?, l - 1) * base.limit_constant(m)?),
            RepresentationModel::Induce { base, p, .. } => {
                if m == 2 {
                    Ok(Rational::one())
                } else {
                    Ok(pow(&root(p)?, l + 1) * base.limit_constant(m)?)
                }
            }
            RepresentationModel::Outer { first, second, p, .. } => {
                let p2 = Rational::one() - p;
                Ok(pow(&root(p)?, l + 1) * first.limit_constant(m)? + pow(&root(&p2)?, l + 1) * second.limit_constant(m)?)
            }
        }
    }

    /// `lim Cov(σ_1, σ_2) q^{(l1+l2)/2}` for disjoint cycles of lengths `l1`, `l2`.
    pub fn cycle_covariance_limit(&self, l1: usize, l2: usize) -> Result<Rational> {
        match self {
            RepresentationModel::Plancherel | RepresentationModel::TensorProduct { .. } | RepresentationModel::Tensor(_) => {
                // characters of these models are multiplicative on disjoint supports
                if let RepresentationModel::Tensor(dims) = self {
                    if !matches!(dims, TensorDims::FromLimit(_)) {
                        return Err(Error::InvalidModel("tensor model without a limit p".into()));
                    }
                }
                Ok(Rational::zero())
            }
            // deterministic diagrams: the natural covariance of Σ vanishes
            RepresentationModel::Irreducible(_) => {
                let c1 = self.limit_constant(l1 + 1)?;
                let c2 = self.limit_constant(l2 + 1)?;
                Ok(Rational::from_integer(((l1 * l2) as i64).into()) * c1 * c2 - composition_sum(self, l1, l2)?)
            }
            RepresentationModel::Restrict { base, p, .. } => Ok(pow(&root(p)?, (l1 + l2) as u32) * base.cycle_covariance_limit(l1, l2)?),
            RepresentationModel::Outer { .. } => {
                let c1 = self.limit_constant(l1 + 1)?;
                let c2 = self.limit_constant(l2 + 1)?;
                Ok(self.disjoint_covariance_limit(l1, l2)? + Rational::from_integer(((l1 * l2) as i64).into()) * c1 * c2)
            }
            RepresentationModel::Induce { .. } => {
                Err(Error::InvalidModel("the covariance of the induced model is not available in closed form".into()))
            }
        }
    }

    /// `lim Cov•(Σ_{l1}, Σ_{l2}) q^{-(l1+l2)/2}`.
    pub fn disjoint_covariance_limit(&self, l1: usize, l2: usize) -> Result<Rational> {
        match self {
            RepresentationModel::Outer { first, second, p, .. } => {
                let p2 = Rational::one() - p;
                let e = (l1 + l2) as u32;
                Ok(pow(&root(p)?, e) * first.disjoint_covariance_limit(l1, l2)? + pow(&root(&p2)?, e) * second.disjoint_covariance_limit(l1, l2)?)
            }
            _ => {
                let c1 = self.limit_constant(l1 + 1)?;
                let c2 = self.limit_constant(l2 + 1)?;
                Ok(self.cycle_covariance_limit(l1, l2)? - Rational::from_integer(((l1 * l2) as i64).into()) * c1 * c2)
            }
        }
    }

    /// Closed form of `lim Cov(R_{l1+1}, R_{l2+1}) q^{-(l1+l2)/2}` where one is known
    /// independently of the general expressions.
    fn closed_form_covariance(&self, l1: usize, l2: usize) -> Result<Option<Rational>> {
        Ok(match self {
            RepresentationModel::Plancherel | RepresentationModel::TensorProduct { .. } => Some(kerov_covariance(l1, l2)),
            RepresentationModel::Tensor(TensorDims::FromLimit(p)) => {
                let mut s = Rational::zero();
                for r in 2..=l1.min(l2) {
                    let coeff = binomial(l1, r) * binomial(l2, r) * BigInt::from(r);
                    s += Rational::from_integer(coeff) * pow(p, (l1 + l2 - 2 * r) as u32);
                }
                Some(s)
            }
            RepresentationModel::Irreducible(_) => Some(Rational::zero()),
            RepresentationModel::Restrict { base, p, .. } => {
                let s = root(p)?;
                let e = (l1 + l2) as u32;
                let base_cov = predicted_limits(base, &[l1, l2])?;
                let c1 = base.limit_constant(l1 + 1)?;
                let c2 = base.limit_constant(l2 + 1)?;
                let ll = Rational::from_integer(((l1 * l2) as i64).into());
                let mut total = pow(&s, e) * base_cov - ll * c1 * c2 * (pow(&s, e - 2) - pow(&s, e));
                for r in 1..=l1.min(l2) {
                    let inner = composition_sum_r(base, l1, l2, r)?;
                    total += inner * (pow(&s, e - 2 * r as u32) - pow(&s, e));
                }
                Some(total)
            }
            _ => None,
        })
    }
}

fn root(p: &Rational) -> Result<Rational> {
    sqrt_exact(p).ok_or_else(|| {
        Error::InvalidModel(format!("predicted constants need p to be the square of a rational, got {}", format_rational(p)))
    })
}

/// `l1` if `l1 = l2 >= 2`, otherwise 0.
pub fn kerov_covariance(l1: usize, l2: usize) -> Rational {
    if l1 == l2 && l1 >= 2 {
        Rational::from_integer(l1.into())
    } else {
        Rational::zero()
    }
}

fn composition_sum_r(model: &RepresentationModel, l1: usize, l2: usize, r: usize) -> Result<Rational> {
    let weight = Rational::new(((l1 * l2) as i64).into(), (r as i64).into());
    let mut total = Rational::zero();
    for a in compositions(l1, r) {
        for b in compositions(l2, r) {
            let mut prod = weight.clone();
            for (x, y) in a.iter().zip(&b) {
                prod *= model.limit_constant(x + y)?;
            }
            total += prod;
        }
    }
    Ok(total)
}

/// `Σ_{r>=1} Σ_{a ⊨ l1, b ⊨ l2 with r parts} (l1 l2 / r) c_{a_1+b_1} ... c_{a_r+b_r}`.
pub fn composition_sum(model: &RepresentationModel, l1: usize, l2: usize) -> Result<Rational> {
    (1..=l1.min(l2)).try_fold(Rational::zero(), |acc, r| Ok(acc + composition_sum_r(model, l1, l2, r)?))
}

/// Predicted limits: for one index `[l]` the constant `c_{l+1}`; for two indices `[l1, l2]`
/// the limit of `Cov(R_{l1+1}, R_{l2+1}) q^{-(l1+l2)/2}`.
///
/// For covariances both general expressions (through the disjoint covariance and through
/// the covariance of disjoint cycles) are evaluated and must agree with each other and with
/// the model's closed form where one exists.
pub fn predicted_limits(model: &RepresentationModel, indices: &[usize]) -> Result<Rational> {
    match *indices {
        [l] if l >= 1 => model.limit_constant(l + 1),
        [l1, l2] if l1 >= 1 && l2 >= 1 => {
            let s = composition_sum(model, l1, l2)?;
            let via_disjoint = model.disjoint_covariance_limit(l1, l2)? + &s;
            let c1 = model.limit_constant(l1 + 1)?;
            let c2 = model.limit_constant(l2 + 1)?;
            let via_cycles =
                model.cycle_covariance_limit(l1, l2)? - Rational::from_integer(((l1 * l2) as i64).into()) * c1 * c2 + &s;
            if via_disjoint != via_cycles {
                return Err(Error::FormulaMismatch(format!(
                    "{} ({l1},{l2}): {} through Cov• but {} through cycles",
                    model.name(),
                    format_rational(&via_disjoint),
                    format_rational(&via_cycles)
                )));
            }
            if let Some(closed) = model.closed_form_covariance(l1, l2)? {
                if closed != via_disjoint {
                    return Err(Error::FormulaMismatch(format!(
                        "{} ({l1},{l2}): general expression {} but closed form {}",
                        model.name(),
                        format_rational(&via_disjoint),
                        format_rational(&closed)
                    )));
                }
            }
            Ok(via_disjoint)
        }
        _ => Err(Error::InvalidModel(format!("predicted limits need one or two indices >= 1, got {indices:?}"))),
    }
}

/// Serializable description of a model, as written in configuration files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<ModelSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<Box<ModelSpec>>,
}

impl ModelSpec {
    pub fn named(model: &str) -> Self {
        ModelSpec { model: model.into(), ..Default::default() }
    }

    pub fn build(&self) -> Result<RepresentationModel> {
        let p = || -> Result<Rational> {
            let text = self.p.as_deref().ok_or_else(|| Error::InvalidModel(format!("model `{}` needs p", self.model)))?;
            parse_rational(text)
        };
        let base = || -> Result<RepresentationModel> {
            self.base.as_ref().ok_or_else(|| Error::InvalidModel(format!("model `{}` needs a base model", self.model)))?.build()
        };
        let second = || -> Result<RepresentationModel> {
            self.second.as_ref().ok_or_else(|| Error::InvalidModel(format!("model `{}` needs a second model", self.model)))?.build()
        };
        match self.model.as_str() {
            "plancherel" => Ok(RepresentationModel::Plancherel),
            "tensor" => match (self.d, &self.p) {
                (Some(d), None) => RepresentationModel::tensor_fixed(d),
                (None, Some(_)) => RepresentationModel::tensor(p()?),
                _ => Err(Error::InvalidModel("tensor model needs exactly one of p and d".into())),
            },
            "irreducible" => match self.shape.as_deref() {
                Some("staircase") => Ok(RepresentationModel::irreducible(ShapeSequence::Staircase)),
                Some("rectangular") => Ok(RepresentationModel::irreducible(ShapeSequence::Rectangular)),
                other => Err(Error::InvalidModel(format!("irreducible model needs shape = staircase | rectangular, got {other:?}"))),
            },
            "restrict" => RepresentationModel::restrict(base()?, p()?),
            "induce" => RepresentationModel::induce(base()?, p()?),
            "outer" => RepresentationModel::outer(base()?, second()?, p()?),
            "tensor-product" => Ok(RepresentationModel::tensor_product(base()?, second()?)),
            other => Err(Error::InvalidModel(format!("unknown model `{other}`"))),
        }
    }
}
