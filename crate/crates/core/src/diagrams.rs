//! Young diagrams, their profiles, transition measures, moments and free cumulants.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{pow, Rational};

/// Weakly decreasing positive row lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(try_from = "String", into = "String")]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(mut rows: Vec<usize>) -> Result<Self> {
        rows.retain(|&r| r > 0);
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("rows {rows:?} are not weakly decreasing")));
        }
        Ok(YoungDiagram { rows })
    }

    /// Sorts the rows first.
    pub fn from_unsorted(mut rows: Vec<usize>) -> Self {
        rows.sort_unstable_by(|a, b| b.cmp(a));
        rows.retain(|&r| r > 0);
        YoungDiagram { rows }
    }

    pub fn empty() -> Self {
        YoungDiagram::default()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn conjugate(&self) -> YoungDiagram {
        let width = self.rows.first().copied().unwrap_or(0);
        let cols = (0..width).map(|j| self.rows.iter().take_while(|&&r| r > j).count()).collect();
        YoungDiagram { rows: cols }
    }

    /// Hook lengths, row by row.
    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size());
        for (i, &r) in self.rows.iter().enumerate() {
            for j in 0..r {
                out.push((r - j - 1) + (conj.rows[j] - i - 1) + 1);
            }
        }
        out
    }

    /// Minima (contents of addable cells) and maxima (contents of removable cells).
    pub fn profile(&self) -> Profile {
        let mut minima = Vec::new();
        let mut maxima = Vec::new();
        let len = self.rows.len();
        for i in 0..=len {
            let r = if i < len { self.rows[i] } else { 0 };
            if i == 0 || self.rows[i - 1] > r {
                minima.push(r as i64 - i as i64);
            }
            if i < len && (i + 1 == len || self.rows[i + 1] < r) {
                maxima.push(r as i64 - 1 - i as i64);
            }
        }
        minima.sort_unstable();
        maxima.sort_unstable();
        Profile { minima, maxima }
    }

    /// `Σ x_i^n - Σ y_j^n - 0^n` over the profile corners.
    pub fn p_tilde(&self, n: u32) -> Rational {
        let p = self.profile();
        let mut s = power_sum_difference(&p, n);
        if n == 0 {
            s -= 1;
        }
        Rational::from_integer(s)
    }

    pub fn transition_measure(&self) -> TransitionMeasure {
        let p = self.profile();
        let xs: Vec<Rational> = p.minima.iter().map(|&x| Rational::from_integer(x.into())).collect();
        let weights = xs
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let num = p.maxima.iter().fold(Rational::one(), |acc, &y| acc * (x - Rational::from_integer(y.into())));
                let den = xs.iter().enumerate().filter(|(k, _)| *k != i).fold(Rational::one(), |acc, (_, z)| acc * (x - z));
                num / den
            })
            .collect();
        TransitionMeasure { atoms: xs, weights }
    }

    /// Moments `M_0..M_N` of the transition measure through `n M_n = Σ_{k=1}^n P_k M_{n-k}`
    /// with `P_k = Σ x^k - Σ y^k`.
    pub fn moments(&self, n: usize) -> Vec<Rational> {
        let p = self.profile();
        let sums: Vec<Rational> = (0..=n).map(|k| Rational::from_integer(power_sum_difference(&p, k as u32))).collect();
        let mut m = vec![Rational::one()];
        for order in 1..=n {
            let s = (1..=order).fold(Rational::zero(), |acc, k| acc + &sums[k] * &m[order - k]);
            m.push(s / Rational::from_integer(order.into()));
        }
        m
    }

    /// Free cumulants `R_0..R_N` of the transition measure (`R_0 = 0`).
    pub fn free_cumulants(&self, n: usize) -> Vec<Rational> {
        free_cumulants(&self.moments(n))
    }
}

fn power_sum_difference(p: &Profile, n: u32) -> BigInt {
    let xs: BigInt = p.minima.iter().map(|&x| num_traits::pow(BigInt::from(x), n as usize)).sum();
    let ys: BigInt = p.maxima.iter().map(|&y| num_traits::pow(BigInt::from(y), n as usize)).sum();
    xs - ys
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.rows.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for YoungDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(YoungDiagram::empty());
        }
        let rows = s
            .split('+')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad diagram `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        if rows.contains(&0) {
            return Err(Error::Parse(format!("bad diagram `{s}`")));
        }
        YoungDiagram::new(rows)
    }
}

impl TryFrom<String> for YoungDiagram {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<YoungDiagram> for String {
    fn from(d: YoungDiagram) -> String {
        d.to_string()
    }
}

/// All diagrams with `q` boxes, in reverse lexicographic order (`(q)` first).
pub fn diagrams_of_size(q: usize) -> Vec<YoungDiagram> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if rem == 0 {
            out.push(YoungDiagram { rows: cur.clone() });
            return;
        }
        for k in (1..=rem.min(max)).rev() {
            cur.push(k);
            rec(rem - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(q, q, &mut Vec::new(), &mut out);
    out
}

/// Interlacing corner contents of a diagram in the rotated (Russian) picture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub minima: Vec<i64>,
    pub maxima: Vec<i64>,
}

impl Profile {
    pub fn is_interlacing(&self) -> bool {
        if self.minima.len() != self.maxima.len() + 1 {
            return false;
        }
        (0..self.maxima.len()).all(|i| self.minima[i] < self.maxima[i] && self.maxima[i] < self.minima[i + 1])
    }

    /// All corners in increasing order, alternating minimum and maximum.
    pub fn corners(&self) -> Vec<i64> {
        let mut c = Vec::with_capacity(self.minima.len() + self.maxima.len());
        for i in 0..self.minima.len() {
            c.push(self.minima[i]);
            if i < self.maxima.len() {
                c.push(self.maxima[i]);
            }
        }
        c
    }
}

/// Finitely supported probability measure; atoms ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMeasure {
    pub atoms: Vec<Rational>,
    pub weights: Vec<Rational>,
}

impl TransitionMeasure {
    pub fn new(atoms: Vec<Rational>, weights: Vec<Rational>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::SizeMismatch("atoms and weights".into()));
        }
        Ok(TransitionMeasure { atoms, weights })
    }

    pub fn total_mass(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |a, w| a + w)
    }

    /// `M_0..M_N`.
    pub fn moments(&self, n: usize) -> Vec<Rational> {
        (0..=n)
            .map(|k| self.atoms.iter().zip(&self.weights).fold(Rational::zero(), |acc, (x, w)| acc + pow(x, k as u32) * w))
            .collect()
    }

    pub fn free_cumulants(&self, n: usize) -> Vec<Rational> {
        free_cumulants(&self.moments(n))
    }

    /// Image under `x ↦ p x`.
    pub fn dilate(&self, p: &Rational) -> Result<TransitionMeasure> {
        if !p.is_positive() {
            return Err(Error::InvalidModel(format!("dilation factor must be positive, got {p}")));
        }
        Ok(TransitionMeasure { atoms: self.atoms.iter().map(|x| x * p).collect(), weights: self.weights.clone() })
    }
}

/// Truncated power series product, keeping orders `0..=n`.
fn series_mul(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Free cumulants `R_0..R_N` (`R_0 = 0`) from moments `M_0..M_N` (`M_0 = 1`), using
/// `M(z) = 1 + Σ_n R_n z^n M(z)^n`.
pub fn free_cumulants(moments: &[Rational]) -> Vec<Rational> {
    let n = moments.len() - 1;
    let mut r = vec![Rational::zero(); n + 1];
    // powers[k] = M(z)^k truncated at order n
    let mut powers = vec![vec![Rational::zero(); n + 1]];
    powers[0][0] = Rational::one();
    for k in 1..=n {
        let next = series_mul(&powers[k - 1], moments, n);
        powers.push(next);
    }
    for order in 1..=n {
        let mut s = moments[order].clone();
        for k in 1..order {
            s -= &r[k] * &powers[k][order - k];
        }
        r[order] = s;
    }
    r
}

/// Moments `M_0..M_N` from free cumulants `R_0..R_N`.
pub fn moments_from_free_cumulants(r: &[Rational]) -> Vec<Rational> {
    let n = r.len() - 1;
    let mut m = vec![Rational::zero(); n + 1];
    m[0] = Rational::one();
    for order in 1..=n {
        // [z^{order-k}] M^k only involves M_0..M_{order-1}
        let mut acc = Rational::zero();
        let mut power = m.clone();
        power.truncate(order);
        power.resize(n + 1, Rational::zero());
        let mut pk = vec![Rational::zero(); n + 1];
        pk[0] = Rational::one();
        for k in 1..=order {
            pk = series_mul(&pk, &power, n);
            acc += &r[k] * &pk[order - k];
        }
        m[order] = acc;
    }
    m
}

/// Writes rows `q, R_2, ..., R_N`; each row holds the values from `R_2` on.
pub fn write_free_cumulant_csv<W: std::io::Write, T: fmt::Display>(rows: &[(usize, Vec<T>)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    let width = rows.iter().map(|(_, r)| r.len()).max().unwrap_or(0);
    let header: Vec<String> = std::iter::once("q".to_string()).chain((2..width + 2).map(|n| format!("R_{n}"))).collect();
    w.write_record(&header).map_err(io)?;
    for (q, values) in rows {
        let rec: Vec<String> = std::iter::once(q.to_string()).chain(values.iter().map(ToString::to_string)).collect();
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
