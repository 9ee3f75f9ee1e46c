//! Multiplier sequences, fractional differences and weak-bounded-variation norms.

mod cutoff;
mod diff;
mod wbv;

pub use cutoff::{cutoff_phi, smooth_step};
pub use diff::{frac_diff, frac_diff_auto, frac_diff_finite, FracDiff, FracDiffOperator, DEFAULT_TAIL_TOL};
pub use wbv::{block_holder_excess, wbv_block, wbv_norm, WbvReport};

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Closed-form family of a multiplier sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `m_k = c`
    Constant(f64),
    /// `m_k = r^k`, `0 ≤ r < 1`
    Abel(f64),
    /// `m_k = (1 - k/(n+1))^δ` for `k ≤ n`, zero afterwards
    Riesz { n: usize, delta: f64 },
    /// `m_k = 1` for `k < len`, zero afterwards
    Characteristic(usize),
    /// `m_k = cos(a ln(k+1))`, the real part of `(k+1)^{ia}`
    Oscillating(f64),
    /// Finite table, zero beyond its length
    Tabulated(Vec<f64>),
}

/// A bounded sequence `m = {m_k}` acting diagonally on Laguerre coefficients.
///
/// Values are evaluated from the family descriptor on demand, so any index can
/// be queried and the tail behaviour is known exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSeq {
    family: Family,
    spec: String,
}

impl MultiplierSeq {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Constant(c) | Family::Oscillating(c) if !c.is_finite() => {
                return Err(Error::InvalidArgument(format!("non-finite parameter {c}")))
            }
            Family::Abel(r) if !(0.0..1.0).contains(r) => return Err(Error::InvalidRadius(*r)),
            Family::Riesz { delta, .. } if !(*delta > 0.0 && delta.is_finite()) => {
                return Err(Error::InvalidArgument(format!("Riesz exponent must be positive, got {delta}")))
            }
            Family::Tabulated(v) if v.iter().any(|x| !x.is_finite()) => {
                return Err(Error::InvalidArgument("tabulated sequence has non-finite entries".into()))
            }
            _ => {}
        }
        let spec = match &family {
            Family::Constant(c) => format!("constant:{c}"),
            Family::Abel(r) => format!("abel:{r}"),
            Family::Riesz { n, delta } => format!("riesz:{n}:{delta}"),
            Family::Characteristic(k) => format!("char:{k}"),
            Family::Oscillating(a) => format!("osc:{a}"),
            Family::Tabulated(v) => format!("tab[{}]", v.len()),
        };
        Ok(MultiplierSeq { family, spec })
    }

    pub fn constant(c: f64) -> Self {
        Self::new(Family::Constant(c)).expect("finite constant")
    }

    pub fn abel(r: f64) -> Result<Self> {
        Self::new(Family::Abel(r))
    }

    pub fn riesz(n: usize, delta: f64) -> Result<Self> {
        Self::new(Family::Riesz { n, delta })
    }

    pub fn characteristic(len: usize) -> Self {
        Self::new(Family::Characteristic(len)).expect("always valid")
    }

    pub fn oscillating(a: f64) -> Result<Self> {
        Self::new(Family::Oscillating(a))
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        Self::new(Family::Tabulated(values))
    }

    /// Parses the sequence mini-language: `constant:1.0`, `abel:0.9`, `riesz:128:1.5`,
    /// `char:64`, `osc:2.0` or `file:<path>` (one decimal value per line).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, rest) = spec.split_once(':').ok_or_else(|| Error::Parse(format!("sequence spec `{spec}` lacks a family prefix")))?;
        let num = |s: &str| -> Result<f64> { s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{s}` in `{spec}`"))) };
        let int = |s: &str| -> Result<usize> { s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad integer `{s}` in `{spec}`"))) };
        let mut seq = match head {
            "constant" => Self::new(Family::Constant(num(rest)?))?,
            "abel" => Self::abel(num(rest)?)?,
            "riesz" => {
                let (n, d) = rest.split_once(':').ok_or_else(|| Error::Parse(format!("riesz needs N and delta: `{spec}`")))?;
                Self::riesz(int(n)?, num(d)?)?
            }
            "char" => Self::characteristic(int(rest)?),
            "osc" => Self::oscillating(num(rest)?)?,
            "file" => Self::from_file(Path::new(rest))?,
            _ => return Err(Error::Parse(format!("unknown sequence family `{head}`"))),
        };
        if head == "file" {
            seq.spec = spec.to_string();
        }
        Ok(seq)
    }

    /// Reads a tabulated sequence, one value per line; blank lines are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let values = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.parse::<f64>().map_err(|_| Error::Parse(format!("bad value `{l}` in {}", path.display()))))
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(Error::Parse(format!("sequence file {} is empty", path.display())));
        }
        Self::tabulated(values)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Textual form accepted by [`MultiplierSeq::parse`] (tabulated tables print their length).
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn value(&self, k: usize) -> f64 {
        match &self.family {
            Family::Constant(c) => *c,
            Family::Abel(r) => r.powi(k.min(i32::MAX as usize) as i32),
            Family::Riesz { n, delta } => {
                if k <= *n {
                    (1.0 - k as f64 / (*n as f64 + 1.0)).powf(*delta)
                } else {
                    0.0
                }
            }
            Family::Characteristic(len) => {
                if k < *len {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Oscillating(a) => (a * (k as f64 + 1.0).ln()).cos(),
            Family::Tabulated(v) => v.get(k).copied().unwrap_or(0.0),
        }
    }

    /// `m_0, ..., m_{n-1}`
    pub fn values(&self, n: usize) -> Vec<f64> {
        match &self.family {
            Family::Abel(r) => {
                let mut acc = 1.0;
                (0..n)
                    .map(|_| {
                        let v = acc;
                        acc *= r;
                        v
                    })
                    .collect()
            }
            _ => (0..n).map(|k| self.value(k)).collect(),
        }
    }

    /// `sup_k |m_k|`, exact for every family.
    pub fn sup_abs(&self) -> f64 {
        match &self.family {
            Family::Constant(c) => c.abs(),
            Family::Abel(_) | Family::Riesz { .. } | Family::Oscillating(_) => 1.0,
            Family::Characteristic(len) => {
                if *len > 0 {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Tabulated(v) => v.iter().fold(0.0, |a, x| a.max(x.abs())),
        }
    }

    /// `sup_{k > K} |m_k|`
    pub fn tail_sup(&self, k: usize) -> f64 {
        match &self.family {
            Family::Constant(c) => c.abs(),
            Family::Abel(r) => r.powf(k as f64 + 1.0),
            // cos(a ln(j+1)) comes arbitrarily close to ±1 in every tail
            Family::Oscillating(_) => 1.0,
            _ => match self.support() {
                Some(s) if k + 1 >= s => 0.0,
                _ => (k + 1..self.support().unwrap_or(k + 1)).map(|j| self.value(j).abs()).fold(0.0, f64::max),
            },
        }
    }

    /// Index past the last possibly nonzero entry, for finitely supported families.
    pub fn support(&self) -> Option<usize> {
        match &self.family {
            Family::Riesz { n, .. } => Some(n + 1),
            Family::Characteristic(len) => Some(*len),
            Family::Tabulated(v) => Some(v.len()),
            Family::Abel(r) if *r == 0.0 => Some(1),
            Family::Constant(c) if *c == 0.0 => Some(0),
            _ => None,
        }
    }

    /// `lim_k m_k` where the family has one.
    pub fn limit(&self) -> Option<f64> {
        match &self.family {
            Family::Constant(c) => Some(*c),
            Family::Abel(_) | Family::Riesz { .. } | Family::Characteristic(_) | Family::Tabulated(_) => Some(0.0),
            Family::Oscillating(a) => (*a == 0.0).then_some(1.0),
        }
    }

    /// `ρ` with `|m_k - lim m| ≤ sup|m| ρ^k`; 1 when no geometric decay is known.
    pub fn decay_rate(&self) -> f64 {
        match &self.family {
            Family::Abel(r) => *r,
            Family::Constant(_) => 0.0,
            _ => 1.0,
        }
    }

    /// Upper bound on `Σ_{i ≥ start} |m_i - lim m|`, when finite.
    pub(crate) fn deviation_sum(&self, start: usize) -> Option<f64> {
        match &self.family {
            Family::Constant(_) => Some(0.0),
            Family::Abel(r) => Some(r.powf(start as f64) / (1.0 - r)),
            _ => self.support().map(|s| (start..s).map(|j| self.value(j).abs()).sum()),
        }
    }
}

impl fmt::Display for MultiplierSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

impl std::str::FromStr for MultiplierSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
