use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sequences::MultiplierSeq;

/// The experiment a configuration drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Verify,
    WbvEquivalence,
    MpinftyEmbedding,
    EmbeddingSweep,
    HardySuite,
    Charex,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Verify,
        Experiment::WbvEquivalence,
        Experiment::MpinftyEmbedding,
        Experiment::EmbeddingSweep,
        Experiment::HardySuite,
        Experiment::Charex,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Verify => "verify",
            Experiment::WbvEquivalence => "wbv-eq",
            Experiment::MpinftyEmbedding => "mpinf-embed",
            Experiment::EmbeddingSweep => "embed-sweep",
            Experiment::HardySuite => "hardy",
            Experiment::Charex => "charex",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .or(match s {
                "wbv-equivalence" => Some(Experiment::WbvEquivalence),
                "mpinfty-embedding" => Some(Experiment::MpinftyEmbedding),
                "embedding-sweep" => Some(Experiment::EmbeddingSweep),
                "hardy-suite" => Some(Experiment::HardySuite),
                _ => None,
            })
            .ok_or_else(|| Error::Parse(format!("unknown experiment '{s}'")))
    }
}

/// The default sequence bank.
pub fn default_bank() -> Vec<String> {
    let mut bank = vec!["constant:1".to_string(), "abel:0.5".into(), "abel:0.9".into(), "abel:0.99".into()];
    for n in [2, 4, 8, 16] {
        for d in ["0.5", "1", "2"] {
            bank.push(format!("riesz:{n}:{d}"));
        }
    }
    for n in [2, 4, 8, 16] {
        bank.push(format!("char:{n}"));
    }
    bank.push("osc:2".into());
    bank
}

/// Everything a run depends on. Text form: one `key = value` per line.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub bank: Vec<String>,
    /// Basis size for singular-value estimates.
    pub n: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub workers: usize,
    /// Subdivision factor of the default r-grid.
    pub r_density: usize,
    /// Largest dyadic block for wbv norms.
    pub wbv_nmax: usize,
    /// Random candidates per lower-bound search.
    pub trials: usize,
    /// Hardy suite: number of random instances per side and their length.
    pub instances: usize,
    pub hardy_len: usize,
    /// Fault injection for testing the verify suite; empty when off.
    pub sabotage: String,
}

impl ExperimentConfig {
    /// Defaults chosen so each experiment runs inside its own hypotheses.
    pub fn defaults(experiment: Experiment) -> Self {
        let (alpha, beta, p) = match experiment {
            Experiment::MpinftyEmbedding => (2.0, 0.5, 1.0),
            Experiment::Charex => (2.5, 0.5, 2.0),
            Experiment::EmbeddingSweep => (1.0, 0.5, 4.0 / 3.0),
            _ => (1.0, 0.5, 2.0),
        };
        ExperimentConfig {
            experiment,
            alpha,
            beta,
            p,
            q: 2.0,
            bank: default_bank(),
            n: 128,
            seed: 0,
            out: None,
            workers: 1,
            r_density: 1,
            wbv_nmax: 1 << 12,
            trials: 32,
            instances: 1000,
            hardy_len: 256,
            sabotage: String::new(),
        }
    }

    /// Parses `key = value` lines; `#` starts a comment. The experiment may come from
    /// the text or from `experiment`; keys not given keep their defaults.
    pub fn parse(text: &str, experiment: Option<Experiment>) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut from_text = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected 'key = value', got '{raw}'", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "experiment" {
                from_text = Some(v.parse::<Experiment>()?);
            } else {
                pairs.push((k.to_string(), v.to_string()));
            }
        }
        if let (Some(a), Some(b)) = (experiment, from_text) {
            if a != b {
                return Err(Error::Parse(format!("configuration is for '{b}', not '{a}'")));
            }
        }
        let exp = experiment
            .or(from_text)
            .ok_or_else(|| Error::Parse("no experiment given".into()))?;
        let mut cfg = Self::defaults(exp);
        for (k, v) in pairs {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    /// Reads a configuration file.
    pub fn from_file(path: &Path, experiment: Option<Experiment>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, experiment)
    }

    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Parse(format!("invalid value '{value}' for {what}"));
        match key {
            "experiment" => self.experiment = value.parse()?,
            "alpha" => self.alpha = parse_real(value).ok_or_else(|| bad("alpha"))?,
            "beta" => self.beta = parse_real(value).ok_or_else(|| bad("beta"))?,
            "p" => self.p = parse_real(value).ok_or_else(|| bad("p"))?,
            "q" => self.q = parse_real(value).ok_or_else(|| bad("q"))?,
            "bank" => {
                let bank: Vec<String> = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if bank.is_empty() {
                    return Err(bad("bank"));
                }
                self.bank = bank;
            }
            "N" | "n" => self.n = value.parse().map_err(|_| bad("N"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "out" => self.out = (!value.is_empty()).then(|| PathBuf::from(value)),
            "workers" => self.workers = value.parse().map_err(|_| bad("workers"))?,
            "r_density" => self.r_density = value.parse().map_err(|_| bad("r_density"))?,
            "wbv_nmax" => self.wbv_nmax = value.parse().map_err(|_| bad("wbv_nmax"))?,
            "trials" => self.trials = value.parse().map_err(|_| bad("trials"))?,
            "instances" => self.instances = value.parse().map_err(|_| bad("instances"))?,
            "hardy_len" => self.hardy_len = value.parse().map_err(|_| bad("hardy_len"))?,
            "sabotage" => self.sabotage = value.to_string(),
            _ => return Err(Error::Parse(format!("unknown configuration key '{key}'"))),
        }
        Ok(())
    }

    /// `(key, value)` pairs that affect results, in a fixed order.
    pub fn result_keys(&self) -> Vec<(&'static str, String)> {
        vec![
            ("experiment", self.experiment.to_string()),
            ("alpha", fmt_real(self.alpha)),
            ("beta", fmt_real(self.beta)),
            ("p", fmt_real(self.p)),
            ("q", fmt_real(self.q)),
            ("bank", self.bank.join(",")),
            ("N", self.n.to_string()),
            ("seed", self.seed.to_string()),
            ("r_density", self.r_density.to_string()),
            ("wbv_nmax", self.wbv_nmax.to_string()),
            ("trials", self.trials.to_string()),
            ("instances", self.instances.to_string()),
            ("hardy_len", self.hardy_len.to_string()),
            ("sabotage", self.sabotage.clone()),
        ]
    }

    /// Lossless text form, accepted by [`ExperimentConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut keys = self.result_keys();
        keys.push(("out", self.out.as_ref().map(|p| p.display().to_string()).unwrap_or_default()));
        keys.push(("workers", self.workers.to_string()));
        keys.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// Parses the bank into sequences.
    pub fn sequences(&self) -> Result<Vec<MultiplierSeq>> {
        self.bank.iter().map(|s| MultiplierSeq::parse(s)).collect()
    }

    /// Rejects values outside the hypotheses of the selected experiment.
    pub fn validate(&self) -> Result<()> {
        let order = |name: &str, v: f64| {
            if v > -1.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Hypothesis(format!("{name} must exceed -1, got {v}")))
            }
        };
        order("alpha", self.alpha)?;
        order("beta", self.beta)?;
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(v >= 1.0) {
                return Err(Error::Hypothesis(format!("{name} must lie in [1, inf], got {v}")));
            }
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        if self.n < 8 {
            return Err(Error::InvalidArgument(format!("N must be at least 8, got {}", self.n)));
        }
        if self.r_density == 0 || self.trials == 0 || self.wbv_nmax == 0 {
            return Err(Error::InvalidArgument("r_density, trials and wbv_nmax must be positive".into()));
        }
        self.sequences()?;
        match self.experiment {
            Experiment::WbvEquivalence if self.alpha == 0.0 => Err(Error::Hypothesis(
                "the characterization M^2_{alpha;alpha+1} = wbv_{2,1} requires alpha > -1 and alpha != 0".into(),
            )),
            Experiment::MpinftyEmbedding if !(self.beta >= 0.0 && self.beta < self.alpha) => Err(Error::Hypothesis(format!(
                "the M^(p,inf) embedding requires 0 <= beta < alpha, got alpha = {}, beta = {}",
                self.alpha, self.beta
            ))),
            Experiment::Charex if self.alpha == 0.0 || self.alpha == 1.0 => Err(Error::Hypothesis(format!(
                "the characterization M^2_{{alpha;alpha+2}} = wbv_{{2,2}} excludes alpha in {{0, 1}}, got alpha = {}",
                self.alpha
            ))),
            Experiment::HardySuite if self.hardy_len == 0 => Err(Error::InvalidArgument("hardy_len must be positive".into())),
            Experiment::Verify if !matches!(self.sabotage.as_str(), "" | "parseval") => {
                Err(Error::InvalidArgument(format!("unknown sabotage target '{}'", self.sabotage)))
            }
            _ => Ok(()),
        }
    }
}

/// Real number or `inf`.
pub fn parse_real(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" | "infinity" => Some(f64::INFINITY),
        t => {
            if let Some((a, b)) = t.split_once('/') {
                let (a, b): (f64, f64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
                return (b != 0.0).then(|| a / b);
            }
            t.parse().ok().filter(|v: &f64| !v.is_nan())
        }
    }
}

/// Shortest round-trip text for a real, `inf` for infinity.
pub fn fmt_real(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:?}")
    }
}
