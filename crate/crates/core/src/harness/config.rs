use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::channel::{ChannelSpec, InputDist};
use crate::construction::DEFAULT_MU;
use crate::error::{Error, Result};
use crate::transform::Mode;

/// `mu = 128` or `mu = "inf"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum MuSetting {
    Count(usize),
    Word(String),
}

impl MuSetting {
    pub fn resolve(&self) -> Result<Option<usize>> {
        match self {
            MuSetting::Count(n) if *n >= 2 => Ok(Some(*n)),
            MuSetting::Count(n) => Err(Error::InvalidParameter(format!(
                "mu must be at least 2, got {n}"
            ))),
            MuSetting::Word(w) => match w.trim() {
                "inf" | "exact" => Ok(None),
                other => other
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad mu {other:?}")))
                    .and_then(|n| MuSetting::Count(n).resolve()),
            },
        }
    }
}

impl std::str::FromStr for MuSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = MuSetting::Word(s.to_string());
        m.resolve()?;
        Ok(m)
    }
}

/// Parameters of every harness command. Each field may come from a TOML
/// file or from command-line flags; [`ExperimentConfig::merge`] lets flags
/// win.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub channel: Option<String>,
    pub p0: Option<f64>,
    pub m: Option<Vec<usize>>,
    pub mode: Option<String>,
    pub mu: Option<MuSetting>,
    pub beta: Option<f64>,
    pub threshold: Option<f64>,
    pub rate: Option<f64>,
    pub count: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<u32>,
    pub period: Option<u32>,
    pub suite: Option<Vec<String>>,
    pub fault: Option<String>,
    pub output: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        ExperimentConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn merge(self, flags: ExperimentConfig) -> Self {
        let base = self;
        overlay!(base, flags; channel, p0, m, mode, mu, beta, threshold, rate, count,
            trials, seed, workers, period, suite, fault, output)
    }

    pub fn channel_spec(&self) -> Result<ChannelSpec> {
        self.channel.as_deref().unwrap_or("bsc:0.11").parse()
    }

    pub fn input(&self) -> Result<InputDist> {
        InputDist::new(self.p0.unwrap_or(0.5))
    }

    pub fn lengths(&self) -> Result<Vec<usize>> {
        match &self.m {
            Some(v) if !v.is_empty() && v.iter().all(|&m| m >= 1) => Ok(v.clone()),
            Some(_) => Err(Error::InvalidParameter("code lengths must be at least 1".into())),
            None => Err(Error::InvalidParameter("no code length given".into())),
        }
    }

    pub fn mode_value(&self) -> Result<Mode> {
        self.mode.as_deref().unwrap_or("shortened").parse()
    }

    pub fn mu_value(&self) -> Result<Option<usize>> {
        match &self.mu {
            Some(m) => m.resolve(),
            None => Ok(Some(DEFAULT_MU)),
        }
    }

    pub fn beta_value(&self) -> Result<f64> {
        let b = self.beta.unwrap_or(0.3);
        if b > 0.0 && b < 0.5 {
            Ok(b)
        } else {
            Err(Error::InvalidParameter(format!("beta must lie in (0, 1/2), got {b}")))
        }
    }

    /// `2^(-M^beta)` unless overridden.
    pub fn threshold_for(&self, m: usize) -> Result<f64> {
        match self.threshold {
            Some(t) if t > 0.0 => Ok(t),
            Some(t) => Err(Error::InvalidParameter(format!("threshold must be positive, got {t}"))),
            None => Ok((-(m as f64).powf(self.beta_value()?)).exp2()),
        }
    }

    /// Information set size for length `m`: `count` if given, otherwise
    /// `round(rate * m)`.
    pub fn info_count(&self, m: usize) -> Result<usize> {
        if let Some(c) = self.count {
            return if c <= m {
                Ok(c)
            } else {
                Err(Error::InfoSetTooLarge { count: c, m })
            };
        }
        let r = self.rate.unwrap_or(0.5);
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!("rate must lie in [0, 1], got {r}")));
        }
        Ok((r * m as f64).round() as usize)
    }

    pub fn trials_value(&self) -> u64 {
        self.trials.unwrap_or(1000)
    }

    pub fn seed_value(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    pub fn workers_value(&self) -> Result<u32> {
        match self.workers.unwrap_or(4) {
            0 => Err(Error::InvalidParameter("workers must be at least 1".into())),
            w => Ok(w),
        }
    }
}

/// One-line echo of the fields that are set, in a fixed order.
impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        };
        push("channel", self.channel.clone());
        push("p0", self.p0.map(|v| v.to_string()));
        push(
            "m",
            self.m.as_ref().map(|v| {
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            }),
        );
        push("mode", self.mode.clone());
        push(
            "mu",
            self.mu.as_ref().map(|m| match m {
                MuSetting::Count(n) => n.to_string(),
                MuSetting::Word(w) => w.clone(),
            }),
        );
        push("beta", self.beta.map(|v| v.to_string()));
        push("threshold", self.threshold.map(|v| v.to_string()));
        push("rate", self.rate.map(|v| v.to_string()));
        push("count", self.count.map(|v| v.to_string()));
        push("trials", self.trials.map(|v| v.to_string()));
        push("seed", self.seed.map(|v| v.to_string()));
        push("workers", self.workers.map(|v| v.to_string()));
        push("period", self.period.map(|v| v.to_string()));
        push("suite", self.suite.as_ref().map(|s| s.join(",")));
        push("fault", self.fault.clone());
        f.write_str(&parts.join(" "))
    }
}
