use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::Profile;
use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::transform::{Mode, Pattern};

/// A constructed code: pattern, channel, per-index profile and frozen set.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    pub pattern: Pattern,
    pub channel: ChannelSpec,
    pub p0: f64,
    /// `None` for exact evolution.
    pub mu: Option<usize>,
    pub profile: Profile,
    /// Sorted.
    pub frozen: Vec<usize>,
}

impl CodeSpec {
    pub fn m(&self) -> usize {
        self.pattern.m
    }

    pub fn mode(&self) -> Mode {
        self.pattern.mode
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen.binary_search(&i).is_ok()
    }

    /// Information positions in increasing order.
    pub fn info_set(&self) -> Vec<usize> {
        (0..self.m()).filter(|&i| !self.is_frozen(i)).collect()
    }

    pub fn info_len(&self) -> usize {
        self.m() - self.frozen.len()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "# polarsp code").ok();
        writeln!(s, "M {}", self.pattern.m).ok();
        writeln!(s, "N {}", self.pattern.n_total).ok();
        writeln!(s, "mode {}", self.pattern.mode).ok();
        writeln!(s, "channel {}", self.channel).ok();
        writeln!(s, "p0 {}", self.p0).ok();
        match self.mu {
            Some(mu) => writeln!(s, "mu {mu}").ok(),
            None => writeln!(s, "mu inf").ok(),
        };
        let idx: Vec<String> = self.pattern.indices.iter().map(|i| i.to_string()).collect();
        writeln!(s, "pattern {}", idx.join(" ")).ok();
        writeln!(s, "index Z K H frozen").ok();
        for i in 0..self.pattern.m {
            writeln!(
                s,
                "{i} {:.11e} {:.11e} {:.11e} {}",
                self.profile.z[i],
                self.profile.k[i],
                self.profile.h[i],
                u8::from(self.is_frozen(i))
            )
            .ok();
        }
        f.write_str(&s)
    }
}

impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let perr = |msg: String| Error::Parse(msg);
        let mut m = None;
        let mut n_total = None;
        let mut mode = None;
        let mut channel = None;
        let mut p0 = 0.5;
        let mut mu = None;
        let mut indices = None;
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        for line in lines.by_ref() {
            let (key, value) = line.split_once(' ').unwrap_or((line, ""));
            let value = value.trim();
            let num = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| perr(format!("bad integer {v:?} for {key}")))
            };
            match key {
                "M" => m = Some(num(value)?),
                "N" => n_total = Some(num(value)?),
                "mode" => mode = Some(value.parse::<Mode>()?),
                "channel" => channel = Some(value.parse::<ChannelSpec>()?),
                "p0" => {
                    p0 = value
                        .parse()
                        .map_err(|_| perr(format!("bad p0 {value:?}")))?
                }
                "mu" => mu = if value == "inf" { None } else { Some(num(value)?) },
                "pattern" => {
                    indices = Some(
                        value
                            .split_whitespace()
                            .map(num)
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "index" => break,
                other => return Err(perr(format!("unknown header key {other:?}"))),
            }
        }
        let m = m.ok_or_else(|| perr("missing M".into()))?;
        let mode = mode.ok_or_else(|| perr("missing mode".into()))?;
        let channel = channel.ok_or_else(|| perr("missing channel".into()))?;
        let pattern = Pattern::new(m, mode)?;
        if n_total.is_some_and(|n| n != pattern.n_total)
            || indices.is_some_and(|ix| ix != pattern.indices)
        {
            return Err(perr("header pattern disagrees with M and mode".into()));
        }
        let mut profile = Profile::default();
        let mut frozen = Vec::new();
        for (row, line) in lines.enumerate() {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 {
                return Err(perr(format!("profile row {row} needs 5 fields")));
            }
            if f[0].parse::<usize>().ok() != Some(row) {
                return Err(perr(format!("profile row {row} has index {:?}", f[0])));
            }
            let real = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| perr(format!("bad number {v:?} in row {row}")))
            };
            profile.z.push(real(f[1])?);
            profile.k.push(real(f[2])?);
            profile.h.push(real(f[3])?);
            match f[4] {
                "1" => frozen.push(row),
                "0" => {}
                other => return Err(perr(format!("bad frozen flag {other:?} in row {row}"))),
            }
        }
        if profile.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                actual: profile.len(),
            });
        }
        Ok(CodeSpec {
            pattern,
            channel,
            p0,
            mu,
            profile,
            frozen,
        })
    }
}
