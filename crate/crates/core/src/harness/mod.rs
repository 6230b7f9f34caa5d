//! Experiment drivers behind the command-line tool: construction, the
//! polarization sweep, Monte Carlo simulation and the verification suites.
//! Every CSV starts with `#` lines echoing the configuration and seed.

mod config;
mod verify;

pub use config::{ExperimentConfig, MuSetting};
pub use verify::{cmd_verify, FaultSpec, SuiteReport, VerifyReport, SUITES};

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{joint_from, make_uninformative};
use crate::codec::{sc_decode, sc_encode};
use crate::construction::{code_profile, construct_code, periodic_fast_path, CodeSpec, Profile};
use crate::error::Result;

/// Formats a real with 12 significant digits.
pub fn real(v: f64) -> String {
    format!("{v:.11e}")
}

fn header(command: &str, cfg: &ExperimentConfig, seed: Option<u64>) -> String {
    let mut s = format!("# polarsp {command}\n# config: {cfg}\n");
    if let Some(seed) = seed {
        writeln!(s, "# seed: {seed}").ok();
    }
    s
}

/// Builds the code for the first length in `cfg`.
pub fn cmd_construct(cfg: &ExperimentConfig) -> Result<CodeSpec> {
    let m = cfg.lengths()?[0];
    construct_code(
        m,
        &cfg.channel_spec()?,
        cfg.input()?,
        cfg.mode_value()?,
        cfg.mu_value()?,
        cfg.info_count(m)?,
    )
}

pub const POLARIZE_COLUMNS: &str =
    "M,fraction_good_Z,fraction_good_K,one_minus_HXY,HXY,N,threshold,fraction_good_K_prior,HX";

fn fraction_below(v: &[f64], threshold: f64) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.iter().filter(|&&x| x < threshold).count() as f64 / v.len() as f64
}

fn sweep_profile(cfg: &ExperimentConfig, m: usize, w: &crate::JointDist) -> Result<Profile> {
    let (mode, mu) = (cfg.mode_value()?, cfg.mu_value()?);
    match cfg.period {
        Some(t) => Ok(periodic_fast_path(m, w, mode, mu, Some(t))?.profile),
        None => code_profile(m, w, mode, mu),
    }
}

/// One polarization row per code length.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizeRow {
    pub m: usize,
    pub n_total: usize,
    pub threshold: f64,
    pub fraction_good_z: f64,
    pub fraction_good_k: f64,
    pub fraction_good_k_prior: f64,
    pub hxy: f64,
    pub hx: f64,
}

pub fn polarize_rows(cfg: &ExperimentConfig) -> Result<Vec<PolarizeRow>> {
    let input = cfg.input()?;
    let w = joint_from(input, &cfg.channel_spec()?.channel()?);
    let prior = joint_from(input, &make_uninformative());
    cfg.lengths()?
        .into_iter()
        .map(|m| {
            let threshold = cfg.threshold_for(m)?;
            let p = sweep_profile(cfg, m, &w)?;
            let q = sweep_profile(cfg, m, &prior)?;
            Ok(PolarizeRow {
                m,
                n_total: m.next_power_of_two(),
                threshold,
                fraction_good_z: fraction_below(&p.z, threshold),
                fraction_good_k: fraction_below(&p.k, threshold),
                fraction_good_k_prior: fraction_below(&q.k, threshold),
                hxy: w.h(),
                hx: input.entropy(),
            })
        })
        .collect()
}

pub fn cmd_polarize(cfg: &ExperimentConfig) -> Result<String> {
    let mut s = header("polarize", cfg, None);
    writeln!(s, "{POLARIZE_COLUMNS}").ok();
    for r in polarize_rows(cfg)? {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.m,
            real(r.fraction_good_z),
            real(r.fraction_good_k),
            real(1.0 - r.hxy),
            real(r.hxy),
            r.n_total,
            real(r.threshold),
            real(r.fraction_good_k_prior),
            real(r.hx)
        )
        .ok();
    }
    Ok(s)
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Frame errors over `trials` transmissions of uniformly random data
/// (frozen bits 0). Worker `k` of `workers` runs trials `k, k + workers,
/// ...` on the ChaCha8 stream `(stream << 32) | k` of `seed`.
pub fn monte_carlo(code: &CodeSpec, trials: u64, seed: u64, stream: u64, workers: u32) -> Result<u64> {
    let w = crate::codec::check_supported(code)?;
    let frozen = vec![0u8; code.frozen.len()];
    let run = |k: u32| -> Result<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((stream << 32) | k as u64);
        let mut errors = 0;
        let mut t = k as u64;
        let mut data = vec![0u8; code.info_len()];
        while t < trials {
            data.iter_mut().for_each(|b| *b = rng.gen_range(0..2));
            let x = sc_encode(&data, code, &frozen)?;
            let y: Vec<usize> = x.iter().map(|&b| w.sample(b, &mut rng)).collect();
            if sc_decode(&y, code)?.data != data {
                errors += 1;
            }
            t += workers as u64;
        }
        Ok(errors)
    };
    #[cfg(feature = "parallel")]
    let per: Vec<Result<u64>> = {
        use rayon::prelude::*;
        (0..workers).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per: Vec<Result<u64>> = (0..workers).map(run).collect();
    per.into_iter().sum()
}

pub const SIMULATE_COLUMNS: &str = "M,rate,trials,frame_errors,FER,ci95_low,ci95_high";

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateRow {
    pub m: usize,
    pub rate: f64,
    pub trials: u64,
    pub frame_errors: u64,
}

impl SimulateRow {
    pub fn fer(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.frame_errors as f64 / self.trials as f64
        }
    }

    pub fn ci95(&self) -> (f64, f64) {
        wilson_interval(self.frame_errors, self.trials)
    }
}

pub fn simulate_rows(cfg: &ExperimentConfig) -> Result<Vec<SimulateRow>> {
    let channel = cfg.channel_spec()?;
    let (input, mode, mu) = (cfg.input()?, cfg.mode_value()?, cfg.mu_value()?);
    let (trials, seed, workers) = (cfg.trials_value(), cfg.seed_value(), cfg.workers_value()?);
    cfg.lengths()?
        .into_iter()
        .enumerate()
        .map(|(idx, m)| {
            let count = cfg.info_count(m)?;
            let code = construct_code(m, &channel, input, mode, mu, count)?;
            let frame_errors = monte_carlo(&code, trials, seed, idx as u64, workers)?;
            Ok(SimulateRow {
                m,
                rate: count as f64 / m as f64,
                trials,
                frame_errors,
            })
        })
        .collect()
}

pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<String> {
    let rows = simulate_rows(cfg)?;
    let mut s = header("simulate", cfg, Some(cfg.seed_value()));
    writeln!(s, "# workers: {}", cfg.workers_value()?).ok();
    writeln!(s, "{SIMULATE_COLUMNS}").ok();
    for r in rows {
        let (lo, hi) = r.ci95();
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.m,
            real(r.rate),
            r.trials,
            r.frame_errors,
            real(r.fer()),
            real(lo),
            real(hi)
        )
        .ok();
    }
    Ok(s)
}
