use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ExperimentConfig;
use crate::channel::{joint_from, make_bec, make_bsc, InputDist, JointDist};
use crate::construction::{bec_closed_form, brute_force_profile, code_profile};
use crate::dist::{table_lookup, Op, TableOutcome};
use crate::error::{Error, Result};
use crate::random::{random_joint, random_kernel, random_permutation};
use crate::relations::{
    preserve_operands, verify_chain, witness_pitiful, witness_preserve, witness_superb,
    witness_table_entry, Operand, RelationStep, RelationWitness, LINK_TOL,
};
use crate::transform::{
    polar_transform, puncture_pattern, shorten_pattern, inverse_transform, ExtBit, Mode,
};

pub const SUITES: [&str; 5] = ["lemma2", "lemma3", "lemma4", "oracles", "transforms"];

/// A table cell whose prescribed value is deliberately replaced by a wrong
/// one, written `op:row:col` (e.g. `minus:S:B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultSpec {
    pub op: Op,
    pub row: Operand,
    pub col: Operand,
}

impl FromStr for FaultSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("fault must look like minus:S:B, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [op, row, col] = parts[..] else {
            return Err(bad());
        };
        let op = match op {
            "minus" => Op::Minus,
            "plus" => Op::Plus,
            _ => return Err(bad()),
        };
        let operand = |t: &str, given: &str| match t {
            "S" => Ok(Operand::Superb),
            "P" => Ok(Operand::Pitiful),
            t if t == given => Ok(Operand::Given),
            _ => Err(bad()),
        };
        let (row, col) = (operand(row, "A")?, operand(col, "B")?);
        if row == Operand::Given && col == Operand::Given {
            return Err(bad());
        }
        Ok(FaultSpec { op, row, col })
    }
}

fn cell_name(op: Op, row: Operand, col: Operand) -> String {
    let name = |o: Operand, given: &'static str| match o {
        Operand::Given => given,
        Operand::Superb => "S",
        Operand::Pitiful => "P",
    };
    format!("({}, {}, {})", op.symbol(), name(row, "A"), name(col, "B"))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let ok = s.checks - s.failures.len() as u64;
            let verdict = if s.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} {}: {ok}/{} checks passed", s.name, s.checks)?;
            for msg in s.failures.iter().take(20) {
                writeln!(f, "  {msg}")?;
            }
            if s.failures.len() > 20 {
                writeln!(f, "  ... {} more", s.failures.len() - 20)?;
            }
        }
        write!(f, "{}", if self.passed() { "all suites passed" } else { "verification failed" })
    }
}

fn chain_ok(lower: &JointDist, upper: &JointDist, w: &RelationWitness) -> bool {
    verify_chain(lower, upper, w).unwrap_or(false)
        && w
            .link_residuals(lower, upper)
            .map(|r| r.iter().all(|&x| x < LINK_TOL))
            .unwrap_or(false)
}

fn lemma3(trials: u64, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma3");
    let p = crate::dist::special_pitiful();
    let s = crate::dist::special_superb();
    for t in 0..trials {
        let a = random_joint(rng, 5);
        rep.check(chain_ok(&p, &a, &witness_pitiful(&a)), || format!("trial {t}: P below A"));
        rep.check(chain_ok(&a, &s, &witness_superb(&a)), || format!("trial {t}: A below S"));
    }
    rep
}

/// Whether `lower ⊑ upper` is consistent with the `Z`, `K`, `H` orderings.
pub fn orderings_hold(lower: &JointDist, upper: &JointDist, tol: f64) -> bool {
    lower.z() >= upper.z() - tol && lower.h() >= upper.h() - tol && lower.k() <= upper.k() + tol
}

/// A random step of the kind case `case` expects, acting on `operand`.
pub fn random_case_step(case: u8, operand: &JointDist, rng: &mut impl Rng) -> RelationStep {
    if matches!(case, 1 | 2 | 5 | 6) {
        RelationStep::Degradation(random_kernel(rng, operand.len(), 4))
    } else {
        RelationStep::Permutation(random_permutation(rng, operand.len()))
    }
}

fn lemma2(trials: u64, rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma2");
    for case in 1..=8u8 {
        for t in 0..trials {
            let a = random_joint(rng, 4);
            let b = random_joint(rng, 4);
            let step = random_case_step(case, if case >= 5 { &b } else { &a }, rng);
            let ok = match (
                witness_preserve(case, &a, &b, &step),
                preserve_operands(case, &a, &b, &step),
            ) {
                (Ok(w), Ok((lo, hi))) => chain_ok(&lo, &hi, &w) && orderings_hold(&lo, &hi, 1e-9),
                _ => false,
            };
            rep.check(ok, || format!("case {case}, trial {t}"));
        }
    }
    rep
}

fn corrupt(o: TableOutcome) -> TableOutcome {
    match o {
        TableOutcome::Superb => TableOutcome::Pitiful,
        TableOutcome::Pitiful => TableOutcome::Superb,
        TableOutcome::Row => TableOutcome::Col,
        TableOutcome::Col => TableOutcome::Row,
        TableOutcome::Compute => TableOutcome::Compute,
    }
}

/// Every special cell of both tables, `(op, row, col)`.
pub fn special_cells() -> Vec<(Op, Operand, Operand)> {
    let mut cells = Vec::new();
    for op in [Op::Minus, Op::Plus] {
        for row in Operand::ALL {
            for col in Operand::ALL {
                if row != Operand::Given || col != Operand::Given {
                    cells.push((op, row, col));
                }
            }
        }
    }
    cells
}

fn lemma4(trials: u64, rng: &mut ChaCha8Rng, fault: Option<FaultSpec>) -> SuiteReport {
    let mut rep = SuiteReport::new("lemma4");
    for t in 0..trials {
        let a = random_joint(rng, 4);
        let b = random_joint(rng, 4);
        for (op, row, col) in special_cells() {
            let mut outcome = table_lookup(op, row.tag(), col.tag());
            if fault == Some(FaultSpec { op, row, col }) {
                outcome = corrupt(outcome);
            }
            let rv = if row == Operand::Given { a.clone() } else { row_value(row) };
            let cv = if col == Operand::Given { b.clone() } else { row_value(col) };
            let claimed = match outcome {
                TableOutcome::Row => rv,
                TableOutcome::Col => cv,
                TableOutcome::Superb => crate::dist::special_superb(),
                TableOutcome::Pitiful => crate::dist::special_pitiful(),
                TableOutcome::Compute => op.apply(&rv, &cv),
            };
            let ok = witness_table_entry(op, row, col, &a, &b).is_ok_and(|w| {
                chain_ok(&w.computed, &claimed, &w.computed_below)
                    && chain_ok(&claimed, &w.computed, &w.claimed_below)
            });
            rep.check(ok, || format!("cell {} failed (trial {t})", cell_name(op, row, col)));
        }
    }
    rep
}

fn row_value(o: Operand) -> JointDist {
    match o {
        Operand::Superb => crate::dist::special_superb(),
        _ => crate::dist::special_pitiful(),
    }
}

fn oracles() -> SuiteReport {
    let mut rep = SuiteReport::new("oracles");
    let channels = [
        ("bsc:0.3", joint_from(InputDist::uniform(), &make_bsc(0.3).unwrap())),
        ("bec:0.4", joint_from(InputDist::uniform(), &make_bec(0.4).unwrap())),
        ("bsc:0.2,p0=0.3", joint_from(InputDist::new(0.3).unwrap(), &make_bsc(0.2).unwrap())),
    ];
    for mode in [Mode::Shortened, Mode::Punctured] {
        for (name, w) in &channels {
            for m in 2..=6 {
                let ok = match (code_profile(m, w, mode, None), brute_force_profile(m, w, mode)) {
                    (Ok(e), Ok(b)) => {
                        e.max_abs_diff(&b) <= 1e-9 && (e.mean_h() - w.h()).abs() <= 1e-8
                    }
                    _ => false,
                };
                rep.check(ok, || format!("evolve vs brute force: {mode} M={m} {name}"));
            }
        }
        for eps in [0.1, 0.5, 0.9] {
            let w = joint_from(InputDist::uniform(), &make_bec(eps).unwrap());
            for m in 1..=32 {
                let ok = match (code_profile(m, &w, mode, None), bec_closed_form(m, eps, mode)) {
                    (Ok(e), Ok(z)) => e.z.iter().zip(&z).all(|(a, b)| (a - b).abs() <= 1e-10),
                    _ => false,
                };
                rep.check(ok, || format!("evolve vs BEC recursion: {mode} M={m} eps={eps}"));
            }
        }
    }
    rep
}

fn bits(v: usize, len: usize) -> Vec<u8> {
    (0..len).map(|j| ((v >> j) & 1) as u8).collect()
}

fn transforms() -> SuiteReport {
    let mut rep = SuiteReport::new("transforms");
    for m in 1..=8usize {
        let sp = shorten_pattern(m).unwrap();
        let pp = puncture_pattern(m).unwrap();
        for xi in 0..1usize << m {
            let x = bits(xi, m);
            // Shortening: `s` behaves like a 0 on the kept prefix, and the
            // removed tail is all `s`.
            let ok = sp.extended_transform(&x).is_ok_and(|u| {
                let filled: Vec<u8> = sp
                    .extend(&x)
                    .unwrap()
                    .iter()
                    .map(|s| s.bit().unwrap_or(0))
                    .collect();
                let plain = polar_transform(&filled).unwrap();
                (0..m).all(|i| u[i].bit() == Some(plain[i]))
                    && u[m..].iter().all(|&s| s == ExtBit::S)
            });
            rep.check(ok, || format!("shortening equivalence M={m} x={x:?}"));
            // Puncturing: every fill of the removed positions gives the same
            // suffix.
            let ok = pp.extended_transform(&x).is_ok_and(|u| {
                let start = pp.window_start();
                let ext = pp.extend(&x).unwrap();
                (0..1usize << pp.indices.len()).all(|fill| {
                    let fb = bits(fill, pp.indices.len());
                    let mut j = 0;
                    let filled: Vec<u8> = ext
                        .iter()
                        .map(|s| {
                            s.bit().unwrap_or_else(|| {
                                j += 1;
                                fb[j - 1]
                            })
                        })
                        .collect();
                    let plain = polar_transform(&filled).unwrap();
                    (start..start + m).all(|i| u[i].bit() == Some(plain[i]))
                })
            });
            rep.check(ok, || format!("puncturing fill invariance M={m} x={x:?}"));
        }
    }
    for n in 0..=4u32 {
        let len = 1usize << n;
        for xi in 0..1usize << len {
            let x = bits(xi, len);
            let ok = polar_transform(&x)
                .and_then(|u| inverse_transform(&u))
                .is_ok_and(|back| back == x);
            rep.check(ok, || format!("round trip N={len} x={x:?}"));
        }
    }
    rep
}

/// Runs the suites selected in `cfg` (all by default).
pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<VerifyReport> {
    let trials = cfg.trials.unwrap_or(100);
    let fault = cfg.fault.as_deref().map(str::parse::<FaultSpec>).transpose()?;
    let selected: Vec<String> = match &cfg.suite {
        Some(s) => s.clone(),
        None => SUITES.iter().map(|s| s.to_string()).collect(),
    };
    let mut report = VerifyReport::default();
    for (idx, name) in selected.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed_value());
        rng.set_stream(idx as u64);
        let suite = match name.as_str() {
            "lemma2" => lemma2(trials, &mut rng),
            "lemma3" => lemma3(trials, &mut rng),
            "lemma4" => lemma4(trials, &mut rng, fault),
            "oracles" => oracles(),
            "transforms" => transforms(),
            other => return Err(Error::InvalidParameter(format!("unknown suite {other:?}"))),
        };
        report.suites.push(suite);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma2_counts() {
        let cfg = ExperimentConfig {
            suite: Some(vec!["lemma2".into()]),
            trials: Some(5),
            ..Default::default()
        };
        let r = cmd_verify(&cfg).unwrap();
        assert_eq!(r.suites[0].checks, 40);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn fault_is_reported() {
        let cfg = ExperimentConfig {
            suite: Some(vec!["lemma4".into()]),
            trials: Some(3),
            fault: Some("minus:S:B".into()),
            ..Default::default()
        };
        let r = cmd_verify(&cfg).unwrap();
        assert!(!r.passed());
        assert!(r.suites[0].failures.iter().all(|f| f.contains("(minus, S, B)")));
        assert_eq!(r.suites[0].failures.len(), 3);
    }

    #[test]
    fn fault_parse() {
        assert!("plus:A:P".parse::<FaultSpec>().is_ok());
        assert!("plus:A:B".parse::<FaultSpec>().is_err());
        assert!("times:S:B".parse::<FaultSpec>().is_err());
    }
}
