//! Acceptance criteria A1-A10. Each test writes one `PASS`/`FAIL` line to
//! stdout (bypassing output capture) and then asserts it.

mod common;

use std::io::Write;
use std::time::Instant;

use polarsp::channel::{joint_from, make_bec, make_bsc, make_uninformative, InputDist, JointDist};
use polarsp::construction::{bec_closed_form, brute_force_profile, code_profile, construct_code};
use polarsp::dist::{special_pitiful, special_superb, table_lookup, Op, TableOutcome};
use polarsp::harness::{monte_carlo, wilson_interval};
use polarsp::random::{random_joint, random_kernel, random_permutation};
use polarsp::relations::{
    preserve_operands, verify_chain, witness_pitiful, witness_preserve, witness_superb,
    witness_table_entry, Operand, RelationStep, RelationWitness, LINK_TOL,
};
use polarsp::transform::{
    inverse_transform, polar_transform, puncture_pattern, shorten_pattern, ExtBit, Mode,
};
use polarsp::ChannelSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [Mode; 2] = [Mode::Shortened, Mode::Punctured];

fn report(id: &str, pass: bool, detail: String) {
    let line = format!("{id} {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
    assert!(pass, "{id} failed: {detail}");
}

fn uniform(w: polarsp::BmChannel) -> JointDist {
    joint_from(InputDist::uniform(), &w)
}

fn a1_channels() -> Vec<(&'static str, JointDist)> {
    vec![
        ("BSC(0.3)", uniform(make_bsc(0.3).unwrap())),
        ("BEC(0.4)", uniform(make_bec(0.4).unwrap())),
        ("BSC(0.2),p0=0.3", joint_from(InputDist::new(0.3).unwrap(), &make_bsc(0.2).unwrap())),
    ]
}

#[test]
fn a1_oracle_equivalence() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for mode in MODES {
        for (_, w) in a1_channels() {
            for m in 2..=8 {
                let e = code_profile(m, &w, mode, None).unwrap();
                let b = brute_force_profile(m, &w, mode).unwrap();
                worst = worst.max(e.max_abs_diff(&b));
                cases += 1;
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    report(
        "A1",
        worst <= 1e-9 && secs < 60.0,
        format!("{cases} configurations, max |evolve - brute force| = {worst:.3e} (tol 1e-9), {secs:.1}s"),
    );
}

#[test]
fn a2_bec_closed_form() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for mode in MODES {
        for eps in [0.1, 0.5, 0.9] {
            let w = uniform(make_bec(eps).unwrap());
            for m in 1..=64 {
                let e = code_profile(m, &w, mode, None).unwrap();
                let z = bec_closed_form(m, eps, mode).unwrap();
                for (a, b) in e.z.iter().zip(&z) {
                    worst = worst.max((a - b).abs());
                }
                cases += 1;
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    report(
        "A2",
        worst <= 1e-10 && secs < 60.0,
        format!("{cases} configurations, max |Z - closed form| = {worst:.3e} (tol 1e-10), {secs:.1}s"),
    );
}

#[test]
fn a3_conservation() {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut check = |w: &JointDist, m: usize, mode: Mode| {
        let p = code_profile(m, w, mode, None).unwrap();
        worst = worst.max((p.mean_h() - w.h()).abs());
        cases += 1;
    };
    for mode in MODES {
        for (_, w) in a1_channels() {
            for m in 2..=8 {
                check(&w, m, mode);
            }
        }
        for eps in [0.1, 0.5, 0.9] {
            let w = uniform(make_bec(eps).unwrap());
            for m in 1..=64 {
                check(&w, m, mode);
            }
        }
    }
    report(
        "A3",
        worst <= 1e-8,
        format!("{cases} configurations, max |mean H_i - H(X|Y)| = {worst:.3e} (tol 1e-8)"),
    );
}

fn fractions(w: &JointDist, mode: Mode, use_k: bool) -> Vec<(usize, f64)> {
    (6..=12u32)
        .map(|n| {
            let m = 3usize << (n - 2);
            let threshold = (-(m as f64).powf(0.3)).exp2();
            let p = code_profile(m, w, mode, Some(128)).unwrap();
            let v = if use_k { &p.k } else { &p.z };
            (m, v.iter().filter(|&&x| x < threshold).count() as f64 / m as f64)
        })
        .collect()
}

fn trend_line(rows: &[(usize, f64)]) -> String {
    rows.iter()
        .map(|(m, f)| format!("{m}:{f:.4}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn non_decreasing(rows: &[(usize, f64)]) -> bool {
    rows.windows(2).all(|w| w[1].1 >= w[0].1)
}

#[test]
fn a4_threshold_fraction_trend() {
    let t0 = Instant::now();
    let w = uniform(make_bsc(0.11).unwrap());
    let bar = 1.0 - w.h() - 0.1;
    let mut pass = true;
    let mut detail = Vec::new();
    for mode in MODES {
        let rows = fractions(&w, mode, false);
        let last = rows.last().unwrap().1;
        let mono = non_decreasing(&rows);
        pass &= mono && last > bar;
        detail.push(format!(
            "{mode}: [{}] non-decreasing={mono} final={last:.4} bar={bar:.4}",
            trend_line(&rows)
        ));
    }
    let secs = t0.elapsed().as_secs_f64();
    pass &= secs < 300.0;
    report("A4", pass, format!("{}; {secs:.1}s", detail.join("; ")));
}

#[test]
fn a5_prior_k_fraction_trend() {
    let t0 = Instant::now();
    let input = InputDist::uniform();
    let w = joint_from(input, &make_uninformative());
    let bar = input.entropy() - 0.1;
    let mut pass = true;
    let mut detail = Vec::new();
    for mode in MODES {
        let rows = fractions(&w, mode, true);
        let last = rows.last().unwrap().1;
        let mono = non_decreasing(&rows);
        pass &= mono && last > bar;
        detail.push(format!("{mode}: non-decreasing={mono} final={last:.4} bar={bar:.4}"));
    }
    let secs = t0.elapsed().as_secs_f64();
    pass &= secs < 300.0;
    report("A5", pass, format!("{}; {secs:.1}s", detail.join("; ")));
}

fn chain_residual(lower: &JointDist, upper: &JointDist, w: &RelationWitness) -> Option<f64> {
    if !verify_chain(lower, upper, w).ok()? {
        return None;
    }
    let r = w.link_residuals(lower, upper).ok()?;
    Some(r.into_iter().fold(0.0, f64::max))
}

#[test]
fn a6_extremes() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (p, s) = (special_pitiful(), special_superb());
    let mut ok = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let a = random_joint(&mut rng, 5);
        let lo = chain_residual(&p, &a, &witness_pitiful(&a));
        let hi = chain_residual(&a, &s, &witness_superb(&a));
        if let (Some(x), Some(y)) = (lo, hi) {
            worst = worst.max(x).max(y);
            if x < LINK_TOL && y < LINK_TOL {
                ok += 1;
            }
        }
    }
    report(
        "A6",
        ok == 200,
        format!("{ok}/200 distributions, max link residual {worst:.3e} (tol 1e-10)"),
    );
}

fn ordered(lower: &JointDist, upper: &JointDist) -> bool {
    let tol = 1e-9;
    lower.z() >= upper.z() - tol && lower.h() >= upper.h() - tol && lower.k() <= upper.k() + tol
}

#[test]
fn a7_preservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = 0;
    let mut order_ok = true;
    for case in 1..=8u8 {
        for _ in 0..100 {
            let a = random_joint(&mut rng, 4);
            let b = random_joint(&mut rng, 4);
            let operand = if case >= 5 { &b } else { &a };
            let step = if matches!(case, 1 | 2 | 5 | 6) {
                let n_out = rng.gen_range(1..=4);
                RelationStep::Degradation(random_kernel(&mut rng, operand.len(), n_out))
            } else {
                RelationStep::Permutation(random_permutation(&mut rng, operand.len()))
            };
            let w = witness_preserve(case, &a, &b, &step).unwrap();
            let (lo, hi) = preserve_operands(case, &a, &b, &step).unwrap();
            // Independent recomputation of the endpoints.
            let stepped = step.apply(operand).unwrap();
            let op = if case % 2 == 1 { Op::Minus } else { Op::Plus };
            let expect_lo = if case >= 5 { op.apply(&a, &stepped) } else { op.apply(&stepped, &b) };
            let expect_hi = op.apply(&a, &b);
            let endpoints = lo.max_abs_diff(&expect_lo) == 0.0 && hi.max_abs_diff(&expect_hi) == 0.0;
            if endpoints && chain_residual(&lo, &hi, &w).is_some_and(|r| r < LINK_TOL) {
                ok += 1;
            }
            let mut nodes = vec![lo.clone()];
            nodes.extend(w.intermediates.iter().cloned());
            nodes.push(hi.clone());
            order_ok &= ordered(&lo, &hi) && nodes.windows(2).all(|p| ordered(&p[0], &p[1]));
        }
    }
    report(
        "A7",
        ok == 800 && order_ok,
        format!("{ok}/800 witnesses verified, Z/K/H orderings hold on all pairs: {order_ok}"),
    );
}

#[test]
fn a8_table_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = 0;
    let mut total = 0;
    let special = |o: Operand, given: &JointDist| match o {
        Operand::Given => given.clone(),
        Operand::Superb => special_superb(),
        Operand::Pitiful => special_pitiful(),
    };
    for _ in 0..100 {
        let a = random_joint(&mut rng, 4);
        let b = random_joint(&mut rng, 4);
        for op in [Op::Minus, Op::Plus] {
            for row in Operand::ALL {
                for col in Operand::ALL {
                    if row == Operand::Given && col == Operand::Given {
                        continue;
                    }
                    total += 1;
                    let (r, c) = (special(row, &a), special(col, &b));
                    let claimed = match table_lookup(op, row.tag(), col.tag()) {
                        TableOutcome::Row => r.clone(),
                        TableOutcome::Col => c.clone(),
                        TableOutcome::Superb => special_superb(),
                        TableOutcome::Pitiful => special_pitiful(),
                        TableOutcome::Compute => unreachable!(),
                    };
                    let computed = op.apply(&r, &c);
                    let w = witness_table_entry(op, row, col, &a, &b).unwrap();
                    let down = chain_residual(&computed, &claimed, &w.computed_below);
                    let up = chain_residual(&claimed, &computed, &w.claimed_below);
                    if matches!((down, up), (Some(x), Some(y)) if x < LINK_TOL && y < LINK_TOL) {
                        ok += 1;
                    }
                }
            }
        }
    }
    report(
        "A8",
        total == 1600 && ok == total,
        format!("{ok}/{total} cell instances verified in both directions (16 cells x 100 pairs)"),
    );
}

#[test]
fn a9_codec_exactness() {
    const SEED: u64 = 2024;
    const TRIALS: u64 = 100_000;
    let t0 = Instant::now();
    let ch = ChannelSpec::Bec(0.5);
    let mut pass = true;
    let mut detail = Vec::new();
    for (idx, mode) in MODES.into_iter().enumerate() {
        let code = construct_code(6, &ch, InputDist::uniform(), mode, None, 2).unwrap();
        let exact = common::bec_sc_failure_probability(&code, 0.5);
        let errors = monte_carlo(&code, TRIALS, SEED, idx as u64, 4).unwrap();
        let (lo, hi) = wilson_interval(errors, TRIALS);
        let inside = lo <= exact && exact <= hi;
        pass &= inside;
        detail.push(format!(
            "{mode}: FER {:.5} CI [{lo:.5}, {hi:.5}] exact {exact:.5}",
            errors as f64 / TRIALS as f64
        ));
    }
    let secs = t0.elapsed().as_secs_f64();
    pass &= secs < 120.0;
    report("A9", pass, format!("{}; {secs:.1}s", detail.join("; ")));
}

fn shortened_consistent(x: &[u8]) -> bool {
    let m = x.len();
    let p = shorten_pattern(m).unwrap();
    let removed = common::removal_set(m, Mode::Shortened);
    if p.indices != removed {
        return false;
    }
    let u = p.extended_transform(x).unwrap();
    let mut filled = Vec::with_capacity(p.n_total);
    let mut it = x.iter();
    for i in 0..p.n_total {
        filled.push(if removed.binary_search(&i).is_ok() { 0 } else { *it.next().unwrap() });
    }
    let plain = common::naive_transform(&filled);
    (0..m).all(|i| u[i].bit() == Some(plain[i])) && u[m..].iter().all(|&s| s == ExtBit::S)
}

fn punctured_consistent(x: &[u8], fills: &[Vec<u8>]) -> bool {
    let m = x.len();
    let p = puncture_pattern(m).unwrap();
    let removed = common::removal_set(m, Mode::Punctured);
    if p.indices != removed {
        return false;
    }
    let u = p.extended_transform(x).unwrap();
    let start = p.n_total - m;
    fills.iter().all(|fill| {
        let (mut xi, mut fi) = (x.iter(), fill.iter());
        let filled: Vec<u8> = (0..p.n_total)
            .map(|i| {
                if removed.binary_search(&i).is_ok() {
                    *fi.next().unwrap()
                } else {
                    *xi.next().unwrap()
                }
            })
            .collect();
        let plain = common::naive_transform(&filled);
        (start..p.n_total).all(|i| u[i].bit() == Some(plain[i]))
    })
}

#[test]
fn a10_transforms() {
    let mut failures = Vec::new();
    let mut checks = 0u64;
    for m in 1..=8usize {
        let k = common::removal_set(m, Mode::Punctured).len();
        let all_fills: Vec<Vec<u8>> = (0..1usize << k).map(|f| common::bits(f, k)).collect();
        for xi in 0..1usize << m {
            let x = common::bits(xi, m);
            checks += 2;
            if !shortened_consistent(&x) {
                failures.push(format!("shortened M={m} x={x:?}"));
            }
            if !punctured_consistent(&x, &all_fills) {
                failures.push(format!("punctured M={m} x={x:?}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for m in [96usize, 384, 3000] {
        let k = common::removal_set(m, Mode::Punctured).len();
        for t in 0..1000 {
            let x: Vec<u8> = (0..m).map(|_| rng.gen_range(0..2)).collect();
            let fills: Vec<Vec<u8>> = (0..2)
                .map(|_| (0..k).map(|_| rng.gen_range(0..2)).collect())
                .collect();
            checks += 2;
            if !shortened_consistent(&x) {
                failures.push(format!("shortened M={m} vector {t}"));
            }
            if !punctured_consistent(&x, &fills) {
                failures.push(format!("punctured M={m} vector {t}"));
            }
        }
    }
    // Round trips: exhaustive to N = 16, random at larger sizes.
    for n in 0..=4u32 {
        let len = 1usize << n;
        for xi in 0..1usize << len {
            let x = common::bits(xi, len);
            checks += 1;
            let u = polar_transform(&x).unwrap();
            if u != common::naive_transform(&x) || inverse_transform(&u).unwrap() != x {
                failures.push(format!("round trip N={len} x={x:?}"));
            }
        }
    }
    for len in [128usize, 512, 4096] {
        for _ in 0..100 {
            let x: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
            checks += 1;
            if inverse_transform(&polar_transform(&x).unwrap()).unwrap() != x {
                failures.push(format!("round trip N={len}"));
            }
        }
    }
    report(
        "A10",
        failures.is_empty(),
        format!(
            "{}/{checks} transform checks passed{}",
            checks - failures.len() as u64,
            failures.first().map(|f| format!(", first failure: {f}")).unwrap_or_default()
        ),
    );
}
