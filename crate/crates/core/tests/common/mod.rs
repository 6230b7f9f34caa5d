//! Reference computations written independently of the library: a direct
//! recursive transform, the removal sets computed bit by bit, and an
//! exhaustive model of SC decoding over the erasure channel.
#![allow(dead_code)]

use polarsp::construction::CodeSpec;
use polarsp::transform::Mode;

pub fn rev(i: usize, n: u32) -> usize {
    let mut r = 0;
    for j in 0..n {
        if i & (1 << j) != 0 {
            r |= 1 << (n - 1 - j);
        }
    }
    r
}

pub fn mother_len(m: usize) -> (usize, u32) {
    let mut n = 0;
    while (1usize << n) < m {
        n += 1;
    }
    (1 << n, n)
}

/// Sorted removal set for `mode`.
pub fn removal_set(m: usize, mode: Mode) -> Vec<usize> {
    let (big, n) = mother_len(m);
    let js: Vec<usize> = match mode {
        Mode::Shortened => (m..big).collect(),
        Mode::Punctured => (0..big - m).collect(),
    };
    let mut v: Vec<usize> = js.into_iter().map(|j| rev(j, n)).collect();
    v.sort();
    v
}

/// `u = [T(x0 ^ x1 pairs), T(x1 of pairs)]`, by plain recursion.
pub fn naive_transform(x: &[u8]) -> Vec<u8> {
    if x.len() == 1 {
        return x.to_vec();
    }
    let v0: Vec<u8> = x.chunks(2).map(|p| p[0] ^ p[1]).collect();
    let v1: Vec<u8> = x.chunks(2).map(|p| p[1]).collect();
    let mut u = naive_transform(&v0);
    u.extend(naive_transform(&v1));
    u
}

/// Inverse via the transform matrix being its own inverse over GF(2).
pub fn naive_inverse(u: &[u8]) -> Vec<u8> {
    // T is an involution on bits: applying it twice gives the identity.
    naive_transform(u)
}

pub fn bits(v: usize, len: usize) -> Vec<u8> {
    (0..len).map(|j| ((v >> j) & 1) as u8).collect()
}

/// Whether SC decoding over the erasure channel fails for the kept-window
/// input `u` when the transmitted positions in `erased` are erased.
///
/// At step `i` the decoder knows the outputs, the removed positions (0 for
/// shortening, unobserved for puncturing) and the true past; every future
/// position of the extended input is free. Position `i` is decided
/// correctly when all consistent extended inputs agree on it, or when it is
/// undetermined and the true bit is 0 (ties decide 0).
pub fn bec_sc_fails(code: &CodeSpec, u: &[u8], erased: &[bool]) -> bool {
    let m = code.m();
    let mode = code.mode();
    let (big, _) = mother_len(m);
    let removed = removal_set(m, mode);
    let kept: Vec<usize> = (0..big).filter(|i| !removed.contains(i)).collect();
    let start = match mode {
        Mode::Shortened => 0,
        Mode::Punctured => big - m,
    };
    let mut ext = vec![0u8; big];
    ext[start..start + m].copy_from_slice(u);
    let x = naive_inverse(&ext);

    let consistent = |cand: &[u8]| {
        let cx = naive_inverse(cand);
        let kept_ok = kept
            .iter()
            .enumerate()
            .all(|(k, &pos)| erased[k] || cx[pos] == x[pos]);
        let removed_ok = mode == Mode::Punctured || removed.iter().all(|&pos| cx[pos] == 0);
        kept_ok && removed_ok
    };

    for i in 0..m {
        if code.is_frozen(i) {
            continue;
        }
        let pos = start + i;
        let free = big - pos;
        let mut seen = [false; 2];
        for tail in 0..1usize << free {
            let mut cand = ext[..pos].to_vec();
            cand.extend(bits(tail, free));
            if consistent(&cand) {
                seen[cand[pos] as usize] = true;
            }
        }
        let determined = !(seen[0] && seen[1]);
        if !determined && u[i] == 1 {
            return true;
        }
    }
    false
}

/// Exact frame error probability of SC decoding over BEC(`eps`) with
/// uniformly random data and frozen bits 0.
pub fn bec_sc_failure_probability(code: &CodeSpec, eps: f64) -> f64 {
    let m = code.m();
    let info = code.info_set();
    let mut total = 0.0;
    for msg in 0..1usize << info.len() {
        let mut u = vec![0u8; m];
        for (j, &i) in info.iter().enumerate() {
            u[i] = ((msg >> j) & 1) as u8;
        }
        for e in 0..1usize << m {
            let erased: Vec<bool> = (0..m).map(|k| (e >> k) & 1 == 1).collect();
            let ne = erased.iter().filter(|&&b| b).count() as i32;
            let p = eps.powi(ne) * (1.0 - eps).powi(m as i32 - ne);
            if bec_sc_fails(code, &u, &erased) {
                total += p;
            }
        }
    }
    total / (1usize << info.len()) as f64
}
