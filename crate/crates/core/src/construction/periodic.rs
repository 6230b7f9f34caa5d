use super::{build_dist_vector, combine, evolve_entries, Profile};
use crate::channel::JointDist;
use crate::dist::{Op, TaggedDist};
use crate::error::{Error, Result};
use crate::transform::Mode;

/// Evolution that exploits the period `2^t` of the initial vector.
#[derive(Debug, Clone)]
pub struct PeriodicEvolution {
    pub t: u32,
    /// `Ω_b` for `b < 2^t`: the common value of block `b` after `t` stages.
    pub omegas: Vec<TaggedDist>,
    /// All `N` leaves.
    pub leaves: Vec<TaggedDist>,
    /// Profile over the kept window.
    pub profile: Profile,
}

/// `t = n - tz(M)`, the smallest period exponent for `M`.
pub fn default_period(m: usize) -> u32 {
    let n = crate::transform::log2_ceil(m);
    n - m.trailing_zeros().min(n)
}

/// Identical-operand recursion over `depth` stages starting from `omega`;
/// the result is indexed by the branch bits, first stage most significant.
fn seminal(omega: &TaggedDist, depth: u32, mu: Option<usize>) -> Result<Vec<TaggedDist>> {
    let mut level = vec![omega.clone()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(2 * level.len());
        for d in &level {
            next.push(combine(Op::Minus, d, d, mu)?);
            next.push(combine(Op::Plus, d, d, mu)?);
        }
        level = next;
    }
    Ok(level)
}

/// Evolves the length-`2^t` period to obtain every `Ω_b`, then each `Ω_b`
/// through the remaining `n - t` identical-operand stages. `t` defaults to
/// [`default_period`]; `2^(n-t)` must divide `M`.
pub fn periodic_fast_path(
    m: usize,
    w: &JointDist,
    mode: Mode,
    mu: Option<usize>,
    t: Option<u32>,
) -> Result<PeriodicEvolution> {
    let v = build_dist_vector(m, w, mode)?;
    let n = v.pattern.n_bits;
    let t = t.unwrap_or_else(|| default_period(m));
    if t > n || !m.is_multiple_of(1usize << (n - t)) {
        return Err(Error::NotPeriodic { m, t });
    }
    let period = 1usize << t;
    let omegas = evolve_entries(&v.entries[..period], mu)?.to_vec();

    #[cfg(feature = "parallel")]
    let subtrees: Vec<Result<Vec<TaggedDist>>> = {
        use rayon::prelude::*;
        omegas.par_iter().map(|o| seminal(o, n - t, mu)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let subtrees: Vec<Result<Vec<TaggedDist>>> =
        omegas.iter().map(|o| seminal(o, n - t, mu)).collect();

    let mut leaves = Vec::with_capacity(v.pattern.n_total);
    for s in subtrees {
        leaves.extend(s?);
    }
    let start = v.pattern.window_start();
    let profile = Profile::from_dists(leaves[start..start + m].iter().map(|d| &d.dist));
    Ok(PeriodicEvolution {
        t,
        omegas,
        leaves,
        profile,
    })
}
