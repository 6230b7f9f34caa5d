//! Joint-distribution evolution along the transform, code construction,
//! and the two reference oracles (exact BEC recursion and brute force).

mod codespec;
mod oracles;
mod periodic;

pub use codespec::CodeSpec;
pub use oracles::{bec_closed_form, brute_force_profile, BRUTE_FORCE_MAX_M};
pub use periodic::{default_period, periodic_fast_path, PeriodicEvolution};

use std::collections::HashMap;

use crate::channel::{joint_from, ChannelSpec, InputDist, JointDist};
use crate::dist::{canonicalize, degrade_merge, table_simplify, DistTag, Op, TaggedDist};
use crate::error::{Error, Result};
use crate::transform::{Mode, Pattern};

/// Default merge budget.
pub const DEFAULT_MU: usize = 128;

/// Initial distributions `A_0 .. A_{N-1}` of the extended code.
#[derive(Debug, Clone)]
pub struct DistVector {
    pub pattern: Pattern,
    pub entries: Vec<TaggedDist>,
}

pub fn build_dist_vector(m: usize, w: &JointDist, mode: Mode) -> Result<DistVector> {
    let pattern = Pattern::new(m, mode)?;
    let base = TaggedDist::detect(canonicalize(w));
    let special = match mode {
        Mode::Shortened => TaggedDist::superb(),
        Mode::Punctured => TaggedDist::pitiful(),
    };
    let entries = (0..pattern.n_total)
        .map(|i| {
            if pattern.contains(i) {
                special.clone()
            } else {
                base.clone()
            }
        })
        .collect();
    Ok(DistVector { pattern, entries })
}

/// One evolution step: shortcut table, then canonical form, then a
/// degrading merge down to `mu` outputs if needed.
pub fn combine(op: Op, a: &TaggedDist, b: &TaggedDist, mu: Option<usize>) -> Result<TaggedDist> {
    let r = table_simplify(op, a, b);
    if r.tag != DistTag::Generic {
        return Ok(r);
    }
    let c = canonicalize(&r.dist);
    let c = match mu {
        Some(mu) if c.len() > mu => degrade_merge(&c, mu)?.0,
        _ => c,
    };
    Ok(TaggedDist::detect(c))
}

#[cfg(feature = "parallel")]
fn map_jobs<T, F>(jobs: &[(Op, usize, usize)], f: F) -> Vec<Result<T>>
where
    T: Send,
    F: Fn(&(Op, usize, usize)) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    jobs.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_jobs<T, F>(jobs: &[(Op, usize, usize)], f: F) -> Vec<Result<T>>
where
    F: Fn(&(Op, usize, usize)) -> Result<T>,
{
    jobs.iter().map(f).collect()
}

/// Distributions produced by [`evolve`]: a pool of distinct values and the
/// pool index of every leaf.
#[derive(Debug, Clone)]
pub struct Leaves {
    pub pool: Vec<TaggedDist>,
    pub ids: Vec<usize>,
}

impl Leaves {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize) -> &TaggedDist {
        &self.pool[self.ids[i]]
    }

    pub fn to_vec(&self) -> Vec<TaggedDist> {
        self.ids.iter().map(|&i| self.pool[i].clone()).collect()
    }
}

/// Evolves `entries` (length a power of two) through every stage, so that
/// leaf `i` holds the distribution of `U_i` given `U^{i-1}` and the
/// outputs. Equal operand pairs are evaluated once.
pub fn evolve_entries(entries: &[TaggedDist], mu: Option<usize>) -> Result<Leaves> {
    let total = entries.len();
    if !total.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "distribution vector length {total} is not a power of two"
        )));
    }
    let mut pool: Vec<TaggedDist> = Vec::new();
    let mut ids = Vec::with_capacity(total);
    {
        let mut seen: Vec<usize> = Vec::new();
        for e in entries {
            match seen.iter().find(|&&j| pool[j] == *e) {
                Some(&j) => ids.push(j),
                None => {
                    seen.push(pool.len());
                    ids.push(pool.len());
                    pool.push(e.clone());
                }
            }
        }
    }
    let mut memo: HashMap<(Op, usize, usize), usize> = HashMap::new();
    let mut block = total;
    let mut scratch = vec![0usize; total];
    while block >= 2 {
        let half = block / 2;
        let mut jobs = Vec::new();
        for start in (0..total).step_by(block) {
            for k in 0..half {
                let (a, b) = (ids[start + 2 * k], ids[start + 2 * k + 1]);
                for op in [Op::Minus, Op::Plus] {
                    if let std::collections::hash_map::Entry::Vacant(slot) = memo.entry((op, a, b)) {
                        slot.insert(usize::MAX);
                        jobs.push((op, a, b));
                    }
                }
            }
        }
        let results = map_jobs(&jobs, |&(op, a, b)| combine(op, &pool[a], &pool[b], mu));
        for (key, r) in jobs.into_iter().zip(results) {
            memo.insert(key, pool.len());
            pool.push(r?);
        }
        for start in (0..total).step_by(block) {
            for k in 0..half {
                let (a, b) = (ids[start + 2 * k], ids[start + 2 * k + 1]);
                scratch[start + k] = memo[&(Op::Minus, a, b)];
                scratch[start + half + k] = memo[&(Op::Plus, a, b)];
            }
        }
        ids[..].copy_from_slice(&scratch);
        block = half;
    }
    Ok(Leaves { pool, ids })
}

/// Evolves a distribution vector; `mu = None` means exact evolution.
pub fn evolve(v: &DistVector, mu: Option<usize>) -> Result<Leaves> {
    evolve_entries(&v.entries, mu)
}

/// Per-index figures of merit of the `M` kept synthetic inputs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Profile {
    pub z: Vec<f64>,
    pub k: Vec<f64>,
    pub h: Vec<f64>,
}

impl Profile {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn from_dists<'a>(dists: impl IntoIterator<Item = &'a JointDist>) -> Self {
        let mut p = Profile::default();
        for d in dists {
            p.z.push(d.z());
            p.k.push(d.k());
            p.h.push(d.h());
        }
        p
    }

    /// Largest per-index gap over the three figures; infinite if the
    /// lengths differ.
    pub fn max_abs_diff(&self, other: &Profile) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        [(&self.z, &other.z), (&self.k, &other.k), (&self.h, &other.h)]
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    pub fn mean_h(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.h.iter().sum::<f64>() / self.len() as f64
        }
    }
}

/// Restricts the leaves to the kept window (prefix for shortening, suffix
/// for puncturing).
pub fn window_profile(pattern: &Pattern, leaves: &Leaves) -> Profile {
    let start = pattern.window_start();
    Profile::from_dists((start..start + pattern.m).map(|i| &leaves.get(i).dist))
}

/// Exact or merged profile of the length-`M` code in `mode` over `w`.
pub fn code_profile(m: usize, w: &JointDist, mode: Mode, mu: Option<usize>) -> Result<Profile> {
    let v = build_dist_vector(m, w, mode)?;
    let leaves = evolve(&v, mu)?;
    Ok(window_profile(&v.pattern, &leaves))
}

/// The `m - count` indices with the largest `z`, lower index first among
/// ties, in increasing order.
pub fn select_frozen(z: &[f64], count: usize) -> Result<Vec<usize>> {
    let m = z.len();
    if count > m {
        return Err(Error::InfoSetTooLarge { count, m });
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| z[b].total_cmp(&z[a]).then(a.cmp(&b)));
    let mut frozen = order[..m - count].to_vec();
    frozen.sort_unstable();
    Ok(frozen)
}

/// Builds a code of length `m` with `count` information bits.
pub fn construct_code(
    m: usize,
    channel: &ChannelSpec,
    input: InputDist,
    mode: Mode,
    mu: Option<usize>,
    count: usize,
) -> Result<CodeSpec> {
    if count > m {
        return Err(Error::InfoSetTooLarge { count, m });
    }
    let w = joint_from(input, &channel.channel()?);
    let pattern = Pattern::new(m, mode)?;
    let profile = code_profile(m, &w, mode, mu)?;
    let frozen = select_frozen(&profile.z, count)?;
    Ok(CodeSpec {
        pattern,
        channel: channel.clone(),
        p0: input.p0(),
        mu,
        profile,
        frozen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::make_bsc;

    fn bsc(p: f64) -> JointDist {
        joint_from(InputDist::uniform(), &make_bsc(p).unwrap())
    }

    #[test]
    fn dist_vector_positions() {
        let w = bsc(0.1);
        let v = build_dist_vector(6, &w, Mode::Shortened).unwrap();
        let tags: Vec<_> = v.entries.iter().map(|e| e.tag).collect();
        assert_eq!(tags[3], DistTag::Superb);
        assert_eq!(tags[7], DistTag::Superb);
        assert_eq!(tags.iter().filter(|&&t| t == DistTag::Generic).count(), 6);
        let v = build_dist_vector(6, &w, Mode::Punctured).unwrap();
        assert_eq!(v.entries[0].tag, DistTag::Pitiful);
        assert_eq!(v.entries[4].tag, DistTag::Pitiful);
    }

    #[test]
    fn single_stage() {
        let w = bsc(0.2);
        let v = build_dist_vector(2, &w, Mode::Shortened).unwrap();
        let leaves = evolve(&v, None).unwrap();
        let minus = canonicalize(&Op::Minus.apply(&w, &w));
        let plus = canonicalize(&Op::Plus.apply(&w, &w));
        assert!(leaves.get(0).dist.max_abs_diff(&minus) < 1e-15);
        assert!(leaves.get(1).dist.max_abs_diff(&plus) < 1e-15);
    }

    #[test]
    fn pattern_leaves_tagged() {
        let w = bsc(0.2);
        let v = build_dist_vector(3, &w, Mode::Shortened).unwrap();
        assert_eq!(evolve(&v, None).unwrap().get(3).tag, DistTag::Superb);
        let v = build_dist_vector(3, &w, Mode::Punctured).unwrap();
        assert_eq!(evolve(&v, None).unwrap().get(0).tag, DistTag::Pitiful);
    }

    #[test]
    fn frozen_selection() {
        assert_eq!(select_frozen(&[0.5, 0.9, 0.5, 0.1], 2).unwrap(), vec![0, 1]);
        assert_eq!(select_frozen(&[0.5, 0.9], 0).unwrap(), vec![0, 1]);
        assert!(select_frozen(&[0.5], 2).is_err());
    }
}
