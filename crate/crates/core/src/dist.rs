//! The `-` and `+` combining operations on joint distributions, the two
//! special distributions (superb and pitiful), equivalence-preserving
//! cleanup, the shortcut table for operands that are special, and
//! alphabet-size control by degrading merges.
//!
//! Composite outputs are flattened as follows, with `n0 = |Y0|`, `n1 = |Y1|`:
//!
//! * `A - B` over `(y0, y1)`: index `y0 * n1 + y1`;
//! * `A + B` over `(u0, y0, y1)`: index `(u0 * n0 + y0) * n1 + y1`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::channel::{column_entropy, JointDist, MASS_TOL};
use crate::error::{Error, Result};
use crate::relations::Kernel;

/// Relative tolerance on posteriors under which two outputs are merged by
/// [`canonicalize`].
pub const POSTERIOR_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    /// `A ⊞ B`, the `-` operation.
    Minus,
    /// `A ⊛ B`, the `+` operation.
    Plus,
}

impl Op {
    pub fn apply(self, a: &JointDist, b: &JointDist) -> JointDist {
        match self {
            Op::Minus => op_minus(a, b),
            Op::Plus => op_plus(a, b),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Minus => "minus",
            Op::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistTag {
    Generic,
    Superb,
    Pitiful,
}

/// A joint distribution with its special-form tag.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedDist {
    pub dist: JointDist,
    pub tag: DistTag,
}

impl TaggedDist {
    pub fn superb() -> Self {
        Self {
            dist: special_superb(),
            tag: DistTag::Superb,
        }
    }

    pub fn pitiful() -> Self {
        Self {
            dist: special_pitiful(),
            tag: DistTag::Pitiful,
        }
    }

    /// Tags `dist`, replacing it by the canonical special form when it is
    /// equivalent to one.
    pub fn detect(dist: JointDist) -> Self {
        match detect_tag(&dist) {
            DistTag::Superb => Self::superb(),
            DistTag::Pitiful => Self::pitiful(),
            DistTag::Generic => Self {
                dist,
                tag: DistTag::Generic,
            },
        }
    }
}

/// `S`: input deterministically 0, single uninformative output.
pub fn special_superb() -> JointDist {
    JointDist::from_cols(vec![[1.0, 0.0]])
}

/// `P`: uniform input, single uninformative output.
pub fn special_pitiful() -> JointDist {
    JointDist::from_cols(vec![[0.5, 0.5]])
}

pub fn minus_index(y0: usize, y1: usize, n1: usize) -> usize {
    y0 * n1 + y1
}

pub fn plus_index(u0: u8, y0: usize, y1: usize, n0: usize, n1: usize) -> usize {
    (u0 as usize * n0 + y0) * n1 + y1
}

/// `(A ⊞ B)(u0; y0, y1) = sum_x1 A(u0 ^ x1; y0) B(x1; y1)`.
pub fn op_minus(a: &JointDist, b: &JointDist) -> JointDist {
    let mut cols = Vec::with_capacity(a.len() * b.len());
    for ca in a.cols() {
        for cb in b.cols() {
            cols.push([
                ca[0] * cb[0] + ca[1] * cb[1],
                ca[1] * cb[0] + ca[0] * cb[1],
            ]);
        }
    }
    JointDist::from_cols(cols)
}

/// `(A ⊛ B)(u1; u0, y0, y1) = A(u0 ^ u1; y0) B(u1; y1)`.
pub fn op_plus(a: &JointDist, b: &JointDist) -> JointDist {
    let mut cols = Vec::with_capacity(2 * a.len() * b.len());
    for u0 in 0..2usize {
        for ca in a.cols() {
            for cb in b.cols() {
                cols.push([ca[u0] * cb[0], ca[u0 ^ 1] * cb[1]]);
            }
        }
    }
    JointDist::from_cols(cols)
}

fn posterior(c: &[f64; 2]) -> f64 {
    let s = c[0] + c[1];
    if s > 0.0 {
        c[0] / s
    } else {
        0.5
    }
}

fn same_posterior(p: f64, q: f64) -> bool {
    let scale = p.min(1.0 - p).max(q.min(1.0 - q));
    (p - q).abs() <= POSTERIOR_REL_TOL * scale
}

fn sorted_by_posterior(cols: &[[f64; 2]]) -> Vec<(f64, usize)> {
    let mut order: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(y, c)| (posterior(c), y))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    order
}

/// Drops zero-mass outputs and merges outputs whose posteriors `P(0|y)`
/// agree to [`POSTERIOR_REL_TOL`]. The result is sorted by posterior, so
/// canonicalizing twice is the identity.
pub fn canonicalize(a: &JointDist) -> JointDist {
    let live: Vec<[f64; 2]> = a
        .cols()
        .iter()
        .copied()
        .filter(|c| c[0] + c[1] > 0.0)
        .collect();
    if live.is_empty() {
        return a.clone();
    }
    let order = sorted_by_posterior(&live);
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(order.len());
    let mut current_q = f64::NAN;
    for &(q, y) in &order {
        let c = live[y];
        match out.last_mut() {
            Some(last) if same_posterior(current_q, q) => {
                last[0] += c[0];
                last[1] += c[1];
                current_q = posterior(last);
            }
            _ => {
                out.push(c);
                current_q = q;
            }
        }
    }
    JointDist::from_cols(out)
}

/// Recognizes distributions equivalent to `S` (input deterministically 0)
/// or `P` (input uniform and independent of the output). Only exact
/// matches qualify.
pub fn detect_tag(a: &JointDist) -> DistTag {
    if (a.total_mass() - 1.0).abs() > MASS_TOL {
        return DistTag::Generic;
    }
    if a.cols().iter().all(|c| c[1] == 0.0) {
        DistTag::Superb
    } else if a.cols().iter().all(|c| c[0] == c[1]) {
        DistTag::Pitiful
    } else {
        DistTag::Generic
    }
}

/// What the shortcut table prescribes for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableOutcome {
    /// Both operands generic: evaluate the operation.
    Compute,
    /// The row operand itself.
    Row,
    /// The column operand itself.
    Col,
    Superb,
    Pitiful,
}

/// The equivalence table for `op` with row operand tag `row` and column
/// operand tag `col`.
pub fn table_lookup(op: Op, row: DistTag, col: DistTag) -> TableOutcome {
    use DistTag::*;
    use TableOutcome as T;
    match op {
        Op::Minus => match (row, col) {
            (Generic, Generic) => T::Compute,
            (Pitiful, _) | (_, Pitiful) => T::Pitiful,
            (Superb, _) => T::Col,
            (_, Superb) => T::Row,
        },
        Op::Plus => match (row, col) {
            (Generic, Generic) => T::Compute,
            (Superb, _) | (_, Superb) => T::Superb,
            (Pitiful, _) => T::Col,
            (_, Pitiful) => T::Row,
        },
    }
}

/// Applies `op` to `a` and `b`, skipping the computation whenever either
/// operand is special. The returned distribution is equivalent (not
/// necessarily equal) to `op(a, b)`; computed results are returned as-is and
/// tagged by [`detect_tag`].
pub fn table_simplify(op: Op, a: &TaggedDist, b: &TaggedDist) -> TaggedDist {
    match table_lookup(op, a.tag, b.tag) {
        TableOutcome::Compute => TaggedDist::detect(op.apply(&a.dist, &b.dist)),
        TableOutcome::Row => a.clone(),
        TableOutcome::Col => b.clone(),
        TableOutcome::Superb => TaggedDist::superb(),
        TableOutcome::Pitiful => TaggedDist::pitiful(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct MergeCandidate {
    cost: f64,
    left: usize,
    left_version: u32,
    right_version: u32,
}

impl Eq for MergeCandidate {}

impl Ord for MergeCandidate {
    // Min-heap on cost, ties broken towards the lower position.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then(other.left.cmp(&self.left))
    }
}

impl PartialOrd for MergeCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reduces the output alphabet to at most `mu` symbols by greedily merging
/// posterior-adjacent outputs, cheapest entropy increase first. Returns the
/// degraded distribution together with the merge map as a degradation
/// kernel from `a` to the result.
pub fn degrade_merge(a: &JointDist, mu: usize) -> Result<(JointDist, Kernel)> {
    if mu < 2 {
        return Err(Error::InvalidParameter(format!(
            "merge budget must be at least 2, got {mu}"
        )));
    }
    if a.len() <= mu {
        return Ok((a.clone(), Kernel::identity(a.len())));
    }
    let order = sorted_by_posterior(a.cols());
    let len = order.len();
    let mut cols: Vec<[f64; 2]> = order.iter().map(|&(_, y)| a.cols()[y]).collect();
    let mut ent: Vec<f64> = cols.iter().map(|c| column_entropy(c[0], c[1])).collect();
    let mut prev: Vec<usize> = (0..len).map(|i| i.wrapping_sub(1)).collect();
    let mut next: Vec<usize> = (1..=len).collect();
    let mut alive = vec![true; len];
    let mut version = vec![0u32; len];

    let cost = |cols: &[[f64; 2]], ent: &[f64], l: usize, r: usize| {
        let (a, b) = (cols[l], cols[r]);
        column_entropy(a[0] + b[0], a[1] + b[1]) - ent[l] - ent[r]
    };
    let mut heap = BinaryHeap::with_capacity(2 * len);
    for l in 0..len - 1 {
        heap.push(MergeCandidate {
            cost: cost(&cols, &ent, l, l + 1),
            left: l,
            left_version: 0,
            right_version: 0,
        });
    }

    let mut remaining = len;
    while remaining > mu {
        let Some(cand) = heap.pop() else { break };
        let l = cand.left;
        let r = next[l];
        if !alive[l] || r >= len || version[l] != cand.left_version || version[r] != cand.right_version
        {
            continue;
        }
        cols[l][0] += cols[r][0];
        cols[l][1] += cols[r][1];
        ent[l] = column_entropy(cols[l][0], cols[l][1]);
        alive[r] = false;
        version[l] += 1;
        next[l] = next[r];
        if next[l] < len {
            prev[next[l]] = l;
        }
        remaining -= 1;
        let p = prev[l];
        if p < len {
            heap.push(MergeCandidate {
                cost: cost(&cols, &ent, p, l),
                left: p,
                left_version: version[p],
                right_version: version[l],
            });
        }
        if next[l] < len {
            let n = next[l];
            heap.push(MergeCandidate {
                cost: cost(&cols, &ent, l, n),
                left: l,
                left_version: version[l],
                right_version: version[n],
            });
        }
    }

    let mut group_of_pos = vec![0usize; len];
    let mut out = Vec::with_capacity(remaining);
    let mut group = 0usize;
    for pos in 0..len {
        if alive[pos] {
            out.push(cols[pos]);
            group = out.len() - 1;
        }
        group_of_pos[pos] = group;
    }
    let mut map = vec![0usize; len];
    for (pos, &(_, y)) in order.iter().enumerate() {
        map[y] = group_of_pos[pos];
    }
    let out_len = out.len();
    Ok((JointDist::from_cols(out), Kernel::deterministic(map, out_len)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{joint_from, make_bec, make_bsc, InputDist};

    fn bec(eps: f64) -> JointDist {
        joint_from(InputDist::uniform(), &make_bec(eps).unwrap())
    }

    fn bsc(p: f64) -> JointDist {
        joint_from(InputDist::uniform(), &make_bsc(p).unwrap())
    }

    #[test]
    fn special_anchors() {
        let s = special_superb();
        assert_eq!((s.z(), s.k(), s.h()), (0.0, 1.0, 0.0));
        let p = special_pitiful();
        assert_eq!((p.z(), p.k(), p.h()), (1.0, 0.0, 1.0));
    }

    #[test]
    fn bec_minus_and_plus() {
        let a = bec(0.5);
        let m = op_minus(&a, &a);
        assert!((m.z() - 0.75).abs() < 1e-15);
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
        let p = op_plus(&a, &a);
        assert!((p.z() - 0.25).abs() < 1e-15);
        assert_eq!(canonicalize(&m).len(), 3);
        assert_eq!(canonicalize(&p).len(), 3);
    }

    #[test]
    fn minus_with_superb_copies_operand() {
        let a = bsc(0.2);
        let r = op_minus(&a, &special_superb());
        for y0 in 0..a.len() {
            for u0 in 0..2u8 {
                assert_eq!(r.mass(u0, minus_index(y0, 0, 1)), a.mass(u0, y0));
            }
        }
        assert_eq!(canonicalize(&r).len(), a.len());
    }

    #[test]
    fn pitiful_absorbs_minus() {
        let r = op_minus(&special_pitiful(), &bsc(0.1));
        assert!((r.z() - 1.0).abs() < 1e-15);
        assert_eq!(detect_tag(&r), DistTag::Pitiful);
    }

    #[test]
    fn plus_special_cells() {
        let a = bsc(0.3);
        assert_eq!(detect_tag(&op_plus(&a, &special_superb())), DistTag::Superb);
        let ap = op_plus(&a, &special_pitiful());
        assert!((ap.z() - a.z()).abs() < 1e-15);
        assert!((ap.h() - a.h()).abs() < 1e-15);
        assert!((ap.k() - a.k()).abs() < 1e-15);
    }

    #[test]
    fn canonicalize_merges_duplicates() {
        let a = JointDist::new(vec![[0.2, 0.1], [0.4, 0.2], [0.0, 0.0], [0.05, 0.05]]).unwrap();
        let c = canonicalize(&a);
        assert_eq!(c.len(), 2);
        assert!((c.z() - a.z()).abs() < 1e-12);
        assert!((c.h() - a.h()).abs() < 1e-12);
        assert!((c.k() - a.k()).abs() < 1e-12);
        assert_eq!(canonicalize(&c), c);
    }

    #[test]
    fn table_cells() {
        let b = TaggedDist::detect(bsc(0.2));
        let s = TaggedDist::superb();
        let p = TaggedDist::pitiful();
        assert_eq!(table_simplify(Op::Minus, &s, &b), b);
        assert_eq!(table_simplify(Op::Plus, &p, &s).tag, DistTag::Superb);
        assert_eq!(table_simplify(Op::Minus, &b, &p).tag, DistTag::Pitiful);
        assert_eq!(table_simplify(Op::Plus, &b, &p), b);
        assert_eq!(table_lookup(Op::Minus, DistTag::Superb, DistTag::Pitiful), TableOutcome::Pitiful);
        assert_eq!(table_lookup(Op::Plus, DistTag::Pitiful, DistTag::Pitiful), TableOutcome::Col);
    }

    #[test]
    fn merge_identity_when_small() {
        let a = bec(0.3);
        let (m, q) = degrade_merge(&a, 3).unwrap();
        assert_eq!(m, a);
        assert_eq!(q, Kernel::identity(3));
        assert!(degrade_merge(&a, 1).is_err());
    }

    #[test]
    fn merging_bsc_to_one_symbol_is_pitiful() {
        let a = bsc(0.11);
        let (m, q) = degrade_merge(&a, 2).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(q.apply(&a).unwrap(), m);
        // Budget of one symbol is below the precondition; merge by hand.
        let one = Kernel::deterministic(vec![0, 0], 1).unwrap().apply(&a).unwrap();
        assert!((one.z() - 1.0).abs() < 1e-12);
        assert_eq!(detect_tag(&one), DistTag::Pitiful);
    }

    #[test]
    fn merge_degrades() {
        let a = bsc(0.1);
        let w = canonicalize(&op_plus(&op_minus(&a, &a), &op_plus(&a, &a)));
        let (m, q) = degrade_merge(&w, 4).unwrap();
        assert!(m.len() <= 4);
        assert!(m.z() >= w.z() - 1e-12);
        assert!(m.h() >= w.h() - 1e-12);
        assert!(m.k() <= w.k() + 1e-12);
        assert!(q.apply(&w).unwrap().max_abs_diff(&m) < 1e-15);
    }
}
