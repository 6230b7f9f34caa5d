//! Explicit chains for the three structural facts the construction rests on:
//!
//! * every distribution sits between `P` and `S` ([`witness_pitiful`],
//!   [`witness_superb`]);
//! * one step below an operand stays below after combining
//!   ([`witness_preserve`], eight cases);
//! * every special cell of the shortcut table is an equivalence
//!   ([`witness_table_entry`]).

use super::{apply_permutation, Kernel, RelationStep, RelationWitness};
use crate::channel::JointDist;
use crate::dist::{
    minus_index, plus_index, special_pitiful, special_superb, table_lookup, DistTag, Op,
    TableOutcome,
};
use crate::error::{Error, Result};

fn deg(k: Kernel) -> RelationStep {
    RelationStep::Degradation(k)
}

/// Chain `P ⊑d C1 ⊑p C2 ⊑d A`: split each output with a fair coin `x1`,
/// flip the input by `x1`, then forget everything.
pub fn witness_pitiful(a: &JointDist) -> RelationWitness {
    let n0 = a.len();
    let split = Kernel {
        rows: (0..n0)
            .map(|y| vec![(2 * y, 0.5), (2 * y + 1, 0.5)])
            .collect(),
        out_len: 2 * n0,
    };
    let c2 = split.apply(a).expect("kernel sized to operand");
    let flip: Vec<u8> = (0..2 * n0).map(|i| (i & 1) as u8).collect();
    let c1 = apply_permutation(&c2, &flip).expect("permutation sized to operand");
    let forget = Kernel {
        rows: vec![vec![(0, 1.0)]; 2 * n0],
        out_len: 1,
    };
    RelationWitness::from_parts(
        vec![deg(forget), RelationStep::Permutation(flip), deg(split)],
        vec![c1, c2],
    )
}

/// Chain `A ⊑d D1 ⊑p D2 ⊑d S`: emit `(x0, y0)` drawn from `A`, flip the
/// (zero) input by `x0`, then drop `x0` from the output.
pub fn witness_superb(a: &JointDist) -> RelationWitness {
    let n0 = a.len();
    let draw = Kernel {
        rows: vec![(0..2u8)
            .flat_map(|x0| (0..n0).map(move |y0| (x0, y0)))
            .map(|(x0, y0)| (x0 as usize * n0 + y0, a.mass(x0, y0)))
            .filter(|&(_, q)| q != 0.0)
            .collect()],
        out_len: 2 * n0,
    };
    let d2 = draw.apply(&special_superb()).expect("single-output kernel");
    let flip: Vec<u8> = (0..2 * n0).map(|i| (i / n0) as u8).collect();
    let d1 = apply_permutation(&d2, &flip).expect("permutation sized to operand");
    let drop_input = Kernel {
        rows: (0..2 * n0).map(|i| vec![(i % n0, 1.0)]).collect(),
        out_len: n0,
    };
    RelationWitness::from_parts(
        vec![deg(drop_input), RelationStep::Permutation(flip), deg(draw)],
        vec![d1, d2],
    )
}

fn case_shape(case: u8) -> Result<(Op, bool, bool)> {
    // (operation, step acts on the B operand, step is a degradation)
    Ok(match case {
        1 => (Op::Minus, false, true),
        2 => (Op::Plus, false, true),
        3 => (Op::Minus, false, false),
        4 => (Op::Plus, false, false),
        5 => (Op::Minus, true, true),
        6 => (Op::Plus, true, true),
        7 => (Op::Minus, true, false),
        8 => (Op::Plus, true, false),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "preservation case must be 1..=8, got {case}"
            )))
        }
    })
}

fn check_case(case: u8, step: &RelationStep, operand: &JointDist) -> Result<(Op, bool)> {
    let (op, on_b, is_deg) = case_shape(case)?;
    match (is_deg, step) {
        (true, RelationStep::Degradation(q)) if q.in_len() != operand.len() => {
            Err(Error::DimensionMismatch(format!(
                "kernel expects {} inputs, operand has {}",
                q.in_len(),
                operand.len()
            )))
        }
        (false, RelationStep::Permutation(f)) if f.len() != operand.len() => {
            Err(Error::DimensionMismatch(format!(
                "permutation on {} symbols, operand has {}",
                f.len(),
                operand.len()
            )))
        }
        (true, RelationStep::Degradation(_)) | (false, RelationStep::Permutation(_)) => {
            Ok((op, on_b))
        }
        (true, _) => Err(Error::CaseStepMismatch {
            case,
            expected: "degradation",
        }),
        (false, _) => Err(Error::CaseStepMismatch {
            case,
            expected: "permutation",
        }),
    }
}

/// The two endpoints `(lower, upper)` certified by [`witness_preserve`]:
/// `(A' op B, A op B)` for cases 1-4 and `(A op B', A op B)` for cases 5-8,
/// where the primed operand is `step` applied to the plain one.
pub fn preserve_operands(
    case: u8,
    a: &JointDist,
    b: &JointDist,
    step: &RelationStep,
) -> Result<(JointDist, JointDist)> {
    let (_, on_b, _) = case_shape(case)?;
    let (op, _) = check_case(case, step, if on_b { b } else { a })?;
    let upper = op.apply(a, b);
    let lower = if on_b {
        op.apply(a, &step.apply(b)?)
    } else {
        op.apply(&step.apply(a)?, b)
    };
    Ok((lower, upper))
}

/// Lifts a single step below one operand to a chain below the combined
/// distribution, for the eight (operation, operand, step kind) cases.
pub fn witness_preserve(
    case: u8,
    a: &JointDist,
    b: &JointDist,
    step: &RelationStep,
) -> Result<RelationWitness> {
    let (_, on_b, _) = case_shape(case)?;
    check_case(case, step, if on_b { b } else { a })?;
    let (n0, n1) = (a.len(), b.len());
    let w = match (case, step) {
        (1, RelationStep::Degradation(q)) => {
            let m0 = q.out_len();
            let rows = (0..n0)
                .flat_map(|y0| (0..n1).map(move |y1| (y0, y1)))
                .map(|(y0, y1)| {
                    q.rows()[y0]
                        .iter()
                        .map(|&(y0p, p)| (minus_index(y0p, y1, n1), p))
                        .collect()
                })
                .collect();
            RelationWitness::single(deg(Kernel {
                rows,
                out_len: m0 * n1,
            }))
        }
        (2, RelationStep::Degradation(q)) => {
            let m0 = q.out_len();
            let mut rows = Vec::with_capacity(2 * n0 * n1);
            for u0 in 0..2u8 {
                for y0 in 0..n0 {
                    for y1 in 0..n1 {
                        rows.push(
                            q.rows()[y0]
                                .iter()
                                .map(|&(y0p, p)| (plus_index(u0, y0p, y1, m0, n1), p))
                                .collect(),
                        );
                    }
                }
            }
            RelationWitness::single(deg(Kernel {
                rows,
                out_len: 2 * m0 * n1,
            }))
        }
        (3, RelationStep::Permutation(f)) => {
            let g = (0..n0 * n1).map(|i| f[i / n1]).collect();
            RelationWitness::single(RelationStep::Permutation(g))
        }
        (4, RelationStep::Permutation(f)) => {
            let mut map = Vec::with_capacity(2 * n0 * n1);
            for u0 in 0..2u8 {
                for y0 in 0..n0 {
                    for y1 in 0..n1 {
                        map.push(plus_index(u0 ^ f[y0], y0, y1, n0, n1));
                    }
                }
            }
            RelationWitness::single(deg(Kernel::deterministic(map, 2 * n0 * n1)?))
        }
        (5, RelationStep::Degradation(q)) => {
            let m1 = q.out_len();
            let rows = (0..n0)
                .flat_map(|y0| (0..n1).map(move |y1| (y0, y1)))
                .map(|(y0, y1)| {
                    q.rows()[y1]
                        .iter()
                        .map(|&(y1p, p)| (minus_index(y0, y1p, m1), p))
                        .collect()
                })
                .collect();
            RelationWitness::single(deg(Kernel {
                rows,
                out_len: n0 * m1,
            }))
        }
        (6, RelationStep::Degradation(q)) => {
            let m1 = q.out_len();
            let mut rows = Vec::with_capacity(2 * n0 * n1);
            for u0 in 0..2u8 {
                for y0 in 0..n0 {
                    for y1 in 0..n1 {
                        rows.push(
                            q.rows()[y1]
                                .iter()
                                .map(|&(y1p, p)| (plus_index(u0, y0, y1p, n0, m1), p))
                                .collect(),
                        );
                    }
                }
            }
            RelationWitness::single(deg(Kernel {
                rows,
                out_len: 2 * n0 * m1,
            }))
        }
        (7, RelationStep::Permutation(f)) => {
            let g = (0..n0 * n1).map(|i| f[i % n1]).collect();
            RelationWitness::single(RelationStep::Permutation(g))
        }
        (8, RelationStep::Permutation(f)) => {
            // A ⊛ B' ⊑d C ⊑p A ⊛ B with C the output-dependent flip of A ⊛ B.
            let len = 2 * n0 * n1;
            let fp: Vec<u8> = (0..len).map(|i| f[i % n1]).collect();
            let c = apply_permutation(&op_plus_raw(a, b), &fp)?;
            let mut map = Vec::with_capacity(len);
            for u0 in 0..2u8 {
                for y0 in 0..n0 {
                    for y1 in 0..n1 {
                        map.push(plus_index(u0 ^ f[y1], y0, y1, n0, n1));
                    }
                }
            }
            RelationWitness::from_parts(
                vec![
                    deg(Kernel::deterministic(map, len)?),
                    RelationStep::Permutation(fp),
                ],
                vec![c],
            )
        }
        _ => unreachable!("checked by check_case"),
    };
    Ok(w)
}

fn op_plus_raw(a: &JointDist, b: &JointDist) -> JointDist {
    Op::Plus.apply(a, b)
}

/// An operand slot in the shortcut table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operand {
    /// The caller's own distribution (`A` for rows, `B` for columns).
    Given,
    Superb,
    Pitiful,
}

impl Operand {
    pub const ALL: [Operand; 3] = [Operand::Given, Operand::Superb, Operand::Pitiful];

    pub fn tag(self) -> DistTag {
        match self {
            Operand::Given => DistTag::Generic,
            Operand::Superb => DistTag::Superb,
            Operand::Pitiful => DistTag::Pitiful,
        }
    }

    fn resolve(self, given: &JointDist) -> JointDist {
        match self {
            Operand::Given => given.clone(),
            Operand::Superb => special_superb(),
            Operand::Pitiful => special_pitiful(),
        }
    }
}

/// Mutual-inferiority certificate for one table cell.
#[derive(Debug, Clone)]
pub struct TableWitness {
    /// `row op col`, evaluated explicitly.
    pub computed: JointDist,
    /// The value the table prescribes.
    pub claimed: JointDist,
    /// `computed ⊑ claimed`.
    pub computed_below: RelationWitness,
    /// `claimed ⊑ computed`.
    pub claimed_below: RelationWitness,
}

fn map_kernel(map: impl IntoIterator<Item = usize>, out_len: usize) -> Kernel {
    Kernel::deterministic(map.into_iter().collect(), out_len).expect("map within range")
}

/// Builds both chains for the cell `(row, col)` of the `op` table. The
/// fully generic cell has no shortcut and is rejected.
pub fn witness_table_entry(
    op: Op,
    row: Operand,
    col: Operand,
    a: &JointDist,
    b: &JointDist,
) -> Result<TableWitness> {
    if row == Operand::Given && col == Operand::Given {
        return Err(Error::UnsupportedCell(format!(
            "({}, A, B) has no shortcut",
            op.symbol()
        )));
    }
    let r = row.resolve(a);
    let c = col.resolve(b);
    let (n0, n1) = (r.len(), c.len());
    let computed = op.apply(&r, &c);
    let len = computed.len();
    let claimed_dist = |outcome: TableOutcome| match outcome {
        TableOutcome::Row => r.clone(),
        TableOutcome::Col => c.clone(),
        TableOutcome::Superb => special_superb(),
        TableOutcome::Pitiful => special_pitiful(),
        TableOutcome::Compute => unreachable!("generic cell rejected above"),
    };
    let claimed = claimed_dist(table_lookup(op, row.tag(), col.tag()));

    let (down, up) = match op {
        Op::Minus if row == Operand::Pitiful => {
            // P ⊞ B ≡ P: outputs (?, y1) carry B(y1)/2 for either input.
            let spread = Kernel {
                rows: vec![(0..n1).map(|y1| (minus_index(0, y1, n1), c.output_mass(y1))).collect()],
                out_len: len,
            };
            (
                RelationWitness::single(deg(spread)),
                witness_pitiful(&computed),
            )
        }
        Op::Minus if row == Operand::Superb => {
            // S ⊞ B ≡ B: (S ⊞ B)(u0; ?, y1) = B(u0; y1).
            (
                RelationWitness::single(deg(map_kernel((0..n1).map(|y| minus_index(0, y, n1)), len))),
                RelationWitness::single(deg(map_kernel((0..len).map(|i| i % n1), n1))),
            )
        }
        Op::Minus if col == Operand::Superb => {
            // A ⊞ S ≡ A: (A ⊞ S)(u0; y0, ?) = A(u0; y0).
            (
                RelationWitness::single(deg(map_kernel((0..n0).map(|y| minus_index(y, 0, 1)), len))),
                RelationWitness::single(deg(map_kernel((0..len).map(|i| i / n1), n0))),
            )
        }
        Op::Minus => {
            // A ⊞ P ≡ P: outputs (y0, ?) carry A(y0)/2 for either input.
            let spread = Kernel {
                rows: vec![(0..n0).map(|y0| (minus_index(y0, 0, 1), r.output_mass(y0))).collect()],
                out_len: len,
            };
            (
                RelationWitness::single(deg(spread)),
                witness_pitiful(&computed),
            )
        }
        Op::Plus if row == Operand::Superb => {
            // S ⊛ B ≡ S: S ⊑d C3 ⊑p S ⊛ B with the flip h(u0, ?, y1) = u0.
            let h: Vec<u8> = (0..len).map(|i| (i / (n0 * n1)) as u8).collect();
            let c3 = apply_permutation(&computed, &h)?;
            let forget = map_kernel(std::iter::repeat_n(0, len), 1);
            (
                witness_superb(&computed),
                RelationWitness::from_parts(
                    vec![deg(forget), RelationStep::Permutation(h)],
                    vec![c3],
                ),
            )
        }
        Op::Plus if col == Operand::Superb => {
            // A ⊛ S ≡ S: the input of A ⊛ S is always 0.
            let forget = map_kernel(std::iter::repeat_n(0, len), 1);
            (
                witness_superb(&computed),
                RelationWitness::single(deg(forget)),
            )
        }
        Op::Plus if row == Operand::Pitiful => {
            // P ⊛ B ≡ B: (P ⊛ B)(u1; u0, ?, y1) = B(u1; y1)/2.
            let halves = Kernel {
                rows: (0..n1)
                    .map(|y1| {
                        vec![
                            (plus_index(0, 0, y1, n0, n1), 0.5),
                            (plus_index(1, 0, y1, n0, n1), 0.5),
                        ]
                    })
                    .collect(),
                out_len: len,
            };
            (
                RelationWitness::single(deg(halves)),
                RelationWitness::single(deg(map_kernel((0..len).map(|i| i % n1), n1))),
            )
        }
        Op::Plus => {
            // A ⊛ P ≡ A: (A ⊛ P)(u1; u0, y0, ?) = A(u0 ^ u1; y0)/2.
            let halves = Kernel {
                rows: (0..n0)
                    .map(|y0| {
                        vec![
                            (plus_index(0, y0, 0, n0, 1), 0.5),
                            (plus_index(1, y0, 0, n0, 1), 0.5),
                        ]
                    })
                    .collect(),
                out_len: len,
            };
            let c1 = halves.apply(&r)?;
            let f: Vec<u8> = (0..len).map(|i| (i / n0) as u8).collect();
            let c2 = apply_permutation(&computed, &f)?;
            let drop_u0 = map_kernel((0..len).map(|i| i % n0), n0);
            (
                RelationWitness::from_parts(
                    vec![RelationStep::Permutation(f.clone()), deg(halves)],
                    vec![c1],
                ),
                RelationWitness::from_parts(
                    vec![deg(drop_u0), RelationStep::Permutation(f)],
                    vec![c2],
                ),
            )
        }
    };

    Ok(TableWitness {
        computed,
        claimed,
        computed_below: down,
        claimed_below: up,
    })
}
