use super::Profile;
use crate::channel::JointDist;
use crate::error::{Error, Result};
use crate::transform::{butterfly, Mode, Pattern};

/// Largest length accepted by [`brute_force_profile`].
pub const BRUTE_FORCE_MAX_M: usize = 8;
const BRUTE_FORCE_MAX_CELLS: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq)]
enum BecNode {
    Bec(f64),
    S,
    P,
}

impl BecNode {
    fn z(self) -> f64 {
        match self {
            BecNode::Bec(e) => e,
            BecNode::S => 0.0,
            BecNode::P => 1.0,
        }
    }
}

fn bec_minus(a: BecNode, b: BecNode) -> BecNode {
    use BecNode::*;
    match (a, b) {
        (P, _) | (_, P) => P,
        (S, x) | (x, S) => x,
        (Bec(e1), Bec(e2)) => Bec(e1 + e2 - e1 * e2),
    }
}

fn bec_plus(a: BecNode, b: BecNode) -> BecNode {
    use BecNode::*;
    match (a, b) {
        (S, _) | (_, S) => S,
        (P, x) | (x, P) => x,
        (Bec(e1), Bec(e2)) => Bec(e1 * e2),
    }
}

/// Exact `Z` profile over a BEC with uniform input, by tracking erasure
/// probabilities alongside the two special distributions.
pub fn bec_closed_form(m: usize, eps: f64, mode: Mode) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::ProbabilityOutOfRange {
            what: "erasure probability",
            value: eps,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let pattern = Pattern::new(m, mode)?;
    let special = match mode {
        Mode::Shortened => BecNode::S,
        Mode::Punctured => BecNode::P,
    };
    let mut v: Vec<BecNode> = (0..pattern.n_total)
        .map(|i| if pattern.contains(i) { special } else { BecNode::Bec(eps) })
        .collect();
    butterfly::<BecNode, Error>(&mut v, |&a, &b| Ok((bec_minus(a, b), bec_plus(a, b))))?;
    let start = pattern.window_start();
    Ok(v[start..start + m].iter().map(|n| n.z()).collect())
}

/// Profile computed from the explicit joint law of `(U_i; U^{i-1}, Y)`
/// over all `2^M` inputs and all `|Y|^M` output words.
pub fn brute_force_profile(m: usize, w: &JointDist, mode: Mode) -> Result<Profile> {
    let ny = w.len();
    if m == 0 || m > BRUTE_FORCE_MAX_M {
        return Err(Error::SizeLimit(format!("M = {m} outside 1..={BRUTE_FORCE_MAX_M}")));
    }
    let words = ny
        .checked_pow(m as u32)
        .filter(|&c| c.saturating_mul(1 << m) <= BRUTE_FORCE_MAX_CELLS)
        .ok_or_else(|| Error::SizeLimit(format!("{ny}^{m} output words")))?;
    let pattern = Pattern::new(m, mode)?;
    let start = pattern.window_start();

    let us: Vec<Vec<u8>> = (0..1usize << m)
        .map(|xi| {
            let x: Vec<u8> = (0..m).map(|j| ((xi >> j) & 1) as u8).collect();
            let u = pattern.extended_transform(&x)?;
            u[start..start + m]
                .iter()
                .map(|s| {
                    s.bit()
                        .ok_or_else(|| Error::UndefinedCell(format!("kept symbol `{s}`")))
                })
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<_>>()?;

    // cols[i][(prefix of u, y word)] = [P(u_i = 0, ...), P(u_i = 1, ...)]
    let mut cols: Vec<Vec<[f64; 2]>> = (0..m).map(|i| vec![[0.0; 2]; words << i]).collect();
    let mut y = vec![0usize; m];
    for xi in 0..1usize << m {
        let u = &us[xi];
        y.iter_mut().for_each(|v| *v = 0);
        for yi in 0..words {
            let mut p = 1.0;
            for j in 0..m {
                p *= w.mass(((xi >> j) & 1) as u8, y[j]);
            }
            if p > 0.0 {
                let mut prefix = 0usize;
                for i in 0..m {
                    cols[i][prefix * words + yi][u[i] as usize] += p;
                    prefix = 2 * prefix + u[i] as usize;
                }
            }
            for v in y.iter_mut() {
                *v += 1;
                if *v < ny {
                    break;
                }
                *v = 0;
            }
        }
    }
    let dists: Vec<JointDist> = cols.into_iter().map(JointDist::from_cols).collect();
    Ok(Profile::from_dists(&dists))
}
