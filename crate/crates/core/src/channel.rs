//! Binary-input memoryless channels, input distributions, and joint
//! distributions over `{0,1} x Y`, together with the three figures of merit
//! used throughout the crate: the Bhattacharyya parameter `Z`, the total
//! variation distance `K`, and the conditional entropy `H(X|Y)`.
//!
//! Output symbols are plain indices `0..len`. Composite alphabets produced by
//! the combining operations are flattened with fixed index arithmetic (see
//! [`crate::dist`]).

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance on row sums and total mass.
pub const MASS_TOL: f64 = 1e-12;

/// Distribution of the channel input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputDist {
    p0: f64,
}

impl InputDist {
    pub fn new(p0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::ProbabilityOutOfRange {
                what: "input probability p0",
                value: p0,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Self { p0 })
    }

    pub fn uniform() -> Self {
        Self { p0: 0.5 }
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        1.0 - self.p0
    }

    pub fn prob(&self, x: u8) -> f64 {
        if x == 0 {
            self.p0
        } else {
            self.p1()
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.p0 == 0.5
    }

    /// `H(X)` in bits.
    pub fn entropy(&self) -> f64 {
        binary_entropy(self.p0)
    }
}

/// A binary-input channel `W(y|x)` with a finite output alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct BmChannel {
    rows: [Vec<f64>; 2],
}

impl BmChannel {
    pub fn new(row0: Vec<f64>, row1: Vec<f64>) -> Result<Self> {
        if row0.len() != row1.len() {
            return Err(Error::DimensionMismatch(format!(
                "channel rows have lengths {} and {}",
                row0.len(),
                row1.len()
            )));
        }
        if row0.is_empty() {
            return Err(Error::InvalidDistribution("empty output alphabet".into()));
        }
        for (x, row) in [&row0, &row1].into_iter().enumerate() {
            if let Some(bad) = row.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
                return Err(Error::InvalidDistribution(format!(
                    "W(.|{x}) has invalid entry {bad}"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > MASS_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "W(.|{x}) sums to {sum}"
                )));
            }
        }
        Ok(Self { rows: [row0, row1] })
    }

    pub fn output_len(&self) -> usize {
        self.rows[0].len()
    }

    /// `W(y|x)`.
    pub fn prob(&self, y: usize, x: u8) -> f64 {
        self.rows[x as usize][y]
    }

    pub fn row(&self, x: u8) -> &[f64] {
        &self.rows[x as usize]
    }

    /// True when some output relabeling maps `W(.|0)` onto `W(.|1)` and back,
    /// i.e. the multiset of pairs `(W(y|0), W(y|1))` is closed under swapping.
    pub fn is_symmetric(&self) -> bool {
        let key = |a: f64, b: f64| (a, b);
        let mut pairs: Vec<(f64, f64)> = (0..self.output_len())
            .map(|y| key(self.rows[0][y], self.rows[1][y]))
            .collect();
        let mut swapped: Vec<(f64, f64)> = pairs.iter().map(|&(a, b)| (b, a)).collect();
        let cmp = |p: &(f64, f64), q: &(f64, f64)| p.partial_cmp(q).unwrap();
        pairs.sort_by(cmp);
        swapped.sort_by(cmp);
        pairs
            .iter()
            .zip(&swapped)
            .all(|(p, q)| (p.0 - q.0).abs() <= MASS_TOL && (p.1 - q.1).abs() <= MASS_TOL)
    }

    /// `ln W(y|0) - ln W(y|1)`, infinite when exactly one likelihood vanishes
    /// and zero for outputs that cannot occur at all.
    pub fn llr(&self, y: usize) -> f64 {
        let (a, b) = (self.rows[0][y], self.rows[1][y]);
        match (a > 0.0, b > 0.0) {
            (true, true) => a.ln() - b.ln(),
            (true, false) => f64::INFINITY,
            (false, true) => f64::NEG_INFINITY,
            (false, false) => 0.0,
        }
    }

    /// Draws an output for input `x`.
    pub fn sample<R: Rng + ?Sized>(&self, x: u8, rng: &mut R) -> usize {
        let row = &self.rows[x as usize];
        let mut r: f64 = rng.gen::<f64>();
        for (y, &w) in row.iter().enumerate() {
            if r < w {
                return y;
            }
            r -= w;
        }
        // Rounding residue: fall back to the last output with positive mass.
        row.iter().rposition(|&w| w > 0.0).unwrap_or(0)
    }
}

/// Binary symmetric channel with crossover probability `p`; outputs `{0, 1}`.
pub fn make_bsc(p: f64) -> Result<BmChannel> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::ProbabilityOutOfRange {
            what: "BSC crossover",
            value: p,
            lo: 0.0,
            hi: 0.5,
        });
    }
    BmChannel::new(vec![1.0 - p, p], vec![p, 1.0 - p])
}

/// Binary erasure channel; outputs `{0, 1, ?}` with `?` at index 2.
pub fn make_bec(eps: f64) -> Result<BmChannel> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::ProbabilityOutOfRange {
            what: "BEC erasure probability",
            value: eps,
            lo: 0.0,
            hi: 1.0,
        });
    }
    BmChannel::new(vec![1.0 - eps, 0.0, eps], vec![0.0, 1.0 - eps, eps])
}

/// Channel whose single output `?` carries no information about the input.
pub fn make_uninformative() -> BmChannel {
    BmChannel {
        rows: [vec![1.0], vec![1.0]],
    }
}

/// Index of the erasure symbol in [`make_bec`] outputs.
pub const ERASURE: usize = 2;

/// Joint distribution `P(x; y)` over `{0,1} x {0..len}`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    cols: Vec<[f64; 2]>,
}

impl JointDist {
    /// Builds a joint distribution from columns `[P(0;y), P(1;y)]`.
    pub fn new(cols: Vec<[f64; 2]>) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::InvalidDistribution("empty output alphabet".into()));
        }
        if let Some(bad) = cols
            .iter()
            .flatten()
            .find(|p| !(p.is_finite() && **p >= 0.0))
        {
            return Err(Error::InvalidDistribution(format!("invalid mass {bad}")));
        }
        let total: f64 = cols.iter().map(|c| c[0] + c[1]).sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!(
                "total mass {total} is not 1"
            )));
        }
        Ok(Self { cols })
    }

    /// Skips validation; used by the combining operations, whose outputs
    /// carry mass exactly as their operands do.
    pub(crate) fn from_cols(cols: Vec<[f64; 2]>) -> Self {
        debug_assert!(!cols.is_empty());
        Self { cols }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn cols(&self) -> &[[f64; 2]] {
        &self.cols
    }

    /// `P(x; y)`.
    pub fn mass(&self, x: u8, y: usize) -> f64 {
        self.cols[y][x as usize]
    }

    pub fn total_mass(&self) -> f64 {
        self.cols.iter().map(|c| c[0] + c[1]).sum()
    }

    /// Marginal `P(y)`.
    pub fn output_mass(&self, y: usize) -> f64 {
        self.cols[y][0] + self.cols[y][1]
    }

    /// Marginal `P(x)`.
    pub fn input_mass(&self, x: u8) -> f64 {
        self.cols.iter().map(|c| c[x as usize]).sum()
    }

    pub fn z(&self) -> f64 {
        bhattacharyya(self)
    }

    pub fn k(&self) -> f64 {
        total_variation(self)
    }

    pub fn h(&self) -> f64 {
        cond_entropy(self)
    }

    /// Largest entrywise difference to `other`; infinite on alphabet mismatch.
    pub fn max_abs_diff(&self, other: &JointDist) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| (a[0] - b[0]).abs().max((a[1] - b[1]).abs()))
            .fold(0.0, f64::max)
    }
}

/// `P(x; y) = p(x) W(y|x)`.
pub fn joint_from(input: InputDist, w: &BmChannel) -> JointDist {
    let cols = (0..w.output_len())
        .map(|y| [input.p0() * w.prob(y, 0), input.p1() * w.prob(y, 1)])
        .collect();
    JointDist::from_cols(cols)
}

/// `Z = 2 sum_y sqrt(P(0;y) P(1;y))`.
pub fn bhattacharyya(a: &JointDist) -> f64 {
    let z: f64 = a.cols.iter().map(|c| (c[0] * c[1]).sqrt()).sum();
    (2.0 * z).min(1.0)
}

/// `K = sum_y |P(0;y) - P(1;y)|`.
pub fn total_variation(a: &JointDist) -> f64 {
    let k: f64 = a.cols.iter().map(|c| (c[0] - c[1]).abs()).sum();
    k.min(1.0)
}

/// `H(X|Y)` in bits.
pub fn cond_entropy(a: &JointDist) -> f64 {
    a.cols.iter().map(|c| column_entropy(c[0], c[1])).sum()
}

/// Contribution `P(y) h(P(0|y))` of a single output column, in bits.
pub(crate) fn column_entropy(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    if a > 0.0 {
        h -= a * (a / s).log2();
    }
    if b > 0.0 {
        h -= b * (b / s).log2();
    }
    h
}

/// Binary entropy function in bits.
pub fn binary_entropy(p: f64) -> f64 {
    column_entropy(p, 1.0 - p)
}

/// Textual channel descriptor: `bsc:<p>`, `bec:<eps>`, `none`, or
/// `table:<w(.|0) comma-separated>/<w(.|1) comma-separated>`.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Bsc(f64),
    Bec(f64),
    Uninformative,
    Table(BmChannel),
}

impl ChannelSpec {
    pub fn channel(&self) -> Result<BmChannel> {
        match self {
            ChannelSpec::Bsc(p) => make_bsc(*p),
            ChannelSpec::Bec(e) => make_bec(*e),
            ChannelSpec::Uninformative => Ok(make_uninformative()),
            ChannelSpec::Table(w) => Ok(w.clone()),
        }
    }

    /// Maps the textual output symbols `0`, `1`, `?` (or a decimal index for
    /// table channels) to output indices.
    pub fn parse_outputs(&self, s: &str) -> Result<Vec<usize>> {
        let bad = |t: &str| Error::Parse(format!("unexpected output symbol {t:?} for {self}"));
        match self {
            ChannelSpec::Table(w) => s
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<usize>() {
                    Ok(y) if y < w.output_len() => Ok(y),
                    _ => Err(bad(t)),
                })
                .collect(),
            _ => s
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match (self, c) {
                    (ChannelSpec::Bsc(_) | ChannelSpec::Bec(_), '0') => Ok(0),
                    (ChannelSpec::Bsc(_) | ChannelSpec::Bec(_), '1') => Ok(1),
                    (ChannelSpec::Bec(_), '?') => Ok(ERASURE),
                    (ChannelSpec::Uninformative, '?') => Ok(0),
                    _ => Err(bad(&c.to_string())),
                })
                .collect(),
        }
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::Bsc(p) => write!(f, "bsc:{p}"),
            ChannelSpec::Bec(e) => write!(f, "bec:{e}"),
            ChannelSpec::Uninformative => write!(f, "none"),
            ChannelSpec::Table(w) => {
                let row = |x: u8| {
                    w.row(x)
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                write!(f, "table:{}/{}", row(0), row(1))
            }
        }
    }
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {t:?} in channel {s:?}")))
        };
        let spec = match s.split_once(':') {
            Some(("bsc", p)) => ChannelSpec::Bsc(num(p)?),
            Some(("bec", e)) => ChannelSpec::Bec(num(e)?),
            Some(("table", rows)) => {
                let (r0, r1) = rows
                    .split_once('/')
                    .ok_or_else(|| Error::Parse(format!("table channel needs two rows: {s:?}")))?;
                let parse_row =
                    |r: &str| r.split(',').map(num).collect::<Result<Vec<f64>>>();
                ChannelSpec::Table(BmChannel::new(parse_row(r0)?, parse_row(r1)?)?)
            }
            None if s == "none" || s == "?" => ChannelSpec::Uninformative,
            _ => return Err(Error::Parse(format!("unknown channel {s:?}"))),
        };
        spec.channel()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn bsc_rows() {
        let w = make_bsc(0.11).unwrap();
        assert_eq!(w.row(0), &[0.89, 0.11]);
        assert_eq!(w.row(1), &[0.11, 0.89]);
        let id = make_bsc(0.0).unwrap();
        assert_eq!(id.prob(0, 0), 1.0);
        assert!(make_bsc(0.6).is_err());
        assert!(make_bsc(-0.1).is_err());
    }

    #[test]
    fn bsc_half_is_useless() {
        let a = joint_from(InputDist::uniform(), &make_bsc(0.5).unwrap());
        assert!(close(a.z(), 1.0, 1e-15));
    }

    #[test]
    fn bec_extremes() {
        let w = make_bec(0.0).unwrap();
        assert_eq!(w.prob(ERASURE, 0), 0.0);
        assert_eq!(w.prob(0, 0), 1.0);
        let w = make_bec(1.0).unwrap();
        assert_eq!(w.prob(ERASURE, 0), 1.0);
        assert_eq!(w.prob(ERASURE, 1), 1.0);
        assert!(make_bec(1.5).is_err());
    }

    #[test]
    fn bec_z_equals_eps() {
        for eps in [0.1, 0.5, 0.9] {
            let a = joint_from(InputDist::uniform(), &make_bec(eps).unwrap());
            assert!(close(a.z(), eps, 1e-15), "eps={eps}");
        }
    }

    #[test]
    fn joint_masses() {
        let a = joint_from(InputDist::uniform(), &make_bsc(0.11).unwrap());
        assert!(close(a.mass(0, 0), 0.445, 1e-15));
        let b = joint_from(InputDist::uniform(), &make_bec(0.5).unwrap());
        assert!(close(b.mass(0, ERASURE), 0.25, 1e-15));
        let c = joint_from(InputDist::new(1.0).unwrap(), &make_bsc(0.2).unwrap());
        assert!(c.cols().iter().all(|col| col[1] == 0.0));
        assert!(close(c.total_mass(), 1.0, 1e-12));
    }

    #[test]
    fn figures_of_merit_for_bsc() {
        let a = joint_from(InputDist::uniform(), &make_bsc(0.11).unwrap());
        assert!(close(a.k(), 0.78, 1e-12));
        assert!(close(a.h(), binary_entropy(0.11), 1e-15));
        assert!(close(a.h(), 0.499_915_958_164_528, 1e-12));
    }

    #[test]
    fn anchors_for_special_forms() {
        let s = JointDist::new(vec![[1.0, 0.0]]).unwrap();
        assert_eq!((s.z(), s.k(), s.h()), (0.0, 1.0, 0.0));
        let p = JointDist::new(vec![[0.5, 0.5]]).unwrap();
        assert_eq!((p.z(), p.k(), p.h()), (1.0, 0.0, 1.0));
    }

    #[test]
    fn rejects_bad_joint() {
        assert!(JointDist::new(vec![[0.5, 0.4]]).is_err());
        assert!(JointDist::new(vec![[1.1, -0.1]]).is_err());
        assert!(JointDist::new(vec![]).is_err());
    }

    #[test]
    fn symmetry_detection() {
        assert!(make_bsc(0.2).unwrap().is_symmetric());
        assert!(make_bec(0.3).unwrap().is_symmetric());
        let z = BmChannel::new(vec![1.0, 0.0], vec![0.3, 0.7]).unwrap();
        assert!(!z.is_symmetric());
    }

    #[test]
    fn llr_signs() {
        let w = make_bec(0.5).unwrap();
        assert_eq!(w.llr(0), f64::INFINITY);
        assert_eq!(w.llr(1), f64::NEG_INFINITY);
        assert_eq!(w.llr(ERASURE), 0.0);
        let b = make_bsc(0.1).unwrap();
        assert!(close(b.llr(0), (9.0f64).ln(), 1e-12));
    }

    #[test]
    fn channel_spec_roundtrip() {
        for s in ["bsc:0.11", "bec:0.5", "none", "table:0.5,0.5/0.25,0.75"] {
            let spec: ChannelSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("bsc:0.7".parse::<ChannelSpec>().is_err());
        assert!("awgn:1".parse::<ChannelSpec>().is_err());
        let bec: ChannelSpec = "bec:0.5".parse().unwrap();
        assert_eq!(bec.parse_outputs("01?").unwrap(), vec![0, 1, ERASURE]);
        assert!(bec.parse_outputs("2").is_err());
    }
}
