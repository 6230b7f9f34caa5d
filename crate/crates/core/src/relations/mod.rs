//! Degradation and input-permutation relations between joint distributions,
//! chains of such steps, and the constructive witnesses that certify the
//! inferior relation in the cases the codes rely on.
//!
//! A chain `A = C0 ⊑ C1 ⊑ ... ⊑ Ct = B` is stored as `t` steps plus the
//! `t - 1` interior distributions. Step `k` maps `C(k+1)` onto `Ck`: a
//! degradation kernel `Q(y_k | y_{k+1})`, or a permutation `f` with
//! `Ck(x; y) = C(k+1)(x ^ f(y); y)`.

mod lp;
mod witness;

pub use witness::{
    preserve_operands, witness_pitiful, witness_preserve, witness_superb, witness_table_entry,
    Operand, TableWitness,
};

use crate::channel::JointDist;
use crate::error::{Error, Result};

/// Entrywise tolerance for verifying a single link.
pub const LINK_TOL: f64 = 1e-10;

/// Tolerance of the feasibility search in [`check_degraded`].
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// A conditional distribution `Q(y_out | y_in)`, stored sparsely by input.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    rows: Vec<Vec<(usize, f64)>>,
    out_len: usize,
}

impl Kernel {
    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|y| vec![(y, 1.0)]).collect(),
            out_len: n,
        }
    }

    /// The kernel of a function `y_in -> map[y_in]`.
    pub fn deterministic(map: Vec<usize>, out_len: usize) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&y| y >= out_len) {
            return Err(Error::DimensionMismatch(format!(
                "map target {bad} outside output alphabet of size {out_len}"
            )));
        }
        Ok(Self {
            rows: map.into_iter().map(|y| vec![(y, 1.0)]).collect(),
            out_len,
        })
    }

    /// Builds a kernel from sparse rows `(y_out, probability)`; rows must be
    /// distributions.
    pub fn from_sparse(rows: Vec<Vec<(usize, f64)>>, out_len: usize) -> Result<Self> {
        let k = Self { rows, out_len };
        k.check_shape()?;
        if !k.is_stochastic(LINK_TOL) {
            return Err(Error::InvalidDistribution(
                "kernel rows must be probability distributions".into(),
            ));
        }
        Ok(k)
    }

    /// Builds a kernel from dense rows indexed by input symbol.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let out_len = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != out_len) {
            return Err(Error::DimensionMismatch("ragged kernel rows".into()));
        }
        let sparse = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &q)| q != 0.0)
                    .map(|(y, &q)| (y, q))
                    .collect()
            })
            .collect();
        Self::from_sparse(sparse, out_len)
    }

    fn check_shape(&self) -> Result<()> {
        for row in &self.rows {
            if let Some(&(y, _)) = row.iter().find(|(y, _)| *y >= self.out_len) {
                return Err(Error::DimensionMismatch(format!(
                    "kernel target {y} outside output alphabet of size {}",
                    self.out_len
                )));
            }
        }
        Ok(())
    }

    pub fn in_len(&self) -> usize {
        self.rows.len()
    }

    pub fn out_len(&self) -> usize {
        self.out_len
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    /// `Q(y_out | y_in)`.
    pub fn prob(&self, y_out: usize, y_in: usize) -> f64 {
        self.rows[y_in]
            .iter()
            .filter(|(y, _)| *y == y_out)
            .map(|(_, q)| q)
            .sum()
    }

    /// Overwrites a single entry without renormalizing.
    pub fn set(&mut self, y_out: usize, y_in: usize, value: f64) {
        let row = &mut self.rows[y_in];
        row.retain(|(y, _)| *y != y_out);
        row.push((y_out, value));
    }

    pub fn is_stochastic(&self, tol: f64) -> bool {
        self.rows.iter().all(|row| {
            row.iter().all(|&(_, q)| q >= 0.0 && q.is_finite())
                && (row.iter().map(|(_, q)| q).sum::<f64>() - 1.0).abs() <= tol
        })
    }

    /// `A(x; y_out) = sum_{y_in} B(x; y_in) Q(y_out | y_in)`.
    pub fn apply(&self, b: &JointDist) -> Result<JointDist> {
        if b.len() != self.in_len() {
            return Err(Error::DimensionMismatch(format!(
                "kernel expects {} inputs, distribution has {}",
                self.in_len(),
                b.len()
            )));
        }
        let mut cols = vec![[0.0f64; 2]; self.out_len.max(1)];
        for (c, row) in b.cols().iter().zip(&self.rows) {
            for &(y, q) in row {
                cols[y][0] += c[0] * q;
                cols[y][1] += c[1] * q;
            }
        }
        Ok(JointDist::from_cols(cols))
    }
}

/// One link of a chain.
#[derive(Debug, Clone, PartialEq)]
pub enum RelationStep {
    Degradation(Kernel),
    Permutation(Vec<u8>),
}

impl RelationStep {
    pub fn kind(&self) -> &'static str {
        match self {
            RelationStep::Degradation(_) => "degradation",
            RelationStep::Permutation(_) => "permutation",
        }
    }

    /// Maps the upper distribution of the link onto the lower one.
    pub fn apply(&self, upper: &JointDist) -> Result<JointDist> {
        match self {
            RelationStep::Degradation(q) => q.apply(upper),
            RelationStep::Permutation(f) => apply_permutation(upper, f),
        }
    }
}

/// A chain of steps certifying `lower ⊑ upper`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RelationWitness {
    pub steps: Vec<RelationStep>,
    pub intermediates: Vec<JointDist>,
}

impl RelationWitness {
    /// The empty chain, valid only between equal distributions.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(step: RelationStep) -> Self {
        Self {
            steps: vec![step],
            intermediates: Vec::new(),
        }
    }

    pub fn from_parts(steps: Vec<RelationStep>, intermediates: Vec<JointDist>) -> Self {
        Self {
            steps,
            intermediates,
        }
    }

    /// Concatenates `self: A ⊑ mid` with `above: mid ⊑ B` into `A ⊑ B`.
    pub fn compose(mut self, mid: JointDist, above: RelationWitness) -> Self {
        if self.steps.is_empty() {
            return above;
        }
        if above.steps.is_empty() {
            return self;
        }
        self.intermediates.push(mid);
        self.intermediates.extend(above.intermediates);
        self.steps.extend(above.steps);
        self
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Largest entrywise residual of each link, bottom to top. A link whose
    /// step cannot be applied (wrong alphabet size, non-stochastic kernel)
    /// reports an infinite residual.
    pub fn link_residuals(&self, lower: &JointDist, upper: &JointDist) -> Result<Vec<f64>> {
        if self.steps.is_empty() {
            if !self.intermediates.is_empty() {
                return Err(Error::MalformedWitness(
                    "empty chain with interior distributions".into(),
                ));
            }
            return Ok(vec![lower.max_abs_diff(upper)]);
        }
        if self.intermediates.len() + 1 != self.steps.len() {
            return Err(Error::MalformedWitness(format!(
                "{} steps need {} interior distributions, got {}",
                self.steps.len(),
                self.steps.len() - 1,
                self.intermediates.len()
            )));
        }
        let chain: Vec<&JointDist> = std::iter::once(lower)
            .chain(self.intermediates.iter())
            .chain(std::iter::once(upper))
            .collect();
        Ok(self
            .steps
            .iter()
            .enumerate()
            .map(|(k, step)| link_residual(step, chain[k], chain[k + 1]))
            .collect())
    }
}

fn link_residual(step: &RelationStep, lower: &JointDist, upper: &JointDist) -> f64 {
    if let RelationStep::Degradation(q) = step {
        if !q.is_stochastic(LINK_TOL) {
            return f64::INFINITY;
        }
    }
    match step.apply(upper) {
        Ok(image) => image.max_abs_diff(lower),
        Err(_) => f64::INFINITY,
    }
}

/// `A'(x; y) = A(x ^ f(y); y)`.
pub fn apply_permutation(a: &JointDist, f: &[u8]) -> Result<JointDist> {
    if f.len() != a.len() {
        return Err(Error::DimensionMismatch(format!(
            "permutation defined on {} symbols, distribution has {}",
            f.len(),
            a.len()
        )));
    }
    if let Some(bad) = f.iter().find(|&&v| v > 1) {
        return Err(Error::InvalidParameter(format!(
            "permutation value {bad} is not a bit"
        )));
    }
    let cols = a
        .cols()
        .iter()
        .zip(f)
        .map(|(c, &s)| if s == 0 { *c } else { [c[1], c[0]] })
        .collect();
    Ok(JointDist::from_cols(cols))
}

/// Checks `A(x; y0) = sum_{y1} B(x; y1) Q(y0 | y1)` entrywise to
/// [`LINK_TOL`]. Non-stochastic kernels are rejected.
pub fn verify_degradation(a: &JointDist, b: &JointDist, q: &Kernel) -> Result<bool> {
    if q.in_len() != b.len() || q.out_len() != a.len() {
        return Err(Error::DimensionMismatch(format!(
            "kernel is {}x{}, distributions have {} and {} outputs",
            q.in_len(),
            q.out_len(),
            b.len(),
            a.len()
        )));
    }
    if !q.is_stochastic(LINK_TOL) {
        return Ok(false);
    }
    Ok(q.apply(b)?.max_abs_diff(a) <= LINK_TOL)
}

/// Verifies every link of `w` as a chain from `a` (bottom) to `b` (top).
pub fn verify_chain(a: &JointDist, b: &JointDist, w: &RelationWitness) -> Result<bool> {
    Ok(w.link_residuals(a, b)?.iter().all(|&r| r <= LINK_TOL))
}

/// Searches for a kernel showing that `a` is degraded from `b`. Returns a
/// kernel accepted by [`verify_degradation`], or `None` when the linear
/// feasibility problem has no solution.
pub fn check_degraded(a: &JointDist, b: &JointDist) -> Option<Kernel> {
    let (n0, n1) = (a.len(), b.len());
    let var = |y1: usize, y0: usize| y1 * n0 + y0;
    let nvars = n0 * n1;
    let mut rows = Vec::with_capacity(n1 + 2 * n0);
    let mut rhs = Vec::with_capacity(n1 + 2 * n0);
    for y1 in 0..n1 {
        let mut r = vec![0.0; nvars];
        for y0 in 0..n0 {
            r[var(y1, y0)] = 1.0;
        }
        rows.push(r);
        rhs.push(1.0);
    }
    for x in 0..2u8 {
        for y0 in 0..n0 {
            let mut r = vec![0.0; nvars];
            for y1 in 0..n1 {
                r[var(y1, y0)] = b.mass(x, y1);
            }
            rows.push(r);
            rhs.push(a.mass(x, y0));
        }
    }
    let sol = lp::find_feasible(&rows, &rhs, FEASIBILITY_TOL)?;
    let dense: Vec<Vec<f64>> = (0..n1)
        .map(|y1| {
            let row: Vec<f64> = (0..n0).map(|y0| sol[var(y1, y0)].max(0.0)).collect();
            let s: f64 = row.iter().sum();
            if s > 0.0 {
                row.into_iter().map(|q| q / s).collect()
            } else {
                let mut r = vec![0.0; n0];
                r[0] = 1.0;
                r
            }
        })
        .collect();
    let q = Kernel::from_dense(&dense).ok()?;
    verify_degradation(a, b, &q).ok()?.then_some(q)
}
