//! Bit reversal, the four-symbol extended polar transform, and the
//! shortening and puncturing patterns built on it.
//!
//! The transform splits `x` (length `2^n`) into the pair streams
//! `v0[k] = x[2k] ⊕ x[2k+1]` and `v1[k] = x[2k] ▷ x[2k+1]` and returns
//! `T(v0)` followed by `T(v1)`, so leaf `i` is reached by the branch bits of
//! `i` read from the most significant end.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Reverses the low `n` bits of `i`.
pub fn bit_reverse(i: usize, n: u32) -> Result<usize> {
    if n > usize::BITS || (n < usize::BITS && i >> n != 0) {
        return Err(Error::IndexOutOfRange { index: i, bits: n });
    }
    Ok(if n == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - n) })
}

/// Smallest `n` with `2^n >= m` (and 0 for `m <= 1`).
pub fn log2_ceil(m: usize) -> u32 {
    if m <= 1 {
        0
    } else {
        usize::BITS - (m - 1).leading_zeros()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtBit {
    Zero,
    One,
    /// Shortened: known to be 0.
    S,
    /// Punctured: never observed.
    P,
}

impl ExtBit {
    pub fn from_bit(b: u8) -> Self {
        if b & 1 == 0 {
            ExtBit::Zero
        } else {
            ExtBit::One
        }
    }

    pub fn bit(self) -> Option<u8> {
        match self {
            ExtBit::Zero => Some(0),
            ExtBit::One => Some(1),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ExtBit::Zero => '0',
            ExtBit::One => '1',
            ExtBit::S => 's',
            ExtBit::P => 'p',
        }
    }
}

impl fmt::Display for ExtBit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

fn undefined(op: &str, a: ExtBit, b: ExtBit) -> Error {
    Error::UndefinedCell(format!("{a} {op} {b}"))
}

/// `a ⊕ b` on extended symbols.
pub fn ext_xor(a: ExtBit, b: ExtBit) -> Result<ExtBit> {
    use ExtBit::*;
    match (a, b) {
        (P, _) => Ok(P),
        (Zero | One, Zero | One) => Ok(ExtBit::from_bit(a.bit().unwrap() ^ b.bit().unwrap())),
        (Zero | One, S) => Ok(a),
        (S, S) => Ok(S),
        _ => Err(undefined("xor", a, b)),
    }
}

/// `a ▷ b` on extended symbols.
pub fn ext_select(a: ExtBit, b: ExtBit) -> Result<ExtBit> {
    use ExtBit::*;
    match (a, b) {
        (Zero | One | P, Zero | One | S) => Ok(b),
        (S, S) | (P, P) => Ok(b),
        _ => Err(undefined("select", a, b)),
    }
}

/// Generic butterfly shared by the symbol transform and distribution
/// evolution: each block is replaced by `[minus pairs | plus pairs]`, then
/// both halves are processed recursively.
pub(crate) fn butterfly<T: Clone, E>(
    x: &mut [T],
    mut combine: impl FnMut(&T, &T) -> std::result::Result<(T, T), E>,
) -> std::result::Result<(), E> {
    let total = x.len();
    let mut block = total;
    let mut scratch: Vec<T> = Vec::with_capacity(total);
    while block >= 2 {
        let half = block / 2;
        for start in (0..total).step_by(block) {
            scratch.clear();
            let chunk = &x[start..start + block];
            let mut plus = Vec::with_capacity(half);
            for k in 0..half {
                let (m, p) = combine(&chunk[2 * k], &chunk[2 * k + 1])?;
                scratch.push(m);
                plus.push(p);
            }
            scratch.extend(plus);
            x[start..start + block].clone_from_slice(&scratch);
        }
        block = half;
    }
    Ok(())
}

/// Extended polar transform; `x.len()` must be a power of two.
pub fn polar_transform_ext(x: &[ExtBit]) -> Result<Vec<ExtBit>> {
    if !x.len().is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "transform length {} is not a power of two",
            x.len()
        )));
    }
    let mut u = x.to_vec();
    butterfly(&mut u, |&a, &b| Ok((ext_xor(a, b)?, ext_select(a, b)?)))?;
    Ok(u)
}

/// Plain transform over bits.
pub fn polar_transform(x: &[u8]) -> Result<Vec<u8>> {
    if !x.len().is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "transform length {} is not a power of two",
            x.len()
        )));
    }
    let mut u = x.to_vec();
    butterfly::<u8, Error>(&mut u, |&a, &b| Ok((a ^ b, b)))?;
    Ok(u)
}

/// Inverse of [`polar_transform`].
pub fn inverse_transform(u: &[u8]) -> Result<Vec<u8>> {
    let total = u.len();
    if !total.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "transform length {total} is not a power of two"
        )));
    }
    let mut x = u.to_vec();
    let mut scratch = vec![0u8; total];
    let mut block = 2;
    while block <= total {
        let half = block / 2;
        for start in (0..total).step_by(block) {
            for k in 0..half {
                let v0 = x[start + k];
                let v1 = x[start + half + k];
                scratch[start + 2 * k] = v0 ^ v1;
                scratch[start + 2 * k + 1] = v1;
            }
        }
        x[..].copy_from_slice(&scratch);
        block *= 2;
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Shortened,
    Punctured,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Shortened => "shortened",
            Mode::Punctured => "punctured",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "shortened" | "shorten" | "s" => Ok(Mode::Shortened),
            "punctured" | "puncture" | "p" => Ok(Mode::Punctured),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// Positions removed from the length-`N` mother code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub m: usize,
    pub n_total: usize,
    pub n_bits: u32,
    pub mode: Mode,
    /// Sorted.
    pub indices: Vec<usize>,
}

impl Pattern {
    pub fn new(m: usize, mode: Mode) -> Result<Self> {
        match mode {
            Mode::Shortened => shorten_pattern(m),
            Mode::Punctured => puncture_pattern(m),
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Symbol placed at pattern positions.
    pub fn marker(&self) -> ExtBit {
        match self.mode {
            Mode::Shortened => ExtBit::S,
            Mode::Punctured => ExtBit::P,
        }
    }

    /// Offset of the kept window of `ũ`: the prefix for shortening and
    /// the suffix for puncturing.
    pub fn window_start(&self) -> usize {
        match self.mode {
            Mode::Shortened => 0,
            Mode::Punctured => self.n_total - self.m,
        }
    }

    /// Positions of `x̃` that are transmitted, in increasing order.
    pub fn kept(&self) -> Vec<usize> {
        (0..self.n_total).filter(|&i| !self.contains(i)).collect()
    }

    /// Inserts the pattern marker into `x` (length `M`) to form `x̃`.
    pub fn extend(&self, x: &[u8]) -> Result<Vec<ExtBit>> {
        if x.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                actual: x.len(),
            });
        }
        let mut it = x.iter();
        Ok((0..self.n_total)
            .map(|i| {
                if self.contains(i) {
                    self.marker()
                } else {
                    ExtBit::from_bit(*it.next().expect("kept count equals M"))
                }
            })
            .collect())
    }

    /// Full extended transform `ũ` of `x`.
    pub fn extended_transform(&self, x: &[u8]) -> Result<Vec<ExtBit>> {
        polar_transform_ext(&self.extend(x)?)
    }
}

fn pattern(m: usize, mode: Mode, range: std::ops::Range<usize>) -> Result<Pattern> {
    if m == 0 {
        return Err(Error::InvalidParameter("code length must be at least 1".into()));
    }
    let n_bits = log2_ceil(m);
    let mut indices = range
        .map(|j| bit_reverse(j, n_bits))
        .collect::<Result<Vec<_>>>()?;
    indices.sort_unstable();
    Ok(Pattern {
        m,
        n_total: 1 << n_bits,
        n_bits,
        mode,
        indices,
    })
}

/// `{rev(j) : M <= j < N}`.
pub fn shorten_pattern(m: usize) -> Result<Pattern> {
    let n = 1usize << log2_ceil(m.max(1));
    pattern(m, Mode::Shortened, m..n)
}

/// `{rev(j) : 0 <= j < N - M}`.
pub fn puncture_pattern(m: usize) -> Result<Pattern> {
    let n = 1usize << log2_ceil(m.max(1));
    pattern(m, Mode::Punctured, 0..n.saturating_sub(m))
}

fn window_bits(u: &[ExtBit], start: usize, m: usize) -> Result<Vec<u8>> {
    u[start..start + m]
        .iter()
        .map(|s| {
            s.bit()
                .ok_or_else(|| Error::UndefinedCell(format!("kept symbol is `{s}`")))
        })
        .collect()
}

/// Shortened-code transform of `x`: the first `M` entries of `ũ`.
pub fn shorten_transform(x: &[u8]) -> Result<Vec<u8>> {
    let p = shorten_pattern(x.len())?;
    let u = p.extended_transform(x)?;
    window_bits(&u, 0, p.m)
}

/// Punctured-code transform of `x`: the last `M` entries of `ũ`.
pub fn puncture_transform(x: &[u8]) -> Result<Vec<u8>> {
    let p = puncture_pattern(x.len())?;
    let u = p.extended_transform(x)?;
    window_bits(&u, p.window_start(), p.m)
}
