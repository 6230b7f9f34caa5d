//! Successive-cancellation encoding and decoding of shortened and punctured
//! codes over symmetric channels with uniform input.
//!
//! The decoder runs on the extended length-`N` tree. Shortened positions of
//! `x̃` enter with LLR `+inf`, punctured ones with LLR `0`, and the positions
//! of `ũ` outside the kept window are decided as the fixed value 0. Work is
//! `O(N log N)`; since `N < 2M` this is `O(M log M)` with a constant below 2.

use std::fmt;

use crate::channel::BmChannel;
use crate::construction::CodeSpec;
use crate::error::{Error, Result};
use crate::transform::{inverse_transform, Mode};

/// Log-likelihood ratio `ln P(0)/P(1)`. Infinite values are certainties and
/// are handled symbolically by [`Llr::f`] and [`Llr::g`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Llr(pub f64);

impl Llr {
    pub const ZERO: Llr = Llr(0.0);
    pub const POS_INF: Llr = Llr(f64::INFINITY);
    pub const NEG_INF: Llr = Llr(f64::NEG_INFINITY);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Hard decision; a zero LLR decides 0.
    pub fn decide(self) -> u8 {
        u8::from(self.0 < 0.0)
    }

    /// Check-node update `2 atanh(tanh(a/2) tanh(b/2))`, or its min-sum
    /// approximation.
    pub fn f(a: Llr, b: Llr, min_sum: bool) -> Llr {
        let (x, y) = (a.0, b.0);
        let sign = if (x < 0.0) != (y < 0.0) { -1.0 } else { 1.0 };
        if x.is_infinite() && y.is_infinite() {
            return Llr(sign * f64::INFINITY);
        }
        if x.is_infinite() {
            return Llr(x.signum() * y);
        }
        if y.is_infinite() {
            return Llr(y.signum() * x);
        }
        let m = sign * x.abs().min(y.abs());
        if min_sum {
            return Llr(m);
        }
        Llr(m + (-(x + y).abs()).exp().ln_1p() - (-(x - y).abs()).exp().ln_1p())
    }

    /// Variable-node update `b + (1 - 2u) a`. Opposite certainties cancel
    /// to 0 instead of producing NaN.
    pub fn g(a: Llr, b: Llr, u: u8) -> Llr {
        let a = if u & 1 == 1 { -a.0 } else { a.0 };
        if a.is_infinite() && b.0.is_infinite() && a.signum() != b.0.signum() {
            return Llr::ZERO;
        }
        Llr(a + b.0)
    }
}

impl fmt::Display for Llr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    pub min_sum: bool,
}

/// Decoder output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    /// All `M` kept positions of `u`.
    pub u_hat: Vec<u8>,
    /// `u_hat` at the information positions.
    pub data: Vec<u8>,
}

fn check_lengths(code: &CodeSpec, data: &[u8], frozen_values: &[u8]) -> Result<()> {
    if data.len() != code.info_len() {
        return Err(Error::LengthMismatch {
            expected: code.info_len(),
            actual: data.len(),
        });
    }
    if frozen_values.len() != code.frozen.len() {
        return Err(Error::LengthMismatch {
            expected: code.frozen.len(),
            actual: frozen_values.len(),
        });
    }
    Ok(())
}

/// Places `data` at the information positions and `frozen_values` at the
/// frozen ones (both in increasing index order).
pub fn assemble_u(code: &CodeSpec, data: &[u8], frozen_values: &[u8]) -> Result<Vec<u8>> {
    check_lengths(code, data, frozen_values)?;
    let mut d = data.iter();
    let mut fz = frozen_values.iter();
    Ok((0..code.m())
        .map(|i| {
            let b = if code.is_frozen(i) { fz.next() } else { d.next() };
            *b.expect("lengths checked") & 1
        })
        .collect())
}

/// The length-`N` precodeword `x̃` for the kept-window input `u`.
pub fn encode_extended(code: &CodeSpec, u: &[u8]) -> Result<Vec<u8>> {
    let p = &code.pattern;
    if u.len() != p.m {
        return Err(Error::LengthMismatch {
            expected: p.m,
            actual: u.len(),
        });
    }
    let mut ext = vec![0u8; p.n_total];
    ext[p.window_start()..p.window_start() + p.m].copy_from_slice(u);
    inverse_transform(&ext)
}

/// Encodes to the `M` transmitted bits.
pub fn sc_encode(data: &[u8], code: &CodeSpec, frozen_values: &[u8]) -> Result<Vec<u8>> {
    let u = assemble_u(code, data, frozen_values)?;
    let x = encode_extended(code, &u)?;
    Ok(code.pattern.kept().into_iter().map(|i| x[i]).collect())
}

/// Rejects configurations the decoder does not handle.
pub fn check_supported(code: &CodeSpec) -> Result<BmChannel> {
    let w = code.channel.channel()?;
    if !w.is_symmetric() {
        return Err(Error::Unsupported(format!("channel {} is not symmetric", code.channel)));
    }
    if (code.p0 - 0.5).abs() > 1e-12 {
        return Err(Error::Unsupported(format!("input distribution p0 = {} is not uniform", code.p0)));
    }
    Ok(w)
}

/// SC decoding of the extended tree. `llr` covers all `N` positions of
/// `x̃`; `fixed[i]` forces the decision at position `i` of `ũ`. Returns
/// `ũ`.
pub fn decode_extended(llr: &[Llr], fixed: &[Option<u8>], opts: DecodeOptions) -> Result<Vec<u8>> {
    let n = llr.len();
    if !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("tree size {n} is not a power of two")));
    }
    if fixed.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: fixed.len(),
        });
    }
    let mut u = vec![0u8; n];
    decode_block(llr, fixed, &mut u, opts.min_sum);
    Ok(u)
}

fn decode_block(llr: &[Llr], fixed: &[Option<u8>], u: &mut [u8], min_sum: bool) -> Vec<u8> {
    let n = llr.len();
    if n == 1 {
        let bit = fixed[0].unwrap_or_else(|| llr[0].decide());
        u[0] = bit;
        return vec![bit];
    }
    let half = n / 2;
    let l0: Vec<Llr> = (0..half)
        .map(|k| Llr::f(llr[2 * k], llr[2 * k + 1], min_sum))
        .collect();
    let (u0, u1) = u.split_at_mut(half);
    let v0 = decode_block(&l0, &fixed[..half], u0, min_sum);
    let l1: Vec<Llr> = (0..half)
        .map(|k| Llr::g(llr[2 * k], llr[2 * k + 1], v0[k]))
        .collect();
    let v1 = decode_block(&l1, &fixed[half..], u1, min_sum);
    let mut x = Vec::with_capacity(n);
    for k in 0..half {
        x.push(v0[k] ^ v1[k]);
        x.push(v1[k]);
    }
    x
}

/// Extended LLR vector from the `M` received LLRs.
pub fn extend_llrs(code: &CodeSpec, llr: &[Llr]) -> Result<Vec<Llr>> {
    let p = &code.pattern;
    if llr.len() != p.m {
        return Err(Error::LengthMismatch {
            expected: p.m,
            actual: llr.len(),
        });
    }
    let fill = match p.mode {
        Mode::Shortened => Llr::POS_INF,
        Mode::Punctured => Llr::ZERO,
    };
    let mut ext = vec![fill; p.n_total];
    for (i, l) in p.kept().into_iter().zip(llr) {
        ext[i] = *l;
    }
    Ok(ext)
}

/// Decodes from per-position LLRs of the `M` transmitted bits.
pub fn sc_decode_llr(
    llr: &[Llr],
    code: &CodeSpec,
    frozen_values: &[u8],
    opts: DecodeOptions,
) -> Result<Decoded> {
    if frozen_values.len() != code.frozen.len() {
        return Err(Error::LengthMismatch {
            expected: code.frozen.len(),
            actual: frozen_values.len(),
        });
    }
    let p = &code.pattern;
    let ext = extend_llrs(code, llr)?;
    let start = p.window_start();
    let mut fixed = vec![Some(0u8); p.n_total];
    let mut fz = frozen_values.iter();
    for i in 0..p.m {
        fixed[start + i] = if code.is_frozen(i) {
            Some(fz.next().expect("length checked") & 1)
        } else {
            None
        };
    }
    let u_ext = decode_extended(&ext, &fixed, opts)?;
    let u_hat = u_ext[start..start + p.m].to_vec();
    let data = code.info_set().into_iter().map(|i| u_hat[i]).collect();
    Ok(Decoded { u_hat, data })
}

/// Decodes the channel outputs `y` with all frozen values 0.
pub fn sc_decode(y: &[usize], code: &CodeSpec) -> Result<Decoded> {
    sc_decode_with(y, code, &vec![0; code.frozen.len()], DecodeOptions::default())
}

pub fn sc_decode_with(
    y: &[usize],
    code: &CodeSpec,
    frozen_values: &[u8],
    opts: DecodeOptions,
) -> Result<Decoded> {
    let w = check_supported(code)?;
    if y.len() != code.m() {
        return Err(Error::LengthMismatch {
            expected: code.m(),
            actual: y.len(),
        });
    }
    let llr = y
        .iter()
        .map(|&s| {
            if s < w.output_len() {
                Ok(Llr(w.llr(s)))
            } else {
                Err(Error::IndexOutOfRange {
                    index: s,
                    bits: 0,
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    sc_decode_llr(&llr, code, frozen_values, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ChannelSpec, InputDist};
    use crate::construction::construct_code;

    fn code(m: usize, mode: Mode, count: usize) -> CodeSpec {
        let ch: ChannelSpec = "bsc:0.05".parse().unwrap();
        construct_code(m, &ch, InputDist::uniform(), mode, Some(32), count).unwrap()
    }

    #[test]
    fn f_and_g_infinities() {
        assert_eq!(Llr::f(Llr::POS_INF, Llr(-2.5), false), Llr(-2.5));
        assert_eq!(Llr::f(Llr(1.5), Llr::NEG_INF, false), Llr(-1.5));
        assert_eq!(Llr::f(Llr::NEG_INF, Llr::NEG_INF, false), Llr::POS_INF);
        assert_eq!(Llr::g(Llr::POS_INF, Llr::POS_INF, 1), Llr::ZERO);
        assert_eq!(Llr::g(Llr::POS_INF, Llr(3.0), 0), Llr::POS_INF);
        let exact = 2.0 * ((0.7f64 / 2.0).tanh() * (-1.3f64 / 2.0).tanh()).atanh();
        assert!((Llr::f(Llr(0.7), Llr(-1.3), false).0 - exact).abs() < 1e-12);
        assert_eq!(Llr::f(Llr(0.7), Llr(-1.3), true), Llr(-0.7));
        assert_eq!(Llr::ZERO.decide(), 0);
    }

    #[test]
    fn zero_message() {
        let c = code(6, Mode::Shortened, 3);
        assert_eq!(sc_encode(&[0; 3], &c, &[0; 3]).unwrap(), vec![0; 6]);
        assert!(sc_encode(&[0; 2], &c, &[0; 3]).is_err());
    }

    #[test]
    fn noiseless_round_trip() {
        for mode in [Mode::Shortened, Mode::Punctured] {
            let c = code(6, mode, 3);
            for msg in 0..8u8 {
                let data: Vec<u8> = (0..3).map(|j| (msg >> j) & 1).collect();
                let x = sc_encode(&data, &c, &[0; 3]).unwrap();
                let y: Vec<usize> = x.iter().map(|&b| b as usize).collect();
                assert_eq!(sc_decode(&y, &c).unwrap().data, data);
            }
        }
    }

    #[test]
    fn all_frozen_returns_frozen_values() {
        let c = code(5, Mode::Punctured, 0);
        let fv = [1, 0, 1, 1, 0];
        let d = sc_decode_with(&[0, 1, 1, 0, 1], &c, &fv, DecodeOptions::default()).unwrap();
        assert_eq!(d.u_hat, fv.to_vec());
        assert!(d.data.is_empty());
    }

    #[test]
    fn rejects_asymmetric() {
        let ch: ChannelSpec = "table:0.9,0.1/0.4,0.6".parse().unwrap();
        let c = construct_code(4, &ch, InputDist::uniform(), Mode::Shortened, None, 2).unwrap();
        assert!(matches!(sc_decode(&[0; 4], &c), Err(Error::Unsupported(_))));
    }
}
