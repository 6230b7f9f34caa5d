mod common;

use polarsp::channel::{InputDist, ERASURE};
use polarsp::codec::{
    decode_extended, encode_extended, sc_decode, sc_decode_with, sc_encode, DecodeOptions, Llr,
};
use polarsp::construction::{bec_closed_form, construct_code, CodeSpec};
use polarsp::transform::Mode;
use polarsp::ChannelSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn code(ch: &str, m: usize, mode: Mode, count: usize) -> CodeSpec {
    let ch: ChannelSpec = ch.parse().unwrap();
    construct_code(m, &ch, InputDist::uniform(), mode, Some(64), count).unwrap()
}

#[test]
fn noiseless_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for mode in [Mode::Shortened, Mode::Punctured] {
        for m in [6usize, 12, 24, 96, 384] {
            let c = code("bsc:0.05", m, mode, m / 2);
            let frozen: Vec<u8> = (0..c.frozen.len()).map(|_| rng.gen_range(0..2)).collect();
            for _ in 0..1000 {
                let data: Vec<u8> = (0..c.info_len()).map(|_| rng.gen_range(0..2)).collect();
                let x = sc_encode(&data, &c, &frozen).unwrap();
                let y: Vec<usize> = x.iter().map(|&b| b as usize).collect();
                let d = sc_decode_with(&y, &c, &frozen, DecodeOptions::default()).unwrap();
                assert_eq!(d.data, data, "{mode} M={m}");
            }
        }
    }
}

#[test]
fn shortened_positions_are_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let c = code("bsc:0.1", 6, Mode::Shortened, 3);
    for _ in 0..100 {
        let u: Vec<u8> = (0..6).map(|_| rng.gen_range(0..2)).collect();
        let x = encode_extended(&c, &u).unwrap();
        assert_eq!((x[3], x[7]), (0, 0));
    }
}

#[test]
fn decoder_matches_erasure_oracle() {
    for mode in [Mode::Shortened, Mode::Punctured] {
        for m in 2..=6usize {
            for count in 0..=m {
                let c = code("bec:0.5", m, mode, count);
                let info = c.info_set();
                let zeros = vec![0u8; c.frozen.len()];
                for msg in 0..1usize << info.len() {
                    let data = common::bits(msg, info.len());
                    let x = sc_encode(&data, &c, &zeros).unwrap();
                    let mut u = vec![0u8; m];
                    for (j, &i) in info.iter().enumerate() {
                        u[i] = data[j];
                    }
                    for e in 0..1usize << m {
                        let erased: Vec<bool> = (0..m).map(|k| (e >> k) & 1 == 1).collect();
                        let y: Vec<usize> = x
                            .iter()
                            .zip(&erased)
                            .map(|(&b, &er)| if er { ERASURE } else { b as usize })
                            .collect();
                        let failed = sc_decode(&y, &c).unwrap().data != data;
                        assert_eq!(
                            failed,
                            common::bec_sc_fails(&c, &u, &erased),
                            "{mode} M={m} count={count} msg={msg} erased={erased:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn shortened_decoding_equals_mother_code_with_perfect_positions() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for m in 3..=8usize {
        let c = code("bsc:0.2", m, Mode::Shortened, m / 2);
        let w = c.channel.channel().unwrap();
        for _ in 0..200 {
            let y: Vec<usize> = (0..m).map(|_| rng.gen_range(0..2)).collect();
            let short = sc_decode(&y, &c).unwrap();
            // Mother code of length N: removed positions observed as a
            // noiseless 0, i.e. an infinite LLR.
            let kept = c.pattern.kept();
            let mut llr = vec![Llr::POS_INF; c.pattern.n_total];
            for (k, &pos) in kept.iter().enumerate() {
                llr[pos] = Llr(w.llr(y[k]));
            }
            let mut fixed = vec![Some(0u8); c.pattern.n_total];
            for i in 0..m {
                if !c.is_frozen(i) {
                    fixed[i] = None;
                }
            }
            let u = decode_extended(&llr, &fixed, DecodeOptions::default()).unwrap();
            assert_eq!(&u[..m], &short.u_hat[..]);
        }
    }
}

#[test]
fn min_sum_round_trip() {
    let c = code("bsc:0.05", 24, Mode::Punctured, 12);
    let data = vec![1u8; 12];
    let x = sc_encode(&data, &c, &[0; 12]).unwrap();
    let llr: Vec<Llr> = x.iter().map(|&b| Llr(if b == 0 { 2.0 } else { -2.0 })).collect();
    let d = polarsp::codec::sc_decode_llr(&llr, &c, &[0; 12], DecodeOptions { min_sum: true })
        .unwrap();
    assert_eq!(d.data, data);
}

#[test]
fn bec_frozen_set_uses_largest_z() {
    let c = code("bec:0.5", 8, Mode::Shortened, 4);
    let z = bec_closed_form(8, 0.5, Mode::Shortened).unwrap();
    let mut order: Vec<usize> = (0..8).collect();
    order.sort_by(|&a, &b| z[b].partial_cmp(&z[a]).unwrap().then(a.cmp(&b)));
    let mut expect = order[..4].to_vec();
    expect.sort();
    assert_eq!(c.frozen, expect);
}
