//! Random instances for the randomized verification suites.

use rand::Rng;

use crate::channel::JointDist;
use crate::relations::Kernel;

/// A joint distribution with `1..=max_outputs` outputs. Roughly one entry
/// in eight is exactly zero.
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, max_outputs: usize) -> JointDist {
    let n = rng.gen_range(1..=max_outputs.max(1));
    loop {
        let mut cols: Vec<[f64; 2]> = (0..n)
            .map(|_| {
                let mut c = [rng.gen::<f64>(), rng.gen::<f64>()];
                for v in c.iter_mut() {
                    if rng.gen_ratio(1, 8) {
                        *v = 0.0;
                    }
                }
                c
            })
            .collect();
        let total: f64 = cols.iter().map(|c| c[0] + c[1]).sum();
        if total <= 0.0 {
            continue;
        }
        for c in cols.iter_mut() {
            c[0] /= total;
            c[1] /= total;
        }
        return JointDist::from_cols(cols);
    }
}

/// A stochastic kernel from `n_in` symbols onto `1..=max_out` symbols.
pub fn random_kernel<R: Rng + ?Sized>(rng: &mut R, n_in: usize, max_out: usize) -> Kernel {
    let n_out = rng.gen_range(1..=max_out.max(1));
    let rows: Vec<Vec<f64>> = (0..n_in)
        .map(|_| {
            let mut r: Vec<f64> = (0..n_out)
                .map(|_| if rng.gen_ratio(1, 4) { 0.0 } else { rng.gen::<f64>() })
                .collect();
            let s: f64 = r.iter().sum();
            if s <= 0.0 {
                r[rng.gen_range(0..n_out)] = 1.0;
            } else {
                r.iter_mut().for_each(|v| *v /= s);
            }
            r
        })
        .collect();
    Kernel::from_dense(&rows).expect("rows normalized")
}

/// A random input permutation `f: Y -> {0, 1}`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..2u8)).collect()
}
