//! Phase-one simplex on a dense tableau: finds `x >= 0` with `Ax = b`.

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 100_000;

/// Returns a nonnegative `x` whose equality residuals sum to at most `tol`
/// in absolute value, or `None` if the phase-one optimum exceeds `tol`.
/// Bland's rule guards against cycling.
pub(super) fn find_feasible(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![0.0; n]);
    }
    let width = n + m + 1;
    let rhs = width - 1;
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sign * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][rhs] = sign * b[i];
    }
    // Objective row: sum of artificials expressed in the nonbasic columns.
    for j in 0..n {
        t[m][j] = (0..m).map(|i| t[i][j]).sum();
    }
    t[m][rhs] = (0..m).map(|i| t[i][rhs]).sum();
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _ in 0..MAX_PIVOTS {
        let Some(enter) = (0..n).find(|&j| t[m][j] > PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][enter] > PIVOT_EPS {
                let ratio = t[i][rhs] / t[i][enter];
                leave = match leave {
                    Some((r, best))
                        if ratio > best + PIVOT_EPS
                            || ((ratio - best).abs() <= PIVOT_EPS && basis[i] > basis[r]) =>
                    {
                        Some((r, best))
                    }
                    _ => Some((i, ratio)),
                };
            }
        }
        let (r, _) = leave?;
        pivot(&mut t, r, enter);
        basis[r] = enter;
    }

    if t[m][rhs] > tol {
        return None;
    }
    let mut x = vec![0.0; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][rhs];
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<f64>], r: usize, c: usize) {
    let p = t[r][c];
    for v in t[r].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let factor = row[c];
        if factor != 0.0 {
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
        }
    }
}
