//! Howell normal form of a row space over Z/k.
//!
//! Row echelon form with pivots dividing `k`, entries above each pivot reduced
//! modulo it, and the Howell property: for every pivot row with pivot `d` the
//! multiple `(k/d) * row` (which vanishes in the pivot column) is re-inserted
//! and echelonized, so that the rows whose leading columns are zero span every
//! element of the module with those columns zero. That property is what makes
//! the form unique and what lets intersections and kernels be read off a
//! stacked matrix.

use crate::ntheory::{gcd, mod_inv, mul_mod, xgcd};

pub(crate) fn howell_rows(mut a: Vec<Vec<u64>>, cols: usize, k: u64) -> Vec<Vec<u64>> {
    let mut r = 0;
    for c in 0..cols {
        if r >= a.len() {
            break;
        }
        let mut i = r + 1;
        while i < a.len() {
            if a[i][c] != 0 {
                if a[r][c] == 0 {
                    a.swap(r, i);
                } else {
                    combine(&mut a, r, i, c, cols, k);
                }
            }
            i += 1;
        }
        if a[r][c] == 0 {
            continue;
        }

        let unit = normalizing_unit(a[r][c], k);
        for x in a[r][c..cols].iter_mut() {
            *x = mul_mod(*x, unit, k);
        }
        let d = a[r][c];

        for i in 0..r {
            let q = a[i][c] / d;
            if q > 0 {
                let (top, bottom) = a.split_at_mut(r);
                sub_multiple(&mut top[i], &bottom[0], q, c, cols, k);
            }
        }

        let ann = k / d;
        if ann < k {
            let extra: Vec<u64> = a[r].iter().map(|&x| mul_mod(x, ann, k)).collect();
            if extra.iter().any(|&x| x != 0) {
                a.push(extra);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Unimodular 2x2 step on rows `r`, `i` that leaves `gcd` in row `r` and zero in row `i` at column `c`.
fn combine(a: &mut [Vec<u64>], r: usize, i: usize, c: usize, cols: usize, k: u64) {
    let (x, y) = (a[r][c] as i128, a[i][c] as i128);
    let (g, s, t) = xgcd(x, y);
    let (u, v) = (x / g, y / g);
    let km = k as i128;
    for j in c..cols {
        let (p, q) = (a[r][j] as i128, a[i][j] as i128);
        a[r][j] = (s * p + t * q).rem_euclid(km) as u64;
        a[i][j] = (u * q - v * p).rem_euclid(km) as u64;
    }
}

fn sub_multiple(target: &mut [u64], row: &[u64], q: u64, from: usize, cols: usize, k: u64) {
    for j in from..cols {
        let m = mul_mod(row[j], q, k);
        target[j] = (target[j] + k - m) % k;
    }
}

/// A unit `u` of Z/k with `u * x = gcd(x, k)`.
pub(crate) fn normalizing_unit(x: u64, k: u64) -> u64 {
    let d = gcd(x, k);
    let m = k / d;
    let base = mod_inv((x / d) % m, m).unwrap_or(0);
    let mut u = if m == 1 { 1 } else { base };
    while gcd(u, k) != 1 {
        u += m;
    }
    u % k
}

/// Leading column and pivot value of each row of a Howell basis.
pub(crate) fn pivots(rows: &[Vec<u64>]) -> Vec<(usize, u64)> {
    rows.iter()
        .map(|r| {
            let c = r.iter().position(|&x| x != 0).expect("Howell rows are nonzero");
            (c, r[c])
        })
        .collect()
}

/// Reduce `v` against a Howell basis. The result is the canonical coset
/// representative; it is zero exactly when `v` lies in the row space.
pub(crate) fn reduce(rows: &[Vec<u64>], v: &mut [u64], k: u64) {
    for row in rows {
        let c = row.iter().position(|&x| x != 0).expect("Howell rows are nonzero");
        let q = v[c] / row[c];
        if q > 0 {
            let cols = v.len();
            sub_multiple(v, row, q, c, cols, k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_normalize() {
        for k in 2..40u64 {
            for x in 1..k {
                let u = normalizing_unit(x, k);
                assert_eq!(gcd(u, k), 1);
                assert_eq!(mul_mod(u, x, k), gcd(x, k));
            }
        }
    }

    #[test]
    fn annihilator_rows_are_inserted() {
        // (2,1) over Z_4 spans {(0,0),(2,1),(0,2),(2,3)}; Howell form needs (0,2) too
        let h = howell_rows(vec![vec![2, 1]], 2, 4);
        assert_eq!(h, vec![vec![2, 1], vec![0, 2]]);
    }

    #[test]
    fn entries_above_pivots_reduced() {
        let h = howell_rows(vec![vec![1, 5], vec![0, 3]], 2, 6);
        assert_eq!(h, vec![vec![1, 2], vec![0, 3]]);
    }
}
