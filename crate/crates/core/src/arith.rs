//! Exact integer and rational helpers: gcd chains, determinants, inertia
//! and the 2x2 unimodular diagonalization used by the hyperbolic splitting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Nonnegative gcd.
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Returns `(g, x, y)` with `a*x + b*y = g`, `g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

/// Gcd of a slice together with integer weights `w` such that
/// `sum a[i]*w[i] = gcd`. Returns `(0, zeros)` for the zero vector.
pub fn gcd_combination(a: &[i64]) -> Result<(i64, Vec<i64>)> {
    let mut weights = vec![0i64; a.len()];
    let mut g = 0i64;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let (ng, x, y) = ext_gcd(g, ai);
        if ng == g {
            continue;
        }
        for w in weights.iter_mut().take(i) {
            *w = w.checked_mul(x).ok_or(Error::Overflow)?;
        }
        weights[i] = y;
        g = ng;
    }
    Ok((g, weights))
}

/// Exact integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt_floor(n: i128) -> i128 {
    debug_assert!(n >= 0);
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Counts of positive, negative and zero directions of a symmetric integer
/// matrix (Sylvester inertia) by exact rational congruence reduction.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
            swap_sym(&mut a, i, k);
        } else {
            let pair = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
            let Some((i, j)) = pair else {
                return (pos, neg, n - k);
            };
            // row/col i += row/col j makes the diagonal entry 2*a[i][j].
            for c in 0..n {
                let v = a[j][c].clone();
                a[i][c] += v;
            }
            for r in 0..n {
                let v = a[r][j].clone();
                a[r][i] += v;
            }
            swap_sym(&mut a, i, k);
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            for j in k + 1..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        for i in k + 1..n {
            a[i][k] = BigRational::zero();
            a[k][i] = BigRational::zero();
        }
        k += 1;
    }
    (pos, neg, 0)
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, k: usize) {
    if i == k {
        return;
    }
    a.swap(i, k);
    for row in a.iter_mut() {
        row.swap(i, k);
    }
}

pub type Mat2 = [[i64; 2]; 2];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Inverse of a determinant-one 2x2 integer matrix.
pub fn sl2_inverse(a: &Mat2) -> Mat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

/// Finds `A, B` in SL2(Z) with `A * m * B` diagonal, using only
/// determinant-one row and column operations.
pub fn sl2_diagonalize(m: &Mat2) -> (Mat2, Mat2, Mat2) {
    let mut d = *m;
    let mut a: Mat2 = [[1, 0], [0, 1]];
    let mut b: Mat2 = [[1, 0], [0, 1]];
    // (r0, r1) -> (r1, -r0) and (c0, c1) -> (-c1, c0) both have determinant one.
    let rot_rows: Mat2 = [[0, 1], [-1, 0]];
    let rot_cols: Mat2 = [[0, 1], [-1, 0]];
    loop {
        while d[1][0] != 0 {
            if d[0][0] != 0 {
                let q = d[1][0] / d[0][0];
                let op: Mat2 = [[1, 0], [-q, 1]];
                d = mat2_mul(&op, &d);
                a = mat2_mul(&op, &a);
            }
            if d[1][0] != 0 {
                d = mat2_mul(&rot_rows, &d);
                a = mat2_mul(&rot_rows, &a);
            }
        }
        while d[0][1] != 0 {
            if d[0][0] != 0 {
                let q = d[0][1] / d[0][0];
                let op: Mat2 = [[1, -q], [0, 1]];
                d = mat2_mul(&d, &op);
                b = mat2_mul(&b, &op);
            }
            if d[0][1] != 0 {
                d = mat2_mul(&d, &rot_cols);
                b = mat2_mul(&b, &rot_cols);
            }
        }
        if d[1][0] == 0 {
            return (a, b, d);
        }
    }
}
