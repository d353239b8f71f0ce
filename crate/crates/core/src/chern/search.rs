//! Exact searches: exhaustive for definite and rank-2 lattices, bounded box
//! search otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::frame::kernel_basis;
use crate::lattice::{GramLattice, LatticeVector};

pub(crate) enum BoxOutcome {
    Found(LatticeVector),
    Exhausted,
    OverLimit,
}

/// Searches characteristic `c = w mod 2` with `|c_i| <= bound` on all but one
/// pivot coordinate, which is solved exactly from the pairing equation
/// (`gamma != 0`) or from the square (`gamma = 0`). The solved coordinate is
/// unbounded, so the search covers the whole box.
pub(crate) fn box_search(
    l: &GramLattice,
    gamma: &LatticeVector,
    t: i64,
    h: i64,
    w: &LatticeVector,
    bound: u64,
    work_limit: u64,
) -> Result<BoxOutcome> {
    let n = l.rank();
    let g = l.gram();
    if n == 0 {
        return Ok(if h == 0 && t == 0 { BoxOutcome::Found(LatticeVector::zero(0)) } else { BoxOutcome::Exhausted });
    }
    let a = l.dual(gamma)?;
    let linear = !gamma.is_zero();
    let pivot = if linear {
        (0..n).filter(|&i| a[i] != 0).min_by_key(|&i| a[i].abs()).expect("nonzero functional")
    } else {
        (0..n).find(|&i| g[i][i] != 0).unwrap_or(0)
    };
    let bound = bound as i64;
    // Values in [-bound, bound] with the parity of w.
    let values: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            if i == pivot {
                vec![0]
            } else {
                let par = w[i].rem_euclid(2);
                (-bound..=bound).filter(|v| v.rem_euclid(2) == par).collect()
            }
        })
        .collect();
    let total = values.iter().try_fold(1u64, |acc, v| acc.checked_mul(v.len() as u64));
    match total {
        Some(t) if t <= work_limit => {}
        _ => return Ok(BoxOutcome::OverLimit),
    }
    if values.iter().any(|v| v.is_empty()) {
        return Ok(BoxOutcome::Exhausted);
    }
    let target_parity = w[pivot].rem_euclid(2);
    let mut digits = vec![0usize; n];
    let mut c: Vec<i64> = values.iter().map(|v| v[0]).collect();
    loop {
        if let Some(cp) = solve_pivot(g, &a, linear, pivot, &c, t, h) {
            for &v in &cp {
                if v.rem_euclid(2) != target_parity {
                    continue;
                }
                c[pivot] = v;
                if l.norm(&c)? == h && (!linear || l.pair(&c, gamma)? == t) {
                    return Ok(BoxOutcome::Found(LatticeVector::new(c)));
                }
            }
            c[pivot] = 0;
        }
        // Odometer, last coordinate fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(BoxOutcome::Exhausted);
            }
            i -= 1;
            if i == pivot {
                continue;
            }
            if digits[i] + 1 < values[i].len() {
                digits[i] += 1;
                c[i] = values[i][digits[i]];
                break;
            }
            digits[i] = 0;
            c[i] = values[i][0];
        }
    }
}

/// Integral candidates for the pivot coordinate, smallest first.
fn solve_pivot(g: &[Vec<i64>], a: &[i64], linear: bool, j: usize, c: &[i64], t: i64, h: i64) -> Option<Vec<i64>> {
    let n = c.len();
    if linear {
        let rest: i128 = (0..n).filter(|&i| i != j).map(|i| a[i] as i128 * c[i] as i128).sum();
        let rem = t as i128 - rest;
        let aj = a[j] as i128;
        return (rem % aj == 0).then(|| vec![(rem / aj) as i64]);
    }
    // G_jj x^2 + 2 s x + r = h
    let s: i128 = (0..n).filter(|&i| i != j).map(|i| g[j][i] as i128 * c[i] as i128).sum();
    let mut r: i128 = 0;
    for i in (0..n).filter(|&i| i != j) {
        for k in (0..n).filter(|&k| k != j) {
            r += c[i] as i128 * g[i][k] as i128 * c[k] as i128;
        }
    }
    let gjj = g[j][j] as i128;
    let rhs = h as i128 - r;
    if gjj == 0 {
        if s == 0 {
            return (rhs == 0).then(|| vec![0, 1]);
        }
        return (rhs % (2 * s) == 0).then(|| vec![(rhs / (2 * s)) as i64]);
    }
    let disc = s * s + gjj * rhs;
    let root = arith::exact_sqrt(disc)?;
    let mut out: Vec<i64> =
        [-s - root, -s + root].into_iter().filter(|num| num % gjj == 0).map(|num| (num / gjj) as i64).collect();
    out.sort();
    out.dedup();
    Some(out)
}

/// All characteristic `c` of a definite lattice with `Q(c, c) = h` and
/// `Q(c, gamma) = t`, sorted. For `gamma = 0` pass `t = 0`.
pub fn definite_solutions(l: &GramLattice, gamma: &LatticeVector, t: i64, h: i64) -> Result<Vec<LatticeVector>> {
    let sig = l.signature();
    if !sig.is_definite() {
        return Err(Error::Precondition("definite_solutions needs a definite lattice".into()));
    }
    l.check_dim(gamma)?;
    let negative = sig.b_plus == 0 && sig.b_minus > 0;
    let (gram, target) = if negative {
        (l.gram().iter().map(|r| r.iter().map(|x| -x).collect()).collect::<Vec<Vec<i64>>>(), -h)
    } else {
        (l.gram().to_vec(), h)
    };
    let mut out = Vec::new();
    let mut err = None;
    vectors_of_norm(&gram, target, &mut |x| {
        let ok = (|| -> Result<bool> { Ok(l.is_characteristic(x)? && l.pair(x, gamma)? == t) })();
        match ok {
            Ok(true) => out.push(LatticeVector::new(x.to_vec())),
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    out.sort();
    Ok(out)
}

/// Exact Fincke-Pohst enumeration of `x` with `x^T G x = h` for a positive
/// definite `G`.
fn vectors_of_norm(g: &[Vec<i64>], h: i64, visit: &mut dyn FnMut(&[i64])) {
    let shift = vec![BigRational::zero(); g.len()];
    ellipsoid_points(g, &shift, &BigRational::from_integer(BigInt::from(h)), visit);
}

/// Integer `x` with `(x - s)^T G (x - s) = r` for a positive definite `G`,
/// using the rational completion of squares
/// `Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`.
fn ellipsoid_points(g: &[Vec<i64>], shift: &[BigRational], r: &BigRational, visit: &mut dyn FnMut(&[i64])) {
    let n = g.len();
    if r.is_negative() {
        return;
    }
    if n == 0 {
        if r.is_zero() {
            visit(&[]);
        }
        return;
    }
    let mut q: Vec<Vec<BigRational>> = g.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[k][i] * &q[i][l];
                q[k][l] -= v;
            }
        }
    }
    let mut x = vec![0i64; n];
    descend(&q, shift, n - 1, r.clone(), &mut x, visit);
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn descend(
    q: &[Vec<BigRational>],
    shift: &[BigRational],
    i: usize,
    remaining: BigRational,
    x: &mut [i64],
    visit: &mut dyn FnMut(&[i64]),
) {
    let n = x.len();
    let mut center = shift[i].clone();
    for j in i + 1..n {
        center -= &q[i][j] * (rat(x[j]) - &shift[j]);
    }
    let qii = &q[i][i];
    let cost = |v: i64| -> BigRational {
        let d = rat(v) - &center;
        qii * &d * &d
    };
    let nearest = center.round();
    let Ok(x0) = i64::try_from(nearest.to_integer()) else { return };
    if cost(x0) > remaining {
        return;
    }
    let (mut lo, mut hi) = (x0, x0);
    while cost(lo - 1) <= remaining {
        lo -= 1;
    }
    while cost(hi + 1) <= remaining {
        hi += 1;
    }
    for v in lo..=hi {
        let rest = &remaining - cost(v);
        if rest.is_negative() {
            continue;
        }
        x[i] = v;
        if i == 0 {
            if rest.is_zero() {
                visit(x);
            }
        } else {
            descend(q, shift, i - 1, rest, x, visit);
        }
    }
    x[i] = 0;
}

/// Solves `A z = b` over the rationals for a nonsingular `A`.
fn solve_rational(a: &[Vec<i64>], b: &[i64]) -> Vec<BigRational> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> =
        a.iter().zip(b).map(|(row, &bi)| row.iter().map(|&x| rat(x)).chain([rat(bi)]).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero()).expect("nonsingular");
        m.swap(col, p);
        let piv = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &piv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=n {
                    let v = &f * &m[col][k];
                    m[r][k] -= v;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n].clone()).collect()
}

/// All characteristic `c` with `Q(c, c) = h` and `Q(c, gamma) = Q(c1, gamma)`
/// when `gamma^perp` is definite, i.e. `b- = 1` and `gamma^2 < 0`, or
/// `b+ = 1` and `gamma^2 > 0`. `None` in every other case.
///
/// Such `c` are `c1 + 2 K y` for a basis `K` of `gamma^perp`, and the square
/// condition is a definite inhomogeneous quadratic in `y`.
pub fn line_solutions(
    l: &GramLattice,
    gamma: &LatticeVector,
    c1: &LatticeVector,
    h: i64,
) -> Result<Option<Vec<LatticeVector>>> {
    let sig = l.signature();
    let s = l.norm(gamma)?;
    if !((sig.b_minus == 1 && s < 0) || (sig.b_plus == 1 && s > 0)) {
        return Ok(None);
    }
    let sign = if s < 0 { 1 } else { -1 };
    let k = kernel_basis(&l.dual(gamma)?);
    let m = k.len();
    let mut a = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = sign * l.pair(&k[i], &k[j])?;
        }
    }
    let b: Vec<i64> = k.iter().map(|ki| l.pair(c1, ki).map(|v| sign * v)).collect::<Result<_>>()?;
    // sign * Q(c1 + 2Ky) = sign * h  <=>  y^T A y + b^T y = sign * (h - Q(c1)) / 4.
    let r = BigRational::new(BigInt::from(sign as i128 * (h as i128 - l.norm(c1)? as i128)), BigInt::from(4));
    let z = solve_rational(&a, &b);
    let shift: Vec<BigRational> = z.iter().map(|zi| -zi / rat(2)).collect();
    let btz: BigRational = b.iter().zip(&z).map(|(&bi, zi)| rat(bi) * zi).sum();
    let r_shifted = r + btz / rat(4);
    let mut out = Vec::new();
    let mut err = None;
    ellipsoid_points(&a, &shift, &r_shifted, &mut |y| {
        let mut c = c1.clone();
        for (ki, &yi) in k.iter().zip(y) {
            match ki.coords().iter().map(|&x| x.checked_mul(2 * yi)).collect::<Option<Vec<i64>>>() {
                Some(step) => c = &c + &LatticeVector::new(step),
                None => err = Some(Error::Overflow),
            }
        }
        out.push(c);
    });
    if let Some(e) = err {
        return Err(e);
    }
    out.sort();
    Ok(Some(out))
}

/// All characteristic solutions on an indefinite rank-2 lattice with
/// `gamma != 0`, given one characteristic `c1` with the right pairing.
///
/// The characteristic vectors with pairing `t` are `c1 + 2 s k` for the
/// primitive `k` orthogonal to `gamma`, and the square condition is a
/// quadratic in `s`. When the quadratic vanishes identically only `c1` is
/// returned.
pub fn rank2_solutions(
    l: &GramLattice,
    gamma: &LatticeVector,
    c1: &LatticeVector,
    h: i64,
) -> Result<Vec<LatticeVector>> {
    if l.rank() != 2 {
        return Err(Error::Precondition("rank2_solutions needs a rank-2 lattice".into()));
    }
    if gamma.is_zero() {
        return Err(Error::ZeroVector);
    }
    let a = l.dual(gamma)?;
    let gk = arith::gcd(a[0], a[1]);
    let k = LatticeVector::from([a[1] / gk, -a[0] / gk]);
    let qa = 4 * l.norm(&k)? as i128;
    let qb = 4 * l.pair(c1, &k)? as i128;
    let qc = l.norm(c1)? as i128 - h as i128;
    let mut ss: Vec<i128> = Vec::new();
    if qa == 0 {
        if qb == 0 {
            if qc == 0 {
                ss.push(0);
            }
        } else if qc % qb == 0 {
            ss.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4 * qa * qc;
        if let Some(r) = arith::exact_sqrt(disc) {
            for num in [-qb - r, -qb + r] {
                if num % (2 * qa) == 0 {
                    ss.push(num / (2 * qa));
                }
            }
        }
    }
    let mut out: Vec<LatticeVector> = ss
        .into_iter()
        .map(|s| {
            let s = i64::try_from(s).map_err(|_| Error::Overflow)?;
            Ok(c1 + &k.scaled(2 * s))
        })
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}
