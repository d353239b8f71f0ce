//! Exact solution for an isotropic class when `min(b+, b-) = 1`.
//!
//! Write `y = d p` with `p` primitive and pick `x` with `x . p = 1`. The
//! plane `<p, x>` is unimodular, so `L = <p, x> + N` with `N` its orthogonal
//! complement, which is definite here. A characteristic `c = a p + b x + n`
//! has `b = c . p = t / d` (even), `a = x^2 mod 2` and `n` characteristic in
//! `N`, and `c^2 = 2ab + b^2 x^2 + n^2`.
//!
//! For `b = 0` the condition is `n^2 = h` on the definite `N`. Otherwise `a`
//! is determined by `n`, and its integrality and parity depend only on
//! `n mod 2b`, so a scan of `|b|^(rank - 2)` residues is exhaustive.

use super::{find_dual_partner, primitive_part, search::definite_solutions};
use crate::error::{Error, Result};
use crate::frame::kernel_basis;
use crate::lattice::{GramLattice, LatticeVector};

/// `Some(Some(c))` with a solution, `Some(None)` when none exists, `None`
/// when the residue scan would exceed `work_limit`.
pub(crate) fn isotropic_solution(
    l: &GramLattice,
    gamma: &LatticeVector,
    t: i64,
    h: i64,
    work_limit: u64,
) -> Result<Option<Option<LatticeVector>>> {
    let (d, p) = primitive_part(gamma)?;
    let d = d as i64;
    if t % d != 0 || (t / d) % 2 != 0 {
        return Ok(Some(None));
    }
    let beta = t / d;
    let x = find_dual_partner(l, &p)?;
    let x2 = l.norm(&x)? as i128;

    let k1 = kernel_basis(&l.dual(&p)?);
    let row: Vec<i64> = k1.iter().map(|v| l.pair(&x, v)).collect::<Result<_>>()?;
    let basis: Vec<LatticeVector> =
        kernel_basis(&row).iter().map(|coeffs| combine(&k1, coeffs)).collect::<Result<_>>()?;
    let m = basis.len();
    let mut gram = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            gram[i][j] = l.pair(&basis[i], &basis[j])?;
        }
    }
    let n_lat = GramLattice::new(gram)?;
    let alpha_parity = x2.rem_euclid(2) as i64;

    if beta == 0 {
        let sols = definite_solutions(&n_lat, &LatticeVector::zero(m), 0, h)?;
        return match sols.first() {
            Some(n) => Ok(Some(Some(&p.scaled(alpha_parity) + &combine(&basis, n)?))),
            None => Ok(Some(None)),
        };
    }

    let b = beta.unsigned_abs();
    let points = (0..m).try_fold(1u128, |acc, _| acc.checked_mul(b as u128)).unwrap_or(u128::MAX);
    if points > work_limit as u128 {
        return Ok(None);
    }
    let (beta, h) = (beta as i128, h as i128);
    let modulus = 4 * beta.abs();
    let fixed = h - beta * beta * x2;
    let w = n_lat.find_characteristic();
    let mut y = vec![0i64; m];
    loop {
        let n: Vec<i64> = w.iter().zip(&y).map(|(&wi, &yi)| wi + 2 * yi).collect();
        let rest = fixed - n_lat.norm(&n)? as i128;
        if (rest - 2 * beta * x2).rem_euclid(modulus) == 0 {
            let alpha = i64::try_from(rest / (2 * beta)).map_err(|_| Error::Overflow)?;
            let c = &(&p.scaled(alpha) + &x.scaled(beta as i64)) + &combine(&basis, &n)?;
            return Ok(Some(Some(c)));
        }
        // Odometer over [0, b)^m.
        let mut i = 0;
        loop {
            if i == m {
                return Ok(Some(None));
            }
            y[i] += 1;
            if (y[i] as u64) < b {
                break;
            }
            y[i] = 0;
            i += 1;
        }
    }
}

fn combine(vs: &[LatticeVector], coeffs: &[i64]) -> Result<LatticeVector> {
    let n = vs.first().map_or(0, |v| v.len());
    let mut out = vec![0i64; n];
    for (v, &c) in vs.iter().zip(coeffs) {
        for (o, &vi) in out.iter_mut().zip(v.iter()) {
            *o = vi.checked_mul(c).and_then(|x| o.checked_add(x)).ok_or(Error::Overflow)?;
        }
    }
    Ok(LatticeVector::new(out))
}
