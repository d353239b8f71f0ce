//! Unimodular planes orthogonal to a class.
//!
//! If `P` is a unimodular indefinite rank-2 sublattice orthogonal to `y`,
//! then `L = P + P^perp` and the `P`-component of a characteristic vector can
//! be replaced freely by another characteristic vector of `P`, which moves
//! `Q(c, c)` through its whole residue class mod 8 without touching
//! `Q(c, y)`. Two ways to find such a `P` are provided: a structural one
//! (two orthogonal hyperbolic planes read off the gram matrix, then a 2x2
//! unimodular diagonalization moves `y` out of one of them) and a bounded
//! search for isotropic vectors in `y^perp`.

use crate::arith::{self, Mat2};
use crate::error::Result;
use crate::lattice::{GramLattice, LatticeVector};

/// A pair of orthogonal hyperbolic planes `(e1, f1), (e2, f2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub e1: LatticeVector,
    pub f1: LatticeVector,
    pub e2: LatticeVector,
    pub f2: LatticeVector,
}

/// A unimodular rank-2 indefinite sublattice with an explicit basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plane {
    /// `e^2 = f^2 = 0`, `e.f = 1`.
    Hyperbolic { e: LatticeVector, f: LatticeVector },
    /// `x^2 = 1`, `y^2 = -1`, `x.y = 0`.
    Odd { x: LatticeVector, y: LatticeVector },
}

fn combo(terms: &[(i64, &LatticeVector)], rank: usize) -> LatticeVector {
    terms.iter().fold(LatticeVector::zero(rank), |acc, (k, v)| &acc + &v.scaled(*k))
}

impl Frame {
    /// Reads two orthogonal hyperbolic planes off the gram matrix: isolated
    /// `H` blocks first, then planes assembled from isolated `<1>`/`<-1>`
    /// coordinates (`<1>+<1>+<-1> = H+<1>` and its mirror).
    pub fn discover(lattice: &GramLattice) -> Option<Frame> {
        let g = lattice.gram();
        let n = lattice.rank();
        let support = |i: usize| (0..n).filter(|&j| j != i && g[i][j] != 0).collect::<Vec<_>>();

        let mut planes: Vec<(LatticeVector, LatticeVector)> = Vec::new();
        let mut plus: Vec<LatticeVector> = Vec::new();
        let mut minus: Vec<LatticeVector> = Vec::new();
        let mut used = vec![false; n];
        for i in 0..n {
            if used[i] {
                continue;
            }
            let s = support(i);
            if s.is_empty() {
                match g[i][i] {
                    1 => plus.push(LatticeVector::basis(n, i)),
                    -1 => minus.push(LatticeVector::basis(n, i)),
                    _ => {}
                }
                used[i] = true;
                continue;
            }
            if let [j] = s[..] {
                let sj = support(j);
                if g[i][i] == 0 && g[j][j] == 0 && sj == [i] && g[i][j].abs() == 1 && !used[j] {
                    planes.push((LatticeVector::basis(n, i), LatticeVector::basis(n, j).scaled(g[i][j])));
                    used[i] = true;
                    used[j] = true;
                }
            }
        }
        while planes.len() < 2 {
            if plus.len() >= 2 && !minus.is_empty() {
                let (x1, x2, y) = (plus.pop()?, plus.pop()?, minus.pop()?);
                planes.push((&x1 + &y, &x2 - &y));
                plus.push(combo(&[(1, &x1), (-1, &x2), (1, &y)], n));
            } else if minus.len() >= 2 && !plus.is_empty() {
                let (y1, y2, x) = (minus.pop()?, minus.pop()?, plus.pop()?);
                planes.push((&y1 + &x, &x - &y2));
                minus.push(combo(&[(1, &x), (1, &y1), (-1, &y2)], n));
            } else {
                return None;
            }
        }
        let (e1, f1) = planes[0].clone();
        let (e2, f2) = planes[1].clone();
        let frame = Frame { e1, f1, e2, f2 };
        frame.is_valid(lattice).then_some(frame)
    }

    fn is_valid(&self, l: &GramLattice) -> bool {
        let vs = [&self.e1, &self.f1, &self.e2, &self.f2];
        let expect = |i: usize, j: usize| -> i64 {
            // Gram of the frame is H + H.
            i64::from(i / 2 == j / 2 && i != j)
        };
        for i in 0..4 {
            for j in 0..4 {
                match l.pair(vs[i], vs[j]) {
                    Ok(v) if v == expect(i, j) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// A hyperbolic plane inside `H + H` orthogonal to `gamma`.
    ///
    /// The frame part of `gamma` is encoded as the 2x2 matrix
    /// `[[a1, a2], [-b2, b1]]` whose determinant is half its square; SL2 x SL2
    /// acts by isometries, and after diagonalizing the second plane of the
    /// normalized frame is orthogonal to `gamma`.
    pub fn plane_orthogonal_to(&self, l: &GramLattice, gamma: &[i64]) -> Result<Plane> {
        let a1 = l.pair(gamma, &self.f1)?;
        let b1 = l.pair(gamma, &self.e1)?;
        let a2 = l.pair(gamma, &self.f2)?;
        let b2 = l.pair(gamma, &self.e2)?;
        let m: Mat2 = [[a1, a2], [-b2, b1]];
        let (a, b, _) = arith::sl2_diagonalize(&m);
        let (ai, bi) = (arith::sl2_inverse(&a), arith::sl2_inverse(&b));
        let pull = |x: &Mat2| -> LatticeVector {
            let y = arith::mat2_mul(&arith::mat2_mul(&ai, x), &bi);
            let (x1, x2, y2, y1) = (y[0][0], y[0][1], -y[1][0], y[1][1]);
            combo(&[(x1, &self.e1), (y1, &self.f1), (x2, &self.e2), (y2, &self.f2)], l.rank())
        };
        let e = pull(&[[0, 1], [0, 0]]);
        let f = pull(&[[0, 0], [-1, 0]]);
        Ok(Plane::Hyperbolic { e, f })
    }
}

impl Plane {
    /// Builds the plane spanned by an isotropic `e` and a partner `f` with
    /// `e.f = 1`.
    pub fn from_isotropic(l: &GramLattice, e: LatticeVector, f: LatticeVector) -> Result<Plane> {
        let s = l.norm(&f)?;
        if s.rem_euclid(2) == 0 {
            let f = &f - &e.scaled(s / 2);
            Ok(Plane::Hyperbolic { e, f })
        } else {
            let x = &f - &e.scaled((s - 1) / 2);
            let y = &x - &e;
            Ok(Plane::Odd { x, y })
        }
    }

    pub fn basis(&self) -> (&LatticeVector, &LatticeVector) {
        match self {
            Plane::Hyperbolic { e, f } => (e, f),
            Plane::Odd { x, y } => (x, y),
        }
    }

    /// Checks the plane's gram matrix and orthogonality to `gamma`.
    pub fn is_valid(&self, l: &GramLattice, gamma: &[i64]) -> bool {
        let (a, b) = self.basis();
        let expected = match self {
            Plane::Hyperbolic { .. } => [0, 1, 0],
            Plane::Odd { .. } => [1, 0, -1],
        };
        let got = [l.norm(a), l.pair(a, b), l.norm(b)];
        got.iter().zip(expected).all(|(g, e)| matches!(g, Ok(v) if *v == e))
            && matches!(l.pair(a, gamma), Ok(0))
            && matches!(l.pair(b, gamma), Ok(0))
    }

    /// Replaces the plane component of the characteristic vector `c1` so the
    /// result has square `h`. Returns `None` when `h - Q(v, v)` is not a
    /// multiple of 8, which cannot happen when `h = tau mod 8`.
    pub fn fit_square(&self, l: &GramLattice, c1: &LatticeVector, h: i64) -> Result<Option<LatticeVector>> {
        let n = l.rank();
        match self {
            Plane::Hyperbolic { e, f } => {
                let u = combo(&[(l.pair(c1, f)?, e), (l.pair(c1, e)?, f)], n);
                let v = c1 - &u;
                let rem = h - l.norm(&v)?;
                if rem.rem_euclid(8) != 0 {
                    return Ok(None);
                }
                Ok(Some(&v + &combo(&[(rem / 4, e), (2, f)], n)))
            }
            Plane::Odd { x, y } => {
                let u = combo(&[(l.pair(c1, x)?, x), (-l.pair(c1, y)?, y)], n);
                let v = c1 - &u;
                let rem = h - l.norm(&v)?;
                if rem.rem_euclid(8) != 0 {
                    return Ok(None);
                }
                let q = rem / 4;
                Ok(Some(&v + &combo(&[(q + 1, x), (q - 1, y)], n)))
            }
        }
    }
}

/// Integer basis of the kernel of `x -> a . x` (the full standard basis
/// when `a = 0`), by unimodular column reduction.
pub fn kernel_basis(a: &[i64]) -> Vec<LatticeVector> {
    let n = a.len();
    let mut row = a.to_vec();
    let mut cols: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::basis(n, i)).collect();
    if row.iter().all(|&x| x == 0) {
        return cols;
    }
    // Bring a nonzero entry to position 0.
    if row[0] == 0 {
        let p = row.iter().position(|&x| x != 0).expect("nonzero entry");
        row.swap(0, p);
        cols.swap(0, p);
    }
    for i in 1..n {
        if row[i] == 0 {
            continue;
        }
        let (g, x, y) = arith::ext_gcd(row[0], row[i]);
        let (p, q) = (row[i] / g, row[0] / g);
        let c0 = &cols[0].scaled(x) + &cols[i].scaled(y);
        let ci = &cols[i].scaled(q) - &cols[0].scaled(p);
        cols[0] = c0;
        cols[i] = ci;
        row[0] = g;
        row[i] = 0;
    }
    cols.remove(0);
    cols
}

/// Bounded search for a unimodular plane inside `gamma^perp`.
///
/// Candidates are small integer combinations of a kernel basis: single basis
/// vectors, then combinations with support up to three and coefficients up
/// to 3 in absolute value, then the full `{-1,0,1}` box while it fits in
/// `work_limit` evaluations.
pub fn search_plane(l: &GramLattice, gamma: &[i64], work_limit: u64) -> Result<Option<Plane>> {
    let basis = kernel_basis(&l.dual(gamma)?);
    let m = basis.len();
    if m < 2 {
        return Ok(None);
    }
    let mut kg = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in i..m {
            let v = l.pair(&basis[i], &basis[j])?;
            kg[i][j] = v;
            kg[j][i] = v;
        }
    }
    let kernel = KernelForm { basis: &basis, gram: kg };

    if m == 2 {
        if let Some(z) = kernel.binary_isotropic() {
            if let Some(p) = kernel.plane_from(l, &z)? {
                return Ok(Some(p));
            }
        }
        return Ok(None);
    }

    let mut budget = work_limit;
    let try_z = |z: &[i64]| -> Result<Option<Plane>> {
        if kernel.quad(z) != 0 || z.iter().all(|&v| v == 0) {
            return Ok(None);
        }
        kernel.plane_from(l, z)
    };
    for support in 1..=3usize.min(m) {
        for radius in 1..=3i64 {
            let mut found = None;
            for_each_sparse(m, support, radius, &mut |z| {
                if found.is_some() || budget == 0 {
                    return;
                }
                budget -= 1;
                if let Ok(Some(p)) = try_z(z) {
                    found = Some(p);
                }
            });
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    // Full {-1, 0, 1} box as a last resort.
    let total = 3u64.checked_pow(m as u32).unwrap_or(u64::MAX);
    if total > budget {
        return Ok(None);
    }
    let mut z = vec![-1i64; m];
    loop {
        if let Some(p) = try_z(&z)? {
            return Ok(Some(p));
        }
        let mut i = 0;
        while i < m && z[i] == 1 {
            z[i] = -1;
            i += 1;
        }
        if i == m {
            return Ok(None);
        }
        z[i] += 1;
    }
}

struct KernelForm<'a> {
    basis: &'a [LatticeVector],
    gram: Vec<Vec<i64>>,
}

impl KernelForm<'_> {
    fn quad(&self, z: &[i64]) -> i128 {
        let mut s: i128 = 0;
        for (i, &zi) in z.iter().enumerate() {
            if zi == 0 {
                continue;
            }
            for (j, &zj) in z.iter().enumerate() {
                s += zi as i128 * self.gram[i][j] as i128 * zj as i128;
            }
        }
        s
    }

    /// Primitive isotropic vector of a binary form, if one exists.
    fn binary_isotropic(&self) -> Option<Vec<i64>> {
        let (a, b, c) = (self.gram[0][0], self.gram[0][1], self.gram[1][1]);
        if a == 0 {
            return Some(vec![1, 0]);
        }
        let disc = b as i128 * b as i128 - a as i128 * c as i128;
        let r = arith::exact_sqrt(disc)? as i64;
        let (x, y) = (r - b, a);
        let g = arith::gcd(x, y);
        Some(vec![x / g, y / g])
    }

    fn plane_from(&self, l: &GramLattice, z: &[i64]) -> Result<Option<Plane>> {
        let n = l.rank();
        let terms: Vec<(i64, &LatticeVector)> = z.iter().copied().zip(self.basis.iter()).collect();
        let e = combo(&terms, n);
        if e.divisibility() != 1 {
            return Ok(None);
        }
        let coeffs: Vec<i64> = self.basis.iter().map(|k| l.pair(&e, k)).collect::<Result<_>>()?;
        let (g, w) = arith::gcd_combination(&coeffs)?;
        if g != 1 {
            return Ok(None);
        }
        let terms: Vec<(i64, &LatticeVector)> = w.iter().copied().zip(self.basis.iter()).collect();
        let f = combo(&terms, n);
        Plane::from_isotropic(l, e, f).map(Some)
    }
}

fn for_each_sparse(m: usize, support: usize, radius: i64, f: &mut impl FnMut(&[i64])) {
    // Supports in lexicographic order; values with max |v| = radius exactly.
    let mut idx: Vec<usize> = (0..support).collect();
    let values: Vec<i64> = (-radius..=radius).filter(|&v| v != 0).collect();
    loop {
        let mut choice = vec![0usize; support];
        loop {
            let vals: Vec<i64> = choice.iter().map(|&c| values[c]).collect();
            if vals.iter().any(|v| v.abs() == radius) {
                let mut z = vec![0i64; m];
                for (k, &i) in idx.iter().enumerate() {
                    z[i] = vals[k];
                }
                f(&z);
            }
            let mut k = 0;
            while k < support && choice[k] + 1 == values.len() {
                choice[k] = 0;
                k += 1;
            }
            if k == support {
                break;
            }
            choice[k] += 1;
        }
        // next combination
        let mut k = support;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if idx[k] != k + m - support {
                break;
            }
            if k == 0 {
                return;
            }
        }
        idx[k] += 1;
        for j in k + 1..support {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
