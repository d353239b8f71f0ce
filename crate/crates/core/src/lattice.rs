//! Unimodular integral lattices and the arithmetic on them: pairing,
//! signature, parity, divisibility, characteristic vectors, the k-invariant
//! and the adjunction genus.

use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::frame::Frame;

/// A standard unimodular block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    Plus1,
    Minus1,
    H,
    E8,
    MinusE8,
}

/// Cartan matrix of E8, Bourbaki labelling (node 2 attached to node 4).
const E8_GRAM: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

impl Block {
    pub fn rank(self) -> usize {
        match self {
            Block::Plus1 | Block::Minus1 => 1,
            Block::H => 2,
            Block::E8 | Block::MinusE8 => 8,
        }
    }

    pub fn gram(self) -> Vec<Vec<i64>> {
        match self {
            Block::Plus1 => vec![vec![1]],
            Block::Minus1 => vec![vec![-1]],
            Block::H => vec![vec![0, 1], vec![1, 0]],
            Block::E8 => E8_GRAM.iter().map(|r| r.to_vec()).collect(),
            Block::MinusE8 => E8_GRAM.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }

    /// Token used by the textual lattice grammar.
    pub fn token(self) -> &'static str {
        match self {
            Block::Plus1 => "<1>",
            Block::Minus1 => "<-1>",
            Block::H => "H",
            Block::E8 => "E8",
            Block::MinusE8 => "(-E8)",
        }
    }
}

/// An element of a lattice in coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    /// The `i`-th standard basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Largest `d` with `self = d*x`; zero exactly for the zero vector.
    pub fn divisibility(&self) -> u64 {
        self.0.iter().fold(0i64, |g, &x| arith::gcd(g, x)).unsigned_abs()
    }

    pub fn scaled(&self, k: i64) -> Self {
        self * k
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> Option<i64>) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        LatticeVector(
            self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b).expect("lattice vector coordinate overflow")).collect(),
        )
    }
}

impl Deref for LatticeVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(v: [i64; N]) -> Self {
        LatticeVector(v.to_vec())
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        self.zip_with(rhs, i64::checked_add)
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        self.zip_with(rhs, i64::checked_sub)
    }
}

impl Mul<i64> for &LatticeVector {
    type Output = LatticeVector;
    fn mul(self, k: i64) -> LatticeVector {
        LatticeVector(self.0.iter().map(|&x| x.checked_mul(k).expect("lattice vector coordinate overflow")).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        self * -1
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub b_plus: usize,
    pub b_minus: usize,
}

impl Signature {
    pub fn tau(&self) -> i64 {
        self.b_plus as i64 - self.b_minus as i64
    }

    pub fn rank(&self) -> usize {
        self.b_plus + self.b_minus
    }

    pub fn min(&self) -> usize {
        self.b_plus.min(self.b_minus)
    }

    pub fn is_definite(&self) -> bool {
        self.b_plus == 0 || self.b_minus == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A value modulo `d >= 0`; modulus zero means an exact integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueClass {
    modulus: u64,
    value: i64,
}

impl ResidueClass {
    pub fn new(modulus: u64, value: i64) -> Self {
        let value = if modulus == 0 { value } else { value.rem_euclid(modulus as i64) };
        ResidueClass { modulus, value }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    /// Whether `n` lies in this class (integer equality for modulus zero).
    pub fn contains(&self, n: i64) -> bool {
        if self.modulus == 0 {
            n == self.value
        } else {
            n.rem_euclid(self.modulus as i64) == self.value
        }
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{} (exact)", self.value)
        } else {
            write!(f, "{} mod {}", self.value, self.modulus)
        }
    }
}

/// A unimodular symmetric integer bilinear form on `Z^rank`.
///
/// Construction validates symmetry and `|det| = 1`, so every value of this
/// type is a lattice in the sense used throughout the crate.
#[derive(Clone, Debug)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
    blocks: Option<Vec<Block>>,
    signature: Signature,
    frame: OnceLock<Option<Frame>>,
}

impl PartialEq for GramLattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for GramLattice {}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        for (row, r) in gram.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), expected: n });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let det = arith::determinant(&gram);
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular { det: det.to_string() });
        }
        let (b_plus, b_minus, zero) = arith::inertia(&gram);
        if zero != 0 {
            return Err(Error::Degenerate);
        }
        Ok(GramLattice { gram, blocks: None, signature: Signature { b_plus, b_minus }, frame: OnceLock::new() })
    }

    /// Orthogonal sum of standard blocks, in order.
    pub fn from_blocks(blocks: &[Block]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.rank()).sum();
        let mut gram = vec![vec![0i64; n]; n];
        let mut offset = 0;
        for b in blocks {
            for (i, row) in b.gram().into_iter().enumerate() {
                for (j, x) in row.into_iter().enumerate() {
                    gram[offset + i][offset + j] = x;
                }
            }
            offset += b.rank();
        }
        let mut lattice = GramLattice::new(gram)?;
        lattice.blocks = Some(blocks.to_vec());
        Ok(lattice)
    }

    /// Diagonal lattice `a<1> + b<-1>`.
    pub fn diagonal(plus: usize, minus: usize) -> Self {
        let mut blocks = vec![Block::Plus1; plus];
        blocks.extend(std::iter::repeat(Block::Minus1).take(minus));
        GramLattice::from_blocks(&blocks).expect("diagonal lattice is unimodular")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn blocks(&self) -> Option<&[Block]> {
        self.blocks.as_deref()
    }

    pub fn determinant(&self) -> i64 {
        if arith::determinant(&self.gram).is_positive() {
            1
        } else {
            -1
        }
    }

    pub(crate) fn frame(&self) -> Option<&Frame> {
        self.frame.get_or_init(|| Frame::discover(self)).as_ref()
    }

    /// The same form with every entry negated (reversed orientation).
    pub fn negated(&self) -> Self {
        let gram = self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        // -H has a different Gram matrix from H, so a block list survives
        // negation only without hyperbolic summands.
        let blocks = self.blocks.as_ref().filter(|bs| !bs.contains(&Block::H)).map(|bs| {
            bs.iter()
                .map(|b| match b {
                    Block::Plus1 => Block::Minus1,
                    Block::Minus1 => Block::Plus1,
                    Block::H => Block::H,
                    Block::E8 => Block::MinusE8,
                    Block::MinusE8 => Block::E8,
                })
                .collect()
        });
        GramLattice {
            gram,
            blocks,
            signature: Signature { b_plus: self.signature.b_minus, b_minus: self.signature.b_plus },
            frame: OnceLock::new(),
        }
    }

    pub fn check_dim(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    /// `Q(x, y) = x^T G y`, exact.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut acc: i128 = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for (j, &yj) in y.iter().enumerate() {
                row = row.checked_add(self.gram[i][j] as i128 * yj as i128).ok_or(Error::Overflow)?;
            }
            acc = acc.checked_add(row.checked_mul(xi as i128).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
        }
        i64::try_from(acc).map_err(|_| Error::Overflow)
    }

    pub fn norm(&self, x: &[i64]) -> Result<i64> {
        self.pair(x, x)
    }

    /// The vector `G x`, i.e. the coefficients of the functional `Q(x, -)`.
    pub fn dual(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.check_dim(x)?;
        self.gram
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(x).map(|(&g, &v)| g as i128 * v as i128).sum();
                i64::try_from(s).map_err(|_| Error::Overflow)
            })
            .collect()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn parity(&self) -> Parity {
        if (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `Q(c, e_i) = Q(e_i, e_i) mod 2` for every basis vector.
    pub fn is_characteristic(&self, c: &[i64]) -> Result<bool> {
        let gc = self.dual(c)?;
        Ok((0..self.rank()).all(|i| (gc[i] - self.gram[i][i]).rem_euclid(2) == 0))
    }

    /// A characteristic vector with 0/1 coordinates, from the mod-2 system
    /// `G c = diag(G)`; the system is nonsingular because `det G` is odd.
    pub fn find_characteristic(&self) -> LatticeVector {
        let n = self.rank();
        let mut rows: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut r: Vec<u8> = self.gram[i].iter().map(|x| x.rem_euclid(2) as u8).collect();
                r.push(self.gram[i][i].rem_euclid(2) as u8);
                r
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::with_capacity(n);
        for col in 0..n {
            let Some(p) = (pivot_row..n).find(|&r| rows[r][col] == 1) else {
                continue;
            };
            rows.swap(p, pivot_row);
            for r in 0..n {
                if r != pivot_row && rows[r][col] == 1 {
                    for k in col..=n {
                        rows[r][k] ^= rows[pivot_row][k];
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        debug_assert_eq!(pivots.len(), n, "unimodular form is nonsingular mod 2");
        let mut c = vec![0i64; n];
        for (r, &col) in pivots.iter().enumerate() {
            c[col] = rows[r][n] as i64;
        }
        LatticeVector(c)
    }

    /// `k(y) = 1 + (Q(y,y) - Q(c,y))/2 mod d(y)`; exact `1` for `y = 0`.
    pub fn k_invariant(&self, gamma: &[i64]) -> Result<ResidueClass> {
        self.check_dim(gamma)?;
        let w = self.find_characteristic();
        self.k_invariant_with(&w, gamma)
    }

    /// Same as [`k_invariant`](Self::k_invariant) with a caller-chosen
    /// characteristic vector.
    pub fn k_invariant_with(&self, c: &[i64], gamma: &[i64]) -> Result<ResidueClass> {
        if !self.is_characteristic(c)? {
            return Err(Error::NotCharacteristic);
        }
        let d = LatticeVector::new(gamma.to_vec()).divisibility();
        if d == 0 {
            return Ok(ResidueClass::new(0, 1));
        }
        let raw = self.adjunction_genus(c, gamma)?;
        Ok(ResidueClass::new(d, raw))
    }

    /// `1 + (Q(y,y) - Q(c,y))/2`; negative values are returned unchanged.
    pub fn adjunction_genus(&self, c: &[i64], gamma: &[i64]) -> Result<i64> {
        if !self.is_characteristic(c)? {
            return Err(Error::NotCharacteristic);
        }
        let diff = self.norm(gamma)?.checked_sub(self.pair(c, gamma)?).ok_or(Error::Overflow)?;
        debug_assert_eq!(diff.rem_euclid(2), 0);
        Ok(1 + diff / 2)
    }

    /// `U^T G U`.
    pub fn transform(&self, u: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: u.len() });
        }
        let cols: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| u[i][j]).collect()).collect();
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.pair(&cols[i], &cols[j])?;
                out[i][j] = v;
                out[j][i] = v;
            }
        }
        Ok(out)
    }

    /// Compact description: the block grammar when known, else the rank.
    pub fn describe(&self) -> String {
        match &self.blocks {
            Some(bs) if bs.is_empty() => "0".to_string(),
            Some(bs) => crate::parse::format_blocks(bs),
            None => format!("gram[{}]", self.rank()),
        }
    }
}
