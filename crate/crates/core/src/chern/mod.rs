//! Characteristic vectors with prescribed square and prescribed pairing
//! with a class.
//!
//! Given a lattice `L`, a class `y`, a target square `h` and a genus `g`, the
//! solver looks for a characteristic `c` with `Q(c, c) = h` and
//! `Q(c, y) = 2 - 2g + Q(y, y)`. The construction:
//!
//! 1. fix a characteristic `w` and a dual partner `x` of the primitive part
//!    of `y`; `c1 = w + 2 m x` has the right pairing exactly when
//!    `g = k(y) mod d(y)`;
//! 2. find a unimodular plane `P` orthogonal to `y` (see [`crate::frame`]);
//! 3. replace the `P`-component of `c1` so that the square becomes `h`.
//!
//! Definite and rank-2 lattices are instead decided by exhaustive exact
//! enumeration, and anything else falls back to an escalating box search.
//! Every returned certificate is re-verified from scratch.

mod enumerate;
mod isotropic;
mod search;

pub use enumerate::{enumerate_characteristic, enumerate_characteristic_with, EnumOptions, Enumeration};
pub use search::{definite_solutions, line_solutions, rank2_solutions};

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::frame::{self, Plane};
use crate::lattice::{GramLattice, LatticeVector, Parity};

/// Default limit on points visited by a single bounded search.
pub const DEFAULT_WORK_LIMIT: u64 = 20_000_000;

/// Target data for a characteristic vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernConstraint {
    pub gamma: LatticeVector,
    /// Target square, `2 chi + 3 tau` for a manifold.
    pub h: i64,
    /// Target genus; any integer is accepted here.
    pub g: i64,
}

impl ChernConstraint {
    pub fn new(gamma: impl Into<LatticeVector>, h: i64, g: i64) -> Self {
        ChernConstraint { gamma: gamma.into(), h, g }
    }

    /// `t = 2 - 2g + Q(y, y)`.
    pub fn target_pairing(&self, l: &GramLattice) -> Result<i64> {
        let s = l.norm(&self.gamma)?;
        2i64.checked_sub(self.g.checked_mul(2).ok_or(Error::Overflow)?)
            .and_then(|v| v.checked_add(s))
            .ok_or(Error::Overflow)
    }
}

/// Which case of the existence argument a constraint falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `y = 0`; only `g = 1` is admissible.
    ZeroClass,
    /// Even form; the primitive part is automatically ordinary.
    EvenOrdinary,
    /// Odd form, primitive part not characteristic.
    OddOrdinary,
    /// Odd form, primitive part characteristic.
    OddCharacteristic,
}

impl Branch {
    pub fn classify(l: &GramLattice, gamma: &[i64]) -> Result<Branch> {
        l.check_dim(gamma)?;
        let gamma = LatticeVector::new(gamma.to_vec());
        if gamma.is_zero() {
            return Ok(Branch::ZeroClass);
        }
        if l.parity() == Parity::Even {
            return Ok(Branch::EvenOrdinary);
        }
        let (_, p) = primitive_part(&gamma)?;
        Ok(if l.is_characteristic(&p)? { Branch::OddCharacteristic } else { Branch::OddOrdinary })
    }
}

/// The three checks recorded on a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub characteristic: bool,
    pub square: bool,
    pub pairing: bool,
}

/// A characteristic vector verified against a [`ChernConstraint`].
///
/// The only constructor is [`CharCertificate::certify`], which recomputes
/// all three conditions, so an unverified certificate cannot exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharCertificate {
    c: LatticeVector,
    h: i64,
    pairing: i64,
    branch: Branch,
    checked: Checks,
}

impl CharCertificate {
    pub fn certify(l: &GramLattice, c: LatticeVector, cons: &ChernConstraint, branch: Branch) -> Result<Self> {
        l.check_dim(&c)?;
        let t = cons.target_pairing(l)?;
        let checked = Checks {
            characteristic: l.is_characteristic(&c)?,
            square: l.norm(&c)? == cons.h,
            pairing: l.pair(&c, &cons.gamma)? == t,
        };
        if !checked.characteristic {
            return Err(Error::CertificateRejected(format!("{c} is not characteristic")));
        }
        if !checked.square {
            return Err(Error::CertificateRejected(format!("{c} does not have square {}", cons.h)));
        }
        if !checked.pairing {
            return Err(Error::CertificateRejected(format!("{c} does not pair to {t} with the class")));
        }
        Ok(CharCertificate { c, h: cons.h, pairing: t, branch, checked })
    }

    pub fn c(&self) -> &LatticeVector {
        &self.c
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn pairing(&self) -> i64 {
        self.pairing
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn checks(&self) -> Checks {
        self.checked
    }

    pub fn record(&self) -> CertificateRecord {
        CertificateRecord { c: self.c.clone(), h: self.h, pairing: self.pairing, branch: self.branch, verified: true }
    }
}

impl Serialize for CharCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

/// Wire form of a certificate: `{c, h, pairing, branch, verified}`.
///
/// Deserializing yields only a record; [`CertificateRecord::reverify`]
/// turns it back into a certificate against a concrete lattice and class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub c: LatticeVector,
    pub h: i64,
    pub pairing: i64,
    pub branch: Branch,
    pub verified: bool,
}

impl CertificateRecord {
    pub fn reverify(&self, l: &GramLattice, gamma: &LatticeVector) -> Result<CharCertificate> {
        let s = l.norm(gamma)?;
        // pairing = 2 - 2g + s
        let twice_g = 2 + s - self.pairing;
        if twice_g.rem_euclid(2) != 0 {
            return Err(Error::CertificateRejected("pairing has the wrong parity".into()));
        }
        let cons = ChernConstraint::new(gamma.clone(), self.h, twice_g / 2);
        CharCertificate::certify(l, self.c.clone(), &cons, self.branch)
    }
}

/// Bounds for the fallback box search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub initial_bound: u64,
    pub max_bound: u64,
    pub work_limit: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { initial_bound: 8, max_bound: 64, work_limit: DEFAULT_WORK_LIMIT }
    }
}

impl SearchBudget {
    /// Escalating search up to `max_bound`, starting at `min(8, max_bound)`.
    pub fn up_to(max_bound: u64) -> Self {
        let max_bound = max_bound.max(1);
        SearchBudget { initial_bound: 8.min(max_bound), max_bound, ..Default::default() }
    }
}

/// Why no certificate can exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Infeasibility {
    /// `g` is not congruent to `k(y)` modulo `d(y)`.
    GenusCongruence,
    /// Exhaustive enumeration of a definite lattice found nothing.
    DefiniteExhausted,
    /// The rank-2 constraints have no integral characteristic solution.
    Rank2Exhausted,
    /// `gamma^perp` is definite and its exhaustive enumeration found nothing.
    LineExhausted,
    /// `gamma` is isotropic with `min(b+, b-) = 1` and the exact residue
    /// analysis found nothing.
    IsotropicExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Certified(CharCertificate),
    Infeasible(Infeasibility),
    /// Nothing found up to the box bound `bound`; not a proof.
    BudgetExhausted {
        bound: u64,
    },
}

impl SolveOutcome {
    pub fn certificate(&self) -> Option<&CharCertificate> {
        match self {
            SolveOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }

    pub fn into_certificate(self) -> Option<CharCertificate> {
        match self {
            SolveOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// `y = d p` with `d = d(y)` and `p` primitive (same signs as `y`).
pub fn primitive_part(gamma: &LatticeVector) -> Result<(u64, LatticeVector)> {
    let d = gamma.divisibility();
    if d == 0 {
        return Err(Error::ZeroVector);
    }
    let p = LatticeVector::new(gamma.iter().map(|&x| x / d as i64).collect());
    Ok((d, p))
}

/// Some `x` with `Q(x, p) = 1`, via extended gcd on `G p`.
pub fn find_dual_partner(l: &GramLattice, p: &LatticeVector) -> Result<LatticeVector> {
    l.check_dim(p)?;
    let d = p.divisibility();
    if d != 1 {
        return Err(Error::NotPrimitive(d));
    }
    let (g, w) = arith::gcd_combination(&l.dual(p)?)?;
    if g != 1 {
        return Err(Error::Degenerate);
    }
    Ok(LatticeVector::new(w))
}

/// `U^T G U = G` and `|det U| = 1`.
pub fn verify_isometry(l: &GramLattice, u: &[Vec<i64>]) -> Result<bool> {
    let n = l.rank();
    if u.len() != n || u.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: u.len() });
    }
    let det = arith::determinant(u);
    if det != num_bigint::BigInt::from(1) && det != num_bigint::BigInt::from(-1) {
        return Ok(false);
    }
    Ok(l.transform(u)? == l.gram())
}

/// Solves with the default [`SearchBudget`].
pub fn solve_chern(l: &GramLattice, cons: &ChernConstraint) -> Result<SolveOutcome> {
    solve_chern_with(l, cons, &SearchBudget::default())
}

pub fn solve_chern_with(l: &GramLattice, cons: &ChernConstraint, budget: &SearchBudget) -> Result<SolveOutcome> {
    l.check_dim(&cons.gamma)?;
    let tau = l.signature().tau();
    if (cons.h - tau).rem_euclid(8) != 0 {
        return Err(Error::SquareCongruence { h: cons.h, tau });
    }
    let branch = Branch::classify(l, &cons.gamma)?;
    let t = cons.target_pairing(l)?;
    let w = l.find_characteristic();
    let k = l.k_invariant_with(&w, &cons.gamma)?;
    if !k.contains(cons.g) {
        return Ok(SolveOutcome::Infeasible(Infeasibility::GenusCongruence));
    }

    // Characteristic vector with the right pairing.
    let c1 = if cons.gamma.is_zero() {
        w.clone()
    } else {
        let (d, p) = primitive_part(&cons.gamma)?;
        let x = find_dual_partner(l, &p)?;
        let diff = t - l.pair(&w, &cons.gamma)?;
        let two_d = 2 * d as i64;
        debug_assert_eq!(diff.rem_euclid(two_d), 0);
        &w + &x.scaled(2 * (diff / two_d))
    };

    // gamma^perp definite: no indefinite plane to split off, but the
    // solution set is finite.
    let sig = l.signature();
    let line =
        if sig.is_definite() || l.rank() < 3 { None } else { search::line_solutions(l, &cons.gamma, &c1, cons.h)? };
    if let Some(sols) = line {
        return Ok(match sols.into_iter().next() {
            Some(c) => SolveOutcome::Certified(CharCertificate::certify(l, c, cons, branch)?),
            None => SolveOutcome::Infeasible(Infeasibility::LineExhausted),
        });
    }

    if !sig.is_definite() && l.rank() >= 3 && sig.min() == 1 && !cons.gamma.is_zero() && l.norm(&cons.gamma)? == 0 {
        if let Some(found) = isotropic::isotropic_solution(l, &cons.gamma, t, cons.h, budget.work_limit)? {
            return Ok(match found {
                Some(c) => SolveOutcome::Certified(CharCertificate::certify(l, c, cons, branch)?),
                None => SolveOutcome::Infeasible(Infeasibility::IsotropicExhausted),
            });
        }
    }

    if let Some(plane) = orthogonal_plane(l, &cons.gamma, budget.work_limit)? {
        if let Some(c) = plane.fit_square(l, &c1, cons.h)? {
            return CharCertificate::certify(l, c, cons, branch).map(SolveOutcome::Certified);
        }
    }

    if sig.is_definite() {
        let sols = definite_solutions(l, &cons.gamma, t, cons.h)?;
        return Ok(match sols.into_iter().next() {
            Some(c) => SolveOutcome::Certified(CharCertificate::certify(l, c, cons, branch)?),
            None => SolveOutcome::Infeasible(Infeasibility::DefiniteExhausted),
        });
    }
    if l.rank() == 2 && !cons.gamma.is_zero() {
        let sols = rank2_solutions(l, &cons.gamma, &c1, cons.h)?;
        return Ok(match sols.into_iter().next() {
            Some(c) => SolveOutcome::Certified(CharCertificate::certify(l, c, cons, branch)?),
            None => SolveOutcome::Infeasible(Infeasibility::Rank2Exhausted),
        });
    }

    let mut bound = budget.initial_bound.max(1).min(budget.max_bound.max(1));
    let mut searched = 0;
    loop {
        match search::box_search(l, &cons.gamma, t, cons.h, &w, bound, budget.work_limit)? {
            search::BoxOutcome::Found(c) => {
                return CharCertificate::certify(l, c, cons, branch).map(SolveOutcome::Certified)
            }
            search::BoxOutcome::Exhausted => searched = bound,
            search::BoxOutcome::OverLimit => break,
        }
        if bound >= budget.max_bound {
            break;
        }
        bound = (bound * 2).min(budget.max_bound);
    }
    Ok(SolveOutcome::BudgetExhausted { bound: searched })
}

/// A unimodular plane orthogonal to `gamma`, from the structural frame or
/// by bounded search.
pub(crate) fn orthogonal_plane(l: &GramLattice, gamma: &LatticeVector, work_limit: u64) -> Result<Option<Plane>> {
    if let Some(fr) = l.frame() {
        let plane = if gamma.is_zero() {
            Plane::Hyperbolic { e: fr.e1.clone(), f: fr.f1.clone() }
        } else {
            fr.plane_orthogonal_to(l, gamma)?
        };
        if plane.is_valid(l, gamma) {
            return Ok(Some(plane));
        }
    }
    let sig = l.signature();
    if sig.is_definite() || (l.rank() == 2 && !gamma.is_zero()) {
        return Ok(None);
    }
    let plane = frame::search_plane(l, gamma, work_limit)?;
    Ok(plane.filter(|p| p.is_valid(l, gamma)))
}
