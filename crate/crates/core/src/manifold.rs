//! Manifold-level bookkeeping and the realizability decision.
//!
//! A closed oriented connected 4-manifold is modelled by `b1` and the
//! intersection lattice on the free part of `H^2`. From these,
//! `chi = 2 - 2 b1 + b2`, `tau = b+ - b-` and `h = 2 chi + 3 tau`, the square
//! that the first Chern class of every almost complex structure must have.
//!
//! [`decide_pseudoholomorphic`] answers whether a genus-`g` surface in a
//! class can be made pseudoholomorphic. A certificate `c` (characteristic,
//! `c^2 = h`, `c . y = 2 - 2g + y . y`) is sufficient; the obstructions
//! used are the parity of `b1 + b+`, the congruence `g = k(y) mod d(y)`,
//! exhaustive enumeration on definite and rank-2 lattices, and the
//! rational bound available when `b- = 1` (or `b+ = 1`) and `y` lies on the
//! one-dimensional side.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chern::{self, CharCertificate, ChernConstraint, Infeasibility, SearchBudget, SolveOutcome};
use crate::error::{Error, Result};
use crate::lattice::{Block, GramLattice, LatticeVector, Signature};
use crate::parse::{self, LatticeSpec};
use crate::Execution;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourManifold {
    pub b1: u64,
    pub lattice: GramLattice,
    pub name: Option<String>,
}

impl FourManifold {
    pub fn new(b1: u64, lattice: GramLattice) -> Self {
        FourManifold { b1, lattice, name: None }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Like [`new`](Self::new) but cross-checks a supplied Euler characteristic.
    pub fn with_euler(b1: u64, lattice: GramLattice, chi: i64) -> Result<Self> {
        let m = FourManifold::new(b1, lattice);
        if m.euler() != chi {
            return Err(Error::Precondition(format!(
                "euler characteristic {chi} disagrees with 2 - 2*b1 + b2 = {}",
                m.euler()
            )));
        }
        Ok(m)
    }

    pub fn b2(&self) -> usize {
        self.lattice.rank()
    }

    pub fn signature(&self) -> Signature {
        self.lattice.signature()
    }

    pub fn euler(&self) -> i64 {
        2 - 2 * self.b1 as i64 + self.b2() as i64
    }

    pub fn tau(&self) -> i64 {
        self.signature().tau()
    }

    /// `h = 2 chi + 3 tau`.
    pub fn chern_number_target(&self) -> i64 {
        2 * self.euler() + 3 * self.tau()
    }

    /// `b1 + b+` is odd; equivalent to `h = tau mod 8`.
    pub fn acs_parity_ok(&self) -> bool {
        (self.b1 + self.signature().b_plus as u64) % 2 == 1
    }

    /// Connected sum with `k` copies of `S^1 x S^3`.
    pub fn stabilized(&self, k: u64) -> FourManifold {
        let name = self.name.as_ref().map(|n| if k == 0 { n.clone() } else { format!("{n}#{k}(S1xS3)") });
        FourManifold { b1: self.b1 + k, lattice: self.lattice.clone(), name }
    }

    pub fn descriptor(&self) -> ManifoldDescriptor {
        let sig = self.signature();
        ManifoldDescriptor {
            name: self.name.clone(),
            b1: self.b1,
            lattice: LatticeSpec::of(&self.lattice),
            b2: self.b2(),
            b_plus: sig.b_plus,
            b_minus: sig.b_minus,
            chi: self.euler(),
            tau: self.tau(),
            h: self.chern_number_target(),
        }
    }
}

/// Input document `{"b1": int, "lattice": <spec>, "name": str?, "chi": int?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub b1: u64,
    pub lattice: LatticeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
}

impl ManifoldSpec {
    pub fn build(&self) -> Result<FourManifold> {
        let lattice = self.lattice.build()?;
        let m = match self.chi {
            Some(chi) => FourManifold::with_euler(self.b1, lattice, chi)?,
            None => FourManifold::new(self.b1, lattice),
        };
        Ok(match &self.name {
            Some(n) => m.named(n.clone()),
            None => m,
        })
    }
}

/// Output summary of a manifold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    pub name: Option<String>,
    pub b1: u64,
    pub lattice: LatticeSpec,
    pub b2: usize,
    pub b_plus: usize,
    pub b_minus: usize,
    pub chi: i64,
    pub tau: i64,
    pub h: i64,
}

/// Parses a manifold: a JSON [`ManifoldSpec`], a `#`-separated connected
/// sum of named pieces (`S2xS2`, `CP2`, `CP2bar`, `S1xS3`, `S4`, `K3`, each
/// with an optional multiplier, e.g. `CP2#3CP2bar#2(S1xS3)`), an alias
/// `rational-surface:<k>` for `CP2#kCP2bar` or `rational-surface:S2xS2`, or
/// a bare lattice spec (taken with `b1 = 0`).
pub fn parse_manifold(s: &str) -> Result<FourManifold> {
    let t = s.trim();
    if t.starts_with('{') {
        let spec: ManifoldSpec = serde_json::from_str(t).map_err(|e| Error::Parse(format!("manifold JSON: {e}")))?;
        return spec.build();
    }
    if let Some(rest) = t.strip_prefix("rational-surface:") {
        let expanded = if rest == "S2xS2" {
            "S2xS2".to_string()
        } else {
            let k: usize = rest.parse().map_err(|_| Error::Parse(format!("bad rational surface index `{rest}`")))?;
            if k == 0 {
                "CP2".to_string()
            } else {
                format!("CP2#{k}CP2bar")
            }
        };
        return parse_manifold(&expanded).map(|m| m.named(t));
    }
    if let Some(m) = parse_connected_sum(t) {
        return Ok(m.named(t));
    }
    parse::parse_lattice(t)
        .map(|l| FourManifold::new(0, l).named(t))
        .map_err(|e| Error::Parse(format!("`{t}` is neither a known manifold nor a lattice spec ({e})")))
}

fn parse_connected_sum(s: &str) -> Option<FourManifold> {
    let mut b1 = 0u64;
    let mut blocks: Vec<Block> = Vec::new();
    for part in s.split('#') {
        let digits: String = part.chars().take_while(|c| c.is_ascii_digit()).collect();
        let k: usize = if digits.is_empty() { 1 } else { digits.parse().ok()? };
        let piece = part[digits.len()..].trim_start_matches('(').trim_end_matches(')');
        let (pb1, pblocks): (u64, Vec<Block>) = match piece {
            "S2xS2" => (0, vec![Block::H]),
            "CP2" => (0, vec![Block::Plus1]),
            "CP2bar" => (0, vec![Block::Minus1]),
            "S1xS3" => (1, vec![]),
            "S4" => (0, vec![]),
            "K3" => (0, vec![Block::H, Block::H, Block::H, Block::MinusE8, Block::MinusE8]),
            _ => return None,
        };
        b1 += pb1 * k as u64;
        for _ in 0..k {
            blocks.extend_from_slice(&pblocks);
        }
    }
    let lattice = GramLattice::from_blocks(&blocks).ok()?;
    Some(FourManifold::new(b1, lattice))
}

/// A surface: homology class and genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub gamma: LatticeVector,
    pub genus: u64,
}

impl SurfaceClass {
    pub fn new(gamma: impl Into<LatticeVector>, genus: u64) -> Self {
        SurfaceClass { gamma: gamma.into(), genus }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Realizable,
    NotRealizable,
    Unknown,
}

/// What decided a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Strictly indefinite case: realizable iff `g = k(y) mod d(y)`; also
    /// tags the necessity of that congruence elsewhere.
    Theorem1,
    /// Exhaustive solution of the rank-2 constraints.
    Rank2Complete,
    /// Exhaustive enumeration on a definite lattice.
    DefiniteBound,
    /// `b1 + b+` is even: no almost complex structure at all.
    ParityFail,
    /// `b- = 1` and `y^2 < 0` (or the mirror): `y^perp` is definite, so `h`
    /// must clear the rational bound and the remaining candidates are finite.
    BminusOneBound,
    /// Certificate found by search outside the cases above.
    CertificateSearch,
    /// Search budget exhausted without an answer.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub certificate: Option<CharCertificate>,
    pub rule: Rule,
    pub bound_used: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Decision {
    fn realizable(cert: CharCertificate, rule: Rule) -> Self {
        Decision { verdict: Verdict::Realizable, certificate: Some(cert), rule, bound_used: None, notes: Vec::new() }
    }

    fn not_realizable(rule: Rule) -> Self {
        Decision { verdict: Verdict::NotRealizable, certificate: None, rule, bound_used: None, notes: Vec::new() }
    }

    fn unknown(bound: u64) -> Self {
        Decision {
            verdict: Verdict::Unknown,
            certificate: None,
            rule: Rule::BudgetExhausted,
            bound_used: Some(bound),
            notes: Vec::new(),
        }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn is_realizable(&self) -> bool {
        self.verdict == Verdict::Realizable
    }
}

/// A characteristic `c` with `c^2 = h`, i.e. the first Chern class of an
/// almost complex structure, when one is found.
pub fn admits_acs(m: &FourManifold) -> Result<Option<CharCertificate>> {
    if !m.acs_parity_ok() {
        return Ok(None);
    }
    let cons = ChernConstraint::new(LatticeVector::zero(m.b2()), m.chern_number_target(), 1);
    Ok(chern::solve_chern(&m.lattice, &cons)?.into_certificate())
}

/// Decides whether the surface can be pseudoholomorphic for some almost
/// complex structure. `budget` is the largest box bound used by fallback
/// searches.
pub fn decide_pseudoholomorphic(m: &FourManifold, s: &SurfaceClass, budget: u64) -> Result<Decision> {
    decide_pseudoholomorphic_with(m, s, &SearchBudget::up_to(budget))
}

pub fn decide_pseudoholomorphic_with(m: &FourManifold, s: &SurfaceClass, search: &SearchBudget) -> Result<Decision> {
    let l = &m.lattice;
    l.check_dim(&s.gamma)?;
    if !m.acs_parity_ok() {
        return Ok(Decision::not_realizable(Rule::ParityFail));
    }
    let h = m.chern_number_target();
    let genus = i64::try_from(s.genus).map_err(|_| Error::Overflow)?;
    let cons = ChernConstraint::new(s.gamma.clone(), h, genus);
    let t = cons.target_pairing(l)?;
    let square = l.norm(&s.gamma)?;
    let k = l.k_invariant(&s.gamma)?;
    let sig = l.signature();
    let zero_note = |d: Decision| {
        if s.gamma.is_zero() {
            d.note("zero class: the congruence is integer equality, only genus 1 is admissible")
        } else {
            d
        }
    };

    if sig.min() >= 2 {
        if !k.contains(genus) {
            return Ok(zero_note(Decision::not_realizable(Rule::Theorem1)));
        }
        return Ok(zero_note(match chern::solve_chern_with(l, &cons, search)? {
            SolveOutcome::Certified(c) => Decision::realizable(c, Rule::Theorem1),
            SolveOutcome::BudgetExhausted { bound } => Decision::unknown(bound)
                .note("congruence holds, so a certificate exists, but none was constructed within budget"),
            SolveOutcome::Infeasible(_) => Decision::not_realizable(Rule::Theorem1),
        }));
    }

    if sig.is_definite() || l.rank() <= 2 {
        let rule = if sig.is_definite() { Rule::DefiniteBound } else { Rule::Rank2Complete };
        if sig.is_definite() && square != 0 {
            let interval = definite_genus_bound(m, &s.gamma)?;
            if !interval.is_some_and(|iv| iv.contains(s.genus)) {
                return Ok(Decision::not_realizable(rule));
            }
        }
        return Ok(zero_note(match chern::solve_chern_with(l, &cons, search)? {
            SolveOutcome::Certified(c) => Decision::realizable(c, rule),
            SolveOutcome::Infeasible(_) => Decision::not_realizable(rule),
            SolveOutcome::BudgetExhausted { bound } => Decision::unknown(bound),
        }));
    }

    // min(b+, b-) = 1 and rank >= 3.
    if !k.contains(genus) {
        return Ok(zero_note(Decision::not_realizable(Rule::Theorem1)));
    }
    if violates_line_bound(sig, square, t, h) {
        return Ok(Decision::not_realizable(Rule::BminusOneBound));
    }
    Ok(zero_note(match chern::solve_chern_with(l, &cons, search)? {
        SolveOutcome::Certified(c) => Decision::realizable(c, Rule::CertificateSearch),
        SolveOutcome::Infeasible(Infeasibility::LineExhausted | Infeasibility::IsotropicExhausted) => {
            Decision::not_realizable(Rule::BminusOneBound)
        }
        SolveOutcome::Infeasible(_) => Decision::not_realizable(Rule::Theorem1),
        SolveOutcome::BudgetExhausted { bound } => Decision::unknown(bound),
    }))
}

/// With `b- = 1` and `y^2 < 0`, the orthogonal complement of `y` is positive
/// definite, so `c^2 >= (c.y)^2 / y^2 = -t^2/|y^2|`; mirrored for `b+ = 1`,
/// `y^2 > 0`. Compared exactly after clearing the denominator.
fn violates_line_bound(sig: Signature, square: i64, t: i64, h: i64) -> bool {
    let (s, t, h) = (square as i128, t as i128, h as i128);
    if sig.b_minus == 1 && s < 0 {
        h * -s < -(t * t)
    } else if sig.b_plus == 1 && s > 0 {
        h * s > t * t
    } else {
        false
    }
}

/// Decisions for every genus in `0..=g_max`.
pub fn genus_spectrum(
    m: &FourManifold,
    gamma: &LatticeVector,
    g_max: u64,
    budget: u64,
) -> Result<BTreeMap<u64, Decision>> {
    genus_spectrum_with(m, gamma, g_max, &SearchBudget::up_to(budget), Execution::default())
}

pub fn genus_spectrum_with(
    m: &FourManifold,
    gamma: &LatticeVector,
    g_max: u64,
    search: &SearchBudget,
    exec: Execution,
) -> Result<BTreeMap<u64, Decision>> {
    m.lattice.check_dim(gamma)?;
    let decide =
        |g: u64| decide_pseudoholomorphic_with(m, &SurfaceClass::new(gamma.clone(), g), search).map(|d| (g, d));
    let genera: Vec<u64> = (0..=g_max).collect();
    let rows: Vec<Result<(u64, Decision)>> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            genera.par_iter().map(|&g| decide(g)).collect()
        }
        _ => genera.iter().map(|&g| decide(g)).collect(),
    };
    rows.into_iter().collect()
}

/// Smallest `g' >= genus + m` with `g' = k(y) mod d(y)`.
pub fn corollary_witness(mf: &FourManifold, s: &SurfaceClass, m: u64) -> Result<u64> {
    if mf.signature().min() < 2 {
        return Err(Error::Precondition("corollary_witness needs min(b+, b-) >= 2".into()));
    }
    if !mf.acs_parity_ok() {
        return Err(Error::Precondition("corollary_witness needs b1 + b+ odd".into()));
    }
    let d = s.gamma.divisibility();
    if d == 0 {
        return Err(Error::Precondition("corollary_witness needs a class that is not torsion".into()));
    }
    let k = mf.lattice.k_invariant(&s.gamma)?;
    let base = s.genus + m;
    let delta = (k.value() - (base % d) as i64).rem_euclid(d as i64) as u64;
    Ok(base + delta)
}

/// Closed integer interval of genera, `lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusInterval {
    pub lo: u64,
    pub hi: u64,
}

impl GenusInterval {
    pub fn contains(&self, g: u64) -> bool {
        self.lo <= g && g <= self.hi
    }
}

/// Genera `g >= 0` with `(2 - 2g + y^2)^2 <= y^2 * h` on a definite lattice
/// (Cauchy-Schwarz against a class of square `h`); `None` when empty.
pub fn definite_genus_bound(m: &FourManifold, gamma: &LatticeVector) -> Result<Option<GenusInterval>> {
    let l = &m.lattice;
    if !l.signature().is_definite() {
        return Err(Error::Precondition("definite_genus_bound needs a definite lattice".into()));
    }
    let s = l.norm(gamma)? as i128;
    if s == 0 {
        return Err(Error::Precondition("definite_genus_bound needs a class with nonzero square".into()));
    }
    let rhs = s * m.chern_number_target() as i128;
    if rhs < 0 {
        return Ok(None);
    }
    let r = crate::arith::isqrt_floor(rhs);
    // |2 + s - 2g| <= r
    let lo = (2 + s - r).div_euclid(2) + i128::from((2 + s - r).rem_euclid(2) != 0);
    let hi = (2 + s + r).div_euclid(2);
    let lo = lo.max(0);
    if hi < lo {
        return Ok(None);
    }
    Ok(Some(GenusInterval { lo: lo as u64, hi: hi as u64 }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub k: u64,
    pub manifold: FourManifold,
}

/// Minimal `k` such that `M0 # k(S^1 x S^3)` has `b1 + b+` odd and
/// `h < -(2 - 2g + y^2)^2 / |y^2|`.
pub fn stabilization_count(m0: &FourManifold, s: &SurfaceClass) -> Result<Stabilization> {
    let l = &m0.lattice;
    let sig = l.signature();
    if sig.b_minus != 1 || sig.b_plus < 2 {
        return Err(Error::Precondition("stabilization_count needs b- = 1 and b+ >= 2".into()));
    }
    let square = l.norm(&s.gamma)?;
    if square >= 0 {
        return Err(Error::Precondition("stabilization_count needs a class with negative square".into()));
    }
    if s.gamma.divisibility() != 1 {
        return Err(Error::Precondition("stabilization_count needs a primitive class".into()));
    }
    let a = -(square as i128);
    let t = 2 - 2 * s.genus as i128 + square as i128;
    let h0 = m0.chern_number_target() as i128;
    // (h0 - 4k) * a < -t^2  <=>  4 a k > h0 a + t^2
    let num = h0 * a + t * t;
    let mut k = if num < 0 { 0 } else { num.div_euclid(4 * a) + 1 };
    if (m0.b1 as i128 + k + sig.b_plus as i128) % 2 == 0 {
        k += 1;
    }
    let k = u64::try_from(k).map_err(|_| Error::Overflow)?;
    Ok(Stabilization { k, manifold: m0.stabilized(k) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ResidueClass;

    fn s2xs2() -> FourManifold {
        parse_manifold("S2xS2").unwrap()
    }

    #[test]
    fn chern_targets() {
        assert_eq!(s2xs2().chern_number_target(), 8);
        assert_eq!(parse_manifold("CP2").unwrap().chern_number_target(), 9);
        for k in 0..6 {
            let m = parse_manifold(&format!("rational-surface:{k}")).unwrap();
            assert_eq!(m.chern_number_target(), 9 - k as i64);
        }
    }

    #[test]
    fn parity_examples() {
        assert!(parse_manifold("CP2").unwrap().acs_parity_ok());
        assert!(!parse_manifold("2S2xS2").unwrap().acs_parity_ok());
        let m = FourManifold::new(7, GramLattice::diagonal(2, 1));
        assert!(m.acs_parity_ok());
    }

    #[test]
    fn admits_acs_examples() {
        let c = admits_acs(&parse_manifold("CP2").unwrap()).unwrap().unwrap();
        assert_eq!(c.c().coords()[0].abs(), 3);
        let c = admits_acs(&s2xs2()).unwrap().unwrap();
        let v = c.c().coords();
        assert!(v == [2, 2] || v == [-2, -2], "{v:?}");
        assert!(admits_acs(&parse_manifold("2S2xS2").unwrap()).unwrap().is_none());
        assert!(admits_acs(&parse_manifold("K3").unwrap()).unwrap().is_some());
    }

    #[test]
    fn decide_examples() {
        let d = decide_pseudoholomorphic(&s2xs2(), &SurfaceClass::new([1, 1], 1), 8).unwrap();
        assert_eq!((d.verdict, d.rule), (Verdict::NotRealizable, Rule::Rank2Complete));
        let cp2 = parse_manifold("CP2").unwrap();
        let d = decide_pseudoholomorphic(&cp2, &SurfaceClass::new([-1], 3), 8).unwrap();
        assert_eq!(d.verdict, Verdict::Realizable);
        assert_eq!(d.certificate.unwrap().c().coords(), &[3]);
        let m = parse_manifold("CP2#CP2bar").unwrap();
        let d = decide_pseudoholomorphic(&m, &SurfaceClass::new([1, 0], 1), 8).unwrap();
        assert_eq!((d.verdict, d.rule), (Verdict::NotRealizable, Rule::Rank2Complete));
    }

    #[test]
    fn spectra() {
        let real = |m: &FourManifold, g: &[i64], gmax| -> Vec<u64> {
            genus_spectrum(m, &LatticeVector::new(g.to_vec()), gmax, 8)
                .unwrap()
                .into_iter()
                .filter(|(_, d)| d.is_realizable())
                .map(|(g, _)| g)
                .collect()
        };
        assert_eq!(real(&s2xs2(), &[1, 1], 6), vec![0, 4]);
        assert_eq!(real(&parse_manifold("CP2#CP2bar").unwrap(), &[1, 0], 5), vec![0, 3]);
        let m = parse_manifold("2S2xS2#CP2").unwrap();
        let gamma = [2, 2, 0, 0, 0];
        let k = m.lattice.k_invariant(&gamma).unwrap();
        assert_eq!(k, ResidueClass::new(2, 1));
        assert_eq!(real(&m, &gamma, 9), vec![1, 3, 5, 7, 9]);
    }

    #[test]
    fn corollary_examples() {
        let m = FourManifold::new(1, parse::parse_lattice("2H").unwrap());
        assert_eq!(corollary_witness(&m, &SurfaceClass::new([1, 0, 0, 0], 2), 5).unwrap(), 7);
        assert_eq!(corollary_witness(&m, &SurfaceClass::new([2, 2, 0, 0], 1), 3).unwrap(), 5);
        assert_eq!(corollary_witness(&m, &SurfaceClass::new([2, 2, 0, 0], 3), 0).unwrap(), 3);
        assert!(corollary_witness(&m, &SurfaceClass::new([0, 0, 0, 0], 1), 1).is_err());
        assert!(corollary_witness(&s2xs2(), &SurfaceClass::new([1, 0], 1), 1).is_err());
    }

    #[test]
    fn definite_bounds() {
        let cp2 = parse_manifold("CP2").unwrap();
        let b = definite_genus_bound(&cp2, &LatticeVector::from([1])).unwrap();
        assert_eq!(b, Some(GenusInterval { lo: 0, hi: 3 }));
        let b = definite_genus_bound(&cp2, &LatticeVector::from([2])).unwrap();
        assert_eq!(b, Some(GenusInterval { lo: 0, hi: 6 }));
        // Positive definite with h < 0.
        let m = FourManifold::new(20, GramLattice::diagonal(9, 0));
        assert!(m.chern_number_target() < 0);
        assert_eq!(definite_genus_bound(&m, &LatticeVector::basis(9, 0)).unwrap(), None);
        assert!(definite_genus_bound(&s2xs2(), &LatticeVector::from([1, 0])).is_err());
        assert!(definite_genus_bound(&cp2, &LatticeVector::from([0])).is_err());
    }

    #[test]
    fn stabilization_examples() {
        let m0 = FourManifold::new(0, GramLattice::diagonal(2, 1));
        assert_eq!((m0.euler(), m0.tau(), m0.chern_number_target()), (5, 1, 13));
        let st = stabilization_count(&m0, &SurfaceClass::new([0, 0, 1], 2)).unwrap();
        assert_eq!(st.k, 7);
        let d = decide_pseudoholomorphic(&st.manifold, &SurfaceClass::new([0, 0, 1], 2), 8).unwrap();
        assert_eq!((d.verdict, d.rule), (Verdict::NotRealizable, Rule::BminusOneBound));
        let st = stabilization_count(&m0, &SurfaceClass::new([0, 0, 1], 0)).unwrap();
        assert_eq!(st.k, 5);
        assert!(stabilization_count(&m0, &SurfaceClass::new([1, 0, 0], 0)).is_err());
        assert!(stabilization_count(&s2xs2(), &SurfaceClass::new([1, -1], 0)).is_err());
    }

    #[test]
    fn manifold_parsing() {
        let m = parse_manifold("CP2#3CP2bar#2(S1xS3)").unwrap();
        assert_eq!((m.b1, m.b2(), m.tau()), (2, 4, -2));
        let m = parse_manifold(r#"{"b1": 1, "lattice": "2H", "name": "T"}"#).unwrap();
        assert_eq!((m.b1, m.b2(), m.name.as_deref()), (1, 4, Some("T")));
        let m = parse_manifold(r#"{"b1": 0, "lattice": {"gram": [[1]]}, "chi": 3}"#).unwrap();
        assert_eq!(m.chern_number_target(), 9);
        assert!(parse_manifold(r#"{"b1": 0, "lattice": "<1>", "chi": 4}"#).is_err());
        assert_eq!(parse_manifold("2H+<1>").unwrap().b2(), 5);
        assert!(parse_manifold("T4").is_err());
        assert_eq!(parse_manifold("K3").unwrap().signature(), Signature { b_plus: 3, b_minus: 19 });
    }
}
