//! Pseudoholomorphic realizability of embedded surfaces in 4-manifolds.
//!
//! The crate works entirely with the intersection lattice `(H^2(M; Z)/tors, Q)`
//! of a closed oriented 4-manifold and two numbers, `b1` and the genus `g`.
//! A class `y` of genus `g` is realizable when some characteristic `c` has
//! `c^2 = 2 chi + 3 tau` and `c . y = 2 - 2g + y . y`; such a `c` is the
//! first Chern class of an almost complex structure making the surface
//! pseudoholomorphic.
//!
//! ```
//! use jcurve_core::{decide_pseudoholomorphic, parse_manifold, SurfaceClass, Verdict};
//!
//! let m = parse_manifold("S2xS2").unwrap();
//! let d = decide_pseudoholomorphic(&m, &SurfaceClass::new([1, 1], 0), 8).unwrap();
//! assert_eq!(d.verdict, Verdict::Realizable);
//! ```

pub mod arith;
pub mod chern;
pub mod error;
pub mod frame;
pub mod lattice;
pub mod manifold;
pub mod parse;
pub mod suite;

pub use chern::{
    find_dual_partner, primitive_part, solve_chern, solve_chern_with, verify_isometry, Branch, CertificateRecord,
    CharCertificate, ChernConstraint, EnumOptions, Enumeration, Infeasibility, SearchBudget, SolveOutcome,
};
pub use error::{Error, Result};
pub use lattice::{Block, GramLattice, LatticeVector, Parity, ResidueClass, Signature};
pub use manifold::{
    admits_acs, corollary_witness, decide_pseudoholomorphic, decide_pseudoholomorphic_with, definite_genus_bound,
    genus_spectrum, genus_spectrum_with, parse_manifold, stabilization_count, Decision, FourManifold, GenusInterval,
    ManifoldDescriptor, ManifoldSpec, Rule, Stabilization, SurfaceClass, Verdict,
};
pub use parse::{parse_lattice, parse_vector, LatticeSpec};

/// How data-parallel loops run. `Parallel` degrades to sequential when the
/// `parallel` feature is off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}
