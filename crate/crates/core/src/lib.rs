//! Exact polyhedral geometry, lattice/cone constructions and matrix numerics for
//! non-Abelian symplectic cuts.
//!
//! * [`rootsys`]: root data, Weyl groups, chamber faces.
//! * [`polyhedra`]: labeled rational polyhedral sets inside the Weyl chamber and the
//!   cut predicates (simple, universal, outward-positive, admissible).
//! * [`coxvinberg`]: Smith normal form, the Delzant/Cox sequence, Vinberg cones.
//! * [`matnum`]: floating-point moment maps, polar/Cartan decompositions and the
//!   randomized verification suites.

pub mod coxvinberg;
pub mod exec;
pub mod lp;
pub mod matnum;
pub mod polyhedra;
pub mod qlinalg;
pub mod rational;
pub mod rootsys;

pub use rational::Rat;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported Cartan type: {0}")]
    UnsupportedCartanType(String),
    #[error("invalid polyhedron: {0}")]
    InvalidPolyhedron(String),
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("incompatible root data")]
    IncompatibleRootData,
    #[error("polyhedron is not outward-positive: facet {facet} pairs negatively with simple root {root}")]
    NotOutwardPositive { facet: usize, root: usize },
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron is not simple")]
    NotSimple,
    #[error("dimension {0} too large for Hilbert basis enumeration (max 4)")]
    DimensionTooLarge(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("outside moment image: {0}")]
    OutsideMomentImage(String),
    #[error("singular matrix")]
    Singular,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
