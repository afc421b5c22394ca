//! Exact-arithmetic invariants of torus knots and certified bounds on the
//! nonorientable 4-ball genus, smooth and topological.
//!
//! The crate is organized by invariant family:
//!
//! - [`arith`]: integer and number-theoretic primitives (everything exact)
//! - [`torusknot`]: the knot type, Alexander polynomial, semigroup, stretch,
//!   and the pinch-move calculus
//! - [`classical`]: signature, Arf, and the Yasuhara parity obstruction
//! - [`floer`]: staircase complexes over F2[U] with involution, mapping-cone
//!   homology, and the upsilon invariants υ, ῡ, ῡ̲
//! - [`linkform`]: Goeritz matrices and the linking form of the double
//!   branched cover
//! - [`topobstruct`]: quadratic-residue obstructions to locally flat Möbius
//!   bands and the density experiment
//! - [`bounds`]: aggregation of all certificates into intervals for γ₄

pub mod arith;
pub mod bounds;
pub mod classical;
pub mod f2;
pub mod floer;
pub mod linkform;
pub mod topobstruct;
pub mod torusknot;

pub use bounds::{BoundCertificate, BoundReport, Direction, Interval};
pub use classical::ClassicalRecord;
pub use floer::{CfkComplex, HfkiSummary, Involution};
pub use linkform::{GoeritzData, LinkingFormValue};
pub use topobstruct::{DensityReport, ObstructionResidues, TopVerdict};
pub use torusknot::{LaurentPoly, PinchSign, PinchStep, Semigroup, Stretch, StretchCf, TorusKnot};
