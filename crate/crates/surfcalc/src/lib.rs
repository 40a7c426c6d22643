//! Exact intersection theory on iterated blow-ups of an elliptic ruled surface.
//!
//! The engine tracks divisor classes on the ruled surface
//! `S = P_C(O ⊕ O(e))` over an elliptic curve `C` and on its blow-ups,
//! entirely in exact rational arithmetic. On top of the lattice it provides:
//!
//! * contractions of negative-definite curve configurations, with
//!   intersection numbers on the singular image computed through Mumford's
//!   pullback (the unique correction orthogonal to the contracted curves);
//! * discrepancies and singularity classification for those contractions;
//! * torsion obstructions in `Pic^0` deciding whether the contracted surface
//!   is Q-Gorenstein, relative to a declared set of Q-relations;
//! * nef/big certificates, non-klt loci, and the numeric hypotheses of a
//!   basepoint-free-style semi-ampleness check;
//! * a single MMP step, cyclic-cover canonical classes, and finite-generation
//!   verdicts for canonical rings;
//! * a small scenario language (`.surf` scripts) plus built-in golden suites
//!   and a CLI that verifies them.
//!
//! All scalars are exact rationals; there is no floating point anywhere.

pub mod contraction;
pub mod cover;
pub mod dsl;
pub mod error;
pub mod exact;
pub mod exec;
pub mod picard;
pub mod positivity;
pub mod report;
pub mod scenarios;
pub mod surface;

pub use error::{EngineError, Result};
pub use exact::{is_negative_definite, solve_linear, LinearSolution, QMatrix, Rational};
