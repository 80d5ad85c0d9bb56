//! Qualitative spatial and temporal constraint reasoning.
//!
//! The crate is organised bottom-up:
//!
//! * [`relation`], [`calculus`]: atom-set relations and calculi as finite
//!   relation algebras, with axiom verification.
//! * [`calculi`]: PA, IA, RCC5, RCC8 and the product calculi CRA and RA.
//! * [`subalgebra`]: closures, Helly and distributivity tests, and the
//!   enumeration of maximal distributive subalgebras.
//! * [`network`]: constraint networks, path consistency, scenario
//!   extraction, brute-force oracles and realization.
//! * [`sparse`]: triangulation, partial path consistency, variable
//!   elimination and a benchmark harness.
//! * [`cli`]: the `qstr` command line.

pub mod calculi;
pub mod calculus;
pub mod cli;
pub mod error;
pub mod network;
pub mod relation;
pub mod relset;
pub mod sparse;
pub mod subalgebra;

pub use calculus::{Calculus, CngOrder, SetOp, ValidationReport};
pub use error::{Error, Result};
pub use relation::{AtomId, Relation};
pub use relset::RelationSet;
